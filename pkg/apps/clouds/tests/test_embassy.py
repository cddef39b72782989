import random
from dataclasses import replace

from django.conf import settings
from django.test import TestCase

from clouds.exceptions import CloudError
from clouds.models import Application, Blob, Notification
from clouds.types import NotificationKind
from passport.exceptions import CloudPassError
from passport.models import DeviceVisa
from passport.tests.factory import DeviceFactory
from passport.types import TRACKING_ID_RE, PageContent, TrackingKind
from passport.utils import content_hash
from qrlink.exceptions import QrError
from qrlink.payload import parse_payload_text
from qrlink.tokens import ResourceKind, resolve_link_token, token_from_qr

from .factory import VISA_BYTES, EmbassyCloudFactory, issue_passport, issue_visa


class CloudTestCase(TestCase):

    def setUp(self):
        self.ministry = EmbassyCloudFactory(authority_id='IN-MEA', country='IN')
        self.embassy = EmbassyCloudFactory(authority_id='US-EMB', country='US')

    def assertCode(self, code, call, *args, **kwargs):
        with self.assertRaises(CloudPassError) as cm:
            call(*args, **kwargs)
        self.assertEqual(cm.exception.code, code)
        return cm.exception


class TestApplications(CloudTestCase):

    def test_submit_is_tracked(self):
        tracking = self.ministry.submit_application(
            'alice@example.com', TrackingKind.PASSPORT_APPLICATION, random.Random(5))
        self.assertRegex(tracking.value, TRACKING_ID_RE)
        self.assertEqual(tracking.kind, TrackingKind.PASSPORT_APPLICATION)
        self.assertEqual(
            self.ministry.track_application(tracking.value), Application.Status.SUBMITTED)

    def test_unknown_id(self):
        self.assertCode('NOT_FOUND', self.ministry.track_application, 'NOPE00000000')

    def test_submissions_get_distinct_ids(self):
        rng = random.Random(5)
        ids = {self.ministry.submit_application(
            f'user{n}@example.com', TrackingKind.PASSPORT_APPLICATION, rng).value
            for n in range(20)}
        self.assertEqual(len(ids), 20)

    def test_same_seed_collision_redraws(self):
        first = self.ministry.submit_application(
            'a@example.com', TrackingKind.VISA_APPLICATION, random.Random(9))
        second = self.ministry.submit_application(
            'b@example.com', TrackingKind.VISA_APPLICATION, random.Random(9))
        self.assertNotEqual(first.value, second.value)

    def test_unknown_kind(self):
        self.assertCode(
            'UNKNOWN_APPLICATION_KIND', self.ministry.submit_application,
            'a@example.com', 'DRIVING_LICENCE', random.Random(1))


class TestApprovals(CloudTestCase):

    def test_approve_passport(self):
        notification = issue_passport(self.ministry)
        self.assertEqual(notification.kind, NotificationKind.PASSPORT_READY)
        self.assertEqual(notification.recipient, 'alice@example.com')
        self.assertTrue(notification.link.startswith(settings.CLOUDPASS_DOMAIN))
        self.assertIn(notification.token, notification.link)
        record = self.ministry.passports.get()
        self.assertEqual(record.passport.issuing_authority, 'IN-MEA')
        self.assertEqual(len(record.passport.pages), settings.PASSPORT_PAGE_COUNT)
        application = self.ministry.applications.get()
        self.assertEqual(application.status, Application.Status.APPROVED)
        self.assertEqual(application.resource_id, 'P1234567')

    def test_approve_visa_stores_blob_by_hash(self):
        notification = issue_visa(self.embassy)
        visa = self.embassy.visas.get()
        self.assertEqual(visa.image_hash, content_hash(VISA_BYTES))
        blob = self.embassy.blobs.get(content_hash=content_hash(VISA_BYTES))
        self.assertEqual(bytes(blob.data), VISA_BYTES)
        self.assertEqual(visa.issuing_country.code, 'US')
        self.assertTrue(visa.visa_id.startswith('V'))
        self.assertEqual(notification.kind, NotificationKind.VISA_READY)

    def test_approve_twice(self):
        tracking = self.ministry.submit_application(
            'alice@example.com', TrackingKind.PASSPORT_APPLICATION, random.Random(1))
        self.ministry.approve_passport(tracking.value, 'P1234567', 'Alice Rao', 'IN', 0, 3650)
        self.assertCode(
            'ALREADY_APPROVED', self.ministry.approve_passport,
            tracking.value, 'P7654321', 'Alice Rao', 'IN', 0, 3650)
        self.assertEqual(self.ministry.passports.count(), 1)

    def test_unknown_tracking_id(self):
        self.assertCode(
            'UNKNOWN_TRACKING_ID', self.embassy.approve_visa,
            'NOPE00000000', 'P1234567', 'US', 0, 365, VISA_BYTES)

    def test_wrong_kind(self):
        tracking = self.embassy.submit_application(
            'alice@example.com', TrackingKind.PASSPORT_APPLICATION, random.Random(1))
        self.assertCode(
            'WRONG_APPLICATION_KIND', self.embassy.approve_visa,
            tracking.value, 'P1234567', 'US', 0, 365, VISA_BYTES)

    def test_invalid_artifact_rolls_back(self):
        tracking = self.embassy.submit_application(
            'alice@example.com', TrackingKind.VISA_APPLICATION, random.Random(1))
        self.assertCode(
            'INVALID_ARTIFACT', self.embassy.approve_visa,
            tracking.value, 'P1234567', 'US', 365, 0, VISA_BYTES)
        self.assertFalse(Blob.objects.exists())
        self.assertEqual(
            self.embassy.track_application(tracking.value), Application.Status.SUBMITTED)

    def test_notification_tokens_resolve(self):
        issue_passport(self.ministry)
        issue_visa(self.embassy)
        for notification in Notification.objects.select_related('cloud'):
            token = notification.link_token
            self.assertIsNotNone(
                resolve_link_token(token, notification.cloud))
        visa_ready = self.embassy.notifications.get()
        from_qr = token_from_qr(parse_payload_text(visa_ready.qr_text))
        self.assertEqual(from_qr, visa_ready.link_token)
        self.assertEqual(from_qr.resource_kind, ResourceKind.VISA_IMAGE)


class TestDownloads(CloudTestCase):

    def setUp(self):
        super().setUp()
        self.passport_mail = issue_passport(self.ministry)
        self.visa_mail = issue_visa(self.embassy)
        self.device = DeviceFactory()

    def test_install_binds(self):
        self.ministry.download_passport_app(self.passport_mail.token, self.device)
        self.device.refresh_from_db()
        self.assertEqual(self.device.passport.passport_no, 'P1234567')
        self.assertEqual(self.device.passport.bound_device, self.device.device_id)
        self.assertEqual(self.ministry.passports.get().bound_device, self.device.device_id)

    def test_second_device_refused(self):
        self.ministry.download_passport_app(self.passport_mail.token, self.device)
        other = DeviceFactory()
        self.assertCode(
            'DEVICE_ALREADY_BOUND', self.ministry.download_passport_app,
            self.passport_mail.token, other)
        self.assertFalse(other.has_passport)

    def test_reinstall_on_same_device(self):
        self.ministry.download_passport_app(self.passport_mail.token, self.device)
        self.embassy.download_visa_image(self.visa_mail.token, self.device, 3)
        self.ministry.download_passport_app(self.passport_mail.token, self.device)
        self.device.refresh_from_db()
        self.assertEqual(self.device.passport.page(3).content, PageContent.VISA_SLOT)

    def test_unbind_allows_new_device(self):
        self.ministry.download_passport_app(self.passport_mail.token, self.device)
        self.ministry.unbind_passport('P1234567')
        other = DeviceFactory()
        self.ministry.download_passport_app(self.passport_mail.token, other)
        other.refresh_from_db()
        self.assertEqual(other.passport.bound_device, other.device_id)

    def test_tampered_token(self):
        forged = replace(self.passport_mail.link_token, resource_id='P7654321')
        self.assertCode(
            'BAD_SIGNATURE', self.ministry.download_passport_app, forged, self.device)

    def test_token_from_another_authority(self):
        self.assertCode(
            'BAD_SIGNATURE', self.embassy.download_passport_app,
            self.passport_mail.token, self.device)

    def test_malformed_token(self):
        with self.assertRaises(QrError) as cm:
            self.ministry.download_passport_app('zz', self.device)
        self.assertEqual(cm.exception.code, 'MALFORMED_TOKEN')

    def test_wrong_resource_kind(self):
        self.ministry.download_passport_app(self.passport_mail.token, self.device)
        self.assertCode(
            'WRONG_RESOURCE_KIND', self.embassy.download_passport_app,
            self.visa_mail.token, self.device)

    def test_visa_to_page_three(self):
        self.ministry.download_passport_app(self.passport_mail.token, self.device)
        self.embassy.download_visa_image(self.visa_mail.token, self.device, 3)
        self.device.refresh_from_db()
        visa_id = self.visa_mail.link_token.resource_id
        page = self.device.passport.page(3)
        self.assertEqual((page.content, page.visa_id), (PageContent.VISA_SLOT, visa_id))
        image = self.device.visa_image(visa_id)
        self.assertEqual(image.content_hash, self.embassy.blobs.get().content_hash)
        self.assertEqual(image.data, VISA_BYTES)
        self.assertEqual(self.device.presented_visa_id, visa_id)

    def test_occupied_page_rolls_back(self):
        self.ministry.download_passport_app(self.passport_mail.token, self.device)
        second_mail = issue_visa(self.embassy, rng=random.Random(3), image=b'\x01' * 256)
        self.embassy.download_visa_image(self.visa_mail.token, self.device, 3)
        self.assertCode(
            'PAGE_OCCUPIED', self.embassy.download_visa_image,
            second_mail.token, self.device, 3)
        self.assertFalse(DeviceVisa.objects.filter(
            visa_id=second_mail.link_token.resource_id).exists())

    def test_visa_without_passport(self):
        self.assertCode(
            'NO_PASSPORT', self.embassy.download_visa_image,
            self.visa_mail.token, self.device, 3)

    def test_visa_for_another_passport(self):
        other_mail = issue_visa(self.embassy, rng=random.Random(3), passport_no='P7654321')
        self.ministry.download_passport_app(self.passport_mail.token, self.device)
        self.assertCode(
            'VISA_PASSPORT_MISMATCH', self.embassy.download_visa_image,
            other_mail.token, self.device, 3)

    def test_revoked_visa_stops_resolving(self):
        self.ministry.download_passport_app(self.passport_mail.token, self.device)
        self.embassy.revoke_visa(self.visa_mail.link_token.resource_id)
        self.assertCode(
            'UNKNOWN_RESOURCE', self.embassy.download_visa_image,
            self.visa_mail.token, self.device, 3)

    def test_locked_device(self):
        self.device.lock()
        self.assertCode(
            'DEVICE_LOCKED', self.ministry.download_passport_app,
            self.passport_mail.token, self.device)


class TestStoreIntegrity(CloudTestCase):

    def test_every_blob_keyed_by_its_hash(self):
        for n in range(5):
            issue_visa(self.embassy, rng=random.Random(n), image=bytes([n]) * 256)
        self.assertEqual(Blob.objects.count(), 5)
        for blob in Blob.objects.all():
            self.assertEqual(blob.content_hash, content_hash(bytes(blob.data)))
        for visa in self.embassy.visas.all():
            self.assertTrue(self.embassy.blobs.filter(content_hash=visa.image_hash).exists())

    def test_same_bytes_stored_once(self):
        issue_visa(self.embassy, rng=random.Random(1))
        issue_visa(self.embassy, rng=random.Random(2), passport_no='P7654321')
        self.assertEqual(self.embassy.blobs.count(), 1)

    def test_export_snapshot(self):
        issue_visa(self.embassy)
        snapshot = self.embassy.export_snapshot()
        self.assertEqual(snapshot['authority_id'], 'US-EMB')
        self.assertEqual(snapshot['blobs'], [content_hash(VISA_BYTES)])
        self.assertEqual(len(snapshot['visas']), 1)
        self.assertEqual(snapshot['notifications'][0]['kind'], NotificationKind.VISA_READY)

    def test_revoke_unknown(self):
        with self.assertRaises(CloudError) as cm:
            self.embassy.revoke_visa('VNOPE')
        self.assertEqual(cm.exception.code, 'NOT_FOUND')
