from decimal import Decimal

from django.core.cache import caches
from django.test import TestCase

from authflow import flow
from authflow.models import AuthSession
from nfc.exceptions import NfcError
from nfc.reader import close, establish, send_lock, tap_check, tap_stamp
from passport.exceptions import DeviceLocked
from passport.types import StampEntry
from passport.utils import content_hash
from .factory import VISA_BYTES, authenticate, device_with_visa

NOW = 6 * 3600


class NfcTestCase(TestCase):

    def setUp(self):
        caches['nfc'].clear()
        self.device = device_with_visa()

    def assertCode(self, code, call, exc=NfcError):
        with self.assertRaises(exc) as ctx:
            call()
        self.assertEqual(ctx.exception.code, code)


class TestEstablish(NfcTestCase):

    def test_proximity_gate(self):
        for distance in ('0.0', '15.0', 15, Decimal('14.99')):
            channel = establish('DESK-1', self.device, distance, NOW)
            self.assertLessEqual(channel.distance_cm, Decimal('15.0'))
            close(channel)
        for epsilon in ('0.1', '1', '100'):
            distance = Decimal('15.0') + Decimal(epsilon)
            self.assertCode('OUT_OF_RANGE',
                            lambda: establish('DESK-1', self.device, distance, NOW))

    def test_negative_distance(self):
        self.assertCode('BAD_DISTANCE', lambda: establish('DESK-1', self.device, -1, NOW))

    def test_locked_device(self):
        self.device.lock()
        self.assertCode('DEVICE_LOCKED',
                        lambda: establish('DESK-1', self.device, 5, NOW), DeviceLocked)

    def test_one_channel_per_device(self):
        establish('DESK-1', self.device, 5, NOW)
        self.assertCode('DEVICE_BUSY', lambda: establish('DESK-2', self.device, 5, NOW))


class TestTapCheck(NfcTestCase):

    def test_visa_visible(self):
        authenticate(self.device, NOW)
        channel = establish('DESK-1', self.device, 3, NOW)
        result = tap_check(channel, self.device, NOW)
        self.assertEqual(result.visa_id, 'VTEST0000001')
        self.assertEqual(result.image, VISA_BYTES)
        self.assertEqual(result.image_hash, content_hash(VISA_BYTES))
        self.assertEqual(result.image_hash,
                         self.device.visa_image('VTEST0000001').content_hash)
        self.assertEqual(result.summary.passport_no, self.device.passport.passport_no)

    def test_every_other_state_refused(self):
        for state in ('TIME_AUTH_PENDING', 'CREDENTIALS_PENDING',
                      'PASSPORT_VISIBLE', 'IMAGE_AUTH_PENDING'):
            session = authenticate(self.device, NOW, until=state)
            self.assertEqual(session.state, state)
            channel = establish('DESK-1', self.device, 3, NOW)
            self.assertCode('AUTH_NOT_COMPLETE', lambda: tap_check(channel, self.device, NOW))
            close(channel)

    def test_expired_and_terminated_refused(self):
        session = authenticate(self.device, NOW)
        channel = establish('DESK-1', self.device, 3, NOW + 600)
        self.assertCode('AUTH_NOT_COMPLETE', lambda: tap_check(channel, self.device, NOW + 600))
        close(channel)
        session = authenticate(self.device, NOW)
        flow.terminate_session(session, NOW)
        channel = establish('DESK-1', self.device, 3, NOW)
        self.assertCode('AUTH_NOT_COMPLETE', lambda: tap_check(channel, self.device, NOW))

    def test_no_session(self):
        channel = establish('DESK-1', self.device, 3, NOW)
        self.assertCode('AUTH_NOT_COMPLETE', lambda: tap_check(channel, self.device, NOW))

    def test_locked_mid_exchange(self):
        authenticate(self.device, NOW)
        channel = establish('DESK-1', self.device, 3, NOW)
        self.device.lock(NOW)
        self.assertCode('CHANNEL_STALE', lambda: tap_check(channel, self.device, NOW))

    def test_closed_channel(self):
        authenticate(self.device, NOW)
        channel = establish('DESK-1', self.device, 3, NOW)
        close(channel)
        self.assertCode('CHANNEL_STALE', lambda: tap_check(channel, self.device, NOW))

    def test_integrity_failure(self):
        authenticate(self.device, NOW)
        visa = self.device.device_visas.get(visa_id='VTEST0000001')
        visa.data = b'\x00' + bytes(visa.data)[1:]
        visa.save()
        channel = establish('DESK-1', self.device, 3, NOW)
        self.assertCode('INTEGRITY_FAILURE', lambda: tap_check(channel, self.device, NOW))


class TestTapStamp(NfcTestCase):

    def setUp(self):
        super().setUp()
        authenticate(self.device, NOW)
        self.channel = establish('DESK-1', self.device, 3, NOW)

    def test_stamp_after_check(self):
        tap_check(self.channel, self.device, NOW)
        ack = tap_stamp(self.channel, self.device, StampEntry('ARRIVAL', 'JFK', 7200))
        self.assertEqual(ack.page_no, 3)
        self.assertEqual(ack.stamped_at, 7200)
        page = self.device.passport.page(3)
        self.assertEqual(page.stamps, (StampEntry('ARRIVAL', 'JFK', 7200),))

    def test_stamp_without_check(self):
        self.assertCode('NO_PRIOR_CHECK', lambda: tap_stamp(
            self.channel, self.device, StampEntry('ARRIVAL', 'JFK', 7200)))

    def test_stamps_move_forward(self):
        tap_check(self.channel, self.device, NOW)
        tap_stamp(self.channel, self.device, StampEntry('ARRIVAL', 'JFK', 100))
        self.assertCode('STAMP_OUT_OF_ORDER', lambda: tap_stamp(
            self.channel, self.device, StampEntry('ARRIVAL', 'JFK', 50)))
        self.assertEqual(len(self.device.passport.stamps), 1)

    def test_locked_device(self):
        tap_check(self.channel, self.device, NOW)
        send_lock(self.channel, self.device, NOW)
        self.assertCode('DEVICE_LOCKED', lambda: tap_stamp(
            self.channel, self.device, StampEntry('ARRIVAL', 'JFK', 7200)), DeviceLocked)


class TestSendLock(NfcTestCase):

    def test_lock_is_idempotent(self):
        session = authenticate(self.device, NOW)
        channel = establish('DESK-1', self.device, 3, NOW)
        first = send_lock(channel, self.device, NOW)
        second = send_lock(channel, self.device, NOW)
        self.assertTrue(first.newly_locked)
        self.assertFalse(second.newly_locked)
        self.device.refresh_from_db()
        self.assertTrue(self.device.locked)
        self.assertEqual(flow.check_timeout(session, NOW).state,
                         AuthSession.State.TERMINATED)

    def test_tap_check_after_lock(self):
        authenticate(self.device, NOW)
        channel = establish('DESK-1', self.device, 3, NOW)
        send_lock(channel, self.device, NOW)
        self.assertCode('DEVICE_LOCKED', lambda: tap_check(channel, self.device, NOW),
                        DeviceLocked)

    def test_lock_is_absorbing(self):
        channel = establish('DESK-1', self.device, 3, NOW)
        send_lock(channel, self.device, NOW)
        attempts = (
            lambda: establish('DESK-1', self.device, 3, NOW),
            lambda: flow.open_session(self.device, NOW, None),
            lambda: self.device.ensure_unlocked(),
        )
        for attempt in attempts:
            self.assertCode('DEVICE_LOCKED', attempt, DeviceLocked)
