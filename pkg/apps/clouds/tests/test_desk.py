from django.test import TestCase

from clouds.exceptions import CloudError
from clouds.types import Checkpoint, CompareResult, ManifestEntry, TravelManifest
from passport.utils import content_hash

from .factory import AirportCloudFactory, EmbassyCloudFactory, VisaFactory


class TestDeskCopies(TestCase):

    def setUp(self):
        embassy = EmbassyCloudFactory()
        self.visa = VisaFactory(cloud=embassy, passport_no='P1234567')
        self.image = self.visa.visa_id.encode()
        self.jfk = AirportCloudFactory(airport='JFK')
        self.jfk.daily_sync(embassy, TravelManifest((
            ManifestEntry('P1234567', self.visa.visa_id, 'JFK', 0),)), 0)

    def test_untampered_copy_matches(self):
        stored = self.jfk.receive_desk_copy(self.visa.visa_id, self.image, Checkpoint.ARRIVAL)
        self.assertEqual(stored, self.jfk.replica_entry(self.visa.visa_id)[1])
        self.assertEqual(
            self.jfk.compare_visa(self.visa.visa_id, Checkpoint.ARRIVAL), CompareResult.MATCH)

    def test_flipped_byte_mismatches(self):
        tampered = bytearray(self.image)
        tampered[2] ^= 0x01
        stored = self.jfk.receive_desk_copy(
            self.visa.visa_id, bytes(tampered), Checkpoint.DEPARTURE)
        self.assertNotEqual(stored, self.visa.image_hash)
        self.assertEqual(
            self.jfk.compare_visa(self.visa.visa_id, Checkpoint.DEPARTURE),
            CompareResult.MISMATCH)

    def test_unreplicated_visa(self):
        stored = self.jfk.receive_desk_copy('VNEVERSYNCED', b'abc', Checkpoint.ARRIVAL)
        self.assertEqual(stored, content_hash(b'abc'))
        self.assertEqual(
            self.jfk.compare_visa('VNEVERSYNCED', Checkpoint.ARRIVAL), CompareResult.NOT_FOUND)

    def test_checkpoints_kept_apart(self):
        self.jfk.receive_desk_copy(self.visa.visa_id, self.image, Checkpoint.DEPARTURE)
        with self.assertRaises(CloudError) as cm:
            self.jfk.compare_visa(self.visa.visa_id, Checkpoint.ARRIVAL)
        self.assertEqual(cm.exception.code, 'NO_DESK_COPY')

    def test_later_copy_replaces_earlier(self):
        self.jfk.receive_desk_copy(self.visa.visa_id, b'junk', Checkpoint.ARRIVAL, now=10)
        self.jfk.receive_desk_copy(self.visa.visa_id, self.image, Checkpoint.ARRIVAL, now=20)
        self.assertEqual(self.jfk.desk_copies.count(), 1)
        self.assertEqual(
            self.jfk.compare_visa(self.visa.visa_id, Checkpoint.ARRIVAL), CompareResult.MATCH)

    def test_unknown_checkpoint(self):
        with self.assertRaises(CloudError) as cm:
            self.jfk.receive_desk_copy(self.visa.visa_id, self.image, 'TRANSIT')
        self.assertEqual(cm.exception.code, 'UNKNOWN_CHECKPOINT')
