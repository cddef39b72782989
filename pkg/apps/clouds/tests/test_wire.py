import json
import random

from django.test import TestCase

from clouds.wire import AirportService, EmbassyService
from passport.types import TrackingKind

from .factory import VISA_BYTES, AirportCloudFactory, EmbassyCloudFactory, issue_visa


class TestEmbassyService(TestCase):

    def setUp(self):
        self.embassy = EmbassyCloudFactory()
        self.service = EmbassyService(self.embassy, random.Random(3))

    def test_ping(self):
        self.assertEqual(self.service.handle_line('PING\n'), 'OK PONG')

    def test_submit_and_track(self):
        reply = self.service.handle_line(f'SUBMIT alice@example.com {TrackingKind.VISA_APPLICATION}')
        status, tracking_id = reply.split()
        self.assertEqual(status, 'OK')
        self.assertEqual(self.service.handle_line(f'TRACK {tracking_id}'), 'OK SUBMITTED')

    def test_errors(self):
        self.assertEqual(self.service.handle_line('TRACK NOPE00000000'), 'ERR NOT_FOUND')
        self.assertEqual(self.service.handle_line('FLY away'), 'ERR UNKNOWN_OP')
        self.assertEqual(self.service.handle_line('TRACK'), 'ERR BAD_REQUEST')
        self.assertEqual(self.service.handle_line(''), 'ERR BAD_REQUEST')
        self.assertEqual(self.service.handle_line('RESOLVE zz'), 'ERR MALFORMED_TOKEN')

    def test_visa_blob_and_resolve(self):
        mail = issue_visa(self.embassy)
        visa_id = mail.link_token.resource_id
        self.assertEqual(
            self.service.handle_line(f'RESOLVE {mail.token}'), f'OK VISA_IMAGE {visa_id}')
        _, passport_no, image_hash, status = self.service.handle_line(f'VISA {visa_id}').split()
        self.assertEqual((passport_no, status), ('P1234567', 'ISSUED'))
        self.assertEqual(
            self.service.handle_line(f'BLOB {image_hash}'), f'OK {VISA_BYTES.hex()}')
        self.assertEqual(self.service.handle_line(f'REVOKE {visa_id}'), 'OK REVOKED')
        self.assertEqual(
            self.service.handle_line(f'RESOLVE {mail.token}'), 'ERR UNKNOWN_RESOURCE')

    def test_snapshot_is_hex_json(self):
        _, payload = self.service.handle_line('SNAPSHOT').split()
        self.assertEqual(json.loads(bytes.fromhex(payload))['authority_id'], 'US-EMB')


class TestAirportService(TestCase):

    def test_book_sync_compare(self):
        embassy = EmbassyCloudFactory()
        visa_id = issue_visa(embassy).link_token.resource_id
        service = AirportService(AirportCloudFactory(airport='JFK'))
        self.assertEqual(service.handle_line(f'BOOK P1234567 {visa_id} JFK 1'), 'OK BOOKED')
        self.assertEqual(service.handle_line('SYNC 0'), 'OK 1 0 0')
        self.assertTrue(service.handle_line(f'REPLICA {visa_id}').startswith('OK P1234567 '))
        self.assertEqual(
            service.handle_line(f'DESK_COPY {visa_id} ARRIVAL {VISA_BYTES.hex()} 50').split()[0],
            'OK')
        self.assertEqual(service.handle_line(f'COMPARE {visa_id} ARRIVAL'), 'OK MATCH')
        self.assertEqual(service.handle_line('COMPARE VNONE ARRIVAL'), 'ERR NO_DESK_COPY')
        self.assertEqual(service.handle_line('REPLICA VNONE'), 'ERR NOT_FOUND')
        self.assertEqual(service.handle_line('SYNC tomorrow'), 'ERR BAD_REQUEST')
        self.assertEqual(service.handle_line('DESK_COPY V1 ARRIVAL xyz'), 'ERR BAD_REQUEST')
