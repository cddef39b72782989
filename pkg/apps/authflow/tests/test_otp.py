import random

from django.test import TestCase

from authflow import flow
from authflow.exceptions import AuthError
from authflow.models import Otp
from .factory import OtpFactory


class TestOtp(TestCase):

    def setUp(self):
        self.rng = random.Random(2021)

    def assertCode(self, code, call):
        with self.assertRaises(AuthError) as ctx:
            call()
        self.assertEqual(ctx.exception.code, code)

    def test_issue_format(self):
        otp = flow.issue_otp('TX-A', self.rng, now=30)
        self.assertRegex(otp.code, r'^\d{6}$')
        self.assertFalse(otp.used)
        self.assertEqual(otp.issued_at, 30)

    def test_redeem_once(self):
        otp = flow.issue_otp('TX-A', self.rng)
        self.assertTrue(flow.redeem_otp(otp.code, 'TX-A'))
        self.assertCode('OTP_ALREADY_USED', lambda: flow.redeem_otp(otp.code, 'TX-A'))

    def test_never_issued(self):
        self.assertCode('OTP_UNKNOWN', lambda: flow.redeem_otp('000000', 'TX-A'))

    def test_wrong_transaction(self):
        otp = flow.issue_otp('TX-A', self.rng)
        self.assertCode('OTP_WRONG_TRANSACTION', lambda: flow.redeem_otp(otp.code, 'TX-B'))
        # the code is still live for its own transaction
        self.assertTrue(flow.redeem_otp(otp.code, 'TX-A'))

    def test_one_live_code_per_transaction(self):
        flow.issue_otp('TX-A', self.rng)
        self.assertCode('OTP_ALREADY_ISSUED', lambda: flow.issue_otp('TX-A', self.rng))

    def test_live_codes_never_collide(self):
        OtpFactory(code='123456', transaction_id='TX-OLD')

        class Fixed:
            draws = iter([123456, 123456, 654321])

            def randrange(self, _):
                return next(self.draws)

        otp = flow.issue_otp('TX-NEW', Fixed())
        self.assertEqual(otp.code, '654321')

    def test_single_use_over_many(self):
        codes = {}
        for n in range(1000):
            codes[f'TX{n}'] = flow.issue_otp(f'TX{n}', self.rng).code
        successes = {tx: 0 for tx in codes}
        replays = 0
        for attempt in range(3):
            for n, (tx, code) in enumerate(codes.items()):
                if attempt == 0 and n % 2:
                    continue
                try:
                    flow.redeem_otp(code, tx)
                    successes[tx] += 1
                except AuthError as e:
                    self.assertEqual(e.code, 'OTP_ALREADY_USED')
                    replays += 1
        self.assertTrue(all(count == 1 for count in successes.values()))
        self.assertEqual(replays, 500 + 1000)
        self.assertFalse(Otp.objects.filter(used=False).exists())
