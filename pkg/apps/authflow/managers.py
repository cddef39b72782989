import logging

from django.conf import settings
from django.db import models, transaction

from passport.utils import random_string

from .exceptions import AuthError

logger = logging.getLogger(__name__)


class AuthSessionManager(models.Manager):

    def live(self):
        return self.filter(state__in=self.model.LIVE_STATES)

    def current_for(self, device):
        return self.live().filter(device=device).order_by('-id').first()

    def new_session_id(self, rng):
        while True:
            session_id = 'S' + random_string(rng, 11)
            if not self.filter(session_id=session_id).exists():
                return session_id


class OtpManager(models.Manager):

    def issue(self, transaction_id, rng, now=0):
        """
        One live code per transaction. Codes are drawn again while they
        collide with another live code so redemption stays unambiguous.
        """
        digits = settings.OTP_DIGITS
        with transaction.atomic():
            if self.filter(transaction_id=transaction_id, used=False).exists():
                raise AuthError(
                    'OTP_ALREADY_ISSUED',
                    f'transaction {transaction_id} already has a live otp')
            while True:
                code = f'{rng.randrange(10 ** digits):0{digits}d}'
                if not self.filter(code=code, used=False).exists():
                    break
            otp = self.create(
                code=code, transaction_id=transaction_id, issued_at=now)
        logger.info(f'otp issued for transaction {transaction_id}')
        return otp

    def redeem(self, code, transaction_id, now=None):
        with transaction.atomic():
            # compare-and-set, a code flips to used at most once
            flipped = self.filter(
                code=code, transaction_id=transaction_id, used=False,
            ).update(used=True, used_at=now)
        if flipped:
            logger.info(f'otp redeemed for transaction {transaction_id}')
            return True
        if self.filter(code=code, transaction_id=transaction_id).exists():
            logger.warning(f'otp replay for transaction {transaction_id}')
            raise AuthError('OTP_ALREADY_USED', 'otp already redeemed')
        if self.filter(code=code).exists():
            logger.warning(f'otp presented for foreign transaction {transaction_id}')
            raise AuthError(
                'OTP_WRONG_TRANSACTION', 'otp belongs to another transaction')
        raise AuthError('OTP_UNKNOWN', 'otp was never issued')
