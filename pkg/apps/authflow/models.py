from django.conf import settings
from django.db import models
from django.utils.crypto import constant_time_compare
from django.utils.translation import gettext_lazy as _
from django_fsm import FSMField, transition

from db.base_model import BaseModel
from passport.utils import content_hash

from .managers import AuthSessionManager, OtpManager
from .types import CaptchaChallenge, Session


def normalize_answer(answer):
    return ' '.join(answer.lower().split())


def hash_password(salt, password):
    return content_hash(bytes(salt) + password.encode('utf-8'))


def hash_answer(answer):
    return content_hash(normalize_answer(answer).encode('utf-8'))


class Credential(BaseModel):
    device = models.OneToOneField(
        'passport.Device', verbose_name=_('device'), on_delete=models.CASCADE,
        related_name='credential')
    username = models.CharField(_('username'), max_length=150)
    salt = models.BinaryField(_('password salt'))
    # sha-256 of salt + password
    password_hash = models.CharField(_('password hash'), max_length=64)

    def __str__(self):
        return f'{self.username} on {self.device}'

    def verify(self, username, password):
        expected = hash_password(self.salt, password)
        return (constant_time_compare(username, self.username)
                & constant_time_compare(expected, self.password_hash))


class AuthImage(BaseModel):
    """One of the ten fixed images of a device, with the hashed answer."""
    device = models.ForeignKey(
        'passport.Device', verbose_name=_('device'), on_delete=models.CASCADE,
        related_name='auth_images')
    index = models.PositiveSmallIntegerField(_('index'))
    image_hash = models.CharField(_('image hash'), max_length=64)
    answer_hash = models.CharField(_('answer hash'), max_length=64)

    class Meta:
        ordering = ('device', 'index')
        unique_together = ('device', 'index')

    def __str__(self):
        return f'image {self.index} of {self.device}'

    def check_answer(self, answer):
        return constant_time_compare(hash_answer(answer), self.answer_hash)


class AuthSession(BaseModel):

    class State(models.TextChoices):
        TIME_AUTH_PENDING = 'TIME_AUTH_PENDING', _('Time auth pending')
        CREDENTIALS_PENDING = 'CREDENTIALS_PENDING', _('Credentials pending')
        PASSPORT_VISIBLE = 'PASSPORT_VISIBLE', _('Passport visible')
        IMAGE_AUTH_PENDING = 'IMAGE_AUTH_PENDING', _('Image auth pending')
        VISA_VISIBLE = 'VISA_VISIBLE', _('Visa visible')
        EXPIRED = 'EXPIRED', _('Expired')
        TERMINATED = 'TERMINATED', _('Terminated')

    LIVE_STATES = [
        State.TIME_AUTH_PENDING,
        State.CREDENTIALS_PENDING,
        State.PASSPORT_VISIBLE,
        State.IMAGE_AUTH_PENDING,
        State.VISA_VISIBLE,
    ]

    session_id = models.CharField(_('session id'), max_length=32, unique=True)
    device = models.ForeignKey(
        'passport.Device', verbose_name=_('device'), on_delete=models.CASCADE,
        related_name='sessions')
    state = FSMField(
        _('state'), choices=State.choices, default=State.TIME_AUTH_PENDING)
    activated_at = models.BigIntegerField(_('activated at'))
    ended_at = models.BigIntegerField(_('ended at'), null=True, blank=True)
    captcha_id = models.CharField(_('captcha id'), max_length=32, blank=True, default='')
    captcha_text = models.CharField(_('captcha text'), max_length=16, blank=True, default='')
    captcha_issued_at = models.BigIntegerField(_('captcha issued at'), null=True, blank=True)
    pending_image_index = models.PositiveSmallIntegerField(
        _('prompted image'), null=True, blank=True)

    objects = AuthSessionManager()

    class Meta:
        ordering = ('-id',)

    def __str__(self):
        return f'Session {self.session_id} ({self.state})'

    @property
    def expires_at(self):
        return self.activated_at + settings.AUTH_SESSION_TIMEOUT

    @property
    def is_live(self):
        return self.state in self.LIVE_STATES

    def is_expired_at(self, now):
        # active interval is [activated_at, activated_at + timeout)
        return now >= self.expires_at

    @property
    def captcha(self):
        if not self.captcha_id:
            return None
        return CaptchaChallenge(
            self.captcha_id, self.captcha_text, self.captcha_issued_at)

    def _clear_captcha(self):
        self.captcha_id = ''
        self.captcha_text = ''
        self.captcha_issued_at = None

    @transition(field=state, source=State.TIME_AUTH_PENDING,
                target=State.CREDENTIALS_PENDING)
    def pass_time_auth(self):
        self._clear_captcha()

    @transition(field=state, source=State.CREDENTIALS_PENDING,
                target=State.PASSPORT_VISIBLE)
    def pass_credentials(self):
        pass

    @transition(field=state, source=State.PASSPORT_VISIBLE,
                target=State.IMAGE_AUTH_PENDING)
    def prompt_image(self, index):
        self.pending_image_index = index

    @transition(field=state, source=State.IMAGE_AUTH_PENDING,
                target=State.VISA_VISIBLE)
    def pass_image_auth(self):
        self.pending_image_index = None

    @transition(field=state, source=LIVE_STATES, target=State.EXPIRED)
    def expire(self, now):
        self.ended_at = now
        self._clear_captcha()
        self.pending_image_index = None

    @transition(field=state, source=LIVE_STATES, target=State.TERMINATED)
    def terminate(self, now):
        self.ended_at = now
        self._clear_captcha()
        self.pending_image_index = None

    def snapshot(self):
        return Session(
            session_id=self.session_id,
            device_id=self.device.device_id,
            state=self.state,
            activated_at=self.activated_at,
            pending_captcha=self.captcha,
            pending_image_index=self.pending_image_index,
        )


class Otp(BaseModel):
    code = models.CharField(_('code'), max_length=12)
    transaction_id = models.CharField(_('transaction id'), max_length=64)
    used = models.BooleanField(_('used'), default=False)
    issued_at = models.BigIntegerField(_('issued at'))
    used_at = models.BigIntegerField(_('used at'), null=True, blank=True)

    objects = OtpManager()

    class Meta:
        ordering = ('id',)
        indexes = [models.Index(
            fields=['code', 'transaction_id'], name='authflow_otp_code_tx_idx')]

    def __str__(self):
        return f'OTP for {self.transaction_id}'
