"""
Two-level authentication of a passport app session.

Level 1 is the displayed time plus a captcha, then username and password;
level 2 is the answer to one of the device's ten fixed images. Every call
takes a session snapshot (or its id) and returns a fresh snapshot, the rows
stay owned by this module.
"""
import logging
import string

from django.conf import settings
from django.db import transaction
from django.utils.crypto import constant_time_compare

from passport.exceptions import PassportError
from passport.utils import (content_hash, displayed_time, minutes_apart,
                            parse_hhmm, random_bytes, random_string)

from .exceptions import AuthError
from .models import (AuthImage, AuthSession, Credential, Otp, hash_answer,
                     hash_password)

logger = logging.getLogger(__name__)

State = AuthSession.State

# no characters that read alike on a rendered captcha
CAPTCHA_ALPHABET = ''.join(
    c for c in string.ascii_letters + string.digits if c not in '0O1Il')


def _session_id(session):
    return session if isinstance(session, str) else session.session_id


def _lapse(row, now):
    if row.is_live and row.is_expired_at(now):
        row.expire(now)
        row.save()
        logger.info(f'session {row.session_id} expired at {now}')


def _load(session, now, *states):
    """
    The live row of `session`, in this order of refusal: locked device,
    expired session, unexpected state.
    """
    with transaction.atomic():
        try:
            row = (AuthSession.objects.select_for_update()
                   .select_related('device').get(session_id=_session_id(session)))
        except AuthSession.DoesNotExist:
            raise AuthError('UNKNOWN_SESSION', f'no session {_session_id(session)}')
        _lapse(row, now)
    row.device.ensure_unlocked()
    if row.state == State.EXPIRED:
        raise AuthError('SESSION_EXPIRED', f'session {row.session_id} expired')
    if row.state not in states:
        raise AuthError(
            'WRONG_STATE', f'session {row.session_id} is {row.state}')
    return row


def _check_device(row, device):
    if device is not None and device.pk != row.device_id:
        raise AuthError(
            'WRONG_DEVICE', f'session {row.session_id} belongs to another device')


def enroll_credential(device, username, password, rng):
    device.ensure_unlocked()
    if Credential.objects.filter(device=device).exists():
        raise AuthError('CREDENTIALS_FIXED', f'{device} already has credentials')
    salt = random_bytes(rng, 16)
    return Credential.objects.create(
        device=device, username=username, salt=salt,
        password_hash=hash_password(salt, password))


def enroll_auth_images(device, images):
    """`images` is exactly ten (image bytes, answer) pairs, set once."""
    device.ensure_unlocked()
    images = list(images)
    if len(images) != settings.AUTH_IMAGE_COUNT:
        raise AuthError(
            'AUTH_IMAGES_INCOMPLETE',
            f'{len(images)} images given, {settings.AUTH_IMAGE_COUNT} required')
    with transaction.atomic():
        if device.auth_images.exists():
            raise AuthError('AUTH_IMAGES_FIXED', f'{device} images never change')
        AuthImage.objects.bulk_create([
            AuthImage(device=device, index=index,
                      image_hash=content_hash(data), answer_hash=hash_answer(answer))
            for index, (data, answer) in enumerate(images)
        ])
    return list(device.auth_images.order_by('index'))


def open_session(device, now, rng):
    device.ensure_unlocked()
    try:
        device.require_passport('NO_PASSPORT_INSTALLED')
    except PassportError as e:
        raise AuthError(e.code, e.message)
    with transaction.atomic():
        # one live session per device
        for earlier in AuthSession.objects.live().filter(device=device):
            earlier.terminate(now)
            earlier.save()
        session_id = AuthSession.objects.new_session_id(rng)
        row = AuthSession.objects.create(
            session_id=session_id,
            device=device,
            activated_at=now,
            captcha_id='C' + random_string(rng, 11),
            captcha_text=random_string(rng, settings.CAPTCHA_LENGTH, CAPTCHA_ALPHABET),
            captcha_issued_at=now,
        )
    logger.info(f'session {session_id} opened on {device} at {now}')
    return row.snapshot()


def check_timeout(session, now):
    with transaction.atomic():
        row = AuthSession.objects.select_for_update().get(
            session_id=_session_id(session))
        _lapse(row, now)
    return row.snapshot()


def verify_time_auth(session, submitted_time, captcha_answer, device, now):
    row = _load(session, now, State.TIME_AUTH_PENDING)
    _check_device(row, device)
    # captcha is exact, case included
    if not constant_time_compare(captcha_answer or '', row.captcha_text):
        logger.warning(f'bad captcha on session {row.session_id}')
        raise AuthError('BAD_CAPTCHA', 'captcha answer does not match')
    expected = parse_hhmm(displayed_time(now, row.device.clock_offset_min))
    submitted = parse_hhmm(submitted_time)
    if submitted is None or minutes_apart(submitted, expected) > settings.AUTH_TIME_TOLERANCE:
        logger.warning(
            f'bad time {submitted_time!r} on session {row.session_id}')
        raise AuthError('BAD_TIME', f'{submitted_time!r} is not the displayed time')
    row.pass_time_auth()
    row.save()
    return row.snapshot()


def verify_credentials(session, username, password, now):
    row = _load(session, now, State.CREDENTIALS_PENDING)
    credential = Credential.objects.filter(device_id=row.device_id).first()
    if credential is None or not credential.verify(username, password):
        logger.warning(f'bad credentials on session {row.session_id}')
        raise AuthError('BAD_CREDENTIALS', 'username or password rejected')
    row.pass_credentials()
    row.save()
    return row.snapshot()


def begin_image_auth(session, device, rng, now):
    row = _load(session, now, State.PASSPORT_VISIBLE)
    _check_device(row, device)
    if row.device.auth_images.count() != settings.AUTH_IMAGE_COUNT:
        raise AuthError('AUTH_IMAGES_INCOMPLETE', f'{row.device} has no image set')
    index = rng.randrange(settings.AUTH_IMAGE_COUNT)
    row.prompt_image(index)
    row.save()
    return row.snapshot(), index


def verify_image_answer(session, device, answer, now):
    row = _load(session, now, State.IMAGE_AUTH_PENDING)
    _check_device(row, device)
    image = row.device.auth_images.get(index=row.pending_image_index)
    if not image.check_answer(answer):
        logger.warning(
            f'bad answer for image {image.index} on session {row.session_id}')
        raise AuthError('BAD_ANSWER', 'image answer rejected')
    row.pass_image_auth()
    row.save()
    return row.snapshot()


def terminate_session(session, now):
    with transaction.atomic():
        row = AuthSession.objects.select_for_update().get(
            session_id=_session_id(session))
        _lapse(row, now)
        if row.is_live:
            row.terminate(now)
            row.save()
            logger.info(f'session {row.session_id} terminated at {now}')
    return row.snapshot()


def issue_otp(transaction_id, rng, now=0):
    return Otp.objects.issue(transaction_id, rng, now)


def redeem_otp(code, transaction_id, now=None):
    return Otp.objects.redeem(code, transaction_id, now)
