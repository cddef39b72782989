import random

from authflow import flow
from authflow.tests.factory import ANSWERS, enrolled_device
from passport.types import VisaImage
from passport.utils import displayed_time

VISA_BYTES = bytes(range(256))


def device_with_visa(visa_id='VTEST0000001', page_no=3, **kwargs):
    device = enrolled_device(**kwargs)
    device.store_visa(visa_id, VisaImage.of(VISA_BYTES), 'US')
    device.place_visa(visa_id, page_no)
    return device


def authenticate(device, now, rng=None, until=None):
    """Walk a fresh session up to `until` (VISA_VISIBLE when omitted)."""
    rng = rng or random.Random(77)
    session = flow.open_session(device, now, rng)
    steps = [
        ('TIME_AUTH_PENDING', lambda s: flow.verify_time_auth(
            s, displayed_time(now, device.clock_offset_min), s.pending_captcha.text, device, now)),
        ('CREDENTIALS_PENDING', lambda s: flow.verify_credentials(
            s, 'alice', 's3cret pass', now)),
        ('PASSPORT_VISIBLE', lambda s: flow.begin_image_auth(s, device, rng, now)[0]),
        ('IMAGE_AUTH_PENDING', lambda s: flow.verify_image_answer(
            s, device, ANSWERS[s.pending_image_index], now)),
    ]
    for state, step in steps:
        if state == until:
            return session
        session = step(session)
    return session
