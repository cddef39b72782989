import hashlib
import re
import string
from datetime import datetime, timedelta

from django.conf import settings
from django.utils import timezone

HHMM_RE = re.compile(r'^([01]\d|2[0-3]):([0-5]\d)$')
MINUTES_PER_DAY = 24 * 60
SECONDS_PER_DAY = 24 * 60 * 60

UPPER_ALNUM = string.ascii_uppercase + string.digits


def content_hash(data):
    """
    Lowercase hex SHA-256 of a byte string. Visa images, blobs, auth images
    and desk copies are all identified by this digest.
    """
    return hashlib.sha256(bytes(data)).hexdigest()


def random_string(rng, size=12, chars=UPPER_ALNUM):
    return ''.join(rng.choice(chars) for _ in range(size))


def random_bytes(rng, size):
    return bytes(rng.getrandbits(8) for _ in range(size))


def virtual_day(ts):
    return ts // SECONDS_PER_DAY


def displayed_time(now, offset_min):
    """
    Wall time the device shows at virtual second `now`: scenario UTC shifted
    by the device's registered clock offset, 24h "HH:MM".
    """
    minutes = (now // 60 + offset_min) % MINUTES_PER_DAY
    return f'{minutes // 60:02d}:{minutes % 60:02d}'


def parse_hhmm(text):
    """Minutes after midnight for "HH:MM", None when the text is not a time."""
    match = HHMM_RE.match(text.strip()) if text else None
    if not match:
        return None
    return int(match.group(1)) * 60 + int(match.group(2))


def minutes_apart(a, b):
    """Distance between two times of day in minutes, across midnight."""
    diff = abs(a - b) % MINUTES_PER_DAY
    return min(diff, MINUTES_PER_DAY - diff)


def epoch():
    return datetime.fromisoformat(settings.CLOUDPASS_EPOCH)


def to_iso(ts):
    """ISO-8601 UTC rendering of a virtual timestamp, for logs and reports only."""
    return (epoch() + timedelta(seconds=ts)).strftime('%Y-%m-%dT%H:%M:%SZ')


def wall_clock_ts(when=None):
    """Virtual seconds matching a wall-clock instant (default: now)."""
    when = when or timezone.now()
    return int((when - epoch()).total_seconds())
