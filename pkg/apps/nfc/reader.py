"""
Desk reader half of the NFC link. Live channels are kept in the `nfc`
cache keyed by device, so a device is on at most one channel at a time.
"""
import logging
from decimal import Decimal, InvalidOperation

from django.conf import settings
from django.core.cache import caches

from passport.encoding import canonical_deserialize, canonical_serialize
from passport.exceptions import DeviceLocked
from passport.utils import content_hash

from .device import respond
from .exceptions import NfcError
from .frames import Frame, FrameType, decode_frame, encode_frame
from .types import (CheckRequest, CheckResponse, CheckResult, ErrorBody,
                    LockAck, LockCommand, NfcChannel, StampAck, StampRequest)

logger = logging.getLogger(__name__)


def _registry():
    return caches['nfc']


def _key(device_id):
    return f'nfc_{device_id}'


def _entry(channel):
    entry = _registry().get(_key(channel.device_id))
    if entry is None or entry['channel'] != channel:
        return None
    return entry


def _drop(channel):
    if _entry(channel) is not None:
        _registry().delete(_key(channel.device_id))


def _exchange(device, frame, now):
    reply = respond(device, encode_frame(frame), now)
    if reply is None:
        return None
    reply = decode_frame(reply)
    if reply.type_tag == FrameType.ERROR:
        error = canonical_deserialize(reply.body, ErrorBody)
        if error.code == DeviceLocked.code:
            raise DeviceLocked(message=error.message)
        raise NfcError(error.code, error.message)
    return reply


def _expect(reply, frame_type):
    if reply is None or reply.type_tag != frame_type:
        raise NfcError('UNEXPECTED_FRAME', f'expected {frame_type.label}')
    return reply


def establish(reader_id, device, distance_cm, now):
    device.ensure_unlocked()
    try:
        distance = Decimal(str(distance_cm))
    except InvalidOperation:
        raise NfcError('BAD_DISTANCE', f'{distance_cm!r} is not a distance')
    if distance < 0:
        raise NfcError('BAD_DISTANCE', f'{distance} cm')
    # "no more than" 15 cm, inclusive
    if distance > Decimal(settings.NFC_MAX_DISTANCE_CM):
        logger.info(f'{device} at {distance} cm from {reader_id}, out of range')
        raise NfcError('OUT_OF_RANGE', f'{distance} cm exceeds {settings.NFC_MAX_DISTANCE_CM} cm')
    current = _registry().get(_key(device.device_id))
    if current is not None and current['channel'].reader_id != reader_id:
        raise NfcError('DEVICE_BUSY', f'{device} is on a channel with {current["channel"].reader_id}')
    channel = NfcChannel(reader_id, device.device_id, distance, now)
    _registry().set(_key(device.device_id), {'channel': channel, 'checked_visa_id': None})
    logger.info(f'channel {reader_id} <-> {device} at {distance} cm')
    return channel


def tap_check(channel, device, now=None):
    now = channel.established_at if now is None else now
    entry = _entry(channel)
    device.refresh_from_db(fields=['locked'])
    if device.locked:
        if entry is not None:
            _drop(channel)
            raise NfcError('CHANNEL_STALE', f'{device} locked during the exchange')
        raise DeviceLocked(message=f'device {device.device_id} is locked')
    if entry is None:
        raise NfcError('CHANNEL_STALE', 'channel is no longer established')
    request = CheckRequest(channel.reader_id, now)
    reply = _expect(
        _exchange(device, Frame(FrameType.CHECK_REQ, canonical_serialize(request)), now),
        FrameType.CHECK_RESP)
    response = canonical_deserialize(reply.body, CheckResponse)
    if content_hash(response.image) != response.image_hash:
        logger.warning(f'visa {response.visa_id} from {device} fails its own hash')
        raise NfcError('INTEGRITY_FAILURE', f'visa {response.visa_id} image hash mismatch')
    entry['checked_visa_id'] = response.visa_id
    _registry().set(_key(channel.device_id), entry)
    return CheckResult(
        summary=response.summary,
        visa_id=response.visa_id,
        image=response.image,
        image_hash=response.image_hash,
        media_type=response.media_type,
    )


def tap_stamp(channel, device, stamp, now=None):
    now = stamp.stamped_at if now is None else now
    device.ensure_unlocked()
    entry = _entry(channel)
    if entry is None:
        raise NfcError('CHANNEL_STALE', 'channel is no longer established')
    if not entry['checked_visa_id']:
        raise NfcError('NO_PRIOR_CHECK', 'stamp requested before a counter check')
    request = StampRequest(entry['checked_visa_id'], stamp)
    reply = _expect(
        _exchange(device, Frame(FrameType.STAMP_REQ, canonical_serialize(request)), now),
        FrameType.STAMP_ACK)
    return canonical_deserialize(reply.body, StampAck)


def send_lock(channel, device, now=None):
    """Idempotent, the command is delivered even to a locked device."""
    now = channel.established_at if now is None else now
    device.refresh_from_db(fields=['locked'])
    newly_locked = not device.locked
    command = LockCommand(channel.reader_id, now)
    _exchange(device, Frame(FrameType.LOCK_CMD, canonical_serialize(command)), now)
    _drop(channel)
    device.refresh_from_db(fields=['locked'])
    return LockAck(device.device_id, newly_locked)


def close(channel):
    _drop(channel)
