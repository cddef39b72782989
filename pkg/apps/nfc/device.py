"""Device half of the NFC link: one request frame in, at most one frame out."""
import logging

from django.core.exceptions import ValidationError

from authflow import flow
from authflow.models import AuthSession
from passport.encoding import canonical_deserialize, canonical_serialize
from passport.exceptions import CloudPassError

from .exceptions import NfcError
from .frames import Frame, FrameType, decode_frame, encode_frame
from .types import (CheckRequest, CheckResponse, ErrorBody, LockCommand,
                    StampAck, StampRequest)

logger = logging.getLogger(__name__)


def _check(device, request, now):
    device.ensure_unlocked()
    session = AuthSession.objects.current_for(device)
    if session is None or flow.check_timeout(session, now).state != AuthSession.State.VISA_VISIBLE:
        raise NfcError('AUTH_NOT_COMPLETE', f'{device} has not passed both auth levels')
    passport = device.require_passport()
    visa_id = device.presented_visa_id
    image = device.visa_image(visa_id) if visa_id else None
    if image is None or passport.visa_page(visa_id) is None:
        raise NfcError('NO_VISA_PRESENTED', f'{device} has no visa page to show')
    response = CheckResponse(
        summary=passport.summary(),
        visa_id=visa_id,
        media_type=image.media_type,
        image=image.data,
        image_hash=image.content_hash,
    )
    return Frame(FrameType.CHECK_RESP, canonical_serialize(response))


def _stamp(device, request, now):
    device.ensure_unlocked()
    passport = device.append_stamp(request.visa_id, request.stamp)
    page = passport.visa_page(request.visa_id)
    ack = StampAck(request.visa_id, page.page_no, request.stamp.stamped_at)
    return Frame(FrameType.STAMP_ACK, canonical_serialize(ack))


def _lock(device, request, now):
    # a lock is honoured whatever state the device is in
    device.lock(now)
    return None


HANDLERS = {
    FrameType.CHECK_REQ: (CheckRequest, _check),
    FrameType.STAMP_REQ: (StampRequest, _stamp),
    FrameType.LOCK_CMD: (LockCommand, _lock),
}


def respond(device, data, now):
    try:
        frame = decode_frame(data)
        try:
            body_type, handler = HANDLERS[FrameType(frame.type_tag)]
        except KeyError:
            raise NfcError('UNEXPECTED_FRAME', f'device cannot handle {frame.type_tag}')
        reply = handler(device, canonical_deserialize(frame.body, body_type), now)
    except CloudPassError as e:
        logger.info(f'{device} refused frame: {e.code}')
        reply = Frame(FrameType.ERROR, canonical_serialize(ErrorBody(e.code, e.message)))
    except ValidationError as e:
        reply = Frame(FrameType.ERROR, canonical_serialize(
            ErrorBody('MALFORMED_RECORD', '; '.join(e.messages))))
    return encode_frame(reply) if reply is not None else None
