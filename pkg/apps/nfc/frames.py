"""
Frame wire format: [type_tag: 1 byte][length: 4 bytes big-endian][body].
Bodies are canonical records, see passport.encoding.
"""
import struct
from dataclasses import dataclass

from django.db import models
from django.utils.translation import gettext_lazy as _

from .exceptions import NfcError

FRAME_HEADER = struct.Struct('>BI')


class FrameType(models.IntegerChoices):
    CHECK_REQ = 0x01, _('Check request')
    CHECK_RESP = 0x02, _('Check response')
    STAMP_REQ = 0x03, _('Stamp request')
    STAMP_ACK = 0x04, _('Stamp acknowledgement')
    LOCK_CMD = 0x05, _('Lock command')
    ERROR = 0x7F, _('Error')


@dataclass(frozen=True)
class Frame:
    type_tag: int
    body: bytes = b''

    @property
    def length(self):
        return len(self.body)


def encode_frame(frame):
    if frame.type_tag not in FrameType.values:
        raise NfcError('UNKNOWN_FRAME_TYPE', f'type 0x{frame.type_tag:02x}')
    body = bytes(frame.body)
    return FRAME_HEADER.pack(frame.type_tag, len(body)) + body


def decode_frame(data):
    data = bytes(data)
    if len(data) < FRAME_HEADER.size:
        raise NfcError('TRUNCATED_FRAME', f'{len(data)} byte frame header')
    type_tag, length = FRAME_HEADER.unpack_from(data)
    if type_tag not in FrameType.values:
        raise NfcError('UNKNOWN_FRAME_TYPE', f'type 0x{type_tag:02x}')
    body = data[FRAME_HEADER.size:]
    if len(body) < length:
        raise NfcError('TRUNCATED_FRAME', f'body {len(body)} of {length} bytes')
    if len(body) > length:
        raise NfcError('MALFORMED_FRAME', f'{len(body) - length} bytes past the body')
    return Frame(FrameType(type_tag), body)
