from dataclasses import dataclass
from decimal import Decimal

from passport.encoding import BYTES, INT, STR, RecordOf, canonical
from passport.types import PassportSummary, StampEntry


@dataclass(frozen=True)
class NfcChannel:
    reader_id: str
    device_id: str
    distance_cm: Decimal
    established_at: int


@dataclass(frozen=True)
class CheckResult:
    """What a reader learns from a successful counter check."""
    summary: PassportSummary
    visa_id: str
    image: bytes
    image_hash: str
    media_type: str


@dataclass(frozen=True)
class LockAck:
    device_id: str
    # False when the device was already locked
    newly_locked: bool


@canonical(0x30, ('reader_id', STR), ('requested_at', INT))
@dataclass(frozen=True)
class CheckRequest:
    reader_id: str
    requested_at: int


@canonical(0x31, ('summary', RecordOf(PassportSummary)), ('visa_id', STR),
           ('media_type', STR), ('image', BYTES), ('image_hash', STR))
@dataclass(frozen=True)
class CheckResponse:
    summary: PassportSummary
    visa_id: str
    media_type: str
    image: bytes
    image_hash: str


@canonical(0x32, ('visa_id', STR), ('stamp', RecordOf(StampEntry)))
@dataclass(frozen=True)
class StampRequest:
    visa_id: str
    stamp: StampEntry


@canonical(0x33, ('visa_id', STR), ('page_no', INT), ('stamped_at', INT))
@dataclass(frozen=True)
class StampAck:
    visa_id: str
    page_no: int
    stamped_at: int


@canonical(0x34, ('reader_id', STR), ('issued_at', INT))
@dataclass(frozen=True)
class LockCommand:
    reader_id: str
    issued_at: int


@canonical(0x35, ('code', STR), ('message', STR))
@dataclass(frozen=True)
class ErrorBody:
    code: str
    message: str = ''
