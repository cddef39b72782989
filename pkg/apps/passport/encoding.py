"""
Canonical binary encoding of CloudPass records.

Every record is `[tag: u8][length: u32 BE][body]`, the body being the
record's fields in declaration order. The layout of each field kind is
documented in docs/encoding.md; nothing here may change without a matching
change there, hashes and golden logs depend on it.
"""
import struct

from django.core.exceptions import ValidationError

from .exceptions import PassportError

STR = 'str'
OPT_STR = 'opt_str'
INT = 'int'
BOOL = 'bool'
BYTES = 'bytes'

HEADER = struct.Struct('>BI')
U8 = struct.Struct('>B')
U32 = struct.Struct('>I')
I64 = struct.Struct('>q')


class ListOf:
    def __init__(self, record_class):
        self.record_class = record_class


class RecordOf:
    def __init__(self, record_class):
        self.record_class = record_class


_schemas = {}
_classes = {}


def canonical(tag, *fields):
    """
    Register a dataclass with the codec under a one-byte tag.
    `fields` are (attribute, kind) pairs in wire order.
    """
    def register(cls):
        if tag in _classes and _classes[tag] is not cls:
            raise ValueError(
                f'tag 0x{tag:02x} already taken by {_classes[tag].__name__}')
        _schemas[cls] = (tag, fields)
        _classes[tag] = cls
        return cls
    return register


def _pack_str(value, name):
    if not isinstance(value, str):
        raise ValidationError(f'{name} must be text', code='field_type')
    raw = value.encode('utf-8')
    return U32.pack(len(raw)) + raw


def _encode_field(kind, value, name):
    if kind == STR:
        return _pack_str(value, name)
    if kind == OPT_STR:
        if value is None:
            return U8.pack(0)
        return U8.pack(1) + _pack_str(value, name)
    if kind == INT:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValidationError(f'{name} must be an integer', code='field_type')
        try:
            return I64.pack(value)
        except struct.error:
            raise ValidationError(f'{name} out of range', code='field_range')
    if kind == BOOL:
        return U8.pack(1 if value else 0)
    if kind == BYTES:
        if not isinstance(value, (bytes, bytearray, memoryview)):
            raise ValidationError(f'{name} must be bytes', code='field_type')
        raw = bytes(value)
        return U32.pack(len(raw)) + raw
    if isinstance(kind, ListOf):
        items = tuple(value)
        return U32.pack(len(items)) + b''.join(
            _encode_record(item, kind.record_class) for item in items)
    if isinstance(kind, RecordOf):
        return _encode_record(value, kind.record_class)
    raise ValueError(f'unknown field kind {kind!r}')


def _encode_record(record, expected=None):
    if expected is not None and not isinstance(record, expected):
        raise ValidationError(
            f'expected {expected.__name__}, got {type(record).__name__}',
            code='field_type')
    return canonical_serialize(record)


def canonical_serialize(record):
    """
    Deterministic bytes of a registered record. The record's invariants
    are checked first; a violation raises ValidationError whose code names
    the invariant.
    """
    try:
        tag, fields = _schemas[type(record)]
    except KeyError:
        raise ValidationError(
            f'{type(record).__name__} has no canonical encoding',
            code='unregistered_type')
    validate = getattr(record, 'validate', None)
    if validate is not None:
        validate()
    body = b''.join(
        _encode_field(kind, getattr(record, name), name)
        for name, kind in fields)
    return HEADER.pack(tag, len(body)) + body


class _Reader:

    def __init__(self, data):
        self.data = data
        self.pos = 0

    @property
    def exhausted(self):
        return self.pos == len(self.data)

    def take(self, size):
        end = self.pos + size
        if end > len(self.data):
            raise PassportError('MALFORMED_RECORD', 'truncated record')
        chunk = self.data[self.pos:end]
        self.pos = end
        return chunk

    def unpack(self, fmt):
        return fmt.unpack(self.take(fmt.size))[0]

    def text(self):
        raw = self.take(self.unpack(U32))
        try:
            return raw.decode('utf-8')
        except UnicodeDecodeError:
            raise PassportError('MALFORMED_RECORD', 'invalid utf-8 text')


def _decode_field(kind, reader):
    if kind == STR:
        return reader.text()
    if kind == OPT_STR:
        flag = reader.unpack(U8)
        if flag == 0:
            return None
        if flag != 1:
            raise PassportError('MALFORMED_RECORD', 'bad presence flag')
        return reader.text()
    if kind == INT:
        return reader.unpack(I64)
    if kind == BOOL:
        flag = reader.unpack(U8)
        if flag > 1:
            raise PassportError('MALFORMED_RECORD', 'bad boolean')
        return flag == 1
    if kind == BYTES:
        return reader.take(reader.unpack(U32))
    if isinstance(kind, ListOf):
        count = reader.unpack(U32)
        return tuple(
            _decode_record(reader, kind.record_class) for _ in range(count))
    if isinstance(kind, RecordOf):
        return _decode_record(reader, kind.record_class)
    raise ValueError(f'unknown field kind {kind!r}')


def _decode_record(reader, expected=None):
    tag = reader.unpack(U8)
    length = reader.unpack(U32)
    cls = _classes.get(tag)
    if cls is None:
        raise PassportError('MALFORMED_RECORD', f'unknown tag 0x{tag:02x}')
    if expected is not None and cls is not expected:
        raise PassportError(
            'MALFORMED_RECORD',
            f'expected {expected.__name__}, found {cls.__name__}')
    body = _Reader(reader.take(length))
    values = {
        name: _decode_field(kind, body) for name, kind in _schemas[cls][1]}
    if not body.exhausted:
        raise PassportError(
            'MALFORMED_RECORD', f'{cls.__name__} body has trailing bytes')
    return cls(**values)


def canonical_deserialize(data, expected=None):
    """
    Inverse of canonical_serialize. Truncated input, trailing bytes, an
    unknown tag or a record of another type than `expected` raise
    MALFORMED_RECORD.
    """
    reader = _Reader(bytes(data))
    record = _decode_record(reader, expected)
    if not reader.exhausted:
        raise PassportError('MALFORMED_RECORD', 'trailing bytes after record')
    return record
