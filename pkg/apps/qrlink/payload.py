"""
QR data-mode layer: which of the four standard modes can carry a string,
what each segment costs in bits, and the cheapest segmentation.

Count indicators are those of versions 1-9. Matrix placement, masking and
error correction are not handled here.
"""
import string
from dataclasses import dataclass
from typing import Tuple

from django.db import models
from django.utils.translation import gettext_lazy as _

from .exceptions import QrError

MODE_INDICATOR_BITS = 4


class Mode(models.TextChoices):
    NUMERIC = 'NUM', _('Numeric')
    ALPHANUMERIC = 'ALNUM', _('Alphanumeric')
    BYTE = 'BYTE', _('Byte')
    KANJI = 'KANJI', _('Kanji')


COUNT_BITS = {
    Mode.NUMERIC: 10,
    Mode.ALPHANUMERIC: 9,
    Mode.BYTE: 8,
    Mode.KANJI: 8,
}

# 0-9 A-Z space $ % * + - . / :
ALPHANUMERIC_CHARS = frozenset(string.digits + string.ascii_uppercase + ' $%*+-./:')
NUMERIC_CHARS = frozenset(string.digits)

# tie-break order when two segmentations cost the same
MODE_ORDER = (Mode.NUMERIC, Mode.ALPHANUMERIC, Mode.BYTE, Mode.KANJI)


def is_kanji_char(char):
    """A character whose Shift-JIS form is one double-byte pair in the QR kanji ranges."""
    try:
        raw = char.encode('shift_jis')
    except UnicodeEncodeError:
        return False
    if len(raw) != 2:
        return False
    code = (raw[0] << 8) | raw[1]
    return 0x8140 <= code <= 0x9FFC or 0xE040 <= code <= 0xEBBF


def admits(mode, char):
    if mode == Mode.NUMERIC:
        return char in NUMERIC_CHARS
    if mode == Mode.ALPHANUMERIC:
        return char in ALPHANUMERIC_CHARS
    if mode == Mode.KANJI:
        return is_kanji_char(char)
    return True


def byte_length(text):
    return len(text.encode('utf-8'))


def unit_count(mode, text):
    """What the count indicator counts: bytes in byte mode, characters otherwise."""
    return byte_length(text) if mode == Mode.BYTE else len(text)


def capacity(mode):
    return (1 << COUNT_BITS[Mode(mode)]) - 1


def data_bits(mode, count):
    """Data bits for `count` units of `mode`, see unit_count."""
    if mode == Mode.NUMERIC:
        return 10 * (count // 3) + (0, 4, 7)[count % 3]
    if mode == Mode.ALPHANUMERIC:
        return 11 * (count // 2) + 6 * (count % 2)
    if mode == Mode.KANJI:
        return 13 * count
    return 8 * count


@dataclass(frozen=True)
class QrSegment:
    mode: str
    payload: str

    @property
    def data(self):
        if self.mode == Mode.KANJI:
            return self.payload.encode('shift_jis')
        return self.payload.encode('utf-8')

    def validate(self):
        if self.mode not in Mode.values:
            raise QrError('UNKNOWN_MODE', f'unknown mode {self.mode!r}')
        if not self.payload:
            raise QrError('EMPTY_INPUT', 'segment has no payload')
        bad = [char for char in self.payload if not admits(self.mode, char)]
        if bad:
            raise QrError(
                'INADMISSIBLE_SEGMENT', f'{bad[0]!r} cannot be carried in {self.mode}')
        if unit_count(self.mode, self.payload) > capacity(self.mode):
            raise QrError(
                'SEGMENT_TOO_LONG', f'{self.mode} segment exceeds {capacity(self.mode)}')


@dataclass(frozen=True)
class QrPayload:
    segments: Tuple[QrSegment, ...]
    total_bits: int

    def __str__(self):
        return payload_text(self)


def segment_cost(segment):
    return (MODE_INDICATOR_BITS + COUNT_BITS[Mode(segment.mode)]
            + data_bits(segment.mode, unit_count(segment.mode, segment.payload)))


def classify_mode(s):
    if not s:
        raise QrError('EMPTY_INPUT', 'nothing to classify')
    for mode in (Mode.NUMERIC, Mode.ALPHANUMERIC):
        if all(admits(mode, char) for char in s):
            return mode
    if all(is_kanji_char(char) for char in s):
        return Mode.KANJI
    return Mode.BYTE


def encode_payload(s):
    """
    Cheapest segmentation of `s`. best[i] is the cost of the cheapest
    encoding of s[:i]; a segment s[j:i] is tried in every mode that admits
    all of its characters and whose count indicator can hold it.
    """
    if not s:
        raise QrError('EMPTY_INPUT', 'nothing to encode')
    n = len(s)
    best = [0] + [None] * n
    choice = [None] * (n + 1)
    # start of the admissible run ending at i, per mode
    run_start = {mode: 0 for mode in MODE_ORDER}
    utf8_end = [0]
    for char in s:
        utf8_end.append(utf8_end[-1] + byte_length(char))
    for i in range(1, n + 1):
        char = s[i - 1]
        for mode in MODE_ORDER:
            if not admits(mode, char):
                run_start[mode] = i
        for j in range(i):
            if best[j] is None:
                continue
            for mode in MODE_ORDER:
                if j < run_start[mode]:
                    continue
                count = utf8_end[i] - utf8_end[j] if mode == Mode.BYTE else i - j
                if count > capacity(mode):
                    continue
                cost = best[j] + MODE_INDICATOR_BITS + COUNT_BITS[mode] + data_bits(mode, count)
                if best[i] is None or cost < best[i]:
                    best[i] = cost
                    choice[i] = (j, mode)
    segments = []
    i = n
    while i > 0:
        j, mode = choice[i]
        segments.append(QrSegment(mode, s[j:i]))
        i = j
    return QrPayload(tuple(reversed(segments)), best[n])


def decode_payload(payload):
    return ''.join(segment.payload for segment in payload.segments)


def _escape(text):
    return text.replace('\\', '\\\\').replace('|', '\\|')


def payload_text(payload):
    """`MODE:payload` segments joined by `|`, backslash escaping `|` and `\\`."""
    return '|'.join(
        f'{segment.mode}:{_escape(segment.payload)}' for segment in payload.segments)


def _split_segments(text):
    parts, current, chars = [], [], iter(text)
    for char in chars:
        if char == '\\':
            escaped = next(chars, None)
            if escaped is None:
                raise QrError('MALFORMED_PAYLOAD', 'dangling escape')
            current.append(escaped)
        elif char == '|':
            parts.append(''.join(current))
            current = []
        else:
            current.append(char)
    parts.append(''.join(current))
    return parts


def parse_payload_text(text):
    segments = []
    for part in _split_segments(text or ''):
        mode, sep, body = part.partition(':')
        if not sep:
            raise QrError('MALFORMED_PAYLOAD', f'segment {part!r} has no mode')
        segment = QrSegment(mode, body)
        segment.validate()
        segments.append(segment)
    return QrPayload(tuple(segments), sum(segment_cost(s) for s in segments))
