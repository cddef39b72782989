import functools
import itertools
import random

from django.test import SimpleTestCase

from qrlink.exceptions import QrError
from qrlink.payload import (Mode, QrSegment, admits, classify_mode,
                            decode_payload, encode_payload, parse_payload_text,
                            payload_text, segment_cost)


def cheapest_by_enumeration(s):
    """Every split of s, each part in its cheapest admissible mode."""
    best = None
    for cuts in itertools.product((False, True), repeat=len(s) - 1):
        parts, start = [], 0
        for i, cut in enumerate(cuts, start=1):
            if cut:
                parts.append(s[start:i])
                start = i
        parts.append(s[start:])
        total = sum(
            min(segment_cost(QrSegment(mode, part)) for mode in Mode.values
                if all(admits(mode, char) for char in part))
            for part in parts)
        best = total if best is None else min(best, total)
    return best


def cheapest_by_first_segment(s):
    """Cheapest cost of s, trying every first segment and recursing on the rest."""
    @functools.lru_cache(maxsize=None)
    def rest(start):
        if start == len(s):
            return 0
        costs = []
        for end in range(start + 1, len(s) + 1):
            part = s[start:end]
            for mode in Mode.values:
                if all(admits(mode, char) for char in part):
                    costs.append(segment_cost(QrSegment(mode, part)) + rest(end))
        return min(costs)
    return rest(0)


class TestClassifyMode(SimpleTestCase):

    def test_modes(self):
        self.assertEqual(classify_mode('12345'), Mode.NUMERIC)
        self.assertEqual(classify_mode('HELLO WORLD'), Mode.ALPHANUMERIC)
        self.assertEqual(classify_mode('hello'), Mode.BYTE)
        self.assertEqual(classify_mode('漢字'), Mode.KANJI)
        self.assertEqual(classify_mode('漢a'), Mode.BYTE)
        # half-width katakana is a single Shift-JIS byte
        self.assertEqual(classify_mode('ｱ'), Mode.BYTE)

    def test_empty(self):
        with self.assertRaises(QrError) as ctx:
            classify_mode('')
        self.assertEqual(ctx.exception.code, 'EMPTY_INPUT')


class TestSegmentCost(SimpleTestCase):

    def test_examples(self):
        self.assertEqual(segment_cost(QrSegment(Mode.NUMERIC, '12345678')), 41)
        self.assertEqual(segment_cost(QrSegment(Mode.ALPHANUMERIC, 'AC-42')), 41)
        self.assertEqual(segment_cost(QrSegment(Mode.BYTE, 'a')), 20)
        self.assertEqual(segment_cost(QrSegment(Mode.KANJI, '漢字')), 4 + 8 + 26)
        # byte mode counts utf-8 bytes
        self.assertEqual(segment_cost(QrSegment(Mode.BYTE, 'é')), 4 + 8 + 16)

    def test_plain_mode_labels(self):
        self.assertEqual(segment_cost(QrSegment('NUM', '1')), 18)


class TestEncodePayload(SimpleTestCase):

    def test_single_numeric_segment(self):
        payload = encode_payload('12345')
        self.assertEqual(payload.segments, (QrSegment(Mode.NUMERIC, '12345'),))
        self.assertEqual(payload.total_bits, 31)

    def test_kanji_beats_bytes(self):
        payload = encode_payload('漢字')
        self.assertEqual([s.mode for s in payload.segments], [Mode.KANJI])

    def test_empty(self):
        with self.assertRaises(QrError) as ctx:
            encode_payload('')
        self.assertEqual(ctx.exception.code, 'EMPTY_INPUT')

    def test_total_bits_is_sum_of_segments(self):
        payload = encode_payload('CP-0123456789ABCDEFabc漢字')
        self.assertEqual(payload.total_bits, sum(segment_cost(s) for s in payload.segments))
        for segment in payload.segments:
            segment.validate()

    def test_optimal_for_every_short_string(self):
        alphabet = '059Aa '
        for length in range(1, 6):
            for chars in itertools.product(alphabet, repeat=length):
                s = ''.join(chars)
                payload = encode_payload(s)
                self.assertEqual(payload.total_bits, cheapest_by_enumeration(s), s)
                self.assertEqual(decode_payload(payload), s)

    def test_optimal_for_random_strings(self):
        rng = random.Random(12)
        alphabet = '0123456789AZ az-:/漢é'
        for _ in range(300):
            s = ''.join(rng.choice(alphabet) for _ in range(rng.randint(1, 12)))
            self.assertEqual(encode_payload(s).total_bits, cheapest_by_enumeration(s), s)

    def test_optimal_for_every_string_over_three_modes(self):
        for length in range(1, 8):
            for chars in itertools.product('0Aa', repeat=length):
                s = ''.join(chars)
                self.assertEqual(encode_payload(s).total_bits, cheapest_by_first_segment(s), s)

    def test_optimal_for_longer_random_strings(self):
        rng = random.Random(56)
        alphabet = '0123456789AZ az-:/漢é'
        for _ in range(1000):
            s = ''.join(rng.choice(alphabet) for _ in range(rng.randint(1, 20)))
            self.assertEqual(encode_payload(s).total_bits, cheapest_by_first_segment(s), s)

    def test_oracles_agree(self):
        rng = random.Random(78)
        for _ in range(200):
            s = ''.join(rng.choice('09Aa 漢') for _ in range(rng.randint(1, 9)))
            self.assertEqual(cheapest_by_first_segment(s), cheapest_by_enumeration(s), s)

    def test_round_trip_and_soundness(self):
        rng = random.Random(34)
        alphabet = '0123456789ABCXYZ $%*+-./:abcxyz|\\漢字é'
        for _ in range(1000):
            s = ''.join(rng.choice(alphabet) for _ in range(rng.randint(1, 20)))
            payload = encode_payload(s)
            self.assertEqual(decode_payload(payload), s)
            for segment in payload.segments:
                segment.validate()
            single = classify_mode(s)
            self.assertLessEqual(
                payload.total_bits, segment_cost(QrSegment(single, s)))

    def test_long_runs_respect_capacity(self):
        payload = encode_payload('a' * 300)
        self.assertEqual(decode_payload(payload), 'a' * 300)
        self.assertTrue(all(len(s.data) <= 255 for s in payload.segments))


class TestPayloadText(SimpleTestCase):

    def test_textual_form(self):
        payload = parse_payload_text('ALNUM:CP-|NUM:2041')
        self.assertEqual(decode_payload(payload), 'CP-2041')
        self.assertEqual(payload_text(payload), 'ALNUM:CP-|NUM:2041')
        self.assertEqual(payload.total_bits, 4 + 9 + 17 + 4 + 10 + 14)

    def test_escapes_survive(self):
        payload = encode_payload('a|b\\c:d')
        self.assertEqual(decode_payload(parse_payload_text(payload_text(payload))), 'a|b\\c:d')

    def test_rejects_bad_text(self):
        for text in ('NUM:12A', 'NUM12', 'MORSE:..', 'NUM:1\\'):
            with self.assertRaises(QrError, msg=text):
                parse_payload_text(text)
