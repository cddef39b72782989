"""
Scenario grammar. One command per line:

    verb subject [argument]... [key=value]...

`#` starts a comment; blank lines are skipped. Durations are one or more
`<digits><unit>` groups with units s, m, h and d (`6h30m`). Any command may
carry `expect=<CODE>`: the run then wants that command refused with CODE.
"""
import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Any, Optional, Tuple

import pyparsing as pp
from django_countries import countries

from passport.types import AIRPORT_RE

from .exceptions import ScenarioError
from .faults import FaultSpec

UNITS = {'s': 1, 'm': 60, 'h': 3600, 'd': 86400}
CODE_RE = re.compile(r'^[A-Z][A-Z0-9_]*$')

_here = pp.Empty().set_parse_action(lambda s, loc, toks: loc)

VERB = pp.Word(pp.alphas, pp.alphanums + '-')
KEY = pp.Word(pp.alphas, pp.alphanums + '_')
VALUE = (pp.QuotedString('"') | pp.Word(pp.printables, exclude_chars='="')).leave_whitespace()
WORD = pp.Word(pp.printables, exclude_chars='="')

ARGUMENT = pp.Group(_here + ~(KEY + '=') + WORD)
PARAM = pp.Group(_here + KEY + pp.Suppress(pp.Literal('=').leave_whitespace()) + VALUE)

COMMAND = (VERB('verb')
           + pp.Group(pp.ZeroOrMore(ARGUMENT))('args')
           + pp.Group(pp.ZeroOrMore(PARAM))('params'))
COMMAND.ignore(pp.python_style_comment)

DURATION = pp.Regex(r'(\d+[smhd])+')


def duration(text):
    try:
        DURATION.parse_string(text, parse_all=True)
    except pp.ParseException:
        raise ValueError(f'{text!r} is not a duration')
    return sum(int(n) * UNITS[unit] for n, unit in re.findall(r'(\d+)([smhd])', text))


def integer(text):
    return int(text)


def positive(text):
    value = int(text)
    if value < 1:
        raise ValueError(f'{text} is not positive')
    return value


def decimal(text):
    try:
        return Decimal(text)
    except InvalidOperation:
        raise ValueError(f'{text!r} is not a number')


def country(text):
    if text not in countries:
        raise ValueError(f'{text!r} is not a country code')
    return text


def airport(text):
    if not AIRPORT_RE.match(text):
        raise ValueError(f'{text!r} is not a 3-letter airport code')
    return text


def error_code(text):
    if not CODE_RE.match(text):
        raise ValueError(f'{text!r} is not an error code')
    return text


def plain(value):
    return value


@dataclass(frozen=True)
class Verb:
    args: Tuple[Tuple[str, Any], ...]
    required: Tuple[Tuple[str, Any], ...] = ()
    optional: Tuple[Tuple[str, Any], ...] = ()
    # params beyond the declared ones pass through as strings
    open_params: bool = False


TRAVELER = ('traveler', plain)
CHECK = Verb((TRAVELER, ('airport', airport)),
             optional=(('desk', plain), ('distance', decimal)))

VERBS = {
    'embassy': Verb((('authority', plain),), required=(('country', country),)),
    'airport': Verb((('airport', airport),)),
    'traveler': Verb(
        (TRAVELER,), required=(('nationality', country),),
        optional=(('offset', integer), ('device', plain), ('holder', plain),
                  ('username', plain), ('password', plain))),
    'apply-passport': Verb((TRAVELER,), required=(('authority', plain),)),
    'approve-passport': Verb(
        (TRAVELER,), optional=(('passport_no', plain), ('valid_days', positive))),
    'install-passport': Verb((TRAVELER,)),
    'apply-visa': Verb((TRAVELER,), required=(('embassy', plain),)),
    'approve-visa': Verb(
        (TRAVELER,), optional=(('destination', country), ('valid_days', positive))),
    'download-visa': Verb((TRAVELER,), required=(('page', positive),)),
    'revoke-visa': Verb((TRAVELER,)),
    'book': Verb((TRAVELER, ('airport', airport)), required=(('day', integer),)),
    'sync': Verb((('airport', airport),), optional=(('day', integer),)),
    'advance-clock': Verb((('duration', duration),)),
    'depart': CHECK,
    'arrive': CHECK,
    'tamper-visa': Verb((TRAVELER,), required=(('byte', integer),)),
    'retry': Verb((TRAVELER,)),
    'fault': Verb((('actor', plain),), required=(('kind', plain),), open_params=True),
}


@dataclass(frozen=True)
class ScenarioCommand:
    index: int
    line: int
    verb: str
    args: Tuple[Any, ...]
    params: Tuple[Tuple[str, Any], ...] = ()
    expect: Optional[str] = None
    fault: Optional[FaultSpec] = field(default=None, compare=False)

    @property
    def subject(self):
        return self.args[0]

    def option(self, key, default=None):
        return dict(self.params).get(key, default)

    def __str__(self):
        return f'{self.verb} {" ".join(str(arg) for arg in self.args)}'


def _convert(convert, value, name, line, column):
    try:
        return convert(value)
    except ValueError as e:
        raise ScenarioError(f'{name}: {e}', line, column)


def parse_line(source, lineno, index=0):
    """The command on one line, or None for a blank or comment line."""
    if not source.split('#', 1)[0].strip():
        return None
    try:
        parsed = COMMAND.parse_string(source, parse_all=True)
    except pp.ParseException as e:
        rest = source[e.loc:].split()
        found = repr(rest[0]) if rest else 'end of line'
        raise ScenarioError(f'unexpected {found}', lineno, e.col)

    verb = parsed.verb
    column = pp.col(source.index(verb), source)
    if verb not in VERBS:
        raise ScenarioError(f'unknown command {verb!r}', lineno, column)
    signature = VERBS[verb]

    args = [(loc, word) for loc, word in parsed.args]
    if len(args) != len(signature.args):
        at = (args[len(signature.args)][0] if len(args) > len(signature.args)
              else len(source.rstrip()))
        names = ' '.join(name for name, _ in signature.args)
        raise ScenarioError(f'{verb} takes {names}', lineno, pp.col(at, source))
    converted = tuple(
        _convert(convert, word, name, lineno, pp.col(loc, source))
        for (loc, word), (name, convert) in zip(args, signature.args))

    accepted = dict(signature.required + signature.optional)
    params, raw, expect = {}, {}, None
    for loc, key, value in parsed.params:
        column = pp.col(loc, source)
        if key in params or key in raw or (key == 'expect' and expect):
            raise ScenarioError(f'{key} given twice', lineno, column)
        if key == 'expect':
            expect = _convert(error_code, value, key, lineno, column)
        elif key in accepted:
            params[key] = _convert(accepted[key], value, key, lineno, column)
        elif signature.open_params:
            raw[key] = value
        else:
            raise ScenarioError(f'{verb} takes no {key}=', lineno, column)
    for key, _ in signature.required:
        if key not in params:
            raise ScenarioError(f'{verb} requires {key}=', lineno, column_of_end(source))

    fault = None
    if verb == 'fault':
        try:
            fault = FaultSpec.build(params.pop('kind'), converted[0], raw)
        except ValueError as e:
            raise ScenarioError(str(e), lineno, pp.col(source.index('kind='), source))

    return ScenarioCommand(
        index=index, line=lineno, verb=verb, args=converted,
        params=tuple(sorted(params.items())), expect=expect, fault=fault)


def column_of_end(source):
    return len(source.rstrip()) + 1


def parse_commands(text):
    commands = []
    for lineno, source in enumerate(text.splitlines(), start=1):
        command = parse_line(source, lineno, len(commands))
        if command is not None:
            commands.append(command)
    return tuple(commands)
