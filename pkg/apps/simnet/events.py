import json
import logging
from dataclasses import dataclass
from typing import Any, Tuple

from django.core.serializers.json import DjangoJSONEncoder

from immigration.types import Outcome
from passport.utils import to_iso

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScenarioEvent:
    seq: int
    ts: int
    actor: str
    event: str
    details: Tuple[Tuple[str, Any], ...] = ()

    def as_dict(self):
        # key order is part of the log format
        return {
            'seq': self.seq,
            'ts': to_iso(self.ts),
            'actor': self.actor,
            'event': self.event,
            'details': dict(self.details),
        }

    def to_json(self):
        return json.dumps(self.as_dict(), cls=DjangoJSONEncoder, separators=(',', ':'))


class EventLog:
    """Append-only audit trail of one run. `seq` counts from 1."""

    def __init__(self):
        self._events = []

    def __iter__(self):
        return iter(self._events)

    def __len__(self):
        return len(self._events)

    def __getitem__(self, index):
        return self._events[index]

    def emit(self, ts, actor, event, **details):
        if self._events and ts < self._events[-1].ts:
            raise ValueError(f'event at {ts} precedes {self._events[-1].ts}')
        entry = ScenarioEvent(
            seq=len(self._events) + 1,
            ts=ts,
            actor=actor,
            event=event,
            details=tuple(sorted((key, value) for key, value in details.items())),
        )
        self._events.append(entry)
        logger.debug(f'{entry.seq} {actor} {event}')
        return entry

    def named(self, event):
        return [entry for entry in self._events if entry.event == event]

    @property
    def outcomes(self):
        return [entry for entry in self._events if entry.event in Outcome.values]

    def summary(self):
        counts = {outcome: 0 for outcome in Outcome.values}
        for entry in self.outcomes:
            counts[entry.event] += 1
        return {'summary': {'events': len(self._events), 'outcomes': counts}}

    def lines(self):
        """The report body: every event, then the summary object."""
        yield from (entry.to_json() for entry in self._events)
        yield json.dumps(self.summary(), separators=(',', ':'))


def emit_report(log, path):
    """Write the report of `log` to `path`; a file object is written to as is."""
    text = ''.join(f'{line}\n' for line in log.lines())
    if hasattr(path, 'write'):
        path.write(text)
        return path
    with open(path, 'w', encoding='utf-8', newline='\n') as stream:
        stream.write(text)
    logger.info(f'report of {len(log)} events written to {path}')
    return path
