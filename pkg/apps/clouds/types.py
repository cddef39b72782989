from dataclasses import dataclass
from typing import Tuple

from django.db import models
from django.utils.translation import gettext_lazy as _


class Checkpoint(models.TextChoices):
    DEPARTURE = 'DEPARTURE', _('Departure')
    ARRIVAL = 'ARRIVAL', _('Arrival')


class CompareResult(models.TextChoices):
    MATCH = 'MATCH', _('Match')
    MISMATCH = 'MISMATCH', _('Mismatch')
    NOT_FOUND = 'NOT_FOUND', _('Not found')


class NotificationKind(models.TextChoices):
    PASSPORT_READY = 'PASSPORT_READY', _('Passport ready')
    VISA_READY = 'VISA_READY', _('Visa ready')


@dataclass(frozen=True)
class ManifestEntry:
    passport_no: str
    visa_id: str
    airport: str
    travel_date: int


@dataclass(frozen=True)
class TravelManifest:
    """The airlines' list of who travels through which airport on which day."""
    entries: Tuple[ManifestEntry, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'entries', tuple(self.entries))

    @classmethod
    def from_bookings(cls, bookings):
        return cls(tuple(
            ManifestEntry(b.passport_no, b.visa_id, b.airport, b.travel_date)
            for b in bookings))

    def routed_through(self, airport, first_day, last_day):
        return sorted(
            (entry for entry in self.entries
             if entry.airport == airport and first_day <= entry.travel_date <= last_day),
            key=lambda entry: (entry.visa_id, entry.travel_date, entry.passport_no))


@dataclass(frozen=True)
class SyncReport:
    airport: str
    date: int
    upserted: Tuple[str, ...]
    removed: Tuple[str, ...]
    dangling: Tuple[str, ...]
