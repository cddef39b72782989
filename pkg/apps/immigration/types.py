from dataclasses import dataclass
from decimal import Decimal
from typing import Optional, Tuple

from django.db import models
from django.utils.translation import gettext_lazy as _


class Outcome(models.TextChoices):
    PERMIT = 'PERMIT', _('Permit')
    ISOLATE = 'ISOLATE', _('Isolate')
    LOCK_AND_ALERT = 'LOCK_AND_ALERT', _('Lock and alert')


class Phase(models.TextChoices):
    AUTH = 'AUTH', _('Authentication')
    NFC = 'NFC', _('NFC counter check')
    DESK_COPY = 'DESK_COPY', _('Desk copy')
    COMPARE = 'COMPARE', _('Cloud comparison')
    OUTCOME = 'OUTCOME', _('Outcome')


PHASE_ORDER = tuple(Phase)


class ImageAnswers(models.TextChoices):
    RIGHT = 'RIGHT', _('Right')
    # wrong until the attempt budget runs out
    EXHAUST = 'EXHAUST', _('Wrong until exhausted')
    # wrong until the session times out
    TIMEOUT = 'TIMEOUT', _('Wrong until timeout')


@dataclass(frozen=True)
class TranscriptEvent:
    ts: int
    phase: str
    detail: str
    fields: Tuple[Tuple[str, object], ...] = ()


@dataclass(frozen=True)
class CheckTranscript:
    desk_id: str
    airport: str
    checkpoint: str
    device_id: str
    events: Tuple[TranscriptEvent, ...]
    outcome: str

    @property
    def phases(self):
        return [event.phase for event in self.events]

    def details(self, phase):
        return [event.detail for event in self.events if event.phase == phase]


@dataclass(frozen=True)
class AgentScript:
    """
    How the traveler behaves at the desk. The defaults describe an honest
    traveler who knows every answer and holds the device on the reader.
    """
    username: str
    password: str
    answers: Tuple[str, ...]
    distance_cm: Decimal = Decimal('2.0')
    # minutes added to the time the agent reads off the device
    time_skew_min: int = 0
    image_answers: str = ImageAnswers.RIGHT
    replay_otp: bool = False
    # idle seconds between opening the session and the first answer
    oversleep_s: int = 0
    retry_on_expiry: bool = True
    max_attempts: Optional[int] = None
    retry_delay: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, 'answers', tuple(self.answers))
        object.__setattr__(self, 'distance_cm', Decimal(str(self.distance_cm)))
