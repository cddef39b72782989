import logging
from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

from django.apps import apps
from django.core.cache import caches

from immigration.types import AgentScript
from passport.types import VisaImage
from passport.utils import random_bytes

from .clock import VirtualClock
from .events import EventLog
from .exceptions import ActorError
from .faults import FaultKind
from .rng import ScenarioRandom

logger = logging.getLogger(__name__)

# dependents first, so nothing cascades into a table already emptied
RESET_APPS = ('immigration', 'authflow', 'clouds', 'passport')

IMAGE_WORDS = (
    'banyan', 'lantern', 'monsoon', 'harbour', 'kite', 'saffron', 'temple',
    'ferry', 'orchard', 'compass', 'glacier', 'violin', 'meadow', 'pebble',
)


@dataclass
class Traveler:
    """A scenario actor: the handset plus what its owner remembers and receives."""
    name: str
    device: object
    nationality: str
    holder_name: str
    username: str
    password: str
    images: List[Tuple[bytes, str]] = field(default_factory=list)
    ministry: Optional[object] = None
    passport_tracking: Optional[str] = None
    passport_mail: Optional[object] = None
    passport_no: str = ''
    embassy: Optional[object] = None
    visa_tracking: Optional[str] = None
    visa_mail: Optional[object] = None

    @property
    def answers(self):
        return tuple(answer for _, answer in self.images)

    @property
    def visa_id(self):
        return self.visa_mail.link_token.resource_id if self.visa_mail else None

    def tamper(self, offset):
        """Flip the low bit of one byte of the visa on the handset."""
        row = self.device.device_visas.filter(visa_id=self.visa_id).first()
        if row is None:
            raise ActorError('NO_VISA', f'{self.name} has no visa downloaded')
        data = bytearray(row.data)
        data[offset % len(data)] ^= 0x01
        self.device.store_visa(
            self.visa_id, VisaImage.of(bytes(data), row.media_type), row.destination_country)
        logger.info(f'visa {self.visa_id} of {self.name} tampered at byte {offset % len(data)}')


class World:
    """Everything one run touches. `reset()` empties every store."""

    def __init__(self, seed=0):
        self.seed = int(seed)
        self.reset()

    def reset(self):
        for label in RESET_APPS:
            for model in apps.get_app_config(label).get_models():
                model._base_manager.all().delete()
        caches['nfc'].clear()
        self.clock = VirtualClock()
        self.random = ScenarioRandom(self.seed)
        self.log = EventLog()
        self.embassies = {}
        self.airports = {}
        self.travelers = {}
        self.faults = defaultdict(list)
        self._tampered = set()
        logger.info(f'world reset with seed {self.seed}')

    def rng(self, actor):
        return self.random.stream(actor)

    def emit(self, actor, event, **details):
        return self.log.emit(self.clock.now, actor, event, **details)

    def _get(self, registry, key, kind):
        try:
            return registry[key]
        except KeyError:
            raise ActorError(message=f'no {kind} {key}')

    def embassy(self, authority_id):
        return self._get(self.embassies, authority_id, 'embassy')

    def airport(self, code):
        return self._get(self.airports, code, 'airport')

    def traveler(self, name):
        return self._get(self.travelers, name, 'traveler')

    def claim(self, name):
        if name in self.embassies or name in self.airports or name in self.travelers:
            raise ActorError('DUPLICATE_ACTOR', f'{name} already exists')

    def enrolment_images(self, name):
        rng = self.rng(f'{name}:images')
        words = rng.sample(IMAGE_WORDS, 10)
        return [(random_bytes(rng, 64), word) for word in words]

    def arm(self, fault):
        self.faults[fault.actor].append(fault)
        self.emit('simnet', 'fault_armed', target=fault.actor, kind=fault.kind, **dict(fault.params))

    def armed(self, actor, kind):
        return [fault for fault in self.faults.get(actor, ()) if fault.kind == kind]

    def script_for(self, traveler, distance_cm=None):
        script = AgentScript(
            username=traveler.username, password=traveler.password, answers=traveler.answers)
        if distance_cm is not None:
            script = replace(script, distance_cm=distance_cm)
        for fault in self.faults.get(traveler.name, ()):
            script = fault.apply(script)
        return script

    def apply_tamper(self, traveler):
        """An armed TAMPER_VISA_BYTE hits the handset once, before its next check."""
        for fault in self.armed(traveler.name, FaultKind.TAMPER_VISA_BYTE):
            if id(fault) in self._tampered:
                continue
            self._tampered.add(id(fault))
            traveler.tamper(fault.param('byte'))
            self.emit(traveler.name, 'visa_tampered', byte=fault.param('byte'), fault=True)

    def snapshot(self):
        return {
            'clock': self.clock.now,
            'embassies': [cloud.export_snapshot() for cloud in self.embassies.values()],
            'airports': [cloud.export_snapshot() for cloud in self.airports.values()],
            'devices': {
                name: _device_state(traveler.device)
                for name, traveler in self.travelers.items()},
        }


def _device_state(device):
    device = type(device).objects.get(pk=device.pk)
    passport = device.passport
    return {
        'device_id': device.device_id,
        'locked': device.locked,
        'passport_no': passport.passport_no if passport else None,
        'stamps': [
            {'kind': s.kind, 'airport': s.airport, 'stamped_at': s.stamped_at}
            for s in (passport.stamps if passport else ())],
    }
