"""
Scenario runner. Commands run in order against a freshly reset world; every
randomized choice draws from the stream of the actor it belongs to.
"""
import logging
from dataclasses import dataclass
from typing import Tuple

from django.conf import settings

from authflow import flow
from clouds.models import AirportCloud, Booking, EmbassyCloud
from clouds.types import Checkpoint, TravelManifest
from immigration.desk import retry_after_failure, run_check
from immigration.models import DeskCheck
from passport.exceptions import CloudPassError
from passport.models import Device
from passport.types import TrackingKind
from passport.utils import random_bytes
from qrlink.payload import parse_payload_text
from qrlink.tokens import token_from_qr

from .events import EventLog
from .exceptions import ActorError, RuntimeFault
from .faults import FaultKind
from .grammar import ScenarioCommand, parse_commands
from .world import Traveler, World

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Scenario:
    seed: int
    commands: Tuple[ScenarioCommand, ...]


@dataclass
class RunResult:
    world: World
    log: EventLog

    @property
    def outcomes(self):
        return [entry.event for entry in self.log.outcomes]


def load_scenario(text, seed=0):
    """Parse a whole scenario; nothing runs unless every line parses."""
    if not 0 <= int(seed) < 2 ** 64:
        raise ValueError(f'seed {seed} is not an unsigned 64-bit integer')
    return Scenario(seed=int(seed), commands=parse_commands(text))


class ScenarioRunner:

    def __init__(self, world):
        self.world = world

    @property
    def clock(self):
        return self.world.clock

    def execute(self, command):
        handler = getattr(self, 'do_' + command.verb.replace('-', '_'))
        try:
            handler(command)
        except CloudPassError as e:
            if command.expect != e.code:
                raise
            self.world.emit(
                str(command.subject), 'rejected', command=command.verb, code=e.code)
            return
        if command.expect:
            raise ActorError(
                'EXPECTATION_UNMET', f'{command} should have failed with {command.expect}')

    def do_embassy(self, command):
        authority = command.subject
        self.world.claim(authority)
        cloud = EmbassyCloud.objects.open(
            authority, command.option('country'), self.world.rng(authority))
        self.world.embassies[authority] = cloud
        self.world.emit(authority, 'embassy_opened', country=command.option('country'))

    def do_airport(self, command):
        code = command.subject
        self.world.claim(code)
        self.world.airports[code] = AirportCloud.objects.open(code)
        self.world.emit(code, 'airport_opened')

    def do_traveler(self, command):
        name = command.subject
        self.world.claim(name)
        offset = command.option('offset', 0)
        device = Device.objects.register(command.option('device', f'dev-{name}'), offset)
        self.world.travelers[name] = Traveler(
            name=name,
            device=device,
            nationality=command.option('nationality'),
            holder_name=command.option('holder', name.capitalize()),
            username=command.option('username', name),
            password=command.option('password', f'{name} passphrase'),
            images=self.world.enrolment_images(name),
        )
        self.world.emit(name, 'device_registered', device=device.device_id, offset_min=offset)

    def _apply(self, traveler, cloud, kind):
        tracking = cloud.submit_application(
            f'{traveler.name}@mail.cloudpass.test', kind, self.world.rng(cloud.authority_id))
        self.world.emit(
            traveler.name, 'application_submitted',
            authority=cloud.authority_id, kind=kind, tracking=tracking.value)
        return tracking.value

    def do_apply_passport(self, command):
        traveler = self.world.traveler(command.subject)
        traveler.ministry = self.world.embassy(command.option('authority'))
        traveler.passport_tracking = self._apply(
            traveler, traveler.ministry, TrackingKind.PASSPORT_APPLICATION)

    def do_approve_passport(self, command):
        traveler = self.world.traveler(command.subject)
        if not traveler.passport_tracking:
            raise ActorError('NO_APPLICATION', f'{traveler.name} applied for no passport')
        ministry = traveler.ministry
        rng = self.world.rng(ministry.authority_id)
        passport_no = command.option('passport_no') or f'P{rng.randrange(10 ** 7):07d}'
        today = self.clock.day
        mail = ministry.approve_passport(
            traveler.passport_tracking, passport_no, traveler.holder_name,
            traveler.nationality, today, today + command.option('valid_days', 3650))
        traveler.passport_no = passport_no
        traveler.passport_mail = mail
        self.world.emit(
            ministry.authority_id, 'passport_approved',
            tracking=traveler.passport_tracking, passport_no=passport_no)
        self.world.emit(ministry.authority_id, 'notified', kind=mail.kind, recipient=mail.recipient)

    def do_install_passport(self, command):
        traveler = self.world.traveler(command.subject)
        if traveler.passport_mail is None:
            raise ActorError('NO_NOTIFICATION', f'{traveler.name} has no passport link')
        device = traveler.device
        traveler.ministry.download_passport_app(traveler.passport_mail.token, device)
        self.world.emit(
            traveler.name, 'passport_installed',
            device=device.device_id, passport_no=traveler.passport_no)
        # the app asks for credentials and the ten images on first start
        if not hasattr(device, 'credential'):
            flow.enroll_credential(
                device, traveler.username, traveler.password, self.world.rng(traveler.name))
            flow.enroll_auth_images(device, traveler.images)
            self.world.emit(traveler.name, 'enrolled', images=len(traveler.images))

    def do_apply_visa(self, command):
        traveler = self.world.traveler(command.subject)
        traveler.embassy = self.world.embassy(command.option('embassy'))
        traveler.visa_tracking = self._apply(
            traveler, traveler.embassy, TrackingKind.VISA_APPLICATION)

    def do_approve_visa(self, command):
        traveler = self.world.traveler(command.subject)
        if not traveler.visa_tracking:
            raise ActorError('NO_APPLICATION', f'{traveler.name} applied for no visa')
        if not traveler.passport_no:
            raise ActorError('NO_PASSPORT', f'{traveler.name} holds no passport for the visa')
        embassy = traveler.embassy
        image = random_bytes(self.world.rng(embassy.authority_id), settings.VISA_IMAGE_SIZE)
        today = self.clock.day
        mail = embassy.approve_visa(
            traveler.visa_tracking, traveler.passport_no,
            command.option('destination', embassy.country.code),
            today, today + command.option('valid_days', 365), image)
        traveler.visa_mail = mail
        visa = embassy.visas.get(visa_id=traveler.visa_id)
        self.world.emit(
            embassy.authority_id, 'visa_approved',
            tracking=traveler.visa_tracking, visa=visa.visa_id, image_hash=visa.image_hash)
        self.world.emit(embassy.authority_id, 'notified', kind=mail.kind, recipient=mail.recipient)

    def do_download_visa(self, command):
        traveler = self.world.traveler(command.subject)
        if traveler.visa_mail is None:
            raise ActorError('NO_NOTIFICATION', f'{traveler.name} has no visa link')
        # scanned off the QR code in the mail
        token = token_from_qr(parse_payload_text(traveler.visa_mail.qr_text))
        page = command.option('page')
        traveler.embassy.download_visa_image(token, traveler.device, page)
        self.world.emit(traveler.name, 'visa_downloaded', visa=token.resource_id, page=page)

    def do_revoke_visa(self, command):
        traveler = self.world.traveler(command.subject)
        if traveler.visa_mail is None:
            raise ActorError('NO_NOTIFICATION', f'{traveler.name} holds no visa')
        traveler.embassy.revoke_visa(traveler.visa_id)
        self.world.emit(traveler.embassy.authority_id, 'visa_revoked', visa=traveler.visa_id)

    def do_book(self, command):
        traveler = self.world.traveler(command.subject)
        if not traveler.passport_no:
            raise ActorError('NO_PASSPORT', f'{traveler.name} has no passport to travel on')
        if traveler.visa_id is None:
            raise ActorError('NO_VISA', f'{traveler.name} has no visa to travel on')
        airport, day = command.args[1], command.option('day')
        Booking.objects.book_travel(traveler.passport_no, traveler.visa_id, airport, day)
        self.world.emit(traveler.name, 'booked', airport=airport, day=day, visa=traveler.visa_id)

    def do_sync(self, command):
        code = command.subject
        cloud = self.world.airport(code)
        day = command.option('day', self.clock.day)
        if self.world.armed(code, FaultKind.SKIP_SYNC):
            self.world.emit(code, 'sync_skipped', date=day)
            return
        hidden = {
            self.world.traveler(name).passport_no
            for name in self.world.travelers
            if self.world.armed(name, FaultKind.SKIP_SYNC)}
        manifest = Booking.objects.manifest()
        if hidden:
            manifest = TravelManifest(tuple(
                entry for entry in manifest.entries if entry.passport_no not in hidden))
        report = cloud.daily_sync(list(self.world.embassies.values()), manifest, day)
        self.world.emit(
            code, 'synced', date=day, upserted=list(report.upserted),
            removed=list(report.removed), dangling=list(report.dangling))

    def do_advance_clock(self, command):
        seconds = command.subject
        self.clock.advance(seconds)
        self.world.emit('clock', 'clock_advanced', seconds=seconds)

    def _check(self, command, checkpoint):
        traveler = self.world.traveler(command.subject)
        code = command.args[1]
        desk_id = command.option('desk', 'D1')
        self.world.apply_tamper(traveler)
        desk = DeskCheck(
            desk_id=desk_id, airport=code, checkpoint=checkpoint, started_at=self.clock.now)
        transcript = run_check(
            desk, traveler.device, self.world.airports.get(code),
            self.world.script_for(traveler, command.option('distance')),
            self.clock, self.world.rng(traveler.name))
        actor = f'{code}/{desk_id}'
        for event in transcript.events[:-1]:
            self.world.log.emit(
                event.ts, actor, event.detail, phase=event.phase, **dict(event.fields))
        last = transcript.events[-1]
        self.world.log.emit(
            last.ts, actor, last.detail, phase=last.phase,
            traveler=traveler.name, checkpoint=checkpoint, device=transcript.device_id)
        return transcript

    def do_depart(self, command):
        return self._check(command, Checkpoint.DEPARTURE)

    def do_arrive(self, command):
        return self._check(command, Checkpoint.ARRIVAL)

    def do_tamper_visa(self, command):
        traveler = self.world.traveler(command.subject)
        traveler.tamper(command.option('byte'))
        self.world.emit(traveler.name, 'visa_tampered', byte=command.option('byte'))

    def do_retry(self, command):
        traveler = self.world.traveler(command.subject)
        session = retry_after_failure(traveler.device, self.clock, self.world.rng(traveler.name))
        self.world.emit(traveler.name, 'session_reopened', session=session.session_id)

    def do_fault(self, command):
        self.world.arm(command.fault)


def run(scenario, faults=(), world=None):
    """
    Execute `scenario` against a reset world. `faults` are armed before the
    first command. An unexpected domain error stops the run with a
    RuntimeFault carrying the partial result.
    """
    world = world or World(scenario.seed)
    world.seed = scenario.seed
    world.reset()
    runner = ScenarioRunner(world)
    for fault in faults:
        world.arm(fault)
    for command in scenario.commands:
        try:
            runner.execute(command)
        except CloudPassError as e:
            world.emit(
                'simnet', 'runtime_fault', index=command.index, line=command.line,
                command=command.verb, code=e.code)
            logger.warning(f'scenario stopped at line {command.line}: {e}')
            raise RuntimeFault(command.index, e, RunResult(world, world.log))
    logger.info(f'scenario ran {len(scenario.commands)} commands, {len(world.log)} events')
    return RunResult(world, world.log)
