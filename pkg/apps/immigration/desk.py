"""
The immigration desk. A check drives the traveler's agent through session
authentication and the transaction OTP, taps the device on the desk reader,
uploads the desk copy of the visa, compares it in the airport cloud and
settles on one outcome:

    NFC-layer or authentication failure   LOCK_AND_ALERT
    comparison MISMATCH or NOT_FOUND      ISOLATE
    passport expired, visa out of window  ISOLATE
    comparison MATCH                      PERMIT (arrivals are stamped first)

Departure and arrival run the same steps.
"""
import logging

from django.conf import settings

from authflow import flow
from authflow.exceptions import AuthError
from authflow.models import AuthSession
from clouds.types import Checkpoint, CompareResult
from nfc import reader
from nfc.exceptions import NfcError
from passport.exceptions import DeviceLocked
from passport.types import PassportStatus, StampEntry, StampKind
from passport.utils import displayed_time, virtual_day

from .exceptions import CheckError
from .models import PoliceAlert
from .types import (CheckTranscript, ImageAnswers, Outcome, Phase,
                    TranscriptEvent)

logger = logging.getLogger(__name__)

State = AuthSession.State

WRONG_ANSWER = 'i do not remember'

# refusals the traveler may simply try again
RETRYABLE = ('BAD_TIME', 'BAD_CAPTCHA', 'BAD_CREDENTIALS', 'BAD_ANSWER')


class AuthFailed(Exception):

    def __init__(self, code):
        super().__init__(code)
        self.code = code


class CounterCheck:
    """One run of the desk protocol; `clock` needs `now` and `advance(seconds)`."""

    def __init__(self, desk, device, airport_cloud, script, clock, rng):
        self.desk = desk
        self.device = device
        self.cloud = airport_cloud
        self.script = script
        self.clock = clock
        self.rng = rng
        self.events = []
        self.channel = None
        self.session = None
        self.max_attempts = script.max_attempts or settings.AGENT_MAX_ATTEMPTS
        self.retry_delay = (settings.AGENT_RETRY_DELAY if script.retry_delay is None
                            else script.retry_delay)

    def record(self, phase, detail, **fields):
        self.events.append(TranscriptEvent(
            self.clock.now, phase, detail, tuple(sorted(fields.items()))))

    def run(self):
        if self.cloud is None or self.cloud.airport != self.desk.airport:
            raise CheckError(
                'DESK_MISCONFIGURED', f'desk {self.desk.desk_id} has no {self.desk.airport} cloud')
        self.desk.device = self.device
        self.desk.save()
        logger.info(f'{self.desk} started for {self.device}')
        try:
            # a failed authentication still goes to the tap, the device refuses it
            self.authenticate()
            result = self.counter_check()
        except (NfcError, DeviceLocked) as e:
            return self.finish(self.lock_and_alert(e.code))

        self.cloud.receive_desk_copy(
            result.visa_id, result.image, self.desk.checkpoint, self.clock.now)
        self.record(Phase.DESK_COPY, 'uploaded', visa=result.visa_id)

        compared = self.compare(result)
        if compared != CompareResult.MATCH:
            logger.warning(f'{self.device} isolated at {self.desk}: {compared}')
            return self.finish(Outcome.ISOLATE)

        refusal = self.check_validity(result)
        if refusal is not None:
            logger.warning(f'{self.device} isolated at {self.desk}: {refusal}')
            return self.finish(Outcome.ISOLATE)

        if self.desk.checkpoint == Checkpoint.ARRIVAL:
            try:
                self.stamp_arrival()
            except (NfcError, DeviceLocked) as e:
                return self.finish(self.lock_and_alert(e.code))
        return self.finish(Outcome.PERMIT)

    def authenticate(self):
        """Phase 1. True once the visa is visible and the transaction OTP redeemed."""
        try:
            self.session = flow.open_session(self.device, self.clock.now, self.rng)
        except AuthError as e:
            self.record(Phase.AUTH, 'auth_failed', code=e.code)
            return False
        self.record(Phase.AUTH, 'session_opened', session=self.session.session_id)
        if self.script.oversleep_s:
            self.clock.advance(self.script.oversleep_s)
            self.record(Phase.AUTH, 'idle', seconds=self.script.oversleep_s)
        retried = False
        while True:
            try:
                self.walk_session()
                break
            except AuthFailed as failure:
                if (failure.code == 'SESSION_EXPIRED' and self.script.retry_on_expiry
                        and not retried):
                    retried = True
                    self.session = retry_after_failure(self.device, self.clock, self.rng)
                    self.record(Phase.AUTH, 'session_reopened', session=self.session.session_id)
                    continue
                logger.warning(f'{self.device} failed authentication: {failure.code}')
                self.record(Phase.AUTH, 'auth_failed', code=failure.code)
                return False
        self.transaction_otp()
        return True

    def walk_session(self):
        attempts = 0
        while self.session.state != State.VISA_VISIBLE:
            try:
                self.session = self.step(self.session)
            except AuthError as e:
                self.record(Phase.AUTH, 'rejected', code=e.code, state=self.session.state)
                if e.code not in RETRYABLE:
                    raise AuthFailed(e.code)
                attempts += 1
                waits_out = (e.code == 'BAD_ANSWER'
                             and self.script.image_answers == ImageAnswers.TIMEOUT)
                if attempts >= self.max_attempts and not waits_out:
                    raise AuthFailed('ATTEMPTS_EXHAUSTED')
                self.clock.advance(self.retry_delay)

    def step(self, session):
        now = self.clock.now
        if session.state == State.TIME_AUTH_PENDING:
            # the agent reads the time off its own device
            shown = displayed_time(
                now + self.script.time_skew_min * 60, self.device.clock_offset_min)
            session = flow.verify_time_auth(
                session, shown, session.pending_captcha.text, self.device, now)
            self.record(Phase.AUTH, 'time_ok', shown=shown)
        elif session.state == State.CREDENTIALS_PENDING:
            session = flow.verify_credentials(
                session, self.script.username, self.script.password, now)
            self.record(Phase.AUTH, 'credentials_ok')
        elif session.state == State.PASSPORT_VISIBLE:
            session, index = flow.begin_image_auth(session, self.device, self.rng, now)
            self.record(Phase.AUTH, 'image_prompted', index=index)
        elif session.state == State.IMAGE_AUTH_PENDING:
            if self.script.image_answers == ImageAnswers.RIGHT:
                answer = self.script.answers[session.pending_image_index]
            else:
                answer = WRONG_ANSWER
            session = flow.verify_image_answer(session, self.device, answer, now)
            self.record(Phase.AUTH, 'visa_visible')
        else:
            raise AuthFailed('WRONG_STATE')
        return session

    def transaction_otp(self):
        transaction_id = f'{self.desk.desk_id}:{self.desk.started_at}:{self.session.session_id}'
        otp = flow.issue_otp(transaction_id, self.rng, self.clock.now)
        self.record(Phase.AUTH, 'otp_issued', transaction=transaction_id)
        flow.redeem_otp(otp.code, transaction_id, self.clock.now)
        self.record(Phase.AUTH, 'otp_redeemed', transaction=transaction_id)
        if self.script.replay_otp:
            try:
                flow.redeem_otp(otp.code, transaction_id, self.clock.now)
            except AuthError as e:
                self.record(Phase.AUTH, 'rejected', code=e.code, replay=True)

    def counter_check(self):
        """Phase 2."""
        now = self.clock.now
        self.channel = reader.establish(
            self.desk.desk_id, self.device, self.script.distance_cm, now)
        self.record(Phase.NFC, 'channel_established',
                    distance_cm=str(self.script.distance_cm))
        result = reader.tap_check(self.channel, self.device, now)
        self.record(Phase.NFC, 'checked', visa=result.visa_id,
                    passport=result.summary.passport_no, image_hash=result.image_hash)
        return result

    def compare(self, result):
        """Phase 4, including the replica's passport number against the device's."""
        compared = self.cloud.compare_visa(result.visa_id, self.desk.checkpoint)
        fields = {}
        if compared == CompareResult.MATCH:
            passport_no, _ = self.cloud.replica_entry(result.visa_id)
            if passport_no != result.summary.passport_no:
                compared = CompareResult.MISMATCH
                fields['field'] = 'passport_no'
        self.record(Phase.COMPARE, 'compared', result=compared, visa=result.visa_id, **fields)
        return compared

    def check_validity(self, result):
        """The refusal code when the passport or the visa is not valid today, else None."""
        day = virtual_day(self.clock.now)
        status = result.summary.effective_status(day)
        if status != PassportStatus.ACTIVE:
            refusal = f'PASSPORT_{PassportStatus(status).value}'
        elif not self.cloud.visa_valid_on(result.visa_id, day):
            refusal = 'VISA_NOT_VALID'
        else:
            return None
        self.record(Phase.COMPARE, 'refused', reason=refusal, visa=result.visa_id, day=day)
        return refusal

    def stamp_arrival(self):
        now = self.clock.now
        stamp = StampEntry(StampKind.ARRIVAL, self.desk.airport, now)
        ack = reader.tap_stamp(self.channel, self.device, stamp, now)
        self.record(Phase.OUTCOME, 'stamped', kind=stamp.kind, page=ack.page_no, at=now)

    def lock_and_alert(self, reason):
        now = self.clock.now
        self.device.refresh_from_db(fields=['locked'])
        if self.channel is None and not self.device.locked:
            try:
                # officer places the device on the reader
                self.channel = reader.establish(self.desk.desk_id, self.device, 0, now)
            except NfcError:
                self.device.lock(now)
        if self.channel is not None:
            ack = reader.send_lock(self.channel, self.device, now)
            self.record(Phase.OUTCOME, 'device_locked', newly_locked=ack.newly_locked)
        PoliceAlert.objects.create(
            desk_check=self.desk,
            airport=self.desk.airport,
            device_id=self.device.device_id,
            reason=reason,
            raised_at=now,
        )
        logger.warning(f'police alerted at {self.desk.airport}: {self.device} ({reason})')
        self.record(Phase.OUTCOME, 'police_alerted', reason=reason)
        return Outcome.LOCK_AND_ALERT

    def finish(self, outcome):
        now = self.clock.now
        if self.channel is not None:
            reader.close(self.channel)
        if outcome != Outcome.LOCK_AND_ALERT and self.session is not None:
            flow.terminate_session(self.session, now)
        self.record(Phase.OUTCOME, outcome)
        self.desk.finish(outcome, now)
        logger.info(f'{self.desk}: {self.device} {outcome}')
        return CheckTranscript(
            desk_id=self.desk.desk_id,
            airport=self.desk.airport,
            checkpoint=self.desk.checkpoint,
            device_id=self.device.device_id,
            events=tuple(self.events),
            outcome=outcome,
        )


def run_check(desk, device, airport_cloud, script, clock, rng):
    return CounterCheck(desk, device, airport_cloud, script, clock, rng).run()


def retry_after_failure(device, clock, rng):
    """Start authentication over: a brand-new session, nothing carried over."""
    device.ensure_unlocked()
    session = flow.open_session(device, clock.now, rng)
    logger.info(f'{device} starts over with session {session.session_id}')
    return session
