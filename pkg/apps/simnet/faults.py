from dataclasses import dataclass, replace
from typing import Any, Tuple

from django.db import models
from django.utils.translation import gettext_lazy as _

from immigration.types import ImageAnswers

REQUIRED = object()


class FaultKind(models.TextChoices):
    TAMPER_VISA_BYTE = 'TAMPER_VISA_BYTE', _('Flip one byte of the downloaded visa')
    WRONG_IMAGE_ANSWER = 'WRONG_IMAGE_ANSWER', _('Answer every image prompt wrongly')
    WRONG_TIME = 'WRONG_TIME', _('Submit a skewed displayed time')
    REPLAY_OTP = 'REPLAY_OTP', _('Redeem the transaction OTP twice')
    SKIP_SYNC = 'SKIP_SYNC', _('Leave the traveler or airport out of the daily sync')
    OVERSLEEP_SESSION = 'OVERSLEEP_SESSION', _('Idle past the session timeout')


def _boolean(text):
    lowered = str(text).lower()
    if lowered in ('true', 'yes', '1'):
        return True
    if lowered in ('false', 'no', '0'):
        return False
    raise ValueError(f'{text!r} is not a boolean')


def _until(text):
    if text not in (ImageAnswers.EXHAUST, ImageAnswers.TIMEOUT):
        raise ValueError(f'until must be EXHAUST or TIMEOUT, not {text!r}')
    return ImageAnswers(text)


# per kind: parameter -> (converter, default)
PARAMS = {
    FaultKind.TAMPER_VISA_BYTE: {'byte': (int, REQUIRED)},
    FaultKind.WRONG_IMAGE_ANSWER: {'until': (_until, ImageAnswers.EXHAUST)},
    FaultKind.WRONG_TIME: {'skew': (int, 60)},
    FaultKind.REPLAY_OTP: {},
    FaultKind.SKIP_SYNC: {},
    FaultKind.OVERSLEEP_SESSION: {'seconds': (int, 601), 'retry': (_boolean, True)},
}


@dataclass(frozen=True)
class FaultSpec:
    kind: str
    actor: str
    params: Tuple[Tuple[str, Any], ...] = ()

    @classmethod
    def build(cls, kind, actor, raw=None):
        """Validate `raw` string params against the kind and fill in defaults."""
        if kind not in FaultKind.values:
            raise ValueError(f'unknown fault kind {kind!r}')
        kind = FaultKind(kind)
        raw = dict(raw or {})
        accepted = PARAMS[kind]
        unknown = sorted(set(raw) - set(accepted))
        if unknown:
            raise ValueError(f'{kind} takes no parameter {unknown[0]!r}')
        params = {}
        for key, (convert, default) in accepted.items():
            if key in raw:
                params[key] = convert(raw[key])
            elif default is REQUIRED:
                raise ValueError(f'{kind} requires {key}=')
            else:
                params[key] = default
        return cls(kind, actor, tuple(sorted(params.items())))

    @classmethod
    def parse(cls, text):
        """`KIND:actor[:key=value[,key=value]...]`, the command-line form."""
        parts = text.split(':', 2)
        if len(parts) < 2 or not parts[1]:
            raise ValueError(f'{text!r} is not KIND:actor[:key=value,...]')
        raw = {}
        if len(parts) == 3 and parts[2]:
            for pair in parts[2].split(','):
                key, sep, value = pair.partition('=')
                if not sep or not key or not value:
                    raise ValueError(f'{pair!r} is not key=value')
                raw[key] = value
        return cls.build(parts[0], parts[1], raw)

    def param(self, key):
        return dict(self.params)[key]

    def apply(self, script):
        """The agent script with this fault's behaviour switched on."""
        if self.kind == FaultKind.WRONG_IMAGE_ANSWER:
            return replace(script, image_answers=self.param('until'))
        if self.kind == FaultKind.WRONG_TIME:
            return replace(script, time_skew_min=self.param('skew'))
        if self.kind == FaultKind.REPLAY_OTP:
            return replace(script, replay_otp=True)
        if self.kind == FaultKind.OVERSLEEP_SESSION:
            return replace(
                script, oversleep_s=self.param('seconds'), retry_on_expiry=self.param('retry'))
        return script
