from django.db import models
from django.utils.translation import gettext_lazy as _

from clouds.types import Checkpoint
from db.base_model import BaseModel

from .types import Outcome


class DeskCheck(BaseModel):
    """One traveler at one immigration desk, from the first tap to the outcome."""
    desk_id = models.CharField(_('desk'), max_length=32)
    airport = models.CharField(_('airport'), max_length=3)
    checkpoint = models.CharField(_('checkpoint'), max_length=16, choices=Checkpoint.choices)
    started_at = models.BigIntegerField(_('started at'))
    device = models.ForeignKey(
        'passport.Device', verbose_name=_('device'), on_delete=models.SET_NULL,
        null=True, blank=True, related_name='desk_checks')
    outcome = models.CharField(
        _('outcome'), max_length=16, choices=Outcome.choices, blank=True, default='')
    finished_at = models.BigIntegerField(_('finished at'), null=True, blank=True)

    class Meta:
        ordering = ('started_at', 'id')

    def __str__(self):
        return f'{self.checkpoint} check at {self.airport}/{self.desk_id}'

    def finish(self, outcome, now):
        self.outcome = outcome
        self.finished_at = now
        self.save()


class PoliceAlert(BaseModel):
    desk_check = models.OneToOneField(
        DeskCheck, verbose_name=_('desk check'), on_delete=models.CASCADE,
        related_name='police_alert')
    airport = models.CharField(_('airport'), max_length=3)
    device_id = models.CharField(_('device id'), max_length=64)
    reason = models.CharField(_('reason'), max_length=64)
    raised_at = models.BigIntegerField(_('raised at'))

    class Meta:
        ordering = ('raised_at', 'id')

    def __str__(self):
        return f'Alert at {self.airport}: {self.device_id} ({self.reason})'
