from django.dispatch import receiver

from passport.models import Device
from passport.signals import device_locked

from .models import AuthSession


@receiver(device_locked, sender=Device)
def terminate_sessions_on_lock(sender, device, now=None, **kwargs):
    for session in AuthSession.objects.live().filter(device=device):
        session.terminate(now)
        session.save()
