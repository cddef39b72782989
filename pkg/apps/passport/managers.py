from django.db import models

from .exceptions import PassportError


class DeviceManager(models.Manager):

    def get_by_device_id(self, device_id):
        try:
            return self.get(device_id=device_id)
        except self.model.DoesNotExist:
            raise PassportError('UNKNOWN_DEVICE', f'no device {device_id}')

    def register(self, device_id, clock_offset_min=0):
        """Register a handset and the offset its clock displays against UTC."""
        device, _ = self.update_or_create(
            device_id=device_id,
            defaults={'clock_offset_min': clock_offset_min})
        return device
