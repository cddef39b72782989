from django.dispatch import Signal

# sent with `device` and `now` once a device has been locked
device_locked = Signal()
