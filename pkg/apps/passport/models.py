import logging

from django.db import models, transaction
from django.utils.translation import gettext_lazy as _
from django_countries.fields import CountryField

from db.base_model import BaseModel

from .encoding import canonical_deserialize, canonical_serialize
from .exceptions import DeviceLocked, PassportError
from .managers import DeviceManager
from .signals import device_locked
from .types import DeviceState, Passport, PassportStatus, VisaImage

logger = logging.getLogger(__name__)


class Device(BaseModel):
    """
    A traveler's handset running the passport app. The installed passport is
    kept as its canonical bytes so the stored value is exactly what gets
    hashed and sent over NFC.
    """
    device_id = models.CharField(_('device id'), max_length=64, unique=True)
    # displayed time = scenario UTC + offset, registered at app install
    clock_offset_min = models.IntegerField(_('clock offset (minutes)'), default=0)
    locked = models.BooleanField(_('locked'), default=False)
    passport_data = models.BinaryField(_('passport'), null=True, blank=True)
    presented_visa_id = models.CharField(
        _('presented visa'), max_length=64, blank=True, default='')

    objects = DeviceManager()

    class Meta:
        ordering = ('device_id',)

    def __str__(self):
        return self.device_id

    @property
    def passport(self):
        if not self.passport_data:
            return None
        return canonical_deserialize(bytes(self.passport_data), Passport)

    @property
    def has_passport(self):
        return bool(self.passport_data)

    def require_passport(self, code='NO_PASSPORT'):
        passport = self.passport
        if passport is None:
            raise PassportError(code, f'no passport installed on {self.device_id}')
        return passport

    def store_passport(self, passport):
        self.passport_data = canonical_serialize(passport)
        self.save(update_fields=['passport_data', 'updated_at'])

    def ensure_unlocked(self):
        """Every operation but inspection calls this first."""
        self.refresh_from_db(fields=['locked'])
        if self.locked:
            raise DeviceLocked(message=f'device {self.device_id} is locked')

    def lock(self, now=None):
        with transaction.atomic():
            already = type(self).objects.filter(pk=self.pk, locked=True).exists()
            self.locked = True
            self._mark_passport(PassportStatus.LOCKED)
            self.save(update_fields=['locked', 'passport_data', 'updated_at'])
        if not already:
            logger.warning(f'device {self.device_id} locked')
        device_locked.send(sender=type(self), device=self, now=now)

    def unlock(self):
        """Admin and test fixture only, travelers have no unlock path."""
        self.locked = False
        self._mark_passport(PassportStatus.ACTIVE)
        self.save(update_fields=['locked', 'passport_data', 'updated_at'])
        logger.info(f'device {self.device_id} unlocked')

    def _mark_passport(self, status):
        self.refresh_from_db(fields=['passport_data'])
        passport = self.passport
        if passport is not None and passport.status != status:
            self.passport_data = canonical_serialize(passport.with_status(status))

    def visa_image(self, visa_id):
        visa = self.device_visas.filter(visa_id=visa_id).first()
        return visa.image if visa else None

    @property
    def downloaded_visa_ids(self):
        return set(self.device_visas.values_list('visa_id', flat=True))

    def store_visa(self, visa_id, image, destination_country=''):
        visa, _ = DeviceVisa.objects.update_or_create(
            device=self, visa_id=visa_id,
            defaults={
                'media_type': image.media_type,
                'data': image.data,
                'content_hash': image.content_hash,
                'destination_country': destination_country,
            })
        return visa

    def place_visa(self, visa_id, page_no):
        passport = self.require_passport()
        placed = passport.place_visa(visa_id, page_no, self.downloaded_visa_ids)
        self.passport_data = canonical_serialize(placed)
        self.presented_visa_id = visa_id
        self.save(update_fields=['passport_data', 'presented_visa_id', 'updated_at'])
        logger.info(f'visa {visa_id} placed on page {page_no} of {self.device_id}')
        return placed

    def append_stamp(self, visa_id, stamp):
        stamped = self.require_passport().append_stamp(visa_id, stamp)
        self.store_passport(stamped)
        logger.info(
            f'{stamp.kind} stamp {stamp.airport} at {stamp.stamped_at} on {self.device_id}')
        return stamped

    def snapshot(self):
        session = self.sessions.order_by('-id').first()
        return DeviceState(
            device_id=self.device_id,
            clock_offset_min=self.clock_offset_min,
            locked=self.locked,
            passport=self.passport,
            visas=tuple(
                (visa.visa_id, visa.image)
                for visa in self.device_visas.order_by('visa_id')),
            auth_images=tuple(
                self.auth_images.order_by('index').values_list(
                    'index', 'image_hash', 'answer_hash')),
            session=session.snapshot() if session else None,
        )


class DeviceVisa(BaseModel):
    """A visa image as downloaded onto the device, bytes kept verbatim."""
    device = models.ForeignKey(
        Device, verbose_name=_('device'), on_delete=models.CASCADE,
        related_name='device_visas')
    visa_id = models.CharField(_('visa id'), max_length=64)
    media_type = models.CharField(_('media type'), max_length=64, default='image/png')
    data = models.BinaryField(_('image bytes'))
    content_hash = models.CharField(_('content hash'), max_length=64)
    destination_country = CountryField(_('destination'), blank=True)

    class Meta:
        ordering = ('device', 'visa_id')
        unique_together = ('device', 'visa_id')

    def __str__(self):
        return f'{self.visa_id} on {self.device}'

    @property
    def image(self):
        return VisaImage(bytes(self.data), self.media_type, self.content_hash)
