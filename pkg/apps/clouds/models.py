import logging
from dataclasses import asdict

from django.conf import settings
from django.core.exceptions import ValidationError
from django.db import models, transaction
from django.utils.crypto import constant_time_compare
from django.utils.translation import gettext_lazy as _
from django_countries.fields import CountryField
from django_fsm import FSMField, transition

from db.base_model import BaseModel
from passport.encoding import canonical_deserialize, canonical_serialize
from passport.types import (Passport, TrackingKind, VisaImage, VisaRecord,
                            VisaStatus, new_tracking_id)
from passport.utils import content_hash
from qrlink.payload import parse_payload_text, payload_text
from qrlink.tokens import (LinkToken, ResourceKind, mint_link_token,
                           resolve_link_token, token_to_qr)

from .exceptions import CloudError
from .managers import (AirportCloudManager, BlobManager, BookingManager,
                       EmbassyCloudManager, ReplicaManager)
from .types import Checkpoint, CompareResult, NotificationKind, SyncReport

logger = logging.getLogger(__name__)


def _as_token(token):
    return LinkToken.from_wire(token) if isinstance(token, str) else token


def _invalid(error):
    return CloudError('INVALID_ARTIFACT', '; '.join(error.messages))


class EmbassyCloud(BaseModel):
    """
    The issuing authority's cloud: applications and their tracking ids,
    issued passports and visas, visa image blobs keyed by content hash and
    the outgoing e-mail queue. Every mutation runs in one transaction.
    """
    authority_id = models.CharField(_('authority id'), max_length=32, unique=True)
    country = CountryField(_('country'))
    # signs link tokens, never leaves the cloud
    secret = models.BinaryField(_('signing secret'))

    objects = EmbassyCloudManager()

    class Meta:
        ordering = ('authority_id',)

    def __str__(self):
        return self.authority_id

    def has_resource(self, kind, resource_id):
        if kind == ResourceKind.PASSPORT_APP:
            return self.passports.filter(passport_no=resource_id).exists()
        if kind == ResourceKind.VISA_IMAGE:
            return self.visas.filter(
                visa_id=resource_id, status=VisaStatus.ISSUED).exists()
        return False

    def submit_application(self, applicant, kind, rng):
        if kind not in TrackingKind.values:
            raise CloudError('UNKNOWN_APPLICATION_KIND', f'{kind!r} is not an application kind')
        tracking_id = new_tracking_id(
            kind, rng, exists=Application.objects.filter_exists)
        self.applications.create(
            tracking_id=tracking_id.value, kind=kind, applicant=applicant)
        logger.info(f'{kind} {tracking_id.value} submitted to {self} by {applicant}')
        return tracking_id

    def track_application(self, tracking_id):
        application = self.applications.filter(tracking_id=tracking_id).first()
        if application is None:
            raise CloudError('NOT_FOUND', f'no application {tracking_id}')
        return application.status

    def _pending(self, tracking_id, kind):
        try:
            application = self.applications.select_for_update().get(tracking_id=tracking_id)
        except Application.DoesNotExist:
            raise CloudError('UNKNOWN_TRACKING_ID', f'no application {tracking_id}')
        if application.status == Application.Status.APPROVED:
            raise CloudError('ALREADY_APPROVED', f'{tracking_id} is already approved')
        if application.kind != kind:
            raise CloudError(
                'WRONG_APPLICATION_KIND', f'{tracking_id} is a {application.kind}')
        return application

    def _notify(self, application, kind, resource_kind, resource_id):
        token = mint_link_token(self, resource_kind, resource_id)
        wire = token.to_wire()
        if kind == NotificationKind.PASSPORT_READY:
            delivery = {'link': f'{settings.CLOUDPASS_DOMAIN}/passport/{wire}'}
        else:
            delivery = {'qr_text': payload_text(token_to_qr(token))}
        notification = self.notifications.create(
            recipient=application.applicant, kind=kind, token=wire, **delivery)
        logger.info(f'{kind} for {resource_id} queued to {application.applicant}')
        return notification

    def approve_passport(self, tracking_id, passport_no, holder_name, nationality,
                         issue_date, expiry_date):
        with transaction.atomic():
            application = self._pending(tracking_id, TrackingKind.PASSPORT_APPLICATION)
            if self.passports.filter(passport_no=passport_no).exists():
                raise CloudError('DUPLICATE_PASSPORT', f'{passport_no} already issued')
            try:
                passport = Passport.issue(
                    passport_no, holder_name, nationality, self.authority_id,
                    issue_date, expiry_date)
            except ValidationError as e:
                raise _invalid(e)
            self.passports.create(
                passport_no=passport_no, data=canonical_serialize(passport))
            application.approve(passport_no)
            application.save()
            return self._notify(
                application, NotificationKind.PASSPORT_READY,
                ResourceKind.PASSPORT_APP, passport_no)

    def approve_visa(self, tracking_id, passport_no, destination_country, valid_from,
                     valid_to, image, media_type='image/png', visa_id=None):
        visa_id = visa_id or f'V{tracking_id}'
        with transaction.atomic():
            application = self._pending(tracking_id, TrackingKind.VISA_APPLICATION)
            if Visa.objects.filter(visa_id=visa_id).exists():
                raise CloudError('DUPLICATE_VISA', f'{visa_id} already issued')
            record = VisaRecord(
                visa_id=visa_id,
                passport_no=passport_no,
                issuing_country=self.country.code,
                destination_country=destination_country,
                valid_from=valid_from,
                valid_to=valid_to,
                image_hash=Blob.objects.put(self, image),
            )
            try:
                record.validate()
            except ValidationError as e:
                raise _invalid(e)
            Visa.objects.create(cloud=self, media_type=media_type, **asdict(record))
            application.approve(visa_id)
            application.save()
            return self._notify(
                application, NotificationKind.VISA_READY,
                ResourceKind.VISA_IMAGE, visa_id)

    def _resolve(self, token, kind):
        token = _as_token(token)
        resource_id = resolve_link_token(token, self)
        if token.resource_kind != kind:
            raise CloudError(
                'WRONG_RESOURCE_KIND', f'token points at a {token.resource_kind}')
        return resource_id

    def download_passport_app(self, token, device):
        """
        Install the passport the token points at. A passport binds to the
        first device that installs it; installing again on that device
        leaves the booklet as it is.
        """
        device.ensure_unlocked()
        passport_no = self._resolve(token, ResourceKind.PASSPORT_APP)
        with transaction.atomic():
            record = self.passports.select_for_update().get(passport_no=passport_no)
            if record.bound_device and record.bound_device != device.device_id:
                logger.warning(
                    f'{passport_no} is bound to {record.bound_device}, refused on {device}')
                raise CloudError(
                    'DEVICE_ALREADY_BOUND', f'{passport_no} is installed on another device')
            installed = device.passport
            if installed is not None and installed.passport_no != passport_no:
                raise CloudError(
                    'DEVICE_HAS_PASSPORT', f'{device} already holds {installed.passport_no}')
            if installed is None:
                passport = record.passport.bind(device.device_id)
                record.store(passport)
                device.store_passport(passport)
        logger.info(f'passport {passport_no} installed on {device}')
        return device

    def download_visa_image(self, token, device, page_no):
        device.ensure_unlocked()
        visa_id = self._resolve(token, ResourceKind.VISA_IMAGE)
        passport = device.require_passport()
        visa = self.visas.get(visa_id=visa_id)
        if visa.passport_no != passport.passport_no:
            raise CloudError(
                'VISA_PASSPORT_MISMATCH', f'{visa_id} was issued to {visa.passport_no}')
        blob = self.blobs.filter(content_hash=visa.image_hash).first()
        if blob is None or not blob.intact:
            raise CloudError('BLOB_MISSING', f'no intact image for {visa_id}')
        image = VisaImage.of(bytes(blob.data), visa.media_type)
        # image and page placement land together or not at all
        with transaction.atomic():
            device.store_visa(visa_id, image, visa.destination_country.code)
            device.place_visa(visa_id, page_no)
        logger.info(f'visa {visa_id} downloaded to page {page_no} of {device}')
        return device

    def revoke_visa(self, visa_id):
        visa = self.visas.filter(visa_id=visa_id).first()
        if visa is None:
            raise CloudError('NOT_FOUND', f'no visa {visa_id}')
        visa.status = VisaStatus.REVOKED
        visa.save(update_fields=['status', 'updated_at'])
        logger.warning(f'visa {visa_id} revoked by {self}')
        return visa.record

    def unbind_passport(self, passport_no):
        """Admin-only: let the passport be installed on a new device."""
        with transaction.atomic():
            record = self.passports.select_for_update().filter(passport_no=passport_no).first()
            if record is None:
                raise CloudError('NOT_FOUND', f'no passport {passport_no}')
            record.store(record.passport.bind(None))
        logger.warning(f'passport {passport_no} unbound by {self}')
        return record.passport

    def export_snapshot(self):
        return {
            'authority_id': self.authority_id,
            'country': self.country.code,
            'applications': [
                {'tracking_id': a.tracking_id, 'kind': a.kind, 'applicant': a.applicant,
                 'status': a.status, 'resource_id': a.resource_id}
                for a in self.applications.order_by('tracking_id')],
            'passports': [
                {'passport_no': p.passport_no, 'bound_device': p.bound_device,
                 'data': bytes(p.data).hex()}
                for p in self.passports.order_by('passport_no')],
            'visas': [
                dict(asdict(v.record), media_type=v.media_type)
                for v in self.visas.order_by('visa_id')],
            'blobs': sorted(self.blobs.values_list('content_hash', flat=True)),
            'notifications': [
                {'recipient': n.recipient, 'kind': n.kind, 'token': n.token,
                 'link': n.link, 'qr_text': n.qr_text}
                for n in self.notifications.order_by('id')],
        }


class ApplicationQuerySet(models.QuerySet):

    def filter_exists(self, tracking_id):
        return self.filter(tracking_id=tracking_id).exists()


class Application(BaseModel):

    class Status(models.TextChoices):
        SUBMITTED = 'SUBMITTED', _('Submitted')
        APPROVED = 'APPROVED', _('Approved')

    cloud = models.ForeignKey(
        EmbassyCloud, verbose_name=_('embassy cloud'), on_delete=models.CASCADE,
        related_name='applications')
    tracking_id = models.CharField(_('tracking id'), max_length=12, unique=True)
    kind = models.CharField(_('kind'), max_length=32, choices=TrackingKind.choices)
    applicant = models.CharField(_('applicant'), max_length=254)
    status = FSMField(
        _('status'), choices=Status.choices, default=Status.SUBMITTED, protected=True)
    # passport number or visa id once approved
    resource_id = models.CharField(_('issued artifact'), max_length=64, blank=True, default='')

    objects = ApplicationQuerySet.as_manager()

    class Meta:
        ordering = ('-created_at',)

    def __str__(self):
        return f'{self.kind} {self.tracking_id}'

    @transition(field=status, source=Status.SUBMITTED, target=Status.APPROVED)
    def approve(self, resource_id):
        self.resource_id = resource_id


class PassportRecord(BaseModel):
    cloud = models.ForeignKey(
        EmbassyCloud, verbose_name=_('embassy cloud'), on_delete=models.CASCADE,
        related_name='passports')
    passport_no = models.CharField(_('passport number'), max_length=16)
    data = models.BinaryField(_('canonical passport'))
    bound_device = models.CharField(_('bound device'), max_length=64, blank=True, default='')

    class Meta:
        ordering = ('passport_no',)
        unique_together = ('cloud', 'passport_no')

    def __str__(self):
        return self.passport_no

    @property
    def passport(self):
        return canonical_deserialize(bytes(self.data), Passport)

    def store(self, passport):
        self.data = canonical_serialize(passport)
        self.bound_device = passport.bound_device or ''
        self.save(update_fields=['data', 'bound_device', 'updated_at'])


class Visa(BaseModel):
    cloud = models.ForeignKey(
        EmbassyCloud, verbose_name=_('embassy cloud'), on_delete=models.CASCADE,
        related_name='visas')
    visa_id = models.CharField(_('visa id'), max_length=64, unique=True)
    passport_no = models.CharField(_('passport number'), max_length=16)
    issuing_country = CountryField(_('issuing country'))
    destination_country = CountryField(_('destination'))
    valid_from = models.IntegerField(_('valid from'))
    valid_to = models.IntegerField(_('valid to'))
    image_hash = models.CharField(_('image hash'), max_length=64)
    media_type = models.CharField(_('media type'), max_length=64, default='image/png')
    status = models.CharField(
        _('status'), max_length=16, choices=VisaStatus.choices, default=VisaStatus.ISSUED)

    class Meta:
        ordering = ('visa_id',)

    def __str__(self):
        return self.visa_id

    @property
    def record(self):
        return VisaRecord(
            visa_id=self.visa_id,
            passport_no=self.passport_no,
            issuing_country=self.issuing_country.code,
            destination_country=self.destination_country.code,
            valid_from=self.valid_from,
            valid_to=self.valid_to,
            image_hash=self.image_hash,
            status=self.status,
        )


class Blob(BaseModel):
    cloud = models.ForeignKey(
        EmbassyCloud, verbose_name=_('embassy cloud'), on_delete=models.CASCADE,
        related_name='blobs')
    content_hash = models.CharField(_('content hash'), max_length=64)
    data = models.BinaryField(_('data'))

    objects = BlobManager()

    class Meta:
        unique_together = ('cloud', 'content_hash')

    def __str__(self):
        return self.content_hash

    @property
    def intact(self):
        return content_hash(bytes(self.data)) == self.content_hash


class Notification(BaseModel):
    """An e-mail in the embassy's outgoing queue."""
    cloud = models.ForeignKey(
        EmbassyCloud, verbose_name=_('embassy cloud'), on_delete=models.CASCADE,
        related_name='notifications')
    recipient = models.CharField(_('recipient'), max_length=254)
    kind = models.CharField(_('kind'), max_length=16, choices=NotificationKind.choices)
    token = models.TextField(_('link token'))
    link = models.TextField(_('download link'), blank=True, default='')
    qr_text = models.TextField(_('QR payload'), blank=True, default='')

    class Meta:
        ordering = ('id',)

    def __str__(self):
        return f'{self.kind} to {self.recipient}'

    @property
    def link_token(self):
        return LinkToken.from_wire(self.token)

    @property
    def qr_payload(self):
        return parse_payload_text(self.qr_text) if self.qr_text else None


class AirportCloud(BaseModel):
    """
    One airport's replica of the visas of travelers manifested through it,
    plus the desk copies captured at its immigration desks.
    """
    airport = models.CharField(_('airport'), max_length=3, unique=True)
    last_sync_date = models.IntegerField(_('last sync date'), null=True, blank=True)

    objects = AirportCloudManager()

    class Meta:
        ordering = ('airport',)

    def __str__(self):
        return self.airport

    def daily_sync(self, embassies, manifest, date):
        """
        Pull every visa manifested through this airport for travel in
        [date, date + SYNC_HORIZON_DAYS] from `embassies` (one cloud or
        several), and drop replicated visas that have since been revoked.
        Unknown visa ids are reported as dangling and skipped.
        """
        if isinstance(embassies, EmbassyCloud):
            embassies = [embassies]
        embassies = list(embassies)
        upserted, dangling = [], []
        with transaction.atomic():
            for entry in manifest.routed_through(
                    self.airport, date, date + settings.SYNC_HORIZON_DAYS):
                visa = (Visa.objects.filter(cloud__in=embassies, visa_id=entry.visa_id)
                        .select_related('cloud').first())
                if visa is None:
                    logger.warning(
                        f'MANIFEST_DANGLING: {entry.visa_id} of {entry.passport_no} '
                        f'at {self.airport} is not known to any embassy')
                    dangling.append(entry.visa_id)
                    continue
                if visa.status == VisaStatus.REVOKED:
                    continue
                self.replicated.update_or_create(
                    visa_id=visa.visa_id,
                    defaults={
                        'passport_no': visa.passport_no,
                        'image_hash': visa.image_hash,
                        'source_authority': visa.cloud.authority_id,
                        'valid_from': visa.valid_from,
                        'valid_to': visa.valid_to,
                    })
                upserted.append(visa.visa_id)
            removed = sorted(Visa.objects.filter(
                cloud__in=embassies, status=VisaStatus.REVOKED,
                visa_id__in=self.replicated.values('visa_id'),
            ).values_list('visa_id', flat=True))
            self.replicated.filter(visa_id__in=removed).delete()
            self.last_sync_date = date
            self.save(update_fields=['last_sync_date', 'updated_at'])
        report = SyncReport(
            airport=self.airport,
            date=date,
            upserted=tuple(dict.fromkeys(upserted)),
            removed=tuple(removed),
            dangling=tuple(dict.fromkeys(dangling)),
        )
        logger.info(
            f'{self.airport} synced for day {date}: {len(report.upserted)} upserted, '
            f'{len(report.removed)} removed, {len(report.dangling)} dangling')
        return report

    def replica_entry(self, visa_id):
        """(passport_no, image_hash) of a replicated visa, or None."""
        return self.replicated.as_map().get(visa_id)

    def visa_valid_on(self, visa_id, day):
        """False when `visa_id` is not replicated or `day` falls outside its window."""
        replica = self.replicated.filter(visa_id=visa_id).first()
        return replica is not None and replica.is_valid_on(day)

    def receive_desk_copy(self, visa_id, data, checkpoint, now=0):
        if checkpoint not in Checkpoint.values:
            raise CloudError('UNKNOWN_CHECKPOINT', f'{checkpoint!r} is not a checkpoint')
        digest = content_hash(bytes(data))
        self.desk_copies.update_or_create(
            visa_id=visa_id, checkpoint=checkpoint,
            defaults={'content_hash': digest, 'received_at': now})
        logger.info(f'desk copy of {visa_id} received at {self.airport} {checkpoint}')
        return digest

    def compare_visa(self, visa_id, checkpoint):
        copy = self.desk_copies.filter(visa_id=visa_id, checkpoint=checkpoint).first()
        if copy is None:
            raise CloudError('NO_DESK_COPY', f'no {checkpoint} copy of {visa_id}')
        replica = self.replicated.filter(visa_id=visa_id).first()
        if replica is None:
            result = CompareResult.NOT_FOUND
        elif constant_time_compare(copy.content_hash, replica.image_hash):
            result = CompareResult.MATCH
        else:
            result = CompareResult.MISMATCH
        if result != CompareResult.MATCH:
            logger.warning(f'{visa_id} at {self.airport} {checkpoint}: {result}')
        return result

    def export_snapshot(self):
        return {
            'airport': self.airport,
            'last_sync_date': self.last_sync_date,
            'replicated': {
                visa_id: list(entry)
                for visa_id, entry in self.replicated.as_map().items()},
            'desk_copies': [
                {'visa_id': c.visa_id, 'checkpoint': c.checkpoint,
                 'content_hash': c.content_hash, 'received_at': c.received_at}
                for c in self.desk_copies.order_by('visa_id', 'checkpoint')],
        }


class ReplicatedVisa(BaseModel):
    cloud = models.ForeignKey(
        AirportCloud, verbose_name=_('airport cloud'), on_delete=models.CASCADE,
        related_name='replicated')
    visa_id = models.CharField(_('visa id'), max_length=64)
    passport_no = models.CharField(_('passport number'), max_length=16)
    image_hash = models.CharField(_('image hash'), max_length=64)
    source_authority = models.CharField(_('source authority'), max_length=32)
    valid_from = models.IntegerField(_('valid from'))
    valid_to = models.IntegerField(_('valid to'))

    objects = ReplicaManager()

    class Meta:
        ordering = ('visa_id',)
        unique_together = ('cloud', 'visa_id')

    def __str__(self):
        return f'{self.visa_id} at {self.cloud}'

    def is_valid_on(self, day):
        return self.valid_from <= day < self.valid_to


class DeskCopy(BaseModel):
    cloud = models.ForeignKey(
        AirportCloud, verbose_name=_('airport cloud'), on_delete=models.CASCADE,
        related_name='desk_copies')
    visa_id = models.CharField(_('visa id'), max_length=64)
    checkpoint = models.CharField(_('checkpoint'), max_length=16, choices=Checkpoint.choices)
    content_hash = models.CharField(_('content hash'), max_length=64)
    received_at = models.BigIntegerField(_('received at'), default=0)

    class Meta:
        ordering = ('visa_id', 'checkpoint')
        unique_together = ('cloud', 'visa_id', 'checkpoint')

    def __str__(self):
        return f'{self.checkpoint} copy of {self.visa_id}'


class Booking(BaseModel):
    """One line of the airline manifest."""
    passport_no = models.CharField(_('passport number'), max_length=16)
    visa_id = models.CharField(_('visa id'), max_length=64)
    airport = models.CharField(_('airport'), max_length=3)
    travel_date = models.IntegerField(_('travel date'))

    objects = BookingManager()

    class Meta:
        ordering = ('travel_date', 'airport', 'visa_id')
        unique_together = ('passport_no', 'visa_id', 'airport', 'travel_date')

    def __str__(self):
        return f'{self.passport_no} via {self.airport} on day {self.travel_date}'
