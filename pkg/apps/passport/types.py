import re
from dataclasses import dataclass, replace
from typing import Optional, Tuple

from django.conf import settings
from django.core.exceptions import ValidationError
from django.db import models
from django.utils.translation import gettext_lazy as _
from django_countries import countries

from .encoding import BYTES, INT, OPT_STR, STR, ListOf, canonical
from .exceptions import PassportError
from .utils import content_hash, random_string

TRACKING_ID_RE = re.compile(r'^[A-Z0-9]{12}$')
HEX_DIGEST_RE = re.compile(r'^[0-9a-f]{64}$')
AIRPORT_RE = re.compile(r'^[A-Z]{3}$')


class TrackingKind(models.TextChoices):
    PASSPORT_APPLICATION = 'PASSPORT_APPLICATION', _('Passport application')
    VISA_APPLICATION = 'VISA_APPLICATION', _('Visa application')


class PassportStatus(models.TextChoices):
    ACTIVE = 'ACTIVE', _('Active')
    LOCKED = 'LOCKED', _('Locked')
    EXPIRED = 'EXPIRED', _('Expired')


class PageContent(models.TextChoices):
    EMPTY = 'EMPTY', _('Empty')
    VISA_SLOT = 'VISA_SLOT', _('Visa slot')
    STAMPS = 'STAMPS', _('Stamps')


class StampKind(models.TextChoices):
    ARRIVAL = 'ARRIVAL', _('Arrival')
    DEPARTURE = 'DEPARTURE', _('Departure')


class VisaStatus(models.TextChoices):
    ISSUED = 'ISSUED', _('Issued')
    REVOKED = 'REVOKED', _('Revoked')


def _tuple(record, name):
    object.__setattr__(record, name, tuple(getattr(record, name)))


def _check_country(code, field):
    if code not in countries:
        raise ValidationError(
            f'{field} {code!r} is not a country code', code='country_code')


def _check_digest(value, field):
    if not HEX_DIGEST_RE.match(value or ''):
        raise ValidationError(
            f'{field} must be 64 lowercase hex characters', code='hex_digest')


@canonical(0x10, ('value', STR), ('kind', STR))
@dataclass(frozen=True)
class TrackingId:
    value: str
    kind: str

    def __str__(self):
        return self.value

    def validate(self):
        if not TRACKING_ID_RE.match(self.value):
            raise ValidationError(
                f'tracking id {self.value!r} must be 12 of A-Z 0-9',
                code='tracking_id_format')
        if self.kind not in TrackingKind.values:
            raise ValidationError(
                f'unknown tracking kind {self.kind!r}', code='tracking_kind')


def new_tracking_id(kind, rng, exists=None):
    """
    Draw a fresh id from the scenario rng. `exists` is the issuing
    authority's lookup; a collision simply draws again.
    """
    while True:
        value = random_string(rng, 12)
        if exists is None or not exists(value):
            return TrackingId(value, kind)


@canonical(0x11, ('kind', STR), ('airport', STR), ('stamped_at', INT))
@dataclass(frozen=True)
class StampEntry:
    kind: str
    airport: str
    stamped_at: int

    def validate(self):
        if self.kind not in StampKind.values:
            raise ValidationError(
                f'unknown stamp kind {self.kind!r}', code='stamp_kind')
        if not AIRPORT_RE.match(self.airport):
            raise ValidationError(
                f'airport {self.airport!r} is not a 3-letter code',
                code='airport_code')
        if self.stamped_at < 0:
            raise ValidationError(
                'stamped_at precedes the epoch', code='stamp_time')


@canonical(0x12, ('page_no', INT), ('content', STR), ('visa_id', STR),
           ('stamps', ListOf(StampEntry)))
@dataclass(frozen=True)
class PassportPage:
    page_no: int
    content: str = PageContent.EMPTY
    visa_id: str = ''
    stamps: Tuple[StampEntry, ...] = ()

    def __post_init__(self):
        _tuple(self, 'stamps')

    @property
    def is_empty(self):
        return self.content == PageContent.EMPTY

    def validate(self):
        if self.page_no < 1:
            raise ValidationError(
                f'page number {self.page_no} is not positive', code='page_number')
        if self.content not in PageContent.values:
            raise ValidationError(
                f'unknown page content {self.content!r}', code='page_content')
        if self.content == PageContent.VISA_SLOT and not self.visa_id:
            raise ValidationError(
                f'visa slot on page {self.page_no} has no visa id',
                code='visa_slot_id')
        if self.content != PageContent.VISA_SLOT and self.visa_id:
            raise ValidationError(
                f'page {self.page_no} names a visa but is not a visa slot',
                code='visa_slot_id')
        if self.content == PageContent.EMPTY and self.stamps:
            raise ValidationError(
                f'empty page {self.page_no} carries stamps', code='page_content')
        for stamp in self.stamps:
            stamp.validate()
        times = [stamp.stamped_at for stamp in self.stamps]
        if times != sorted(times):
            raise ValidationError(
                f'stamps on page {self.page_no} go back in time',
                code='stamp_order')


def _effective_status(status, expiry_date, day):
    if status == PassportStatus.ACTIVE and expiry_date < day:
        return PassportStatus.EXPIRED
    return status


@canonical(0x16, ('passport_no', STR), ('holder_name', STR),
           ('nationality', STR), ('issuing_authority', STR),
           ('expiry_date', INT), ('status', STR), ('bound_device', OPT_STR))
@dataclass(frozen=True)
class PassportSummary:
    """What the device hands a desk reader in place of the full booklet."""
    passport_no: str
    holder_name: str
    nationality: str
    issuing_authority: str
    expiry_date: int
    status: str
    bound_device: Optional[str] = None

    def effective_status(self, day):
        return _effective_status(self.status, self.expiry_date, day)

    def validate(self):
        if not self.passport_no:
            raise ValidationError('passport number missing', code='passport_no')
        _check_country(self.nationality, 'nationality')
        if self.status not in PassportStatus.values:
            raise ValidationError(
                f'unknown passport status {self.status!r}',
                code='passport_status')


@canonical(0x13, ('passport_no', STR), ('holder_name', STR),
           ('nationality', STR), ('issuing_authority', STR),
           ('issue_date', INT), ('expiry_date', INT),
           ('pages', ListOf(PassportPage)), ('bound_device', OPT_STR),
           ('status', STR))
@dataclass(frozen=True)
class Passport:
    passport_no: str
    holder_name: str
    nationality: str
    issuing_authority: str
    issue_date: int
    expiry_date: int
    pages: Tuple[PassportPage, ...] = ()
    bound_device: Optional[str] = None
    status: str = PassportStatus.ACTIVE

    def __post_init__(self):
        _tuple(self, 'pages')

    @classmethod
    def issue(cls, passport_no, holder_name, nationality, issuing_authority,
              issue_date, expiry_date, page_count=None):
        """A new booklet of `PASSPORT_PAGE_COUNT` empty pages."""
        page_count = page_count or settings.PASSPORT_PAGE_COUNT
        passport = cls(
            passport_no=passport_no,
            holder_name=holder_name,
            nationality=nationality,
            issuing_authority=issuing_authority,
            issue_date=issue_date,
            expiry_date=expiry_date,
            pages=tuple(PassportPage(no) for no in range(1, page_count + 1)),
        )
        passport.validate()
        return passport

    def page(self, page_no):
        if 1 <= page_no <= len(self.pages):
            return self.pages[page_no - 1]
        return None

    def visa_page(self, visa_id):
        for page in self.pages:
            if page.content == PageContent.VISA_SLOT and page.visa_id == visa_id:
                return page
        return None

    @property
    def visa_ids(self):
        return [page.visa_id for page in self.pages
                if page.content == PageContent.VISA_SLOT]

    @property
    def stamps(self):
        """Stamp history across every page, oldest first."""
        history = [stamp for page in self.pages for stamp in page.stamps]
        return sorted(history, key=lambda stamp: stamp.stamped_at)

    @property
    def latest_stamp_at(self):
        history = self.stamps
        return history[-1].stamped_at if history else None

    def effective_status(self, day):
        return _effective_status(self.status, self.expiry_date, day)

    def with_status(self, status):
        return replace(self, status=status)

    def summary(self):
        return PassportSummary(
            passport_no=self.passport_no,
            holder_name=self.holder_name,
            nationality=self.nationality,
            issuing_authority=self.issuing_authority,
            expiry_date=self.expiry_date,
            status=self.status,
            bound_device=self.bound_device,
        )

    def _with_page(self, new_page):
        pages = list(self.pages)
        pages[new_page.page_no - 1] = new_page
        return replace(self, pages=tuple(pages))

    def place_visa(self, visa_id, page_no, downloaded):
        """
        Put a downloaded visa on an empty page. `downloaded` is the set of
        visa ids the holding device has stored.
        """
        page = self.page(page_no)
        if page is None:
            raise PassportError(
                'NO_SUCH_PAGE', f'page {page_no} not in a {len(self.pages)}-page passport')
        if not page.is_empty:
            raise PassportError('PAGE_OCCUPIED', f'page {page_no} is not empty')
        if visa_id not in downloaded:
            raise PassportError(
                'VISA_NOT_DOWNLOADED', f'visa {visa_id} is not on the device')
        if self.visa_page(visa_id) is not None:
            raise PassportError(
                'VISA_ALREADY_PLACED', f'visa {visa_id} already has a page')
        return self._with_page(
            replace(page, content=PageContent.VISA_SLOT, visa_id=visa_id))

    def append_stamp(self, visa_id, stamp):
        page = self.visa_page(visa_id)
        if page is None:
            raise PassportError(
                'NO_SUCH_VISA_PAGE', f'no page holds visa {visa_id}')
        latest = self.latest_stamp_at
        if latest is not None and stamp.stamped_at < latest:
            raise PassportError(
                'STAMP_OUT_OF_ORDER',
                f'stamp at {stamp.stamped_at} precedes latest stamp at {latest}')
        stamp.validate()
        return self._with_page(replace(page, stamps=page.stamps + (stamp,)))

    def bind(self, device_id):
        return replace(self, bound_device=device_id)

    def validate(self):
        if not self.passport_no:
            raise ValidationError('passport number missing', code='passport_no')
        _check_country(self.nationality, 'nationality')
        if self.expiry_date <= self.issue_date:
            raise ValidationError(
                'expiry date must follow issue date', code='expiry_after_issue')
        if self.status not in PassportStatus.values:
            raise ValidationError(
                f'unknown passport status {self.status!r}',
                code='passport_status')
        numbers = [page.page_no for page in self.pages]
        if numbers != list(range(1, len(numbers) + 1)):
            raise ValidationError(
                'page numbers must run 1..N without gaps', code='page_numbers')
        seen = set()
        for page in self.pages:
            page.validate()
            if page.content != PageContent.VISA_SLOT:
                continue
            if page.visa_id in seen:
                raise ValidationError(
                    f'visa {page.visa_id} occupies two pages',
                    code='visa_slot_unique')
            seen.add(page.visa_id)


@canonical(0x14, ('data', BYTES), ('media_type', STR), ('content_hash', STR))
@dataclass(frozen=True)
class VisaImage:
    data: bytes
    media_type: str
    content_hash: str

    @classmethod
    def of(cls, data, media_type='image/png'):
        data = bytes(data)
        return cls(data, media_type, content_hash(data))

    @property
    def intact(self):
        return content_hash(self.data) == self.content_hash

    def validate(self):
        _check_digest(self.content_hash, 'content_hash')
        if not self.intact:
            raise ValidationError(
                'content hash does not match image bytes', code='content_hash')


@canonical(0x15, ('visa_id', STR), ('passport_no', STR),
           ('issuing_country', STR), ('destination_country', STR),
           ('valid_from', INT), ('valid_to', INT), ('image_hash', STR),
           ('status', STR))
@dataclass(frozen=True)
class VisaRecord:
    visa_id: str
    passport_no: str
    issuing_country: str
    destination_country: str
    valid_from: int
    valid_to: int
    image_hash: str
    status: str = VisaStatus.ISSUED

    def validate(self):
        if not self.visa_id:
            raise ValidationError('visa id missing', code='visa_id')
        if not self.passport_no:
            raise ValidationError('passport number missing', code='passport_no')
        _check_country(self.issuing_country, 'issuing_country')
        _check_country(self.destination_country, 'destination_country')
        if self.valid_to <= self.valid_from:
            raise ValidationError(
                'valid_to must follow valid_from', code='validity_window')
        _check_digest(self.image_hash, 'image_hash')
        if self.status not in VisaStatus.values:
            raise ValidationError(
                f'unknown visa status {self.status!r}', code='visa_status')


@dataclass(frozen=True)
class DeviceState:
    """Immutable view of a device at one instant, for inspection and logs."""
    device_id: str
    clock_offset_min: int
    locked: bool
    passport: Optional[Passport]
    visas: Tuple[Tuple[str, VisaImage], ...]
    auth_images: Tuple[Tuple[int, str, str], ...]
    session: object = None

    @property
    def visa_map(self):
        return dict(self.visas)
