from django.db import models

from passport.types import AIRPORT_RE
from passport.utils import content_hash, random_bytes

from .exceptions import CloudError
from .types import TravelManifest


class EmbassyCloudManager(models.Manager):

    def get_by_authority(self, authority_id):
        try:
            return self.get(authority_id=authority_id)
        except self.model.DoesNotExist:
            raise CloudError('UNKNOWN_AUTHORITY', f'no embassy cloud {authority_id}')

    def open(self, authority_id, country, rng):
        """A new issuing authority with a signing secret drawn from `rng`."""
        return self.create(
            authority_id=authority_id, country=country, secret=random_bytes(rng, 32))


class AirportCloudManager(models.Manager):

    def get_by_airport(self, airport):
        try:
            return self.get(airport=airport)
        except self.model.DoesNotExist:
            raise CloudError('UNKNOWN_AIRPORT', f'no airport cloud {airport}')

    def open(self, airport):
        if not AIRPORT_RE.match(airport or ''):
            raise CloudError('BAD_AIRPORT_CODE', f'{airport!r} is not a 3-letter code')
        if not passport_no or not visa_id:
            raise CloudError('BAD_BOOKING', 'a booking needs a passport number and a visa id')
        cloud, _ = self.get_or_create(airport=airport)
        return cloud


class BlobManager(models.Manager):

    def put(self, cloud, data):
        """Store `data` under its sha-256; storing the same bytes twice is a no-op."""
        data = bytes(data)
        digest = content_hash(data)
        self.get_or_create(cloud=cloud, content_hash=digest, defaults={'data': data})
        return digest


class ReplicaManager(models.Manager):

    def as_map(self):
        return {
            visa_id: (passport_no, image_hash)
            for visa_id, passport_no, image_hash in
            self.order_by('visa_id').values_list('visa_id', 'passport_no', 'image_hash')
        }


class BookingManager(models.Manager):

    def manifest(self):
        return TravelManifest.from_bookings(
            self.order_by('travel_date', 'airport', 'visa_id', 'passport_no'))

    def book_travel(self, passport_no, visa_id, airport, travel_date):
        """The airline side: no embassy is consulted, sync reports unknown visas."""
        if not AIRPORT_RE.match(airport or ''):
            raise CloudError('BAD_AIRPORT_CODE', f'{airport!r} is not a 3-letter code')
        booking, _ = self.get_or_create(
            passport_no=passport_no, visa_id=visa_id, airport=airport,
            travel_date=travel_date)
        return booking
