import random
from dataclasses import dataclass, replace

from authflow import flow
from authflow.tests.factory import ANSWERS, image_set
from clouds.models import Booking
from clouds.tests.factory import (AirportCloudFactory, EmbassyCloudFactory,
                                  issue_passport, issue_visa)
from immigration.models import DeskCheck
from immigration.types import AgentScript
from passport.tests.factory import DeviceFactory
from passport.types import VisaImage
from simnet.clock import VirtualClock

HONEST = AgentScript(username='alice', password='s3cret pass', answers=ANSWERS)

SIX_THIRTY = 6 * 3600 + 30 * 60


@dataclass
class Traveler:
    device: object
    embassy: object
    airport: object
    visa_id: str

    def desk(self, checkpoint, desk_id='D1', started_at=SIX_THIRTY):
        return DeskCheck(
            desk_id=desk_id, airport=self.airport.airport,
            checkpoint=checkpoint, started_at=started_at)

    def tamper(self, offset):
        """Flip one bit of the downloaded image; the device rehashes what it holds."""
        image = self.device.visa_image(self.visa_id)
        data = bytearray(image.data)
        data[offset % len(data)] ^= 0x01
        self.device.store_visa(self.visa_id, VisaImage.of(bytes(data), image.media_type), 'US')

    def restore(self, image):
        self.device.store_visa(self.visa_id, image, 'US')


def prepared_traveler(airport='JFK', synced=True, clock_offset_min=330):
    """A traveler with passport, enrolment and a visa on page 3, manifested through `airport`."""
    rng = random.Random(11)
    ministry = EmbassyCloudFactory(authority_id='IN-MEA', country='IN')
    embassy = EmbassyCloudFactory(authority_id='US-EMB', country='US')
    passport_mail = issue_passport(ministry, rng)
    visa_mail = issue_visa(embassy, rng)
    device = DeviceFactory(clock_offset_min=clock_offset_min)
    ministry.download_passport_app(passport_mail.token, device)
    flow.enroll_credential(device, 'alice', 's3cret pass', rng)
    flow.enroll_auth_images(device, image_set())
    visa_id = visa_mail.link_token.resource_id
    embassy.download_visa_image(visa_mail.token, device, 3)
    cloud = AirportCloudFactory(airport=airport)
    if synced:
        Booking.objects.book_travel('P1234567', visa_id, airport, 0)
        cloud.daily_sync(embassy, Booking.objects.manifest(), 0)
    return Traveler(device, embassy, cloud, visa_id)


def clock_at(now=SIX_THIRTY):
    return VirtualClock(now)


def script(**changes):
    return replace(HONEST, **changes)
