import logging

from core.celery import app
from passport.utils import virtual_day, wall_clock_ts

from .models import AirportCloud, Booking, EmbassyCloud

logger = logging.getLogger(__name__)


@app.task
def sync_airport_clouds(date=None):
    """Pull the day's visas into every airport cloud from every embassy cloud."""
    if date is None:
        date = virtual_day(wall_clock_ts())
    manifest = Booking.objects.manifest()
    embassies = list(EmbassyCloud.objects.all())
    reports = []
    for airport in AirportCloud.objects.all():
        report = airport.daily_sync(embassies, manifest, date)
        reports.append({
            'airport': report.airport,
            'upserted': len(report.upserted),
            'removed': len(report.removed),
            'dangling': list(report.dangling),
        })
    logger.info(f'daily sync for day {date} done at {len(reports)} airports')
    return reports
