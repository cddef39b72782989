import os

from celery import Celery
from celery.schedules import crontab

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'core.settings.local')

app = Celery('core')

app.config_from_object('django.conf:settings', namespace='CELERY')

# Load task modules from all registered Django app configs.
app.autodiscover_tasks()

app.conf.beat_schedule = {
    # airport clouds pull visa data from the embassy clouds once a day
    'daily-sync': {
        'task': 'clouds.tasks.sync_airport_clouds',
        'schedule': crontab(minute='0', hour='0')
    },
}
app.conf.timezone = 'UTC'
