from .base import *

DEBUG = False

CELERY_TASK_ALWAYS_EAGER = True
CELERY_TASK_EAGER_PROPAGATES = True
CELERY_BROKER_URL = 'memory://'
CELERY_RESULT_BACKEND = 'cache+memory://'

# keep the console quiet while the suite runs
LOGGING['root']['level'] = 'WARNING'
