from pathlib import Path
import sys
import os
import sentry_sdk
from sentry_sdk.integrations.django import DjangoIntegration

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve(strict=True).parent.parent.parent
sys.path.insert(0, os.path.join(BASE_DIR, 'apps'))


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.getenv('SECRET_KEY', 'cloudpass-insecure-dev-key')

ALLOWED_HOSTS = ['*']

# Application definition

INSTALLED_APPS = [
    # django apps
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',
    # local apps
    'passport.apps.PassportConfig',
    'authflow.apps.AuthflowConfig',
    'qrlink.apps.QrlinkConfig',
    'nfc.apps.NfcConfig',
    'clouds.apps.CloudsConfig',
    'immigration.apps.ImmigrationConfig',
    'simnet.apps.SimnetConfig',
    # 3rd party apps
    'django_fsm',
    'django_countries',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'core.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.debug',
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]

WSGI_APPLICATION = 'core.wsgi.application'

# stores are in-memory by default, point DB_NAME at a file to keep them
DATABASES = {
    'default': {
        'ENGINE': os.getenv('DB_ENGINE', 'django.db.backends.sqlite3'),
        'NAME': os.getenv('DB_NAME', ':memory:'),
        'USER': os.getenv('DB_USER', ''),
        'PASSWORD': os.getenv('DB_PASSWORD', ''),
        'HOST': os.getenv('DB_HOST', ''),
        'PORT': os.getenv('DB_PORT', ''),
    }
}

DEFAULT_AUTO_FIELD = 'django.db.models.AutoField'

# nfc cache keeps live reader-device channels
CACHES = {
    'default': {
        'BACKEND': 'django.core.cache.backends.locmem.LocMemCache',
        'LOCATION': 'cloudpass-default',
    },
    'nfc': {
        'BACKEND': 'django.core.cache.backends.locmem.LocMemCache',
        'LOCATION': 'cloudpass-nfc',
        'TIMEOUT': None,
    },
}

CELERY_BROKER_URL = os.getenv('CELERY_BROKER', 'redis://redis:6379/0')
CELERY_RESULT_BACKEND = os.getenv('CELERY_BROKER', 'redis://redis:6379/0')


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True


STATIC_URL = '/static/'


# CloudPass
# virtual time 0 of every scenario, also the origin of virtual dates
CLOUDPASS_EPOCH = os.getenv('CLOUDPASS_EPOCH', '2021-01-01T00:00:00+00:00')
CLOUDPASS_DOMAIN = os.getenv('CLOUDPASS_DOMAIN', 'http://127.0.0.1:8080')

PASSPORT_PAGE_COUNT = 32

AUTH_SESSION_TIMEOUT = 600  # seconds, hard wall from activation
AUTH_TIME_TOLERANCE = 1  # minutes either side of the displayed time
AUTH_IMAGE_COUNT = 10
CAPTCHA_LENGTH = 6
OTP_DIGITS = 6

NFC_MAX_DISTANCE_CM = '15.0'

SYNC_HORIZON_DAYS = 2

# scripted traveler behaviour at the desk
AGENT_MAX_ATTEMPTS = 3
AGENT_RETRY_DELAY = 60

VISA_IMAGE_SIZE = 256


LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{levelname} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': os.getenv('CLOUDPASS_LOG_LEVEL', 'INFO'),
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': os.getenv('DJANGO_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
    },
}

# sentry setting
if os.getenv('SENTRY_DSN'):
    sentry_sdk.init(
        dsn=f"https://{os.getenv('SENTRY_DSN')}",
        integrations=[DjangoIntegration()],
        traces_sample_rate=1.0,
        send_default_pii=False
    )
