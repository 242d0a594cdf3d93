"""
Django settings for the GoalRecognition project.

The project hosts the ``recognition`` app: an LP-based goal recognition
engine with search oracles, a dataset generator and a benchmark runner.
Everything tunable is read from the environment (or a ``.env`` file) with
python-decouple, so runs can be reproduced without editing this file.

For the full list of Django settings and their values, see
https://docs.djangoproject.com/en/5.0/ref/settings/
"""

from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = config('SECRET_KEY', default='django-insecure-goal-recognition-local-only-key')

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = config('DEBUG', default=True, cast=bool)

ALLOWED_HOSTS = [h.strip() for h in config('ALLOWED_HOSTS', default='localhost,127.0.0.1').split(',') if h.strip()]


# Application definition

INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',
    # Project apps
    'recognition',
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

ROOT_URLCONF = 'GoalRecognition.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]

WSGI_APPLICATION = 'GoalRecognition.wsgi.application'


# Database
# Only archived benchmark runs are stored; sqlite is plenty for that.

DATABASES = {
    'default': {
        'ENGINE': config('DB_ENGINE', default='django.db.backends.sqlite3'),
        'NAME': config('DB_NAME', default=str(BASE_DIR / 'db.sqlite3')),
        'USER': config('DB_USER', default=''),
        'PASSWORD': config('DB_PASSWORD', default=''),
        'HOST': config('DB_HOST', default=''),
        'PORT': config('DB_PORT', default=''),
    }
}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True


# Static files (admin only)

STATIC_URL = 'static/'
STATIC_ROOT = BASE_DIR / 'staticfiles'

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Admin site customization
ADMIN_SITE_HEADER = 'Goal Recognition'
ADMIN_SITE_TITLE = 'Goal Recognition Admin'
ADMIN_INDEX_TITLE = 'Benchmark Run Archive'


# Logging

LOG_LEVEL = config('LOG_LEVEL', default='INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'recognition': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}


# Recognition engine

# Search oracle budget per call; exceeding it raises ResourceLimit
RECOGNITION_SEARCH_MAX_EXPANSIONS = config('SEARCH_MAX_EXPANSIONS', default=1_000_000, cast=int)
RECOGNITION_SEARCH_TIME_LIMIT = config('SEARCH_TIME_LIMIT', default=60.0, cast=float)

# LP/IP solving
RECOGNITION_LP_TOLERANCE = config('LP_TOLERANCE', default=1e-6, cast=float)
RECOGNITION_LP_BACKEND = config('LP_BACKEND', default='simplex')  # simplex | highs
RECOGNITION_LP_MAX_ITERATIONS = config('LP_MAX_ITERATIONS', default=50_000, cast=int)
RECOGNITION_IP_MAX_NODES = config('IP_MAX_NODES', default=20_000, cast=int)

# SAS input: reject non-unit operator costs
RECOGNITION_SAS_STRICT = config('SAS_STRICT', default=True, cast=bool)

# Dataset generation and benchmarking
RECOGNITION_NOISE_RATE = config('NOISE_RATE', default=0.2, cast=float)
RECOGNITION_OBSERVABILITIES = (10, 30, 50, 70, 100)
RECOGNITION_BENCH_WORKERS = config('BENCH_WORKERS', default=1, cast=int)
