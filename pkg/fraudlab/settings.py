"""
Django settings for the fraudlab project.
"""

from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = config('SECRET_KEY', default='django-insecure-change-me-in-production')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []

# Application definition
LOCAL_APPS = [
    'core',
    'claims',
    'synthgen',
    'discretize',
    'markov',
    'gbm',
    'evaluation',
    'pipeline',
]

INSTALLED_APPS = LOCAL_APPS

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {},
    },
]

# Veritabanı kullanılmıyor; tüm girdi/çıktı dosya tabanlı
DATABASES = {}

USE_I18N = False
USE_TZ = True
TIME_ZONE = 'UTC'

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Logging
FRAUDLAB_LOG_LEVEL = config('FRAUDLAB_LOG_LEVEL', default='INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        # stdout komut çıktısına ayrıldı, loglar stderr'e gider
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': FRAUDLAB_LOG_LEVEL,
    },
    'loggers': {
        'matplotlib': {
            'level': 'WARNING',
        },
    },
}

# Fraud pipeline defaults
FRAUDLAB_SEED = config('FRAUDLAB_SEED', default=7, cast=int)
FRAUDLAB_OUTPUT_DIR = config('FRAUDLAB_OUTPUT_DIR', default=str(BASE_DIR / 'runs'))
FRAUDLAB_SPLIT_RATIO = config('FRAUDLAB_SPLIT_RATIO', default=0.70, cast=float)
FRAUDLAB_MARKOV_ALPHA = config('FRAUDLAB_MARKOV_ALPHA', default=1.0, cast=float)
FRAUDLAB_THRESHOLD = config('FRAUDLAB_THRESHOLD', default=0.5, cast=float)

# Gradient boosting (300 ağaç, derinlik 5, öğrenme oranı 0.1, 10 katlı CV)
FRAUDLAB_GBM_TREES = config('FRAUDLAB_GBM_TREES', default=300, cast=int)
FRAUDLAB_GBM_DEPTH = config('FRAUDLAB_GBM_DEPTH', default=5, cast=int)
FRAUDLAB_GBM_LEARNING_RATE = config('FRAUDLAB_GBM_LEARNING_RATE', default=0.1, cast=float)
FRAUDLAB_GBM_CV_FOLDS = config('FRAUDLAB_GBM_CV_FOLDS', default=10, cast=int)
FRAUDLAB_GBM_MIN_LEAF = config('FRAUDLAB_GBM_MIN_LEAF', default=10, cast=int)

FRAUDLAB_MODEL_FORMAT_VERSION = config('FRAUDLAB_MODEL_FORMAT_VERSION', default=1, cast=int)

# Slow acceptance tests (end-to-end run-paper) are opt-in
FRAUDLAB_RUN_SLOW = config('FRAUDLAB_RUN_SLOW', default=False, cast=bool)
