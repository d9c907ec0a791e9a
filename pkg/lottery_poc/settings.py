"""
Django settings for lottery_poc project.
"""

from pathlib import Path
from decouple import config

from .logging_config import setup_logging

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = config('DJANGO_SECRET_KEY', default='django-insecure-school-choice-toolkit')

DEBUG = config('DJANGO_DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []

# Application definition
# Solo comandos de gestión: sin admin, sin auth, sin sesiones
INSTALLED_APPS = [
    'school_choice',
]

# Sin base de datos: todo el estado vive en archivos JSON/CSV
DATABASES = {}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

# School choice settings
ETE_SUPPORT_LIMIT = config('ETE_SUPPORT_LIMIT', default=10000, cast=int)
ORACLE_MAX_STUDENTS = config('ORACLE_MAX_STUDENTS', default=6, cast=int)
ORACLE_MAX_ASSIGNMENTS = config('ORACLE_MAX_ASSIGNMENTS', default=10_000_000, cast=int)
# 0 = |I|·|C|
SIC_MAX_ITERATIONS = config('SIC_MAX_ITERATIONS', default=0, cast=int)
DEFAULT_PRIORITY_COMPLETION = config('DEFAULT_PRIORITY_COMPLETION', default='error')
PROPERTY_CORPUS_SIZE = config('PROPERTY_CORPUS_SIZE', default=500, cast=int)

# Logging configuration
LOG_LEVEL = config('LOG_LEVEL', default='INFO')
LOG_DIR = config('LOG_DIR', default=str(BASE_DIR / 'logs'))
LOGGING = setup_logging(BASE_DIR, log_dir=LOG_DIR, level=LOG_LEVEL)
