import os

DEBUG = os.environ.get('DEBUG', 'False').lower() == 'true'

# No sessions or signing are used; the key only satisfies Django's startup checks
SECRET_KEY = os.environ.get('SECRET_KEY', 'tbverify-local-key')

ALLOWED_HOSTS = []

INSTALLED_APPS = [
    'spaces',
    'curves',
    'helices',
    'hypersurfaces',
    'catalog',
    'cli',
]

# No models; every run works from in-memory geometry
DATABASES = {}

# Django 6 Native Tasks: cases run synchronously and in order, keeping reports deterministic
TASKS = {
    'default': {
        'BACKEND': 'django.tasks.backends.immediate.ImmediateBackend',
    },
}

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


def _env_float(name, default):
    return float(os.environ.get(name, default))


# Numerical defaults for the verification commands (flags override them per run)
TBVERIFY = {
    'fd_step': _env_float('TBVERIFY_FD_STEP', '1e-4'),
    'outer_step': _env_float('TBVERIFY_OUTER_STEP', '1e-3'),
    'curve_step': _env_float('TBVERIFY_CURVE_STEP', '1e-2'),
    'laplace_step': _env_float('TBVERIFY_LAPLACE_STEP', '1e-2'),
    'richardson': os.environ.get('TBVERIFY_RICHARDSON', 'True').lower() == 'true',
    'geodesic_count': int(os.environ.get('TBVERIFY_GEODESIC_COUNT', '64')),
    'geodesic_length': _env_float('TBVERIFY_GEODESIC_LENGTH', '0.5'),
    'geodesic_step': _env_float('TBVERIFY_GEODESIC_STEP', '0.01'),
    'samples': int(os.environ.get('TBVERIFY_SAMPLES', '50')),
    'seed': int(os.environ.get('TBVERIFY_SEED', '7')),
    'output_dir': os.environ.get('TBVERIFY_OUTPUT_DIR') or None,
}

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {'verbose': {'format': '{levelname} {asctime} {module} {message}', 'style': '{'}},
    'handlers': {'console': {'class': 'logging.StreamHandler', 'formatter': 'verbose'}},
    'root': {'handlers': ['console'], 'level': os.environ.get('TBVERIFY_LOG_LEVEL', 'INFO')},
}
