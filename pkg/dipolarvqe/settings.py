"""
Django settings for the dipolarvqe project.
"""

from pathlib import Path

from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# The project has no web surface; the key only satisfies Django's checks.
SECRET_KEY = config('SECRET_KEY', default='dipolarvqe-local-key')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',

    # Local apps
    'ensemble',
    'engine',
    'metrology',
    'optimizer',
    'analysis',
    'controllability',
    'experiments',
]

MIDDLEWARE = []


# Database
# Results live in SQLite next to the project unless DB_PATH points elsewhere.

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': config('DB_PATH', default=str(BASE_DIR / 'results.sqlite3')),
    }
}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Default primary key field type

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Simulation defaults
# Units: lengths nm, frequencies Hz, times s, angles rad.

SIMULATION = {
    # Angular factor of the dipolar coupling: 'cos2' is (1 - 3cos^2 b)/2,
    # 'cos1' is the literal (1 - 3cos b)/2 reading.
    'ANGULAR_FACTOR': config('DIPOLARVQE_ANGULAR_FACTOR', default='cos2'),

    # Master-equation integrator tolerances
    'ODE_RTOL': 1e-8,
    'ODE_ATOL': 1e-10,
    # |Tr rho - 1| allowed after integration, matching QuantumState validation
    'TRACE_TOLERANCE': 1e-10,

    # Fisher information: outcomes below these are treated as zero
    'ZERO_PROBABILITY': 1e-14,
    'ZERO_DERIVATIVE': 1e-12,

    # Entropy eigenvalues below this are treated as zero
    'ENTROPY_EIGENVALUE_FLOOR': 1e-14,

    # Random-3d configurations
    'MIN_DISTANCE_FRACTION': 0.05,
    'MAX_SAMPLING_RETRIES': 1000,

    # CMA-ES
    'CMAES_SIGMA0': 0.3,
    'CMAES_MAX_GENERATIONS': config('DIPOLARVQE_MAX_GENERATIONS', default=2000, cast=int),
    'CMAES_STAGNATION_GENERATIONS': 200,
    'CMAES_STAGNATION_TOL': 1e-8,
    'CMAES_TOL_X': 1e-12,
    'CMAES_MAX_RESAMPLES': 10,

    # Analysis
    'CLUSTER_THRESHOLD': 0.4,
    'WIGNER_RESOLUTION': (64, 128),

    # Controllability
    'LIE_RANK_THRESHOLD': 1e-9,
    'LIE_MAX_ROUNDS': 64,
    'LIE_MAX_SPINS': 5,
}

# Experiment harness
RESULTS_DIR = Path(config('DIPOLARVQE_RESULTS_DIR', default=str(BASE_DIR / 'results')))
DEFAULT_WORKERS = config('DIPOLARVQE_WORKERS', default=1, cast=int)


# Logging

LOG_LEVEL = config('DIPOLARVQE_LOG_LEVEL', default='INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {name} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'level': 'DEBUG',
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        app: {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        }
        for app in (
            'ensemble',
            'engine',
            'metrology',
            'optimizer',
            'analysis',
            'controllability',
            'experiments',
        )
    },
}
