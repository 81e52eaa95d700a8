"""
Settings used by the test suite.
"""
from .settings import *  # noqa: F401,F403

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': ':memory:',
    }
}

LOGGING['handlers']['console']['level'] = 'WARNING'  # noqa: F405
