"""
With these settings, tests run faster.
"""

from .base import *  # noqa: F403
from .base import CACHES, RUN_CACHE_ALIAS, env

# GENERAL
# ------------------------------------------------------------------------------
# https://docs.djangoproject.com/en/dev/ref/settings/#secret-key
SECRET_KEY = env(
    "DJANGO_SECRET_KEY",
    default="g1cUMaxz2D1JeudGlJBYwVvnrBz1IEiHLzRnCoNDq1O3Ku3hJvCsq0lU7Se3WWr8",
)
# https://docs.djangoproject.com/en/dev/ref/settings/#test-runner
TEST_RUNNER = "django.test.runner.DiscoverRunner"

# CACHES
# ------------------------------------------------------------------------------
# Tests never touch the on-disk run cache.
CACHES[RUN_CACHE_ALIAS] = {
    "BACKEND": "django.core.cache.backends.locmem.LocMemCache",
    "LOCATION": "workbench-runs-test",
}
