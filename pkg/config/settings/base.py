# ruff: noqa: ERA001
"""
Base settings for the relational-structure workbench.

The project has no database models and no HTTP surface; Django provides the
app registry, the cache framework and the management-command runner.
Local development settings override these in 'local.py'.
"""

from pathlib import Path

import environ
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from config.log import LOGGING  # noqa: F401

# Project structure
BASE_DIR = Path(__file__).resolve(strict=True).parent.parent.parent
APPS_DIR = BASE_DIR / "apps"

# Environment variables setup
env = environ.Env()
READ_DOT_ENV_FILE = env.bool("DJANGO_READ_DOT_ENV_FILE", default=False)
if READ_DOT_ENV_FILE:
    env.read_env(str(BASE_DIR / ".env"))

# GENERAL
# ------------------------------------------------------------------------------
DEBUG = env.bool("DJANGO_DEBUG", False)
TIME_ZONE = "UTC"
LANGUAGE_CODE = "en-us"
USE_I18N = False
USE_TZ = True
DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"
SECRET_KEY = env("DJANGO_SECRET_KEY", default=None)

# DATABASES
# ------------------------------------------------------------------------------
# Nothing is persisted in a database; an in-memory sqlite keeps Django happy.
DATABASES = {
    "default": env.db_url("DATABASE_URL", default="sqlite://:memory:"),
}

# APPS
# ------------------------------------------------------------------------------
DJANGO_APPS = [
    "django.contrib.contenttypes",
]
THIRD_PARTY_APPS: list[str] = []
LOCAL_APPS = [
    "apps.kernel.apps.KernelConfig",
    "apps.classes.apps.ClassesConfig",
    "apps.products.apps.ProductsConfig",
    "apps.amalgamation.apps.AmalgamationConfig",
    "apps.partition.apps.PartitionConfig",
    "apps.configurations.apps.ConfigurationsConfig",
    "apps.workbench.apps.WorkbenchConfig",
]
INSTALLED_APPS = DJANGO_APPS + THIRD_PARTY_APPS + LOCAL_APPS

# CACHES
# ------------------------------------------------------------------------------
# Run records are content addressed; the file cache survives between runs.
WORKBENCH_CACHE_DIR = env("WORKBENCH_CACHE_DIR", default=str(BASE_DIR / ".workbench-cache"))
RUN_CACHE_ALIAS = "runs"

CACHES = {
    "default": {
        "BACKEND": "django.core.cache.backends.locmem.LocMemCache",
        "LOCATION": "workbench-default",
    },
    RUN_CACHE_ALIAS: {
        "BACKEND": "django.core.cache.backends.filebased.FileBasedCache",
        "LOCATION": WORKBENCH_CACHE_DIR,
        "TIMEOUT": None,
        "OPTIONS": {"MAX_ENTRIES": 100_000},
    },
}

# WORKBENCH LIMITS
# ------------------------------------------------------------------------------


class WorkbenchLimits(BaseSettings):
    """Soft limits for every bounded search; overridable via env, config file and flags."""

    CANONICAL_MAX_SIZE: int = Field(default=10, ge=1)
    ENUM_MAX_SIZE_GRAPH_LIKE: int = Field(default=7, ge=0)
    ENUM_MAX_SIZE_OTHER: int = Field(default=5, ge=0)
    PLANARITY_MAX_SIZE: int = Field(default=12, ge=0)
    AUT_PRODUCT_MAX_SIZE: int = Field(default=16, ge=1)
    COMPLETION_MAX_FREE_TUPLES: int = Field(default=16, ge=1)
    DEFAULT_HOST_PADDING: int = Field(default=0, ge=0)
    WITNESS_MAX_SIZE: int = Field(default=16, ge=1)
    JOBS: int = Field(default=1, ge=1)
    TIME_LIMIT_S: float | None = Field(default=None, gt=0)
    CACHE_SAMPLE_PERCENT: int = Field(default=10, ge=0, le=100)

    model_config = SettingsConfigDict(env_prefix="WORKBENCH_", frozen=True)


WORKBENCH_LIMITS = WorkbenchLimits()  # ⇐ attribute-style access
