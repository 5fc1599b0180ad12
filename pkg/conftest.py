from itertools import count

import pytest
from django.core.cache.backends.locmem import LocMemCache

_backends = count()


@pytest.fixture
def run_backend():
    """A private in-memory run cache."""
    backend = LocMemCache(f"runs-{next(_backends)}", {"TIMEOUT": None})
    yield backend
    backend.clear()
