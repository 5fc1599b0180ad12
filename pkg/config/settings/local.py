from .base import *  # noqa: F403
from .base import env

DEBUG = env.bool("DJANGO_DEBUG", default=True)
SECRET_KEY = env(
    "DJANGO_SECRET_KEY",
    default="pT85aTBAHkX8Rffu9aHAdX2sOUey8dJqDUIcT43D95fRkxc1uFqkjNHe0fDDEt4Z",
)
ALLOWED_HOSTS = ["localhost", "127.0.0.1"]
