"""
Django settings for the bitextmine project.

The project has no web surface: Django provides the management-command CLI,
settings/env handling and the test runner. Pipeline defaults below are read
by the management commands as argparse defaults.
"""

import os
from pathlib import Path

from django.core.exceptions import ImproperlyConfigured

try:
    from dotenv import dotenv_values
except Exception:  # pragma: no cover
    dotenv_values = None

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

if dotenv_values is not None:
    # Load `.env` + `.env.local` without overriding existing environment
    # variables. Values exported in the shell always win.
    env_from_files: dict[str, str] = {}
    env_from_files.update({k: v for k, v in dotenv_values(BASE_DIR / ".env").items() if v is not None})
    env_from_files.update({k: v for k, v in dotenv_values(BASE_DIR / ".env.local").items() if v is not None})
    for key, value in env_from_files.items():
        os.environ.setdefault(key, value)


def _env_int(name: str, default: int, minimum: int = 0) -> int:
    raw = os.getenv(name, "").strip()
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ImproperlyConfigured(f"{name} must be an integer, got {raw!r}") from exc
    if value < minimum:
        raise ImproperlyConfigured(f"{name} must be >= {minimum}, got {value}")
    return value


# No sessions, cookies or signing happen here; the key only satisfies Django's startup.
SECRET_KEY = os.getenv("DJANGO_SECRET_KEY", "bitextmine-cli-unsigned")

DEBUG = os.getenv("DJANGO_DEBUG", "0") == "1"

ALLOWED_HOSTS: list[str] = []


# Application definition

INSTALLED_APPS = [
    # Third-party
    'rest_framework',

    # Local apps
    'core.apps.CoreConfig',
    'corpus.apps.CorpusConfig',
    'embedstore.apps.EmbedstoreConfig',
    'lexicon.apps.LexiconConfig',
    'docalign.apps.DocalignConfig',
    'sentalign.apps.SentalignConfig',
    'evaluation.apps.EvaluationConfig',
]

MIDDLEWARE: list[str] = []

# All inputs and outputs are flat files; nothing is persisted in a database.
DATABASES: dict[str, dict] = {}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = os.getenv("DJANGO_TIME_ZONE", "UTC")

USE_I18N = True

USE_TZ = True


# Pipeline defaults (overridable per run with the matching CLI flag)

BITEXT_EMBEDDING_DIM = _env_int("BITEXT_EMBEDDING_DIM", 1024, minimum=1)
BITEXT_MIN_CHARS = _env_int("BITEXT_MIN_CHARS", 50)
BITEXT_TOP_K = _env_int("BITEXT_TOP_K", 4, minimum=1)
BITEXT_MAX_PHRASE_LEN = _env_int("BITEXT_MAX_PHRASE_LEN", 5, minimum=1)
BITEXT_COUNT_INIT = _env_int("BITEXT_COUNT_INIT", 1)
BITEXT_WORKERS = _env_int("BITEXT_WORKERS", 1, minimum=1)

if BITEXT_COUNT_INIT not in (0, 1):
    raise ImproperlyConfigured("BITEXT_COUNT_INIT must be 0 or 1")

BITEXT_LOG_LEVEL = os.getenv("BITEXT_LOG_LEVEL", "WARNING").strip().upper() or "WARNING"

# stdout carries the one-line JSON run summary; every log record goes to stderr.
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {
            "format": "%(asctime)s %(levelname)s %(name)s: %(message)s",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "plain",
        },
    },
    "loggers": {
        app: {"handlers": ["console"], "level": BITEXT_LOG_LEVEL, "propagate": False}
        for app in ("core", "corpus", "embedstore", "lexicon", "docalign", "sentalign", "evaluation")
    },
}
