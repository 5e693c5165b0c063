"""
Django settings for the maxrpc_lab project.

The project is used headless: management commands are the only entry point,
so there are no URLs, templates, middleware or database.
"""
import os
from pathlib import Path
from dotenv import load_dotenv


# Load the .env file
env_path = Path(".") / ".env"
load_dotenv(dotenv_path=env_path)


def _optional(name, cast):
    value = os.getenv(name)
    return cast(value) if value not in (None, "") else None


# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.getenv("DJANGO_SECRET_KEY", "maxrpc-lab-local-only")

DEBUG = os.getenv("DJANGO_DEBUG", "true").lower() == "true"

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    "rest_framework",
    "csp",
    "instances",
    "bench",
]

# No models anywhere; solver state lives in memory per run.
DATABASES = {}

MAXRPC_LAB = {
    "DEFAULT_ALGORITHM": os.getenv("MAXRPC_DEFAULT_ALGORITHM", "lmaxrpc3rm"),
    "DEFAULT_VAR_HEURISTIC": os.getenv("MAXRPC_VAR_HEURISTIC", "dom_wdeg"),
    "DEFAULT_BRANCHING": os.getenv("MAXRPC_BRANCHING", "binary"),
    "NODE_LIMIT": _optional("MAXRPC_NODE_LIMIT", int),
    "TIME_LIMIT": _optional("MAXRPC_TIME_LIMIT", float),
    "COUNT_NODE_GUARD": int(os.getenv("MAXRPC_COUNT_NODE_GUARD", 1_000_000)),
    "ENUMERATION_GUARD": int(os.getenv("MAXRPC_ENUMERATION_GUARD", 10_000_000)),
    "DENSE_TABLE_RATIO": float(os.getenv("MAXRPC_DENSE_TABLE_RATIO", 0.5)),
    "BENCH_EXECUTOR": os.getenv("MAXRPC_BENCH_EXECUTOR", "inline"),
    "ORACLE_SUITE_SIZE": int(os.getenv("MAXRPC_ORACLE_SUITE_SIZE", 1000)),
    "ORACLE_SUITE_SEED": int(os.getenv("MAXRPC_ORACLE_SUITE_SEED", 0)),
}

LOG_DIR = BASE_DIR / "logs"
LOG_DIR.mkdir(exist_ok=True)
LOG_LEVEL = os.getenv("MAXRPC_LOG_LEVEL", "INFO")

LOGGING = {
    "version": 1,  # the dictConfig format version
    "disable_existing_loggers": False,  # retain the default loggers
    "handlers": {
        "timed_rotating_file": {
            "level": "DEBUG",
            "class": "logging.handlers.TimedRotatingFileHandler",
            "filename": os.path.join(LOG_DIR, "maxrpc_lab.log"),
            "when": "midnight",
            "interval": 1,
            "backupCount": 30,  # Number of backup files to keep
            "formatter": "verbose",
        },
        "console": {
            "level": "WARNING",
            "class": "logging.StreamHandler",
            "formatter": "simple",
        },
    },
    "loggers": {
        "": {
            "level": LOG_LEVEL,
            "handlers": ["timed_rotating_file", "console"],
            "propagate": True,
        },
    },
    "formatters": {
        "verbose": {
            "format": "{name} {levelname} {asctime} {module} {process:d} {thread:d} {message}",
            "style": "{",
        },
        "simple": {
            "format": "{levelname} {message}",
            "style": "{",
        },
    },
}

CELERY_BROKER_URL = os.getenv("CELERY_BROKER_URL", "redis://localhost:6379/0")
CELERY_RESULT_BACKEND = os.getenv("CELERY_RESULT_BACKEND", "redis://localhost:6379/0")
CELERY_TASK_ALWAYS_EAGER = os.getenv("CELERY_TASK_ALWAYS_EAGER", "false").lower() == "true"

# Optional: Configure task result expiration time (time in seconds)
CELERY_TASK_RESULT_EXPIRES = 3600

# Optional: Serialize/deserialize task results
CELERY_TASK_SERIALIZER = "json"
CELERY_RESULT_SERIALIZER = "json"
CELERY_ACCEPT_CONTENT = ["json"]

# Internationalization
# https://docs.djangoproject.com/en/5.0/topics/i18n/

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = True

USE_TZ = True

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"
