"""
Django settings for TrapLabApp project
Command-line simulation toolkit: no database, no web surface.
Every simulation tunable is read from the environment (.env supported).
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# ==============================
# CORE CONFIG
# ==============================
BASE_DIR = Path(__file__).resolve().parent.parent
load_dotenv(override=True)

DEBUG = os.getenv("DEBUG", "False").lower() == "true"

# Management commands never sign anything; a fixed local key keeps the CLI usable
SECRET_KEY = os.getenv("SECRET_KEY", "traplab-local-cli-key")
if not SECRET_KEY:
    raise RuntimeError("SECRET_KEY is set but empty in environment variables.")

ALLOWED_HOSTS = ["localhost", "127.0.0.1"]

# ==============================
# APPLICATIONS
# ==============================
INSTALLED_APPS = [
    "rest_framework",
    "apps.core",
    "apps.harness",
]

DATABASES = {}
DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

# ==============================
# SIMULATION DEFAULTS
# ==============================
# Configuration-model rejection attempts before giving up
TRAPLAB_RETRY_BUDGET = int(os.getenv("TRAPLAB_RETRY_BUDGET", "1000"))

# Jump budget for hitting-time simulations
TRAPLAB_STEP_BUDGET = int(float(os.getenv("TRAPLAB_STEP_BUDGET", "1e9")))

# Truncation of the limiting Poisson weights and of K-process clocks
TRAPLAB_LIMIT_TRUNCATION = int(os.getenv("TRAPLAB_LIMIT_TRUNCATION", "64"))
TRAPLAB_K_MAX = int(os.getenv("TRAPLAB_K_MAX", "64"))

# Exact solver: dense factorization up to this many vertices, CG beyond
TRAPLAB_DENSE_LIMIT = int(os.getenv("TRAPLAB_DENSE_LIMIT", "2000"))
TRAPLAB_SOLVER_TOL = float(os.getenv("TRAPLAB_SOLVER_TOL", "1e-12"))

# Finite-horizon hitting recursions are capped at this many lazy steps
TRAPLAB_HORIZON_CAP = int(float(os.getenv("TRAPLAB_HORIZON_CAP", "1e5")))

# Expected Galton-Watson tree size allowed per sample
TRAPLAB_GW_SIZE_BUDGET = int(float(os.getenv("TRAPLAB_GW_SIZE_BUDGET", "1e7")))

TRAPLAB_SIGNIFICANCE = float(os.getenv("TRAPLAB_SIGNIFICANCE", "0.01"))
TRAPLAB_WORKERS = int(os.getenv("TRAPLAB_WORKERS", "1"))
TRAPLAB_OUTPUT_DIR = Path(os.getenv("TRAPLAB_OUTPUT_DIR", str(BASE_DIR / "output")))

# ==============================
# REST FRAMEWORK
# ==============================
# Serializers validate config files only; no API views are mounted
REST_FRAMEWORK = {
    "DEFAULT_AUTHENTICATION_CLASSES": [],
    "UNAUTHENTICATED_USER": None,
}

# ==============================
# LOGGING
# ==============================
LOG_LEVEL = os.getenv("TRAPLAB_LOG_LEVEL", "DEBUG" if DEBUG else "INFO").upper()

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{levelname} {asctime} {module} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
        "null": {
            "class": "logging.NullHandler",
        },
    },
    "loggers": {
        "django": {
            "handlers": ["console" if DEBUG else "null"],
            "level": "INFO" if DEBUG else "ERROR",
        },
        "apps": {
            "handlers": ["console"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
    },
}

# ==============================
# MISC
# ==============================
LANGUAGE_CODE = "en-us"
TIME_ZONE = "UTC"
USE_I18N = False
USE_TZ = True
