# apps/core/conf.py
# --------------------------------
# Settings access that also works outside a configured Django process
# (plain library use, notebooks, worker processes).

from typing import Any

try:
    from django.conf import settings

    _HAS_DJANGO_SETTINGS = settings.configured
except Exception:
    settings = None  # type: ignore
    _HAS_DJANGO_SETTINGS = False


DEFAULTS = {
    "TRAPLAB_RETRY_BUDGET": 1000,
    "TRAPLAB_STEP_BUDGET": 10**9,
    "TRAPLAB_LIMIT_TRUNCATION": 64,
    "TRAPLAB_K_MAX": 64,
    "TRAPLAB_DENSE_LIMIT": 2000,
    "TRAPLAB_SOLVER_TOL": 1e-12,
    "TRAPLAB_HORIZON_CAP": 10**5,
    "TRAPLAB_GW_SIZE_BUDGET": 10**7,
    "TRAPLAB_SIGNIFICANCE": 0.01,
    "TRAPLAB_WORKERS": 1,
}


def setting(name: str, default: Any = None) -> Any:
    """Return a TRAPLAB_* setting, falling back to the built-in default."""
    fallback = DEFAULTS.get(name, default) if default is None else default
    if _HAS_DJANGO_SETTINGS or (settings is not None and settings.configured):
        return getattr(settings, name, fallback)
    return fallback
