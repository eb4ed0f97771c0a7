"""
Settings
Environment-driven configuration for solver caps, verbosity and batch runs
"""

import os
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field


class Settings(BaseModel):
    """
    Immutable runtime settings

    Values come from PICKROUTE_* environment variables (a local .env file is
    loaded first). Explicit function arguments always win over these.

    Example:
        settings = get_settings()
        if instance.cross_aisles > settings.max_cross_aisles:
            ...
    """

    model_config = ConfigDict(frozen=True)

    max_cross_aisles: int = Field(6, ge=2)
    held_karp_max_items: int = Field(18, ge=0)
    brute_force_max_blocks: int = Field(6, ge=1)
    brute_force_max_gaps: int = Field(6, ge=0)
    bench_workers: int = Field(1, ge=1)
    verbose: bool = False
    suite_size: int = Field(60, ge=1)


_ENV_FIELDS = {
    'PICKROUTE_MAX_CROSS_AISLES': 'max_cross_aisles',
    'PICKROUTE_HELD_KARP_MAX_ITEMS': 'held_karp_max_items',
    'PICKROUTE_BRUTE_FORCE_MAX_BLOCKS': 'brute_force_max_blocks',
    'PICKROUTE_BRUTE_FORCE_MAX_GAPS': 'brute_force_max_gaps',
    'PICKROUTE_BENCH_WORKERS': 'bench_workers',
    'PICKROUTE_VERBOSE': 'verbose',
    'PICKROUTE_SUITE_SIZE': 'suite_size',
}


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    Load settings from the environment (cached)

    Returns:
        Settings instance; call get_settings.cache_clear() after changing
        the environment
    """
    load_dotenv()
    values = {}
    for env_name, field_name in _ENV_FIELDS.items():
        raw = os.getenv(env_name)
        if raw is not None and raw.strip() != '':
            values[field_name] = raw.strip()
    return Settings(**values)
