from functools import lru_cache

import mpmath
import pytest
from hypothesis import HealthCheck, settings

from fusioncheck import catalog as cat
from fusioncheck.spectra import character_table, decompose_regular

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

COMMUTATIVE = [n for n in cat.catalog_names() if cat.catalog(n).is_commutative]
ALL_RINGS = cat.catalog_names()
TOL40 = mpmath.mpf("1e-40")
TOL35 = mpmath.mpf("1e-35")


@lru_cache(maxsize=None)
def spectrum_of(name: str, precision: int = 256):
    return character_table(cat.catalog(name), precision)


@lru_cache(maxsize=None)
def irreps_of(name: str, precision: int = 256):
    return decompose_regular(cat.catalog(name), precision)


@pytest.fixture(params=COMMUTATIVE)
def comm_name(request):
    return request.param
