from functools import lru_cache

import pytest

from core.burnside import BurnsideRing
from core.catalog import catalog
from core.lattice import build_lattice
from core.transfer import FrobeniusContext


@lru_cache(maxsize=None)
def lattice_of(name: str):
    return build_lattice(catalog(name))


@lru_cache(maxsize=None)
def ring_of(name: str) -> BurnsideRing:
    return BurnsideRing(lattice_of(name))


@lru_cache(maxsize=None)
def context_of(name: str, p: int) -> FrobeniusContext:
    return FrobeniusContext(catalog(name), p)


def fusion_of(name: str, p: int):
    return context_of(name, p).fusion


@pytest.fixture
def a4():
    return context_of("A4", 2)


@pytest.fixture
def s4():
    return context_of("S4", 2)
