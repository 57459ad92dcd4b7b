from __future__ import annotations

import pytest

from gendual.algebra import (
    dual_numbers,
    finite_set,
    integers_mod,
    two_element_boolean,
)
from gendual.site import build_site

DIVISORS = (1, 2, 3, 5, 6, 10, 15, 30)
RING_MODULI = (1, 2, 3, 4, 6)


@pytest.fixture(scope="session")
def divisor_site():
    return build_site([integers_mod(m) for m in DIVISORS], names=[f"Z/{m}" for m in DIVISORS])


@pytest.fixture(scope="session")
def boolean_site():
    return build_site([two_element_boolean()], names=["2"])


@pytest.fixture(scope="session")
def rings_site():
    return build_site(
        [integers_mod(m) for m in RING_MODULI], mode="truncated", names=[f"Z/{m}" for m in RING_MODULI]
    )


@pytest.fixture(scope="session")
def small_divisor_site():
    ms = (1, 2, 3, 6)
    return build_site([integers_mod(m) for m in ms], names=[f"Z/{m}" for m in ms])


@pytest.fixture(scope="session")
def sets_site():
    return build_site([finite_set(n) for n in range(6)], mode="truncated", names=[f"set{n}" for n in range(6)])


@pytest.fixture(scope="session")
def dual():
    return dual_numbers()
