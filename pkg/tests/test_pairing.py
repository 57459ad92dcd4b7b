from __future__ import annotations

import itertools

import numpy as np
import pytest

from gendual.algebra import check_axioms, integers_mod
from gendual.pairing import (
    CompletePairingSpec,
    brute_force_boolean_homs,
    check_complete,
    kl_instance,
    object_classifier_instance,
    plain_set,
    powerset_algebra,
    stone_instance,
    structures_commute,
    two,
)
from gendual.presheaf import BudgetExceeded


@pytest.mark.parametrize("n", range(5))
def test_stone_instance_is_complete(n):
    rep = check_complete(stone_instance(n))
    assert rep.passed, rep.to_json()
    assert rep.sizes["Hom(P,R)"] == n
    assert rep.sizes["Hom(Q,R)"] == 2**n


@pytest.mark.parametrize("n", range(5))
def test_brute_force_boolean_homs(n):
    A = powerset_algebra(n)
    assert check_axioms(A) is None
    homs = brute_force_boolean_homs(A)
    assert len(homs) == n
    # each survivor is evaluation at a point
    points = sorted(tuple(int(v) for v in row) for row in homs)
    assert points == sorted(tuple((s >> c) & 1 for s in range(1 << n)) for c in range(n))


def test_i_is_the_indicator_bijection():
    spec = stone_instance(3)
    rep = check_complete(spec)
    assert rep.i_iso
    # subsets and their indicator functions are listed in the same order
    assert rep.witnesses["i"]["inverse"] == sorted(
        range(8), key=lambda s: tuple((s >> c) & 1 for c in range(3))
    )


def test_stone_budget():
    with pytest.raises(BudgetExceeded):
        stone_instance(5)


def test_constant_pairing_is_not_complete():
    P, Q = plain_set(2), plain_set(2)
    spec = CompletePairingSpec(P, Q, plain_set(2), plain_set(2), [[0, 0], [0, 0]], "constant")
    rep = check_complete(spec)
    assert not (rep.i_iso and rep.j_iso)
    assert not rep.passed


def test_terminal_pairing_is_complete():
    one = plain_set(1)
    rep = check_complete(CompletePairingSpec(one, one, one, one, [[0]], "terminal"))
    assert rep.passed


def test_structures_commute():
    assert structures_commute(two(), plain_set(2))
    # the Boolean structure on 2 does not commute with itself: 'and' is not a lattice map of pairs under 'not'
    assert not structures_commute(two(), two())


def test_object_classifier(sets_site):
    rep = object_classifier_instance(sets_site)
    assert rep.passed, rep.failures()
    assert [(c.lhs_size, c.rhs_size) for c in rep.components] == [(n + 1, n + 1) for n in range(6)]


def test_kl_instance(rings_site):
    rep = kl_instance(rings_site, (1, 2, 3, 4))
    assert rep.passed, rep.failures()
    assert [c.rhs_size for c in rep.components] == [1, 4, 9, 16]


def test_kl_outside_the_site(rings_site):
    rep = kl_instance(rings_site, (5,))
    assert rep.passed
    assert rep.components[0].rhs_size == 25
    assert rep.notes
