from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gendual.algebra import (
    BOOLEAN_ALGEBRAS,
    COMMUTATIVE_RINGS,
    INITIAL_THEORY,
    MONOIDS,
    App,
    FiniteAlgebra,
    FPPresentation,
    Homomorphism,
    TheoryPresentation,
    PartialAlgebra,
    Var,
    brute_force_homs,
    check_axioms,
    coproduct_presentation,
    dual_numbers,
    enumerate_homs,
    eval_term,
    extend_to_hom,
    finite_set,
    free_presentation,
    generated_closure,
    homs_fp_to_model,
    initial_presentation,
    integers_mod,
    is_homomorphism,
    parse_term,
    search_homs,
    term_window,
    two_element_boolean,
)
from gendual.algebra.coproduct import coproduct_from_presentation, homs_model_to_model, universal_map
from gendual.algebra.model import identity, product_algebra
from gendual.site import realize_cached


def ring_mod(n: int) -> FiniteAlgebra:
    """Z/n built directly from modular arithmetic, independent of the closure."""
    x = np.arange(n)
    return FiniteAlgebra(
        COMMUTATIVE_RINGS,
        n,
        {
            "zero": 0,
            "one": 1 % n,
            "add": (x[:, None] + x[None, :]) % n,
            "mul": (x[:, None] * x[None, :]) % n,
            "neg": (-x) % n,
        },
    )


# --- finite algebras and axioms ----------------------------------------------------


def test_eval_term_examples():
    z4 = ring_mod(4)
    assert eval_term(Var(0), (3,), z4) == 3
    assert eval_term(App("mul", (Var(0), Var(0))), (2,), z4) == 0
    assert eval_term(App("one"), (), z4) == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
def test_modular_rings_satisfy_axioms(n):
    assert check_axioms(ring_mod(n)) is None


def test_planted_noncommutative_entry_is_caught():
    x = np.arange(4)
    mul = (x[:, None] * x[None, :]) % 4
    mul[2, 3] = 1
    bad = FiniteAlgebra(
        COMMUTATIVE_RINGS, 4, {"zero": 0, "one": 1, "add": (x[:, None] + x[None, :]) % 4, "mul": mul, "neg": (-x) % 4}
    )
    idx, assignment = check_axioms(bad)
    lhs, rhs = COMMUTATIVE_RINGS.axioms[idx]
    assert eval_term(lhs, assignment, bad) != eval_term(rhs, assignment, bad)


def test_empty_carrier_passes_vacuously():
    assert check_axioms(FiniteAlgebra(INITIAL_THEORY, 0, {})) is None
    semigroups = TheoryPresentation("semigroups", (("mul", 2),), MONOIDS.axioms[2:])
    assert check_axioms(FiniteAlgebra(semigroups, 0, {"mul": np.zeros((0, 0), dtype=int)})) is None


def test_table_validation():
    with pytest.raises(ValueError):
        FiniteAlgebra(COMMUTATIVE_RINGS, 2, {"zero": 0, "one": 1})
    x = np.arange(2)
    with pytest.raises(ValueError):
        FiniteAlgebra(COMMUTATIVE_RINGS, 2, {"zero": 0, "one": 5, "add": x[:, None] ^ x, "mul": x[:, None] & x, "neg": x})
    alg = ring_mod(3)
    with pytest.raises(ValueError):
        alg.tables["add"][0, 0] = 2


# --- homomorphisms -----------------------------------------------------------------------


def test_homs_fp_to_model_examples():
    z4 = ring_mod(4)
    assert homs_fp_to_model(dual_numbers(), z4) == [(0,), (2,)]
    assert homs_fp_to_model(free_presentation(COMMUTATIVE_RINGS, 1), z4) == [(i,) for i in range(4)]
    assert homs_fp_to_model(initial_presentation(COMMUTATIVE_RINGS), z4) == [()]


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 12))
def test_dual_number_points_are_square_zero_elements(n):
    z = ring_mod(n)
    expected = [(x,) for x in range(n) if (x * x) % n == 0]
    assert homs_fp_to_model(dual_numbers(), z) == expected


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6))
def test_search_matches_brute_force(m, n):
    a, b = ring_mod(m), ring_mod(n)
    found = enumerate_homs(a, b)
    assert found == brute_force_homs(a, b)
    assert len(found) == (1 if m % n == 0 else 0)


def test_search_respects_equations_and_allowed_sets():
    z6 = ring_mod(6)
    w = term_window(dual_numbers())
    homs = sorted(search_homs(w.structure, z6))
    e = w.terms.index(Var(0))
    assert sorted({h[e] for h in homs}) == [0]
    z4 = ring_mod(4)
    homs4 = sorted(search_homs(w.structure, z4))
    assert sorted(h[e] for h in homs4) == [0, 2]
    allowed = [None] * w.size
    allowed[e] = {2}
    assert [h[e] for h in search_homs(w.structure, z4, allowed)] == [2]


def test_extend_to_hom_and_closure():
    z6 = ring_mod(6)
    z2 = ring_mod(2)
    assert extend_to_hom(z6, z2, {1: 1}) == tuple(x % 2 for x in range(6))
    assert extend_to_hom(z6, z2, {1: 0}) is None
    assert generated_closure(z6, []) == set(range(6))


def test_product_algebra_is_a_model():
    p, elements = product_algebra([ring_mod(2), ring_mod(3)])
    assert p.size == 6 and check_axioms(p) is None
    assert len(enumerate_homs(p, ring_mod(6))) == 1


def test_homomorphism_composition():
    z6, z3 = ring_mod(6), ring_mod(3)
    h = Homomorphism(z6, z3, tuple(x % 3 for x in range(6)))
    assert h.is_valid() and not h.is_bijective()
    assert identity(z6).then(h) == h
    with pytest.raises(ValueError):
        h.then(h)


# --- realization --------------------------------------------------------------------------


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6, 8, 10, 12])
def test_integers_mod_have_m_elements(m):
    obj = realize_cached(integers_mod(m))
    assert obj.size == m
    assert len(enumerate_homs(obj.model, ring_mod(m))) == 1
    iso = enumerate_homs(obj.model, ring_mod(m))[0]
    assert len(set(iso)) == m


@pytest.mark.parametrize("m", [2, 3, 4])
def test_dual_numbers_mod_m(m):
    obj = realize_cached(dual_numbers(m))
    assert obj.size == m * m


def test_dual_numbers_mod_2_elements():
    obj = realize_cached(dual_numbers(2))
    assert sorted(obj.label(e) for e in range(4)) == sorted(["one", "zero", "x0", "(add x0 one)"])


def test_dual_numbers_over_integers_exceed_bound():
    from gendual.algebra import BoundExceeded, realize

    with pytest.raises(BoundExceeded):
        realize(dual_numbers(), bound=300)


@settings(max_examples=12, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8))
def test_coproduct_of_cyclic_rings_is_gcd(m, n):
    obj = realize_cached(coproduct_presentation(integers_mod(m), integers_mod(n)))
    assert obj.size == math.gcd(m, n)


def test_boolean_and_set_realizations():
    assert realize_cached(two_element_boolean()).size == 2
    two = two_element_boolean()
    assert realize_cached(coproduct_presentation(two, two)).size == 2
    for n in range(5):
        assert realize_cached(finite_set(n)).size == n
    cyclic = FPPresentation(MONOIDS, 1, ((parse_term("(mul x0 (mul x0 x0))", MONOIDS.arities), App("e")),))
    assert realize_cached(cyclic).size == 3


def test_realization_is_certified():
    obj = realize_cached(dual_numbers(3))
    assert check_axioms(obj.model) is None
    assert generated_closure(obj.model, obj.generators) == set(range(obj.size))
    for e, t in enumerate(obj.terms):
        assert eval_term(t, obj.generators, obj.model) == e
    keys = [t.key for t in obj.terms]
    assert keys == sorted(keys)


def test_coproduct_presentation_examples():
    p = coproduct_presentation(integers_mod(2), dual_numbers())
    assert p.generators == 1 and len(p.relations) == 2
    q = coproduct_presentation(dual_numbers(), initial_presentation(COMMUTATIVE_RINGS))
    assert q.generators == 1 and q.relations == dual_numbers().relations
    a, b = dual_numbers(), free_presentation(COMMUTATIVE_RINGS, 2)
    assert coproduct_presentation(a, b).generators == coproduct_presentation(b, a).generators


def test_homs_model_to_model_examples():
    z2, z6, z1 = (realize_cached(integers_mod(m)) for m in (2, 6, 1))
    assert [h.map for h in homs_model_to_model(z2, z2)] == [(0, 1)]
    assert homs_model_to_model(z2, z6) == []
    assert len(homs_model_to_model(z1, z1)) == 1 and homs_model_to_model(z1, z2) == []


def test_universal_map_examples():
    z2 = realize_cached(integers_mod(2))
    raw = realize_cached(coproduct_presentation(integers_mod(2), dual_numbers()))
    cop = coproduct_from_presentation(z2, dual_numbers(), raw)
    bc = raw.model
    # the cocone of injections mediates through the identity
    assert cop.universal(cop.incl1, cop.incl2, bc) == tuple(range(4))
    # killing e gives a surjection with fibres of size 2
    zero = eval_term(App("zero"), (), z2.model)
    g = identity(z2.model)
    kill = universal_map(g, (zero,), cop)
    assert kill.is_valid()
    fibres = [kill.map.count(x) for x in range(2)]
    assert fibres == [2, 2]
    # codiagonal of B with itself
    cop_bb = coproduct_from_presentation(z2, integers_mod(2), realize_cached(coproduct_presentation(integers_mod(2), integers_mod(2))))
    codiag = universal_map(g, (), cop_bb)
    assert tuple(codiag.map[a] for a in cop_bb.incl1) == g.map


def test_term_window_shape():
    w = term_window(dual_numbers())
    assert w.depth == 1
    # generator, two constants, negations and the binary applications over them
    assert w.size == 3 + 3 + 9 + 9
    assert len(w.structure.equations) == 1
