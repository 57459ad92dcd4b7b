from __future__ import annotations

import pytest

from gendual.algebra import App, Var, numeral, parse_term
from gendual.algebra.terms import (
    TermSyntaxError,
    check_well_formed,
    depth,
    max_var,
    shift,
    substitute,
    subterms,
    variables,
)

RING = {"zero": 0, "one": 0, "add": 2, "mul": 2, "neg": 1}


def test_parse_round_trip():
    t = parse_term("(add (mul x0 x1) one)", RING)
    assert t == App("add", (App("mul", (Var(0), Var(1))), App("one")))
    assert parse_term(str(t), RING) == t


def test_parse_rejects_bad_input():
    for bad in ["(add x0)", "(frob x0)", "(add x0 x1", "x", ")"]:
        with pytest.raises((TermSyntaxError, ValueError)):
            parse_term(bad, RING)


def test_structure_helpers():
    t = parse_term("(add x2 (neg x0))", RING)
    assert variables(t) == {0, 2}
    assert max_var(t) == 2
    assert depth(t) == 2
    assert shift(t, 3) == parse_term("(add x5 (neg x3))", RING)
    assert substitute(t, {2: App("one")}) == parse_term("(add one (neg x0))", RING)
    assert len(list(subterms(t))) == 4


def test_well_formedness_checks_arity():
    with pytest.raises(ValueError):
        check_well_formed(App("add", (Var(0),)), RING)


def test_key_orders_by_size_then_variables_first():
    a, b, one = Var(0), Var(1), App("one")
    assert a.key < b.key < one.key
    assert one.key < App("neg", (one,)).key
    assert App("neg", (one,)).key < App("add", (one, one)).key


@pytest.fixture(scope="module")
def z11():
    from gendual.algebra import integers_mod, realize

    return realize(integers_mod(11))


@pytest.mark.parametrize("n", range(0, 10))
def test_numeral_denotes_n(z11, n):
    from gendual.algebra import eval_term

    model = z11.model
    acc = eval_term(App("zero"), (), model)
    for _ in range(n):
        acc = model.apply("add", [acc, eval_term(App("one"), (), model)])
    assert eval_term(numeral(n), (), model) == acc
    assert depth(numeral(n)) <= max(1, n.bit_length() + 1)
