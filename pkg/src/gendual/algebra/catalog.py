"""Built-in theories and a few presentations used throughout the test-suite."""

from __future__ import annotations

from .terms import App, Var, numeral, parse_term
from .theory import FPPresentation, TheoryPresentation


def _axioms(ops, pairs):
    arities = dict(ops)
    return tuple((parse_term(l, arities), parse_term(r, arities)) for l, r in pairs)


_RING_OPS = (("zero", 0), ("one", 0), ("add", 2), ("mul", 2), ("neg", 1))

COMMUTATIVE_RINGS = TheoryPresentation(
    "commutative_rings",
    _RING_OPS,
    _axioms(
        _RING_OPS,
        [
            ("(add x0 zero)", "x0"),
            ("(add x0 x1)", "(add x1 x0)"),
            ("(add (add x0 x1) x2)", "(add x0 (add x1 x2))"),
            ("(add x0 (neg x0))", "zero"),
            ("(mul x0 one)", "x0"),
            ("(mul x0 x1)", "(mul x1 x0)"),
            ("(mul (mul x0 x1) x2)", "(mul x0 (mul x1 x2))"),
            ("(mul x0 (add x1 x2))", "(add (mul x0 x1) (mul x0 x2))"),
        ],
    ),
)

_BOOL_OPS = (("zero", 0), ("one", 0), ("and", 2), ("or", 2), ("not", 1))

BOOLEAN_ALGEBRAS = TheoryPresentation(
    "boolean_algebras",
    _BOOL_OPS,
    _axioms(
        _BOOL_OPS,
        [
            ("(and x0 x1)", "(and x1 x0)"),
            ("(or x0 x1)", "(or x1 x0)"),
            ("(and (and x0 x1) x2)", "(and x0 (and x1 x2))"),
            ("(or (or x0 x1) x2)", "(or x0 (or x1 x2))"),
            ("(and x0 (or x0 x1))", "x0"),
            ("(or x0 (and x0 x1))", "x0"),
            ("(and x0 (or x1 x2))", "(or (and x0 x1) (and x0 x2))"),
            ("(and x0 one)", "x0"),
            ("(or x0 zero)", "x0"),
            ("(and x0 (not x0))", "zero"),
            ("(or x0 (not x0))", "one"),
        ],
    ),
)

INITIAL_THEORY = TheoryPresentation("sets", ())

POINTED_SETS = TheoryPresentation("pointed_sets", (("pt", 0),))

_MONOID_OPS = (("e", 0), ("mul", 2))

MONOIDS = TheoryPresentation(
    "monoids",
    _MONOID_OPS,
    _axioms(
        _MONOID_OPS,
        [
            ("(mul e x0)", "x0"),
            ("(mul x0 e)", "x0"),
            ("(mul (mul x0 x1) x2)", "(mul x0 (mul x1 x2))"),
        ],
    ),
)

CATALOG = {
    t.name: t for t in (COMMUTATIVE_RINGS, BOOLEAN_ALGEBRAS, INITIAL_THEORY, POINTED_SETS, MONOIDS)
}


def integers_mod(m: int) -> FPPresentation:
    """⟨ | m·1 = 0⟩ over commutative rings; ``m = 1`` is the zero ring."""
    if m < 1:
        raise ValueError("modulus must be positive")
    return FPPresentation(COMMUTATIVE_RINGS, 0, ((numeral(m), App("zero")),), f"Z/{m}")


def dual_numbers(m: int | None = None) -> FPPresentation:
    """Z[e]/(e²), or (Z/m)[e]/(e²) when ``m`` is given."""
    rels = [(App("mul", (Var(0), Var(0))), App("zero"))]
    name = "Z[e]"
    if m is not None:
        rels.insert(0, (numeral(m), App("zero")))
        name = f"Z/{m}[e]"
    return FPPresentation(COMMUTATIVE_RINGS, 1, tuple(rels), name)


def polynomial_ring() -> FPPresentation:
    return FPPresentation(COMMUTATIVE_RINGS, 1, (), "Z[x]")


def two_element_boolean() -> FPPresentation:
    return FPPresentation(BOOLEAN_ALGEBRAS, 0, (), "2")


def finite_set(n: int) -> FPPresentation:
    return FPPresentation(INITIAL_THEORY, n, (), f"set{n}")
