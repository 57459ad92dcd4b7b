from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .terms import Term, check_well_formed, max_var, shift


class TheoryMismatch(ValueError):
    pass


@dataclass(frozen=True)
class TheoryPresentation:
    """A finitary algebraic theory: operation symbols with arities plus equations."""

    name: str
    ops: tuple  # of (symbol, arity)
    axioms: tuple = ()  # of (lhs, rhs)

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple((str(s), int(a)) for s, a in self.ops))
        object.__setattr__(self, "axioms", tuple((l, r) for l, r in self.axioms))
        seen = set()
        for sym, ar in self.ops:
            if sym in seen:
                raise ValueError(f"duplicate operation symbol {sym!r} in theory {self.name!r}")
            if ar < 0:
                raise ValueError(f"negative arity for {sym!r}")
            if sym.startswith("x") and sym[1:].isdigit():
                raise ValueError(f"symbol {sym!r} clashes with variable syntax")
            seen.add(sym)
        arities = self.arities
        for lhs, rhs in self.axioms:
            check_well_formed(lhs, arities)
            check_well_formed(rhs, arities)

    @property
    def arities(self) -> dict:
        return dict(self.ops)

    @property
    def nullary(self) -> list:
        return [s for s, a in self.ops if a == 0]

    def axiom_vars(self, index: int) -> int:
        lhs, rhs = self.axioms[index]
        return max(max_var(lhs), max_var(rhs)) + 1


def _same_theory(a: TheoryPresentation, b: TheoryPresentation) -> bool:
    return a is b or a == b


def require_same_theory(*theories: TheoryPresentation) -> None:
    first = theories[0]
    for other in theories[1:]:
        if not _same_theory(first, other):
            raise TheoryMismatch(f"theory mismatch: {first.name!r} vs {other.name!r}")


@dataclass(frozen=True)
class FPPresentation:
    """A finitely presented algebra: ``generators`` free generators modulo ``relations``."""

    theory: TheoryPresentation
    generators: int
    relations: tuple = ()
    name: str | None = None

    def __post_init__(self):
        if self.generators < 0:
            raise ValueError("generator count must be nonnegative")
        object.__setattr__(self, "relations", tuple((l, r) for l, r in self.relations))
        arities = self.theory.arities
        for lhs, rhs in self.relations:
            check_well_formed(lhs, arities)
            check_well_formed(rhs, arities)
            top = max(max_var(lhs), max_var(rhs))
            if top >= self.generators:
                raise ValueError(
                    f"relation mentions x{top} but the presentation has {self.generators} generators"
                )

    def label(self) -> str:
        return self.name or f"<{self.generators} gens, {len(self.relations)} rels>"

    # presentations compare structurally; the display name is not part of identity
    def __eq__(self, other):
        if not isinstance(other, FPPresentation):
            return NotImplemented
        return (self.theory, self.generators, self.relations) == (
            other.theory,
            other.generators,
            other.relations,
        )

    def __hash__(self):
        return hash((self.theory, self.generators, self.relations))


def coproduct_presentation(c1: FPPresentation, c2: FPPresentation) -> FPPresentation:
    """Presentation of the coproduct c1 ⊗ c2.

    Generators of ``c2`` are renumbered after those of ``c1``; the two renumberings
    are the coproduct injections.
    """
    require_same_theory(c1.theory, c2.theory)
    off = c1.generators
    rels = tuple(c1.relations) + tuple((shift(l, off), shift(r, off)) for l, r in c2.relations)
    name = None
    if c1.name and c2.name:
        name = f"{c1.name}⊗{c2.name}"
    return FPPresentation(c1.theory, c1.generators + c2.generators, rels, name)


def initial_presentation(theory: TheoryPresentation) -> FPPresentation:
    return FPPresentation(theory, 0, (), "initial")


def free_presentation(theory: TheoryPresentation, n: int) -> FPPresentation:
    return FPPresentation(theory, n, (), f"free{n}")


def relations_from(pairs: Sequence[tuple], parse) -> tuple:
    return tuple((parse(l), parse(r)) for l, r in pairs)
