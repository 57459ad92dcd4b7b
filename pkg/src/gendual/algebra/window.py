"""Finite windows into the term algebra of a presentation with no finite realization."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .model import PartialAlgebra
from .terms import App, Var, depth
from .theory import FPPresentation


@dataclass(frozen=True)
class TermWindow:
    """Ground terms over the generators up to a fixed depth, as a partial algebra.

    An operation entry ``op(args) -> t`` exists whenever the term ``t`` is in the
    window; each relation of the presentation becomes a required equation. A
    map out of the window that respects entries and equations is the restriction
    of exactly one homomorphism out of the presented algebra.
    """

    presentation: FPPresentation
    depth: int
    terms: tuple
    structure: PartialAlgebra

    @property
    def size(self) -> int:
        return len(self.terms)

    def label(self, x: int) -> str:
        return str(self.terms[x])


def term_window(presentation: FPPresentation, max_depth: int | None = None) -> TermWindow:
    rel_depth = max([0] + [max(depth(l), depth(r)) for l, r in presentation.relations])
    d = max(1, rel_depth) if max_depth is None else max_depth
    if d < rel_depth:
        raise ValueError(f"window depth {d} is below the relation depth {rel_depth}")
    theory = presentation.theory
    level = [Var(i) for i in range(presentation.generators)]
    level += [App(sym) for sym, ar in theory.ops if ar == 0]
    terms = list(level)
    index = {t: k for k, t in enumerate(terms)}
    entries = [(t.symbol, (), index[t]) for t in terms if isinstance(t, App)]
    for _ in range(d):
        prev = list(terms)
        for sym, ar in theory.ops:
            if ar == 0:
                continue
            for args in itertools.product(prev, repeat=ar):
                t = App(sym, args)
                if t not in index:
                    index[t] = len(terms)
                    terms.append(t)
                    entries.append((sym, tuple(index[a] for a in args), index[t]))
    eqs = []
    for l, r in presentation.relations:
        if l not in index or r not in index:
            raise ValueError("relation term missing from window")
        eqs.append((index[l], index[r]))
    return TermWindow(presentation, d, tuple(terms), PartialAlgebra(len(terms), tuple(entries), tuple(eqs)))
