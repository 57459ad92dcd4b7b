"""Finite models of a theory, homomorphisms between them, and their enumeration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .terms import Term, Var
from .theory import FPPresentation, TheoryPresentation, require_same_theory


class UnboundVariable(ValueError):
    pass


class UnknownSymbol(ValueError):
    pass


class FiniteAlgebra:
    """An explicit finite structure: carrier ``range(size)`` plus one table per operation.

    ``tables[sym]`` is an integer array of shape ``(size,) * arity``. Tables are
    made read-only on construction. Whether the theory's axioms hold is a separate
    question answered by :func:`check_axioms`.
    """

    __slots__ = ("theory", "size", "tables", "_lists", "_entries")

    def __init__(self, theory: TheoryPresentation, size: int, tables: dict):
        if size < 0:
            raise ValueError("carrier size must be nonnegative")
        self.theory = theory
        self.size = int(size)
        self.tables = {}
        arities = theory.arities
        if set(tables) != set(arities):
            missing = set(arities) - set(tables)
            extra = set(tables) - set(arities)
            raise ValueError(f"table symbols do not match signature (missing {missing}, extra {extra})")
        for sym, ar in theory.ops:
            arr = np.array(tables[sym], dtype=np.int64)
            if arr.shape != (self.size,) * ar:
                raise ValueError(f"table for {sym!r} has shape {arr.shape}, expected {(self.size,) * ar}")
            if arr.size and (arr.min() < 0 or arr.max() >= self.size):
                raise ValueError(f"table for {sym!r} leaves the carrier")
            arr.setflags(write=False)
            self.tables[sym] = arr
        self._lists = {sym: arr.tolist() for sym, arr in self.tables.items()}
        self._entries = None

    def apply(self, sym: str, args: Sequence[int]) -> int:
        try:
            v = self._lists[sym]
        except KeyError:
            raise UnknownSymbol(sym) from None
        for a in args:
            v = v[a]
        return v

    def entries(self) -> Iterator[tuple]:
        """Every ``(symbol, args, result)`` of every table."""
        if self._entries is None:
            out = []
            for sym, ar in self.theory.ops:
                lst = self._lists[sym]
                for args in itertools.product(range(self.size), repeat=ar):
                    v = lst
                    for a in args:
                        v = v[a]
                    out.append((sym, args, v))
            self._entries = tuple(out)
        return iter(self._entries)

    def __repr__(self):
        return f"FiniteAlgebra({self.theory.name}, size={self.size})"


def eval_term(t: Term, assignment: Sequence[int], algebra: FiniteAlgebra) -> int:
    if isinstance(t, Var):
        if t.index >= len(assignment):
            raise UnboundVariable(f"x{t.index} is unbound (assignment has {len(assignment)} values)")
        return assignment[t.index]
    return algebra.apply(t.symbol, [eval_term(a, assignment, algebra) for a in t.args])


def _eval_grid(t: Term, nvars: int, algebra: FiniteAlgebra) -> np.ndarray:
    """Value of ``t`` under every assignment, as an array of shape ``(size,) * nvars``."""
    n = algebra.size
    if isinstance(t, Var):
        shape = [1] * nvars
        shape[t.index] = n
        return np.broadcast_to(np.arange(n).reshape(shape), (n,) * nvars)
    table = algebra.tables[t.symbol]
    if not t.args:
        return np.broadcast_to(table, (n,) * nvars)
    return table[tuple(_eval_grid(a, nvars, algebra) for a in t.args)]


def check_axioms(algebra: FiniteAlgebra):
    """``None`` if every axiom holds, else ``(axiom_index, assignment)`` of the first failure.

    Assignments are visited in lexicographic order (x0 most significant).
    """
    theory = algebra.theory
    for idx, (lhs, rhs) in enumerate(theory.axioms):
        k = theory.axiom_vars(idx)
        if algebra.size == 0 and k > 0:
            continue
        left = _eval_grid(lhs, k, algebra)
        right = _eval_grid(rhs, k, algebra)
        bad = np.argwhere(left != right)
        if len(bad):
            return idx, tuple(int(v) for v in bad[0])
    return None


def is_homomorphism(mapping: Sequence[int], source: FiniteAlgebra, target: FiniteAlgebra) -> bool:
    if len(mapping) != source.size:
        return False
    for sym, args, res in source.entries():
        if target.apply(sym, [mapping[a] for a in args]) != mapping[res]:
            return False
    return True


@dataclass(frozen=True)
class Homomorphism:
    source: FiniteAlgebra
    target: FiniteAlgebra
    map: tuple

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(self.map))

    def __call__(self, x: int) -> int:
        return self.map[x]

    def then(self, other: "Homomorphism") -> "Homomorphism":
        """``other ∘ self``."""
        if other.source is not self.target:
            raise ValueError("composing homomorphisms with mismatched endpoints")
        return Homomorphism(self.source, other.target, tuple(other.map[x] for x in self.map))

    def is_valid(self) -> bool:
        return is_homomorphism(self.map, self.source, self.target)

    def is_bijective(self) -> bool:
        return self.source.size == self.target.size and len(set(self.map)) == self.source.size


def identity(algebra: FiniteAlgebra) -> Homomorphism:
    return Homomorphism(algebra, algebra, tuple(range(algebra.size)))


def homs_fp_to_model(presentation: FPPresentation, model: FiniteAlgebra) -> list:
    """Generator-image tuples under which every relation holds, lexicographically ordered."""
    require_same_theory(presentation.theory, model.theory)
    out = []
    rels = presentation.relations
    for images in itertools.product(range(model.size), repeat=presentation.generators):
        if all(eval_term(l, images, model) == eval_term(r, images, model) for l, r in rels):
            out.append(images)
    return out


# --- brute-force homomorphism search over all carrier functions -----------------


@dataclass(frozen=True)
class PartialAlgebra:
    """A finite set with partially defined operations and extra required equations.

    Used as the domain of a homomorphism search: a function is accepted when it
    commutes with every defined entry and identifies both sides of each equation.
    """

    size: int
    entries: tuple  # of (symbol, args, result)
    equations: tuple = ()  # of (a, b) element pairs

    @classmethod
    def of(cls, algebra: FiniteAlgebra) -> "PartialAlgebra":
        return cls(algebra.size, tuple(algebra.entries()))


def generation_order(dom: PartialAlgebra) -> tuple:
    """Order the domain so that most elements are forced by earlier ones.

    Returns ``(order, definer)`` where ``definer[x]`` is an entry producing ``x``
    from earlier elements, or ``None`` for a free choice point.
    """
    placed = [False] * dom.size
    definer = [None] * dom.size
    order = []

    def saturate():
        changed = True
        while changed:
            changed = False
            for ent in dom.entries:
                res = ent[2]
                if not placed[res] and all(placed[a] for a in ent[1]):
                    placed[res] = True
                    definer[res] = ent
                    order.append(res)
                    changed = True

    saturate()
    for x in range(dom.size):
        if not placed[x]:
            placed[x] = True
            order.append(x)
            saturate()
    return tuple(order), tuple(definer)


def search_homs(
    dom: PartialAlgebra,
    target: FiniteAlgebra,
    allowed: Sequence[Iterable[int]] | None = None,
    limit: int | None = None,
) -> Iterator[tuple]:
    """Yield every function ``dom -> target`` respecting all entries and equations.

    ``allowed[x]`` optionally restricts the image of ``x``. Results come out in
    lexicographic order of the image tuple only when the domain order is the
    identity; callers that need canonical order sort.
    """
    n = dom.size
    order, definer = generation_order(dom)
    pos = {x: i for i, x in enumerate(order)}
    checks = [[] for _ in range(n)]
    for sym, args, res in dom.entries:
        last = max([pos[res]] + [pos[a] for a in args])
        checks[last].append((sym, args, res))
    eqs = [[] for _ in range(n)]
    for a, b in dom.equations:
        eqs[max(pos[a], pos[b])].append((a, b))
    if allowed is None:
        allow = [None] * n
    else:
        allow = [None if s is None else set(s) for s in allowed]
    full = range(target.size)
    value = [None] * n
    count = 0

    def rec(i):
        nonlocal count
        if i == n:
            count += 1
            yield tuple(value)
            return
        x = order[i]
        d = definer[x]
        if d is not None:
            sym, args, _ = d
            cands = (target.apply(sym, [value[a] for a in args]),)
        else:
            cands = full
        for v in cands:
            if allow[x] is not None and v not in allow[x]:
                continue
            value[x] = v
            ok = True
            for sym, args, res in checks[i]:
                if target.apply(sym, [value[a] for a in args]) != value[res]:
                    ok = False
                    break
            if ok:
                for a, b in eqs[i]:
                    if value[a] != value[b]:
                        ok = False
                        break
            if ok:
                yield from rec(i + 1)
                if limit is not None and count >= limit:
                    return
        value[x] = None

    if n == 0:
        yield ()
        return
    yield from rec(0)


def enumerate_homs(source: FiniteAlgebra, target: FiniteAlgebra, allowed=None) -> list:
    """All homomorphisms ``source -> target`` as image tuples, lexicographically sorted."""
    require_same_theory(source.theory, target.theory)
    return sorted(search_homs(PartialAlgebra.of(source), target, allowed))


def brute_force_homs(source: FiniteAlgebra, target: FiniteAlgebra) -> list:
    """Filter all ``|target|^|source|`` functions; only for tiny carriers."""
    return [
        f
        for f in itertools.product(range(target.size), repeat=source.size)
        if is_homomorphism(f, source, target)
    ]


def extend_to_hom(
    source: FiniteAlgebra, target: FiniteAlgebra, partial: dict
) -> tuple | None:
    """The unique homomorphism agreeing with ``partial``, if one exists.

    ``partial`` must be defined on a generating set of ``source``; returns ``None``
    when the forced values conflict or the result is not a homomorphism.
    """
    value = dict(partial)
    changed = True
    while changed:
        changed = False
        for sym, args, res in source.entries():
            if all(a in value for a in args):
                v = target.apply(sym, [value[a] for a in args])
                if res in value:
                    if value[res] != v:
                        return None
                else:
                    value[res] = v
                    changed = True
    if len(value) != source.size:
        return None
    mapping = tuple(value[x] for x in range(source.size))
    return mapping if is_homomorphism(mapping, source, target) else None


def generated_closure(algebra: FiniteAlgebra, seeds: Iterable[int]) -> set:
    """Smallest subset containing ``seeds`` and the constants, closed under all operations."""
    reached = set(seeds)
    changed = True
    while changed:
        changed = False
        for sym, args, res in algebra.entries():
            if res not in reached and all(a in reached for a in args):
                reached.add(res)
                changed = True
    return reached


def product_algebra(algebras: Sequence[FiniteAlgebra]) -> tuple:
    """Cartesian product with componentwise operations; returns ``(algebra, elements)``."""
    theory = algebras[0].theory
    require_same_theory(*(a.theory for a in algebras))
    elements = list(itertools.product(*(range(a.size) for a in algebras)))
    index = {e: i for i, e in enumerate(elements)}
    tables = {}
    n = len(elements)
    for sym, ar in theory.ops:
        tab = np.zeros((n,) * ar, dtype=np.int64)
        for args in itertools.product(range(n), repeat=ar):
            comp = tuple(
                alg.apply(sym, [elements[a][k] for a in args]) for k, alg in enumerate(algebras)
            )
            tab[args] = index[comp]
        tables[sym] = tab
    return FiniteAlgebra(theory, n, tables), elements
