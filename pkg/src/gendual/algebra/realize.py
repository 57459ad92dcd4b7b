"""Bounded congruence closure: turn a finite presentation into an explicit finite model.

The enumeration works on congruence classes of ground terms over the generators.
Classes are processed in creation order. Processing a class ``c``

* defines every operation application whose arguments are live classes ``<= c``
  and include ``c`` (so the table is total on processed classes), and
* instantiates every axiom at every assignment of live classes ``<= c`` that
  uses ``c``, evaluating both sides and merging the results.

Relations are instantiated once, up front. Merges propagate upward through the
operation table (congruence closure). When every class has been processed the
table is total, every axiom instance holds and every merge was forced, so the
result is the presented algebra itself. A run that keeps producing classes past
``bound`` raises :class:`BoundExceeded`; that is not a proof of infiniteness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .model import FiniteAlgebra, check_axioms, eval_term, generated_closure, homs_fp_to_model
from .terms import App, Term, Var
from .theory import FPPresentation

DEFAULT_BOUND = 4000


class BoundExceeded(RuntimeError):
    """The presentation was not realized within the bound."""


class _Closure:
    def __init__(self, presentation: FPPresentation, bound: int):
        theory = presentation.theory
        self.presentation = presentation
        self.bound = bound
        self.ops = list(theory.ops)
        self.parent = []
        self.uses = []
        self.table = {}
        self.pending = []
        self.live = 0
        self.steps = 0
        self.max_steps = bound * 1000
        self.axioms = [
            (lhs, rhs, theory.axiom_vars(i)) for i, (lhs, rhs) in enumerate(theory.axioms)
        ]

    # union-find ---------------------------------------------------------------

    def find(self, a: int) -> int:
        parent = self.parent
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def _new(self) -> int:
        cid = len(self.parent)
        self.parent.append(cid)
        self.uses.append([])
        self.live += 1
        if self.live > self.bound:
            raise BoundExceeded(
                f"{self.presentation.label()}: more than {self.bound} live classes"
            )
        return cid

    def _insert(self, key, value):
        self.table[key] = value
        for a in set(key[1]):
            self.uses[a].append(key)

    def _key(self, sym, args):
        return sym, tuple(self.find(a) for a in args)

    def get(self, sym, args):
        v = self.table.get(self._key(sym, args))
        return None if v is None else self.find(v)

    def apply(self, sym, args) -> int:
        key = self._key(sym, args)
        v = self.table.get(key)
        if v is None:
            v = self._new()
            self._insert(key, v)
            return v
        return self.find(v)

    def union(self, a: int, b: int) -> None:
        self.pending.append((a, b))
        while self.pending:
            a, b = self.pending.pop()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            if b < a:
                a, b = b, a
            self.parent[b] = a
            self.live -= 1
            moved, self.uses[b] = self.uses[b], []
            for key in moved:
                v = self.table.get(key)
                if v is None:
                    continue
                del self.table[key]
                nkey = self._key(*key)
                w = self.table.get(nkey)
                if w is None:
                    self._insert(nkey, v)
                else:
                    self.pending.append((v, w))

    # scanning -----------------------------------------------------------------

    def eval_define(self, t: Term, env) -> int:
        if isinstance(t, Var):
            return self.find(env[t.index])
        return self.apply(t.symbol, [self.eval_define(a, env) for a in t.args])

    def scan(self, lhs: Term, rhs: Term, env) -> None:
        """Force ``lhs = rhs`` under ``env``, filling a single missing top entry by deduction."""
        self.steps += 1
        if self.steps > self.max_steps:
            raise BoundExceeded(
                f"{self.presentation.label()}: more than {self.max_steps} closure steps"
            )
        sides = []
        for t in (lhs, rhs):
            if isinstance(t, Var):
                sides.append((self.find(env[t.index]), None))
            else:
                args = [self.eval_define(a, env) for a in t.args]
                v = self.get(t.symbol, args)
                sides.append((v, (t.symbol, args)))
        (lv, lkey), (rv, rkey) = sides
        if lv is not None and rv is not None:
            self.union(lv, rv)
        elif lv is not None:
            self._insert(self._key(*rkey), lv)
        elif rv is not None:
            self._insert(self._key(*lkey), rv)
        else:
            v = self.apply(*lkey)
            # the first definition may have triggered nothing, but re-read rhs key canonically
            w = self.get(*rkey)
            if w is None:
                self._insert(self._key(*rkey), v)
            else:
                self.union(v, w)

    # driver -------------------------------------------------------------------

    def run(self):
        gens = [self._new() for _ in range(self.presentation.generators)]
        for sym, ar in self.ops:
            if ar == 0:
                self.apply(sym, ())
        for lhs, rhs in self.presentation.relations:
            self.scan(lhs, rhs, gens)
        for lhs, rhs, k in self.axioms:
            if k == 0:
                self.scan(lhs, rhs, ())
        p = 0
        while p < len(self.parent):
            c = p
            p += 1
            if self.find(c) != c:
                continue
            earlier = [x for x in range(c) if self.parent[x] == x]
            for sym, ar in self.ops:
                if ar == 0:
                    continue
                for args in _tuples_using(c, earlier, ar):
                    self.apply(sym, args)
                    if self.parent[c] != c:
                        break
                if self.parent[c] != c:
                    break
            if self.parent[c] != c:
                continue
            for lhs, rhs, k in self.axioms:
                if k == 0:
                    continue
                for env in _tuples_using(c, earlier, k):
                    self.scan(lhs, rhs, env)
                    if self.parent[c] != c:
                        break
                if self.parent[c] != c:
                    break
        return gens


def _tuples_using(c: int, earlier: list, k: int):
    """All k-tuples over ``earlier + [c]`` that contain ``c``, first occurrence ordered."""
    full = earlier + [c]
    for first in range(k):
        for pre in itertools.product(earlier, repeat=first):
            for post in itertools.product(full, repeat=k - first - 1):
                yield pre + (c,) + post


@dataclass(frozen=True, eq=False)
class SiteObject:
    """A realized finitely presented algebra.

    ``generators[i]`` is the element named by generator ``x<i>`` and ``terms[e]`` is
    the canonical (least) term denoting element ``e``; elements are numbered in
    increasing canonical-term order.
    """

    presentation: FPPresentation
    model: FiniteAlgebra
    generators: tuple
    terms: tuple
    name: str = ""

    @property
    def size(self) -> int:
        return self.model.size

    def element(self, images, target: FiniteAlgebra) -> tuple:
        """Expand generator images into the total carrier map (sound: the model is generated)."""
        return tuple(eval_term(t, images, target) for t in self.terms)

    def label(self, e: int) -> str:
        return str(self.terms[e])

    def __repr__(self):
        return f"SiteObject({self.name or self.presentation.label()}, size={self.size})"


def _canonical_terms(cl: _Closure, roots: list, gens: list) -> dict:
    rep = {}
    for i, g in enumerate(gens):
        r = cl.find(g)
        cand = Var(i)
        if r not in rep or cand.key < rep[r].key:
            rep[r] = cand
    entries = [(sym, args, cl.find(v)) for (sym, args), v in cl.table.items()]
    changed = True
    while changed:
        changed = False
        for sym, args, v in entries:
            if all(a in rep for a in args):
                cand = App(sym, tuple(rep[a] for a in args))
                cur = rep.get(v)
                if cur is None or cand.key < cur.key:
                    rep[v] = cand
                    changed = True
    missing = [r for r in roots if r not in rep]
    if missing:
        raise AssertionError(f"classes without a term: {missing}")
    return rep


def realize(presentation: FPPresentation, bound: int = DEFAULT_BOUND, name: str | None = None) -> SiteObject:
    """Realize ``presentation`` as an explicit finite model, or raise :class:`BoundExceeded`."""
    if bound < 1:
        raise ValueError("bound must be positive")
    cl = _Closure(presentation, bound)
    gens = cl.run()
    roots = [x for x in range(len(cl.parent)) if cl.parent[x] == x]
    rep = _canonical_terms(cl, roots, gens)
    roots.sort(key=lambda r: rep[r].key)
    index = {r: i for i, r in enumerate(roots)}
    n = len(roots)
    theory = presentation.theory
    tables = {}
    for sym, ar in theory.ops:
        tab = np.zeros((n,) * ar, dtype=np.int64)
        for args in itertools.product(range(n), repeat=ar):
            v = cl.table.get((sym, tuple(roots[a] for a in args)))
            if v is None:
                raise AssertionError(f"closure left {sym}{args} undefined")
            tab[args] = index[cl.find(v)]
        tables[sym] = tab
    model = FiniteAlgebra(theory, n, tables)
    obj = SiteObject(
        presentation,
        model,
        tuple(index[cl.find(g)] for g in gens),
        tuple(rep[r] for r in roots),
        name or presentation.name or "",
    )
    _certify(obj)
    return obj


def _certify(obj: SiteObject) -> None:
    """Re-check the realization independently of the closure bookkeeping."""
    model = obj.model
    bad = check_axioms(model)
    if bad is not None:
        raise AssertionError(f"realized model violates axiom {bad[0]} at {bad[1]}")
    for lhs, rhs in obj.presentation.relations:
        if eval_term(lhs, obj.generators, model) != eval_term(rhs, obj.generators, model):
            raise AssertionError("realized model violates a relation")
    if len(generated_closure(model, obj.generators)) != model.size:
        raise AssertionError("realized model is not generated by its generators")
    for e, t in enumerate(obj.terms):
        if eval_term(t, obj.generators, model) != e:
            raise AssertionError("canonical term does not denote its element")


def validate_site_object(obj: SiteObject) -> list:
    """Problems with a (possibly hand-built) site object; empty when sound."""
    problems = []
    model = obj.model
    for i, (lhs, rhs) in enumerate(obj.presentation.relations):
        if eval_term(lhs, obj.generators, model) != eval_term(rhs, obj.generators, model):
            problems.append(f"relation {i} fails at the generator images")
    if len(generated_closure(model, obj.generators)) != model.size:
        problems.append("model is not generated by the generator images")
    if obj.generators not in homs_fp_to_model(obj.presentation, model):
        problems.append("generator images are not a model of the presentation")
    return problems
