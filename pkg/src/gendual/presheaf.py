"""Copresheaves on a finite site, exponentials, transposition and Dirac maps.

Every copresheaf addresses its elements by index: ``size(i)`` elements at object
``i``, ``label(i, x)`` for display, ``act(i, j, m, x)`` for the action of the
``m``-th morphism in ``site.homs[(i, j)]``.

Three exponential objects share one interface (:class:`Exponential`): the end
construction, the coproduct formula for representable exponents and the
function-set formula for constant exponents. Each provides the projections
``proj(i, arrow, u)`` onto the components indexed by arrows ``arrow = (j, m)``
out of object ``i``; a projection is a tuple mapping ``Q(j)`` indices to ``R(j)``
indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from .algebra import FiniteAlgebra, FPPresentation, PartialAlgebra, SiteObject, search_homs
from .algebra.theory import require_same_theory
from .site import SiteSample

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    pass


class TransposeError(RuntimeError):
    pass


class Copresheaf:
    """Base class; subclasses define ``size``, ``label`` and ``act``."""

    site: SiteSample
    name: str = "?"

    def size(self, i: int) -> int:
        raise NotImplementedError

    def label(self, i: int, x: int):
        return x

    def act(self, i: int, j: int, m: int, x: int) -> int:
        raise NotImplementedError

    def algebra(self, i: int) -> FiniteAlgebra | None:
        """T-structure on the value at ``i``, when there is one."""
        return None

    def rho(self, i: int) -> tuple | None:
        """R-algebra structure map R(i) -> self(i), when there is one."""
        return None

    def index(self, i: int, label) -> int:
        for x in range(self.size(i)):
            if self.label(i, x) == label:
                return x
        raise KeyError(label)

    @property
    def approximate(self) -> bool:
        return self.site.approximate

    def sizes(self) -> list:
        return [self.size(i) for i in range(len(self.site))]

    def action_table(self, i: int, j: int, m: int) -> tuple:
        return tuple(self.act(i, j, m, x) for x in range(self.size(i)))


class TableCopresheaf(Copresheaf):
    """A copresheaf given by explicit value lists and action tables."""

    def __init__(self, site, labels, actions, name="?", algebras=None, rhos=None):
        self.site = site
        self.labels = [list(v) for v in labels]
        self.actions = dict(actions)
        self.name = name
        self._algebras = algebras
        self._rhos = rhos
        self._lookup = None

    def size(self, i):
        return len(self.labels[i])

    def label(self, i, x):
        return self.labels[i][x]

    def index(self, i, label):
        if self._lookup is None:
            self._lookup = [{l: x for x, l in enumerate(v)} for v in self.labels]
        return self._lookup[i][label]

    def act(self, i, j, m, x):
        return self.actions[(i, j, m)][x]

    def algebra(self, i):
        return None if self._algebras is None else self._algebras[i]

    def rho(self, i):
        return None if self._rhos is None else self._rhos[i]


def check_functorial(P: Copresheaf) -> list:
    """Violations of identity and composition laws (exhaustive)."""
    site = P.site
    out = []
    n = len(site)
    for i in range(n):
        e = site.identity_index(i)
        if P.action_table(i, i, e) != tuple(range(P.size(i))):
            out.append(f"{P.name}: identity on {site.objects[i].name} acts nontrivially")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for m1 in range(len(site.homs[(i, j)])):
                    for m2 in range(len(site.homs[(j, k)])):
                        mc = site.compose(i, j, k, m1, m2)
                        for x in range(P.size(i)):
                            if P.act(j, k, m2, P.act(i, j, m1, x)) != P.act(i, k, mc, x):
                                out.append(f"{P.name}: composition fails at {(i, j, k, m1, m2, x)}")
                                break
    return out


# --- basic copresheaves -----------------------------------------------------------


def forgetful_R(site: SiteSample) -> TableCopresheaf:
    labels = [list(range(o.size)) for o in site.objects]
    actions = {(i, j, m): h.map for (i, j), hs in site.homs.items() for m, h in enumerate(hs)}
    return TableCopresheaf(site, labels, actions, "R", algebras=[o.model for o in site.objects])


def yoneda(C: FPPresentation, site: SiteSample) -> TableCopresheaf:
    """y(C): object B goes to the generator-image tuples of homomorphisms C -> B."""
    from .algebra import homs_fp_to_model

    require_same_theory(C.theory, site.theory)
    labels = [homs_fp_to_model(C, o.model) for o in site.objects]
    lookup = [{t: x for x, t in enumerate(v)} for v in labels]
    actions = {}
    for (i, j), hs in site.homs.items():
        for m, h in enumerate(hs):
            actions[(i, j, m)] = tuple(lookup[j][tuple(h.map[v] for v in t)] for t in labels[i])
    return TableCopresheaf(site, labels, actions, f"y({C.label()})")


def constant(elements: Sequence, site: SiteSample, algebra: FiniteAlgebra | None = None, name="γ*") -> TableCopresheaf:
    """γ*(S): the same set at every object, identities as actions."""
    elements = list(elements)
    if algebra is not None and algebra.size != len(elements):
        raise ValueError("algebra structure does not match the constant set")
    n = len(site)
    labels = [elements] * n
    ident = tuple(range(len(elements)))
    actions = {(i, j, m): ident for (i, j), hs in site.homs.items() for m in range(len(hs))}
    algebras = None if algebra is None else [algebra] * n
    return TableCopresheaf(site, labels, actions, name, algebras=algebras)


def constant_algebra(C: SiteObject, site: SiteSample) -> TableCopresheaf:
    """γ*(C) for a realized algebra C, carrying C's structure at every object."""
    return constant(range(C.size), site, C.model, f"γ*({C.name or C.presentation.label()})")


class Product(Copresheaf):
    """Pointwise product P × Q."""

    def __init__(self, P: Copresheaf, Q: Copresheaf):
        self.site = P.site
        self.P, self.Q = P, Q
        self.name = f"{P.name}×{Q.name}"

    def size(self, i):
        return self.P.size(i) * self.Q.size(i)

    def split(self, i, x):
        return divmod(x, self.Q.size(i))

    def pair(self, i, p, q):
        return p * self.Q.size(i) + q

    def label(self, i, x):
        p, q = self.split(i, x)
        return (self.P.label(i, p), self.Q.label(i, q))

    def act(self, i, j, m, x):
        p, q = self.split(i, x)
        return self.pair(j, self.P.act(i, j, m, p), self.Q.act(i, j, m, q))


@dataclass
class NatTransform:
    source: Copresheaf
    target: Copresheaf
    components: list  # per object: tuple of target indices
    name: str = "?"

    def __call__(self, i: int, x: int) -> int:
        return self.components[i][x]

    def naturality_violations(self) -> list:
        site = self.source.site
        out = []
        for i, j, m in site.arrows():
            for x in range(self.source.size(i)):
                lhs = self.target.act(i, j, m, self.components[i][x])
                rhs = self.components[j][self.source.act(i, j, m, x)]
                if lhs != rhs:
                    out.append((i, j, m, x))
        return out

    def injective_at(self, i: int) -> bool:
        c = self.components[i]
        return len(set(c)) == len(c)

    def bijective_at(self, i: int) -> bool:
        return self.injective_at(i) and len(self.components[i]) == self.target.size(i)


@dataclass
class Pairing:
    """A map ``first × second -> target`` given componentwise by ``fn(i, x, y)``."""

    first: Copresheaf
    second: Copresheaf
    target: Copresheaf
    fn: Callable[[int, int, int], int]
    name: str = "k"

    def __call__(self, i, x, y):
        return self.fn(i, x, y)

    def swap(self) -> "Pairing":
        return Pairing(self.second, self.first, self.target, lambda i, y, x: self.fn(i, x, y), self.name + "ᵗ")

    def as_nat(self) -> NatTransform:
        prod = Product(self.first, self.second)
        comps = []
        for i in range(len(self.first.site)):
            comps.append(
                tuple(self.fn(i, *prod.split(i, x)) for x in range(prod.size(i)))
            )
        return NatTransform(prod, self.target, comps, self.name)

    @classmethod
    def from_nat(cls, k: NatTransform) -> "Pairing":
        prod = k.source
        if not isinstance(prod, Product):
            raise TypeError("pairing must start at a product copresheaf")
        return cls(prod.P, prod.Q, k.target, lambda i, x, y: k.components[i][prod.pair(i, x, y)], k.name)


# --- exponentials -----------------------------------------------------------------


class Exponential(Copresheaf):
    """``base ⊸ target`` with projections onto coslice components."""

    base: Copresheaf
    target: Copresheaf

    def proj(self, i: int, arrow: tuple, u: int) -> tuple:
        raise NotImplementedError

    def solve(self, i: int, required: dict) -> list:
        """Elements ``u`` with ``proj(i, a, u) == required[a]`` for every arrow ``a`` given."""
        return [
            u
            for u in range(self.size(i))
            if all(self.proj(i, a, u) == comp for a, comp in required.items())
        ]

    def components(self, i: int, u: int) -> tuple:
        return tuple(self.proj(i, a, u) for a in self.site.coslice(i))

    def identity_arrow(self, i):
        return (i, self.site.identity_index(i))


class EndExponential(Exponential):
    """(Q ⊸ R)(B) as the set of compatible families over the coslice of B.

    ``kind`` selects the families kept: ``"full"`` (all), ``"T"`` (each component a
    homomorphism) or ``"R"`` (a homomorphism restricting to the identity along
    the R-algebra structure ``Q.rho``).
    """

    def __init__(self, Q, R, kind="full", budget=DEFAULT_BUDGET, name=None):
        if kind not in ("full", "T", "R"):
            raise ValueError(kind)
        self.site = Q.site
        self.base, self.target = Q, R
        self.kind = kind
        self.budget = budget
        sub = {"full": "", "T": "_T", "R": "_R"}[kind]
        self.name = name or f"({Q.name} ⊸{sub} {R.name})"
        site = self.site
        self.arrows = [site.coslice(i) for i in range(len(site))]
        self.arrow_pos = [{a: p for p, a in enumerate(arr)} for arr in self.arrows]
        self.spent = 0
        self.families = [self._enumerate(i) for i in range(len(site))]
        self._lookup = [{f: x for x, f in enumerate(fs)} for fs in self.families]
        self._act_cache = {}

    # enumeration ------------------------------------------------------------------

    def _constraints(self, i):
        """Pairs (a, h, a2) with a2 = h∘a: R(h)∘φ_a = φ_a2∘Q(h)."""
        site = self.site
        out = []
        for p, (j, m) in enumerate(self.arrows[i]):
            for j2 in range(len(site)):
                for m2 in range(len(site.homs[(j, j2)])):
                    mc = site.compose(i, j, j2, m, m2)
                    out.append((p, (j, j2, m2), self.arrow_pos[i][(j2, mc)]))
        return out

    def _candidates(self, j, allowed):
        Q, R = self.base, self.target
        nq, nr = Q.size(j), R.size(j)
        if self.kind == "full":
            pools = [range(nr) if a is None else sorted(a) for a in allowed]
            return itertools.product(*pools) if nq else iter([()])
        qa, ra = Q.algebra(j), R.algebra(j)
        if qa is None or ra is None:
            raise ValueError(f"{Q.name} or {R.name} lacks algebra structure at object {j}")
        if self.kind == "R":
            rho = Q.rho(j)
            if rho is None:
                raise ValueError(f"{Q.name} lacks an R-algebra structure")
            allowed = list(allowed)
            for r, q in enumerate(rho):
                cur = allowed[q]
                allowed[q] = ({r} if cur is None else cur & {r})
        if not isinstance(qa, PartialAlgebra):
            qa = PartialAlgebra.of(qa)
        return search_homs(qa, ra, allowed)

    def _enumerate(self, i):
        site = self.site
        Q, R = self.base, self.target
        arrows = self.arrows[i]
        cons = self._constraints(i)
        as_src = [[] for _ in arrows]
        as_dst = [[] for _ in arrows]
        for p, h, p2 in cons:
            as_src[p].append((h, p2))
            as_dst[p2].append((p, h))
        preimage = {}

        def pre(h, value):
            key = (h, value)
            if key not in preimage:
                j, j2, m2 = h
                preimage[key] = {r for r in range(R.size(j)) if R.act(j, j2, m2, r) == value}
            return preimage[key]

        assigned = [None] * len(arrows)
        out = []

        def ok(p, comp):
            j = arrows[p][0]
            for (jj, j2, m2), p2 in as_src[p]:
                other = comp if p2 == p else assigned[p2]
                if other is None:
                    continue
                for q in range(Q.size(j)):
                    if R.act(jj, j2, m2, comp[q]) != other[Q.act(jj, j2, m2, q)]:
                        return False
            for p0, (j0, j2, m2) in as_dst[p]:
                src = assigned[p0]
                if src is None or p0 == p:
                    continue
                for q in range(Q.size(j0)):
                    if R.act(j0, j2, m2, src[q]) != comp[Q.act(j0, j2, m2, q)]:
                        return False
            return True

        def candidates(p):
            j = arrows[p][0]
            allowed = [None] * Q.size(j)
            for (jj, j2, m2), p2 in as_src[p]:
                other = assigned[p2]
                if other is None or p2 == p:
                    continue
                for q in range(Q.size(j)):
                    s = pre((jj, j2, m2), other[Q.act(jj, j2, m2, q)])
                    allowed[q] = s if allowed[q] is None else allowed[q] & s
            for p0, (j0, j2, m2) in as_dst[p]:
                src = assigned[p0]
                if src is None or p0 == p:
                    continue
                for q0 in range(Q.size(j0)):
                    q = Q.act(j0, j2, m2, q0)
                    s = {R.act(j0, j2, m2, src[q0])}
                    allowed[q] = s if allowed[q] is None else allowed[q] & s
            if any(a is not None and not a for a in allowed):
                return iter(())
            return iter(self._candidates(j, allowed))

        # depth-first search with an explicit stack; coslices can be long
        n = len(arrows)
        if n == 0:
            return [()]
        iters = [None] * n
        iters[0] = candidates(0)
        p = 0
        while p >= 0:
            if p == n:
                out.append(tuple(assigned))
                p -= 1
                continue
            placed = False
            for comp in iters[p]:
                self.spent += 1
                if self.spent > self.budget:
                    raise BudgetExceeded(
                        f"{self.name}: more than {self.budget} candidate components"
                    )
                comp = tuple(comp)
                if ok(p, comp):
                    assigned[p] = comp
                    placed = True
                    break
            if placed:
                p += 1
                if p < n:
                    iters[p] = candidates(p)
            else:
                assigned[p] = None
                p -= 1

        out.sort()
        return out

    # copresheaf interface --------------------------------------------------------------

    def size(self, i):
        return len(self.families[i])

    def label(self, i, x):
        return self.families[i][x]

    def index(self, i, label):
        return self._lookup[i][label]

    def act(self, i, j, m, x):
        key = (i, j, m)
        table = self._act_cache.get(key)
        if table is None:
            site = self.site
            pos = self.arrow_pos[i]
            sel = [pos[(k, site.compose(i, j, k, m, mk))] for (k, mk) in self.arrows[j]]
            table = tuple(self._lookup[j][tuple(fam[s] for s in sel)] for fam in self.families[i])
            self._act_cache[key] = table
        return table[x]

    def proj(self, i, arrow, u):
        return self.families[i][u][self.arrow_pos[i][arrow]]

    def solve(self, i, required):
        if len(required) == len(self.arrows[i]):
            fam = tuple(required[a] for a in self.arrows[i])
            x = self._lookup[i].get(fam)
            return [] if x is None else [x]
        return super().solve(i, required)

    def find(self, i, family) -> int | None:
        return self._lookup[i].get(tuple(family))

    def algebra(self, i):
        """Pointwise structure inherited from the target."""
        if not hasattr(self, "_pointwise"):
            self._pointwise = {}
        if i not in self._pointwise:
            self._pointwise[i] = pointwise_algebra(self, i)
        return self._pointwise[i]

    def rho(self, i):
        """r ↦ the family whose g-component is constant at R(g)(r)."""
        R = self.target
        out = []
        for r in range(R.size(i)):
            fam = tuple(
                tuple([R.act(i, j, m, r)] * self.base.size(j)) for (j, m) in self.arrows[i]
            )
            x = self._lookup[i].get(fam)
            if x is None:
                return None
            out.append(x)
        return tuple(out)


def pointwise_algebra(E: EndExponential, i: int) -> FiniteAlgebra | None:
    """Operations on families computed componentwise in the target; None if not closed."""
    import numpy as np

    R = E.target
    ras = {j: R.algebra(j) for (j, _) in E.arrows[i]}
    if any(a is None for a in ras.values()):
        return None
    theory = next(iter(ras.values())).theory if ras else E.site.theory
    fams = E.families[i]
    n = len(fams)
    tables = {}
    for sym, ar in theory.ops:
        tab = np.zeros((n,) * ar, dtype=np.int64)
        for args in itertools.product(range(n), repeat=ar):
            fam = tuple(
                tuple(
                    ras[j].apply(sym, [fams[a][p][q] for a in args])
                    for q in range(E.base.size(j))
                )
                for p, (j, _) in enumerate(E.arrows[i])
            )
            x = E.find(i, fam)
            if x is None:
                return None
            tab[args] = x
        tables[sym] = tab
    return FiniteAlgebra(theory, n, tables)


def exp_end(Q: Copresheaf, R: Copresheaf, site: SiteSample | None = None, budget=DEFAULT_BUDGET, kind="full") -> EndExponential:
    if site is not None and Q.site is not site:
        raise ValueError("Q lives on a different site")
    return EndExponential(Q, R, kind, budget)


class ReprExponential(Exponential):
    """y(C) ⊸ R as R(− ⊗ C), projections p_f ∘ π_g = R({g, f})."""

    def __init__(self, C: FPPresentation, site: SiteSample, R: Copresheaf | None = None, C_index: int | None = None):
        self.site = site
        self.C = C
        self.target = R or forgetful_R(site)
        self.base = yoneda(C, site)
        if C_index is None:
            C_index = site.find_object(C)
        self.cops = [site.coproduct_with(b, C, C_index) for b in range(len(site))]
        self.name = f"R(−⊗{C.label()})"
        self._act = {}
        self._proj = {}

    def size(self, i):
        return self.cops[i].obj.size

    def label(self, i, x):
        return self.cops[i].obj.label(x)

    def algebra(self, i):
        return self.cops[i].obj.model

    def rho(self, i):
        return self.cops[i].incl1

    def incl2(self, i) -> tuple:
        return self.cops[i].incl2

    def tensor_map(self, i, j, m) -> tuple:
        """h ⊗ C: B ⊗ C -> B' ⊗ C for h = homs[(i, j)][m]."""
        key = (i, j, m)
        if key not in self._act:
            h = self.site.homs[(i, j)][m]
            cj = self.cops[j]
            g = tuple(cj.incl1[h.map[b]] for b in range(self.site.objects[i].size))
            self._act[key] = self.cops[i].universal(g, cj.incl2, cj.obj.model)
        return self._act[key]

    def act(self, i, j, m, x):
        return self.tensor_map(i, j, m)[x]

    def pairing_map(self, i, arrow, f: tuple) -> tuple:
        """{g, f}: B ⊗ C -> X for g the arrow and f C-generator images in X."""
        j, m = arrow
        g = self.site.homs[(i, j)][m]
        return self.cops[i].universal(g.map, tuple(f), g.target)

    def proj(self, i, arrow, u):
        key = (i, arrow, u)
        if key not in self._proj:
            j, _ = arrow
            fs = self.base.labels[j]
            self._proj[key] = tuple(self.pairing_map(i, arrow, f)[u] for f in fs)
        return self._proj[key]


def exp_repr(C: FPPresentation, site: SiteSample, R: Copresheaf | None = None) -> ReprExponential:
    return ReprExponential(C, site, R)


class ConstExponential(Exponential):
    """γ*(S) ⊸ R with value Hom(S, R(B)); elements are functions in lexicographic order."""

    def __init__(self, S: Copresheaf, R: Copresheaf):
        self.site = S.site
        self.base, self.target = S, R
        self.name = f"({S.name} ⊸ {R.name})"
        self.n = S.size(0) if len(self.site) else 0

    def size(self, i):
        return self.target.size(i) ** self.n

    def decode(self, i, u) -> tuple:
        r = self.target.size(i)
        out = []
        for _ in range(self.n):
            u, d = divmod(u, r)
            out.append(d)
        return tuple(reversed(out))

    def encode(self, i, fn) -> int:
        r = self.target.size(i)
        u = 0
        for d in fn:
            u = u * r + d
        return u

    def label(self, i, x):
        return self.decode(i, x)

    def index(self, i, label):
        return self.encode(i, label)

    def act(self, i, j, m, x):
        return self.encode(j, tuple(self.target.act(i, j, m, v) for v in self.decode(i, x)))

    def proj(self, i, arrow, u):
        j, m = arrow
        return tuple(self.target.act(i, j, m, v) for v in self.decode(i, u))

    def solve(self, i, required):
        ident = self.identity_arrow(i)
        if ident not in required:
            return super().solve(i, required)
        u = self.encode(i, required[ident])
        if all(self.proj(i, a, u) == c for a, c in required.items()):
            return [u]
        return []


def exp_const(S: Copresheaf, R: Copresheaf) -> ConstExponential:
    return ConstExponential(S, R)


# --- comparison of exponential models ------------------------------------------------


def compare_exponentials(A: Exponential, B: Exponential) -> list:
    """Problems with the canonical comparison A -> B (u ↦ the element with u's projections).

    Checks bijectivity at every object and naturality along every arrow.
    """
    site = A.site
    problems = []
    maps = []
    for i in range(len(site)):
        arrows = site.coslice(i)
        comp = []
        for u in range(A.size(i)):
            req = {a: A.proj(i, a, u) for a in arrows}
            hits = B.solve(i, req)
            if len(hits) != 1:
                problems.append(f"object {site.objects[i].name}: element {u} matches {len(hits)} elements")
                comp.append(None)
            else:
                comp.append(hits[0])
        if A.size(i) != B.size(i):
            problems.append(f"object {site.objects[i].name}: sizes {A.size(i)} vs {B.size(i)}")
        elif None not in comp and len(set(comp)) != len(comp):
            problems.append(f"object {site.objects[i].name}: comparison not injective")
        maps.append(comp)
    if problems:
        return problems
    for i, j, m in site.arrows():
        for u in range(A.size(i)):
            if B.act(i, j, m, maps[i][u]) != maps[j][A.act(i, j, m, u)]:
                problems.append(f"comparison not natural at {(i, j, m, u)}")
                break
    return problems


# --- transposition and Dirac maps --------------------------------------------------------


def transpose(k: Pairing, E: Exponential, twisted: bool = False) -> NatTransform:
    """Exponential transpose of ``k``.

    With ``twisted=False`` the result is ``first -> (second ⊸ R)``; with
    ``twisted=True`` it is ``second -> (first ⊸ R)``. Each component is the unique
    element of ``E`` whose g-projection is ``y ↦ k_X(P(g)x, y)``; zero or several
    matches raise :class:`TransposeError`.
    """
    if twisted:
        k = k.swap()
    P, Q = k.first, k.second
    if E.base is not Q and E.base.sizes() != Q.sizes():
        raise TransposeError("exponential base does not match the pairing's second factor")
    site = P.site
    comps = []
    for i in range(len(site)):
        arrows = site.coslice(i)
        comp = []
        for x in range(P.size(i)):
            required = {}
            for (j, m) in arrows:
                px = P.act(i, j, m, x)
                required[(j, m)] = tuple(k(j, px, y) for y in range(Q.size(j)))
            hits = E.solve(i, required)
            if len(hits) != 1:
                raise TransposeError(
                    f"object {site.objects[i].name}: {len(hits)} elements satisfy the transpose equation"
                )
            comp.append(hits[0])
        comps.append(tuple(comp))
    return NatTransform(P, E, comps, f"{k.name}^")


def untranspose(t: NatTransform) -> Pairing:
    """Recover ``k(x, y) = π_id(t(x))(y)``."""
    E = t.target
    site = E.site

    def fn(i, x, y):
        return E.proj(i, (i, site.identity_index(i)), t.components[i][x])[y]

    return Pairing(t.source, E.base, E.target, fn, "k")


def evaluation(E: Exponential) -> Pairing:
    """ev: (Q ⊸ R) × Q -> R, ev(u, q) = π_id(u)(q)."""
    site = E.site
    return Pairing(E, E.base, E.target, lambda i, u, q: E.proj(i, (i, site.identity_index(i)), u)[q], "ev")


def dirac_family(E: Exponential, i: int, p: int) -> tuple:
    """Components of δ(p) ∈ ((P ⊸ R) ⊸ R)(i) over the coslice of ``i``."""
    site = E.site
    P = E.base
    out = []
    for (j, m) in site.coslice(i):
        pj = P.act(i, j, m, p)
        ident = (j, site.identity_index(j))
        out.append(tuple(E.proj(j, ident, u)[pj] for u in range(E.size(j))))
    return tuple(out)


def dirac_component(E: Exponential, i: int, p: int, arrow: tuple) -> Callable[[int], int]:
    """δ(p)'s component at ``arrow`` as a function on E(X), for exponentials too large to list."""
    site = E.site
    j, m = arrow
    pj = E.base.act(i, j, m, p)
    ident = (j, site.identity_index(j))
    return lambda u: E.proj(j, ident, u)[pj]


def dirac(E: Exponential, outer: EndExponential) -> NatTransform:
    """δ: P -> (P ⊸ R) ⊸ R landing in ``outer`` (a full or restricted end over E)."""
    if outer.base is not E:
        raise ValueError("outer exponential must be built over E")
    P = E.base
    comps = []
    for i in range(len(E.site)):
        comp = []
        for p in range(P.size(i)):
            x = outer.find(i, dirac_family(E, i, p))
            if x is None:
                raise TransposeError(
                    f"δ({p}) at {E.site.objects[i].name} is not in {outer.name}"
                )
            comp.append(x)
        comps.append(tuple(comp))
    return NatTransform(P, outer, comps, "δ")


def precompose(t: NatTransform, component: Callable[[int], int], i: int, arrow) -> tuple:
    """(t ⊸ R) applied to one component: the tuple ``y ↦ component(t_X(y))``."""
    j, _ = arrow
    return tuple(component(t.components[j][y]) for y in range(t.source.size(j)))
