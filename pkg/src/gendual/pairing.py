"""Complete pairings of finite algebras, with the Stone, object-classifier and KL instances."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    BOOLEAN_ALGEBRAS,
    INITIAL_THEORY,
    FiniteAlgebra,
    check_axioms,
    dual_numbers,
    finite_set,
    integers_mod,
    is_homomorphism,
    search_homs,
    PartialAlgebra,
)
from .algebra.coproduct import coproduct_from_presentation
from .algebra.model import product_algebra
from .algebra.theory import coproduct_presentation
from .duality import TheoremReport, _Context, bijection_result, check_thm3
from .presheaf import BudgetExceeded
from .site import SiteSample, realize_cached

STONE_MAX_N = 4


def plain_set(n: int) -> FiniteAlgebra:
    """A bare set of size ``n`` as an algebra for the empty signature."""
    return FiniteAlgebra(INITIAL_THEORY, n, {})


@dataclass
class CompletePairingSpec:
    """A pairing k: P × Q -> R of finite carriers.

    ``P`` and ``R1`` are algebras for one theory, ``Q`` and ``R2`` for another;
    ``R1`` and ``R2`` share the carrier of R. ``k[p][q]`` is an element of R.
    """

    P: FiniteAlgebra
    Q: FiniteAlgebra
    R1: FiniteAlgebra
    R2: FiniteAlgebra
    k: tuple
    name: str = "pairing"

    def __post_init__(self):
        if self.R1.size != self.R2.size:
            raise ValueError("the two structures on R must share a carrier")
        self.k = tuple(tuple(row) for row in self.k)
        if len(self.k) != self.P.size or any(len(row) != self.Q.size for row in self.k):
            raise ValueError("pairing table has the wrong shape")


@dataclass
class CompleteReport:
    name: str
    sizes: dict
    bimorphism: bool
    commuting: bool
    i_iso: bool
    j_iso: bool
    dirac_P: bool
    dirac_Q: bool
    witnesses: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all((self.bimorphism, self.commuting, self.i_iso, self.j_iso, self.dirac_P, self.dirac_Q))

    def to_json(self, timing: bool = False) -> dict:
        d = {
            "theorem": "complete_pairing",
            "instance": self.name,
            "mode": "exact",
            "pass": self.passed,
            "sizes": dict(self.sizes),
            "bimorphism": self.bimorphism,
            "commuting": self.commuting,
            "i_iso": self.i_iso,
            "j_iso": self.j_iso,
            "dirac_P_iso": self.dirac_P,
            "dirac_Q_iso": self.dirac_Q,
            "witnesses": self.witnesses,
        }
        if timing:
            d["seconds"] = round(self.seconds, 3)
        return d

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        s = " ".join(f"{k}={v}" for k, v in self.sizes.items())
        return f"{'complete_pairing':<18} {status} [exact] {self.name} {s}"


def all_homs(source: FiniteAlgebra, target: FiniteAlgebra) -> list:
    """All homomorphisms as image tuples, sorted; every function for the empty signature."""
    return sorted(search_homs(PartialAlgebra.of(source), target))


def pointwise(homs: list, algebra: FiniteAlgebra) -> FiniteAlgebra | None:
    """The set of maps ``homs`` with operations computed pointwise in ``algebra``; None if not closed."""
    index = {h: n for n, h in enumerate(homs)}
    width = len(homs[0]) if homs else 0
    tables = {}
    n = len(homs)
    for sym, ar in algebra.theory.ops:
        tab = np.zeros((n,) * ar, dtype=np.int64)
        for args in itertools.product(range(n), repeat=ar):
            h = tuple(algebra.apply(sym, [homs[a][x] for a in args]) for x in range(width))
            if h not in index:
                return None
            tab[args] = index[h]
        tables[sym] = tab
    return FiniteAlgebra(algebra.theory, n, tables)


def structures_commute(A: FiniteAlgebra, B: FiniteAlgebra) -> bool:
    """Each operation of ``A``, taken componentwise, is a homomorphism for ``B`` (same carrier)."""
    for sym, ar in A.theory.ops:
        power, elements = product_algebra([B] * ar) if ar else (None, [()])
        if ar == 0:
            # a constant is a homomorphism from the one-element power
            one = FiniteAlgebra(B.theory, 1, {s: np.zeros((1,) * a, dtype=np.int64) for s, a in B.theory.ops})
            if not is_homomorphism((A.apply(sym, ()),), one, B):
                return False
            continue
        mapping = tuple(A.apply(sym, list(e)) for e in elements)
        if not is_homomorphism(mapping, power, B):
            return False
    return True


def _dirac(X: FiniteAlgebra, first_homs: list, R_second: FiniteAlgebra):
    """δ: X -> Hom(Hom(X, R_first) with pointwise second structure, R_second)."""
    dual = pointwise(first_homs, R_second)
    if dual is None:
        return None, "dual not closed under the pointwise structure"
    double = all_homs(dual, R_second)
    index = {h: n for n, h in enumerate(double)}
    comp = [index.get(tuple(h[x] for h in first_homs)) for x in range(X.size)]
    return bijection_result("δ", comp, len(double)), None


def check_complete(spec: CompletePairingSpec) -> CompleteReport:
    t0 = time.perf_counter()
    P, Q, R1, R2, k = spec.P, spec.Q, spec.R1, spec.R2, spec.k
    bimorphism = all(
        is_homomorphism(tuple(k[p][q] for p in range(P.size)), P, R1) for q in range(Q.size)
    ) and all(is_homomorphism(k[p], Q, R2) for p in range(P.size))
    commuting = structures_commute(R1, R2) and structures_commute(R2, R1)
    homs_Q = all_homs(Q, R2)
    homs_P = all_homs(P, R1)
    iq = {h: n for n, h in enumerate(homs_Q)}
    ip = {h: n for n, h in enumerate(homs_P)}
    i_res = bijection_result("i", [iq.get(k[p]) for p in range(P.size)], len(homs_Q))
    j_res = bijection_result(
        "j", [ip.get(tuple(k[p][q] for p in range(P.size))) for q in range(Q.size)], len(homs_P)
    )
    witnesses = {"i": i_res.witness, "j": j_res.witness}
    dP, why_P = _dirac(P, homs_P, R2)
    dQ, why_Q = _dirac(Q, homs_Q, R1)
    witnesses["dirac_P"] = dP.witness if dP else why_P
    witnesses["dirac_Q"] = dQ.witness if dQ else why_Q
    return CompleteReport(
        spec.name,
        {"P": P.size, "Q": Q.size, "R": R1.size, "Hom(Q,R)": len(homs_Q), "Hom(P,R)": len(homs_P)},
        bimorphism,
        commuting,
        i_res.ok,
        j_res.ok,
        bool(dP and dP.ok),
        bool(dQ and dQ.ok),
        witnesses,
        time.perf_counter() - t0,
    )


# --- Stone duality for finite sets ---------------------------------------------------------


def powerset_algebra(n: int) -> FiniteAlgebra:
    """Subsets of an n-element set as bitmasks 0 .. 2^n - 1."""
    size = 1 << n
    full = size - 1
    x = np.arange(size, dtype=np.int64)
    tables = {
        "zero": np.int64(0),
        "one": np.int64(full),
        "and": x[:, None] & x[None, :],
        "or": x[:, None] | x[None, :],
        "not": full ^ x,
    }
    return FiniteAlgebra(BOOLEAN_ALGEBRAS, size, tables)


def two() -> FiniteAlgebra:
    return powerset_algebra(1)


def stone_instance(n: int, max_n: int = STONE_MAX_N) -> CompletePairingSpec:
    """P = subsets of {0..n-1}, Q = the set itself, R = 2, k(S, c) = [c ∈ S]."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > max_n:
        raise BudgetExceeded(f"Stone instance n={n} exceeds the limit n <= {max_n}")
    P = powerset_algebra(n)
    k = tuple(tuple((s >> c) & 1 for c in range(n)) for s in range(P.size))
    return CompletePairingSpec(P, plain_set(n), two(), plain_set(2), k, f"stone(n={n})")


def brute_force_boolean_homs(A: FiniteAlgebra) -> np.ndarray:
    """Filter every function A -> 2 for preservation of all Boolean operations.

    Returns the surviving functions as rows of a 0/1 array, in lexicographic order.
    """
    n = A.size
    if n > 16:
        raise BudgetExceeded("brute force over more than 2^16 functions")
    codes = np.arange(1 << n, dtype=np.int64)
    # column x of ``funcs`` is the value at element x; element 0 is most significant
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    funcs = (codes[:, None] >> shifts[None, :]) & 1
    keep = np.ones(len(codes), dtype=bool)
    keep &= funcs[:, int(A.tables["zero"])] == 0
    keep &= funcs[:, int(A.tables["one"])] == 1
    neg = A.tables["not"]
    keep &= np.all(funcs[:, neg] == 1 - funcs, axis=1)
    for sym, fn in (("and", np.minimum), ("or", np.maximum)):
        tab = A.tables[sym]
        lhs = funcs[:, tab.reshape(-1)]
        rhs = fn(funcs[:, :, None], funcs[:, None, :]).reshape(len(codes), -1)
        keep &= np.all(lhs == rhs, axis=1)
    return funcs[keep]


# --- object classifier ---------------------------------------------------------------------


def object_classifier_instance(S: SiteSample) -> TheoremReport:
    """The pairing with C the one-point set; the added point must map to the identity family."""
    C = finite_set(1)
    rep = check_thm3(C, S)
    rep.theorem = "object_classifier"
    ctx = _Context(C, S)
    E, y = ctx.repr, ctx.y
    bad = []
    for b in range(len(S)):
        added = ctx.jbar(b)[E.incl2(b)[0]]
        for arrow in S.coslice(b):
            x = arrow[0]
            points = tuple(f[0] for f in y.labels[x])
            if points != tuple(range(S.objects[x].size)) or E.proj(b, arrow, added) != points:
                bad.append((S.objects[b].name, arrow))
    rep.check("added point maps to the identity family", not bad, f"fails at {bad[:3]}" if bad else "")
    return rep


# --- Kock-Lawvere instance -------------------------------------------------------------------


def kl_instance(S: SiteSample, moduli=(1, 2, 3, 4)) -> TheoremReport:
    """(a, b) ↦ a + b·e is a bijection B × B -> B ⊗ Z[e] and equals jbar on sample objects."""
    t0 = time.perf_counter()
    D = dual_numbers()
    rep = TheoremReport("kl", "approximate" if S.approximate else "exact", D.label())
    ctx = _Context(D, S)
    thm3 = None
    for m in moduli:
        B = integers_mod(m)
        b = S.find_object(B)
        if b is not None:
            cop = ctx.repr.cops[b]
        else:
            left = realize_cached(B, S.bound)
            cop = coproduct_from_presentation(left, D, realize_cached(coproduct_presentation(B, D), S.bound))
        model = cop.obj.model
        e = cop.incl2[0]
        kl = {}
        for a, c in itertools.product(range(m), repeat=2):
            kl[(a, c)] = model.apply("add", [cop.incl1[a], model.apply("mul", [cop.incl1[c], e])])
        comp = [kl[p] for p in sorted(kl)]
        res = bijection_result(f"Z/{m}", comp, model.size)
        rep.components.append(res)
        rep.check(f"|Z/{m} ⊗ Z[e]| = {m * m}", model.size == m * m, f"got {model.size}")
        if b is None:
            rep.notes.append(f"Z/{m} is not a sample object; only the bijection was checked")
            continue
        jb = ctx.jbar(b)
        bad = []
        for (a, c), u in kl.items():
            for arrow in S.coslice(b):
                x, mm = arrow
                g = S.homs[(b, x)][mm].map
                xm = S.objects[x].model
                want = tuple(
                    xm.apply("add", [g[a], xm.apply("mul", [g[c], f[0]])]) for f in ctx.y.labels[x]
                )
                if ctx.repr.proj(b, arrow, jb[u]) != want:
                    bad.append((a, c, arrow))
        if thm3 is None:
            thm3 = check_thm3(D, S)
        agree = thm3.components[b].ok and thm3.components[b].rhs_size == model.size
        rep.check(f"a + b·e is jbar at Z/{m}", not bad and agree, f"fails at {bad[:3]}" if bad else "")
    rep.seconds = time.perf_counter() - t0
    return rep


def check_boolean_algebra(A: FiniteAlgebra) -> bool:
    return check_axioms(A) is None
