"""Finite full subcategories of the category of finitely presented algebras."""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import (
    DEFAULT_BOUND,
    FPPresentation,
    Homomorphism,
    SiteObject,
    coproduct_presentation,
    enumerate_homs,
    realize,
)
from .algebra.coproduct import Coproduct, coproduct_from_presentation, homs_model_to_model
from .algebra.theory import require_same_theory


class Mode(str, enum.Enum):
    CLOSED = "closed"
    TRUNCATED = "truncated"


class SiteError(RuntimeError):
    pass


class CoproductEscapes(SiteError):
    def __init__(self, pair, names):
        self.pair = pair
        super().__init__(
            f"coproduct {names[0]} ⊗ {names[1]} is not isomorphic to any sample object"
        )


_REALIZED: dict = {}


def realize_cached(p: FPPresentation, bound: int = DEFAULT_BOUND, name: str | None = None) -> SiteObject:
    """``realize`` memoized on (presentation, bound); realizations are deterministic."""
    key = (p, bound)
    obj = _REALIZED.get(key)
    if obj is None:
        obj = realize(p, bound)
        _REALIZED[key] = obj
    if name and obj.name != name:
        obj = dataclasses.replace(obj, name=name)
    return obj


@dataclass(frozen=True)
class CoproductWitness:
    index: int  # sample object carrying the coproduct
    incl1: Homomorphism
    incl2: Homomorphism


@dataclass(frozen=True, eq=False)
class SiteSample:
    theory: object
    objects: tuple
    homs: dict  # (i, j) -> tuple of Homomorphism
    mode: Mode
    coproducts: dict  # (i, j) -> CoproductWitness
    bound: int = DEFAULT_BOUND
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self,
            "_index",
            {pair: {h.map: m for m, h in enumerate(hs)} for pair, hs in self.homs.items()},
        )

    @property
    def names(self) -> list:
        return [o.name for o in self.objects]

    @property
    def approximate(self) -> bool:
        return self.mode is Mode.TRUNCATED

    def __len__(self):
        return len(self.objects)

    def object_index(self, name: str) -> int:
        for i, o in enumerate(self.objects):
            if o.name == name:
                return i
        raise KeyError(name)

    def hom_index(self, i: int, j: int, mapping: tuple) -> int:
        return self._index[(i, j)][tuple(mapping)]

    def identity_index(self, i: int) -> int:
        return self.hom_index(i, i, tuple(range(self.objects[i].size)))

    def compose(self, i: int, j: int, k: int, first: int, second: int) -> int:
        """Index in homs[(i, k)] of ``second ∘ first`` for first: i -> j, second: j -> k."""
        f = self.homs[(i, j)][first].map
        g = self.homs[(j, k)][second].map
        return self.hom_index(i, k, tuple(g[x] for x in f))

    def coslice(self, i: int) -> list:
        """Arrows out of object ``i`` as ``(target, index)``; the identity comes first."""
        ident = (i, self.identity_index(i))
        rest = [(j, m) for j in range(len(self.objects)) for m in range(len(self.homs[(i, j)]))]
        rest.remove(ident)
        return [ident] + rest

    def arrows(self):
        for (i, j), hs in sorted(self.homs.items()):
            for m in range(len(hs)):
                yield i, j, m

    def coproduct_with(self, b: int, right: FPPresentation, right_index: int | None = None) -> Coproduct:
        """B ⊗ C for B = object ``b``: the sample object when recorded, else realized."""
        cache = self._cop_cache
        key = (b, right, right_index)
        if key in cache:
            return cache[key]
        left = self.objects[b]
        if right_index is not None and (b, right_index) in self.coproducts:
            w = self.coproducts[(b, right_index)]
            c_obj = self.objects[right_index]
            cop = Coproduct(
                left,
                right,
                self.objects[w.index],
                w.incl1.map,
                tuple(w.incl2.map[g] for g in c_obj.generators),
                w.index,
            )
        else:
            raw = realize_cached(coproduct_presentation(left.presentation, right), self.bound)
            cop = coproduct_from_presentation(left, right, raw)
        cache[key] = cop
        return cop

    @property
    def _cop_cache(self) -> dict:
        c = self.__dict__.get("_cops")
        if c is None:
            c = {}
            object.__setattr__(self, "_cops", c)
        return c

    def find_object(self, presentation: FPPresentation) -> int | None:
        for i, o in enumerate(self.objects):
            if o.presentation == presentation:
                return i
        return None


def find_isomorphism(a: SiteObject, b: SiteObject) -> Homomorphism | None:
    if a.size != b.size:
        return None
    for h in homs_model_to_model(a, b):
        if h.is_bijective():
            return h
    return None


def build_site(
    presentations: Sequence[FPPresentation],
    bound: int = DEFAULT_BOUND,
    mode: Mode | str = Mode.CLOSED,
    names: Sequence[str] | None = None,
) -> SiteSample:
    mode = Mode(mode)
    if not presentations:
        raise SiteError("a site needs at least one object")
    require_same_theory(*(p.theory for p in presentations))
    names = list(names) if names is not None else [p.name or f"obj{i}" for i, p in enumerate(presentations)]
    objects = tuple(realize_cached(p, bound, n) for p, n in zip(presentations, names))
    homs = {}
    for i, a in enumerate(objects):
        for j, b in enumerate(objects):
            homs[(i, j)] = tuple(homs_model_to_model(a, b))
    coproducts = {}
    for i, a in enumerate(objects):
        for j, b in enumerate(objects):
            raw = realize_cached(coproduct_presentation(a.presentation, b.presentation), bound)
            cop = coproduct_from_presentation(a, b.presentation, raw)
            witness = None
            for k, target in enumerate(objects):
                iso = find_isomorphism(raw, target)
                if iso is None:
                    continue
                incl1 = tuple(iso.map[x] for x in cop.incl1)
                gl = a.presentation.generators
                incl2 = b.element(tuple(iso.map[x] for x in raw.generators[gl:]), target.model)
                witness = CoproductWitness(
                    k,
                    Homomorphism(a.model, target.model, incl1),
                    Homomorphism(b.model, target.model, incl2),
                )
                break
            if witness is not None:
                coproducts[(i, j)] = witness
            elif mode is Mode.CLOSED:
                raise CoproductEscapes((i, j), (names[i], names[j]))
    return SiteSample(objects[0].model.theory, objects, homs, mode, coproducts, bound)


def _codes(maps: np.ndarray, base: int) -> np.ndarray:
    weights = base ** np.arange(maps.shape[-1], dtype=np.int64)
    return maps @ weights


def _composites_closed(site: SiteSample, i: int, j: int, k: int) -> bool:
    """Every g∘f with f: i -> j, g: j -> k is listed in homs[(i, k)] (vectorized)."""
    fs, gs = site.homs[(i, j)], site.homs[(j, k)]
    if not fs or not gs:
        return True
    ni, nk = site.objects[i].size, site.objects[k].size
    if ni == 0:
        return len(site.homs[(i, k)]) == 1
    F = np.array([f.map for f in fs], dtype=np.int64).reshape(len(fs), ni)
    G = np.array([g.map for g in gs], dtype=np.int64)
    stored = _codes(np.array([h.map for h in site.homs[(i, k)]], dtype=np.int64).reshape(-1, ni), nk)
    weights = nk ** np.arange(ni, dtype=np.int64)
    codes = np.zeros((len(gs), len(fs)), dtype=np.int64)
    for x in range(ni):
        codes += G[:, F[:, x]] * weights[x]
    return bool(np.isin(codes, stored).all())


@dataclass
class SiteReport:
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def check_site(site: SiteSample) -> SiteReport:
    """Identities, composition closure, hom-set fullness and coproduct laws."""
    v = []
    objs = site.objects
    n = len(objs)
    for i in range(n):
        ident = tuple(range(objs[i].size))
        if ident not in site._index[(i, i)]:
            v.append(f"missing identity on {objs[i].name}")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if not _composites_closed(site, i, j, k):
                    v.append(f"composite {objs[i].name} -> {objs[j].name} -> {objs[k].name} missing")
    for i in range(n):
        for j in range(n):
            fresh = enumerate_homs(objs[i].model, objs[j].model)
            stored = sorted(h.map for h in site.homs[(i, j)])
            if fresh != stored:
                v.append(f"hom-set [{objs[i].name}, {objs[j].name}] differs from brute-force enumeration")
            for h in site.homs[(i, j)]:
                if not h.is_valid():
                    v.append(f"non-homomorphism listed in [{objs[i].name}, {objs[j].name}]")
    if site.mode is Mode.CLOSED:
        for i in range(n):
            for j in range(n):
                if (i, j) not in site.coproducts:
                    v.append(f"closed site lacks coproduct {objs[i].name} ⊗ {objs[j].name}")
    for (i, j), w in site.coproducts.items():
        k = w.index
        for x in range(n):
            # h ↦ (h∘incl1, h∘incl2) must be a bijection [k, x] -> [i, x] × [j, x]
            pairs = {
                (tuple(h.map[a] for a in w.incl1.map), tuple(h.map[a] for a in w.incl2.map))
                for h in site.homs[(k, x)]
            }
            expected = len(site.homs[(i, x)]) * len(site.homs[(j, x)])
            if len(pairs) != len(site.homs[(k, x)]) or len(pairs) != expected:
                v.append(
                    f"coproduct {objs[i].name} ⊗ {objs[j].name}: cocones into {objs[x].name} "
                    f"do not correspond to mediating maps one-to-one"
                )
    return SiteReport(v)
