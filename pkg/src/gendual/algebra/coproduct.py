from __future__ import annotations

from dataclasses import dataclass, field

from .model import FiniteAlgebra, Homomorphism, eval_term, homs_fp_to_model, is_homomorphism
from .realize import SiteObject
from .theory import FPPresentation, require_same_theory


def homs_model_to_model(source: SiteObject, target: SiteObject) -> list:
    """All homomorphisms between two site objects, ordered by their image tuple."""
    require_same_theory(source.model.theory, target.model.theory)
    maps = set()
    for images in homs_fp_to_model(source.presentation, target.model):
        maps.add(source.element(images, target.model))
    return [Homomorphism(source.model, target.model, m) for m in sorted(maps)]


class _Extender:
    """Replays a fixed derivation of every element from a seed list."""

    def __init__(self, model: FiniteAlgebra, seeds: list):
        self.model = model
        self.seeds = seeds
        known = set(seeds)
        steps = []
        changed = True
        while changed:
            changed = False
            for sym, args, res in model.entries():
                if res not in known and all(a in known for a in args):
                    known.add(res)
                    steps.append((sym, args, res))
                    changed = True
        if len(known) != model.size:
            raise ValueError("seeds do not generate the coproduct object")
        self.steps = steps

    def extend(self, seed_values: list, target: FiniteAlgebra):
        value = {}
        for s, v in zip(self.seeds, seed_values):
            if value.setdefault(s, v) != v:
                return None
        for sym, args, res in self.steps:
            value[res] = target.apply(sym, [value[a] for a in args])
        mapping = tuple(value[x] for x in range(self.model.size))
        if not is_homomorphism(mapping, self.model, target):
            return None
        return mapping


@dataclass(eq=False)
class Coproduct:
    """A realized binary coproduct B ⊗ C with its injections.

    ``incl1`` is the carrier map B -> obj; ``incl2`` lists the images of C's
    generators in obj (C itself may have no finite realization).
    """

    left: SiteObject
    right: FPPresentation
    obj: SiteObject
    incl1: tuple
    incl2: tuple
    sample_index: int | None = None
    _extender: _Extender = field(default=None, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    def universal(self, g: tuple, f: tuple, target: FiniteAlgebra) -> tuple:
        """Carrier map of {g, f}: B ⊗ C -> X from g: B -> X and C-generator images f."""
        key = (g, f, id(target))
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if self._extender is None:
            self._extender = _Extender(self.obj.model, list(self.incl1) + list(self.incl2))
        mapping = self._extender.extend(list(g) + list(f), target)
        if mapping is None:
            raise ValueError("the pair (g, f) does not induce a homomorphism out of the coproduct")
        self._cache[key] = mapping
        return mapping


def coproduct_from_presentation(left: SiteObject, right: FPPresentation, obj: SiteObject) -> Coproduct:
    """Injection data for ``obj`` realized from ``coproduct_presentation(left, right)``."""
    gl = left.presentation.generators
    incl1 = left.element(obj.generators[:gl], obj.model)
    return Coproduct(left, right, obj, incl1, tuple(obj.generators[gl:]))


def universal_map(g: Homomorphism, f, cop: Coproduct, right: SiteObject | None = None) -> Homomorphism:
    """The homomorphism {g, f}: B ⊗ C -> X.

    ``f`` is a tuple of images of C's generators, or a homomorphism out of the
    realized object ``right`` presenting C.
    """
    if isinstance(f, Homomorphism):
        if f.target is not g.target:
            raise ValueError("g and f must share a target")
        if right is None or f.source is not right.model:
            raise ValueError("a homomorphism f needs the realized object it starts from")
        f = generator_images(right, f)
    if g.source is not cop.left.model:
        raise ValueError("g does not start at the left factor of the coproduct")
    mapping = cop.universal(g.map, tuple(f), g.target)
    return Homomorphism(cop.obj.model, g.target, mapping)


def generator_images(obj: SiteObject, hom: Homomorphism) -> tuple:
    return tuple(hom.map[g] for g in obj.generators)


def check_images(presentation: FPPresentation, images: tuple, model: FiniteAlgebra) -> bool:
    return all(eval_term(l, images, model) == eval_term(r, images, model) for l, r in presentation.relations)
