"""Run configuration: a single JSON file naming a theory, presentations, a site and suites."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import (
    CATALOG,
    FPPresentation,
    TheoryPresentation,
    dual_numbers,
    finite_set,
    free_presentation,
    initial_presentation,
    integers_mod,
    parse_term,
    polynomial_ring,
    two_element_boolean,
)
from .algebra.terms import TermSyntaxError
from .algebra.theory import TheoryMismatch
from .site import Mode

CONFIG_SCHEMA = "gendual.config/1"
THEOREM_SUITES = ("prop1", "prop2", "thm3", "thm4", "thm5", "thm6")
SUITES = THEOREM_SUITES + ("stone", "object_classifier", "kl", "exp_oracle")

_BUILDERS = {
    "integers_mod": integers_mod,
    "dual_numbers": dual_numbers,
    "polynomial_ring": polynomial_ring,
    "two_element_boolean": two_element_boolean,
    "finite_set": finite_set,
}


class ConfigError(ValueError):
    pass


@dataclass
class SuiteSpec:
    suite: str
    params: dict = field(default_factory=dict)


@dataclass
class RunConfig:
    path: str
    theory: TheoryPresentation | None
    presentations: dict
    expected_sizes: dict
    site_objects: list
    mode: Mode
    bound: int
    budget: int
    suites: list
    output: str | None


def _require(d: dict, allowed: set, where: str) -> None:
    if not isinstance(d, dict):
        raise ConfigError(f"{where}: expected an object")
    extra = sorted(set(d) - allowed)
    if extra:
        raise ConfigError(f"{where}: unknown key(s) {extra}")


def _int(v, where: str, minimum: int = 0) -> int:
    if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        raise ConfigError(f"{where}: expected an integer >= {minimum}")
    return v


def load_theory(spec, base: Path) -> TheoryPresentation:
    """A catalog name, a path to a JSON theory file, or an inline theory object."""
    if isinstance(spec, str):
        if spec in CATALOG:
            return CATALOG[spec]
        path = base / spec
        if not path.exists():
            raise ConfigError(f"theory {spec!r} is neither a catalog name nor a file")
        try:
            spec = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"theory file {spec!r}: {exc}") from None
    _require(spec, {"name", "ops", "axioms"}, "theory")
    try:
        ops = tuple((str(s), int(a)) for s, a in spec["ops"])
        arities = dict(ops)
        axioms = tuple((parse_term(l, arities), parse_term(r, arities)) for l, r in spec.get("axioms", []))
        return TheoryPresentation(spec.get("name", "custom"), ops, axioms)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"theory: {exc}") from None


def build_presentation(name: str, spec: dict, theory: TheoryPresentation) -> FPPresentation:
    _require(spec, {"catalog", "args", "generators", "relations", "expect_size"}, f"presentation {name!r}")
    try:
        if "catalog" in spec:
            if "generators" in spec or "relations" in spec:
                raise ConfigError(f"presentation {name!r}: give either a catalog entry or generators/relations")
            kind = spec["catalog"]
            args = spec.get("args", [])
            if kind == "initial":
                p = initial_presentation(theory)
            elif kind == "free":
                p = free_presentation(theory, *args)
            elif kind in _BUILDERS:
                p = _BUILDERS[kind](*args)
            else:
                raise ConfigError(f"presentation {name!r}: unknown catalog entry {kind!r}")
        else:
            n = _int(spec.get("generators", 0), f"presentation {name!r} generators")
            arities = theory.arities
            rels = tuple((parse_term(l, arities), parse_term(r, arities)) for l, r in spec.get("relations", []))
            p = FPPresentation(theory, n, rels)
    except ConfigError:
        raise
    except (TermSyntaxError, TypeError, ValueError) as exc:
        raise ConfigError(f"presentation {name!r}: {exc}") from None
    if p.theory != theory:
        raise ConfigError(f"presentation {name!r} is over {p.theory.name}, not {theory.name}")
    return FPPresentation(p.theory, p.generators, p.relations, name)


def _suite(entry, index: int, presentations: dict) -> SuiteSpec:
    where = f"suites[{index}]"
    if not isinstance(entry, dict) or "suite" not in entry:
        raise ConfigError(f"{where}: expected an object with a 'suite' key")
    kind = entry["suite"]
    if kind not in SUITES:
        raise ConfigError(f"{where}: unknown suite {kind!r}")
    params = {k: v for k, v in entry.items() if k != "suite"}
    if kind in THEOREM_SUITES:
        _require(params, {"C", "budget", "carrier_bound"}, where)
        if params.get("C") not in presentations:
            raise ConfigError(f"{where}: C must name a defined presentation")
    elif kind == "stone":
        _require(params, {"n"}, where)
        ns = params.get("n", [0, 1, 2, 3, 4])
        params["n"] = [_int(n, f"{where} n") for n in (ns if isinstance(ns, list) else [ns])]
    elif kind == "kl":
        _require(params, {"moduli"}, where)
        params["moduli"] = [_int(m, f"{where} moduli", 1) for m in params.get("moduli", [1, 2, 3, 4])]
    elif kind == "object_classifier":
        _require(params, set(), where)
    elif kind == "exp_oracle":
        _require(params, {"C", "constant", "budget"}, where)
        if ("C" in params) == ("constant" in params):
            raise ConfigError(f"{where}: give exactly one of 'C' or 'constant'")
        if "C" in params and params["C"] not in presentations:
            raise ConfigError(f"{where}: C must name a defined presentation")
        if "constant" in params:
            _int(params["constant"], f"{where} constant")
    if "budget" in params:
        _int(params["budget"], f"{where} budget", 1)
    if "carrier_bound" in params:
        _int(params["carrier_bound"], f"{where} carrier_bound", 1)
    return SuiteSpec(kind, params)


def parse_config(data, path: str = "<config>", base: Path | None = None) -> RunConfig:
    base = base or Path(".")
    _require(data, {"schema", "theory", "presentations", "site", "suites", "budget", "output"}, "config")
    if data.get("schema") != CONFIG_SCHEMA:
        raise ConfigError(f"config: 'schema' must be {CONFIG_SCHEMA!r}")
    theory = load_theory(data["theory"], base) if "theory" in data else None
    presentations, expected = {}, {}
    raw = data.get("presentations", {})
    if raw and theory is None:
        raise ConfigError("config: presentations need a theory")
    _require(raw, set(raw), "presentations")
    for name, spec in raw.items():
        presentations[name] = build_presentation(name, spec, theory)
        if "expect_size" in spec:
            expected[name] = _int(spec["expect_size"], f"presentation {name!r} expect_size")
    site = data.get("site")
    objects, mode, bound = [], Mode.CLOSED, None
    if site is not None:
        _require(site, {"objects", "mode", "bound"}, "site")
        objects = site.get("objects", [])
        if not isinstance(objects, list) or not objects:
            raise ConfigError("site: 'objects' must be a nonempty list")
        for o in objects:
            if o not in presentations:
                raise ConfigError(f"site: object {o!r} is not a defined presentation")
        try:
            mode = Mode(site.get("mode", "closed"))
        except ValueError:
            raise ConfigError("site: mode must be 'closed' or 'truncated'") from None
        if "bound" in site:
            bound = _int(site["bound"], "site bound", 1)
    from .algebra import DEFAULT_BOUND
    from .presheaf import DEFAULT_BUDGET

    budget = _int(data.get("budget", DEFAULT_BUDGET), "budget", 1)
    if not isinstance(data.get("suites", []), list):
        raise ConfigError("config: 'suites' must be a list")
    suites = [_suite(e, n, presentations) for n, e in enumerate(data.get("suites", []))]
    needs_site = [s.suite for s in suites if s.suite not in ("stone",)]
    if needs_site and site is None:
        raise ConfigError(f"suites {needs_site} need a site")
    output = data.get("output")
    if output is not None and not isinstance(output, str):
        raise ConfigError("config: 'output' must be a string")
    return RunConfig(
        path, theory, presentations, expected, list(objects), mode, bound or DEFAULT_BOUND, budget, suites, output
    )


def load_config(path: str) -> RunConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    try:
        return parse_config(data, str(path), p.parent)
    except TheoryMismatch as exc:
        raise ConfigError(str(exc)) from None
