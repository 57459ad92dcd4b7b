"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines, or
``python3 tests/test_acceptance.py`` for the lines alone.
"""

from __future__ import annotations

import itertools
import time
from pathlib import Path

import numpy as np

from gendual.algebra import (
    brute_force_homs,
    dual_numbers,
    finite_set,
    integers_mod,
    polynomial_ring,
    realize,
    two_element_boolean,
)
from gendual.cli import exp_oracle, main
from gendual.duality import check_prop1, check_prop2, check_thm3, check_thm4, check_thm5, check_thm6
from gendual.pairing import (
    brute_force_boolean_homs,
    check_complete,
    kl_instance,
    object_classifier_instance,
    powerset_algebra,
    stone_instance,
)
from gendual.site import build_site

CONFIGS = Path(__file__).resolve().parents[1] / "src" / "gendual" / "configs"
RING_MODULI = (1, 2, 3, 4, 6)
DIVISORS = (1, 2, 3, 5, 6, 10, 15, 30)


def verdict(n: int, title: str, ok: bool, seconds: float | None = None, limit: float | None = None) -> None:
    timing = ""
    if seconds is not None:
        ok = ok and (limit is None or seconds < limit)
        timing = f" ({seconds:.2f}s" + (f", limit {limit:g}s)" if limit is not None else ")")
    print(f"{'PASS' if ok else 'FAIL'} criterion {n}: {title}{timing}")
    assert ok


def rings_site():
    return build_site([integers_mod(m) for m in RING_MODULI], mode="truncated", names=[f"Z/{m}" for m in RING_MODULI])


def closed_sites():
    divisor = build_site([integers_mod(m) for m in DIVISORS], names=[f"Z/{m}" for m in DIVISORS])
    boolean = build_site([two_element_boolean()], names=["2"])
    return [(divisor, integers_mod(6)), (boolean, two_element_boolean())]


def square_zero_count(obj) -> int:
    """|[Z[e], B]| = number of x in B with x*x = 0, read off the table."""
    mul, zero = obj.model.tables["mul"], int(obj.model.tables["zero"])
    return int(np.count_nonzero(np.diagonal(mul) == zero))


def test_criterion_1_prop1_rings():
    t0 = time.perf_counter()
    S = rings_site()
    z2 = realize(integers_mod(2))
    oracles = {
        "Z[e]": (dual_numbers(), [square_zero_count(o) for o in S.objects]),
        "Z[x]": (polynomial_ring(), [o.size for o in S.objects]),
        "Z/2": (integers_mod(2), [len(brute_force_homs(z2.model, o.model)) for o in S.objects]),
    }
    ok = True
    for name, (C, expected) in oracles.items():
        rep = check_prop1(C, S)
        sizes = [c.lhs_size for c in rep.components]
        ok &= rep.passed and all(c.bijective for c in rep.components) and sizes == expected
        ok &= [c.rhs_size for c in rep.components] == expected
    ok &= oracles["Z[e]"][1][RING_MODULI.index(4)] == 2
    verdict(1, "i_B bijective onto brute-force T-homs for Z[e], Z[x], Z/2", ok, time.perf_counter() - t0, 10)


def test_criterion_2_prop2_dual():
    t0 = time.perf_counter()
    rep = check_prop2(dual_numbers(), rings_site())
    ok = rep.passed and len(rep.components) == len(RING_MODULI)
    ok &= all(c.witness.get("unique_in_augmented_coslice") for c in rep.components)
    verdict(2, "incl2 satisfies and is unique for the pairing identity", ok, time.perf_counter() - t0, 10)


def test_criterion_3_thm3_and_kl():
    t0 = time.perf_counter()
    S = rings_site()
    rep = check_thm3(dual_numbers(), S)
    ok = rep.passed and all(c.bijective for c in rep.components)
    ok &= [c.lhs_size for c in rep.components] == [m * m for m in RING_MODULI]
    kl = kl_instance(S, [1, 2, 3, 4])
    ok &= kl.passed and [c.lhs_size for c in kl.components] == [1, 4, 9, 16]
    verdict(3, "jbar bijective; |B ⊗ Z[e]| = |B|^2 via a + b·e", ok, time.perf_counter() - t0, 30)


def _closed_suite(checker):
    t0 = time.perf_counter()
    reps = [checker(C, S) for S, C in closed_sites()]
    return reps, time.perf_counter() - t0


def test_criterion_4_thm4_exact():
    reps, dt = _closed_suite(check_thm4)
    ok = all(r.passed and r.mode == "exact" for r in reps)
    ok &= len(reps[0].components) == 8 and len(reps[1].components) == 1
    ok &= [c.lhs_size for c in reps[0].components] == [1 if 6 % m == 0 else 0 for m in DIVISORS]
    verdict(4, "i componentwise bijective on divisor-30 and Boolean sites", ok, dt, 60)


def test_criterion_5_thm5_exact():
    reps, dt = _closed_suite(check_thm5)
    ok = all(r.passed and r.mode == "exact" and all(c.bijective for c in r.components) for r in reps)
    ok &= all(any(c.name == "(i ⊸ R) ∘ δ = j" and c.ok for c in r.checks) for r in reps)
    verdict(5, "δ bijective and triangle identity holds", ok, dt, 120)


def test_criterion_6_thm6_exact():
    reps, dt = _closed_suite(check_thm6)
    ok = all(r.passed and r.mode == "exact" and all(c.bijective for c in r.components) for r in reps)
    wanted = {"(i ⊸ R) ∘ δ = jbar", "(δ_X ⊸_R R) ∘ δ_Y = id"}
    ok &= all(wanted <= {c.name for c in r.checks if c.ok} for r in reps)
    verdict(6, "δ bijective; factorization and splitting hold", ok, dt, 120)


def test_criterion_7_exponential_oracle():
    ok = True
    for S, C in closed_sites():
        reps = [exp_oracle(S, 10**6, C=C, C_name=C.label())]
        if len(S) > 1:
            reps.append(exp_oracle(S, 10**6, C=integers_mod(30), C_name="Z/30"))
        reps += [exp_oracle(S, 10**6, constant_size=n) for n in (0, 1, 2, 3)]
        ok &= all(r.passed and r.checks and all(c.bijective for c in r.components) for r in reps)
    verdict(7, "end exponential isomorphic to repr and const forms", ok)


def test_criterion_8_stone():
    ok, dt4 = True, None
    for n in range(5):
        t0 = time.perf_counter()
        rep = check_complete(stone_instance(n))
        count = len(brute_force_boolean_homs(powerset_algebra(n)))
        dt = time.perf_counter() - t0
        if n == 4:
            dt4 = dt
        ok &= rep.passed and count == n == rep.sizes["Hom(P,R)"]
    verdict(8, "complete pairing for n = 0..4; brute-force hom count n", ok, dt4, 60)


def test_criterion_9_object_classifier():
    t0 = time.perf_counter()
    S = build_site([finite_set(n) for n in range(6)], mode="truncated", names=[f"set{n}" for n in range(6)])
    rep = object_classifier_instance(S)
    ok = rep.passed and [c.lhs_size for c in rep.components] == [n + 1 for n in range(6)]
    ok &= all(c.bijective for c in rep.components)
    verdict(9, "jbar: B+1 -> B⊔1 bijective; added point is the identity family", ok, time.perf_counter() - t0, 10)


def test_criterion_10_determinism(tmp_path):
    ok = True
    for cfg in sorted(CONFIGS.glob("*.json")):
        outs = []
        for k in range(2):
            out = tmp_path / f"{cfg.stem}.{k}.json"
            ok &= main(["verify", "--config", str(cfg), "--out", str(out)]) == 0
            outs.append(out)
        ok &= outs[0].read_bytes() == outs[1].read_bytes()
        ok &= outs[0].with_suffix(".txt").read_bytes() == outs[1].with_suffix(".txt").read_bytes()
    verdict(10, "repeated verify runs give byte-identical reports", ok)


if __name__ == "__main__":
    import tempfile

    tests = sorted(
        (v for k, v in globals().items() if k.startswith("test_criterion_")),
        key=lambda f: int(f.__name__.split("_")[2]),
    )
    failed = 0
    for fn in tests:
        try:
            if fn is test_criterion_10_determinism:
                with tempfile.TemporaryDirectory() as d:
                    fn(Path(d))
            else:
                fn()
        except AssertionError:
            failed += 1
    raise SystemExit(1 if failed else 0)
