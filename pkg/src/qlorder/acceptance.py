"""Acceptance criteria as runnable checks.

``python -m qlorder.acceptance`` runs them all and prints one PASS/FAIL line
per criterion.  Runtime budgets are part of each verdict.
"""

from __future__ import annotations

import json
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field
from functools import lru_cache

from .controlled import StarOrder, theta_candidate, verify_cm1, verify_cm2, verify_cm3
from .groups import make_bs, make_free_hnn, make_int_lattice_hnn, negative_lattice_example, shipped_presentations
from .sweeps import OrderSweep, confluence, lemma_base_bound, min_pair_sweep, stem_lemma
from . import toeplitz as tp


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    elapsed: float
    budget: float | None
    details: list = field(default_factory=list)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        budget = f", budget {self.budget:.0f} s" if self.budget else ""
        return f"[{tag}] criterion {self.number}: {self.title} ({self.elapsed:.1f} s{budget})"


def _result(number, title, budget, started, reports, extra_ok=True):
    elapsed = time.perf_counter() - started
    ok = extra_ok and all(r.passed for _, r in reports)
    if budget is not None and elapsed > budget:
        ok = False
    details = [f"{label}: {r.name} {r.status} checked={r.checked}"
               + ("" if r.passed else f" witness={json.dumps(r.witness, ensure_ascii=False)}")
               for label, r in reports]
    return CriterionResult(number, title, ok, elapsed, budget, details)


CONFLUENCE_PRESENTATIONS = ("BS(2,3)", "BS(3,2)", "Z2(2,3,3,2)", "F2(2,3,b)")


def criterion_1():
    started = time.perf_counter()
    pres = shipped_presentations()
    reports = [(n, confluence(pres[n], max_length=8, orders=200, seed=0)) for n in CONFLUENCE_PRESENTATIONS]
    return _result(1, "normal-form confluence, words <= 8, 200 orders", 60, started, reports)


def criterion_2():
    started = time.perf_counter()
    reports = [("BS(2,3)", min_pair_sweep(make_bs(2, 3), radius=4, factor_radius=6))]
    return _result(2, "minimal-pair minimality in BS(2,3)", 300, started, reports)


@lru_cache(maxsize=None)
def _order_sweeps():
    """leq/join sweeps for every shipped presentation, kept for criteria 4 and 6."""
    out = {}
    for name, pres in shipped_presentations().items():
        sweep = OrderSweep(pres, radius=5, witness_radius=7)
        leq_report, _ = sweep.leq_agreement()
        join_report, joins = sweep.join_agreement()
        out[name] = (leq_report, join_report, joins)
    return out


def criterion_3():
    started = time.perf_counter()
    sweeps = _order_sweeps()
    reports = []
    for name, (leq_report, join_report, _) in sweeps.items():
        reports += [(name, leq_report), (name, join_report)]
    return _result(3, "leq_star / join_star agree with brute force", 300, started, reports)


def criterion_4():
    started = time.perf_counter()
    reports = [(name, stem_lemma(joins)) for name, (_, _, joins) in _order_sweeps().items()]
    return _result(4, "stem lemma: height of a join is the max height", None, started, reports)


def criterion_5():
    started = time.perf_counter()
    reports = [(name, lemma_base_bound(pres, size_bound=6, radius=6))
               for name, pres in shipped_presentations().items()]
    return _result(5, "upper bound in P* implies finite join in P", None, started, reports)


def criterion_6():
    sweeps = _order_sweeps()
    started = time.perf_counter()
    reports = []
    for name, pres in shipped_presentations().items():
        theta = theta_candidate(pres)
        reports.append((name, verify_cm1(theta, 5, sweeps[name][2])))
        for k in range(4):
            reports.append((f"{name} k={k}", verify_cm2(theta, (k,), 5)))
            reports.append((f"{name} k={k}", verify_cm3(theta, (k,), 3)))
    return _result(6, "controlled-map axioms for the height map", 120, started, reports)


def criterion_7():
    started = time.perf_counter()
    positives = {
        "BS(2,3)": make_bs(2, 3, validate=False),
        "Z2(2,3,3,2)": make_int_lattice_hnn((2, 3), (3, 2), validate=False),
        "F2(2,3,b)": make_free_hnn(2, 2, 3, 2, validate=False),
    }
    details = []
    ok = True
    for name, pres in positives.items():
        passed = pres.report.passed
        ok &= passed
        details.append(f"{name}: {'pass' if passed else 'FAIL'}")
    neg = negative_lattice_example().report
    v = neg.verdict("minimal_coset_representatives")
    neg_ok = (not neg.passed) and (not v.passed) and v.witness["coset"] == "(1,0)+A"
    ok &= neg_ok
    details.append(f"Z2 A=<(1,2),(2,1)>: expected failure {'seen' if neg_ok else 'MISSING'}, witness {v.witness}")
    return CriterionResult(7, "hypothesis validator verdicts", ok, time.perf_counter() - started, None, details)


def criterion_8(truncation: int = 6):
    started = time.perf_counter()
    reports = []
    for name, pres in shipped_presentations().items():
        basis = tp.build_basis(pres, truncation)
        cache = tp.OperatorCache(pres, basis)
        ps = StarOrder(pres).positives(3)
        reports.append((name, tp.check_isometry(pres, basis, ps, cache)))
        reports.append((name, tp.check_covariance_all(pres, basis, ps, cache)))
        for k in range(3):
            reports.append((f"{name} k={k}", tp.check_matrix_units(pres, basis, k, 3, cache)))
            samples = tp.hk_sample_operators(pres, basis, k, 2, 1, cache)
            reports.append((f"{name} k={k}", tp.check_hk_invariance(pres, basis, k, samples)))
    return _result(8, f"Toeplitz identities at truncation {truncation}", 120, started, reports)


def criterion_9():
    from .cli import main

    started = time.perf_counter()
    details = []
    ok = True
    with tempfile.TemporaryDirectory() as tmp:
        for preset in ("BS(2,3)", "Z2-negative"):
            texts = []
            for run in range(2):
                out = os.path.join(tmp, f"run{run}.json")
                with open(os.devnull, "w") as sink:
                    saved, sys.stdout = sys.stdout, sink
                    try:
                        main(["verify", "--preset", preset, "--json", out])
                    finally:
                        sys.stdout = saved
                with open(out, encoding="utf-8") as fh:
                    doc = json.load(fh)
                texts.append(json.dumps(doc["canonical"], sort_keys=True, ensure_ascii=False))
            same = texts[0] == texts[1]
            ok &= same
            details.append(f"{preset}: canonical sections {'identical' if same else 'DIFFER'}")
    return CriterionResult(9, "verify reports are deterministic", ok, time.perf_counter() - started, None, details)


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9,
}


def run_all(numbers=None, verbose=False) -> list[CriterionResult]:
    results = []
    for n in numbers or sorted(CRITERIA):
        r = CRITERIA[n]()
        results.append(r)
        print(r.line(), flush=True)
        if verbose or not r.passed:
            for d in r.details:
                print(f"    {d}")
    return results


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    verbose = "-v" in argv
    numbers = [int(a) for a in argv if a.isdigit()]
    results = run_all(numbers, verbose)
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
