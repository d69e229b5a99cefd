"""The full bounded verification suite for one presentation."""

from __future__ import annotations

from dataclasses import dataclass

from .controlled import (
    check_candidate,
    check_kernel_iso,
    check_kernel_qlo,
    theta_candidate,
    verify_cm1,
    verify_cm2,
    verify_cm3,
)
from .groups import DEFAULT_VALIDATE_BOUND, UnsupportedError, validate_hypotheses
from .reports import CheckReport
from .sweeps import OrderSweep, lemma_base_bound, min_pair_sweep, stem_lemma


@dataclass(frozen=True)
class Bounds:
    validate_bound: int = DEFAULT_VALIDATE_BOUND
    enum_bound: int = 5
    truncation: int = 6

    def to_dict(self):
        return {"validate_bound": self.validate_bound, "enum_bound": self.enum_bound,
                "truncation": self.truncation}


HYPOTHESIS_CHECKS = ("phi_positive", "minimal_coset_representatives", "B_join_closed")
ORDER_CHECKS = (
    "leq_star_vs_oracle", "join_star_vs_oracle", "stem_lemma", "min_pair_minimality",
    "cub_in_P_star_implies_cub_in_P",
)
CONTROLLED_CHECKS = (
    "theta_homomorphism", "cm1_join_preserved", "cm2_complete", "cm3_incomparable",
    "kernel_isomorphism", "kernel_qlo",
)
CHECK_NAMES = HYPOTHESIS_CHECKS + ORDER_CHECKS + CONTROLLED_CHECKS
MAX_STEM_HEIGHT = 3
STEM_BOUND = 3


def _hypotheses(pres, bounds):
    report = validate_hypotheses(pres.base, pres.sub, bounds.validate_bound)
    return [
        CheckReport(v.name, "pass" if v.passed else "fail", v.checked,
                    {"validate_bound": bounds.validate_bound}, v.witness)
        for v in report.verdicts
    ]


def _merge(name, reports, bounds):
    """Fold per-height reports into one, keeping the first failure."""
    failed = next((r for r in reports if r.status != "pass"), None)
    checked = sum(r.checked for r in reports)
    if failed is None:
        return CheckReport(name, "pass", checked, bounds)
    witness = dict(failed.witness or {})
    witness.update({"at": failed.bounds})
    return CheckReport(name, failed.status, checked, bounds, witness)


def run_suite(pres, bounds: Bounds = Bounds(), only=None) -> list[CheckReport]:
    """Run every check (or the ones named in ``only``) in a fixed order.

    When a hypothesis fails, the algorithmic checks are reported as
    "skipped": their correctness depends on the hypotheses.
    """
    wanted = set(CHECK_NAMES if only is None else only)
    unknown = wanted - set(CHECK_NAMES)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    results: dict = {}
    hyp = _hypotheses(pres, bounds)
    for r in hyp:
        results[r.name] = r
    rest = [n for n in CHECK_NAMES if n not in HYPOTHESIS_CHECKS]
    if not all(r.passed for r in hyp):
        for n in rest:
            results[n] = CheckReport(n, "skipped", 0, {}, {"reason": "HNN hypotheses fail"})
        return [results[n] for n in CHECK_NAMES if n in wanted]
    try:
        _order_and_controlled(pres, bounds, wanted, results)
    except UnsupportedError as exc:
        for n in rest:
            results.setdefault(n, CheckReport(n, "unsupported", 0, {}, {"reason": str(exc)}))
    return [results[n] for n in CHECK_NAMES if n in wanted]


def _order_and_controlled(pres, bounds, wanted, results):
    e = bounds.enum_bound
    need_sweep = wanted & {"leq_star_vs_oracle", "join_star_vs_oracle", "stem_lemma", "cm1_join_preserved"}
    joins = None
    if need_sweep:
        sweep = OrderSweep(pres, radius=e, witness_radius=e + 2)
        if "leq_star_vs_oracle" in wanted:
            results["leq_star_vs_oracle"] = sweep.leq_agreement()[0]
        report, joins = sweep.join_agreement()
        results["join_star_vs_oracle"] = report
        results["stem_lemma"] = stem_lemma(joins)
    if "min_pair_minimality" in wanted:
        results["min_pair_minimality"] = min_pair_sweep(pres, radius=max(e - 1, 0), factor_radius=e + 1)
    if "cub_in_P_star_implies_cub_in_P" in wanted:
        results["cub_in_P_star_implies_cub_in_P"] = lemma_base_bound(pres, size_bound=e + 1, radius=e + 1)
    theta = theta_candidate(pres)
    if "theta_homomorphism" in wanted:
        r = check_candidate(theta, max(e - 1, 0))
        results["theta_homomorphism"] = CheckReport("theta_homomorphism", r.status, r.checked, r.bounds, r.witness)
    if "cm1_join_preserved" in wanted:
        results["cm1_join_preserved"] = verify_cm1(theta, e, joins)
    if "cm2_complete" in wanted:
        reports = [verify_cm2(theta, (k,), e) for k in range(MAX_STEM_HEIGHT + 1)]
        results["cm2_complete"] = _merge("cm2_complete", reports,
                                         {"bound": e, "max_height": MAX_STEM_HEIGHT})
    if "cm3_incomparable" in wanted:
        reports = [verify_cm3(theta, (k,), STEM_BOUND) for k in range(MAX_STEM_HEIGHT + 1)]
        results["cm3_incomparable"] = _merge("cm3_incomparable", reports,
                                             {"bound": STEM_BOUND, "max_height": MAX_STEM_HEIGHT})
    if "kernel_isomorphism" in wanted:
        results["kernel_isomorphism"] = check_kernel_iso(pres, e + 1)
    if "kernel_qlo" in wanted:
        results["kernel_qlo"] = check_kernel_qlo(theta, e)
