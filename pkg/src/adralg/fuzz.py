"""Randomized property suites.

Every instance is built from ``instance_rng(seed, k)``, so a failure report
``(suite, seed, k)`` replays exactly.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

from . import adrcore as ac
from .endoalg import endomorphism_algebra, global_dimension
from .errors import AdralgError, CapExceeded
from .families import instance_rng, random_presentation, random_semilocal
from .qhcheck import adr_order, check_left_strongly_qh, theorem2_suite


class NotApplicable(Exception):
    """The instance does not meet the hypothesis of the property."""


def _semilocal_instance(seed: int, k: int):
    rng = instance_rng(seed, k)
    pres = random_presentation(rng)
    return pres, random_semilocal(pres, rng)


def prop_top_quotient_hom(seed: int, k: int) -> Optional[str]:
    pres, mods = _semilocal_instance(seed, k)
    adr = ac.build_adr(pres, mods)
    if adr.m < 2:
        raise NotApplicable("Loewy length 1")
    for label, lhs, rhs in ac.top_quotient_dims(adr, ac.stratify(adr)):
        if lhs != rhs:
            return f"{label}: dim Hom(M'/M'J^(m-1), M~) = {lhs} but dim J(M', M~) = {rhs}"
    return None


def prop_radical_quotients_in_add(seed: int, k: int) -> Optional[str]:
    pres = random_presentation(instance_rng(seed, k))
    adr = ac.adr_of_algebra(pres)
    holds = ac.radical_quotients_in_add(adr)
    if holds is None:
        raise NotApplicable("some P(i)J is not in add of the catalog")
    if not holds:
        return "P(i)J in add of the catalog but some P(i)J/P(i)J^j is not"
    return None


def prop_stratification(seed: int, k: int) -> Optional[str]:
    pres, mods = _semilocal_instance(seed, k)
    adr = ac.build_adr(pres, mods)
    strat = ac.stratify(adr)
    bad = ac.stratification_witnesses(adr, strat)
    if bad:
        return bad[0]
    chain = ac.build_chain(adr, strat)
    if len(chain) != strat.n_M:
        return f"chain length {len(chain)} differs from n_M = {strat.n_M}"
    return None


def prop_total_left_chain(seed: int, k: int) -> Optional[str]:
    pres, mods = _semilocal_instance(seed, k)
    adr = ac.build_adr(pres, mods)
    rep = ac.verify_total_left_rejective_chain(adr, ac.build_chain(adr, ac.stratify(adr)))
    if not rep["verified"]:
        return ac.chain_report_text(rep)
    return None


def prop_gldim_bound(seed: int, k: int) -> Optional[str]:
    pres, mods = _semilocal_instance(seed, k)
    adr = ac.build_adr(pres, mods)
    n_M = ac.stratify(adr).n_M
    b = endomorphism_algebra(adr)
    try:
        gl = global_dimension(b, cap=n_M)
    except CapExceeded:
        return f"gl B exceeds n_M = {n_M}"
    if gl > 2 * (n_M - 1) and n_M > 1:
        return f"gl B = {gl} exceeds 2(n_M - 1) = {2 * (n_M - 1)}"
    return None


def prop_chain_bounds_gldim(seed: int, k: int) -> Optional[str]:
    """A verified A-total left rejective chain of length n gives gl B <= n."""
    pres, mods = _semilocal_instance(seed, k)
    adr = ac.build_adr(pres, mods)
    chain = ac.build_chain(adr, ac.stratify(adr))
    if not ac.verify_total_left_rejective_chain(adr, chain)["verified"]:
        raise NotApplicable("chain does not verify")
    b = endomorphism_algebra(adr)
    gl = global_dimension(b, cap=b.dim)
    if gl > len(chain):
        return f"gl B = {gl} exceeds the chain length {len(chain)}"
    return None


def prop_left_strongly_qh(seed: int, k: int) -> Optional[str]:
    pres, mods = _semilocal_instance(seed, k)
    adr = ac.build_adr(pres, mods)
    cert = check_left_strongly_qh(endomorphism_algebra(adr), adr_order(adr))
    if not cert.holds:
        return f"not left-strongly quasi-hereditary for the ADR order at {cert.failing}"
    return None


def prop_four_way(seed: int, k: int) -> Optional[str]:
    pres = random_presentation(instance_rng(seed, k), min_arrows=1)
    if pres.loewy_length() < 2:
        raise NotApplicable("Loewy length 1")
    theorem2_suite(pres)  # raises EquivalenceViolation on disagreement
    return None


SUITES: Dict[str, Callable[[int, int], Optional[str]]] = {
    "top-quotient-hom": prop_top_quotient_hom,
    "radical-quotients-in-add": prop_radical_quotients_in_add,
    "stratification": prop_stratification,
    "total-left-chain": prop_total_left_chain,
    "gldim-bound": prop_gldim_bound,
    "chain-bounds-gldim": prop_chain_bounds_gldim,
    "left-strongly-qh": prop_left_strongly_qh,
    "four-way": prop_four_way,
}


@dataclass
class FuzzSummary:
    seed: int
    count: int
    passed: Dict[str, int] = field(default_factory=dict)
    skipped: Dict[str, int] = field(default_factory=dict)
    failures: List[Dict] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> Dict:
        return {"schema": 1, "seed": self.seed, "count": self.count, "passed": self.passed, "not_applicable": self.skipped,
                "failures": self.failures, "ok": self.ok}


SKIP = "not applicable"


def run_one(suite: str, seed: int, k: int) -> Optional[str]:
    """None on success, ``SKIP`` when the hypothesis fails, else the failure message."""
    try:
        return SUITES[suite](seed, k)
    except NotApplicable:
        return SKIP
    except AdralgError as exc:
        return f"{type(exc).__name__}: {exc}"


def run(seed: int, count: int, suites: Optional[Sequence[str]] = None) -> FuzzSummary:
    t0 = time.perf_counter()
    names = list(suites) if suites else list(SUITES)
    out = FuzzSummary(seed, count, {n: 0 for n in names}, {n: 0 for n in names})
    for name in names:
        for k in range(count):
            msg = run_one(name, seed, k)
            if msg is None:
                out.passed[name] += 1
            elif msg == SKIP:
                out.skipped[name] += 1
            else:
                out.failures.append({"suite": name, "seed": seed, "instance": k, "message": msg})
    out.seconds = time.perf_counter() - t0
    return out
