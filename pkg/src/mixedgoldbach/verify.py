"""The verification suite: every exact identity and oracle comparison, plus
the two asymptotic measurements.

Checks of kind ``"pass"`` gate the exit code; ``"measured"`` checks record
a trend and never fail a run.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import arith, circle, gamma, singular_series, special_primes
from .special_primes import RationalExponent

log = logging.getLogger(__name__)

__all__ = ["Scale", "CheckResult", "CHECKS", "run_checks", "FULL", "QUICK"]


@dataclass(frozen=True)
class Scale:
    r_limit: int = 100_000
    ps_limit: int = 1_000_000
    ps_cs: tuple[str, ...] = ("11/10", "21/20")
    linnik_limit: int = 100_000
    decomp_max: int = 100_000
    decomp_count: int = 20
    decomp_A: tuple[float, ...] = (1.0, 2.0)
    oracle_max: int = 10_000
    oracle_count: int = 50
    g3_max: int = 10_000
    g3_count: int = 5
    g3_A: float = 0.5
    split_N: int = 10_000
    split_alphas: int = 100
    dft_Ns: tuple[int, ...] = (9, 21, 45, 101)
    parseval_N: int = 1000
    parseval_M: int = 4096
    f0_Ns: tuple[int, ...] = (100_003, 1_000_003)
    f0_decades: tuple[int, ...] = (3, 4, 5)
    f0_P: int = 1_000_000
    jind_samples: int = 100
    parity_samples: int = 50
    series_P: int = 100_000
    trend_max: int = 10_000_000
    trend_points: int = 31
    minor_Ns: tuple[int, ...] = (10_000, 100_000, 1_000_000)
    minor_samples: int = 200
    c: str = "11/10"
    B_param: float = 1.0
    seed: int = 20170101


FULL = Scale()
QUICK = Scale(
    r_limit=5000,
    ps_limit=50_000,
    linnik_limit=5000,
    decomp_max=5000,
    decomp_count=4,
    oracle_max=2000,
    oracle_count=6,
    g3_max=5000,
    g3_count=2,
    split_N=2000,
    split_alphas=10,
    dft_Ns=(9, 21),
    f0_Ns=(10_007,),
    f0_decades=(2, 3, 4),
    f0_P=100_000,
    jind_samples=10,
    parity_samples=10,
    series_P=10_000,
    trend_max=200_000,
    trend_points=7,
    minor_Ns=(1000, 10_000),
    minor_samples=50,
)


@dataclass
class CheckResult:
    id: int
    name: str
    kind: str  # "pass" or "measured"
    status: str  # "pass", "fail" or "measured"
    values: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    seconds: float = 0.0
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def line(self) -> str:
        return f"[{self.status.upper():8s}] #{self.id:02d} {self.name} ({self.seconds:.1f}s)"

    def to_dict(self) -> dict:
        return asdict(self)


class _Context:
    """Tables shared between checks, built on first use."""

    def __init__(self, scale: Scale):
        self.scale = scale
        self.c = RationalExponent.parse(scale.c)
        self.rng = np.random.default_rng(scale.seed)
        self._tables: dict[int, gamma.GammaTables] = {}
        self.breakdowns: list[gamma.GammaBreakdown] = []

    def tables(self, limit: int) -> gamma.GammaTables:
        if limit not in self._tables:
            self._tables[limit] = gamma.GammaTables(limit, self.c)
        return self._tables[limit]

    def odd_sample(self, lo: int, hi: int, k: int) -> list[int]:
        pool = np.arange(lo | 1, hi + 1, 2)
        return sorted(int(x) for x in self.rng.choice(pool, size=min(k, pool.size), replace=False))


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


# ---------------------------------------------------------------------------
# gating checks
# ---------------------------------------------------------------------------


def check_r_identity(ctx: _Context) -> CheckResult:
    n_max = ctx.scale.r_limit
    fz = arith.Factorizer(n_max)
    brute = arith.r_two_squares_bruteforce(n_max)
    bad = [n for n in range(1, n_max + 1) if arith.r_two_squares(fz.factorize(n)) != brute[n]]
    return CheckResult(
        1, "r(n) = 4 sum chi(d) vs lattice count", "pass", "pass" if not bad else "fail",
        {"n_max": n_max, "mismatches": len(bad), "first_mismatch": bad[:5]},
        {"exact": True, "seconds_max": 30},
    )


def check_theta0(ctx: _Context) -> CheckResult:
    v = arith.theta0()
    # the reference 0.0289... is a truncation of 0.028957...
    leading = math.floor(v * 1e4)
    ok = leading == 289
    return CheckResult(2, "theta_0 = 1/2 - e log 2 / 4", "pass", "pass" if ok else "fail",
                       {"theta0": v, "truncated": leading / 1e4},
                       {"significant_figures": 3, "reference": 0.0289, "mode": "truncate"})


def check_ps_classification(ctx: _Context) -> CheckResult:
    limit = ctx.scale.ps_limit
    primes = arith.sieve_primes(limit)
    fz = arith.Factorizer(limit, primes)
    vals, ok = {}, True
    for cs in ctx.scale.ps_cs:
        c = RationalExponent.parse(cs)
        table = special_primes.classify_all(limit, c, primes, fz)
        forward = table.ps_mask()[primes.primes()]
        backward = np.array([special_primes.is_ps_prime(int(p), c, primes) for p in primes.primes()])
        mism = int(np.count_nonzero(forward != backward))
        vals[cs] = {"ps_primes": int(forward.sum()), "mismatches": mism}
        ok &= mism == 0
    return CheckResult(3, "PS forward enumeration vs backward test", "pass", "pass" if ok else "fail",
                       {"limit": limit, **vals}, {"exact": True, "seconds_max": 60})


def check_linnik(ctx: _Context) -> CheckResult:
    limit = ctx.scale.linnik_limit
    primes = arith.sieve_primes(limit)
    fz = arith.Factorizer(limit, primes)
    brute = arith.r_two_squares_bruteforce(limit)
    mism = [int(p) for p in primes.primes()
            if special_primes.is_linnik_prime(int(p), fz) != (brute[int(p) - 1] > 0)]
    return CheckResult(4, "Linnik test r(p-1) > 0 vs lattice search", "pass", "pass" if not mism else "fail",
                       {"limit": limit, "primes": len(primes), "mismatches": len(mism)}, {"exact": True})


def check_decomposition(ctx: _Context) -> CheckResult:
    s = ctx.scale
    tables = ctx.tables(s.decomp_max)
    Ns = ctx.odd_sample(1001, s.decomp_max, s.decomp_count)
    worst = 0.0
    for A in s.decomp_A:
        for N in Ns:
            br = gamma.gamma_decomposed(N, tables, A)
            worst = max(worst, br.identity_gap)
            if A == s.decomp_A[-1]:
                ctx.breakdowns.append(br)
    return CheckResult(5, "Gamma = 4 (Gamma_1 + Gamma_2 + Gamma_3)", "pass", "pass" if worst <= 1e-9 else "fail",
                       {"Ns": Ns, "A_params": list(s.decomp_A), "max_rel_gap": worst}, {"rel": 1e-9})


def check_conv_vs_oracle(ctx: _Context) -> CheckResult:
    s = ctx.scale
    tables = ctx.tables(s.oracle_max)
    Ns = ctx.odd_sample(7, s.oracle_max, s.oracle_count)
    worst = max(_rel(gamma.gamma_fast(N, tables), gamma.gamma_oracle(N, tables)) for N in Ns)
    return CheckResult(6, "gamma_fast vs triple-loop oracle", "pass", "pass" if worst <= 1e-9 else "fail",
                       {"Ns": Ns, "max_rel_gap": worst}, {"rel": 1e-9, "seconds_max": 300})


def check_gamma3(ctx: _Context) -> CheckResult:
    s = ctx.scale
    tables = ctx.tables(s.oracle_max if s.g3_max <= s.oracle_max else s.g3_max)
    Ns = ctx.odd_sample(1001, s.g3_max, s.g3_count)
    rows, worst = [], 0.0
    for N in Ns:
        g3 = gamma.gamma_decomposed(N, tables, s.g3_A).gamma3
        rebuilt = gamma.gamma3_reconstruction(N, tables, s.g3_A)
        gap = _rel(rebuilt, g3)
        worst = max(worst, gap)
        rows.append({"N": N, "gamma3": g3, "rebuilt": rebuilt})
    return CheckResult(7, "Gamma_3 rebuilt from I_{4m,1+jm;J_m}", "pass", "pass" if worst <= 1e-9 else "fail",
                       {"A_param": s.g3_A, "rows": rows, "max_rel_gap": worst}, {"rel": 1e-9})


def check_omega_sigma(ctx: _Context) -> CheckResult:
    s = ctx.scale
    tables = ctx.tables(max(s.split_N, s.oracle_max))
    spec = circle.ExpSumSpec("ps_weighted", s.split_N, c=ctx.c)
    worst = 0.0
    for a in ctx.rng.random(s.split_alphas):
        om, si = circle.omega_sigma_split(float(a), s.split_N, tables)
        sc = circle.eval_exp_sum(spec, float(a), tables)
        worst = max(worst, abs(om + si - sc) / abs(sc))
    return CheckResult(8, "Omega + Sigma = S_c", "pass", "pass" if worst <= 1e-10 else "fail",
                       {"N": s.split_N, "alphas": s.split_alphas, "max_rel_gap": worst}, {"rel": 1e-10})


def check_dft(ctx: _Context) -> CheckResult:
    tables = ctx.tables(max(ctx.scale.oracle_max, 1000))
    rows, worst = [], 0.0
    for N in ctx.scale.dft_Ns:
        M = 1 << (3 * N).bit_length()
        via, direct = circle.dft_representation_check(N, M, tables)
        worst = max(worst, abs(via - direct))
        rows.append({"N": N, "M": M, "via_dft": via, "direct": direct})
    return CheckResult(9, "discrete orthogonality vs triple count", "pass", "pass" if worst <= 1e-8 else "fail",
                       {"rows": rows, "max_abs_gap": worst}, {"abs": 1e-8})


def check_parseval(ctx: _Context) -> CheckResult:
    s = ctx.scale
    tables = ctx.tables(max(ctx.scale.oracle_max, s.parseval_N))
    lhs, rhs = circle.parseval_check(s.parseval_N, s.parseval_M, tables)
    gap = abs(lhs - rhs)
    return CheckResult(10, "Parseval (1/M) sum |S|^2 = sum log^2 p", "pass", "pass" if gap <= 1e-8 else "fail",
                       {"N": s.parseval_N, "M": s.parseval_M, "lhs": lhs, "rhs": rhs, "abs_gap": gap},
                       {"abs": 1e-8})


def check_F0(ctx: _Context) -> CheckResult:
    s = ctx.scale
    top = 10 ** max(s.f0_decades)
    rows, ok = [], True
    for N in s.f0_Ns:
        partial, limit_value, gap = singular_series.partial_sum_vs_F0(N, top, s.f0_P)
        med = singular_series.decade_median_gaps(N, list(s.f0_decades), s.f0_P)
        meds = [med[k] for k in s.f0_decades]
        decreasing = all(a > b for a, b in zip(meds, meds[1:]))
        ok &= gap < 1e-2 and decreasing
        rows.append({"N": N, "D": top, "partial": partial, "F0": limit_value, "gap": gap,
                     "decade_medians": {str(k): v for k, v in med.items()}})
    return CheckResult(11, "sum_{d<=D} f(d) -> (pi/4) N(0)", "pass", "pass" if ok else "fail",
                       {"rows": rows}, {"gap_max": 1e-2, "decade_medians": "strictly decreasing"})


def check_j_independence(ctx: _Context) -> CheckResult:
    s = ctx.scale
    bad, signed = 0, []
    ms = ctx.rng.choice(np.arange(2, 1001, 2), size=s.jind_samples)
    Ns = ctx.rng.choice(np.arange(3, 10_000, 2), size=s.jind_samples)
    for m, N in zip(ms.tolist(), Ns.tolist()):
        plus = singular_series.sigma_dl(N, 4 * m, 1 + m, 10_000).value
        minus = singular_series.sigma_dl(N, 4 * m, 1 - m, 10_000).value
        bad += plus != minus
        signed.append(plus - minus)
    return CheckResult(12, "S_{4m,1+m}(N) = S_{4m,1-m}(N), Gamma* = 0", "pass", "pass" if bad == 0 else "fail",
                       {"samples": s.jind_samples, "unequal": int(bad), "max_abs_signed_sum": max(map(abs, signed))},
                       {"exact": True})


def check_parity(ctx: _Context) -> CheckResult:
    s = ctx.scale
    evens = ctx.rng.choice(np.arange(4, 10**6, 2), size=s.parity_samples).tolist()
    odds = ctx.rng.choice(np.arange(3, 10**6, 2), size=s.parity_samples).tolist()
    zero_even = all(singular_series.sigma_N(N, s.series_P).value == 0.0 for N in evens)
    sg = [singular_series.sigma_gamma(N, s.series_P).value for N in odds]
    ok = zero_even and min(sg) > 0
    return CheckResult(13, "S(N) = 0 for even N, S_Gamma(N) > 0 for odd N", "pass", "pass" if ok else "fail",
                       {"even_all_zero": zero_even, "min_sigma_gamma_odd": min(sg)}, {"exact_zero": True})


# ---------------------------------------------------------------------------
# measured checks
# ---------------------------------------------------------------------------


def check_ratio_trend(ctx: _Context) -> CheckResult:
    s = ctx.scale
    tables = ctx.tables(s.trend_max)
    grid = sorted({int(x) | 1 for x in np.geomspace(10_000, s.trend_max - 1, s.trend_points)})
    rows = []
    for N in grid:
        g = gamma.gamma_fast(N, tables)
        mt = gamma.main_term(N, ctx.c)
        rows.append({"N": N, "gamma": g, "main_term": mt, "ratio": g / mt})
    ratios = np.array([r["ratio"] for r in rows])
    decades = {}
    for r in rows:
        decades.setdefault(int(math.log10(r["N"])), []).append(r["ratio"])
    med = {str(k): float(np.median(v)) for k, v in sorted(decades.items())}
    dist = [abs(v - 1) for v in med.values()]
    in_band = bool(np.all((ratios >= 0.3) & (ratios <= 3.0)))
    approaching = all(a >= b for a, b in zip(dist, dist[1:]))
    return CheckResult(
        14, "ratio Gamma / ((gamma/2) S_Gamma N^2) trend", "measured", "measured",
        {"rows": rows, "decade_medians": med, "in_band": in_band, "medians_approach_1": approaching},
        {"band": [0.3, 3.0]},
        note="Error scale (log N)^-theta0 (loglog N)^6 with theta0 ~ 0.0289 is not "
             "confirmable at this size; trend only.",
    )


def check_minor_arcs(ctx: _Context) -> CheckResult:
    s = ctx.scale
    tables = ctx.tables(max(s.minor_Ns))
    rows = []
    for N in s.minor_Ns:
        a, b = circle.minor_arc_sup(N, s.B_param, tables, s.minor_samples, s.seed)
        rows.append({"N": N, "sup_S_over_N": a, "sup_Sc_over_N": b})
    dec_s = all(x["sup_S_over_N"] > y["sup_S_over_N"] for x, y in zip(rows, rows[1:]))
    dec_c = all(x["sup_Sc_over_N"] > y["sup_Sc_over_N"] for x, y in zip(rows, rows[1:]))
    return CheckResult(
        15, "minor-arc sup |S|/N and |S_c|/N", "measured", "measured",
        {"B_param": s.B_param, "rows": rows, "S_decreasing": dec_s, "Sc_decreasing": dec_c}, {},
        note="Sampled sup over the minor arcs; the proven bound needs B > 14.",
    )


CHECKS: list[Callable[[_Context], CheckResult]] = [
    check_r_identity,
    check_theta0,
    check_ps_classification,
    check_linnik,
    check_decomposition,
    check_conv_vs_oracle,
    check_gamma3,
    check_omega_sigma,
    check_dft,
    check_parseval,
    check_F0,
    check_j_independence,
    check_parity,
    check_ratio_trend,
    check_minor_arcs,
]


def run_checks(
    scale: Scale = FULL, only: list[int] | None = None, echo: Callable[[str], None] | None = None
) -> tuple[list[CheckResult], list[gamma.GammaBreakdown]]:
    """Run the suite; a check that raises is recorded as a failure."""
    ctx = _Context(scale)
    results = []
    for i, fn in enumerate(CHECKS, start=1):
        if only and i not in only:
            continue
        t0 = time.perf_counter()
        try:
            res = fn(ctx)
        except Exception as exc:  # noqa: BLE001 - the failing check is named in the report
            log.exception("check %d failed with an exception", i)
            res = CheckResult(i, fn.__name__, "pass", "fail", {"error": repr(exc)})
        res.seconds = time.perf_counter() - t0
        if "seconds_max" in res.tolerances and res.seconds > res.tolerances["seconds_max"] and res.kind == "pass":
            res.status = "fail"
            res.note = (res.note + " exceeded time budget").strip()
        results.append(res)
        if echo:
            echo(res.line())
    return results, ctx.breakdowns
