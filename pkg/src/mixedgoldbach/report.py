"""Run configuration, the TGMX1 table cache and the report-producing commands.

Every ``cmd_*`` returns a report dict (see ``report_schema.json``) and, for
``cmd_gamma``, writes a CSV when ``csv_out`` is set.  Desk-scale A and B are
echoed in every report header next to the asymptotic requirements.
"""

from __future__ import annotations

import csv
import io
import json
import math
import struct
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from . import arith, circle, gamma, singular_series, special_primes, verify
from .arith import ArgumentError, PrimeTable
from .special_primes import RationalExponent, SpecialPrimeTable

__all__ = [
    "RunConfig",
    "CacheError",
    "CACHE_MAGIC",
    "write_cache",
    "load_cache",
    "cache_path",
    "report_schema",
    "cmd_sieve",
    "cmd_classify",
    "cmd_gamma",
    "cmd_series",
    "cmd_arcs",
    "cmd_verify",
    "GAMMA_CSV_COLUMNS",
]

CACHE_MAGIC = b"TGMX1"
_HEADER = struct.Struct("<5sqqq")
SCHEMA_ID = "mixedgoldbach.report/1"
GAMMA_CSV_COLUMNS = (
    "N", "c", "gamma", "gamma1", "gamma2", "gamma3", "main_term", "ratio",
    "D", "A_param", "oracle", "oracle_rel_gap", "even_flag",
)


class CacheError(ArgumentError):
    """Unreadable, corrupted or mismatched table cache."""


@dataclass
class RunConfig:
    n: int | None = None
    n_grid: list[int] = field(default_factory=list)
    c: str = "11/10"
    exploration: bool = False
    A_param: float = 2.0
    B_param: float = 1.0
    prime_bound: int = 10**6
    oracle_ceiling: int = 20_000
    threads: int = 1
    seed: int = 20170101
    csv_out: str | None = None
    cache_dir: str | None = None
    quick: bool = False

    def __post_init__(self):
        self.exponent  # validates c
        if self.oracle_ceiling > gamma.ORACLE_MAX:
            raise ArgumentError(f"oracle_ceiling above {gamma.ORACLE_MAX} is not supported")
        if self.threads < 1:
            raise ArgumentError("threads must be >= 1")
        if self.prime_bound < 3:
            raise ArgumentError("prime_bound must be >= 3")

    @property
    def exponent(self) -> RationalExponent:
        return RationalExponent.parse(self.c, self.exploration)

    def grid(self) -> list[int]:
        out = list(self.n_grid)
        if self.n is not None:
            out.append(int(self.n))
        if not out:
            raise ArgumentError("give --n or --n-grid")
        return sorted(set(int(x) for x in out))

    def echo(self) -> dict:
        return asdict(self)


def _header(config: RunConfig, command: str) -> dict:
    return {
        "schema": SCHEMA_ID,
        "command": command,
        "config": config.echo(),
        "regime": {
            "A_param": config.A_param,
            "A_required": "A>100",
            "B_param": config.B_param,
            "B_required": "B>14",
        },
        "checks": [],
        "breakdowns": [],
        "tables": {},
        "timing": {},
    }


def header_line(report: dict) -> str:
    r = report["regime"]
    return (f"# {report['command']}  c={report['config']['c']}  "
            f"A={r['A_param']:g} (theory: {r['A_required']})  "
            f"B={r['B_param']:g} (theory: {r['B_required']})")


# ---------------------------------------------------------------------------
# cache
# ---------------------------------------------------------------------------


def cache_path(cache_dir: str | Path, limit: int, c: RationalExponent) -> Path:
    return Path(cache_dir) / f"tables-{limit}-c{c.num}_{c.den}.tgmx"


def _full_bits(mask: np.ndarray) -> bytes:
    return np.packbits(mask.astype(bool), bitorder="little").tobytes()


def write_cache(path: str | Path, primes: PrimeTable, special: SpecialPrimeTable) -> Path:
    """Header (magic, limit, c.num, c.den), then prime, PS and Linnik bitmaps.

    Each bitmap has one bit per integer 0..limit, least significant bit first.
    """
    path = Path(path)
    limit, c = special.limit, special.c
    if primes.limit < limit:
        raise ArgumentError("prime table shorter than the special-prime table")
    blob = b"".join([
        _HEADER.pack(CACHE_MAGIC, limit, c.num, c.den),
        _full_bits(primes.mask(limit)),
        _full_bits(special.ps_mask()),
        _full_bits(special.linnik_mask()),
    ])
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_bytes(blob)
        tmp.replace(path)
    except OSError as exc:
        raise CacheError(f"cannot write cache {path}: {exc}") from exc
    return path


def load_cache(
    path: str | Path, limit: int | None = None, c: RationalExponent | None = None
) -> tuple[PrimeTable, SpecialPrimeTable]:
    """Read a cache, checking the header and (optionally) the expected limit and c."""
    path = Path(path)
    try:
        blob = path.read_bytes()
    except OSError as exc:
        raise CacheError(f"cannot read cache {path}: {exc}") from exc
    if len(blob) < _HEADER.size:
        raise CacheError("cache shorter than its header")
    magic, lim, num, den = _HEADER.unpack_from(blob)
    if magic != CACHE_MAGIC:
        raise CacheError(f"bad magic {magic!r}")
    if lim < 2 or num < 1 or den < 1:
        raise CacheError("corrupted header fields")
    nbytes = (lim + 1 + 7) // 8
    if len(blob) != _HEADER.size + 3 * nbytes:
        raise CacheError("cache length does not match its header")
    if limit is not None and lim != limit:
        raise CacheError(f"cache limit {lim} != requested {limit}")
    try:
        stored_c = RationalExponent(num, den, exploration=True)
    except ArgumentError as exc:
        raise CacheError(f"corrupted exponent in header: {exc}") from exc
    if c is not None and (stored_c.num, stored_c.den) != (c.num, c.den):
        raise CacheError(f"cache c = {stored_c} != requested {c}")
    c = c or stored_c

    def bitmap(k: int) -> np.ndarray:
        raw = np.frombuffer(blob, dtype=np.uint8, count=nbytes, offset=_HEADER.size + k * nbytes)
        return np.unpackbits(raw, bitorder="little", count=lim + 1).astype(bool)

    pmask, psmask, lmask = bitmap(0), bitmap(1), bitmap(2)
    if (psmask & ~pmask).any() or (lmask & ~pmask).any():
        raise CacheError("special-prime flags set on non-primes")
    plist = np.flatnonzero(pmask).astype(np.int64)
    plist.setflags(write=False)
    # odd-only layout: bit i <-> 2i + 1 for 0 <= i <= limit // 2
    odd_flags = np.zeros(lim // 2 + 1, dtype=bool)
    odd_flags[: (lim + 1) // 2] = pmask[1::2]
    odd = np.packbits(odd_flags, bitorder="little")
    odd.setflags(write=False)
    primes = PrimeTable(lim, odd, plist)
    seq = special_primes.ps_sequence(lim + 1, c)
    seq.setflags(write=False)
    special = SpecialPrimeTable(
        lim, c,
        np.packbits(psmask, bitorder="little"),
        np.packbits(lmask, bitorder="little"),
        seq,
    )
    return primes, special


def _tables_for(limit: int, config: RunConfig) -> tuple[PrimeTable, SpecialPrimeTable, str]:
    """Prime and special tables, from the cache when one matches."""
    c = config.exponent
    if config.cache_dir:
        path = cache_path(config.cache_dir, limit, c)
        if path.exists():
            primes, special = load_cache(path, limit, c)
            return primes, special, "cache"
    primes = arith.sieve_primes(limit)
    special = special_primes.classify_all(limit, c, primes)
    if config.cache_dir:
        write_cache(cache_path(config.cache_dir, limit, c), primes, special)
    return primes, special, "computed"


def _gamma_tables(limit: int, config: RunConfig) -> gamma.GammaTables:
    primes, special, _ = _tables_for(limit, config)
    return gamma.GammaTables(limit, config.exponent, primes=primes, special=special)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _check(name: str, status: str, values: dict, tolerances: dict | None = None) -> dict:
    return {"id": None, "name": name, "kind": "measured" if status == "measured" else "pass",
            "status": status, "values": values, "tolerances": tolerances or {}, "seconds": 0.0, "note": ""}


def cmd_sieve(config: RunConfig) -> dict:
    """Sieve up to --n, classify, and write the TGMX1 cache."""
    t0 = time.perf_counter()
    report = _header(config, "sieve")
    limit = config.n if config.n is not None else max(config.grid())
    if not config.cache_dir:
        raise ArgumentError("sieve needs --cache-dir")
    primes, special, source = _tables_for(limit, config)
    path = cache_path(config.cache_dir, limit, config.exponent)
    report["tables"] = {
        "limit": limit,
        "cache": str(path),
        "source": source,
        "primes": len(primes),
        "ps_primes": int(special.ps_primes().size),
        "linnik_primes": int(special.linnik_primes().size),
    }
    report["timing"]["total_seconds"] = time.perf_counter() - t0
    return report


def cmd_classify(config: RunConfig) -> dict:
    """Counts of PS and Linnik primes up to max(grid), and flags for each grid entry."""
    t0 = time.perf_counter()
    report = _header(config, "classify")
    grid = config.grid()
    limit = max(max(grid), 10)
    primes, special, source = _tables_for(limit, config)
    rows = []
    for n in grid:
        prime = n >= 2 and primes.is_prime(n)
        rows.append({
            "n": n,
            "prime": bool(prime),
            "ps": bool(prime and special.is_ps(n)),
            "linnik": bool(prime and special.is_linnik(n)),
            "pi": primes.count(n),
            "ps_count": int(np.count_nonzero(special.ps_primes(n))),
            "linnik_count": int(np.count_nonzero(special.linnik_primes(n))),
        })
    report["tables"] = {"limit": limit, "source": source, "rows": rows}
    report["timing"]["total_seconds"] = time.perf_counter() - t0
    return report


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def gamma_rows(config: RunConfig) -> tuple[list[dict], list[gamma.GammaBreakdown]]:
    grid = config.grid()
    if min(grid) < 7:
        raise ArgumentError("gamma grid needs N >= 7")
    c = config.exponent
    big = _gamma_tables(max(max(grid), 10), config)
    small_Ns = [N for N in grid if N <= config.oracle_ceiling]
    # FFT round-off scales with the table length, so oracle rows get their own tables
    small = _gamma_tables(max(max(small_Ns), 10), config) if small_Ns else None
    rows, breakdowns = [], []
    for N in grid:
        tables = small if N <= config.oracle_ceiling else big
        try:
            br = gamma.gamma_decomposed(N, tables, config.A_param, config.prime_bound)
            g1, g2, g3, D = br.gamma1, br.gamma2, br.gamma3, br.D
            total, mt = br.gamma_total, br.main_term
            breakdowns.append(br)
        except gamma.DegenerateCutError:
            g1 = g2 = g3 = D = None
            total = gamma.gamma_fast(N, tables)
            mt = gamma.main_term(N, c, config.prime_bound)
        oracle = gap = None
        if N <= config.oracle_ceiling:
            oracle = gamma.gamma_oracle(N, tables)
            gap = abs(total - oracle) / abs(oracle) if oracle else abs(total)
        even = N % 2 == 0
        rows.append({
            "N": N, "c": str(c), "gamma": total, "gamma1": g1, "gamma2": g2, "gamma3": g3,
            "main_term": mt, "ratio": None if even or mt == 0 else total / mt,
            "D": D, "A_param": config.A_param, "oracle": oracle, "oracle_rel_gap": gap,
            "even_flag": int(even),
        })
    return rows, breakdowns


def gamma_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(GAMMA_CSV_COLUMNS)
    for r in rows:
        w.writerow([_fmt(r[k]) for k in GAMMA_CSV_COLUMNS])
    return buf.getvalue()


def _breakdown_dict(br: gamma.GammaBreakdown) -> dict:
    return {
        "N": br.N, "c": str(br.c), "gamma": br.gamma_total, "gamma1": br.gamma1,
        "gamma2": br.gamma2, "gamma3": br.gamma3, "main_term": br.main_term,
        "ratio": br.ratio, "D": br.D, "A_param": br.A_param, "identity_gap": br.identity_gap,
    }


def cmd_gamma(config: RunConfig) -> dict:
    t0 = time.perf_counter()
    gamma.set_workers(config.threads)
    report = _header(config, "gamma")
    rows, breakdowns = gamma_rows(config)
    report["breakdowns"] = [_breakdown_dict(b) for b in breakdowns]
    report["tables"] = {"rows": rows}
    gaps = [r["oracle_rel_gap"] for r in rows if r["oracle_rel_gap"] is not None]
    if gaps:
        worst = max(gaps)
        report["checks"].append(_check("gamma_fast vs oracle", "pass" if worst <= 1e-9 else "fail",
                                       {"rows": len(gaps), "max_rel_gap": worst}, {"rel": 1e-9}))
    if breakdowns:
        worst = max(b.identity_gap for b in breakdowns)
        report["checks"].append(_check("Gamma = 4 (Gamma_1 + Gamma_2 + Gamma_3)",
                                       "pass" if worst <= 1e-9 else "fail",
                                       {"rows": len(breakdowns), "max_rel_gap": worst}, {"rel": 1e-9}))
    if config.csv_out:
        Path(config.csv_out).write_text(gamma_csv(rows))
    report["timing"]["total_seconds"] = time.perf_counter() - t0
    return report


def cmd_series(config: RunConfig) -> dict:
    """Singular series values and the partial sums of f(d) against F(0)."""
    t0 = time.perf_counter()
    report = _header(config, "series")
    P = config.prime_bound
    D_top = 10**4 if config.quick else 10**5
    D_grid = [10**k for k in range(1, int(round(math.log10(D_top))) + 1)]
    rows = []
    for N in config.grid():
        if N < 3:
            raise ArgumentError("series needs N >= 3")
        s = singular_series.sigma_N(N, P)
        row = {"N": N, "sigma": s.value, "sigma_low": s.low, "sigma_high": s.high}
        if N % 2:
            sg = singular_series.sigma_gamma(N, P)
            n0 = singular_series.script_N_at_zero(N, P)
            f = singular_series.f_coefficients(N, D_top)
            cum = np.cumsum(f)
            target = math.pi / 4.0 * n0.value
            row.update({
                "sigma_gamma": sg.value, "sigma_gamma_low": sg.low, "sigma_gamma_high": sg.high,
                "N0": n0.value, "F0": target,
                "partial_sums": [{"D": D, "sum": float(cum[D]), "gap": abs(float(cum[D]) - target)}
                                 for D in D_grid],
            })
        rows.append(row)
    report["tables"] = {"prime_bound": P, "rows": rows}
    report["timing"]["total_seconds"] = time.perf_counter() - t0
    return report


def cmd_arcs(config: RunConfig) -> dict:
    """Arc inventory, major-arc approximation errors at arc centres and edges,
    and the DFT representation check when N is small enough."""
    t0 = time.perf_counter()
    report = _header(config, "arcs")
    out = []
    for N in config.grid():
        try:
            arcs = circle.build_arcs(N, config.B_param)
        except circle.DegeneratePartitionError as exc:
            raise circle.DegeneratePartitionError(f"{exc} (try a smaller --b-param or larger --n)") from exc
        tables = _gamma_tables(max(N, 10), config)
        errors = []
        for arc in arcs.major[:12]:
            for off in (0.0, arc.half_width):
                _, _, e_s = circle.major_arc_error_S(N, arc.a, arc.q, off, tables, arcs.tau)
                _, _, e_c = circle.major_arc_error_Sc(N, arc.a, arc.q, off, tables, arcs.tau)
                errors.append({"a": arc.a, "q": arc.q, "offset": off,
                               "err_S_over_N": e_s / N, "err_Sc_over_N": e_c / N})
        entry = {
            "N": N, "Q": arcs.Q, "tau": arcs.tau, "arcs": len(arcs.major),
            "disjoint": arcs.disjoint, "major_measure": arcs.major_measure,
            "minor_measure": arcs.minor_measure, "major_arc_errors": errors,
        }
        if N <= config.oracle_ceiling:
            M = 1 << (3 * N).bit_length()
            via, direct = circle.dft_representation_check(N, M, tables)
            entry["dft"] = {"M": M, "via_dft": via, "direct": direct}
            report["checks"].append(_check(f"DFT representation N={N}",
                                           "pass" if abs(via - direct) <= 1e-8 * max(1.0, abs(direct)) else "fail",
                                           {"M": M, "abs_gap": abs(via - direct)}, {"abs": 1e-8}))
        out.append(entry)
    report["tables"] = {"rows": out}
    report["timing"]["total_seconds"] = time.perf_counter() - t0
    return report


def cmd_verify(config: RunConfig, echo=None) -> tuple[dict, int]:
    """Run the acceptance suite; exit code 0 iff every gating check passes."""
    t0 = time.perf_counter()
    gamma.set_workers(config.threads)
    report = _header(config, "verify")
    base = verify.QUICK if config.quick else verify.FULL
    scale = verify.Scale(**{**asdict(base), "c": config.c, "B_param": config.B_param, "seed": config.seed})
    results, breakdowns = verify.run_checks(scale, echo=echo)
    report["checks"] = [_jsonable(r.to_dict()) for r in results]
    report["breakdowns"] = [_breakdown_dict(b) for b in breakdowns]
    report["timing"] = {"total_seconds": time.perf_counter() - t0,
                        "per_check": {str(r.id): r.seconds for r in results}}
    failed = [r for r in results if r.status == "fail"]
    report["failed"] = [f"#{r.id:02d} {r.name}" for r in failed]
    return report, (1 if failed else 0)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        x = float(x)
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, Fraction):
        return str(x)
    return x


def to_json(report: dict) -> str:
    return json.dumps(_jsonable(report), indent=2, sort_keys=True)


def report_schema() -> dict:
    return json.loads(resources.files(__package__).joinpath("report_schema.json").read_text())
