"""Exponential sums over primes, the major/minor arc partition, and exact
discrete versions of the circle-method integrals.

Phases are reduced modulo 1 before multiplying out: a rational frequency
a/q contributes (a p mod q) / q exactly, and only the float offset part is
subject to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .arith import ArgumentError, euler_phi, mobius
from .gamma import GammaTables, divisor_cut
from .special_primes import RationalExponent

__all__ = [
    "KINDS",
    "DegeneratePartitionError",
    "AliasingError",
    "ExpSumSpec",
    "MajorArc",
    "ArcPartition",
    "eval_exp_sum",
    "exp_sum_grid",
    "m_sum",
    "omega_sigma_split",
    "build_arcs",
    "major_arc_error_S",
    "major_arc_error_Sc",
    "dft_representation_check",
    "parseval_check",
    "k_second_moment",
    "minor_arc_sup",
]

KINDS = ("plain", "ps_weighted", "residue_window", "integer_M", "window_M_J")

_CHUNK = 1 << 22  # complex terms evaluated per block
_DIRECT_GRID_MAX = 1 << 26  # beyond this many terms exp_sum_grid switches to an FFT


class DegeneratePartitionError(ArgumentError):
    pass


class AliasingError(ArgumentError):
    pass


@dataclass(frozen=True)
class ExpSumSpec:
    kind: str
    N: int
    d: int = 1
    l: int = 1
    J_lo: float = 1
    J_hi: float | None = None
    c: RationalExponent | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ArgumentError(f"unknown exponential sum kind {self.kind!r}")
        hi = self.N if self.J_hi is None else self.J_hi
        if self.kind in ("residue_window", "window_M_J") and not (1 <= self.J_lo <= hi <= self.N):
            raise ArgumentError("window must satisfy 1 <= J_lo <= J_hi <= N")
        if self.kind == "residue_window" and (self.d < 1 or math.gcd(self.d, self.l) != 1):
            raise ArgumentError("residue window needs gcd(d, l) = 1")
        if self.kind == "ps_weighted" and self.c is None:
            raise ArgumentError("ps_weighted sums need c")

    @property
    def hi(self) -> float:
        return self.N if self.J_hi is None else self.J_hi


def _support(spec: ExpSumSpec, tables: GammaTables) -> tuple[np.ndarray, np.ndarray]:
    """Positions and real weights of a prime exponential sum."""
    N = tables.check_N(spec.N)
    if spec.kind == "plain":
        p = tables.prime_list[tables.prime_list <= N]
        return p, np.log(p.astype(np.float64))
    if spec.kind == "ps_weighted":
        if spec.c != tables.c:
            raise ArgumentError("spec c does not match the tables")
        p = tables.ps_list[tables.ps_list <= N]
        return p, tables.weights("ps_weighted").values[p]
    if spec.kind == "residue_window":
        p = tables.prime_list
        p = p[(p >= spec.J_lo) & (p <= spec.hi) & (p % spec.d == spec.l % spec.d)]
        return p, np.log(p.astype(np.float64))
    raise ArgumentError(f"{spec.kind} has no prime support")


def _split_alpha(alpha) -> tuple[Fraction, float]:
    if isinstance(alpha, Fraction):
        return alpha - math.floor(alpha), 0.0
    if isinstance(alpha, int):
        return Fraction(0), 0.0
    a = float(alpha)
    if not math.isfinite(a):
        raise ArgumentError("alpha must be finite")
    return Fraction(0), a - math.floor(a)


def _phase(pos: np.ndarray, rat: Fraction, off: float) -> np.ndarray:
    """(rat * pos + off * pos) mod 1, the rational part in exact integers."""
    ph = np.mod(off * pos.astype(np.float64), 1.0)
    if rat:
        a, q = rat.numerator, rat.denominator
        ph = ph + (np.mod(pos * a, q)).astype(np.float64) / q
    return ph


def _weighted_sum(pos: np.ndarray, w: np.ndarray, rat: Fraction, off: float) -> complex:
    re, im = [], []
    for s in range(0, pos.size, _CHUNK):
        ang = 2.0 * np.pi * _phase(pos[s : s + _CHUNK], rat, off)
        re.append(math.fsum(w[s : s + _CHUNK] * np.cos(ang)))
        im.append(math.fsum(w[s : s + _CHUNK] * np.sin(ang)))
    return complex(math.fsum(re), math.fsum(im))


def m_sum(alpha, lo: int, hi: int, offset: float = 0.0) -> complex:
    """sum_{lo <= m <= hi} e(alpha m) in closed form.

    Uses e(alpha (lo+hi)/2) sin(pi alpha n) / sin(pi alpha) with alpha
    reduced to [-1/2, 1/2); the ratio has no cancellation problem, and for
    |alpha n| < 1e-8 its two-term Taylor expansion is exact in double.
    """
    lo, hi = int(math.ceil(lo)), int(math.floor(hi))
    n = hi - lo + 1
    if n <= 0:
        return 0j
    rat, off = _split_alpha(alpha)
    a = float(rat) + off + offset
    a -= math.floor(a + 0.5)
    if abs(a * n) < 1e-8:
        ratio = n * (1.0 - (math.pi * a) ** 2 * (n * n - 1) / 6.0)
    else:
        ratio = math.sin(math.pi * a * n) / math.sin(math.pi * a)
    centre = 0.5 * (lo + hi)
    ang = 2.0 * math.pi * math.fmod(a * centre, 1.0)
    return complex(math.cos(ang), math.sin(ang)) * ratio


def eval_exp_sum(spec: ExpSumSpec, alpha, tables: GammaTables | None = None, offset: float = 0.0) -> complex:
    """Evaluate the exponential sum described by ``spec`` at ``alpha + offset``.

    ``alpha`` may be a Fraction (phases then exact) or a float.
    """
    if spec.kind == "integer_M":
        return m_sum(alpha, 1, spec.N, offset)
    if spec.kind == "window_M_J":
        return m_sum(alpha, spec.J_lo, spec.hi, offset)
    if tables is None:
        raise ArgumentError("prime sums need tables")
    rat, off = _split_alpha(alpha)
    pos, w = _support(spec, tables)
    return _weighted_sum(pos, w, rat, off + offset)


def exp_sum_grid(spec: ExpSumSpec, M: int, tables: GammaTables, weights: np.ndarray | None = None) -> np.ndarray:
    """f(k/M) for k = 0..M-1.

    Small grids use exact integer phases (k p mod M) / M; large ones an
    inverse FFT of the dense weight vector.  ``weights`` (dense, indexed by
    position) overrides the weights implied by ``spec``.
    """
    pos, w = _support(spec, tables)
    if weights is not None:
        w = weights[pos]
    M = int(M)
    if pos.size * M > _DIRECT_GRID_MAX:
        dense = np.zeros(M)
        np.add.at(dense, pos % M, w)
        return M * np.fft.ifft(dense)
    out = np.empty(M, dtype=np.complex128)
    ks = np.arange(M, dtype=np.int64)
    step = max(1, _CHUNK // max(pos.size, 1))
    for s in range(0, M, step):
        k = ks[s : s + step]
        ph = np.mod(np.outer(k, pos), M).astype(np.float64) * (2.0 * np.pi / M)
        out[s : s + step] = np.cos(ph) @ w + 1j * (np.sin(ph) @ w)
    return out


# ---------------------------------------------------------------------------
# The Omega / Sigma split of S_c
# ---------------------------------------------------------------------------


def _split_coefficients(N: int, tables: GammaTables) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    c = tables.c
    g = float(c.gamma)
    p = tables.prime_list[tables.prime_list <= tables.check_N(N)]
    pf = p.astype(np.float64)
    base = np.power(pf, 1.0 - g) * np.log(pf)
    u = np.power(pf, g)
    v = np.power(pf + 1.0, g)
    # (p+1)^g - p^g without cancellation
    delta = u * np.expm1(g * np.log1p(1.0 / pf))
    # psi(-x^g) = {-x^g} - 1/2 = ceil(x^g) - x^g - 1/2, ceilings exact
    psi_u = (tables.special.ceil_gamma(p) - u) - 0.5
    psi_v = (tables.special.ceil_gamma(p + 1) - v) - 0.5
    return p, base * delta, base * (psi_v - psi_u)


def omega_sigma_split(alpha, N: int, tables: GammaTables, offset: float = 0.0) -> tuple[complex, complex]:
    """(Omega(alpha), Sigma(alpha)); their sum is S_c(alpha)."""
    rat, off = _split_alpha(alpha)
    p, w_om, w_si = _split_coefficients(N, tables)
    return _weighted_sum(p, w_om, rat, off + offset), _weighted_sum(p, w_si, rat, off + offset)


# ---------------------------------------------------------------------------
# Arcs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MajorArc:
    a: int
    q: int
    center: float
    half_width: float


@dataclass(frozen=True)
class ArcPartition:
    """Major arcs around a/q (q <= Q) of half-width 1/(q tau), on R/Z."""

    N: int
    Q: float
    tau: float
    major: tuple[MajorArc, ...]
    merged: tuple[tuple[float, float], ...] = field(repr=False)
    minor_measure: float

    @property
    def major_measure(self) -> float:
        return 1.0 - self.minor_measure

    @property
    def disjoint(self) -> bool:
        return len(self.merged) == len(self.major) + 1  # the 0/1 arc is split in two

    def contains(self, alpha: float) -> bool:
        """Is alpha (mod 1) in some major arc?"""
        x = alpha - math.floor(alpha)
        for arc in self.major:
            dist = abs(x - arc.center)
            if min(dist, 1.0 - dist) <= arc.half_width:
                return True
        return False

    def to_offset_window(self, alpha: float) -> float:
        """Representative of alpha in [1/tau, 1 + 1/tau)."""
        lo = 1.0 / self.tau
        return lo + ((alpha - lo) - math.floor(alpha - lo))

    def sample_minor(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """n points drawn uniformly from the minor arcs."""
        if self.minor_measure <= 0:
            raise DegeneratePartitionError("no minor arcs")
        gaps = []
        edges = sorted(self.merged)
        prev = 0.0
        for lo, hi in edges:
            if lo > prev:
                gaps.append((prev, lo))
            prev = max(prev, hi)
        if prev < 1.0:
            gaps.append((prev, 1.0))
        lengths = np.array([b - a for a, b in gaps])
        pick = rng.choice(len(gaps), size=n, p=lengths / lengths.sum())
        starts = np.array([gaps[i][0] for i in pick])
        pts = starts + rng.random(n) * lengths[pick]
        return np.array([self.to_offset_window(x) for x in pts])


def _farey(Q: float) -> Iterable[tuple[int, int]]:
    for q in range(1, int(math.floor(Q)) + 1):
        for a in range(q):
            if math.gcd(a, q) == 1:
                yield a, q


def build_arcs(N: int, B_param: float = 1.0) -> ArcPartition:
    """Q = (log N)^B, tau = N/Q, and the arcs around every a/q with q <= Q."""
    N = int(N)
    if N < 100:
        raise ArgumentError("arcs need N >= 100")
    if B_param <= 0:
        raise ArgumentError("B_param must be positive")
    Q = math.log(N) ** B_param
    tau = N / Q
    if Q >= tau:
        raise DegeneratePartitionError(f"Q = {Q:.4g} >= tau = {tau:.4g}; lower B_param")
    arcs = tuple(MajorArc(a, q, a / q, 1.0 / (q * tau)) for a, q in _farey(Q))
    pieces = []
    for arc in arcs:
        lo, hi = arc.center - arc.half_width, arc.center + arc.half_width
        if lo < 0:
            pieces += [(0.0, hi), (1.0 + lo, 1.0)]
        elif hi > 1:
            pieces += [(lo, 1.0), (0.0, hi - 1.0)]
        else:
            pieces.append((lo, hi))
    pieces.sort()
    merged: list[list[float]] = []
    for lo, hi in pieces:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    covered = math.fsum(hi - lo for lo, hi in merged)
    return ArcPartition(N, Q, tau, arcs, tuple(map(tuple, merged)), max(0.0, 1.0 - covered))


# ---------------------------------------------------------------------------
# Major arc approximations
# ---------------------------------------------------------------------------


def _mu_phi(q: int, tables: GammaTables) -> float:
    f = tables.factorizer.factorize(q)
    return mobius(f) / euler_phi(f)


def _check_arc(a: int, q: int, alpha_offset: float, tau: float | None):
    if q < 1 or math.gcd(a, q) != 1:
        raise ArgumentError("need gcd(a, q) = 1")
    if tau is not None and abs(alpha_offset) > 1.0 / (q * tau) * (1 + 1e-12):
        raise ArgumentError("offset lies outside the major arc")


def major_arc_error_S(
    N: int, a: int, q: int, alpha_offset: float, tables: GammaTables, tau: float | None = None
) -> tuple[complex, complex, float]:
    """S(a/q + alpha) against mu(q)/phi(q) M(alpha)."""
    _check_arc(a, q, alpha_offset, tau)
    actual = eval_exp_sum(ExpSumSpec("plain", N), Fraction(a, q), tables, alpha_offset)
    model = _mu_phi(q, tables) * m_sum(alpha_offset, 1, N)
    return actual, model, abs(actual - model)


def major_arc_error_Sc(
    N: int, a: int, q: int, alpha_offset: float, tables: GammaTables, tau: float | None = None
) -> tuple[complex, complex, float]:
    """S_c(a/q + alpha) against gamma mu(q)/phi(q) M(alpha)."""
    _check_arc(a, q, alpha_offset, tau)
    actual = eval_exp_sum(ExpSumSpec("ps_weighted", N, c=tables.c), Fraction(a, q), tables, alpha_offset)
    model = float(tables.c.gamma) * _mu_phi(q, tables) * m_sum(alpha_offset, 1, N)
    return actual, model, abs(actual - model)


# ---------------------------------------------------------------------------
# Discrete orthogonality
# ---------------------------------------------------------------------------


def _direct_triples(N: int, w1: np.ndarray, tables: GammaTables) -> float:
    mask = tables.prime_mask
    w2 = tables.weights("ps_weighted").values
    ps = tables.prime_list
    terms = []
    for p2 in tables.ps_list[tables.ps_list <= N - 4].tolist():
        p1 = ps[ps <= N - p2 - 2]
        p3 = N - p2 - p1
        ok = mask[p3]
        if ok.any():
            terms.append(w2[p2] * math.fsum(w1[p1[ok]] * np.log(p3[ok].astype(np.float64))))
    return math.fsum(terms)


def dft_representation_check(
    N: int, M_mod: int, tables: GammaTables, variant: str = "plain"
) -> tuple[float, float]:
    """(1/M) sum_k S1(k/M) S(k/M) S_c(k/M) e(-Nk/M) against the triple count.

    ``variant="plain"`` uses log weights in the first slot; ``"gamma"`` folds
    r(p1 - 1) into it, so both sides equal Gamma(N).
    """
    N, M = tables.check_N(N), int(M_mod)
    if M <= 3 * N:
        raise AliasingError(f"M_mod = {M} must exceed 3N = {3 * N}")
    if variant not in ("plain", "gamma"):
        raise ArgumentError(f"unknown variant {variant!r}")
    w1 = tables.weights("log" if variant == "plain" else "r_log").values
    s = exp_sum_grid(ExpSumSpec("plain", N), M, tables)
    s1 = s if variant == "plain" else exp_sum_grid(ExpSumSpec("plain", N), M, tables, weights=w1)
    sc = exp_sum_grid(ExpSumSpec("ps_weighted", N, c=tables.c), M, tables)
    k = np.arange(M, dtype=np.int64)
    twist = np.exp(-2j * np.pi * (np.mod(k * N, M).astype(np.float64) / M))
    prod = s1 * s * sc * twist
    via = math.fsum(prod.real) / M
    return via, _direct_triples(N, w1, tables)


def parseval_check(N: int, M: int, tables: GammaTables) -> tuple[float, float]:
    """((1/M) sum_k |S(k/M)|^2, sum_{p <= N} log^2 p) for M > N."""
    N, M = tables.check_N(N), int(M)
    if M <= N:
        raise AliasingError("Parseval needs M > N")
    s = exp_sum_grid(ExpSumSpec("plain", N), M, tables)
    lhs = math.fsum((s.real**2 + s.imag**2)) / M
    p = tables.prime_list[tables.prime_list <= N].astype(np.float64)
    return lhs, math.fsum(np.log(p) ** 2)


def _k_classes(N: int, A_param: float) -> list[tuple[int, int, float]]:
    D = divisor_cut(N, A_param)
    out = []
    m = 2
    while m < D:
        lo = 1.0 + m * N / D
        if lo <= N:
            out += [(m, 1, lo), (m, -1, lo)]
        m += 2
    return out


def k_second_moment(N: int, A_param: float, M: int, tables: GammaTables) -> dict[str, float]:
    """Discrete second moment of K = sum_{m < D, 2|m} sum_j chi(j) S_{4m, 1+jm; J_m}.

    Returns the DFT side, its exact evaluation sum_p log^2 p * c_p^2 (c_p the
    signed multiplicity of p across the classes), and the signed and
    absolute single-sum forms in which cross terms are dropped.
    """
    N, M = tables.check_N(N), int(M)
    if M <= N:
        raise AliasingError("second moment needs M > N")
    ps = tables.prime_list[tables.prime_list <= N]
    coef = np.zeros(N + 1)
    signed, absolute = [], []
    for m, j, lo in _k_classes(N, A_param):
        d, l = 4 * m, (1 + j * m) % (4 * m)
        sel = ps[(ps >= lo) & (ps % d == l)]
        coef[sel] += j
        l2 = math.fsum(np.log(sel.astype(np.float64)) ** 2)
        signed.append(j * l2)
        absolute.append(l2)
    w = np.zeros(N + 1)
    w[ps] = np.log(ps.astype(np.float64))
    k = exp_sum_grid(ExpSumSpec("plain", N), M, tables, weights=coef * w)
    dft = math.fsum(k.real**2 + k.imag**2) / M
    exact = math.fsum((coef[ps] * w[ps]) ** 2)
    return {
        "dft": dft,
        "exact": exact,
        "single_sum_signed": math.fsum(signed),
        "single_sum_absolute": math.fsum(absolute),
    }


def minor_arc_sup(
    N: int, B_param: float, tables: GammaTables, samples: int = 400, seed: int = 0
) -> tuple[float, float]:
    """max over sampled minor-arc alpha of |S(alpha)|/N and |S_c(alpha)|/N."""
    arcs = build_arcs(N, B_param)
    alphas = arcs.sample_minor(samples, np.random.default_rng(seed))
    plain = ExpSumSpec("plain", N)
    ps = ExpSumSpec("ps_weighted", N, c=tables.c)
    s = max(abs(eval_exp_sum(plain, float(a), tables)) for a in alphas)
    sc = max(abs(eval_exp_sum(ps, float(a), tables)) for a in alphas)
    return s / N, sc / N
