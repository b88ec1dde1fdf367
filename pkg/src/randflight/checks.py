"""Invariant suites run by ``randflight verify``.

Every statistical check compares a Monte Carlo frequency with its target at
``z`` standard errors. Full runs use ``z = 4`` (3 for the plain frequency
checks on direction outcomes). ``--quick`` divides every sample size by
``QUICK_DIVISOR`` and multiplies every ``z`` by ``QUICK_Z_FACTOR``; each suite
draws from its own fixed seed, so results are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize, stats

from . import geometry, mathkit
from .analysis import envelope_violation_rate
from .directions import DirectionModel, projection_length, sample_directions
from .ppp import ByTime, sample_by_inversion, sample_by_thinning
from .rates import RateFunction, envelope_constants, inverse_cumulative_intensity
from .rng import make_rng, substream

__all__ = ["CheckResult", "Scale", "FULL", "QUICK", "SUITES", "run_suite", "format_table"]

QUICK_DIVISOR = 10
QUICK_Z_FACTOR = 1.25


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    statistic: float
    threshold: str
    passed: bool


@dataclass(frozen=True)
class Scale:
    divisor: int = 1
    z_factor: float = 1.0

    def n(self, full: int) -> int:
        return max(1, full // self.divisor)

    def z(self, base: float = 4.0) -> float:
        return base * self.z_factor


FULL = Scale()
QUICK = Scale(QUICK_DIVISOR, QUICK_Z_FACTOR)


def _le(suite, name, stat, bound):
    return CheckResult(suite, name, float(stat), f"<= {bound:.6g}", bool(stat <= bound))


def _ge(suite, name, stat, bound):
    return CheckResult(suite, name, float(stat), f">= {bound:.6g}", bool(stat >= bound))


def _freq_close(suite, name, hits, n, target, z):
    """|p_hat - target| within z binomial standard errors of the target law."""
    p_hat = hits / n
    se = math.sqrt(max(target * (1 - target), 1.0 / n) / n)
    return CheckResult(
        suite, name, p_hat, f"{target:.6g} +/- {z * se:.3g}", bool(abs(p_hat - target) <= z * se)
    )


# -- rates --------------------------------------------------------------------


def suite_rates(scale: Scale = FULL) -> list[CheckResult]:
    s = "rates"
    out = []
    pl = RateFunction.power_law(0.5)
    out.append(_le(s, "PowerLaw(0.5) Lambda(4) = 4", abs(pl.cumulative(4.0) - 4.0), 1e-12))
    out.append(_le(s, "Constant(2) Lambda(3) = 6", abs(RateFunction.constant(2.0).cumulative(3.0) - 6.0), 1e-12))
    c0, c1 = envelope_constants(0.5)
    out.append(_le(s, "envelope constants alpha=0.5 = (1/9, 1)", max(abs(c0 - 1 / 9), abs(c1 - 1)), 1e-15))

    for beta in (2.0, 2.5):
        lp = RateFunction.log_power(beta)
        for T in (math.e**2, 1e3, 1e6):
            ref, _ = integrate.quad(lambda v: math.exp(v - beta * math.log(v)), 1.0, math.log(T),
                                    epsabs=0.0, epsrel=1e-13, limit=200)
            rel = abs(lp.cumulative(T) - ref) / ref
            out.append(_le(s, f"LogPower({beta}) Lambda({T:.4g}) vs adaptive Gauss-Kronrod", rel, 1e-8))

    full_grid = np.logspace(-3, 6, 60)
    families = [RateFunction.power_law(0.5), RateFunction.power_law(0.75), RateFunction.power_law(1.0),
                RateFunction.log_power(2.0), RateFunction.log_power(2.5), RateFunction.constant(2.0)]
    for rf in families:
        label = ",".join(f"{k}={v}" for k, v in rf.params().items())
        # Lambda = ln T for alpha = 1: u beyond ~700 has no finite preimage
        grid = full_grid[full_grid <= 700.0] if rf.alpha == 1.0 else full_grid
        T = rf.inverse(grid)
        err = np.max(np.abs(rf.cumulative(T) - grid) / np.maximum(1.0, grid))
        out.append(_le(s, f"round trip Lambda(Lambda^-1(u)) [{label}]", err, 1e-8))
        Ts = np.array([inverse_cumulative_intensity(rf, u) for u in grid[::6]])
        err = np.max(np.abs(rf.cumulative(Ts) - grid[::6]) / np.maximum(1.0, grid[::6]))
        out.append(_le(s, f"round trip, bracketing route [{label}]", err, 1e-8))

    for beta in (2.5, 3.0):
        lp = RateFunction.log_power(beta)
        Ts = np.array([1e6, 1e8, 1e10])
        ratio = lp.cumulative(Ts) / (Ts * np.log(Ts) ** -beta)
        toward_one = bool(np.all(np.diff(np.abs(ratio - 1.0)) < 0))
        ok = toward_one and 0.9 <= ratio[-1] <= 1.3
        out.append(CheckResult(s, f"LogPower({beta}) Lambda(T) / (T (ln T)^-beta) at 1e10",
                               float(ratio[-1]), "in [0.9, 1.3], |ratio-1| decreasing", ok))
    return out


# -- ppp ----------------------------------------------------------------------


def suite_ppp(scale: Scale = FULL) -> list[CheckResult]:
    s = "ppp"
    out = []
    z = scale.z()
    rf = RateFunction.power_law(0.5)
    R = scale.n(50_000)
    counts = np.array([len(sample_by_inversion(rf, ByTime(100.0), substream(101, i))) for i in range(R)])
    out.append(_le(s, "mean N(100), alpha=0.5 (Lambda = 20)", abs(counts.mean() - 20.0), z * math.sqrt(20.0 / R)))
    p = poisson_gof_pvalue(counts, 20.0)
    out.append(_ge(s, "chi-square N(100) vs Poisson(20), p-value", p, 1e-3))

    thin = np.array([len(sample_by_thinning(rf, (1.0, 100.0), 1.0, substream(102, i))) for i in range(R)])
    out.append(_le(s, "thinning mean count on [1,100] (target 18)", abs(thin.mean() - 18.0), z * math.sqrt(18.0 / R)))
    inv_window = np.array([np.count_nonzero(sample_by_inversion(rf, ByTime(100.0), substream(103, i)).times >= 1.0)
                           for i in range(R)])
    p = two_sample_count_pvalue(inv_window, thin)
    out.append(_ge(s, "inversion vs thinning counts on [1,100], chi-square p-value", p, 1e-3))

    lp = RateFunction.log_power(2.0)
    Rk = scale.n(10_000)
    first_inv, first_thin = [], []
    for i in range(Rk):
        t = sample_by_inversion(lp, ByTime(1000.0), substream(104, i)).times
        if len(t):
            first_inv.append(t[0])
        t = sample_by_thinning(lp, (math.e, 1000.0), 1.0, substream(105, i)).times
        if len(t):
            first_thin.append(t[0])
    p = stats.ks_2samp(first_inv, first_thin).pvalue
    out.append(_ge(s, "LogPower(2) first point, inversion vs thinning KS p-value", p, 1e-3))

    Re = scale.n(10_000)
    low, high = envelope_violation_rate(rf, 200, Re, 106)
    b_low, b_high = 2 * math.exp(-200 / 18), 2 * math.exp(-200 / 6)
    out.append(_le(s, "tau_200 <= c0 200^2 rate", low, b_low + z * math.sqrt(b_low * (1 - b_low) / Re)))
    out.append(_le(s, "tau_200 >= c1 200^2 rate", high, b_high + z * math.sqrt(b_high * (1 - b_high) / Re)))
    return out


def poisson_gof_pvalue(counts, mu: float, min_expected: float = 5.0) -> float:
    """Chi-square goodness of fit of integer counts against Poisson(mu), tails pooled."""
    counts = np.asarray(counts)
    n = counts.size
    lo = int(stats.poisson.ppf(1e-9, mu))
    hi = int(stats.poisson.isf(1e-9, mu))
    # pool tails until every cell expects >= min_expected
    while n * stats.poisson.cdf(lo, mu) < min_expected:
        lo += 1
    while n * stats.poisson.sf(hi - 1, mu) < min_expected:
        hi -= 1
    edges = np.arange(lo, hi + 1)
    probs = np.concatenate(([stats.poisson.cdf(lo, mu)], stats.poisson.pmf(edges[1:-1], mu),
                            [stats.poisson.sf(hi - 1, mu)]))
    clipped = np.clip(counts, lo, hi)
    observed = np.array([np.count_nonzero(clipped == k) for k in edges])
    return float(stats.chisquare(observed, n * probs / probs.sum()).pvalue)


def two_sample_count_pvalue(a, b, min_expected: float = 5.0) -> float:
    """Chi-square homogeneity test of two samples of integer counts."""
    a = np.asarray(a)
    b = np.asarray(b)
    values = np.arange(min(a.min(), b.min()), max(a.max(), b.max()) + 1)
    table = np.array([[np.count_nonzero(a == v) for v in values], [np.count_nonzero(b == v) for v in values]])
    # merge sparse columns into their neighbours
    cols = []
    acc = np.zeros(2, dtype=int)
    for col in table.T:
        acc = acc + col
        if acc.sum() >= 2 * min_expected * 2:
            cols.append(acc)
            acc = np.zeros(2, dtype=int)
    if acc.sum():
        if cols:
            cols[-1] = cols[-1] + acc
        else:
            cols.append(acc)
    if len(cols) < 2:
        return 1.0
    return float(stats.chi2_contingency(np.array(cols).T)[1])


# -- directions ---------------------------------------------------------------


def suite_directions(scale: Scale = FULL) -> list[CheckResult]:
    s = "directions"
    out = []
    rng = make_rng(201)
    z = scale.z()
    N = scale.n(200_000)
    for d in (3, 4, 6):
        ell = projection_length(sample_directions(DirectionModel.sphere(d), N, rng))
        for gamma in (0.3, 0.6):
            target = mathkit.sphere_projection_law(d, gamma)
            out.append(_freq_close(s, f"P(l >= {gamma}) on S^{d - 1}", int(np.count_nonzero(ell >= gamma)), N, target, z))
    ell = projection_length(sample_directions(DirectionModel.sphere(2), 1000, rng))
    out.append(_le(s, "d=2: projection length is 1", float(np.max(np.abs(ell - 1.0))), 1e-12))

    for d in range(3, 11):
        target = 0.7
        gamma = math.sqrt(1.0 - target ** (1.0 / (d / 2.0 - 1.0)))
        ell = projection_length(sample_directions(DirectionModel.sphere(d), N // 4, rng))
        out.append(_ge(s, f"some gamma>0 with P(l >= gamma) >= 2/3, d={d} (gamma={gamma:.3f})",
                       float(np.mean(ell >= gamma)), 2.0 / 3.0))

    z3 = scale.z(3.0)
    M = scale.n(100_000)
    for d in (1, 2):
        f = sample_directions(DirectionModel.orthogonal(d), M, rng)
        for j in range(d):
            for sign in (1.0, -1.0):
                hits = int(np.count_nonzero(f[:, j] == sign))
                out.append(_freq_close(s, f"orthogonal d={d}: P(f = {'+' if sign > 0 else '-'}e{j + 1})", hits, M, 1 / (2 * d), z3))
        reverse = int(np.count_nonzero(np.all(f[1:] == -f[:-1], axis=1)))
        out.append(_freq_close(s, f"orthogonal d={d}: P(f_k = -f_(k-1))", reverse, M - 1, 1 / (2 * d), z))

    f = sample_directions(DirectionModel.sphere(3), N, rng)
    norms = np.sqrt(np.einsum("ij,ij->i", f, f))
    out.append(_le(s, "sphere d=3: | |f| - 1 |", float(np.max(np.abs(norms - 1.0))), 1e-12))
    for d in (3, 5):
        f = sample_directions(DirectionModel.sphere(d), N, rng)
        sq = f**2
        worst = float(np.max(np.abs(sq.mean(axis=0) - 1.0 / d) / (sq.std(axis=0) / math.sqrt(N))))
        out.append(_le(s, f"sphere d={d}: coordinate second moments = 1/d (max z-score)", worst, z))

    a = sample_directions(DirectionModel.sphere(2), N // 4, rng)
    b = sample_directions(DirectionModel.sphere(2, method="angle"), N // 4, rng)
    p = stats.ks_2samp(np.arctan2(a[:, 1], a[:, 0]), np.arctan2(b[:, 1], b[:, 0])).pvalue
    out.append(_ge(s, "d=2 Gaussian vs angle sampler, KS p-value", p, 1e-3))
    return out


# -- geometry -----------------------------------------------------------------


def _min_sup_norm(p, q):
    # sup-norm along the segment is convex in t; bounded Brent finds its minimum
    res = optimize.minimize_scalar(lambda t: np.max(np.abs(p + t * (q - p))), bounds=(0.0, 1.0),
                                   method="bounded", options={"xatol": 1e-13})
    return min(res.fun, np.max(np.abs(p)), np.max(np.abs(q)))


def suite_geometry(scale: Scale = FULL) -> list[CheckResult]:
    s = "geometry"
    out = []
    rng = make_rng(301)
    z = scale.z()
    N = scale.n(1_000_000)
    for r in (1.5, 2.0, 5.0):
        hits = int(np.count_nonzero(geometry.ray_hits_disc((r, 0.0), rng.uniform(-np.pi, np.pi, N))))
        target = mathkit.ray_hit_probability(r)
        out.append(_freq_close(s, f"ray from r={r} hits unit disc (target arcsin(1/r)/pi)", hits, N, target, z))
        se = math.sqrt(target * (1 - target) / N)
        out.append(_le(s, f"ray from r={r}: frequency <= 1/(2r) + {z:g}se", hits / N, 1 / (2 * r) + z * se))

    M = scale.n(20_000)
    samples = 2_000
    P = rng.uniform(-3, 3, size=(M, 3))
    Q = rng.uniform(-3, 3, size=(M, 3))
    exact = geometry.segments_hit_box(P, Q, 1.0)
    t = np.linspace(0.0, 1.0, samples)
    brute = np.array([np.any(np.all(np.abs(p + t[:, None] * (q - p)) <= 1.0, axis=1)) for p, q in zip(P, Q)])
    misses = int(np.count_nonzero(brute & ~exact))
    out.append(_le(s, "segment/box: hits found by sampling but not by clipping", misses, 0))
    extra = np.flatnonzero(exact & ~brute)
    worst = max((_min_sup_norm(P[i], Q[i]) - 1.0 for i in extra), default=0.0)
    out.append(_le(s, "segment/box: clipping-only hits, min sup-norm - rho", worst, 1e-9))

    P2 = rng.normal(size=(M, 2)) * 3
    Q2 = rng.normal(size=(M, 2)) * 3
    ab = geometry.segments_hit_disc(P2, Q2, 1.0)
    ba = geometry.segments_hit_disc(Q2, P2, 1.0)
    out.append(_le(s, "segment/disc symmetric in endpoints (disagreements)", int(np.count_nonzero(ab != ba)), 0))
    theta = rng.uniform(0, 2 * np.pi, M)
    c, sn = np.cos(theta), np.sin(theta)
    rot = lambda X: np.column_stack((c * X[:, 0] - sn * X[:, 1], sn * X[:, 0] + c * X[:, 1]))
    d0 = geometry.segment_min_distance(P2, Q2)
    d1 = geometry.segment_min_distance(rot(P2), rot(Q2))
    out.append(_le(s, "segment/disc distance rotation invariant", float(np.max(np.abs(d0 - d1))), 1e-9))

    ok = geometry.ring_index((0, 0)) == 0 and geometry.ring_index((1.5, 0)) == 1 and geometry.ring_index((0, 3)) == 3
    out.append(CheckResult(s, "ring index examples (0,0)->0, (1.5,0)->1, (0,3)->3", float(ok), "== 1", ok))
    return out


# -- mathkit ------------------------------------------------------------------


POISSON_GRID = [(mu, x) for mu in (5.0, 9.0, 20.0) for x in (2.0, 4.0, 6.0, 10.0)]
HOEFFDING_GRID = [(m, eps) for m in (100, 1000) for eps in (0.02, 0.05, 0.1)]


def suite_mathkit(scale: Scale = FULL) -> list[CheckResult]:
    s = "mathkit"
    out = []
    rng = make_rng(401)
    z = scale.z()
    for x_max in (100.0, 1000.0):
        rep = mathkit.verify_j0_bound(x_max, 1e-3)
        out.append(_le(s, f"max(|J0| - G) on {rep.grid}", rep.max_violation, 0.0))
    xs = rng.uniform(0.0, 1000.0, scale.n(100))
    err = float(np.max(np.abs(mathkit.bessel_j0(xs) - mathkit.j0_quadrature(xs))))
    out.append(_le(s, "J0 vs trapezoid quadrature oracle (random x in [0,1000])", err, 1e-10))
    zero = optimize.bisect(mathkit.bessel_j0, 2.0, 3.0, xtol=1e-15)
    out.append(_le(s, "first zero of J0 vs 2.404825557695773", abs(zero - 2.404825557695773), 1e-12))

    N = scale.n(1_000_000)
    for mu, x in POISSON_GRID:
        X = rng.poisson(mu, N)
        p_hat = np.mean(np.abs(X - mu) >= x)
        se = math.sqrt(p_hat * (1 - p_hat) / N)
        out.append(_le(s, f"P(|Poi({mu:g}) - {mu:g}| >= {x:g})", p_hat, mathkit.poisson_tail_bound(mu, x) + z * se))
    Nh = scale.n(200_000)
    for m, eps in HOEFFDING_GRID:
        S = rng.binomial(m, 0.5, Nh) / m
        p_hat = np.mean(np.abs(S - 0.5) >= eps)
        se = math.sqrt(p_hat * (1 - p_hat) / Nh)
        out.append(_le(s, f"Hoeffding m={m} eps={eps}", p_hat, mathkit.hoeffding_bound(m, eps) + z * se))

    rs = np.logspace(np.log10(1.0 + 1e-9), 4, 400)
    gap = max(mathkit.ray_hit_probability(r) - 1 / (2 * r) for r in rs)
    out.append(_le(s, "arcsin(1/r)/pi - 1/(2r) over r in (1, 1e4]", gap, 0.0))
    return out


SUITES = {
    "rates": suite_rates,
    "ppp": suite_ppp,
    "directions": suite_directions,
    "geometry": suite_geometry,
    "mathkit": suite_mathkit,
}


def run_suite(name: str, quick: bool = False) -> list[CheckResult]:
    scale = QUICK if quick else FULL
    if name == "all":
        return [r for fn in SUITES.values() for r in fn(scale)]
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](scale)


def format_table(results: list[CheckResult]) -> str:
    rows = [("suite", "check", "statistic", "threshold", "result")]
    rows += [(r.suite, r.name, f"{r.statistic:.6g}", r.threshold, "PASS" if r.passed else "FAIL") for r in results]
    widths = [max(len(row[i]) for row in rows) for i in range(5)]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows)
