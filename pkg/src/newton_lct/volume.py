"""Volumes of sublevel sets {lam*phi - log|q| < log r} inside a polydisc.

With z_j = exp(t_j + i theta_j) the angular factor (2 pi)^n integrates out and

    Vol = (2 pi)^n  int_{T(r)} exp(2 sum t) dt,
    T(r) = {t <= log(delta) : lam * max_i(<c_i,t> + d_i) - max_k <w_k,t> < log r}.

Substituting t = log(delta) * 1 - rho * D with D on the standard simplex gives
sum t = n log(delta) - rho and dt = rho^(n-1) d rho dD, so

    Vol = (2 pi)^n delta^(2n) int_simplex G(D) dD,
    G(D) = int_{R(D)} rho^(n-1) exp(-2 rho) d rho.

Along each ray the condition is, for some k, a system of linear inequalities
in rho, so R(D) is a finite union of intervals and G(D) is a closed-form
incomplete gamma expression. The remaining integral over directions is done by
adaptive quadrature (n <= 2) or by seeded Monte Carlo with D ~ Dirichlet(1,...,1).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np
from scipy import integrate, stats

from .errors import RefusedComputation
from .kiselman import ToricPsh, singularity_exponent
from .monomial import MonomialIdeal
from .rational import as_fraction

MAX_DIM = 4
QUADRATURE = "quadrature"
MONTE_CARLO = "monte-carlo"


@dataclass(frozen=True)
class VolumeConfig:
    delta: float = 0.5
    method: str = "auto"  # auto: quadrature for n <= 2, Monte Carlo above
    samples: int = 10**6
    seed: int = 0
    threads: int = 1
    stratum_size: int = 1 << 17
    r_min: float = 1e-6
    r_max: float = 1e-2
    points: int = 20


@dataclass(frozen=True)
class VolumeEstimate:
    values: np.ndarray
    stderr: np.ndarray
    method: str


class _Ray:
    """Coefficients of the ray condition for fixed (phi, q, lam, delta)."""

    def __init__(self, phi: ToricPsh, q: MonomialIdeal, lam: float, delta: float):
        if q.is_zero:
            raise ValueError("q must be nonzero")
        self.n = phi.dim
        a = math.log(delta)
        C = np.array([[float(x) for x in c] for c in phi.exponents])  # pieces x n
        d = np.array([float(dd) for _, dd in phi.pieces])
        W = np.array([[float(x) for x in w] for w in q.generators])  # gens x n
        self.lam = float(lam)
        self.C, self.W = C, W
        self.A = a * C.sum(axis=1) + d  # phi piece i along the ray: A_i - rho B_i
        self.Cq = a * W.sum(axis=1)  # q piece k: Cq_k - rho E_k

    def G(self, D: np.ndarray, log_r: np.ndarray) -> np.ndarray:
        """G(D) for directions D (N x n) and each log r; returns (len(log_r), N)."""
        lam = self.lam
        B = D @ self.C.T  # N x pieces
        E = D @ self.W.T  # N x gens
        K = self.W.shape[0]
        # condition for generator k: gamma_ik + rho * beta_ik < log r for all i
        beta = E[:, None, :] - lam * B[:, :, None]  # N x pieces x K
        gamma = lam * self.A[None, :, None] - self.Cq[None, None, :]
        tiny = 1e-12
        pos = beta > tiny
        neg = beta < -tiny
        zer = ~(pos | neg)
        inv = np.where(zer, 0.0, 1.0 / np.where(zer, 1.0, beta))
        off = -gamma * inv
        # each boundary is a line in log r: rho_i(L) = L * slope_i + off_i;
        # the neutral slope/offset pairs make inactive pieces drop out of max/min
        lo_slope, lo_off = np.where(neg, inv, 0.0), np.where(neg, off, -np.inf)
        hi_slope, hi_off = np.where(pos, inv, 0.0), np.where(pos, off, np.inf)
        zero_gamma = np.where(zer, np.broadcast_to(gamma, beta.shape), -np.inf).max(axis=1)  # N x K
        P = beta.shape[1]
        out = np.empty((len(log_r), D.shape[0]))
        for m, L in enumerate(log_r):
            lo = np.zeros((D.shape[0], K))
            hi = np.full((D.shape[0], K), np.inf)
            for i in range(P):
                np.maximum(lo, L * lo_slope[:, i] + lo_off[:, i], out=lo)
                np.minimum(hi, L * hi_slope[:, i] + hi_off[:, i], out=hi)
            hi[zero_gamma >= L] = 0.0
            total = np.zeros(D.shape[0])
            for size in range(1, K + 1):
                sign = 1.0 if size % 2 else -1.0
                for S in combinations(range(K), size):
                    l = lo[:, S].max(axis=1)
                    h = hi[:, S].min(axis=1)
                    total += sign * _radial_mass(self.n, l, h)
            out[m] = total
        return out


def _upper_tail(n: int, x: np.ndarray) -> np.ndarray:
    """int_x^inf rho^(n-1) exp(-2 rho) d rho for integer n >= 1, x >= 0."""
    y = 2.0 * x
    with np.errstate(over="ignore", invalid="ignore"):
        s = np.zeros_like(y)
        term = np.ones_like(y)
        for k in range(n):
            if k:
                term = term * y / k
            s = s + term
        val = math.factorial(n - 1) / 2.0**n * np.exp(-y) * s
    return np.where(np.isinf(x), 0.0, val)


def _radial_mass(n, lo, hi):
    ok = hi > lo
    lo_ = np.where(ok, lo, 0.0)
    hi_ = np.where(ok, hi, 0.0)
    return np.where(ok, _upper_tail(n, lo_) - _upper_tail(n, hi_), 0.0)


def _check(phi: ToricPsh, lam, rs, delta):
    if phi.dim > MAX_DIM:
        raise RefusedComputation(f"volume experiments are limited to dimension <= {MAX_DIM}")
    if not 0 < delta <= 1:
        raise ValueError("polydisc radius delta must lie in (0, 1]")
    if float(lam) <= 0:
        raise ValueError("lam must be positive")
    for r in rs:
        if not 0 < r < 1:
            raise ValueError("r must lie in (0, 1)")


def _direction_kinks(ray: _Ray) -> list:
    """Points x in (0,1), D = (x, 1-x), where two linear ray slopes coincide."""
    lin = [row for row in ray.C * ray.lam] + [row for row in ray.W]
    pts = set()
    for f, g in combinations(lin, 2):
        h = f - g  # h(D) = h0 * x + h1 * (1 - x)
        if abs(h[0] - h[1]) > 1e-15:
            x = h[1] / (h[1] - h[0])
            if 0 < x < 1:
                pts.add(round(float(x), 15))
    return sorted(pts)


def _quadrature(ray: _Ray, log_r: np.ndarray) -> VolumeEstimate:
    n = ray.n
    if n == 1:
        g = ray.G(np.ones((1, 1)), log_r)[:, 0]
        return VolumeEstimate(g, np.zeros_like(g), QUADRATURE)
    if n != 2:
        raise RefusedComputation("quadrature is implemented for dimensions 1 and 2")
    kinks = _direction_kinks(ray)
    vals, errs = [], []
    for L in log_r:
        f = lambda x, L=L: float(ray.G(np.array([[x, 1.0 - x]]), [L])[0, 0])
        v, e = integrate.quad(f, 0.0, 1.0, points=kinks or None, limit=1000, epsabs=0.0, epsrel=1e-11)
        vals.append(v)
        errs.append(e)
    return VolumeEstimate(np.array(vals), np.array(errs), QUADRATURE)


def _stratum(ray: _Ray, log_r, seed_seq, size):
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    D = rng.dirichlet(np.ones(ray.n), size=size)
    g = ray.G(D, log_r)
    return g.sum(axis=1), (g * g).sum(axis=1)


def _monte_carlo(ray: _Ray, log_r, samples, seed, threads, stratum_size) -> VolumeEstimate:
    n_strata = max(1, -(-samples // stratum_size))
    sizes = [stratum_size] * (n_strata - 1) + [samples - stratum_size * (n_strata - 1)]
    seeds = np.random.SeedSequence(seed).spawn(n_strata)
    jobs = list(zip(seeds, sizes))
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(lambda js: _stratum(ray, log_r, *js), jobs))
    else:
        parts = [_stratum(ray, log_r, *js) for js in jobs]
    s1 = np.zeros(len(log_r))
    s2 = np.zeros(len(log_r))
    for a, b in parts:  # fixed stratum order keeps the sum reproducible
        s1 += a
        s2 += b
    mean = s1 / samples
    var = np.maximum(s2 / samples - mean**2, 0.0)
    # simplex of directions has (n-1)-volume 1/(n-1)!
    scale = 1.0 / math.factorial(ray.n - 1)
    return VolumeEstimate(mean * scale, np.sqrt(var / samples) * scale, MONTE_CARLO)


def volume_estimates(
    phi: ToricPsh, q: MonomialIdeal | None, lam, rs, config: VolumeConfig = VolumeConfig()
) -> VolumeEstimate:
    if q is None:
        q = MonomialIdeal.unit(phi.dim)
    rs = [float(r) for r in rs]
    _check(phi, lam, rs, config.delta)
    ray = _Ray(phi, q, float(as_fraction(lam)) if not isinstance(lam, float) else lam, config.delta)
    log_r = np.log(np.array(rs))
    method = config.method
    if method == "auto":
        method = QUADRATURE if phi.dim <= 2 else MONTE_CARLO
    if method == QUADRATURE:
        est = _quadrature(ray, log_r)
    elif method == MONTE_CARLO:
        est = _monte_carlo(ray, log_r, config.samples, config.seed, config.threads, config.stratum_size)
    else:
        raise ValueError(f"unknown method {method!r}")
    factor = (2 * math.pi) ** ray.n * config.delta ** (2 * ray.n)
    return VolumeEstimate(est.values * factor, est.stderr * factor, est.method)


def sublevel_volume(phi, q, lam, r, delta=0.5, method="auto", samples=10**6, seed=0, threads=1) -> float:
    cfg = VolumeConfig(delta=delta, method=method, samples=samples, seed=seed, threads=threads)
    return float(volume_estimates(phi, q, lam, [r], cfg).values[0])


@dataclass
class VolumeProfile:
    phi: ToricPsh
    q: MonomialIdeal
    lam: Fraction
    rs: np.ndarray
    volumes: np.ndarray
    stderr: np.ndarray
    slope: float
    slope_stderr: float
    confidence: tuple
    method: str
    config: VolumeConfig
    critical: bool = True
    notes: list = field(default_factory=list)

    def rows(self):
        for r, v in zip(self.rs, self.volumes):
            yield r, v, math.log(r), math.log(v) if v > 0 else float("-inf")

    def to_csv(self) -> str:
        lines = ["r,volume,log_r,log_volume"]
        for r, v, lr, lv in self.rows():
            lines.append(f"{r:.17g},{v:.17g},{lr:.17g},{lv:.17g}")
        return "\n".join(lines) + "\n"

    def summary(self) -> dict:
        from .rational import format_rational

        return {
            "lambda": format_rational(self.lam),
            "critical": self.critical,
            "method": self.method,
            "seed": self.config.seed,
            "samples": self.config.samples if self.method == MONTE_CARLO else None,
            "delta": self.config.delta,
            "slope": float(self.slope),
            "slope_stderr": float(self.slope_stderr),
            "slope_ci95": [float(self.confidence[0]), float(self.confidence[1])],
            "r": [float(r) for r in self.rs],
            "volume": [float(v) for v in self.volumes],
            "volume_stderr": [float(s) for s in self.stderr],
            "notes": list(self.notes),
            "float_outputs": True,
        }


def log_grid(r_min: float, r_max: float, points: int) -> np.ndarray:
    if points < 3 or not 0 < r_min < r_max < 1:
        raise ValueError("degenerate r grid")
    return np.logspace(math.log10(r_max), math.log10(r_min), points)


def slope_fit(
    phi: ToricPsh,
    q: MonomialIdeal | None = None,
    lam=None,
    config: VolumeConfig = VolumeConfig(),
    diagnostic: bool = False,
) -> VolumeProfile:
    """Least-squares slope of log Vol against log r on a logarithmic r grid.

    ``lam`` defaults to the singularity exponent c^q(phi); any other value is
    only accepted with ``diagnostic=True``.
    """
    if q is None:
        q = MonomialIdeal.unit(phi.dim)
    c = singularity_exponent(phi, q).value
    if not isinstance(c, Fraction):
        raise RefusedComputation("the singularity exponent is infinite; no critical sublevel sets")
    if lam is None:
        lam = c
    lam = as_fraction(lam)
    if lam != c and not diagnostic:
        raise ValueError(f"lam must equal the singularity exponent {c} outside diagnostic mode")
    rs = log_grid(config.r_min, config.r_max, config.points)
    est = volume_estimates(phi, q, lam, rs, config)
    if np.any(est.values <= 0):
        raise RefusedComputation("a sublevel volume vanished on the grid; cannot fit a slope")
    x, y = np.log(rs), np.log(est.values)
    fit = stats.linregress(x, y)
    tq = stats.t.ppf(0.975, len(rs) - 2)
    notes = []
    if lam == c:
        notes.append("critical exponent: slope near 2 expected; log-factor corrections are not excluded")
    return VolumeProfile(
        phi,
        q,
        lam,
        rs,
        est.values,
        est.stderr,
        float(fit.slope),
        float(fit.stderr),
        (float(fit.slope - tq * fit.stderr), float(fit.slope + tq * fit.stderr)),
        est.method,
        config,
        critical=lam == c,
        notes=notes,
    )
