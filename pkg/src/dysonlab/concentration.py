"""Concentration-of-measure checks in the uniqueness regime.

Given the interaction-level uniqueness coefficient c < 1 and
D = 4/(1-c)^2, the unique Gibbs measure obeys

    exp-moment:  E e^{F - EF} <= e^{D ||dF||^2}
    tails:       P(F - EF >= t) <= e^{-2 t^2 / (D ||dF||^2)}
    moments:     E|F - EF|^m <= (D ||dF||^2 / 2)^{m/2} m Gamma(m/2)
    covariance:  |cov(f, g o S^i)| <= 1/4 sum_{jk} Dbar_jk d_k f d_{j-i} g

with ||dF||^2 the summed squared single-site oscillations and Dbar the
Neumann series of the bond-oscillation matrix.  Every check here evaluates
both sides on an exact window measure or a sampler stream; Monte Carlo
comparisons always carry their 3-sigma margin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import words as W
from .errors import RegimeError
from .gibbs import SampleStream, Window, WindowMeasure, single_site_kernels
from .model import PairInteraction, dobrushin_bar_c

__all__ = [
    "LocalFunction",
    "delta_norm",
    "DobrushinMatrices",
    "build_dobrushin_matrices",
    "gcb_check",
    "tail_check",
    "moment_check",
    "covariance_bound_check",
    "spec_kernel_lower_estimate",
]


@dataclass
class LocalFunction:
    """Real function of finitely many spins, with its oscillation profile."""

    support: tuple
    fn: callable
    name: str = "F"
    _profile: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.support = tuple(sorted(int(s) for s in self.support))

    @staticmethod
    def coordinate(site: int) -> "LocalFunction":
        return LocalFunction((site,), lambda cols: cols[:, 0].astype(float),
                             name=f"spin[{site}]")

    @staticmethod
    def magnetization(sites) -> "LocalFunction":
        sites = tuple(sites)
        return LocalFunction(sites, lambda cols: cols.sum(axis=1).astype(float),
                             name=f"magnetization[{len(sites)}]")

    @staticmethod
    def spin_product(sites) -> "LocalFunction":
        sites = tuple(sites)
        return LocalFunction(sites, lambda cols: cols.prod(axis=1).astype(float),
                             name="spin_product")

    @staticmethod
    def constant(c: float, site: int = 0) -> "LocalFunction":
        return LocalFunction((site,), lambda cols, c=c: np.full(len(cols), float(c)),
                             name=f"const[{c}]")

    def values_on(self, support_columns: np.ndarray) -> np.ndarray:
        """Evaluate on rows of spins ordered like ``support``."""
        return np.asarray(self.fn(support_columns), dtype=float)

    def delta_profile(self) -> np.ndarray:
        """Site oscillations delta_k F by exhaustive search over the support."""
        if self._profile is None:
            k = len(self.support)
            W.check_budget(2**k, "local-function support")
            vals = self.values_on(W.words_matrix(k)).reshape((2,) * k)
            prof = np.empty(k)
            for p in range(k):
                hi = vals.max(axis=p)
                lo = vals.min(axis=p)
                prof[p] = float(np.max(hi - lo))
            self._profile = prof
        return self._profile


def delta_norm(F: LocalFunction) -> float:
    """||dF||^2 = sum_k (delta_k F)^2, exact over the support."""
    prof = F.delta_profile()
    return float(np.sum(prof * prof))


# -- Dobrushin matrices -------------------------------------------------------


@dataclass
class DobrushinMatrices:
    """Bond-oscillation matrix on a site box and its truncated Neumann sum."""

    sites: np.ndarray
    Cbar: np.ndarray
    bar_c: float
    neumann_order: int
    neumann_remainder: float

    def index_of(self, site: int) -> int:
        i = int(site - self.sites[0])
        if not 0 <= i < len(self.sites):
            raise ValueError(f"site {site} outside the matrix box")
        return i

    def dbar_column(self, site: int) -> np.ndarray:
        """Column of Dbar = sum_{n<=order} Cbar^n by iterated products."""
        v = np.zeros(len(self.sites))
        v[self.index_of(site)] = 1.0
        acc = v.copy()
        for _ in range(self.neumann_order):
            v = self.Cbar @ v
            acc += v
        return acc

    def dbar_entry(self, site_i: int, site_j: int) -> float:
        return float(self.dbar_column(site_j)[self.index_of(site_i)])

    def dbar_row_sums(self) -> np.ndarray:
        v = np.ones(len(self.sites))
        acc = v.copy()
        for _ in range(self.neumann_order):
            v = self.Cbar @ v
            acc += v
        return acc


def build_dobrushin_matrices(inter: PairInteraction, lo: int, hi: int,
                             remainder_target: float = 1e-10) -> DobrushinMatrices:
    """Cbar on [lo, hi] with the Neumann order set by bar_c^n/(1-bar_c) < target.

    Restricting the lattice to the box only lowers Neumann entries, so bounds
    computed from this object are conservative for the infinite chain.
    """
    bar_c, _ = dobrushin_bar_c(inter)
    if bar_c >= 1.0:
        raise RegimeError("Dobrushin matrices need the uniqueness regime bar_c < 1")
    sites = np.arange(lo, hi + 1)
    n = len(sites)
    J = inter.coupling_weights(max(n - 1, 1))
    C = np.zeros((n, n))
    for d in range(1, n):
        val = J[d - 1]
        idx = np.arange(n - d)
        C[idx, idx + d] = val
        C[idx + d, idx] = val
    if bar_c == 0.0:
        order = 1
    else:
        order = max(1, math.ceil(math.log(remainder_target * (1 - bar_c))
                                 / math.log(bar_c)))
    remainder = bar_c ** (order + 1) / (1.0 - bar_c)
    return DobrushinMatrices(sites, C, bar_c, order, remainder)


# -- measure/stream plumbing ----------------------------------------------------


def _support_columns(source, F: LocalFunction) -> np.ndarray:
    if isinstance(source, WindowMeasure):
        win = source.window
        cols = [s - win.lo for s in F.support]
        if any(c < 0 or c >= win.size for c in cols):
            raise ValueError("function support must sit inside the window")
        return source.words()[:, cols]
    if isinstance(source, SampleStream):
        win = source.window
        cols = [s - win.lo for s in F.support]
        if any(c < 0 or c >= win.size for c in cols):
            raise ValueError("function support must sit inside the window")
        return source.snapshots[:, cols]
    raise TypeError("source must be a WindowMeasure or a SampleStream")


def _mean_and_sigma(source, values: np.ndarray, probs=None):
    """(mean, 3-sigma margin) -- zero margin for exact measures."""
    if probs is not None:
        return float(np.dot(probs, values)), 0.0
    n_batches = 32
    usable = (len(values) // n_batches) * n_batches
    if usable < n_batches:
        raise ValueError("not enough samples for batch-means errors")
    batches = values[:usable].reshape(n_batches, -1).mean(axis=1)
    return float(batches.mean()), 3.0 * float(batches.std(ddof=1) / math.sqrt(n_batches))


def _evaluate(source, F: LocalFunction):
    cols = _support_columns(source, F)
    values = F.values_on(cols)
    probs = source.probs if isinstance(source, WindowMeasure) else None
    return values, probs


def _one_sided(lhs: float, rhs: float, margin: float) -> bool:
    """lhs <= rhs with the MC margin plus a machine-epsilon allowance."""
    slack = 64.0 * np.finfo(float).eps * max(1.0, abs(rhs))
    return bool(lhs <= rhs + margin + slack)


def gcb_check(source, F: LocalFunction, D: float) -> dict:
    """Exponential-moment inequality report {lhs, rhs, margin, passed}.

    ``rhs_log`` carries the exact exponent; rhs itself saturates to inf when
    D ||dF||^2 exceeds the float range (the check is then trivially one-sided).
    """
    values, probs = _evaluate(source, F)
    EF = float(np.dot(probs, values)) if probs is not None else float(values.mean())
    lhs, margin = _mean_and_sigma(source, np.exp(values - EF), probs)
    rhs_log = D * delta_norm(F)
    rhs = math.exp(rhs_log) if rhs_log < 700.0 else math.inf
    return {
        "check": "gcb",
        "function": F.name,
        "lhs": lhs,
        "rhs": rhs,
        "rhs_log": rhs_log,
        "margin": margin,
        "passed": _one_sided(lhs, rhs, margin) if math.isfinite(rhs)
        else bool(math.isfinite(lhs)),
    }


def tail_check(source, F: LocalFunction, D: float, t_grid) -> list[dict]:
    """Upper-tail inequality reports, one per threshold."""
    values, probs = _evaluate(source, F)
    EF = float(np.dot(probs, values)) if probs is not None else float(values.mean())
    dn = delta_norm(F)
    out = []
    for t in t_grid:
        t = float(t)
        indic = (values - EF >= t).astype(float)
        lhs, margin = _mean_and_sigma(source, indic, probs)
        rhs = 1.0 if (t == 0 or dn == 0) else math.exp(-2.0 * t * t / (D * dn))
        out.append(
            {
                "check": "tail",
                "function": F.name,
                "t": t,
                "lhs": lhs,
                "rhs": rhs,
                "margin": margin,
                "passed": _one_sided(lhs, rhs, margin),
            }
        )
    return out


def moment_check(source, F: LocalFunction, D: float, m_grid) -> list[dict]:
    """Centered absolute-moment inequality reports, one per order."""
    values, probs = _evaluate(source, F)
    EF = float(np.dot(probs, values)) if probs is not None else float(values.mean())
    dn = delta_norm(F)
    out = []
    for m in m_grid:
        m = int(m)
        lhs, margin = _mean_and_sigma(source, np.abs(values - EF) ** m, probs)
        rhs = (D * dn / 2.0) ** (m / 2.0) * m * math.gamma(m / 2.0)
        out.append(
            {
                "check": "moment",
                "function": F.name,
                "m": m,
                "lhs": lhs,
                "rhs": rhs,
                "margin": margin,
                "passed": _one_sided(lhs, rhs, margin),
            }
        )
    return out


def covariance_bound_check(inter: PairInteraction, window: Window, i_grid,
                           box_halfwidth: int = 200,
                           source: SampleStream | None = None) -> list[dict]:
    """Spin-spin covariance against the Neumann-series bound, per lag.

    cov(sigma_0, sigma_i) is exact under the window measure (or estimated
    with a 3-sigma batch margin when a sampler ``source`` is supplied); the
    bound is Dbar_{i,0} (the double oscillation sum collapses for coordinate
    spins) plus the Neumann remainder.
    """
    from .gibbs import window_gibbs

    if window.lo > 0 or window.hi < 0:
        raise ValueError("window must contain the origin")
    if source is None:
        measure = window_gibbs(inter, window)
    mats = build_dobrushin_matrices(inter, -box_halfwidth, box_halfwidth)
    col0 = mats.dbar_column(0)
    out = []
    for i in i_grid:
        i = int(i)
        if not window.lo <= i <= window.hi:
            raise ValueError("lag outside window")
        if source is None:
            cov, margin = measure.covariance(0, i), 0.0
        else:
            a = source.snapshots[:, -source.window.lo].astype(float)
            b = source.snapshots[:, i - source.window.lo].astype(float)
            prod = a * b - a.mean() * b.mean()
            cov, margin = _mean_and_sigma(source, prod)
        bound = float(col0[mats.index_of(i)]) + mats.neumann_remainder
        out.append(
            {
                "check": "covariance",
                "lag": i,
                "cov": cov,
                "bound": bound,
                "margin": margin,
                "passed": _one_sided(abs(cov), bound, margin),
            }
        )
    return out


def spec_kernel_lower_estimate(inter: PairInteraction, i: int, j: int,
                               window: Window, probes: int = 256,
                               seed: int = 0) -> dict:
    """Probed lower estimate of the kernel interdependence entry C(gamma)_ij.

    Sups the total-variation response of the site-i conditional to a spin
    change at j over random boundary words; a lower estimate because the
    true sup ranges over all boundary conditions.  Always <= Cbar_ij = J(|i-j|).
    """
    if i == j:
        raise ValueError("need two distinct sites")
    kernel = single_site_kernels(inter, window)
    rng = np.random.default_rng(seed)
    best = 0.0
    n = window.size
    for _ in range(probes):
        word = rng.choice((-1, 1), size=n).astype(np.int8)
        w_plus = word.copy()
        w_plus[j - window.lo] = 1
        w_minus = word.copy()
        w_minus[j - window.lo] = -1
        gap = abs(kernel(i, 1, w_plus) - kernel(i, 1, w_minus))
        best = max(best, gap)
    return {"estimate": best, "probes": probes, "site_i": i, "site_j": j}
