"""Crossing-bond decoupling: left-right energies, densities, and their bounds.

Removing every bond that crosses the origin splits the chain into two
independent half-lines; re-adding the bonds inside the square {1<=i<=N,
0<=j<=N} produces the truncated left-right energy

    W_N(xi, sigma) = - sum_{i=1}^{N} sum_{j=0}^{N} J(i+j) xi_{-i} sigma_j

and the reweighted half-line law with density proportional to the
xi-average of e^{-W_N}.  In the uniqueness regime those densities are
uniformly pinched between e^{-8 D beta^2 C1} and its reciprocal and
converge to the transfer-operator eigenfunction; both facts are exposed
here as computable objects.

Exact mode enumerates free-boundary window stand-ins for the two half-line
Gibbs measures (width N + margin, clamped to the enumeration budget) and
reduces the pair sum in fixed chunk order, so results are bit-stable.
Monte Carlo mode drives two heat-bath chains per side and reports
batch-means errors (32 batches).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import series
from . import words as W
from .errors import ConvergenceError, RegimeError
from .gibbs import Window, heat_bath_sampler, rhat, split_seed, window_gibbs
from .model import (
    PairInteraction,
    PotentialSpec,
    beta_dobrushin,
    dobrushin_bar_c,
    interaction_for,
)
from .serialize import dump_json, format_float, write_csv
from .tails import Tail, FREE
from .transfer import TransferModel

__all__ = [
    "BondOrder",
    "square_bonds",
    "left_right_energy",
    "left_right_energy_bonds",
    "variance_profile",
    "DensityBoundConstants",
    "density_bound_constants",
    "DensityEstimate",
    "density_estimate",
    "density_vs_eigenfunction",
    "density_eigenfunction_trend",
    "crossing_bond_diagnostics",
]

MAX_WINDOW_SITES = 20  # keeps every enumeration window within the 2^20 budget


# -- bond enumeration --------------------------------------------------------


@dataclass(frozen=True)
class BondOrder:
    """Bijection rank <-> crossing pair bond {-i, j}, i >= 1, j >= 0.

    scheme "square_by_n": shells max(i, j) = s, growing squares, so every
    prefix of ranks 0..s(s+1)-1 is exactly the square truncation of side s.
    scheme "diagonal_by_distance": ordered by i+j then i.
    """

    scheme: str = "square_by_n"

    def __post_init__(self):
        if self.scheme not in ("square_by_n", "diagonal_by_distance"):
            raise ValueError(f"unknown bond order {self.scheme!r}")

    def bond(self, rank: int) -> tuple[int, int]:
        if rank < 0:
            raise ValueError("rank must be >= 0")
        if self.scheme == "square_by_n":
            s = int((1.0 + math.sqrt(1.0 + 4.0 * rank)) / 2.0)
            while s * (s - 1) > rank:
                s -= 1
            while s * (s + 1) <= rank:
                s += 1
            r = rank - s * (s - 1)
            if r <= s:
                return s, r
            return r - s, s
        d = int((1.0 + math.sqrt(1.0 + 8.0 * rank)) / 2.0)
        while d * (d - 1) // 2 > rank:
            d -= 1
        while d * (d + 1) // 2 <= rank:
            d += 1
        i = rank - d * (d - 1) // 2 + 1
        return i, d - i

    def rank(self, bond: tuple[int, int]) -> int:
        i, j = bond
        if i < 1 or j < 0:
            raise ValueError("crossing bonds have i >= 1, j >= 0")
        if self.scheme == "square_by_n":
            s = max(i, j)
            if i == s:
                return s * (s - 1) + j
            return s * (s - 1) + s + i
        d = i + j
        return d * (d - 1) // 2 + (i - 1)

    def first(self, count: int) -> list[tuple[int, int]]:
        return [self.bond(r) for r in range(count)]


def square_bonds(N: int) -> list[tuple[int, int]]:
    """All bonds of the square truncation: 1<=i<=N, 0<=j<=N."""
    return [(i, j) for i in range(1, N + 1) for j in range(N + 1)]


# -- left-right energy --------------------------------------------------------


def _bond_value(inter: PairInteraction, i: int, j: int, xi_spin, sigma_spin):
    J = float(inter.coupling_weights(i + j)[i + j - 1])
    if inter.style == "spin_spin":
        return -J * xi_spin * sigma_spin
    return -J * sigma_spin


def left_right_energy(inter: PairInteraction, xi_word, sigma_word) -> float:
    """Exact W_N over the square with N = len(xi); sigma must have N+1 letters.

    ``xi_word[k]`` is the spin at site -(k+1); ``sigma_word[j]`` at site j.
    """
    xi = np.asarray(xi_word, dtype=float)
    sigma = np.asarray(sigma_word, dtype=float)
    N = xi.shape[0]
    if sigma.shape[0] != N + 1:
        raise ValueError("sigma must cover sites 0..N for the square truncation")
    A = _square_coupling(inter, N)
    if inter.style == "spin_spin":
        return -float(xi @ (A @ sigma))
    return -float(np.sum(A, axis=0) @ sigma)


def left_right_energy_bonds(inter: PairInteraction, bonds, xi_word, sigma_word) -> float:
    """Sum of crossing-bond energies over an explicit bond list (any order)."""
    xi = np.asarray(xi_word, dtype=float)
    sigma = np.asarray(sigma_word, dtype=float)
    total = 0.0
    for i, j in bonds:
        if i > xi.shape[0] or j >= sigma.shape[0]:
            raise ValueError(f"bond {(i, j)} reaches outside the supplied words")
        total += _bond_value(inter, i, j, xi[i - 1], sigma[j])
    return total


def _square_coupling(inter: PairInteraction, N: int) -> np.ndarray:
    """A[i-1, j] = J(i+j) on the square, 1<=i<=N, 0<=j<=N."""
    J = inter.coupling_weights(2 * N + 1)
    A = np.empty((N, N + 1))
    for i in range(1, N + 1):
        A[i - 1] = J[i - 1 : i + N]
    return A


def variance_profile(inter: PairInteraction, sigma_tail: Tail, i_max: int,
                     fit_lo: int = 10, fit_hi: int | None = None):
    """Squared one-site couplings a_i^2 of the left-right energy and their decay.

    a_i = sum_{j>=0} J(i+j) sigma_j under the frozen right tail; the log-log
    slope of a_i^2 over [fit_lo, fit_hi] estimates -2(alpha-1).
    Returns {"i", "a_sq", "slope"}.
    """
    if inter.kind != "dyson":
        raise RegimeError("variance profile is defined for the power-law ferromagnet")
    if not sigma_tail.frozen:
        raise ValueError("variance profile needs a frozen right tail")
    T = inter.trunc
    J = inter.coupling_weights(T + i_max)
    pattern = sigma_tail.values(0, T)
    a = np.empty(i_max)
    for i in range(1, i_max + 1):
        a[i - 1] = float(np.dot(J[i - 1 : i - 1 + T], pattern))
    a_sq = a * a
    fit_hi = i_max if fit_hi is None else fit_hi
    lo, hi = max(fit_lo, 1), min(fit_hi, i_max)
    if np.all(a_sq[lo - 1 : hi] > 0):
        xs = np.log(np.arange(lo, hi + 1, dtype=float))
        ys = np.log(a_sq[lo - 1 : hi])
        slope = float(np.polyfit(xs, ys, 1)[0])
    else:
        slope = float("nan")  # degenerate profile (beta = 0)
    return {"i": np.arange(1, i_max + 1), "a_sq": a_sq, "slope": slope}


# -- uniqueness-regime constants ----------------------------------------------


@dataclass(frozen=True)
class DensityBoundConstants:
    """Constants pinching the decoupling densities in the uniqueness regime."""

    alpha: float
    beta: float
    bar_c: float
    bar_c_bound: float
    D: float
    C1: float
    C1_bound: float
    trunc: int
    lower_bound: float
    upper_bound: float

    def u(self, n: int) -> float:
        """Oscillation budget 32 beta^2 sum_{k>n} k^{-2(alpha-1)}."""
        s = 2.0 * (self.alpha - 1.0)
        val, _ = series.power_tail_from(s, n + 1, self.trunc)
        return 32.0 * self.beta**2 * val

    def v(self, n: int) -> float:
        return math.sqrt(self.D * self.u(n) / 2.0)

    def u_sequence(self, n_grid) -> np.ndarray:
        return np.array([self.u(int(n)) for n in n_grid])

    def v_sequence(self, n_grid) -> np.ndarray:
        return np.array([self.v(int(n)) for n in n_grid])

    def to_json(self) -> str:
        return dump_json(
            {
                "alpha": self.alpha,
                "beta": self.beta,
                "bar_c": self.bar_c,
                "D": self.D,
                "C1": self.C1,
                "lower_bound": self.lower_bound,
                "upper_bound": self.upper_bound,
            }
        )


def density_bound_constants(alpha: float, beta: float,
                            trunc: int = 100_000) -> DensityBoundConstants:
    """Evaluate bar_c, D = 4/(1-bar_c)^2, C1 and the density pinching bounds.

    Refuses alpha <= 3/2 (C1 = sum_k (sum_{j>=k} j^-alpha)^2 diverges there)
    and beta outside the uniqueness regime (D undefined in-regime).
    """
    if not alpha > 1.5:
        raise RegimeError("C1 diverges: need alpha > 3/2")
    if beta < 0:
        raise RegimeError("beta must be nonnegative")
    bdu, _ = beta_dobrushin(alpha, trunc)
    if beta >= bdu:
        raise RegimeError(
            f"beta={beta} is not below the uniqueness threshold {bdu:.8g}"
        )
    inter = interaction_for(PotentialSpec("dyson", alpha, beta, trunc))
    bar_c, bc_bound = dobrushin_bar_c(inter)
    D = 4.0 / (1.0 - bar_c) ** 2

    # C1: explicit heads psi_k by reverse cumulative sums, EM tails beyond.
    K = min(trunc, 100_000)
    inv = np.arange(1, K + 1, dtype=float) ** (-alpha)
    tail_K, cert_K = series.power_tail(alpha, K)
    psi = np.cumsum(inv[::-1])[::-1] + tail_K  # psi[k-1] = sum_{n>=k} n^-alpha
    C1 = float(np.sum(psi * psi))
    # remainder over k > K: psi_k <= (k-1)^{1-alpha}/(alpha-1)
    rem, rem_cert = series.power_tail_from(2.0 * alpha - 2.0, K, trunc)
    C1_tail = (rem + rem_cert) / (alpha - 1.0) ** 2
    C1 += 0.5 * C1_tail
    C1_bound = 0.5 * C1_tail + 2.0 * K * cert_K * float(np.max(psi))

    exponent = 8.0 * D * beta**2 * C1
    return DensityBoundConstants(
        alpha=alpha,
        beta=beta,
        bar_c=bar_c,
        bar_c_bound=bc_bound,
        D=D,
        C1=C1,
        C1_bound=C1_bound,
        trunc=trunc,
        lower_bound=math.exp(-exponent),
        upper_bound=math.exp(exponent),
    )


# -- density estimation --------------------------------------------------------


@dataclass
class DensityEstimate:
    """Depth-d cylinder averages of the reweighted-to-free density.

    values[w] = E[e^{-W_N} | sigma-prefix = w] / E[e^{-W_N}] under the
    product of the two half-line stand-ins, so the values integrate to one
    against the right marginal exactly.
    """

    depth: int
    N: int
    values: np.ndarray
    std_err: np.ndarray
    normalization: float
    prefix_weights: np.ndarray
    mode: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.std_err = np.asarray(self.std_err, dtype=float)
        if np.any(self.values <= 0):
            raise ValueError("density values must be strictly positive")

    def unit_mean_defect(self) -> float:
        return abs(float(np.dot(self.values, self.prefix_weights)) - 1.0)

    def to_csv(self) -> str:
        rows = [
            (W.word_string(w), format_float(v), format_float(s))
            for w, v, s in zip(W.words_matrix(self.depth), self.values, self.std_err)
        ]
        return write_csv(("word", "value", "std_err"), rows, meta=self.meta)

    def to_json(self) -> str:
        return dump_json(
            {
                "depth": self.depth,
                "N": self.N,
                "mode": self.mode,
                "values": list(self.values),
                "std_err": list(self.std_err),
                "normalization": self.normalization,
                "prefix_weights": list(self.prefix_weights),
                **{k: v for k, v in self.meta.items()},
            }
        )


def _default_margin(N: int, needed: int) -> int:
    return max(0, min(2 * N, MAX_WINDOW_SITES - needed))


_MEASURE_CACHE: dict = {}


def _cached_window_gibbs(spec: PotentialSpec, window: Window):
    key = (spec.kind, spec.alpha, spec.beta, spec.tail_truncation,
           window.lo, window.hi, window.left.label(), window.right.label())
    if key not in _MEASURE_CACHE:
        if len(_MEASURE_CACHE) > 8:
            _MEASURE_CACHE.clear()
        _MEASURE_CACHE[key] = window_gibbs(interaction_for(spec), window)
    return _MEASURE_CACHE[key]


def _exact_halfline_marginals(spec: PotentialSpec, N: int,
                              margin_left: int, margin_right: int,
                              far_left: Tail = FREE, far_right: Tail = FREE):
    """Half-line window stand-ins collapsed to the W_N coordinates.

    The origin-facing side of each window is always free: those bonds are
    exactly the removed crossing family.  The far side defaults to free and
    may carry a frozen tail to probe boundary sensitivity.
    """
    wl = N + margin_left
    wr = N + 1 + margin_right
    left = _cached_window_gibbs(spec, Window(-wl, -1, far_left, FREE))
    right = _cached_window_gibbs(spec, Window(0, wr - 1, FREE, far_right))
    # xi index order: site -1 first; sigma index order: site 0 first.
    q = left.marginal_on([wl - 1 - k for k in range(N)])
    r = right.marginal_on(list(range(N + 1)))
    return q, r


def _pair_reduce_exact(A: np.ndarray, q: np.ndarray, r: np.ndarray,
                       depth: int, chunk: int = 8192):
    """Chunked fixed-order reduction of q_xi r_sigma e^{xi.A.sigma} terms.

    The xi coordinates are split into head and tail halves so that
    e^{xi.t} = e^{xi_h.t_h} e^{xi_t.t_t} needs only two |E|^{N/2}-row
    exponential tables per sigma chunk; the cross terms close through one
    matrix contraction against the reshaped xi marginal.  Exact up to
    rounding, deterministic chunk order.  Returns (numer per depth prefix,
    prefix weights, denominator).
    """
    N = A.shape[0]
    h = (N + 1) // 2
    t = N - h
    q_mat = q.reshape(1 << h, 1 << t)  # head bits are the high bits
    Xh = W.words_matrix(h).astype(float)
    Xt = W.words_matrix(t).astype(float) if t else np.zeros((1, 0))
    n_sigma = 1 << (N + 1)
    sigma_words = W.words_matrix(N + 1)
    numer = np.zeros(1 << depth)
    prefix_all = np.arange(n_sigma) >> (N + 1 - depth)
    weights_w = np.bincount(prefix_all, weights=r, minlength=1 << depth)
    denom = 0.0
    for start in range(0, n_sigma, chunk):
        stop = min(start + chunk, n_sigma)
        sg = sigma_words[start:stop].astype(float)
        tmat = sg @ A.T  # (B, N): t_i(sigma)
        Mh = np.exp(Xh @ tmat[:, :h].T)  # (2^h, B)
        if t:
            Mt = np.exp(Xt @ tmat[:, h:].T)  # (2^t, B)
            g = np.sum(Mt * (q_mat.T @ Mh), axis=0)
        else:
            g = q_mat[:, 0] @ Mh
        gr = g * r[start:stop]
        denom += float(np.sum(gr))
        numer += np.bincount(prefix_all[start:stop], weights=gr, minlength=1 << depth)
    return numer, weights_w, denom


def _marginal_from_measure(measure, side: str, n_coords: int) -> np.ndarray:
    """Collapse a caller-supplied half-line WindowMeasure onto the W coordinates."""
    win = measure.window
    if side == "left":
        if win.hi != -1 or win.size < n_coords:
            raise ValueError("left measure must cover sites -1 down to at least -N")
        positions = [win.size - 1 - k for k in range(n_coords)]
    else:
        if win.lo != 0 or win.size < n_coords:
            raise ValueError("right measure must cover sites 0 up to at least N")
        positions = list(range(n_coords))
    return measure.marginal_on(positions)


def density_estimate(spec: PotentialSpec, depth: int, N: int, mode: str = "exact",
                     margin_left: int | None = None, margin_right: int | None = None,
                     far_left: Tail = FREE, far_right: Tail = FREE,
                     left_measure=None, right_measure=None,
                     seed: int = 0, samples: int = 20_000, thin: int = 2,
                     chains: int = 2, rhat_limit: float = 1.1) -> DensityEstimate:
    """Estimate the depth-d cylinder density of the square-N reweighting.

    Exact mode enumerates both free-boundary windows (width N + margin,
    margins defaulting to 2N clamped to the enumeration budget); explicit
    ``left_measure``/``right_measure`` WindowMeasure stand-ins may be passed
    instead (half-line windows ending at -1 / starting at 0).  MC mode runs
    ``chains`` heat-bath chains per side and reports batch-means errors; it
    refuses to proceed when the chains disagree (Gelman-Rubin > 1.1).
    """
    if spec.kind != "dyson":
        raise RegimeError("decoupling densities are built for the ferromagnet")
    if not 1 <= depth <= N + 1:
        raise ValueError("need 1 <= depth <= N + 1")
    if margin_left is None:
        margin_left = _default_margin(N, N)
    if margin_right is None:
        margin_right = _default_margin(N, N + 1)
    inter = interaction_for(spec)
    A = _square_coupling(inter, N)
    meta = {
        "alpha": spec.alpha,
        "beta": spec.beta,
        "margin_left": margin_left,
        "margin_right": margin_right,
        "far_left": far_left.label(),
        "far_right": far_right.label(),
        "seed": seed,
    }

    if mode == "exact":
        if left_measure is not None or right_measure is not None:
            if left_measure is None or right_measure is None:
                raise ValueError("pass both stand-in measures or neither")
            q = _marginal_from_measure(left_measure, "left", N)
            r = _marginal_from_measure(right_measure, "right", N + 1)
            meta["margin_left"] = left_measure.window.size - N
            meta["margin_right"] = right_measure.window.size - N - 1
        else:
            W.check_budget(1 << (N + margin_left), "left window")
            W.check_budget(1 << (N + 1 + margin_right), "right window")
            q, r = _exact_halfline_marginals(spec, N, margin_left, margin_right,
                                             far_left, far_right)
        numer, weights_w, denom = _pair_reduce_exact(A, q, r, depth)
        values = numer / (weights_w * denom)
        return DensityEstimate(
            depth=depth, N=N, values=values, std_err=np.zeros_like(values),
            normalization=denom, prefix_weights=weights_w, mode="exact", meta=meta,
        )

    if mode != "monte_carlo":
        raise ValueError("mode must be 'exact' or 'monte_carlo'")

    if left_measure is not None or right_measure is not None:
        # caller-supplied sampler handles; convergence is their responsibility
        if left_measure is None or right_measure is None:
            raise ValueError("pass both sampler handles or neither")
        if left_measure.window.hi != -1 or right_measure.window.lo != 0:
            raise ValueError("streams must cover a left half-line window "
                             "ending at -1 and a right one starting at 0")
        xi = left_measure.snapshots[:, ::-1][:, :N].astype(float)
        sigma = right_measure.snapshots[:, : N + 1].astype(float)
    else:
        wl = N + margin_left
        wr = N + 1 + margin_right
        per_chain = samples // chains
        xi_chains, sigma_chains = [], []
        for c in range(chains):
            ls = heat_bath_sampler(
                inter, Window(-wl, -1, far_left, FREE), seed=split_seed(seed, 2 * c),
                sweeps=per_chain * thin, thin=thin,
            )
            rs = heat_bath_sampler(
                inter, Window(0, wr - 1, FREE, far_right),
                seed=split_seed(seed, 2 * c + 1),
                sweeps=per_chain * thin, thin=thin,
            )
            xi_chains.append(ls.snapshots[:, ::-1][:, :N].astype(float))
            sigma_chains.append(rs.snapshots[:, : N + 1].astype(float))
        for label, chains_list in (("left", xi_chains), ("right", sigma_chains)):
            stat = rhat([c.mean(axis=1) for c in chains_list])
            if stat > rhat_limit:
                raise ConvergenceError(
                    f"{label} sampler not converged: rhat={stat:.3f}", residual=stat
                )
        xi = np.concatenate(xi_chains)
        sigma = np.concatenate(sigma_chains)

    n_batches = 32
    S = min(len(xi), len(sigma))
    usable = (S // n_batches) * n_batches
    xi, sigma = xi[:usable], sigma[:usable]
    prefix = np.zeros(usable, dtype=np.int64)
    for p in range(depth):
        prefix = prefix * 2 + ((sigma[:, p].astype(np.int8) + 1) // 2)
    batch_vals = np.zeros((n_batches, 1 << depth))
    denoms = np.zeros(n_batches)
    for b in range(n_batches):
        sl = slice(b * usable // n_batches, (b + 1) * usable // n_batches)
        t = sigma[sl] @ A.T
        Wmat = np.exp(xi[sl] @ t.T)  # e^{-W} for every cross pair in the batch
        g = Wmat.mean(axis=0)
        denom = float(g.mean())
        counts = np.bincount(prefix[sl], minlength=1 << depth)
        if np.any(counts == 0):
            raise ConvergenceError(
                "a depth prefix received no samples; increase samples"
            )
        sums = np.bincount(prefix[sl], weights=g, minlength=1 << depth)
        batch_vals[b] = sums / counts / denom
        denoms[b] = denom
    values = batch_vals.mean(axis=0)
    std_err = batch_vals.std(axis=0, ddof=1) / math.sqrt(n_batches)
    weights_w = np.bincount(prefix, minlength=1 << depth) / usable
    return DensityEstimate(
        depth=depth, N=N, values=values, std_err=std_err,
        normalization=float(denoms.mean()), prefix_weights=weights_w,
        mode="monte_carlo", meta={**meta, "samples": usable, "chains": chains},
    )


# -- eigenfunction comparison ---------------------------------------------------


def density_vs_eigenfunction(density: DensityEstimate, model: TransferModel) -> dict:
    """Sup and L1 gaps between the density and the eigenfunction marginal.

    Both objects are renormalized to unit mean against the same cylinder
    weights, the eigenmeasure approximation of the model marginalized to the
    density depth (the eigenfunction is only defined up to scale).
    """
    d = density.depth
    if d > model.depth:
        raise ValueError("density depth exceeds the transfer model depth")
    if model.spec.alphabet.size != 2:
        raise ValueError("comparison implemented for the Ising alphabet")
    nu = model.left_eig
    h = model.right_eig.values
    prefix = np.arange(nu.shape[0]) >> (model.depth - d)
    w_d = np.bincount(prefix, weights=nu, minlength=1 << d)
    h_d = np.bincount(prefix, weights=nu * h, minlength=1 << d) / w_d
    h_norm = h_d / float(np.dot(w_d, h_d))
    f_norm = density.values / float(np.dot(w_d, density.values))
    gap = np.abs(f_norm - h_norm)
    return {
        "depth": d,
        "N": density.N,
        "sup_dist": float(gap.max()),
        "l1_dist": float(np.dot(w_d, gap)),
    }


def density_eigenfunction_trend(spec: PotentialSpec, depth: int, N_grid,
                                model: TransferModel,
                                window_width: int | None = MAX_WINDOW_SITES,
                                **density_kwargs) -> dict:
    """Comparison reports along an N grid plus the monotonicity flag.

    By default every N shares identical stand-in windows of ``window_width``
    sites, so the trend isolates the truncation of the crossing-bond square;
    pass window_width=None to fall back to the per-N default margins.
    """
    reports = []
    for N in N_grid:
        N = int(N)
        kwargs = dict(density_kwargs)
        if window_width is not None:
            kwargs.setdefault("margin_left", window_width - N)
            kwargs.setdefault("margin_right", window_width - N - 1)
        dens = density_estimate(spec, depth, N, **kwargs)
        reports.append(density_vs_eigenfunction(dens, model))
    sups = [r["sup_dist"] for r in reports]
    return {
        "N_grid": [int(N) for N in N_grid],
        "sup_dist": sups,
        "l1_dist": [r["l1_dist"] for r in reports],
        "nonincreasing_sup": all(b <= a + 1e-12 for a, b in zip(sups, sups[1:])),
    }


# -- uniform-integrability diagnostics -------------------------------------------


def crossing_bond_diagnostics(inter: PairInteraction, K: int,
                              order: BondOrder = BondOrder()) -> dict:
    """Summability diagnostics for the crossing-bond sequence.

    sum_delta_sq: partial sum of the squared oscillation norms of the first K
    bonds with a certified remainder over the full crossing family (for the
    power couplings the total is a zeta value in 2*alpha - 1).
    rho_bound_sum: the analytic bound zeta(alpha)/(1 - bar_c) on the summed
    mean-energy suprema; the sup itself is not desk-computable.
    """
    bar_c, bc_bound = dobrushin_bar_c(inter)
    if bar_c >= 1.0:
        raise RegimeError("diagnostics require the uniqueness regime bar_c < 1")
    if inter.kind not in ("dyson", "product"):
        raise RegimeError("closed-form bond sums need power-law couplings")
    per_site = 2 if inter.style == "spin_spin" else 1
    partial = 0.0
    for i, j in order.first(K):
        J = float(inter.coupling_weights(i + j)[i + j - 1])
        partial += per_site * 4.0 * J * J
    # full family: sum_m (number of bonds at distance m) J(m)^2 = beta^2 zeta(2a-1)
    total_z, total_cert = series.zeta_series(2.0 * inter.alpha - 1.0, inter.trunc)
    total = per_site * 4.0 * inter.beta**2 * total_z
    z_alpha, z_cert = series.zeta_series(inter.alpha, inter.trunc)
    rho_bound = z_alpha / (1.0 - bar_c)
    rho_cert = (z_cert + z_alpha * bc_bound / (1.0 - bar_c)) / (1.0 - bar_c)
    return {
        "K": K,
        "order": order.scheme,
        "sum_delta_sq": partial,
        "sum_delta_sq_total": total,
        "sum_delta_sq_remainder": total - partial + per_site * 4.0 * inter.beta**2 * total_cert,
        "converges": True,
        "rho_bound_sum": rho_bound,
        "rho_bound_cert": rho_cert,
        "bar_c": bar_c,
    }
