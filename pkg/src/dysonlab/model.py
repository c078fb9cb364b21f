"""Half-line potentials, whole-line pair interactions, and their regularity.

The two closed-form families are the long-range ferromagnet

    phi_D(x) = beta * sum_{n>=1} x_0 x_n / n^alpha        (pair, "dyson")
    phi_P(x) = beta * sum_{n>=1} x_n / n^alpha            ("product_type")

on {-1,+1}^{Z_+}, together with the whole-line pair interactions they come
from: -J(|i-j|) w_i w_j for the ferromagnet and -J(j-i) w_j (j>i) for the
product family, J(r) = beta/r^alpha.  Custom pair couplings are accepted
when a monotone tail bound is supplied so truncation stays certified.

All series are cut at ``tail_truncation`` and every returned number carries
a certified truncation bound (see series.py).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import series
from .errors import RegimeError
from .tails import Tail, PLUS

__all__ = [
    "SpinAlphabet",
    "ISING",
    "PotentialSpec",
    "dyson_potential",
    "product_potential",
    "custom_pair_potential",
    "potential_value",
    "potential_values",
    "site_oscillation",
    "variation",
    "good_future_sum",
    "walters_diagnostic",
    "extensibility_defect",
    "RegularityReport",
    "build_regularity_report",
    "PairInteraction",
    "dyson_interaction",
    "product_interaction",
    "custom_pair_interaction",
    "uac_sum",
    "dobrushin_bar_c",
    "beta_dobrushin",
]

DEFAULT_TRUNCATION = 100_000


@dataclass(frozen=True)
class SpinAlphabet:
    """Ordered finite set of spin values; default Ising {-1,+1}."""

    values: tuple = (-1, 1)

    def __post_init__(self):
        if len(self.values) < 2:
            raise ValueError("alphabet needs at least two values")
        if len(set(self.values)) != len(self.values):
            raise ValueError("alphabet values must be distinct")

    @property
    def size(self) -> int:
        return len(self.values)


ISING = SpinAlphabet((-1, 1))

_KINDS = ("dyson", "product_type", "custom_pair")


@dataclass(eq=False)
class PotentialSpec:
    """A half-line potential with decay exponent, temperature and cutoff.

    Immutable after construction; the weight cache is an implementation
    detail and does not affect equality of results.
    """

    kind: str
    alpha: float
    beta: float
    tail_truncation: int = DEFAULT_TRUNCATION
    custom_coupling: Optional[Callable] = None
    custom_tail_bound: Optional[Callable] = None
    alphabet: SpinAlphabet = ISING
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if self.kind != "custom_pair" and not self.alpha > 1:
            raise RegimeError("alpha must exceed 1 for a summable coupling")
        if self.beta < 0:
            raise RegimeError("beta must be nonnegative")
        if self.tail_truncation < 1:
            raise ValueError("tail_truncation must be >= 1")
        if self.kind == "custom_pair" and self.custom_coupling is None:
            raise ValueError("custom_pair needs a coupling function")

    # -- coupling weights ------------------------------------------------

    def coupling_weights(self, n: int) -> np.ndarray:
        """w_1..w_n with w_r the coefficient of the lag-r term (beta included)."""
        key = ("w", n)
        if key not in self._cache:
            r = np.arange(1, n + 1, dtype=float)
            if self.kind == "custom_pair":
                w = self.beta * np.asarray(self.custom_coupling(r), dtype=float)
            else:
                w = self.beta * r ** (-self.alpha)
            w.setflags(write=False)
            self._cache[key] = w
        return self._cache[key]

    def coupling_tail_bound(self, T: int) -> float:
        """Certified upper bound on sum_{r>T} |w_r| plus a rounding allowance.

        The allowance (64 eps times the absolute weight mass) covers the
        floating-point accumulation of the explicit partial sums, so reported
        bounds stay valid enclosures end to end.
        """
        slack = 64.0 * np.finfo(float).eps * (
            float(np.sum(np.abs(self.coupling_weights(min(T, self.tail_truncation)))))
            + 1e-3
        )
        if self.kind == "custom_pair":
            if self.custom_tail_bound is None:
                raise RegimeError(
                    "custom_pair tails cannot be certified without a tail bound"
                )
            return self.beta * float(self.custom_tail_bound(T)) + slack
        val, cert = series.power_tail(self.alpha, T)
        return self.beta * (val + cert) + slack

    def tail_weight_sum(self, tail: Tail, start_lag: int) -> float:
        """sum_{r=start_lag}^{T} w_r * tail(r - start_lag), cached per (tail, lag)."""
        key = ("tailsum", tail, start_lag)
        if key not in self._cache:
            T = self.tail_truncation
            if start_lag > T:
                self._cache[key] = 0.0
            else:
                w = self.coupling_weights(T)[start_lag - 1 :]
                pattern = tail.values(0, T - start_lag + 1)
                self._cache[key] = float(np.dot(w, pattern))
        return self._cache[key]

    def coupling_weight_tail(self, start_lag: int) -> float:
        """Unweighted sum_{r=start_lag}^{T} w_r (the lag mass beyond a window)."""
        key = ("wtail", start_lag)
        if key not in self._cache:
            T = self.tail_truncation
            if start_lag > T:
                self._cache[key] = 0.0
            else:
                self._cache[key] = float(np.sum(self.coupling_weights(T)[start_lag - 1 :]))
        return self._cache[key]

    # -- serialization ---------------------------------------------------

    def to_json(self) -> str:
        if self.kind == "custom_pair":
            raise ValueError("custom_pair specs are not JSON-serializable")
        return json.dumps(
            {
                "kind": self.kind,
                "alpha": self.alpha,
                "beta": self.beta,
                "tail_truncation": self.tail_truncation,
            },
            sort_keys=True,
        )

    @staticmethod
    def from_json(text: str) -> "PotentialSpec":
        d = json.loads(text)
        extra = set(d) - {"kind", "alpha", "beta", "tail_truncation"}
        if extra:
            raise ValueError(f"unknown descriptor keys: {sorted(extra)}")
        return PotentialSpec(
            kind=d["kind"],
            alpha=float(d["alpha"]),
            beta=float(d["beta"]),
            tail_truncation=int(d.get("tail_truncation", DEFAULT_TRUNCATION)),
        )


def dyson_potential(alpha, beta, tail_truncation=DEFAULT_TRUNCATION) -> PotentialSpec:
    return PotentialSpec("dyson", alpha, beta, tail_truncation)


def product_potential(alpha, beta, tail_truncation=DEFAULT_TRUNCATION) -> PotentialSpec:
    return PotentialSpec("product_type", alpha, beta, tail_truncation)


def custom_pair_potential(
    coupling, tail_bound=None, beta=1.0, alpha=float("nan"),
    tail_truncation=DEFAULT_TRUNCATION,
) -> PotentialSpec:
    return PotentialSpec(
        "custom_pair", alpha, beta, tail_truncation,
        custom_coupling=coupling, custom_tail_bound=tail_bound,
    )


# -- evaluation ----------------------------------------------------------


def _check_spins(words: np.ndarray, alphabet: SpinAlphabet) -> None:
    allowed = np.asarray(alphabet.values)
    if not np.isin(words, allowed).all():
        raise ValueError("configuration contains spins outside the alphabet")


def potential_values(spec: PotentialSpec, words, tail: Tail = PLUS):
    """Evaluate phi on a batch of explicit words continued by a frozen tail.

    ``words`` has shape (n, L); returns (values, error_bound) with the bound
    certifying the cut of the coupling series at ``spec.tail_truncation``.
    """
    words = np.atleast_2d(np.asarray(words))
    _check_spins(words, spec.alphabet)
    n, L = words.shape
    if L < 1:
        raise ValueError("need the spin at site 0")
    T = spec.tail_truncation
    m = min(L - 1, T)
    w = spec.coupling_weights(T)
    explicit = np.zeros(n)
    for j in range(m):  # fixed-order accumulation, no large float copies
        explicit += w[j] * words[:, j + 1]
    if L - 1 < T:
        if not tail.frozen:
            raise ValueError("free tail: configuration does not reach the cutoff")
        explicit = explicit + spec.tail_weight_sum(tail, L)
    if spec.kind == "dyson" or spec.kind == "custom_pair":
        values = words[:, 0].astype(float) * explicit
    else:  # product_type: no site-0 factor
        values = explicit
    err = spec.coupling_tail_bound(T)
    return values, err


def potential_value(spec: PotentialSpec, word, tail: Tail = PLUS):
    """phi at a single explicit word + frozen tail -> (value, error_bound)."""
    values, err = potential_values(spec, np.asarray(word)[None, :], tail)
    return float(values[0]), err


# -- regularity functionals ------------------------------------------------


def site_oscillation(spec: PotentialSpec, k: int) -> float:
    """delta_k(phi): the oscillation of phi under a spin change at site k.

    Closed forms: 2*beta*k^-alpha for k>=1 (pair families), 2*beta*zeta(alpha)
    at k=0 for the ferromagnet, 0 at k=0 for the product family.
    """
    if k < 0:
        raise ValueError("site index must be >= 0")
    if spec.beta == 0.0:
        return 0.0
    if k == 0:
        if spec.kind == "product_type":
            return 0.0
        T = spec.tail_truncation
        head = float(np.sum(np.abs(spec.coupling_weights(T))))
        if spec.kind == "dyson":
            tail_est, _ = series.power_tail(spec.alpha, T)
            return 2.0 * (head + spec.beta * tail_est)
        return 2.0 * (head + spec.coupling_tail_bound(T))
    return 2.0 * abs(float(spec.coupling_weights(k)[k - 1]))


def variation(spec: PotentialSpec, k: int) -> float:
    """v_k(phi) = sup{|phi(x)-phi(y)| : x_0^{k-1} = y_0^{k-1}}, k >= 1.

    2 beta sum_{n>=k} n^-alpha for the power families (tight tail); custom
    couplings get the upper end of their enclosure.
    """
    if k < 1:
        raise ValueError("variations are indexed from k = 1")
    if spec.beta == 0.0:
        return 0.0
    T = spec.tail_truncation
    w = spec.coupling_weights(max(T, k))
    head = float(np.sum(np.abs(w[k - 1 : T])))
    if spec.kind == "custom_pair":
        return 2.0 * (head + spec.coupling_tail_bound(T))
    tail_est, _ = series.power_tail(spec.alpha, T)
    return 2.0 * (head + spec.beta * tail_est)


def good_future_sum(spec: PotentialSpec):
    """(sum_{k>=1} delta_k(phi), certified tail bound)."""
    T = spec.tail_truncation
    value = 2.0 * float(np.sum(np.abs(spec.coupling_weights(T))))
    bound = 2.0 * spec.coupling_tail_bound(T)
    return value, bound


def walters_diagnostic(spec: PotentialSpec, p_grid, n_max: int = 64) -> np.ndarray:
    """sup_{n<=N} v_{n+p}(S_n phi) on a grid of p, closed form for power couplings.

    For both closed-form families the supremum is attained at n = N and equals
    2*beta * sum_{r=p+1}^{N+p} psi_r with psi_r = sum_{m>=r} m^-alpha.  The
    sequence tends to 0 as p grows iff alpha > 2 (summable variation).
    """
    if spec.kind == "custom_pair":
        raise RegimeError("walters diagnostic implemented for power-law couplings")
    p_grid = np.asarray(p_grid, dtype=int)
    r_max = int(p_grid.max()) + n_max
    psi = np.array(
        [series.power_tail_from(spec.alpha, r, spec.tail_truncation)[0]
         for r in range(1, r_max + 1)]
    )
    cum = np.concatenate([[0.0], np.cumsum(psi)])
    return 2.0 * spec.beta * (cum[p_grid + n_max] - cum[p_grid])


def extensibility_defect(
    spec: PotentialSpec,
    n_grid,
    probe_budget: int = 256,
    seed: int = 0,
    tail: Tail = PLUS,
    horizon: int = 512,
) -> np.ndarray:
    """Empirical sup_x |F_{n+1}(x) - F_n(x)| for the origin-flip Birkhoff gaps.

    F_n(x) is the difference of (n+1)-step Birkhoff sums between the two
    choices of the origin spin; its n -> n+1 increment telescopes to a single
    potential difference phi(x_{-(n+1)}..b..) - phi(x_{-(n+1)}..a..), which is
    what each probe evaluates.
    """
    if spec.alphabet != ISING:
        raise RegimeError("extensibility probes flip the origin of an Ising chain")
    if probe_budget < 1:
        raise ValueError("probe_budget must be >= 1")
    rng = np.random.default_rng(seed)
    out = []
    for n in n_grid:
        depth = n + 1
        left = rng.choice((-1, 1), size=(probe_budget, depth)).astype(np.int8)
        right = rng.choice((-1, 1), size=(probe_budget, horizon)).astype(np.int8)
        words = np.empty((probe_budget, depth + 1 + horizon), dtype=np.int8)
        words[:, :depth] = left
        words[:, depth + 1 :] = right
        words[:, depth] = 1
        v_plus, _ = potential_values(spec, words, tail)
        words[:, depth] = -1
        v_minus, _ = potential_values(spec, words, tail)
        out.append(float(np.max(np.abs(v_plus - v_minus))))
    return np.array(out)


@dataclass
class RegularityReport:
    """Variations, site oscillations and the regularity diagnostics of a potential."""

    kind: str
    alpha: float
    beta: float
    tail_truncation: int
    k_grid: np.ndarray
    variations: np.ndarray
    site_oscillations: np.ndarray
    good_future_sum: float
    good_future_bound: float
    walters_p_grid: np.ndarray
    walters: np.ndarray
    extensibility_n_grid: np.ndarray
    extensibility: np.ndarray

    def to_json(self) -> str:
        from .serialize import dump_json

        return dump_json(
            {
                "kind": self.kind,
                "alpha": self.alpha,
                "beta": self.beta,
                "tail_truncation": self.tail_truncation,
                "k_grid": list(map(int, self.k_grid)),
                "variations": list(map(float, self.variations)),
                "site_oscillations": list(map(float, self.site_oscillations)),
                "good_future_sum": self.good_future_sum,
                "good_future_bound": self.good_future_bound,
                "walters_p_grid": list(map(int, self.walters_p_grid)),
                "walters": list(map(float, self.walters)),
                "extensibility_n_grid": list(map(int, self.extensibility_n_grid)),
                "extensibility": list(map(float, self.extensibility)),
            }
        )

    def to_csv(self) -> str:
        from .serialize import format_float, write_csv

        rows = [
            (int(k), format_float(v), format_float(d))
            for k, v, d in zip(self.k_grid, self.variations, self.site_oscillations)
        ]
        return write_csv(("k", "variation", "site_oscillation"), rows)


def build_regularity_report(
    spec: PotentialSpec,
    k_max: int = 16,
    p_grid=(1, 2, 4, 8, 16, 32),
    walters_n: int = 64,
    n_grid=(1, 2, 4, 8, 16),
    probe_budget: int = 256,
    seed: int = 0,
) -> RegularityReport:
    ks = np.arange(1, k_max + 1)
    gfs, gfb = good_future_sum(spec)
    return RegularityReport(
        kind=spec.kind,
        alpha=spec.alpha,
        beta=spec.beta,
        tail_truncation=spec.tail_truncation,
        k_grid=ks,
        variations=np.array([variation(spec, int(k)) for k in ks]),
        site_oscillations=np.array([site_oscillation(spec, int(k)) for k in ks]),
        good_future_sum=gfs,
        good_future_bound=gfb,
        walters_p_grid=np.asarray(p_grid, dtype=int),
        walters=walters_diagnostic(spec, p_grid, walters_n),
        extensibility_n_grid=np.asarray(n_grid, dtype=int),
        extensibility=extensibility_defect(spec, n_grid, probe_budget, seed),
    )


# -- whole-line pair interactions -----------------------------------------


@dataclass(eq=False)
class PairInteraction:
    """Translation-invariant pair interaction on the whole line.

    style "spin_spin": bond term -J(|i-j|) w_i w_j   (ferromagnet family)
    style "right_spin": bond term -J(j-i) w_j, j>i   (product family)

    ``coupling`` maps distance r>=1 to J(r) with beta already included
    (J(r) = beta/r^alpha for the closed forms).
    """

    style: str
    kind: str
    alpha: float
    beta: float
    coupling: Callable
    trunc: int = DEFAULT_TRUNCATION
    tail_bound: Optional[Callable] = None
    alphabet: SpinAlphabet = ISING
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.style not in ("spin_spin", "right_spin"):
            raise ValueError(f"unknown interaction style {self.style!r}")
        if self.beta < 0:
            raise RegimeError("beta must be nonnegative")

    def coupling_weights(self, r_max: int) -> np.ndarray:
        key = ("J", r_max)
        if key not in self._cache:
            r = np.arange(1, r_max + 1, dtype=float)
            w = np.asarray(self.coupling(r), dtype=float)
            w.setflags(write=False)
            self._cache[key] = w
        return self._cache[key]

    def coupling_tail_bound(self, T: int) -> float:
        if self.tail_bound is None:
            raise RegimeError(
                "coupling sum cannot be certified: no tail bound supplied"
            )
        slack = 64.0 * np.finfo(float).eps * (
            float(np.sum(np.abs(self.coupling_weights(min(T, self.trunc))))) + 1e-3
        )
        return float(self.tail_bound(T)) + slack

    def bond_energy(self, r: int, w_left, w_right):
        """Phi_{{i,j}} for |i-j| = r with spins (w_left at the smaller site)."""
        J = float(self.coupling_weights(r)[r - 1])
        if self.style == "spin_spin":
            return -J * w_left * w_right
        return -J * w_right

    def label(self) -> str:
        return f"{self.kind}(alpha={self.alpha}, beta={self.beta})"


def dyson_interaction(alpha, beta, trunc=DEFAULT_TRUNCATION) -> PairInteraction:
    if not alpha > 1:
        raise RegimeError("alpha must exceed 1 for a summable coupling")

    def bound(T, alpha=alpha, beta=beta):
        val, cert = series.power_tail(alpha, T)
        return beta * (val + cert)

    return PairInteraction(
        "spin_spin", "dyson", alpha, beta,
        lambda r: beta * np.asarray(r, dtype=float) ** (-alpha),
        trunc=trunc, tail_bound=bound,
    )


def product_interaction(alpha, beta, trunc=DEFAULT_TRUNCATION) -> PairInteraction:
    if not alpha > 1:
        raise RegimeError("alpha must exceed 1 for a summable coupling")

    def bound(T, alpha=alpha, beta=beta):
        val, cert = series.power_tail(alpha, T)
        return beta * (val + cert)

    return PairInteraction(
        "right_spin", "product", alpha, beta,
        lambda r: beta * np.asarray(r, dtype=float) ** (-alpha),
        trunc=trunc, tail_bound=bound,
    )


def custom_pair_interaction(
    coupling, tail_bound=None, style="spin_spin",
    alpha=float("nan"), beta=1.0, trunc=DEFAULT_TRUNCATION,
) -> PairInteraction:
    return PairInteraction(
        style, "custom", alpha, beta, coupling, trunc=trunc, tail_bound=tail_bound
    )


def interaction_for(spec: PotentialSpec, trunc=None) -> PairInteraction:
    """The whole-line interaction whose half-line mean energy is -phi."""
    trunc = spec.tail_truncation if trunc is None else trunc
    if spec.kind == "dyson":
        return dyson_interaction(spec.alpha, spec.beta, trunc)
    if spec.kind == "product_type":
        return product_interaction(spec.alpha, spec.beta, trunc)
    raise RegimeError("no canonical whole-line interaction for custom potentials")


def uac_sum(inter: PairInteraction):
    """sum_{r>=1} |J(r)| as (partial sum + tail estimate, certificate).

    Power-law couplings close the sum with the Euler-Maclaurin tail and a
    machine-level certificate; custom couplings use the supplied monotone
    bound B as the enclosure [0, B] around the omitted tail.
    """
    T = inter.trunc
    head = float(np.sum(np.abs(inter.coupling_weights(T))))
    if inter.kind in ("dyson", "product"):
        tail_est, cert = series.power_tail(inter.alpha, T)
        return head + inter.beta * tail_est, inter.beta * cert
    B = inter.coupling_tail_bound(T)
    return head + 0.5 * B, 0.5 * B


def dobrushin_bar_c(inter: PairInteraction):
    """Interaction-level uniqueness coefficient for a pair interaction.

    Equals sum over both directions of the bond oscillations, i.e.
    2 * sum_{r>=1} |J(r)|; 2*beta*zeta(alpha) for the closed forms.
    Returns (value, certified tail bound).
    """
    s, bound = uac_sum(inter)
    return 2.0 * s, 2.0 * bound


def beta_dobrushin(alpha: float, trunc: int = DEFAULT_TRUNCATION):
    """Largest beta with bar_c < 1 for the power-law families: 1/(2*zeta(alpha))."""
    if not alpha > 1:
        raise RegimeError("alpha must exceed 1")
    z, cert = series.zeta_series(alpha, trunc)
    value = 1.0 / (2.0 * z)
    return value, cert / (2.0 * z * z) + 4.0 * math.ulp(value)
