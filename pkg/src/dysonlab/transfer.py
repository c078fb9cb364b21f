"""Birkhoff sums, half-line kernels, and the truncated transfer operator.

The operator L f(x) = sum_a e^{phi(a x)} f(a x) is approximated on depth-m
cylinder functions with a frozen evaluation tail: states are length-m words
w, preimages prepend a letter, and the matrix entry from w to a*w[:-1] is
e^{phi(a.w.tail)}.  Power iteration with sup-norm normalization delivers the
dominant eigenvalue (lambda = e^pressure), the positive right eigenvector
(eigenfunction approximation) and the left probability eigenvector
(eigenmeasure approximation).  Matrix products are implemented as |E|
fixed-order gather/accumulate passes, so results do not depend on thread
count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import words as W
from .errors import ConvergenceError
from .model import PotentialSpec, potential_values
from .serialize import dump_json
from .tails import Tail, PLUS

__all__ = [
    "CylinderFunction",
    "birkhoff_sum",
    "birkhoff_weights",
    "half_line_kernel",
    "kernel_consistency_check",
    "transfer_weights",
    "dominant_eigenpair",
    "TransferModel",
    "build_transfer_model",
    "quasi_normalization_defect",
    "markov_equilibrium",
]


@dataclass
class CylinderFunction:
    """A function of the first ``depth`` coordinates, as a vector in word order."""

    depth: int
    values: np.ndarray
    tail: Tail = PLUS
    base: int = 2

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.base**self.depth,):
            raise ValueError(
                f"depth-{self.depth} cylinder over {self.base} letters needs "
                f"{self.base**self.depth} values, got {self.values.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("cylinder values must be finite")

    @staticmethod
    def constant(depth: int, c: float = 1.0, base: int = 2) -> "CylinderFunction":
        return CylinderFunction(depth, np.full(base**depth, float(c)))

    @staticmethod
    def indicator(word, values=(-1, 1)) -> "CylinderFunction":
        depth = len(word)
        v = np.zeros(len(values) ** depth)
        v[W.word_index(word, values)] = 1.0
        return CylinderFunction(depth, v)

    @staticmethod
    def coordinate(depth: int = 1, position: int = 0, values=(-1, 1)) -> "CylinderFunction":
        wm = W.words_matrix(depth, values)
        return CylinderFunction(depth, wm[:, position].astype(float))

    def is_positive(self) -> bool:
        return bool(np.all(self.values > 0))

    def at_prefix(self, word, values=(-1, 1)) -> float:
        return float(self.values[W.word_index(word[: self.depth], values)])


# -- Birkhoff sums ---------------------------------------------------------


def birkhoff_sum(spec: PotentialSpec, word, tail: Tail = PLUS):
    """S_n phi(word.tail) = sum_{k<n} phi(S^k(word.tail)) -> (value, bound)."""
    word = np.asarray(word)
    n = word.shape[0]
    if n < 1:
        raise ValueError("word must be nonempty")
    total, err = 0.0, 0.0
    for k in range(n):
        v, e = potential_values(spec, word[None, k:], tail)
        total += float(v[0])
        err += e
    return total, err


def birkhoff_weights(spec: PotentialSpec, n_terms: int, word_matrix, tail: Tail = PLUS):
    """S_{n_terms} phi over a batch of explicit words -> (values, bound).

    ``word_matrix`` rows may be longer than ``n_terms``; extra letters are the
    shared explicit future of every summand.
    """
    word_matrix = np.atleast_2d(np.asarray(word_matrix))
    total = np.zeros(word_matrix.shape[0])
    err = 0.0
    for k in range(n_terms):
        v, e = potential_values(spec, word_matrix[:, k:], tail)
        total += v
        err += e
    return total, err


# -- half-line specification kernels ----------------------------------------


def half_line_kernel(spec: PotentialSpec, n: int, tail: Tail = PLUS,
                     future_word=()):
    """Exact window kernel over length-n words given the frozen future.

    Returns the probability vector proportional to e^{S_n phi(a.future.tail)}
    in word order, together with a certified bound on the probabilities from
    series truncation.
    """
    base = spec.alphabet.size
    W.check_budget(base**n, "half-line kernel")
    future_word = np.asarray(future_word, dtype=np.int8).reshape(-1)
    n_words = base**n
    wm = W.words_matrix(n, spec.alphabet.values)
    if future_word.size:
        full = np.concatenate(
            [wm, np.broadcast_to(future_word, (n_words, future_word.size))], axis=1
        )
    else:
        full = wm
    # phi(S^k .) depends on the suffix from k; evaluate each suffix length once
    # over its |E|^(n-k) distinct words and gather.
    log_w = np.zeros(n_words)
    err = 0.0
    idx = np.arange(n_words)
    for k in range(n):
        suffix_len = n - k
        sub = W.words_matrix(suffix_len, spec.alphabet.values)
        if future_word.size:
            sub_full = np.concatenate(
                [sub, np.broadcast_to(future_word, (base**suffix_len, future_word.size))],
                axis=1,
            )
        else:
            sub_full = sub
        v, e = potential_values(spec, sub_full, tail)
        log_w += v[idx % base**suffix_len]
        err += e
    log_w -= log_w.max()
    weights = np.exp(log_w)
    probs = weights / weights.sum()
    # Each exponent is off by at most err; probabilities move by <= e^{2err}-1.
    prob_bound = math.expm1(2.0 * err)
    return probs, prob_bound


def _kernel_apply(spec, n, f: CylinderFunction, future_word, tail):
    probs, _ = half_line_kernel(spec, n, tail, future_word)
    base = spec.alphabet.size
    wm = W.words_matrix(n, spec.alphabet.values)
    full = np.concatenate(
        [wm, np.broadcast_to(np.asarray(future_word, dtype=np.int8),
                             (base**n, len(future_word)))],
        axis=1,
    ) if len(future_word) else wm
    d = f.depth
    fv = np.array([f.values[W.word_index(row[:d], spec.alphabet.values)]
                   for row in full])
    return float(np.dot(probs, fv))


def kernel_consistency_check(spec: PotentialSpec, m: int, n: int,
                             f: CylinderFunction, tail: Tail = PLUS,
                             boundary_depth: int = 2):
    """Defect of the tower identity gamma_n(gamma_m f) = gamma_n f, m <= n.

    Probes every boundary word of the given depth beyond position n and
    returns the worst absolute discrepancy.  The identity is an algebraic
    consequence of Birkhoff additivity, so the defect measures floating-point
    and truncation noise only.
    """
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    base = spec.alphabet.size
    vals = spec.alphabet.values
    boundary = W.words_matrix(boundary_depth, vals)
    worst = 0.0
    for u in boundary:
        u = tuple(int(x) for x in u)
        direct = _kernel_apply(spec, n, f, u, tail)
        # inner kernel value as a function of the (n-m)-suffix plus boundary
        wm = W.words_matrix(n, vals)
        probs, _ = half_line_kernel(spec, n, tail, u)
        inner_cache = {}
        total = 0.0
        for row, p in zip(wm, probs):
            suffix = tuple(int(x) for x in row[m:]) + u
            if suffix not in inner_cache:
                inner_cache[suffix] = _kernel_apply(spec, m, f, suffix, tail)
            total += p * inner_cache[suffix]
        worst = max(worst, abs(total - direct))
    return worst


# -- transfer operator -------------------------------------------------------


def transfer_weights(spec: PotentialSpec, depth: int, tail: Tail = PLUS,
                     entry_compensation: bool | None = None):
    """e^{phi(a.w.tail)} for all letters a and depth-m words w.

    Returns (weights, err) with weights[a, i] the entry feeding word i from
    its preimage with first letter a; err bounds each exponent's truncation.

    For the product family the entering letter's coupling beyond the window
    is a deterministic series (its future lag terms never touch another
    spin), so by default each entry weight carries the exact factor
    e^{a * sum_{k>m} w_k}.  Without it the finite chain's letter odds
    telescope only over the first m lags and the equilibrium marginal is
    pinned at the truncated series value, a bias of order v_m that no
    affordable depth removes.  Pair potentials get no compensation: their
    beyond-window terms involve future letters that the window cannot know.
    """
    base = spec.alphabet.size
    n_words = base**depth
    W.check_budget(n_words * base, "transfer matrix")
    big = W.words_matrix(depth + 1, spec.alphabet.values)
    phi, err = potential_values(spec, big, tail)
    if entry_compensation is None:
        entry_compensation = spec.kind == "product_type"
    if entry_compensation:
        if spec.kind != "product_type":
            raise ValueError("entry compensation is exact only for product_type")
        phi = phi + big[:, 0] * spec.coupling_weight_tail(depth + 1)
    return np.exp(phi).reshape(base, n_words), err


def _apply_transfer(weights: np.ndarray, f: np.ndarray) -> np.ndarray:
    """(L f)(w) = sum_a weights[a, w] * f(a * w[:-1]); fixed accumulation order."""
    base, n_words = weights.shape
    stride = n_words // base
    parent = np.arange(n_words) // base
    out = np.zeros(n_words)
    for a in range(base):
        out += weights[a] * f[a * stride + parent]
    return out


def _apply_adjoint(weights: np.ndarray, g: np.ndarray) -> np.ndarray:
    """(L^T g)(u) = sum_b e^{phi(u.b.tail)} g(u[1:] * b)."""
    base, n_words = weights.shape
    stride = n_words // base
    idx = np.arange(n_words)
    tail_idx = (idx % stride) * base
    out = np.zeros(n_words)
    flat = weights.reshape(-1)  # flat[index(u.b)] = e^{phi(u.b.tail)}
    for b in range(base):
        out += flat[idx * base + b] * g[tail_idx + b]
    return out


def dominant_eigenpair(weights: np.ndarray, tol: float = 1e-14,
                       max_iters: int = 50_000):
    """Power iteration for the dominant eigenpair of the sliding-window matrix.

    Returns (lam, right, left, residual, iterations); ``right`` is sup-
    normalized and strictly positive, ``left`` sums to one.  Raises
    ConvergenceError (carrying the last residual) if the relative eigenvalue
    change does not fall below ``tol`` within ``max_iters``.
    """
    base, n_words = weights.shape
    h = np.ones(n_words)
    nu = np.full(n_words, 1.0 / n_words)
    lam = float("nan")
    for it in range(1, max_iters + 1):
        Mh = _apply_transfer(weights, h)
        new_lam = float(np.max(Mh))
        h = Mh / new_lam
        Mt = _apply_adjoint(weights, nu)
        nu = Mt / float(np.sum(Mt))
        if it > 1 and abs(new_lam - lam) <= tol * abs(new_lam):
            lam = new_lam
            break
        lam = new_lam
    else:
        resid = float(np.max(np.abs(_apply_transfer(weights, h) - lam * h)))
        raise ConvergenceError(
            f"power iteration did not converge in {max_iters} iterations",
            residual=resid,
        )
    residual = float(np.max(np.abs(_apply_transfer(weights, h) - lam * h))) / float(
        np.max(np.abs(h))
    )
    return lam, h, nu, residual, it


@dataclass
class TransferModel:
    """Converged finite transfer-operator model at one cylinder depth."""

    spec: PotentialSpec
    depth: int
    tail: Tail
    lam: float
    pressure: float
    right_eig: CylinderFunction
    left_eig: np.ndarray
    residual: float
    iterations: int
    truncation_err: float
    weights: np.ndarray = field(repr=False)

    @property
    def matrix_dim(self) -> int:
        return self.spec.alphabet.size ** self.depth

    def to_json(self) -> str:
        return dump_json(
            {
                "alpha": self.spec.alpha,
                "beta": self.spec.beta,
                "kind": self.spec.kind,
                "depth": self.depth,
                "tail": self.tail.label(),
                "lambda": self.lam,
                "pressure": self.pressure,
                "residual": self.residual,
                "iterations": self.iterations,
                "truncation_err": self.truncation_err,
            }
        )

    def eigenvector_bytes(self, which: str = "right") -> bytes:
        """Little-endian float64 dump in lexicographic word order."""
        v = self.right_eig.values if which == "right" else self.left_eig
        return np.ascontiguousarray(v, dtype="<f8").tobytes()


def build_transfer_model(spec: PotentialSpec, depth: int, tail: Tail = PLUS,
                         tol: float = 1e-14, max_iters: int = 50_000,
                         entry_compensation: bool | None = None) -> TransferModel:
    """Build and converge the depth-m model.

    The default eigenvalue-change tolerance is 1e-14: at 1e-12 the induced
    row-stochastic matrix misses its 1e-12 row-sum contract by a factor ~2.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    weights, err = transfer_weights(spec, depth, tail, entry_compensation)
    lam, h, nu, residual, iters = dominant_eigenpair(weights, tol, max_iters)
    return TransferModel(
        spec=spec,
        depth=depth,
        tail=tail,
        lam=lam,
        pressure=math.log(lam),
        right_eig=CylinderFunction(depth, h, tail),
        left_eig=nu,
        residual=residual,
        iterations=iters,
        truncation_err=err,
        weights=weights,
    )


def quasi_normalization_defect(spec: PotentialSpec, depth: int, tail: Tail = PLUS) -> float:
    """(max - min) of L1 over depth-m cylinders; zero iff quasi-normalized there.

    Uses the raw potential weights (no entry compensation): the notion is a
    property of the operator L_phi itself.
    """
    weights, _ = transfer_weights(spec, depth, tail, entry_compensation=False)
    L1 = np.sum(weights, axis=0)
    return float(L1.max() - L1.min())


def markov_equilibrium(model: TransferModel):
    """Stationary word chain of the normalized matrix and its entropy/energy split.

    P[w -> a.w[:-1]] = weights[a,w] h(a.w[:-1]) / (lam h(w)) is stochastic; the
    stationary law is pi = left*right renormalized, and the Shannon entropy
    rate plus the mean of phi equals log lam exactly for the finite model.
    Returns (pi, entropy, energy).
    """
    weights = model.weights
    base, n_words = weights.shape
    h = model.right_eig.values
    if np.any(h <= 0):
        raise ArithmeticError("right eigenvector must be strictly positive")
    lam = model.lam
    stride = n_words // base
    parent = np.arange(n_words) // base
    pi = model.left_eig * h
    pi = pi / pi.sum()
    log_phi = np.log(weights)  # phi values: log of the stored entries
    entropy = 0.0
    energy = 0.0
    row_check = np.zeros(n_words)
    for a in range(base):
        child = a * stride + parent
        P_a = weights[a] * h[child] / (lam * h)
        row_check += P_a
        with np.errstate(divide="ignore", invalid="ignore"):
            logP = np.where(P_a > 0, np.log(np.where(P_a > 0, P_a, 1.0)), 0.0)
        entropy -= float(np.dot(pi, P_a * logP))
        energy += float(np.dot(pi, P_a * log_phi[a]))
    if np.max(np.abs(row_check - 1.0)) > 1e-12:
        raise ArithmeticError("normalized transfer matrix is not stochastic")
    return pi, entropy, energy


def word_marginal(pi: np.ndarray, depth: int, position: int, base: int = 2) -> np.ndarray:
    """Marginal distribution of the letter at ``position`` under a word law."""
    idx = np.arange(base**depth)
    digit = (idx // base ** (depth - 1 - position)) % base
    return np.bincount(digit, weights=pi, minlength=base)
