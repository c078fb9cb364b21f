"""Spin-word enumeration and indexing.

Words of length m are indexed lexicographically in alphabet order,
big-endian: index(w) = sum_i digit(w_i) * |E|^(m-1-i).  All cylinder
vectors in the package (kernels, eigenfunctions, window measures) use
this order.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import BudgetExceededError

ENUMERATION_BUDGET = 1 << 20  # hard cap on |E|^m for exact enumeration


def check_budget(n_words: int, what: str = "enumeration") -> None:
    if n_words > ENUMERATION_BUDGET:
        raise BudgetExceededError(
            f"{what} needs {n_words} words, budget is {ENUMERATION_BUDGET}"
        )


@lru_cache(maxsize=32)
def _words_cache(m: int, values: tuple) -> np.ndarray:
    base = len(values)
    n = base**m
    check_budget(n)
    idx = np.arange(n)
    cols = []
    for i in range(m):
        digit = (idx // base ** (m - 1 - i)) % base
        cols.append(np.asarray(values, dtype=np.int8)[digit])
    out = np.stack(cols, axis=1)
    out.setflags(write=False)
    return out


def words_matrix(m: int, values: tuple = (-1, 1)) -> np.ndarray:
    """All length-m words as an (|E|^m, m) int8 array, index order."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return np.zeros((1, 0), dtype=np.int8)
    return _words_cache(m, tuple(values))


def word_index(word, values: tuple = (-1, 1)) -> int:
    base = len(values)
    digits = {v: d for d, v in enumerate(values)}
    idx = 0
    for v in word:
        idx = idx * base + digits[v]
    return idx


def word_from_index(idx: int, m: int, values: tuple = (-1, 1)) -> tuple:
    base = len(values)
    out = []
    for i in range(m):
        out.append(values[(idx // base ** (m - 1 - i)) % base])
    return tuple(out)


def word_string(word) -> str:
    """Render a spin word; +/- for the Ising alphabet, digit indices otherwise."""
    if all(v in (-1, 1) for v in word):
        return "".join("+" if v > 0 else "-" for v in word)
    return "".join(str(v) for v in word)
