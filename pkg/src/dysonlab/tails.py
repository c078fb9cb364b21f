"""Frozen-tail descriptors for configurations beyond an explicit window.

A tail assigns spin values to the sites outside the stored word by a
closed-form pattern, so long-range sums against it can be evaluated and
certified without storing an infinite configuration.  Pattern indexing is
relative: index 0 is the first exterior site (adjacent to the window) and
indices count outward, on either side.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["Tail", "PLUS", "MINUS", "ALTERNATING", "FREE", "periodic", "parse_tail"]


@dataclass(frozen=True)
class Tail:
    kind: str  # "plus" | "minus" | "alternating" | "periodic" | "free"
    word: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in ("plus", "minus", "alternating", "periodic", "free"):
            raise ValueError(f"unknown tail kind {self.kind!r}")
        if self.kind == "periodic" and len(self.word) == 0:
            raise ValueError("periodic tail needs a nonempty word")

    @property
    def frozen(self) -> bool:
        return self.kind != "free"

    def values(self, start: int, count: int) -> np.ndarray:
        """Pattern values at indices start..start+count-1 (index 0 = first exterior site)."""
        if not self.frozen:
            raise ValueError("free tail has no values")
        idx = np.arange(start, start + count)
        if self.kind == "plus":
            return np.ones(count)
        if self.kind == "minus":
            return -np.ones(count)
        if self.kind == "alternating":
            return np.where(idx % 2 == 0, 1.0, -1.0)
        w = np.asarray(self.word, dtype=float)
        return w[idx % len(w)]

    def flipped(self) -> "Tail":
        if self.kind == "plus":
            return MINUS
        if self.kind == "minus":
            return PLUS
        if self.kind == "alternating":
            return periodic((-1, 1))
        if self.kind == "periodic":
            return periodic(tuple(-v for v in self.word))
        return self

    def label(self) -> str:
        if self.kind == "periodic":
            return "periodic:" + "".join("+" if v > 0 else "-" for v in self.word)
        return self.kind


PLUS = Tail("plus")
MINUS = Tail("minus")
ALTERNATING = Tail("alternating")
FREE = Tail("free")


def periodic(word) -> Tail:
    return Tail("periodic", tuple(int(v) for v in word))


def parse_tail(text: str) -> Tail:
    """Parse CLI-style tail names: plus, minus, alternating, free, periodic:+-+."""
    if text.startswith("periodic:"):
        pattern = text.split(":", 1)[1]
        word = tuple(1 if c == "+" else -1 for c in pattern)
        return periodic(word)
    return Tail(text)
