"""Polynomials in q with nonnegative integer coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class GradedSeries:
    coefficients: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        if any(c < 0 for c in coeffs):
            raise ValueError("coefficients must be nonnegative")
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_degrees(cls, degrees: Iterable[int]) -> "GradedSeries":
        counts: dict[int, int] = {}
        for d in degrees:
            counts[d] = counts.get(d, 0) + 1
        top = max(counts, default=-1)
        return cls(tuple(counts.get(k, 0) for k in range(top + 1)))

    def __getitem__(self, k: int) -> int:
        return self.coefficients[k] if 0 <= k < len(self.coefficients) else 0

    @property
    def total(self) -> int:
        return sum(self.coefficients)

    @property
    def top(self) -> int:
        """Highest degree with a nonzero coefficient (-1 for the zero series)."""
        return len(self.coefficients) - 1

    def dominated_by(self, other: "GradedSeries") -> bool:
        n = max(len(self.coefficients), len(other.coefficients))
        return all(self[k] <= other[k] for k in range(n))

    def is_palindromic(self) -> bool:
        c = self.coefficients
        return c == c[::-1]

    def render(self) -> str:
        terms = []
        for k, c in enumerate(self.coefficients):
            if c == 0:
                continue
            mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms) if terms else "0"

    def __str__(self) -> str:
        return self.render()


def free_series(q_degrees: Sequence[int], upto: int) -> list[int]:
    """Coefficients of prod_i 1/(1 - q^{m_i}) through degree ``upto``."""
    out = [1] + [0] * upto
    for m in q_degrees:
        for k in range(m, upto + 1):
            out[k] += out[k - m]
    return out
