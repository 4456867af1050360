"""Poincare polynomials of orbit closures, two independent ways.

Ordinary cohomology counts Iwahori cells: every coweight nu whose dominant
representative lies below lam+ contributes q^d(nu).  Intersection cohomology
is the principal grading of V_lam.  A brute-force search in the extended
affine Weyl group checks the cell-dimension formula.

Throughout, ``rs`` is the root system of the dual algebra: coweights of G are
its weights, and the roots of G are its coroots.
"""

from __future__ import annotations

import csv
import io
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import floor
from typing import Sequence

from .irreps import freudenthal
from .rootdata import (
    RootSystem,
    Weight,
    antidominant_representative,
    dominance_ideal,
    dominant_representative,
    height,
    weyl_orbit,
)
from .series import GradedSeries


class OracleOutOfRange(RuntimeError):
    """The brute-force search hit its length cap before answering."""


def _pairings(rs: RootSystem, nu: Sequence[int]) -> list[int]:
    return [rs.coroot_pairing(nu, c) for c in rs.coroots]


def cell_degree(nu: Sequence[int], rs: RootSystem) -> int:
    p = _pairings(rs, nu)
    return sum(abs(x) for x in p) - sum(1 for x in p if x > 0)


def cell_table(rs: RootSystem, lam: Sequence[int]) -> dict[Weight, int]:
    lam_plus = dominant_representative(rs, lam)[0]
    table = {}
    for mu in dominance_ideal(rs, lam_plus):
        for nu in weyl_orbit(rs, mu):
            table[nu] = cell_degree(nu, rs)
    return dict(sorted(table.items(), key=lambda kv: (kv[1], tuple(-x for x in kv[0]))))


def cell_table_csv(table: dict[Weight, int]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["coweight", "q_degree"])
    for nu, d in table.items():
        w.writerow([" ".join(str(x) for x in nu), d])
    return buf.getvalue()


def poincare_H(rs: RootSystem, lam: Sequence[int]) -> GradedSeries:
    return GradedSeries.from_degrees(cell_table(rs, lam).values())


def poincare_IH(rs: RootSystem, lam: Sequence[int]) -> GradedSeries:
    """Principal grading of V_lam, with the lowest weight in degree 0."""
    lam_plus = dominant_representative(rs, lam)[0]
    low = antidominant_representative(rs, lam_plus)
    coeffs: dict[int, int] = {}
    for mu, m in freudenthal(rs, lam_plus).items():
        k = height(rs, tuple(a - b for a, b in zip(mu, low)))
        coeffs[int(k)] = coeffs.get(int(k), 0) + m
    return GradedSeries(tuple(coeffs.get(k, 0) for k in range(max(coeffs) + 1)))


def injectivity_check(H: GradedSeries, IH: GradedSeries) -> bool:
    return H.dominated_by(IH)


# ---------------------------------------------------------------------------
# extended affine Weyl group oracle

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class AffineWeylElement:
    """x -> w x + translation on the coweight space (fundamental-weight coordinates of the dual)."""

    w: Matrix
    translation: Weight

    def __call__(self, x: Sequence) -> tuple:
        return tuple(sum(self.w[i][k] * x[k] for k in range(len(x))) + self.translation[i] for i in range(len(x)))

    def __mul__(self, other: "AffineWeylElement") -> "AffineWeylElement":
        n = len(self.translation)
        w = tuple(tuple(sum(self.w[i][k] * other.w[k][j] for k in range(n)) for j in range(n)) for i in range(n))
        t = tuple(sum(self.w[i][k] * other.translation[k] for k in range(n)) + self.translation[i] for i in range(n))
        return AffineWeylElement(w, t)


def _identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _reflection_matrix(rs: RootSystem, root: Sequence[int], coroot: Sequence[int]) -> Matrix:
    """x -> x - <x, coroot> root, with root given in weight coordinates."""
    n = rs.rank
    rw = rs.root_to_weight(root)
    return tuple(tuple(int(i == j) - rw[i] * coroot[j] for j in range(n)) for i in range(n))


def simple_affine_reflections(rs: RootSystem) -> list[AffineWeylElement]:
    """[s_0, s_1, ..., s_r]; s_0 reflects in <x, theta> = 1 for the highest root theta of G."""
    n = rs.rank
    zero = (0,) * n
    out = []
    for i in range(n):
        e = tuple(int(k == i) for k in range(n))
        out.append(AffineWeylElement(_reflection_matrix(rs, e, e), zero))
    # highest coroot of the dual = highest root of G
    k = max(range(len(rs.coroots)), key=lambda t: (sum(rs.coroots[t]), rs.coroots[t]))
    beta, theta = rs.positive_roots[k], rs.coroots[k]
    s0 = AffineWeylElement(_reflection_matrix(rs, beta, theta), rs.root_to_weight(beta))
    return [s0] + out


def _generic_point(rs: RootSystem) -> tuple[Fraction, ...]:
    top = max(sum(c) for c in rs.coroots)
    eps = Fraction(1, 2 * top)
    return (eps,) * rs.rank


def affine_length(rs: RootSystem, x: AffineWeylElement) -> int:
    """Number of affine root hyperplanes separating the base alcove from its image."""
    y = x(_generic_point(rs))
    return sum(abs(floor(sum(a * b for a, b in zip(y, c)))) for c in rs.coroots)


def _finite_weyl_group(rs: RootSystem) -> list[Matrix]:
    gens = [s.w for s in simple_affine_reflections(rs)[1:]]
    n = rs.rank
    seen = {_identity(n)}
    queue = deque(seen)
    while queue:
        w = queue.popleft()
        for g in gens:
            v = tuple(tuple(sum(w[i][k] * g[k][j] for k in range(n)) for j in range(n)) for i in range(n))
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return sorted(seen)


def length_zero_elements(rs: RootSystem) -> list[AffineWeylElement]:
    """Elements of length 0 (one per class of the weight lattice modulo the root lattice)."""
    out = []
    for t in product((-1, 0, 1), repeat=rs.rank):
        for w in _finite_weyl_group(rs):
            x = AffineWeylElement(w, t)
            if affine_length(rs, x) == 0:
                out.append(x)
    return sorted(out, key=lambda x: (x.translation, x.w))


def min_coset_lengths(rs: RootSystem, length_cap: int) -> dict[Weight, int]:
    """Minimal length in each coset t_nu W reached within ``length_cap``, by BFS.

    Every element found is checked: BFS depth must equal the hyperplane count.
    """
    gens = simple_affine_reflections(rs)
    start = length_zero_elements(rs)
    seen = set(start)
    layer = list(start)
    best: dict[Weight, int] = {}
    for depth in range(length_cap + 1):
        for x in layer:
            if affine_length(rs, x) != depth:
                raise AssertionError(f"length mismatch at depth {depth}")
            best.setdefault(x.translation, depth)
        if depth == length_cap:
            break
        nxt = []
        for x in layer:
            for s in gens:
                y = x * s
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        layer = nxt
    return best


def brute_min_coset_length(nu: Sequence[int], rs: RootSystem, length_cap: int = 12) -> int:
    table = min_coset_lengths(rs, length_cap)
    nu = tuple(nu)
    if nu not in table:
        raise OracleOutOfRange(f"coset of t_{nu} not reached within length {length_cap}")
    return table[nu]
