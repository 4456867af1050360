"""The cyclic module S(g^e) . v_lam, its Hilbert series and annihilator.

g^e is abelian, so its enveloping algebra is the polynomial ring on a
homogeneous basis p_1..p_r of q-degrees m_1..m_r.  Each p_k raises the
principal level of a weight vector by exactly m_k and v_lam spans level 0, so
a monomial of q-degree d sends v_lam into level d.  The series coefficient in
degree d is the rank of the degree-d monomial images; the annihilator in
degree d is the kernel of that evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Sequence

from flint import fmpq, fmpq_mat

from . import linalg
from .chevalley import CentralizerBasis
from .irreps import IrreducibleModule
from .rootdata import is_minuscule
from .series import GradedSeries, free_series


class NotApplicable(ValueError):
    """The check's hypothesis does not hold for this input."""


Monomial = tuple[int, ...]


@lru_cache(maxsize=4096)
def monomials(q_degrees: tuple[int, ...], d: int) -> tuple[Monomial, ...]:
    """Exponent vectors of weighted degree d, in descending lexicographic order."""
    q_degrees = tuple(q_degrees)
    if d < 0:
        return ()
    if not q_degrees:
        return ((),) if d == 0 else ()
    if len(q_degrees) == 1:
        m = q_degrees[0]
        return ((d // m,),) if d % m == 0 else ()
    out = []
    for e in range(d // q_degrees[0], -1, -1):
        out.extend((e,) + rest for rest in monomials(q_degrees[1:], d - e * q_degrees[0]))
    return tuple(out)


def _split(mono: Monomial, q_degrees: Sequence[int]) -> tuple[int, Monomial, int]:
    """(k, mono / p_k, degree of mono / p_k) for the last variable k present."""
    k = max(i for i, e in enumerate(mono) if e)
    prev = tuple(e - (1 if i == k else 0) for i, e in enumerate(mono))
    return k, prev, sum(e * m for e, m in zip(prev, q_degrees))


@dataclass
class PrincipalAction:
    """Level-to-level matrices of the centralizer generators on a module."""

    module: IrreducibleModule
    centralizer: CentralizerBasis
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.q_degrees = self.centralizer.q_degrees
        self._terms = [self.module.element_operators(p) for p in self.centralizer.elements]
        for terms, m in zip(self._terms, self.q_degrees):
            if {self.module.principal_shift(op) for op, _ in terms} != {m}:
                raise ValueError("centralizer element is not principal-homogeneous of its degree")

    @property
    def top(self) -> int:
        return self.module.top_level

    def level_dim(self, j: int) -> int:
        return self.module.level_dims[j] if 0 <= j <= self.top else 0

    def generator(self, k: int, j: int) -> fmpq_mat:
        """Matrix of p_k from level j to level j + m_k."""
        key = (k, j)
        if key not in self._cache:
            self._cache[key] = self.module.level_matrix(self._terms[k], j)
        return self._cache[key]


@dataclass(frozen=True)
class AnnihilatorLadder:
    """Per-degree bases of Ann(v_lam) as integer coefficient vectors over ``monomials[d]``."""

    q_degrees: tuple[int, ...]
    monomials: dict[int, tuple[Monomial, ...]]
    kernels: dict[int, tuple[tuple[int, ...], ...]]
    top: int  # beyond this every monomial annihilates every vector
    guard: int

    def dimension(self, d: int) -> int:
        return len(self.kernels.get(d, ()))

    def codimension(self, d: int) -> int:
        return len(self.monomials.get(d, ())) - self.dimension(d)

    def dimensions(self) -> tuple[int, ...]:
        return tuple(self.dimension(d) for d in range(self.guard + 1))

    def elements(self, d: int) -> list[dict[Monomial, int]]:
        monos = self.monomials[d]
        return [{m: c for m, c in zip(monos, u) if c} for u in self.kernels.get(d, ())]


def cyclic_series(module: IrreducibleModule, centralizer: CentralizerBasis,
                  action: PrincipalAction | None = None) -> tuple[GradedSeries, AnnihilatorLadder]:
    action = action or PrincipalAction(module, centralizer)
    q = tuple(action.q_degrees)
    top = action.top
    guard = top + len(q) * max(q, default=0)
    images: dict[int, dict[Monomial, fmpq_mat]] = {0: {tuple(0 for _ in q): linalg.identity(1)}}
    coeffs, monos, kernels = [], {}, {}
    for d in range(guard + 1):
        mons = monomials(tuple(q), d)
        monos[d] = tuple(mons)
        n = action.level_dim(d)
        if d > 0:
            layer = {}
            for mono in mons:
                k, prev, dprev = _split(mono, q)
                if n == 0:
                    layer[mono] = fmpq_mat(0, 1)
                else:
                    layer[mono] = action.generator(k, dprev) * images[dprev][prev]
            images[d] = layer
        cols = linalg.hstack([images[d][m] for m in mons], n) if mons else fmpq_mat(n, 0)
        rk = linalg.rank(cols)
        coeffs.append(rk)
        kernels[d] = tuple(linalg.nullspace(cols)) if mons else ()
        images.pop(d - max(q, default=0) - 1, None)
    if any(coeffs[top + 1:]):
        raise AssertionError("nonzero evaluations beyond the top level")
    series = GradedSeries(tuple(coeffs))
    return series, AnnihilatorLadder(tuple(q), monos, kernels, top, guard)


def check_minuscule_full(module: IrreducibleModule, series: GradedSeries) -> bool:
    if not is_minuscule(module.rs, module.lam_plus):
        raise NotApplicable("lowest weight is not minuscule")
    return series.total == module.dim


def free_series_bound(centralizer: CentralizerBasis, series: GradedSeries) -> bool:
    bound = free_series(centralizer.q_degrees, max(series.top, 0))
    return all(c <= b for c, b in zip(series.coefficients, bound))


def _level_blocks(module: IrreducibleModule, vectors: Sequence[Sequence]) -> list[fmpq_mat]:
    """Split a list of vectors into per-level column blocks."""
    blocks = []
    pos = 0
    for n in module.level_dims:
        B = fmpq_mat(n, len(vectors))
        for c, v in enumerate(vectors):
            for a in range(n):
                x = v[pos + a]
                if x:
                    B[a, c] = fmpq(x.numerator, x.denominator) if isinstance(x, Fraction) else fmpq(x)
        blocks.append(B)
        pos += n
    return blocks


def _ladder_residuals(action: PrincipalAction, ladder: AnnihilatorLadder,
                      blocks: Sequence[fmpq_mat], labels: Sequence[Sequence]) -> set[tuple]:
    """(degree, ladder index, column label) for every ladder element not killing a test column.

    ``blocks[j]`` holds the level-j components of the test columns and
    ``labels[j]`` names its columns.  Monomial images are propagated one
    generator at a time; for each (level, degree) the images are flattened
    and hit with the whole kernel matrix in a single product.
    """
    q = ladder.q_degrees
    mmax = max(q, default=0)
    top = ladder.top
    lowest = min((d for d in range(1, top + 1) if ladder.dimension(d)), default=None)
    failures: set[tuple] = set()
    if lowest is None:
        return failures
    kmats = {d: linalg.qmat(ladder.kernels[d]) for d in range(lowest, top + 1) if ladder.dimension(d)}
    for j, X in enumerate(blocks):
        ncols = X.ncols()
        if ncols == 0 or X.nrows() == 0 or top - j < lowest:
            continue
        images: dict[int, dict[Monomial, fmpq_mat]] = {0: {tuple(0 for _ in q): X}}
        for d in range(1, top - j + 1):
            layer = {}
            monos = ladder.monomials[d]
            for mono in monos:
                k, prev, dprev = _split(mono, q)
                layer[mono] = action.generator(k, j + dprev) * images[dprev][prev]
            images[d] = layer
            images.pop(d - mmax - 1, None)
            K = kmats.get(d)
            if K is None:
                continue
            n = action.level_dim(j + d)
            flat = []
            for mono in monos:
                flat.extend(layer[mono].entries())
            res = K * fmpq_mat(len(monos), n * ncols, flat)
            if res == fmpq_mat(res.nrows(), res.ncols()):
                continue
            for t in range(res.nrows()):
                for c in range(ncols):
                    if any(res[t, a * ncols + c] != 0 for a in range(n)):
                        failures.add((d, t, labels[j][c]))
    return failures


def annihilation_failures(action: PrincipalAction, ladder: AnnihilatorLadder,
                          vectors: Sequence[Sequence], weight_basis: bool = False) -> int:
    """Number of (ladder element, vector) pairs with u . v != 0, by direct evaluation.

    With ``weight_basis`` every weight-basis vector is added to the test set.
    Ladder elements above the top level push every vector out of the module
    and are skipped.
    """
    module = action.module
    N = len(vectors)
    blocks = _level_blocks(module, vectors)
    labels = [[("vector", c) for c in range(N)] for _ in blocks]
    if weight_basis:
        start = 0
        for j, n in enumerate(module.level_dims):
            if n:
                blocks[j] = linalg.hstack([linalg.identity(n), blocks[j]], n)
            labels[j] = [("basis", start + a) for a in range(n)] + labels[j]
            start += n
    return len(_ladder_residuals(action, ladder, blocks, labels))


def module_generators(action: PrincipalAction) -> list[list[int]]:
    """Weight-basis vectors (flat indices, grouped by level) generating the module over S(g^e).

    At level j a basis vector is kept when it is not in the span of the images
    of lower levels under the generators p_k together with the vectors already
    kept, so the chosen set maps onto V / S_+ V.
    """
    module = action.module
    out = []
    start = 0
    for j, n in enumerate(module.level_dims):
        incoming = [action.generator(k, j - m) for k, m in enumerate(action.q_degrees) if j - m >= 0]
        incoming = [B for B in incoming if B.ncols()]
        cols = incoming + [linalg.identity(n)]
        M = linalg.hstack(cols, n)
        _, pivots = linalg.rref(M)
        skip = M.ncols() - n
        out.append([start + p - skip for p in pivots if p >= skip])
        start += n
    return out


def operator_failures(action: PrincipalAction, ladder: AnnihilatorLadder) -> int:
    """Number of ladder basis elements that are not the zero operator on the module.

    Each ladder element commutes with every p_k, so its kernel is an
    S(g^e)-submodule; it is zero on the module exactly when it kills a set of
    module generators.
    """
    module = action.module
    gens = module_generators(action)
    blocks, labels = [], []
    start = 0
    for n, idx in zip(module.level_dims, gens):
        B = fmpq_mat(n, len(idx))
        for c, flat in enumerate(idx):
            B[flat - start, c] = 1
        blocks.append(B)
        labels.append([("basis", flat) for flat in idx])
        start += n
    return len({(d, t) for d, t, _ in _ladder_residuals(action, ladder, blocks, labels)})


def check_annihilator_containment(module: IrreducibleModule, ladder: AnnihilatorLadder, v: Sequence,
                                  action: PrincipalAction) -> bool:
    """True iff every ladder element kills v."""
    if action.module is not module:
        raise ValueError("action belongs to a different module")
    return annihilation_failures(action, ladder, [v]) == 0
