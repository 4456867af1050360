"""Root systems and weight-lattice combinatorics.

Conventions used throughout the package:

* ``cartan[i][j] = <alpha_i^vee, alpha_j>``, so ``s_i(alpha_j) = alpha_j - cartan[i][j] alpha_i``
  and the simple root ``alpha_j`` has fundamental-weight coordinates ``column j``.
* Weights are integer tuples in the fundamental-weight basis.  A weight is
  dominant iff every coordinate is >= 0.
* Roots are integer tuples in simple-root coordinates, coroots in
  simple-coroot coordinates.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .linalg import leading_minors_positive, qmat, to_fraction

Weight = tuple[int, ...]
RootVec = tuple[int, ...]


class CartanError(ValueError):
    """Raised for matrices that are not finite-type Cartan matrices."""


@dataclass(frozen=True)
class CartanMatrix:
    entries: tuple[tuple[int, ...], ...]
    type_label: str | None = None

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        _validate(rows)

    @property
    def rank(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def _components(a) -> list[list[int]]:
    n = len(a)
    seen: set[int] = set()
    comps = []
    for s in range(n):
        if s in seen:
            continue
        comp, todo = [], [s]
        seen.add(s)
        while todo:
            i = todo.pop()
            comp.append(i)
            for j in range(n):
                if j not in seen and a[i][j] != 0:
                    seen.add(j)
                    todo.append(j)
        comps.append(sorted(comp))
    return comps


def _symmetrizer(a) -> list[Fraction]:
    """Half squared root lengths l_i with l_i a_ij = l_j a_ji, shortest root of each component at 1."""
    n = len(a)
    ell: list[Fraction | None] = [None] * n
    for comp in _components(a):
        ell[comp[0]] = Fraction(1)
        todo = [comp[0]]
        while todo:
            i = todo.pop()
            for j in comp:
                if j == i or a[i][j] == 0:
                    continue
                val = ell[i] * a[i][j] / a[j][i]
                if ell[j] is None:
                    ell[j] = val
                    todo.append(j)
                elif ell[j] != val:
                    raise CartanError("matrix is not symmetrizable")
        low = min(ell[j] for j in comp)
        for j in comp:
            ell[j] = ell[j] / low
    return ell  # type: ignore[return-value]


def _validate(a) -> None:
    n = len(a)
    if n == 0:
        raise CartanError("empty Cartan matrix")
    if any(len(row) != n for row in a):
        raise CartanError("Cartan matrix must be square")
    for i in range(n):
        if a[i][i] != 2:
            raise CartanError(f"diagonal entry ({i},{i}) is {a[i][i]}, expected 2")
        for j in range(n):
            if i != j and a[i][j] > 0:
                raise CartanError(f"off-diagonal entry ({i},{j}) is positive")
            if (a[i][j] == 0) != (a[j][i] == 0):
                raise CartanError(f"entries ({i},{j}) and ({j},{i}) violate a_ij=0 <=> a_ji=0")
    ell = _symmetrizer(a)
    sym = [[ell[i] * a[i][j] for j in range(n)] for i in range(n)]
    if not leading_minors_positive(sym):
        raise CartanError("symmetrized matrix is not positive definite; not of finite type")


_LABEL = re.compile(r"^\s*([A-Ga-g])\s*(\d+)\s*$")


def cartan_matrix(label: str) -> CartanMatrix:
    """Cartan matrix of a simple type in Bourbaki numbering ("A3", "B2", "G2", ...)."""
    m = _LABEL.match(label)
    if not m:
        raise CartanError(f"cannot parse type label {label!r}")
    kind, n = m.group(1).upper(), int(m.group(2))
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j, aij=-1, aji=-1):
        a[i][j], a[j][i] = aij, aji

    if kind == "A" and n >= 1:
        for i in range(n - 1):
            link(i, i + 1)
    elif kind in "BC" and n >= 2:
        for i in range(n - 2):
            link(i, i + 1)
        if kind == "B":  # alpha_n short
            link(n - 2, n - 1, -1, -2)
        else:  # alpha_n long
            link(n - 2, n - 1, -2, -1)
    elif kind == "D" and n >= 4:
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif kind == "E" and n in (6, 7, 8):
        link(0, 2)
        link(1, 3)
        for i in range(2, n - 1):
            link(i, i + 1)
    elif kind == "F" and n == 4:
        link(0, 1)
        link(1, 2, -1, -2)
        link(2, 3)
    elif kind == "G" and n == 2:
        link(0, 1, -3, -1)
    else:
        raise CartanError(f"no simple type {kind}{n}")
    return CartanMatrix(tuple(tuple(r) for r in a), f"{kind}{n}")


def langlands_dual(cartan: CartanMatrix) -> CartanMatrix:
    """Cartan matrix of the dual root system (the transpose)."""
    a = cartan.entries
    n = len(a)
    label = cartan.type_label
    if label is not None and label[0] in "BC":
        label = ("C" if label[0] == "B" else "B") + label[1:]
    return CartanMatrix(tuple(tuple(a[j][i] for j in range(n)) for i in range(n)), label)


@dataclass(frozen=True)
class RootSystem:
    cartan: CartanMatrix
    positive_roots: tuple[RootVec, ...]
    coroots: tuple[RootVec, ...]
    heights: tuple[int, ...]
    rho: Weight
    exponents: tuple[int, ...]
    half_lengths: tuple[Fraction, ...]
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def rank(self) -> int:
        return self.cartan.rank

    @property
    def dimension(self) -> int:
        return self.rank + 2 * len(self.positive_roots)

    def root_index(self, root: RootVec) -> int | None:
        return self._index.get(tuple(root))

    def is_root(self, v: Sequence[int]) -> bool:
        v = tuple(v)
        return v in self._index or tuple(-x for x in v) in self._index

    def simple_root_weight(self, i: int) -> Weight:
        a = self.cartan.entries
        return tuple(a[k][i] for k in range(self.rank))

    def root_to_weight(self, root: Sequence[int]) -> Weight:
        a = self.cartan.entries
        r = self.rank
        return tuple(sum(a[k][j] * root[j] for j in range(r)) for k in range(r))

    def coroot_pairing(self, nu: Sequence[int], coroot: Sequence[int]) -> int:
        return sum(c * x for c, x in zip(coroot, nu))


def _string_down(roots: set[RootVec], beta: RootVec, i: int) -> int:
    p = 0
    cur = list(beta)
    while True:
        cur[i] -= 1
        if tuple(cur) in roots:
            p += 1
        else:
            return p


def build_root_system(cartan: CartanMatrix) -> RootSystem:
    """Enumerate positive roots by height-increasing string closure."""
    a = cartan.entries
    r = cartan.rank
    simple = [tuple(1 if k == i else 0 for k in range(r)) for i in range(r)]
    roots: set[RootVec] = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(r):
                pairing = sum(a[i][j] * beta[j] for j in range(r))
                p = _string_down(roots, beta, i)
                q = p - pairing
                if q > 0:
                    gamma = tuple(beta[k] + (1 if k == i else 0) for k in range(r))
                    if gamma not in roots:
                        roots.add(gamma)
                        nxt.append(gamma)
        layer = nxt

    ordered = sorted(roots, key=lambda v: (sum(v), tuple(-x for x in v)))
    ell = _symmetrizer(a)
    coroots = []
    for beta in ordered:
        # (beta, beta) / 2 = sum_ij beta_i beta_j l_i a_ij / 2
        half_len = sum(beta[i] * beta[j] * ell[i] * a[i][j] for i in range(r) for j in range(r)) / 2
        co = [beta[j] * ell[j] / half_len for j in range(r)]
        if any(c.denominator != 1 for c in co):
            raise AssertionError(f"non-integral coroot for {beta}")
        coroots.append(tuple(int(c) for c in co))

    heights = tuple(sum(v) for v in ordered)
    # rho as the half-sum of positive roots, in fundamental-weight coordinates
    total = [sum(v[j] for v in ordered) for j in range(r)]
    rho2 = [sum(a[k][j] * total[j] for j in range(r)) for k in range(r)]
    rho = tuple(x // 2 for x in rho2)

    hist: dict[int, int] = {}
    for h in heights:
        hist[h] = hist.get(h, 0) + 1
    exps = []
    top = max(heights) if heights else 0
    for k in range(1, top + 1):
        exps += [k] * (hist.get(k, 0) - hist.get(k + 1, 0))
    exponents = tuple(sorted(exps))

    index = {v: n for n, v in enumerate(ordered)}
    return RootSystem(
        cartan=cartan,
        positive_roots=tuple(ordered),
        coroots=tuple(coroots),
        heights=heights,
        rho=rho,
        exponents=exponents,
        half_lengths=tuple(ell),
        _index=index,
    )


def root_system(label_or_cartan) -> RootSystem:
    if isinstance(label_or_cartan, RootSystem):
        return label_or_cartan
    if isinstance(label_or_cartan, str):
        return build_root_system(cartan_matrix(label_or_cartan))
    if isinstance(label_or_cartan, CartanMatrix):
        return build_root_system(label_or_cartan)
    return build_root_system(CartanMatrix(tuple(tuple(r) for r in label_or_cartan)))


def reflect(rs: RootSystem, nu: Sequence[int], i: int) -> Weight:
    """s_i(nu) = nu - <nu, alpha_i^vee> alpha_i."""
    a = rs.cartan.entries
    c = nu[i]
    return tuple(nu[k] - c * a[k][i] for k in range(rs.rank))


def dominant_representative(rs: RootSystem, nu: Sequence[int]) -> tuple[Weight, tuple[int, ...]]:
    """Dominant weight in the W-orbit of nu, and the word i_1..i_k with nu+ = s_ik...s_i1 nu."""
    nu = tuple(nu)
    word = []
    while True:
        neg = [i for i, x in enumerate(nu) if x < 0]
        if not neg:
            return nu, tuple(word)
        i = neg[0]
        nu = reflect(rs, nu, i)
        word.append(i)


def antidominant_representative(rs: RootSystem, nu: Sequence[int]) -> Weight:
    nu = tuple(nu)
    while True:
        pos = [i for i, x in enumerate(nu) if x > 0]
        if not pos:
            return nu
        nu = reflect(rs, nu, pos[0])


def weyl_orbit(rs: RootSystem, nu: Sequence[int]) -> frozenset[Weight]:
    nu = tuple(nu)
    seen = {nu}
    todo = deque([nu])
    while todo:
        x = todo.popleft()
        for i in range(rs.rank):
            if x[i] != 0:
                y = reflect(rs, x, i)
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
    return frozenset(seen)


def weyl_group_order(rs: RootSystem) -> int:
    """|W| as the orbit size of a regular weight."""
    return len(weyl_orbit(rs, rs.rho))


def to_root_coords(rs: RootSystem, nu: Sequence[int]) -> tuple[Fraction, ...]:
    """Simple-root coordinates of a weight (exact, generally fractional)."""
    A = qmat(rs.cartan.entries)
    x = A.solve(qmat([[v] for v in nu], rs.rank, 1))
    return tuple(to_fraction(x[i, 0]) for i in range(rs.rank))


def in_root_lattice(rs: RootSystem, nu: Sequence[int]) -> bool:
    return all(c.denominator == 1 for c in to_root_coords(rs, nu))


def height(rs: RootSystem, nu: Sequence[int]) -> Fraction:
    """Sum of simple-root coordinates of a weight."""
    return sum(to_root_coords(rs, nu), Fraction(0))


def two_rho_pairing(rs: RootSystem, nu: Sequence[int]) -> int:
    """Sum over positive coroots of <nu, beta^vee>; for dominant nu this is the top principal degree."""
    return sum(rs.coroot_pairing(nu, co) for co in rs.coroots)


def inner(rs: RootSystem, mu: Sequence[int], nu: Sequence[int]) -> Fraction:
    """W-invariant form with (alpha_i, alpha_i) = 2 l_i, shortest roots of length^2 2."""
    c = to_root_coords(rs, nu)
    return sum((c[j] * mu[j] * rs.half_lengths[j] for j in range(rs.rank)), Fraction(0))


def dominance_ideal(rs: RootSystem, lam_plus: Sequence[int]) -> list[Weight]:
    """Dominant mu with lam_plus - mu a nonnegative integer combination of simple roots.

    Lattice BFS downward from lam_plus, boxed by the simple-root coordinates of
    lam_plus - w0 lam_plus (every such mu lies above w0 lam_plus).
    """
    lam_plus = tuple(lam_plus)
    if any(x < 0 for x in lam_plus):
        raise ValueError(f"{lam_plus} is not dominant")
    r = rs.rank
    low = antidominant_representative(rs, lam_plus)
    box = to_root_coords(rs, tuple(p - q for p, q in zip(lam_plus, low)))
    simple = [rs.simple_root_weight(j) for j in range(r)]
    start = (0,) * r
    seen = {start}
    todo = deque([start])
    found = []
    while todo:
        n = todo.popleft()
        mu = tuple(lam_plus[k] - sum(n[j] * simple[j][k] for j in range(r)) for k in range(r))
        if all(x >= 0 for x in mu):
            found.append(mu)
        for j in range(r):
            m = tuple(n[k] + (1 if k == j else 0) for k in range(r))
            if m[j] <= box[j] and m not in seen:
                seen.add(m)
                todo.append(m)
    found.sort(key=lambda mu: (-two_rho_pairing(rs, mu), tuple(-x for x in mu)))
    return found


def is_minuscule(rs: RootSystem, lam_plus: Sequence[int]) -> bool:
    return dominance_ideal(rs, lam_plus) == [tuple(lam_plus)]
