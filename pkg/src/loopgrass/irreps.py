"""Irreducible modules with exact generator matrices, plus multiplicity oracles.

The module with lowest weight ``lam`` is grown one weight space at a time,
upward from ``v_lam``.  At weight ``nu`` the candidate vectors are
``x_{alpha_i} b`` for basis vectors ``b`` of ``V_{nu - alpha_i}``; a candidate
combination lies in the radical of the contravariant form exactly when every
lowering operator ``x_{-alpha_j}`` sends it into the radical, i.e. to zero in
the (already irreducible) lower weight spaces.  So the radical quotient at
``nu`` is the row space of the matrix of lowering images, which the
commutation relation ``[x_{alpha_i}, x_{-alpha_j}] = delta_ij h_i`` computes
from data one and two levels down.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

from flint import fmpq, fmpq_mat

from . import linalg
from .rootdata import (
    RootSystem,
    Weight,
    dominance_ideal,
    dominant_representative,
    height,
    in_root_lattice,
    inner,
    two_rho_pairing,
    weyl_orbit,
)

if TYPE_CHECKING:
    from .chevalley import ChevalleyAlgebra


class ConsistencyError(RuntimeError):
    """An internal cross-check between independent routes failed."""


def _add(u: Sequence[int], v: Sequence[int]) -> Weight:
    return tuple(a + b for a, b in zip(u, v))


def _sub(u: Sequence[int], v: Sequence[int]) -> Weight:
    return tuple(a - b for a, b in zip(u, v))


# ---------------------------------------------------------------------------
# multiplicity oracles


def weyl_dimension(rs: RootSystem, lam_plus: Sequence[int]) -> int:
    num = Fraction(1)
    for co in rs.coroots:
        num *= Fraction(rs.coroot_pairing(_add(lam_plus, rs.rho), co), rs.coroot_pairing(rs.rho, co))
    assert num.denominator == 1
    return int(num)


def freudenthal(rs: RootSystem, lam_plus: Sequence[int]) -> dict[Weight, int]:
    """Full weight-multiplicity table of the irreducible module with highest weight lam_plus."""
    lam_plus = tuple(lam_plus)
    dom = dominance_ideal(rs, lam_plus)  # decreasing height, so every higher weight comes first
    mult: dict[Weight, int] = {}
    # (nu, beta) = <nu, beta^vee> (beta, beta)/2 for each positive root beta
    roots = []
    for b, co in zip(rs.positive_roots, rs.coroots):
        half = inner(rs, rs.root_to_weight(b), rs.root_to_weight(b)) / 2
        assert half.denominator == 1
        half = int(half)
        roots.append((rs.root_to_weight(b), co, half))
    lr = _add(lam_plus, rs.rho)
    top = inner(rs, lr, lr)
    dom_cache: dict[Weight, Weight] = {}

    def m(nu):
        rep = dom_cache.get(nu)
        if rep is None:
            rep = dom_cache[nu] = dominant_representative(rs, nu)[0]
        return mult.get(rep, 0)

    r = rs.rank
    # tail[(nu, b)] = sum_{k >= 1} (nu + k beta, beta) m(nu + k beta), filled down each string
    tail: dict[tuple[Weight, int], int] = {}

    def string_sum(mu, b):
        a, co, half = roots[b]
        chain = []
        nu = mu
        while (nu, b) not in tail:
            nxt = tuple(nu[t] + a[t] for t in range(r))
            mk = m(nxt)
            if mk == 0:
                tail[(nu, b)] = 0
                break
            chain.append((nu, nxt, mk))
            nu = nxt
        for nu, nxt, mk in reversed(chain):
            tail[(nu, b)] = tail[(nxt, b)] + sum(nxt[t] * co[t] for t in range(r)) * half * mk
        return tail[(mu, b)]

    for mu in dom:
        if mu == lam_plus:
            mult[mu] = 1
            continue
        acc = sum(string_sum(mu, b) for b in range(len(roots)))
        mr = _add(mu, rs.rho)
        val = 2 * acc / (top - inner(rs, mr, mr))
        if val.denominator != 1:
            raise ConsistencyError(f"non-integral Freudenthal multiplicity at {mu}")
        mult[mu] = int(val)

    table = {}
    for mu, k in mult.items():
        if k:
            for nu in weyl_orbit(rs, mu):
                table[nu] = k
    return table


def multiplicities_csv(table: Mapping[Weight, int]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    rank = len(next(iter(table)))
    w.writerow([f"w{i + 1}" for i in range(rank)] + ["multiplicity"])
    for mu in sorted(table, key=lambda x: tuple(-c for c in x)):
        w.writerow(list(mu) + [table[mu]])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# graded operators


@dataclass
class GradedOperator:
    """Linear map on a module that shifts every weight by ``shift``.

    ``blocks[mu]`` is the matrix V_mu -> V_{mu + shift}; absent blocks are zero.
    """

    shift: Weight
    blocks: dict[Weight, fmpq_mat] = field(default_factory=dict)

    def then(self, other: "GradedOperator", dims: Mapping[Weight, int]) -> "GradedOperator":
        """other o self."""
        out = {}
        for mu, B in self.blocks.items():
            nu = _add(mu, self.shift)
            A = other.blocks.get(nu)
            if A is None:
                continue
            C = A * B
            if not linalg.is_zero(C):
                out[mu] = C
        return GradedOperator(_add(self.shift, other.shift), out)

    def combine(self, other: "GradedOperator", a, b) -> "GradedOperator":
        """a*self + b*other (same shift)."""
        assert self.shift == other.shift
        out = {}
        for mu in set(self.blocks) | set(other.blocks):
            X = self.blocks.get(mu)
            Y = other.blocks.get(mu)
            if X is None:
                C = Y * fmpq(b)
            elif Y is None:
                C = X * fmpq(a)
            else:
                C = X * fmpq(a) + Y * fmpq(b)
            if not linalg.is_zero(C):
                out[mu] = C
        return GradedOperator(self.shift, out)

    def scaled(self, c) -> "GradedOperator":
        c = fmpq(c.numerator, c.denominator) if isinstance(c, Fraction) else fmpq(c)
        return GradedOperator(self.shift, {mu: B * c for mu, B in self.blocks.items()})


def commutator(A: GradedOperator, B: GradedOperator, dims) -> GradedOperator:
    """[A, B] = AB - BA."""
    return B.then(A, dims).combine(A.then(B, dims), 1, -1)


# ---------------------------------------------------------------------------
# the module


@dataclass
class IrreducibleModule:
    rs: RootSystem
    lam: Weight  # anti-dominant lowest weight
    levels: list[list[Weight]]
    dims: dict[Weight, int]
    E: list[dict[Weight, fmpq_mat]]
    F: list[dict[Weight, fmpq_mat]]
    algebra: "ChevalleyAlgebra | None" = None
    _ops: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.level_of = {mu: k for k, lev in enumerate(self.levels) for mu in lev}
        self.weights = [mu for lev in self.levels for mu in lev]
        self.offset = {}
        self.level_offset = {}
        pos = 0
        for lev in self.levels:
            loc = 0
            for mu in lev:
                self.offset[mu] = pos
                self.level_offset[mu] = loc
                pos += self.dims[mu]
                loc += self.dims[mu]
        self.dim = pos
        self.level_dims = [sum(self.dims[mu] for mu in lev) for lev in self.levels]

    @property
    def lam_plus(self) -> Weight:
        return dominant_representative(self.rs, self.lam)[0]

    @property
    def top_level(self) -> int:
        return len(self.levels) - 1

    @property
    def lowest_vector(self) -> list[Fraction]:
        v = [Fraction(0)] * self.dim
        v[0] = Fraction(1)
        return v

    def multiplicities(self) -> dict[Weight, int]:
        return dict(self.dims)

    # -- operators ---------------------------------------------------------

    def raising(self, i: int) -> GradedOperator:
        return GradedOperator(self.rs.simple_root_weight(i), dict(self.E[i]))

    def lowering(self, i: int) -> GradedOperator:
        a = self.rs.simple_root_weight(i)
        return GradedOperator(tuple(-x for x in a), dict(self.F[i]))

    def cartan_operator(self, i: int) -> GradedOperator:
        zero = (0,) * self.rs.rank
        blocks = {}
        for mu, d in self.dims.items():
            if mu[i]:
                blocks[mu] = linalg.identity(d) * fmpq(mu[i])
        return GradedOperator(zero, blocks)

    def root_operator(self, root: Sequence[int]) -> GradedOperator:
        """Action of the Chevalley basis vector x_root (root in simple-root coordinates, signed)."""
        root = tuple(root)
        if root in self._ops:
            return self._ops[root]
        r = self.rs.rank
        ht = sum(root)
        if abs(ht) == 1:
            i = next(k for k in range(r) if root[k])
            op = self.raising(i) if ht > 0 else self.lowering(i)
        else:
            if self.algebra is None:
                raise ValueError("non-simple root operators need the Chevalley algebra")
            i, rest, n = self.algebra.definition[root]
            simple = tuple((1 if ht > 0 else -1) if k == i else 0 for k in range(r))
            op = commutator(self.root_operator(simple), self.root_operator(rest), self.dims)
            op = op.scaled(Fraction(1, n))
        self._ops[root] = op
        return op

    def element_operators(self, element: Sequence) -> list[tuple[GradedOperator, Fraction]]:
        """Decompose a Chevalley-basis coordinate vector into (operator, coefficient) pairs."""
        alg = self.algebra
        out = []
        for idx, c in enumerate(element):
            if c == 0:
                continue
            kind, data = alg.basis[idx]
            if kind == "h":
                out.append((self.cartan_operator(data), Fraction(c)))
            else:
                out.append((self.root_operator(data), Fraction(c)))
        return out

    def principal_shift(self, op: GradedOperator) -> int:
        s = height(self.rs, op.shift)
        assert s.denominator == 1
        return int(s)

    def level_matrix(self, terms: Iterable[tuple[GradedOperator, Fraction]], j: int) -> fmpq_mat:
        """Matrix from level j to level j + d of a sum of operators that all shift the principal degree by d."""
        terms = list(terms)
        d = {self.principal_shift(op) for op, _ in terms}
        if len(d) != 1:
            raise ValueError("operators are not principal-homogeneous of one degree")
        d = d.pop()
        t = j + d
        rows = self.level_dims[t] if 0 <= t < len(self.levels) else 0
        cols = self.level_dims[j]
        M = fmpq_mat(rows, cols)
        if rows == 0:
            return M
        for op, c in terms:
            cq = fmpq(c.numerator, c.denominator)
            for mu in self.levels[j]:
                B = op.blocks.get(mu)
                if B is None:
                    continue
                nu = _add(mu, op.shift)
                r0, c0 = self.level_offset[nu], self.level_offset[mu]
                for a in range(B.nrows()):
                    for b in range(B.ncols()):
                        x = B[a, b]
                        if x != 0:
                            M[r0 + a, c0 + b] += cq * x
        return M

    def apply_operator(self, op: GradedOperator, vector: Sequence) -> list[Fraction]:
        out = [Fraction(0)] * self.dim
        for mu, B in op.blocks.items():
            o = self.offset[mu]
            col = linalg.qmat([[vector[o + k]] for k in range(self.dims[mu])], self.dims[mu], 1)
            if linalg.is_zero(col):
                continue
            img = B * col
            nu = _add(mu, op.shift)
            t = self.offset[nu]
            for k in range(img.nrows()):
                out[t + k] += linalg.to_fraction(img[k, 0])
        return out


def _construct(rs: RootSystem, lam: Sequence[int], reverse: bool = False) -> IrreducibleModule:
    lam = tuple(lam)
    if any(x > 0 for x in lam):
        raise ValueError(f"{lam} is not anti-dominant")
    r = rs.rank
    alpha = [rs.simple_root_weight(i) for i in range(r)]
    dims: dict[Weight, int] = {lam: 1}
    E: list[dict[Weight, fmpq_mat]] = [dict() for _ in range(r)]
    F: list[dict[Weight, fmpq_mat]] = [dict() for _ in range(r)]
    levels = [[lam]]
    order = list(range(r))[::-1] if reverse else list(range(r))

    while True:
        prev = levels[-1]
        cand_weights = sorted({_add(mu, alpha[i]) for mu in prev for i in range(r)}, key=lambda w: tuple(-x for x in w))
        new_level = []
        for nu in cand_weights:
            below = [(i, _sub(nu, alpha[i])) for i in order if _sub(nu, alpha[i]) in dims]
            cand = []  # (i, b)
            for i, mu in below:
                bs = range(dims[mu])
                cand += [(i, b) for b in (reversed(bs) if reverse else bs)]
            row_blocks = [(j, _sub(nu, alpha[j])) for j in range(r) if _sub(nu, alpha[j]) in dims]
            nrows = sum(dims[w] for _, w in row_blocks)
            L = fmpq_mat(nrows, len(cand))
            r0 = 0
            for j, wj in row_blocks:
                # block (j, i): E_i F_j - delta_ij <nu - alpha_i, alpha_i^vee>
                for c, (i, b) in enumerate(cand):
                    src = _sub(nu, alpha[i])
                    if i == j:
                        L[r0 + b, c] -= src[i]
                    low = _sub(src, alpha[j])
                    Fj = F[j].get(src)
                    Ei = E[i].get(low)
                    if Fj is None or Ei is None:
                        continue
                    img = Ei * linalg.column(Fj, b)
                    for k in range(img.nrows()):
                        L[r0 + k, c] += img[k, 0]
                r0 += dims[wj]
            R, pivots = linalg.rref(L)
            if not pivots:
                continue
            d = len(pivots)
            dims[nu] = d
            new_level.append(nu)
            # candidates expressed in the chosen basis: X = top rows of rref
            for i, mu in below:
                cols = [c for c, (ii, _) in enumerate(cand) if ii == i]
                M = fmpq_mat(d, dims[mu])
                for c in cols:
                    b = cand[c][1]
                    for k in range(d):
                        M[k, b] = R[k, c]
                E[i][mu] = M
            r0 = 0
            for j, wj in row_blocks:
                Fj = fmpq_mat(dims[wj], d)
                for k in range(dims[wj]):
                    for t, c in enumerate(pivots):
                        Fj[k, t] = L[r0 + k, c]
                if not linalg.is_zero(Fj):
                    F[j][nu] = Fj
                r0 += dims[wj]
        if not new_level:
            break
        levels.append(new_level)
    # drop zero raising blocks so absent == zero everywhere
    for i in range(r):
        for mu in [m for m, B in E[i].items() if linalg.is_zero(B)]:
            del E[i][mu]
    return IrreducibleModule(rs, lam, levels, dims, E, F)


def build_module(alg: "ChevalleyAlgebra", lam: Sequence[int], reverse: bool = False, dim_cap: int | None = None) -> IrreducibleModule:
    """Irreducible module with lowest weight lam (anti-dominant), checked against both oracles."""
    rs = alg.rs
    lam = tuple(lam)
    lam_plus = dominant_representative(rs, lam)[0]
    expected = weyl_dimension(rs, lam_plus)
    if dim_cap is not None and expected > dim_cap:
        raise ValueError(f"dim V = {expected} exceeds the cap {dim_cap}")
    module = _construct(rs, lam, reverse=reverse)
    module.algebra = alg
    table = freudenthal(rs, lam_plus)
    if module.dim != expected or module.dims != table:
        raise ConsistencyError(
            f"module dims disagree with oracles: built {module.dim}, Weyl {expected}, Freudenthal {sum(table.values())}"
        )
    return module


def apply(module: IrreducibleModule, element: Sequence, vector: Sequence) -> list[Fraction]:
    """element . vector, element given by Chevalley-basis coordinates."""
    out = [Fraction(0)] * module.dim
    for op, c in module.element_operators(element):
        img = module.apply_operator(op, vector)
        out = [x + c * y for x, y in zip(out, img)]
    return out


def joint_kernel(module: IrreducibleModule, elements: Sequence[Sequence]) -> int:
    """dim of the common kernel of the given elements acting on the module."""
    parts = [module.element_operators(x) for x in elements]
    parts = [p for p in parts if p]
    if not parts:
        return module.dim
    homogeneous = all(len({module.principal_shift(op) for op, _ in p}) == 1 for p in parts)
    if homogeneous:
        # kernel of principal-homogeneous maps splits along levels
        total = 0
        for j, lev_dim in enumerate(module.level_dims):
            blocks = [module.level_matrix(p, j) for p in parts]
            stacked = linalg.vstack(blocks, lev_dim)
            total += lev_dim - linalg.rank(stacked)
        return total
    rows = []
    for p in parts:
        M = fmpq_mat(module.dim, module.dim)
        for op, c in p:
            for mu, B in op.blocks.items():
                nu = _add(mu, op.shift)
                o_r, o_c = module.offset[nu], module.offset[mu]
                for a in range(B.nrows()):
                    for b in range(B.ncols()):
                        M[o_r + a, o_c + b] += fmpq(c.numerator, c.denominator) * B[a, b]
        rows.append(M)
    return module.dim - linalg.rank(linalg.vstack(rows, module.dim))


def contravariant_gram(module: IrreducibleModule) -> dict[Weight, fmpq_mat]:
    """Gram matrices of the contravariant form (x_{alpha_i} adjoint to x_{-alpha_i}, <v_lam, v_lam> = 1).

    Each basis vector of V_nu (nu above the bottom) is a chosen x_{alpha_i} b; its pairing
    with w is <b, x_{-alpha_i} w>, read off one level down.
    """
    rs = module.rs
    alpha = [rs.simple_root_weight(i) for i in range(rs.rank)]
    gram = {module.lam: linalg.identity(1)}
    for lev in module.levels[1:]:
        for nu in lev:
            d = module.dims[nu]
            rows = []
            # recover which candidate each basis vector is: the column of E_i equal to a unit vector
            for k in range(d):
                src = None
                for i in range(rs.rank):
                    mu = _sub(nu, alpha[i])
                    Ei = module.E[i].get(mu)
                    if Ei is None:
                        continue
                    for b in range(Ei.ncols()):
                        if all(Ei[t, b] == (1 if t == k else 0) for t in range(d)):
                            src = (i, mu, b)
                            break
                    if src:
                        break
                i, mu, b = src
                Fi = module.F[i].get(nu, fmpq_mat(module.dims[mu], d))
                row = gram[mu] * Fi
                rows.append([row[b, t] for t in range(d)])
            gram[nu] = linalg.qmat(rows, d, d)
    return gram


def seeded_vectors(dim: int, count: int, seed: int) -> list[list[Fraction]]:
    """Random rational vectors with small numerators and denominators."""
    rng = random.Random(seed)
    return [[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(dim)] for _ in range(count)]


def weights_in_root_lattice(module: IrreducibleModule) -> bool:
    return in_root_lattice(module.rs, module.lam)


def top_degree(rs: RootSystem, lam_plus: Sequence[int]) -> int:
    return two_rho_pairing(rs, lam_plus)
