"""Chevalley basis, principal sl2-triple and the centralizer of the principal nilpotent.

Sign convention: for every positive non-simple root xi let i be the first
simple index (in ``priority`` order) with xi - alpha_i a root, and put

    x_xi  = [x_{alpha_i},  x_{xi - alpha_i}] / (p + 1)
    x_-xi = [x_{-alpha_i}, x_{-(xi - alpha_i)}] / -(p + 1)

where p is the length of the alpha_i-string below xi - alpha_i.  The pairs
(alpha_i, xi - alpha_i) are the extraspecial pairs; everything else follows.
The root vectors are realised as exact matrices on a faithful module (one
small fundamental module per simple factor) and every structure constant is
read off a commutator.  The resulting integer table is checked for
antisymmetry and for the Jacobi identity on all basis triples before use.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from flint import fmpq_mat

from . import linalg
from .irreps import GradedOperator, _construct, commutator, weyl_dimension
from .rootdata import RootSystem, _components, _string_down

log = logging.getLogger(__name__)

CACHE_ENV = "LOOPGRASS_CACHE_DIR"


class JacobiError(RuntimeError):
    """Structure constants failed an internal consistency check."""


BasisKey = tuple  # ("root", signed root) or ("h", i)


@dataclass
class ChevalleyAlgebra:
    rs: RootSystem
    basis: list[BasisKey]
    table: dict[tuple[int, int], dict[int, int]]
    definition: dict[tuple[int, ...], tuple[int, tuple[int, ...], int]]
    sign_convention: str
    index: dict[BasisKey, int] = field(init=False)

    def __post_init__(self):
        self.index = {key: n for n, key in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def root_index(self, root: Sequence[int]) -> int:
        return self.index[("root", tuple(root))]

    def h_index(self, i: int) -> int:
        return self.index[("h", i)]

    def ad_degree(self, idx: int) -> int:
        """ad-h eigenvalue of a basis vector for the principal h (twice the height)."""
        kind, data = self.basis[idx]
        return 0 if kind == "h" else 2 * sum(data)

    def structure_constant(self, alpha: Sequence[int], beta: Sequence[int]) -> int:
        """N_{alpha, beta} with [x_alpha, x_beta] = N x_{alpha+beta}."""
        a, b = self.root_index(alpha), self.root_index(beta)
        gamma = tuple(x + y for x, y in zip(alpha, beta))
        key = ("root", gamma)
        if key not in self.index:
            return 0
        return self.table.get((a, b), {}).get(self.index[key], 0)

    def bracket(self, x: Sequence, y: Sequence) -> list[Fraction]:
        out = [Fraction(0)] * self.dim
        for a, xa in enumerate(x):
            if xa == 0:
                continue
            for b, yb in enumerate(y):
                if yb == 0:
                    continue
                for c, n in self.table.get((a, b), {}).items():
                    out[c] += xa * yb * n
        return out

    def unit(self, idx: int) -> list[Fraction]:
        v = [Fraction(0)] * self.dim
        v[idx] = Fraction(1)
        return v

    def to_json(self) -> dict:
        return {
            "cartan": self.rs.cartan.as_lists(),
            "sign_convention": self.sign_convention,
            "basis": [[k, list(d) if k == "root" else d] for k, d in self.basis],
            "constants": sorted([a, b, c, n] for (a, b), row in self.table.items() for c, n in row.items()),
        }


# ---------------------------------------------------------------------------
# construction


def _priority_tag(priority: Sequence[int]) -> str:
    return "extraspecial:" + ",".join(str(i) for i in priority)


def _definitions(rs: RootSystem, priority: Sequence[int]):
    roots = set(rs.positive_roots)
    defs = {}
    r = rs.rank
    for xi in rs.positive_roots:
        if sum(xi) == 1:
            continue
        for i in priority:
            beta = tuple(xi[k] - (1 if k == i else 0) for k in range(r))
            if beta in roots:
                p = _string_down(roots, beta, i)
                defs[xi] = (i, beta, p + 1)
                defs[tuple(-x for x in xi)] = (i, tuple(-x for x in beta), -(p + 1))
                break
    return defs


def _faithful_modules(rs: RootSystem):
    """Smallest fundamental module of each simple factor; their sum is faithful."""
    mods = {}
    for comp in _components(rs.cartan.entries):
        best = min(comp, key=lambda i: (weyl_dimension(rs, tuple(1 if k == i else 0 for k in range(rs.rank))), i))
        lam = tuple(-1 if k == best else 0 for k in range(rs.rank))
        mods[tuple(comp)] = _construct(rs, lam)
    return mods


def _same(C: GradedOperator, X: GradedOperator) -> Fraction | None:
    """Scalar c with C = c X, or None."""
    c = None
    for mu, B in X.blocks.items():
        for a in range(B.nrows()):
            for b in range(B.ncols()):
                if B[a, b] != 0:
                    D = C.blocks.get(mu)
                    val = D[a, b] / B[a, b] if D is not None else 0
                    c = linalg.to_fraction(val)
                    break
            if c is not None:
                break
        if c is not None:
            break
    if c is None:
        return None
    if set(C.blocks) - set(X.blocks):
        return None
    for mu, B in X.blocks.items():
        D = C.blocks.get(mu, fmpq_mat(B.nrows(), B.ncols()))
        if not linalg.is_zero(D - B * linalg._q(c)):
            return None
    return c


def build_chevalley(rs: RootSystem, priority: Sequence[int] | None = None, check: bool = True) -> ChevalleyAlgebra:
    r = rs.rank
    if priority is None:
        priority = list(range(r))
    priority = list(priority)
    defs = _definitions(rs, priority)
    pos = list(rs.positive_roots)
    neg = [tuple(-x for x in b) for b in reversed(pos)]
    basis: list[BasisKey] = [("root", b) for b in neg] + [("h", i) for i in range(r)] + [("root", b) for b in pos]
    index = {key: n for n, key in enumerate(basis)}

    comps = _faithful_modules(rs)
    comp_of = {}
    for comp, mod in comps.items():
        for b in pos:
            if any(b[k] for k in comp):
                comp_of[b] = comp
                comp_of[tuple(-x for x in b)] = comp

    ops: dict[tuple[int, ...], GradedOperator] = {}

    def op(root):
        if root in ops:
            return ops[root]
        mod = comps[comp_of[root]]
        ht = sum(root)
        if abs(ht) == 1:
            i = next(k for k in range(r) if root[k])
            res = mod.raising(i) if ht > 0 else mod.lowering(i)
        else:
            i, rest, n = defs[root]
            simple = tuple((1 if ht > 0 else -1) if k == i else 0 for k in range(r))
            res = commutator(op(simple), op(rest), mod.dims).scaled(Fraction(1, n))
        ops[root] = res
        return res

    a = rs.cartan.entries
    coroot = {b: c for b, c in zip(pos, rs.coroots)}
    table: dict[tuple[int, int], dict[int, int]] = {}

    def put(x, y, row):
        row = {c: n for c, n in row.items() if n != 0}
        if row:
            table[(x, y)] = row

    all_roots = neg + pos
    for alpha in all_roots:
        ia = index[("root", alpha)]
        for i in range(r):
            ih = index[("h", i)]
            val = sum(a[i][j] * alpha[j] for j in range(r))
            put(ih, ia, {ia: val})
            put(ia, ih, {ia: -val})
        for beta in all_roots:
            ib = index[("root", beta)]
            gamma = tuple(x + y for x, y in zip(alpha, beta))
            if comp_of[alpha] != comp_of[beta]:
                continue
            mod = comps[comp_of[alpha]]
            C = commutator(op(alpha), op(beta), mod.dims)
            if all(x == 0 for x in gamma):
                if sum(alpha) > 0:
                    h = {index[("h", k)]: c for k, c in enumerate(coroot[alpha])}
                else:
                    h = {index[("h", k)]: -c for k, c in enumerate(coroot[beta])}
                expect = None
                for k, c in h.items():
                    term = mod.cartan_operator(basis[k][1]).scaled(c)
                    expect = term if expect is None else expect.combine(term, 1, 1)
                diff = C.combine(expect, 1, -1)
                if diff.blocks:
                    raise JacobiError(f"[x_{alpha}, x_{beta}] is not the coroot")
                put(ia, ib, h)
            elif ("root", gamma) in index:
                n = _same(C, op(gamma))
                if n is None or n.denominator != 1:
                    raise JacobiError(f"[x_{alpha}, x_{beta}] not an integer multiple of x_{gamma}")
                put(ia, ib, {index[("root", gamma)]: int(n)})
            elif C.blocks:
                raise JacobiError(f"[x_{alpha}, x_{beta}] should vanish")

    alg = ChevalleyAlgebra(rs, basis, table, defs, _priority_tag(priority))
    if check:
        check_structure(alg)
    return alg


def check_structure(alg: ChevalleyAlgebra) -> None:
    """Antisymmetry, |N_{a,b}| = p + 1, and Jacobi on every basis triple."""
    n = alg.dim
    for (x, y), row in alg.table.items():
        other = alg.table.get((y, x), {})
        if {c: -v for c, v in row.items()} != other:
            raise JacobiError(f"antisymmetry fails for basis pair ({x}, {y})")
    roots = {tuple(b) for b in alg.rs.positive_roots}
    roots |= {tuple(-v for v in b) for b in roots}
    for x in range(n):
        kx, dx = alg.basis[x]
        if kx != "root":
            continue
        for y in range(n):
            ky, dy = alg.basis[y]
            if ky != "root":
                continue
            gamma = tuple(u + v for u, v in zip(dx, dy))
            if gamma in roots:
                p = 0
                cur = list(dy)
                while True:
                    cur = [u - v for u, v in zip(cur, dx)]
                    if tuple(cur) in roots:
                        p += 1
                    else:
                        break
                if abs(alg.table.get((x, y), {}).get(alg.index[("root", gamma)], 0)) != p + 1:
                    raise JacobiError(f"|N| != p+1 for {dx}, {dy}")
    for x in range(n):
        for y in range(x + 1, n):
            bxy = alg.table.get((x, y), {})
            for z in range(y + 1, n):
                acc: dict[int, int] = {}
                for (u, v, w) in ((x, y, z), (y, z, x), (z, x, y)):
                    for c, k in alg.table.get((v, w), {}).items():
                        for d, m in alg.table.get((u, c), {}).items():
                            acc[d] = acc.get(d, 0) + k * m
                if any(acc.values()):
                    raise JacobiError(f"Jacobi identity fails on basis triple ({x}, {y}, {z})")
            del bxy


def ad_matrix(alg: ChevalleyAlgebra, x: Sequence) -> fmpq_mat:
    """Matrix of [x, -] in the Chevalley basis (column b = coordinates of [x, b_b])."""
    n = alg.dim
    M = [[Fraction(0)] * n for _ in range(n)]
    for a, xa in enumerate(x):
        if xa == 0:
            continue
        for b in range(n):
            for c, k in alg.table.get((a, b), {}).items():
                M[c][b] += xa * k
    return linalg.qmat(M, n, n)


# ---------------------------------------------------------------------------
# principal triple and centralizer


@dataclass(frozen=True)
class PrincipalTriple:
    h: tuple[Fraction, ...]
    e: tuple[Fraction, ...]
    f: tuple[Fraction, ...]
    h_coeffs: tuple[Fraction, ...]  # h = sum c_i h_i
    f_coeffs: tuple[Fraction, ...]  # f = sum a_i x_{-alpha_i}


def principal_triple(alg: ChevalleyAlgebra) -> PrincipalTriple:
    rs = alg.rs
    r = rs.rank
    a = rs.cartan.entries
    # <alpha_j, h> = sum_i c_i a_ij = 2
    at = [[a[i][j] for i in range(r)] for j in range(r)]
    c = linalg.solve_unique(at, [2] * r)
    h = [Fraction(0)] * alg.dim
    e = [Fraction(0)] * alg.dim
    f = [Fraction(0)] * alg.dim
    for i in range(r):
        simple = tuple(1 if k == i else 0 for k in range(r))
        h[alg.h_index(i)] = c[i]
        e[alg.root_index(simple)] = Fraction(1)
        # [e, f] = sum_i a_i h_i, so a_i = c_i
        f[alg.root_index(tuple(-x for x in simple))] = c[i]
    triple = PrincipalTriple(tuple(h), tuple(e), tuple(f), tuple(c), tuple(c))
    _check_triple(alg, triple)
    return triple


def _check_triple(alg: ChevalleyAlgebra, t: PrincipalTriple) -> None:
    he = alg.bracket(t.h, t.e)
    hf = alg.bracket(t.h, t.f)
    ef = alg.bracket(t.e, t.f)
    if he != [2 * x for x in t.e] or hf != [-2 * x for x in t.f] or ef != list(t.h):
        raise JacobiError("principal triple relations fail")


@dataclass(frozen=True)
class CentralizerBasis:
    elements: tuple[tuple[Fraction, ...], ...]
    degrees: tuple[int, ...]  # ad-h eigenvalues, ascending

    @property
    def q_degrees(self) -> tuple[int, ...]:
        return tuple(d // 2 for d in self.degrees)


def centralizer_of_e(alg: ChevalleyAlgebra, triple: PrincipalTriple) -> CentralizerBasis:
    """ker ad(e), one ad-h eigenspace at a time so every basis vector is homogeneous."""
    ad_e = ad_matrix(alg, triple.e)
    blocks: dict[int, list[int]] = {}
    for idx in range(alg.dim):
        blocks.setdefault(alg.ad_degree(idx), []).append(idx)
    elements, degrees = [], []
    for deg in sorted(blocks):
        cols = blocks[deg]
        rows = blocks.get(deg + 2, [])
        sub = linalg.submatrix(ad_e, rows, cols)
        for v in linalg.nullspace(sub):
            full = [Fraction(0)] * alg.dim
            for idx, x in zip(cols, v):
                full[idx] = Fraction(x)
            elements.append(tuple(full))
            degrees.append(deg)
    return CentralizerBasis(tuple(elements), tuple(degrees))


# ---------------------------------------------------------------------------
# cache


def cache_path(rs: RootSystem, cache_dir: str | os.PathLike | None) -> Path | None:
    if cache_dir is None:
        cache_dir = os.environ.get(CACHE_ENV)
    if not cache_dir:
        return None
    flat = "_".join("".join(str(x).replace("-", "m") for x in row) for row in rs.cartan.entries)
    return Path(cache_dir) / f"chevalley_{flat}.json"


def from_json(rs: RootSystem, data: dict) -> ChevalleyAlgebra:
    if data["cartan"] != rs.cartan.as_lists():
        raise ValueError("cache file belongs to a different Cartan matrix")
    basis = [("root", tuple(d)) if k == "root" else ("h", d) for k, d in data["basis"]]
    table: dict[tuple[int, int], dict[int, int]] = {}
    for a, b, c, n in data["constants"]:
        table.setdefault((a, b), {})[c] = n
    priority = [int(x) for x in data["sign_convention"].split(":", 1)[1].split(",")]
    return ChevalleyAlgebra(rs, basis, table, _definitions(rs, priority), data["sign_convention"])


def load_or_build(rs: RootSystem, cache_dir=None, priority: Sequence[int] | None = None) -> ChevalleyAlgebra:
    """Structure constants from the cache file when its convention tag matches; rebuild and diff otherwise."""
    if priority is None:
        priority = list(range(rs.rank))
    tag = _priority_tag(priority)
    path = cache_path(rs, cache_dir)
    if path is not None and path.exists():
        data = json.loads(path.read_text())
        if data.get("sign_convention") == tag:
            alg = from_json(rs, data)
            check_structure(alg)
            return alg
        alg = build_chevalley(rs, priority)
        old = {(a, b, c): abs(n) for a, b, c, n in data.get("constants", [])}
        new = {(a, b, c): abs(n) for a, b, c, n in alg.to_json()["constants"]}
        if old != new:
            log.warning("cached constants at %s differ in magnitude from a fresh build", path)
        else:
            log.info("sign convention changed %s -> %s; magnitudes agree", data.get("sign_convention"), tag)
    else:
        alg = build_chevalley(rs, priority)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(alg.to_json(), sort_keys=True))
    return alg
