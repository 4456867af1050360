"""Per-case verification records and the battery runner."""

from __future__ import annotations

import csv
import io
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Sequence

from . import linalg
from .chevalley import ChevalleyAlgebra, CentralizerBasis, centralizer_of_e, load_or_build, principal_triple
from .irreps import build_module, joint_kernel, seeded_vectors, weyl_dimension
from .peterson import (
    AnnihilatorLadder,
    PrincipalAction,
    annihilation_failures,
    cyclic_series,
    free_series_bound,
    module_generators,
    operator_failures,
)
from .rootdata import (
    CartanMatrix,
    RootSystem,
    Weight,
    antidominant_representative,
    cartan_matrix,
    dominant_representative,
    in_root_lattice,
    is_minuscule,
    langlands_dual,
    root_system,
    two_rho_pairing,
)
from .schubert import injectivity_check, poincare_H, poincare_IH
from .series import GradedSeries, free_series

log = logging.getLogger(__name__)

FLAGS = (
    "peterson_equality",
    "injectivity",
    "minuscule_full",
    "annihilator_containment",
    "free_series_bound",
    "kostant_invariants",
    "centralizer_structure",
    "module_oracles",
    "series_shape",
    "ladder_ideal",
)


@dataclass
class CaseReport:
    type_label: str | None
    cartan: list[list[int]]  # Cartan matrix of G; all computation happens in its transpose
    lam: list[int]  # anti-dominant
    lam_plus: list[int]
    dim_V: int
    exponents: list[int]
    centralizer_degrees: list[int]  # ad-h eigenvalues
    hilbert_series: list[int]
    poincare_H: list[int]
    poincare_IH: list[int]
    zero_weight_mult: int
    invariants_dim: int | None  # dim of the joint kernel of g^e; None off the root lattice
    minuscule: bool
    in_root_lattice: bool
    ladder_dims: list[int]  # annihilator dimension per q-degree through the top level
    module_generators: int
    operator_failures: int
    vectors_checked: int  # 0 when the direct evaluation was skipped
    vector_failures: int | None
    flags: dict[str, bool | None]
    seed: int
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v is not False for v in self.flags.values())

    def to_dict(self, timings: bool = False) -> dict:
        d = asdict(self)
        if not timings:
            d.pop("timings")
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CaseReport":
        d = dict(d)
        d.setdefault("timings", {})
        return cls(**d)


@dataclass
class BatteryConfig:
    types: list = field(default_factory=lambda: ["A1", "A2", "A3", "B2", "C2", "G2"])
    max_dim: int = 2000
    max_two_rho: int | None = None
    seed: int = 0
    random_vectors: int = 100
    literal_dim_cap: int = 400  # direct evaluation on random and weight-basis vectors up to this dim V
    jobs: int = 1

    def __post_init__(self):
        if self.max_dim is not None and self.max_dim <= 0:
            raise ValueError("max_dim must be positive")
        if self.max_two_rho is not None and self.max_two_rho < 0:
            raise ValueError("max_two_rho must be nonnegative")
        if self.max_dim is None and self.max_two_rho is None:
            raise ValueError("at least one enumeration bound is required")
        if self.random_vectors < 0 or self.jobs <= 0:
            raise ValueError("random_vectors must be >= 0 and jobs >= 1")

    @classmethod
    def from_dict(cls, d: dict) -> "BatteryConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)


# ---------------------------------------------------------------------------
# per-type data


def parse_type(cartan_input) -> CartanMatrix:
    """A type label ("B2") or an explicit integer matrix, for G."""
    if isinstance(cartan_input, CartanMatrix):
        return cartan_input
    if isinstance(cartan_input, str):
        return cartan_matrix(cartan_input)
    return CartanMatrix(tuple(tuple(int(x) for x in row) for row in cartan_input))


@dataclass
class TypeData:
    cartan: CartanMatrix  # of G
    rs: RootSystem  # of the dual algebra
    alg: ChevalleyAlgebra
    centralizer: CentralizerBasis
    centralizer_ok: bool


def centralizer_structure_ok(alg: ChevalleyAlgebra, cz: CentralizerBasis) -> bool:
    rs = alg.rs
    if len(cz.elements) != rs.rank:
        return False
    for a in range(len(cz.elements)):
        for b in range(a + 1, len(cz.elements)):
            if any(alg.bracket(cz.elements[a], cz.elements[b])):
                return False
    return sorted(cz.degrees) == sorted(2 * m for m in rs.exponents)


@lru_cache(maxsize=None)
def _type_data_cached(entries: tuple, label: str | None, cache_dir: str | None) -> TypeData:
    cartan = CartanMatrix(entries, label)
    rs = root_system(langlands_dual(cartan))
    alg = load_or_build(rs, cache_dir)
    cz = centralizer_of_e(alg, principal_triple(alg))
    return TypeData(cartan, rs, alg, cz, centralizer_structure_ok(alg, cz))


def type_data(cartan_input, cache_dir: str | None = None) -> TypeData:
    cartan = parse_type(cartan_input)
    return _type_data_cached(cartan.entries, cartan.type_label, cache_dir)


# ---------------------------------------------------------------------------
# enumeration


def enumerate_weights(rs: RootSystem, max_dim: int | None, max_two_rho: int | None) -> list[Weight]:
    """Anti-dominant weights within both bounds, by increasing <2rho, lam+>, then lam+ lexicographically."""
    r = rs.rank
    zero = (0,) * r
    seen = {zero}
    stack = [zero]
    found = []
    while stack:
        lp = stack.pop()
        if max_dim is not None and weyl_dimension(rs, lp) > max_dim:
            continue  # dimension grows with every coordinate
        if max_two_rho is not None and two_rho_pairing(rs, lp) > max_two_rho:
            continue
        found.append(lp)
        for i in range(r):
            nxt = tuple(x + (k == i) for k, x in enumerate(lp))
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    found.sort(key=lambda lp: (two_rho_pairing(rs, lp), lp))
    return [antidominant_representative(rs, lp) for lp in found]


# ---------------------------------------------------------------------------
# one case


def ladder_is_ideal(ladder: AnnihilatorLadder) -> bool:
    """p_k * Ann_d lies in Ann_{d + m_k} for every generator, through the top level."""
    q = ladder.q_degrees
    for d in range(ladder.top + 1):
        elems = ladder.kernels.get(d, ())
        if not elems:
            continue
        for k, m in enumerate(q):
            t = d + m
            if t > ladder.guard:
                continue
            target = ladder.monomials[t]
            if ladder.dimension(t) == len(target):
                continue
            index = {mono: n for n, mono in enumerate(target)}
            rows = [list(u) for u in ladder.kernels[t]]
            base = len(rows)
            for u in elems:
                row = [0] * len(target)
                for mono, c in zip(ladder.monomials[d], u):
                    if c:
                        row[index[tuple(e + (i == k) for i, e in enumerate(mono))]] = c
                rows.append(row)
            if linalg.rank(linalg.qmat(rows, len(rows), len(target))) != base:
                return False
    return True


def series_shape_ok(series: GradedSeries, dim_V: int, minuscule: bool) -> bool:
    if series[0] != 1 or series.coefficients[-1] != 1:
        return False
    # equality can also happen off the minuscule locus (every sl2-module is cyclic over C[e])
    return series.total == dim_V if minuscule else series.total <= dim_V


def verify_case(cartan_input, lam: Sequence[int], seed: int = 0, random_vectors: int = 100,
                literal_dim_cap: int | None = 400, cache_dir: str | None = None) -> CaseReport:
    td = type_data(cartan_input, cache_dir)
    rs = td.rs
    lam = tuple(int(x) for x in lam)
    if len(lam) != rs.rank:
        raise ValueError(f"lambda needs {rs.rank} coordinates")
    if any(x > 0 for x in lam):
        raise ValueError(f"lambda {lam} is not anti-dominant")
    timings = {}
    clock = time.perf_counter()

    def tick(name):
        nonlocal clock
        now = time.perf_counter()
        timings[name] = round(now - clock, 4)
        clock = now

    lam_plus = dominant_representative(rs, lam)[0]
    module = build_module(td.alg, lam)  # raises ConsistencyError on an oracle mismatch
    oracles_ok = module.dim == weyl_dimension(rs, lam_plus)
    tick("module")

    action = PrincipalAction(module, td.centralizer)
    series, ladder = cyclic_series(module, td.centralizer, action)
    tick("cyclic_series")

    H = poincare_H(rs, lam)
    IH = poincare_IH(rs, lam)
    tick("poincare")

    gens = module_generators(action)
    op_fail = operator_failures(action, ladder)
    n_vec, vec_fail = 0, None
    if literal_dim_cap is None or module.dim <= literal_dim_cap:
        vectors = seeded_vectors(module.dim, random_vectors, seed)
        vec_fail = annihilation_failures(action, ladder, vectors, weight_basis=True)
        n_vec = len(vectors) + module.dim
    tick("annihilator")

    zero = (0,) * rs.rank
    zero_mult = module.dims.get(zero, 0)
    root_lattice = in_root_lattice(rs, lam)
    invariants = joint_kernel(module, td.centralizer.elements) if root_lattice else None
    minuscule = is_minuscule(rs, lam_plus)
    ideal_ok = ladder_is_ideal(ladder)
    tick("checks")

    flags = {
        "peterson_equality": series == H,
        "injectivity": injectivity_check(H, IH) and H[0] == 1 and IH[0] == 1
        and H.coefficients[-1] == 1 and IH.coefficients[-1] == 1 and H.top == IH.top,
        "minuscule_full": (series.total == module.dim) if minuscule else None,
        "annihilator_containment": op_fail == 0 and vec_fail in (0, None),
        "free_series_bound": free_series_bound(td.centralizer, series),
        "kostant_invariants": (invariants == zero_mult) if root_lattice else None,
        "centralizer_structure": td.centralizer_ok,
        "module_oracles": oracles_ok,
        "series_shape": series_shape_ok(series, module.dim, minuscule),
        "ladder_ideal": ideal_ok,
    }
    return CaseReport(
        type_label=td.cartan.type_label,
        cartan=td.cartan.as_lists(),
        lam=list(lam),
        lam_plus=list(lam_plus),
        dim_V=module.dim,
        exponents=list(rs.exponents),
        centralizer_degrees=list(td.centralizer.degrees),
        hilbert_series=list(series.coefficients),
        poincare_H=list(H.coefficients),
        poincare_IH=list(IH.coefficients),
        zero_weight_mult=zero_mult,
        invariants_dim=invariants,
        minuscule=minuscule,
        in_root_lattice=root_lattice,
        ladder_dims=[ladder.dimension(d) for d in range(ladder.top + 1)],
        module_generators=sum(len(g) for g in gens),
        operator_failures=op_fail,
        vectors_checked=n_vec,
        vector_failures=vec_fail,
        flags=flags,
        seed=seed,
        timings=timings,
    )


def recheck_flags(report: CaseReport) -> dict[str, bool | None]:
    """Recompute every flag that follows from the recorded numbers alone."""
    S = GradedSeries(tuple(report.hilbert_series))
    H = GradedSeries(tuple(report.poincare_H))
    IH = GradedSeries(tuple(report.poincare_IH))
    q = [d // 2 for d in report.centralizer_degrees]
    bound = free_series(q, max(S.top, 0))
    return {
        "peterson_equality": S == H,
        "injectivity": H.dominated_by(IH) and H[0] == IH[0] == 1
        and H.coefficients[-1] == IH.coefficients[-1] == 1 and H.top == IH.top,
        "minuscule_full": (S.total == report.dim_V) if report.minuscule else None,
        "annihilator_containment": report.operator_failures == 0 and report.vector_failures in (0, None),
        "free_series_bound": all(c <= b for c, b in zip(S.coefficients, bound)),
        "kostant_invariants": (report.invariants_dim == report.zero_weight_mult) if report.in_root_lattice else None,
        "series_shape": series_shape_ok(S, report.dim_V, report.minuscule),
        "centralizer_structure": sorted(report.centralizer_degrees) == sorted(2 * m for m in report.exponents)
        and len(report.centralizer_degrees) == len(report.exponents) and report.flags["centralizer_structure"],
    }


# ---------------------------------------------------------------------------
# battery


def _case_args(config: BatteryConfig, cache_dir):
    for cartan_input in config.types:
        td = type_data(cartan_input, cache_dir)
        for lam in enumerate_weights(td.rs, config.max_dim, config.max_two_rho):
            yield (cartan_input, lam, config.seed, config.random_vectors, config.literal_dim_cap, cache_dir)


def _run_one(args) -> CaseReport:
    return verify_case(*args)


def run_battery(config: BatteryConfig, cache_dir: str | None = None, progress=None) -> list[CaseReport]:
    """Reports in enumeration order, whatever the scheduling."""
    cases = list(_case_args(config, cache_dir))
    if config.jobs > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            reports = []
            for rep in pool.map(_run_one, cases, chunksize=4):
                reports.append(rep)
                if progress:
                    progress(rep)
            return reports
    reports = []
    for args in cases:
        rep = _run_one(args)
        reports.append(rep)
        if progress:
            progress(rep)
    return reports


def summary_line(reports: Sequence[CaseReport]) -> str:
    passed = sum(1 for r in reports if r.passed)
    return f"{passed}/{len(reports)} cases passed"


# ---------------------------------------------------------------------------
# output


def _render(coeffs: Sequence[int]) -> str:
    return GradedSeries(tuple(coeffs)).render()


def _flag(v) -> str:
    return "n/a" if v is None else ("pass" if v else "FAIL")


def emit_report(reports: Sequence[CaseReport], fmt: str = "text", timings: bool = False) -> str:
    if fmt == "json":
        payload = {"schema": 1, "cases": [r.to_dict(timings) for r in reports]}
        return json.dumps(payload, sort_keys=True, indent=1) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        head = ["type", "lambda", "dim_V", "hilbert_series", "poincare_H", "poincare_IH", "passed"] + list(FLAGS)
        w.writerow(head)
        for r in reports:
            w.writerow(
                [r.type_label or json.dumps(r.cartan), " ".join(map(str, r.lam)), r.dim_V,
                 " ".join(map(str, r.hilbert_series)), " ".join(map(str, r.poincare_H)),
                 " ".join(map(str, r.poincare_IH)), r.passed]
                + [_flag(r.flags.get(f)) for f in FLAGS]
            )
        return buf.getvalue()
    if fmt == "text":
        lines = []
        for r in reports:
            name = r.type_label or str(r.cartan)
            lines.append(f"{name} lambda={tuple(r.lam)} dim V={r.dim_V}: {'PASS' if r.passed else 'FAIL'}")
            lines.append(f"  cyclic series : {_render(r.hilbert_series)}")
            lines.append(f"  P_H           : {_render(r.poincare_H)}")
            lines.append(f"  P_IH          : {_render(r.poincare_IH)}")
            lines.append("  " + " ".join(f"{f}={_flag(r.flags.get(f))}" for f in FLAGS))
            if timings and r.timings:
                lines.append("  timings: " + " ".join(f"{k}={v:.3f}s" for k, v in r.timings.items()))
        lines.append(summary_line(reports))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def load_reports(text: str) -> list[CaseReport]:
    data = json.loads(text)
    return [CaseReport.from_dict(d) for d in data["cases"]]
