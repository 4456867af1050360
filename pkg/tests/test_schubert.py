from itertools import product

import pytest

from loopgrass.rootdata import dominance_ideal, dominant_representative, two_rho_pairing, weyl_orbit
from loopgrass.schubert import (
    OracleOutOfRange,
    brute_min_coset_length,
    cell_degree,
    cell_table,
    cell_table_csv,
    injectivity_check,
    length_zero_elements,
    min_coset_lengths,
    poincare_H,
    poincare_IH,
    simple_affine_reflections,
)
from loopgrass.irreps import weyl_dimension
from loopgrass.series import GradedSeries

from conftest import dual_setup
from oracles import cells_brute


def rs_of(label):
    return dual_setup(label)[0]


def test_cell_degree_examples():
    rs = rs_of("A1")
    assert cell_degree((0,), rs) == 0
    assert [cell_degree((x,), rs) for x in (2, -2, 4, -4)] == [1, 2, 3, 4]


@pytest.mark.parametrize("nu,expect", [((0,), 0), ((2,), 1), ((-2,), 2), ((4,), 3), ((-4,), 4), ((1,), 0), ((-1,), 1)])
def test_brute_a1(nu, expect):
    assert brute_min_coset_length(nu, rs_of("A1")) == expect


def test_brute_a2_highest_coroot():
    assert brute_min_coset_length((1, 1), rs_of("A2")) == 1


def test_oracle_out_of_range():
    with pytest.raises(OracleOutOfRange):
        brute_min_coset_length((30, 30), rs_of("A2"), length_cap=4)


@pytest.mark.slow
@pytest.mark.parametrize("label", ["A1", "A2", "B2", "C2", "G2"])
def test_cell_degree_matches_affine_weyl_search(label):
    rs = rs_of(label)
    cap = 8
    table = min_coset_lengths(rs, cap)
    for nu, d in table.items():
        assert cell_degree(nu, rs) == d
    box = 2 * cap + 2
    for nu in product(range(-box, box + 1), repeat=rs.rank):
        if cell_degree(nu, rs) <= cap:
            assert table[nu] == cell_degree(nu, rs)


@pytest.mark.parametrize("label", ["A1", "A2", "A3", "B2", "G2"])
def test_length_zero_elements_count(label):
    rs = rs_of(label)
    assert len(length_zero_elements(rs)) == _det(rs.cartan.as_lists())


def _det(m):
    from fractions import Fraction
    m = [[Fraction(x) for x in r] for r in m]
    n, d = len(m), Fraction(1)
    for c in range(n):
        p = next(i for i in range(c, n) if m[i][c] != 0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return abs(d)


def test_simple_reflections_are_involutions():
    rs = rs_of("G2")
    for s in simple_affine_reflections(rs):
        sq = s * s
        assert sq.translation == (0, 0) and sq.w == ((1, 0), (0, 1))


def test_poincare_H_examples():
    assert poincare_H(rs_of("A1"), (-1,)).coefficients == (1, 1)
    assert poincare_H(rs_of("A1"), (-2,)).coefficients == (1, 1, 1)
    assert poincare_H(rs_of("A2"), (-1, -1)).coefficients == (1, 1, 2, 2, 1)
    assert poincare_H(rs_of("B2"), (0, 0)).coefficients == (1,)


def test_poincare_IH_examples():
    assert poincare_IH(rs_of("A1"), (-2,)).coefficients == (1, 1, 1)
    assert poincare_IH(rs_of("A1"), (-1,)).coefficients == (1, 1)
    assert poincare_IH(rs_of("A3"), (0, 0, 0)).coefficients == (1,)
    assert poincare_IH(rs_of("A2"), (-1, -1)).coefficients == (1, 2, 2, 2, 1)


def test_injectivity_examples():
    rs = rs_of("A1")
    assert injectivity_check(poincare_H(rs, (-2,)), poincare_IH(rs, (-2,)))
    rs = rs_of("A2")
    assert injectivity_check(poincare_H(rs, (-1, -1)), poincare_IH(rs, (-1, -1)))
    assert not injectivity_check(GradedSeries((1, 2)), GradedSeries((1, 1)))


CASES = [("A1", (-3,)), ("A2", (-2, -1)), ("A2", (0, -3)), ("B2", (-1, -1)), ("C2", (-2, 0)), ("G2", (-1, -1)), ("A3", (-1, 0, -1))]


@pytest.mark.parametrize("label,lam", CASES)
def test_cells_against_brute_enumeration(label, lam):
    rs = rs_of(label)
    lam_plus = dominant_representative(rs, lam)[0]
    box = 3 * sum(map(abs, lam)) + 2
    assert list(poincare_H(rs, lam).coefficients) == cells_brute(rs.cartan.as_lists(), lam_plus, box)


@pytest.mark.parametrize("label,lam", CASES)
def test_cell_table_shape(label, lam):
    rs = rs_of(label)
    table = cell_table(rs, lam)
    lam_plus = dominant_representative(rs, lam)[0]
    top = two_rho_pairing(rs, lam_plus)
    degs = list(table.values())
    assert min(degs) == 0 and all(d >= 0 for d in degs)
    assert max(degs) == top and degs.count(top) == 1
    assert poincare_H(rs, lam).total == len(table)


@pytest.mark.parametrize("label,lam", CASES)
def test_negation_symmetry(label, lam):
    rs = rs_of(label)
    for mu in dominance_ideal(rs, dominant_representative(rs, lam)[0]):
        orbit = weyl_orbit(rs, mu)
        a = sorted(cell_degree(nu, rs) for nu in orbit)
        b = sorted(cell_degree(tuple(-x for x in nu), rs) for nu in orbit)
        assert a == b


@pytest.mark.parametrize("label,lam", CASES)
def test_IH_palindromic_and_total(label, lam):
    rs = rs_of(label)
    IH = poincare_IH(rs, lam)
    assert IH.is_palindromic()
    assert IH.total == weyl_dimension(rs, dominant_representative(rs, lam)[0])
    assert IH.top == poincare_H(rs, lam).top


@pytest.mark.parametrize("label", ["A2", "B2", "G2"])
def test_monotonicity(label):
    rs = rs_of(label)
    lams = [(-a, -b) for a in range(3) for b in range(3)]
    for lam in lams:
        lp = dominant_representative(rs, lam)[0]
        ideal = set(dominance_ideal(rs, lp))
        for mu in ideal:
            assert set(dominance_ideal(rs, mu)) <= ideal
            assert poincare_H(rs, tuple(-x for x in mu)).dominated_by(poincare_H(rs, lam))


def test_cell_table_csv():
    text = cell_table_csv(cell_table(rs_of("A1"), (-2,)))
    assert text.splitlines() == ["coweight,q_degree", "0,0", "2,1", "-2,2"]
