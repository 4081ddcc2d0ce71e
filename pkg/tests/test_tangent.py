import numpy as np
import pytest

from pairorbit.congruence import StarTag as T
from pairorbit.families import FAMILIES, family_of, representative, sample_params
from pairorbit.matcore import (
    GroupElement,
    MatrixPair,
    act_pair,
    sample_group,
    sample_pair,
)
from pairorbit.tangent import RankUnstable, embed_pair, orbit_dimension, tangent_frame


def test_zero_pair_frame_vanishes():
    p = MatrixPair.of(np.zeros((2, 2)), np.zeros((2, 2)))
    assert np.all(tangent_frame(p).vectors == 0.0)


def test_case_iv_pattern():
    # (0_2, 1+0): w1 lives in the B(1,1) slot alone
    p = MatrixPair.of(np.zeros((2, 2)), np.diag([1.0, 0.0]))
    f = tangent_frame(p)
    w1 = f.row("w1")
    expected = np.zeros(14)
    expected[8] = 1.0
    assert np.array_equal(w1, expected)
    assert orbit_dimension(p) == 4


def test_frame_matches_finite_differences():
    # v_jk and u_jk are the derivatives of the action along X = E_jk, i E_jk
    h = 1e-6
    units = {}
    for j in range(2):
        for k in range(2):
            E = np.zeros((2, 2))
            E[j, k] = 1.0
            units[(j, k)] = E
    for seed in range(10):
        p = sample_pair(seed)
        f = tangent_frame(p)
        for idx, (j, k) in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
            for imag, label in [(False, "v"), (True, "u")]:
                X = (1j if imag else 1.0) * units[(j, k)]
                g = GroupElement(1.0, np.eye(2) + h * X)
                q = act_pair(g, p)
                fd = (embed_pair(q.A.m, q.B.m) - embed_pair(p.A.m, p.B.m)) / h
                name = f"{label}{j + 1}{k + 1}"
                assert np.max(np.abs(fd - f.row(name))) < 1e-4, name


def test_case_i_linear_dependence():
    # v22 = 2 w1 - v11 for the ([[0,1],[1,i]], B) family
    p = representative(family_of(T.JORDAN, "a_plus_zeta", a=1.3,
                                 zeta=0.2 + 0.9j))
    f = tangent_frame(p)
    lhs = f.row("v22")
    rhs = 2.0 * f.row("w1") - f.row("v11")
    assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_dimension_table_examples():
    assert orbit_dimension(MatrixPair.of(np.eye(2), np.diag([1.0, 2.0]))) == 9
    assert orbit_dimension(MatrixPair.of(np.zeros((2, 2)),
                                         np.diag([1.0, 0.0]))) == 4
    assert orbit_dimension(MatrixPair.of(np.array([[0, 1], [1, 1j]]),
                                         np.zeros((2, 2)))) == 7


@pytest.mark.parametrize("key", sorted(FAMILIES))
def test_dimension_table_all_families(key):
    spec = FAMILIES[key]
    for cls in sample_params(spec, n=5):
        assert orbit_dimension(representative(cls)) == spec.dim, str(cls)


def test_dimension_constant_on_orbits():
    for key in [(T.UNIMODULAR, "generic"), (T.RECIPROCAL, "antidiag_b"),
                (T.JORDAN, "zero_plus_d"), (T.INDEFINITE, "d0_plus_d")]:
        cls = sample_params(FAMILIES[key], n=1)[0]
        rep = representative(cls)
        d0 = orbit_dimension(rep)
        for seed in range(100):
            assert orbit_dimension(act_pair(sample_group(seed), rep)) == d0


def test_rank_unstable_raised():
    # a singular value placed right at the relative cutoff
    p = MatrixPair.of(np.diag([1.0, 1e-9]), np.zeros((2, 2)))
    with pytest.raises(RankUnstable):
        orbit_dimension(p, tol=1e-9)
