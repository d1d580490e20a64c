import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pcdom.core import PcdParams
from pcdom.errors import BadSampleSize
from pcdom.exact_uniform import (_FORMS, GOLDEN_C, limit_c_to_zero_of_nu1, limit_c_to_zero_printed,
                                 p_exact, p_exact_2_half, p_exact_full, p_exact_r2_c,
                                 p_exact_r_half, regime_of)
from pcdom.mc import McConfig, mc_estimate_p
from pcdom.quadrature import gamma2_cases

# (n, r, c, P(gamma = 2)) frozen from the quadrature oracle at 1e-11 relative
ORACLE = [
    (3, 1.2, 0.45, 0.7180636388888888),      # pi4
    (4, 1.5, 0.45, 0.7258383680555556),      # pi3
    (4, 1.9, 0.45, 0.4791633560690559),      # pi2
    (5, 2.1, 0.45, 0.3502798875260936),      # pi2
    (6, 3.0, 0.45, 0.049179494995681555),    # pi1
    (3, 1.1, 0.2, 0.46585514049586774),      # theta4
    (4, 1.3, 0.2, 0.4161191704112493),       # theta3a
    (4, 1.6, 0.3, 0.4186337729531249),       # theta3a
    (5, 3.0, 0.2, 0.031032098765432108),     # theta3b
    (7, 2.5, 0.1, 0.0050205131135999965),    # theta3b
    (5, 4.5, 0.2, 0.010183909691772084),     # theta2
    (6, 6.0, 0.2, 0.000995153767573178),     # theta1
    (5, 1.5, 0.5, 0.8102141203703702),       # c = 1/2, r < 2
    (8, 2.5, 0.5, 0.0855793205248),          # c = 1/2, r >= 2
    (5, 2.0, 0.4, 0.35382083333333336),      # r = 2
    (5, 2.0, 0.2, 0.10490000000000002),      # r = 2, c <= 1/4
]

GRID_N = [2, 3, 5, 8]
GRID_R = [1.0, 1.1, 1 / 0.55, 1.5, 2.0, 2.5, 4.0]
GRID_C = [0.1, GOLDEN_C, 0.3, 0.4, 0.5, 0.6, 0.9]


@pytest.mark.parametrize("n,r,c,expected", ORACLE)
def test_frozen_oracle(n, r, c, expected):
    assert p_exact(n, r, c) == pytest.approx(expected, abs=1e-9)
    assert p_exact(n, r, 1 - c) == pytest.approx(expected, abs=1e-9)


def test_cccd_values():
    assert p_exact_2_half(1).value == 0.0
    assert p_exact_2_half(2).value == pytest.approx(1 / 3, abs=1e-15)
    assert p_exact_2_half(25).value == pytest.approx(4 / 9, abs=1e-12)
    for n in range(1, 30):
        assert p_exact_2_half(n).value == pytest.approx(
            0.0 if n == 1 else 4 / 9 - 16 / 9 * 4.0 ** -n, abs=1e-15)


def test_r2_and_half_examples():
    assert p_exact_r2_c(3, 0.5).value == pytest.approx(p_exact_2_half(3).value, abs=1e-15)
    assert p_exact_r2_c(7, 0.0).value == 0.0 and p_exact_r2_c(7, 1.0).value == 0.0
    assert p_exact_r_half(2, 2.0).value == pytest.approx(1 / 3, abs=1e-15)
    assert p_exact_r_half(4, 1.0).value == pytest.approx(0.875, abs=1e-15)
    assert p_exact_r_half(2, 3.0).value == pytest.approx(1 / 6, abs=1e-15)
    assert p_exact_full(4, PcdParams(2, 0.45)).value == pytest.approx(
        p_exact_r2_c(4, 0.45).value, abs=1e-12)


def test_r2_mc_example():
    p, se = mc_estimate_p(McConfig(10**6, seed=99, n=5, params=PcdParams(2, 0.4)))
    assert abs(p - p_exact_r2_c(5, 0.4).value) < 3 * se


def test_figure_trends():
    a = [p_exact(n, 1.2, 0.4) for n in range(2, 26)]
    assert regime_of(1.2, 0.4) == "pi4"
    assert np.all(np.diff(a) > 0) and a[-1] > 0.999
    b = [p_exact(n, 2.0, 0.3) for n in range(3, 26)]
    assert regime_of(2.0, 0.3) == "theta3a"
    assert np.all(np.diff(b) < 0) and b[-1] < 0.003


def test_bad_n():
    with pytest.raises(BadSampleSize):
        p_exact(0, 2, 0.5)
    with pytest.raises(BadSampleSize):
        p_exact_2_half(2.5)


# ---------------------------------------------------------------- formula web

@pytest.mark.parametrize("n", GRID_N + [13, 40])
def test_web_r2(n):
    for c in np.linspace(0.01, 0.99, 99):
        assert p_exact_full(n, PcdParams(2, c)).value == pytest.approx(
            p_exact_r2_c(n, c).value, abs=1e-12)


@pytest.mark.parametrize("n", GRID_N + [13, 40])
def test_web_half(n):
    for r in [1.0, 1.1, 1.5, 1.99, 2.0, 2.5, 4.0, 10.0]:
        assert p_exact_full(n, PcdParams(r, 0.5)).value == pytest.approx(
            p_exact_r_half(n, r).value, abs=1e-12)
    assert p_exact_full(n, PcdParams(2, 0.5)).value == pytest.approx(p_exact_2_half(n).value,
                                                                    abs=1e-12)


def test_oracle_agreement_grid():
    for n in GRID_N:
        for r in GRID_R:
            for c in GRID_C:
                q = gamma2_cases(n, r, c).value
                assert p_exact(n, r, c) == pytest.approx(q, abs=1e-7), (n, r, c)


def test_per_case_closed_forms_r2():
    for n in (3, 5, 9):
        c = 0.4
        cases = gamma2_cases(n, 2.0, c).cases
        one = 4 / 9 * (3 * c - 0.5) ** n - 8 / 9 * 4.0 ** -n - 8 / 9 * ((3 * c - 1) / 2) ** n
        two = (2 / 3 * ((3 * c - 1) / 2) ** n - 2 / 3 * ((1 - c) / 2) ** n
               - 2 / 3 * (3 * c - 0.5) ** n + 2 / 3 * (c + 0.5) ** n)
        assert cases[1] == pytest.approx(one, abs=1e-8)
        assert cases[3] == pytest.approx(two, abs=1e-8)


@given(st.integers(2, 40), st.floats(1.0, 6.0), st.floats(0.001, 0.999))
def test_closed_form_matches_quadrature(n, r, c):
    assert p_exact(n, r, c) == pytest.approx(gamma2_cases(n, r, c).value, abs=1e-8)


@given(st.integers(1, 300), st.floats(1.0, 50.0), st.floats(0.0, 1.0))
def test_range(n, r, c):
    v = p_exact(n, r, c)
    assert 0.0 <= v <= 1.0


@given(st.integers(1, 200), st.floats(1.0, 10.0), st.integers(1, 1023))
def test_symmetry_dyadic_exact(n, r, k):
    c = k / 1024
    assert p_exact(n, r, c) == p_exact(n, r, 1 - c)


@given(st.integers(1, 200), st.floats(1.0, 10.0), st.floats(0.0, 1.0))
def test_symmetry_general(n, r, c):
    assert p_exact(n, r, c) == pytest.approx(p_exact(n, r, 1 - c), abs=1e-15)


# ---------------------------------------------------------------- continuity

@pytest.mark.parametrize("n", [2, 3, 6, 15])
@pytest.mark.parametrize("c0", [0.25, 1 / 3, GOLDEN_C, 0.5, 2 / 3, 0.75])
def test_continuity_in_c(n, c0):
    eps = 1e-11
    for r in [1.05, 1.3, 1.7, 2.0, 2.4, 3.5]:
        lo, hi = p_exact(n, r, c0 - eps), p_exact(n, r, c0 + eps)
        assert abs(lo - hi) < 1e-9
        assert abs(p_exact(n, r, c0) - lo) < 1e-9


@pytest.mark.parametrize("n", [2, 4, 9])
def test_continuity_across_r_boundaries(n):
    eps = 1e-11
    for c in [0.05, 0.15, 0.2, 0.3, 0.35, 0.4, 0.45]:
        bounds = [1 / c, 1 / (1 - c), (1 - c) / c]
        disc = 1 - 4 * c
        if disc > 0:
            bounds += [(1 - math.sqrt(disc)) / (2 * c), (1 + math.sqrt(disc)) / (2 * c)]
        for b in bounds:
            if b <= 1:
                continue
            assert abs(p_exact(n, b - eps, c) - p_exact(n, b + eps, c)) < 1e-9, (c, b)


def test_behaviour_near_c_zero():
    for n in (2, 3, 4, 7, 20):
        assert p_exact_r2_c(n, 0.0).value == 0.0
        # the true one-sided limit is 0: no jump at c = 0
        assert p_exact_r2_c(n, 1e-9).value < 1e-8
        # the expression valid on (1/4, 1/3], continued to c = 0
        assert limit_c_to_zero_of_nu1(n) == pytest.approx(
            1 / 9 - 2 / 9 * (-0.5) ** n - 8 / 9 * 4.0 ** -n, abs=1e-15)
        # the commonly quoted limit is not a limit of the probability
        assert abs(limit_c_to_zero_printed(n) - p_exact_r2_c(n, 1e-9).value) > 0.05


def test_forms_evaluate_in_multiprecision():
    mpmath.mp.dps = 40
    for n, r, c, _ in ORACLE:
        tag = regime_of(r, c)
        if tag not in _FORMS:
            continue
        cc = min(c, 1 - c)
        hi = _FORMS[tag](n, mpmath.mpf(r), mpmath.mpf(cc))
        assert float(hi) == pytest.approx(p_exact(n, r, c), abs=1e-12)
