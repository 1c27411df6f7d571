import math

import numpy as np
import pytest
from flint import acb, acb_mat
from hypothesis import given
from hypothesis import strategies as st

from twv.laurent import (LaurentMatrix, LaurentPoly, RationalFunction, cofactor_det,
                         compare_up_to_unit, deflate_at, interpolate_unit_circle, laurent_det,
                         log_magnitude, lu_det, poly_eval, precision_bits, sample_unit_circle,
                         synthetic_divide, to_acb, to_complex, unit_ratio, working_precision)

from helpers import from_factors, poly, rel_diff

T = LaurentPoly.t()
finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)
coeff_lists = st.lists(cplx, min_size=1, max_size=6).filter(lambda cs: abs(cs[0]) > 1e-3 and abs(cs[-1]) > 1e-3)
laurents = st.builds(lambda cs, lo: LaurentPoly(cs, lo), coeff_lists, st.integers(-3, 3))


def test_poly_eval_examples():
    assert to_complex(poly_eval(poly([1, -4, 1]), 1)) == -2
    assert to_complex(poly_eval(LaurentPoly([1]), 3 + 2j)) == 1
    assert to_complex(poly_eval(LaurentPoly.t(-1), 2)) == 0.5
    with pytest.raises(ZeroDivisionError):
        poly_eval(LaurentPoly.t(-1), 0)


def test_laurent_det_examples():
    m = LaurentMatrix.from_entries([[T, LaurentPoly()], [LaurentPoly(), LaurentPoly.t(-1)]])
    assert rel_diff(laurent_det(m), LaurentPoly([1])) < 1e-14
    m = LaurentMatrix.from_entries([[T - 1]])
    assert rel_diff(laurent_det(m), T - 1) < 1e-14


def _random_matrix(rng, size, degree, lo_range=(-1, 1)):
    rows = []
    for _ in range(size):
        row = []
        for _ in range(size):
            lo = int(rng.integers(*lo_range, endpoint=True))
            cs = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
            row.append(LaurentPoly(list(cs), lo))
        rows.append(row)
    return rows


@pytest.mark.parametrize("seed", range(5))
def test_laurent_det_vs_cofactor_3x3(seed):
    rows = _random_matrix(np.random.default_rng(seed), 3, 2)
    assert rel_diff(laurent_det(LaurentMatrix.from_entries(rows)), cofactor_det(rows)) < 1e-9


@given(st.integers(1, 3), st.integers(0, 3), st.integers(0, 2 ** 32 - 1))
def test_laurent_det_matches_cofactor(size, degree, seed):
    rows = _random_matrix(np.random.default_rng(seed), size, degree)
    assert rel_diff(laurent_det(LaurentMatrix.from_entries(rows)), cofactor_det(rows)) < 1e-9


def test_deflate_examples():
    q, m = deflate_at(from_factors(T - 1, T - 1, poly([1, -4, 1])), 1)
    assert m == 2 and rel_diff(q, poly([1, -4, 1])) < 1e-12
    q, m = deflate_at(poly([1, -4, 1]), 1)
    assert m == 0 and rel_diff(q, poly([1, -4, 1])) == 0
    q, m = deflate_at((T + 1) ** 3, -1)
    assert m == 3 and rel_diff(q, LaurentPoly([1])) < 1e-12


def test_synthetic_divide_remainder():
    q, r = synthetic_divide(poly([1, -4, 1]), 1)
    assert to_complex(r) == -2
    assert rel_diff(q * (T - 1) + LaurentPoly([r]), poly([1, -4, 1])) < 1e-15


@given(laurents, st.integers(0, 4), st.sampled_from([1, -1, 1j, complex(math.cos(1), math.sin(1))]))
def test_deflate_then_remultiply(p, k, c):
    with working_precision(200):
        target = p * (T - to_acb(c)) ** k
        q, m = deflate_at(target, c, 1e-8)
        assert m >= k
        back = q * (T - to_acb(c)) ** m
        assert rel_diff(back, target) <= 1e-7


def test_compare_up_to_unit_examples():
    f = poly([1, -4, 1])
    assert compare_up_to_unit(f, -(f.shift(5)))
    assert unit_ratio(-(f.shift(5)), f) == (-1, 5)
    assert not compare_up_to_unit(f, poly([1, -5, 1]))
    assert compare_up_to_unit(LaurentPoly(), LaurentPoly())


@given(laurents, laurents, st.integers(-5, 5), st.sampled_from([1, -1]))
def test_compare_up_to_unit_reflexive_symmetric(f, g, p, s):
    assert compare_up_to_unit(f, f)
    assert compare_up_to_unit(f, (f * s).shift(p))
    assert compare_up_to_unit(f, g) == compare_up_to_unit(g, f)


def test_lu_det_examples():
    eye = acb_mat(5, 5, [1 if i == j else 0 for i in range(5) for j in range(5)])
    assert to_complex(lu_det(eye).value) == 1
    d = lu_det(acb_mat([[2, 0], [0, acb(0, 3)]]))
    assert to_complex(d.value) == 6j
    assert d.log_abs == pytest.approx(math.log(6))


@pytest.mark.parametrize("seed", range(5))
def test_lu_det_vs_cofactor(seed):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    oracle = cofactor_det([[LaurentPoly([x]) for x in row] for row in m])
    got = to_complex(lu_det(m).value)
    want = to_complex(oracle.coefficient(0))
    assert abs(got - want) <= 1e-10 * abs(want)


@given(st.integers(1, 8), st.integers(0, 2 ** 32 - 1))
def test_lu_log_magnitude(size, seed):
    rng = np.random.default_rng(seed)
    m = np.eye(size) * 3 + rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    assert lu_det(m).log_abs == pytest.approx(math.log(abs(np.linalg.det(m))), abs=1e-8)


def test_log_magnitude_no_overflow():
    big = acb(10) ** 300 * acb(10) ** 300
    assert log_magnitude(big) == pytest.approx(600 * math.log(10))
    d = lu_det(acb_mat([[acb(10) ** 400, 0], [0, acb(10) ** 400]]))
    assert d.log_abs == pytest.approx(800 * math.log(10))


@given(laurents, st.integers(0, 4))
def test_interpolation_roundtrip(p, extra):
    count = len(p.coeffs) + extra
    back = interpolate_unit_circle(sample_unit_circle(p, count), p.lo)
    assert rel_diff(back.trim(1e-13), p) < 1e-9


@given(laurents, laurents)
def test_product_evaluates_pointwise(f, g):
    z = 0.3 + 0.8j
    assert abs(to_complex((f * g)(z)) - to_complex(f(z)) * to_complex(g(z))) <= 1e-9 * (
        1 + abs(to_complex(f(z)) * to_complex(g(z))))


def test_rational_function():
    r = RationalFunction(poly([1, -4, 1]), T - 1)
    assert to_complex(r(2)) == pytest.approx(-3)
    with pytest.raises(ZeroDivisionError):
        RationalFunction(T, LaurentPoly())


def test_normalized_form():
    p = (-(poly([1, -4, 1]))).shift(-3)
    n = p.normalized()
    assert n.lo == 0 and to_complex(n.coeffs[-1]) == 1
    assert n.format() == "t^2 - 4*t + 1"


def test_precision_levels(monkeypatch):
    assert precision_bits("f64") == 53
    assert precision_bits("dd") == 106
    assert precision_bits("auto") is None
    assert precision_bits(300) == 300
    monkeypatch.setenv("TWV_PRECISION", "dd")
    assert precision_bits() == 106
    monkeypatch.setenv("TWV_PRECISION", "f64")
    assert precision_bits(None) == 53
    with pytest.raises(ValueError):
        precision_bits("quad")


def test_working_precision_restores():
    import flint
    before = flint.ctx.prec
    with working_precision(333):
        assert flint.ctx.prec == 333
    assert flint.ctx.prec == before


def test_laurent_matrix_algebra():
    a = LaurentMatrix.from_entries([[T, LaurentPoly([1])], [LaurentPoly([0]), T - 1]])
    b = LaurentMatrix.from_entries([[LaurentPoly([2]), LaurentPoly.t(-1)], [T, LaurentPoly([1])]])
    assert rel_diff(laurent_det(a * b), laurent_det(a) * laurent_det(b)) < 1e-12
    assert rel_diff((a + b).entry(0, 1), LaurentPoly([1]) + LaurentPoly.t(-1)) == 0
