import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twv.fixtures import FIGURE8_PRESENTATION, figure8_deformation
from twv.laurent import (LaurentPoly, compare_up_to_unit, identity, max_abs, to_complex,
                         working_precision)
from twv.reps import SignAssignment, evaluate_word, lift_rep, random_sl2, rep_from_matrices
from twv.wada import (DegenerateDenominator, PoleError, build_fox_matrix, cross_check_epsilon,
                      leading_value, limit_value, phi, wada_invariant)
from twv.words import AlphaMap, GroupRingElement, Word, parse_presentation

from helpers import from_factors, poly

T = LaurentPoly.t()
BITS = 256
PLUS = SignAssignment.parse("+")


def matches(w, num, den=LaurentPoly([1]), tol=1e-8):
    """num_w / den_w == num / den up to +-t^p, via cross-multiplication."""
    return compare_up_to_unit(w.num * den, num * w.den, tol)


def test_phi_examples(fig8):
    p = fig8.presentation
    with working_precision(BITS):
        rho = lift_rep(2, fig8.rho2, PLUS, p)
        one = phi(rho, fig8.alpha, GroupRingElement.one(), p)
        assert list(one.terms) == [0] and max_abs(one.terms[0] - identity(2)) == 0
        b = GroupRingElement.from_word(Word.gen(1))
        m = phi(rho, fig8.alpha, b - GroupRingElement.one(), p)
        assert max_abs(m.terms[1] - fig8.rho2.matrix("b")) == 0
        assert max_abs(m.terms[0] + identity(2)) == 0
        w = Word.gen(0) * Word.gen(1) * Word.gen(0, -1)
        m = phi(rho, fig8.alpha, GroupRingElement.one() - GroupRingElement.from_word(w), p)
        assert max_abs(m.terms[1] + evaluate_word(rho, w)) == 0


def test_fox_matrix_shapes(fig8, wh):
    with working_precision(BITS):
        fox = build_fox_matrix(fig8.presentation, lift_rep(2, fig8.rho2, PLUS, fig8.presentation), fig8.alpha)
        assert fox.shape == (2, 4)
        assert fox.delete_column(1).size == 2
        fox = build_fox_matrix(wh.presentation, lift_rep(3, wh.rho2, SignAssignment.parse("++"), wh.presentation),
                               wh.alpha)
        assert fox.shape == (3, 6)
        exps = [k for row in fox.blocks for blk in row for k in blk.terms]
        assert -8 <= min(exps) and max(exps) <= 8


def test_single_generator_relator():
    p = parse_presentation({"generators": ["x", "y"], "relators": ["x"]})
    rho = rep_from_matrices([[[1]], [[1]]])
    fox = build_fox_matrix(p, rho, AlphaMap((1,)))
    blk = fox.blocks[0][0]
    assert list(blk.terms) == [0] and max_abs(blk.terms[0] - identity(1)) == 0
    assert fox.blocks[0][1].terms == {}


def test_deficiency_checked(fig8):
    p = parse_presentation({"generators": ["a", "b"], "relators": []})
    with pytest.raises(ValueError):
        build_fox_matrix(p, rep_from_matrices([[[1]], [[1]]]), AlphaMap((1,)))


def test_figure8_closed_forms(fig8_pipes):
    pipe = fig8_pipes[0]
    q = poly([1, -4, 1])
    targets = {2: q, 3: from_factors(T - 1, poly([1, -5, 1])), 4: q * q,
               5: from_factors(T - 1, poly([1, -9, 44, -9, 1]))}
    for n, target in targets.items():
        assert matches(pipe.invariant_at(n, PLUS, BITS), target), n


def test_figure8_numerator_n2(fig8_pipes):
    # denominator det(tB - I) = (t - 1)^2 and numerator (t - 1)^2 (t^2 - 4t + 1)
    w = fig8_pipes[0].invariant_at(2, PLUS, BITS)
    assert compare_up_to_unit(w.den, (T - 1) ** 2)
    assert compare_up_to_unit(w.num, from_factors(T - 1, T - 1, poly([1, -4, 1])))


@pytest.mark.parametrize("branch", [0, 1])
def test_whitehead_closed_forms(wh_pipes, branch):
    pp = SignAssignment.parse("++")
    pipe = wh_pipes[branch]
    w2 = pipe.invariant_at(2, pp, BITS)
    w3 = pipe.invariant_at(3, pp, BITS)
    found2 = [s for s in (1, -1) if matches(w2, poly([1, -4, 4 + 2j * s, -4, 1]))]
    found3 = [s for s in (1, -1)
              if matches(w3, from_factors(T - 1, T - 1, poly([1, -4, -(2 - 8j * s), -4, 1])))]
    # upper sign of "+-" pairs with the upper sign of "-+" on each branch
    assert len(found2) == 1 and found3 == found2


def test_limit_value_examples(fig8_pipes):
    pipe = fig8_pipes[0]
    with working_precision(BITS):
        v, order = limit_value(pipe.invariant_at(4, PLUS, BITS), 1)
        assert order == 0 and abs(to_complex(v)) == pytest.approx(4, rel=1e-12)
        w3 = pipe.invariant_at(3, PLUS, BITS)
        v, order = limit_value(w3, 1)
        assert order == 1 and to_complex(v) == 0
        lead, order = leading_value(w3, 1)
        assert order == 1 and abs(to_complex(lead)) == pytest.approx(3, rel=1e-12)
        v, order = limit_value(pipe.invariant_at(2, PLUS, BITS), -1)
        assert order == 0 and abs(to_complex(v)) == pytest.approx(6, rel=1e-12)


def test_limit_value_pole(fig8):
    from twv.wada import WadaInvariant
    w = WadaInvariant(LaurentPoly([1]), T - 1, 0, 1, None, fig8.presentation, 53)
    with pytest.raises(PoleError):
        limit_value(w, 1)


def test_cross_check_examples(fig8_pipes, fig8):
    from twv.wada import WadaInvariant
    pipe = fig8_pipes[0]
    with working_precision(BITS):
        chk = cross_check_epsilon(pipe.invariant_at(4, PLUS, BITS), 1)
        assert chk.converged and abs(to_complex(chk.value)) == pytest.approx(4, abs=1e-6)
        const = WadaInvariant(LaurentPoly([5]), LaurentPoly([1]), 0, 1, None, fig8.presentation, BITS)
        assert to_complex(cross_check_epsilon(const, 1).value) == 5
        chk = cross_check_epsilon(pipe.invariant_at(3, PLUS, BITS), 1, zero_order=1)
        assert abs(to_complex(chk.value)) == pytest.approx(3, rel=1e-5)


def test_degenerate_denominator(wh):
    with working_precision(BITS):
        rho = lift_rep(2, wh.rho2, SignAssignment.parse("++"), wh.presentation)
        with pytest.raises(DegenerateDenominator):
            wada_invariant(wh.presentation, rho, AlphaMap((0, 0)))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("signs", ["++", "+-", "--"])
def test_parabolic_denominator(wh_pipes, n, signs):
    eps = SignAssignment.parse(signs)
    w = wh_pipes[0].invariant_at(n, eps, BITS)
    e = eps.signs[w.presentation.generators[w.deleted_index].component]
    assert compare_up_to_unit(w.den, (T - e ** (n - 1)) ** n)


@settings(max_examples=25)
@given(st.sampled_from([2, 3, 4, 5]), st.integers(0, 2 ** 32 - 1))
def test_conjugation_invariance(n, seed):
    from twv.fixtures import figure8
    data = figure8(60)
    s = random_sl2(np.random.default_rng(seed))
    with working_precision(BITS):
        rho = lift_rep(n, data.rho2, PLUS, data.presentation)
        rho_c = lift_rep(n, data.rho2.conjugate(s, 70), PLUS, data.presentation)
        w = wada_invariant(data.presentation, rho, data.alpha)
        wc = wada_invariant(data.presentation, rho_c, data.alpha)
        assert compare_up_to_unit(w.num * wc.den, wc.num * w.den, 1e-8)


@settings(max_examples=25)
@given(st.sampled_from([1, 2, 3, 4]), st.floats(0.6, 1.6), st.floats(-1.0, 1.0), st.integers(0, 1))
def test_deleted_column_independence(n, r, theta, root):
    p = parse_presentation(FIGURE8_PRESENTATION)
    rep = figure8_deformation(r * np.exp(1j * theta), root)
    with working_precision(BITS):
        rho = lift_rep(n, rep, PLUS, p)
        w0 = wada_invariant(p, rho, AlphaMap((1,)), column=0)
        w1 = wada_invariant(p, rho, AlphaMap((1,)), column=1)
        assert compare_up_to_unit(w0.num * w1.den, w1.num * w0.den, 1e-8)


@pytest.mark.parametrize("n", [3, 5, 7])
def test_odd_sign_independence(wh_pipes, n):
    ws = [wh_pipes[0].invariant_at(n, s, BITS) for s in SignAssignment.enumerate(2)]
    for w in ws[1:]:
        assert compare_up_to_unit(ws[0].num * w.den, w.num * ws[0].den)


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_odd_divisibility(fig8_pipes, wh_pipes, n):
    pair = fig8_pipes[0].local(n, PLUS, 1)
    assert pair.order >= 1
    for eps in SignAssignment.enumerate(2):
        assert wh_pipes[0].local(n, eps, 1).order >= 2


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_even_nonvanishing(fig8_pipes, wh_pipes, n):
    for pipe, signs in ((fig8_pipes[0], SignAssignment.enumerate(1)), (wh_pipes[0], SignAssignment.enumerate(2))):
        for eps in signs:
            pair = pipe.local(n, eps, 1)
            assert pair.order == 0 and not pair.value.contains(0)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 8])
@pytest.mark.parametrize("c", [1, -1])
def test_limit_matches_ladder(wh_pipes, n, c):
    pipe = wh_pipes[0]
    eps = SignAssignment.parse("+-")
    pair = pipe.local(n, eps, c)
    with working_precision(pair.bits):
        lead = to_complex(pair.value)
        chk = cross_check_epsilon(pair.invariant, c, zero_order=pair.order)
    assert chk.converged
    assert abs(to_complex(chk.value) - lead) <= 1e-5 * abs(lead)
