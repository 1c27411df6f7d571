"""Wada's twisted Alexander invariant from the Fox Jacobian.

For a deficiency-one presentation ``<x_1..x_g | r_1..r_{g-1}>`` the map
``Phi`` sends a group-ring element to ``sum c * t^alpha(w) * rho(w)``.  The
invariant is

    det Phi(dr_i/dx_k)_{k != j}  /  det Phi(x_j - 1),

well defined up to a unit ``+-t^p``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

from flint import acb, acb_mat, arb

from .laurent import (Deflation, LaurentMatrix, LaurentPoly, PrecisionError,
                      _deflate, current_bits, laurent_det, poly_eval, synthetic_divide,
                      to_acb)
from .reps import SignAssignment, SymPowerRep, evaluate_word
from .words import (AlphaMap, GroupRingElement, Presentation, Word,
                    alpha_degree, fox_derivative)

log = logging.getLogger(__name__)

DEFLATION_TOL = 1e-8


class DegenerateDenominator(ArithmeticError):
    """No generator gives a nonzero denominator det Phi(x_j - 1)."""


class PoleError(ArithmeticError):
    """The invariant has a pole at the requested point."""


def phi(rho: SymPowerRep, alpha: AlphaMap, e: GroupRingElement, p: Presentation) -> LaurentMatrix:
    """Image of a group-ring element under ``w -> t^alpha(w) rho(w)``."""
    terms: dict[int, acb_mat] = {}
    for w, c in e.items():
        k = alpha_degree(w, alpha, p)
        m = evaluate_word(rho, w) * c
        terms[k] = terms[k] + m if k in terms else m
    return LaurentMatrix(rho.n, terms)


@dataclass
class FoxMatrix:
    """Blocks ``Phi(dr_i/dx_j)``, one row of blocks per relator."""

    blocks: list[list[LaurentMatrix]]
    n: int

    @property
    def shape(self) -> tuple[int, int]:
        rows = len(self.blocks)
        cols = len(self.blocks[0]) if self.blocks else 0
        return rows * self.n, cols * self.n

    def delete_column(self, j: int) -> LaurentMatrix:
        """Square Laurent matrix left after removing column block ``j``."""
        n = self.n
        keep = [k for k in range(len(self.blocks[0])) if k != j]
        size = len(self.blocks) * n
        if size != len(keep) * n:
            raise ValueError("column deletion leaves a non-square matrix")
        exps = sorted({k for row in self.blocks for b in row for k in b.terms})
        terms = {}
        for e in exps:
            big = acb_mat(size, size)
            for bi, row in enumerate(self.blocks):
                for bj, col in enumerate(keep):
                    m = row[col].terms.get(e)
                    if m is None:
                        continue
                    for r in range(n):
                        for c in range(n):
                            big[bi * n + r, bj * n + c] = m[r, c]
            terms[e] = big
        return LaurentMatrix(size, terms)


def build_fox_matrix(p: Presentation, rho: SymPowerRep, alpha: AlphaMap) -> FoxMatrix:
    if p.deficiency != 1:
        raise ValueError(f"Wada's invariant needs a deficiency-one presentation, got {p.deficiency}")
    blocks = [[phi(rho, alpha, fox_derivative(r, j), p) for j in range(len(p.generators))]
              for r in p.relators]
    return FoxMatrix(blocks, rho.n)


@dataclass
class WadaInvariant:
    num: LaurentPoly
    den: LaurentPoly
    deleted_index: int
    n: int
    signs: SignAssignment | None
    presentation: Presentation
    bits: int

    def __call__(self, z) -> acb:
        return poly_eval(self.num, z) / poly_eval(self.den, z)

    def reduced(self, points=(1, -1), tol: float = DEFLATION_TOL) -> tuple[LaurentPoly, LaurentPoly]:
        """``(num, den)`` with common ``(t - c)`` factors removed for ``c`` in ``points``.

        Parabolic meridians give denominators supported at ``t = +-1`` only,
        so the default points cancel everything the two share.
        """
        num, den = self.num, self.den
        for c in points:
            a = _deflate(num, c, tol)
            b = _deflate(den, c, tol)
            if a.ambiguous or b.ambiguous:
                raise PrecisionError(f"cannot decide common factors at t = {c}")
            k = min(a.multiplicity, b.multiplicity)
            for _ in range(k):
                num = synthetic_divide(num, c)[0]
                den = synthetic_divide(den, c)[0]
        return num, den


def _is_identically_zero(poly: LaurentPoly) -> bool:
    return all(c.contains(0) for c in poly.coeffs)


def generator_denominator(p: Presentation, rho: SymPowerRep, alpha: AlphaMap, j: int) -> LaurentPoly:
    e = GroupRingElement.from_word(Word.gen(j)) - GroupRingElement.one()
    return laurent_det(phi(rho, alpha, e, p))


def wada_invariant(p: Presentation, rho: SymPowerRep, alpha: AlphaMap,
                   column: int | None = None) -> WadaInvariant:
    """Twisted Alexander invariant ``num/den`` (up to ``+-t^p``).

    The deleted column is the smallest generator index whose denominator is
    not identically zero, unless ``column`` is given.
    """
    fox = build_fox_matrix(p, rho, alpha)
    candidates = [column] if column is not None else range(len(p.generators))
    for j in candidates:
        den = generator_denominator(p, rho, alpha, j)
        if den.is_zero() or _is_identically_zero(den):
            continue
        num = laurent_det(fox.delete_column(j))
        return WadaInvariant(num, den, j, rho.n, rho.signs, p, current_bits())
    raise DegenerateDenominator("det Phi(x_j - 1) vanishes identically for every admissible j; "
                                "the representation and alpha are incompatible with Wada's construction")


@dataclass
class LocalValue:
    """Leading behaviour ``value * (t - c)^order`` of a polynomial near ``c``."""

    value: acb
    order: int
    residual: float


def local_value(poly: LaurentPoly, c, tol: float = DEFLATION_TOL) -> LocalValue:
    """Deflate ``poly`` at ``c`` and evaluate the quotient there.

    Raises :class:`PrecisionError` if the zero test is ambiguous or the
    resulting value cannot be separated from zero.
    """
    d: Deflation = _deflate(poly, c, tol)
    if d.ambiguous:
        raise PrecisionError(
            f"deflation at {c} is ambiguous after {d.multiplicity} factor(s) "
            f"(relative residual {d.residual:.3g}); retry with more precision")
    v = poly_eval(d.quotient, c)
    if v.contains(0):
        raise PrecisionError(f"value after deflation at {c} is not separated from zero; "
                             "retry with more precision")
    return LocalValue(v, d.multiplicity, d.residual)


def limit_value(w: WadaInvariant, c, tol: float = DEFLATION_TOL) -> tuple[acb, int]:
    """Limit of ``num/den`` at ``c`` after removing common ``(t - c)`` factors.

    Returns ``(value, zero_order)``; a positive order means the invariant
    vanishes at ``c`` (value reported as 0).  A pole raises :class:`PoleError`.
    """
    c = to_acb(c)
    top = local_value(w.num, c, tol)
    bottom = local_value(w.den, c, tol)
    order = top.order - bottom.order
    if order < 0:
        raise PoleError(f"invariant has a pole of order {-order} at {c}")
    if order > 0:
        return acb(0), order
    return top.value / bottom.value, 0


def leading_value(w: WadaInvariant, c, tol: float = DEFLATION_TOL) -> tuple[acb, int]:
    """Like :func:`limit_value` but returns the nonzero leading coefficient for any order."""
    c = to_acb(c)
    top = local_value(w.num, c, tol)
    bottom = local_value(w.den, c, tol)
    return top.value / bottom.value, top.order - bottom.order


def _neville_at_zero(xs: list[acb], ys: list[acb]) -> list[acb]:
    """Successive polynomial extrapolants to x = 0 (last one uses all points)."""
    table = list(ys)
    out = [table[0]]
    m = len(xs)
    for level in range(1, m):
        for i in range(m - level):
            x0, x1 = xs[i], xs[i + level]
            table[i] = (x1 * table[i] - x0 * table[i + 1]) / (x1 - x0)
        out.append(table[0])
    return out


@dataclass
class LadderCheck:
    value: acb
    converged: bool
    spread: float


def cross_check_epsilon(w: WadaInvariant, c, zero_order: int = 0,
                        eps=(1e-2, 1e-3, 1e-4), rtol: float = 1e-5) -> LadderCheck:
    """Extrapolate ``num/den / (t - c)^zero_order`` along ``t = c e^(i eps)`` to ``eps = 0``.

    Independent of the deflation path: only point evaluations are used.
    """
    c = to_acb(c)
    xs, ys = [], []
    for e in eps:
        e = arb(e)
        t = c * acb(0, e).exp()
        val = w(t)
        if zero_order:
            val = val / (t - c) ** zero_order
        xs.append(acb(e))
        ys.append(val)
    best = _neville_at_zero(xs, ys)[-1]
    # agreement with the extrapolant that drops the coarsest step
    spread = 0.0
    if len(xs) > 1:
        sub = _neville_at_zero(xs[1:], ys[1:])[-1]
        spread = float(abs(best - sub).mid() / abs(best).mid())
    return LadderCheck(best, spread <= rtol, spread)
