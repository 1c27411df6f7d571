"""Complex ball arithmetic, Laurent polynomials and polynomial-matrix determinants.

Scalars are :class:`flint.acb` balls.  The working precision is FLINT's
process-wide context precision; use :func:`working_precision` to change it
for a block of code.  Ball radii are carried through every operation, so a
value whose ball still contains zero after a computation is *undecided*
rather than zero.
"""
from __future__ import annotations

import math
import os
from contextlib import contextmanager
from dataclasses import dataclass
from numbers import Number
from typing import Iterable, Mapping, Sequence

import flint
import numpy as np
from flint import acb, acb_mat, arb

PRECISION_LEVELS = {"f64": 53, "dd": 106}


class PrecisionError(ArithmeticError):
    """The working precision is too low to decide a zero test or certify a value."""


def precision_bits(level: str | int | None = None) -> int | None:
    """Translate a precision level to bits; ``"auto"``/``None`` give ``None``.

    The ``TWV_PRECISION`` environment variable overrides ``level=None``.
    """
    if level is None:
        level = os.environ.get("TWV_PRECISION", "auto")
    if isinstance(level, int):
        return level
    level = str(level).strip().lower()
    if level == "auto":
        return None
    if level in PRECISION_LEVELS:
        return PRECISION_LEVELS[level]
    if level.isdigit():
        return int(level)
    raise ValueError(f"unknown precision level {level!r} (use f64, dd, auto or a bit count)")


@contextmanager
def working_precision(bits: int):
    old = flint.ctx.prec
    flint.ctx.prec = int(bits)
    try:
        yield
    finally:
        flint.ctx.prec = old


def current_bits() -> int:
    return flint.ctx.prec


def to_acb(x) -> acb:
    if isinstance(x, acb):
        return x
    if isinstance(x, arb):
        return acb(x)
    if isinstance(x, str):
        return parse_complex(x)
    if isinstance(x, (tuple, list)) and len(x) == 2:
        return acb(_to_arb(x[0]), _to_arb(x[1]))
    if isinstance(x, (complex, np.complexfloating)):
        return acb(float(x.real), float(x.imag))
    if isinstance(x, Number):
        if isinstance(x, int):
            return acb(x)
        return acb(float(x))
    raise TypeError(f"cannot convert {type(x).__name__} to a complex ball")


def _to_arb(x) -> arb:
    if isinstance(x, arb):
        return x
    if isinstance(x, str):
        return arb(x.strip())
    if isinstance(x, int):
        return arb(x)
    return arb(float(x))


def parse_complex(text: str) -> acb:
    """Parse ``"re"`` or ``"re,im"`` decimal strings into a ball."""
    if "," in text:
        re_, im_ = text.split(",")
        return acb(arb(re_.strip()), arb(im_.strip()))
    return acb(arb(text.strip()))


def decimal_string(x: arb, digits: int) -> str:
    """Midpoint of ``x`` as a decimal string with ``digits`` significant digits."""
    if x.mid().is_zero():
        return "0"
    return x.mid().str(digits, radius=False)


def magnitude(z: acb) -> arb:
    return abs(z)


def log_magnitude(z: acb) -> float:
    """log|z| as a float; never overflows (balls carry arbitrary exponents)."""
    m = abs(z)
    if m.contains(0):
        return -math.inf
    return float(m.log().mid())


def to_complex(z: acb) -> complex:
    return complex(float(z.real.mid()), float(z.imag.mid()))


def _upper(z: acb) -> arb:
    return z.abs_upper()


def _mid_abs(z: acb) -> arb:
    return abs(z.mid()).mid()


# ---------------------------------------------------------------- Laurent polys


class LaurentPoly:
    """Laurent polynomial ``sum_k c_k t^k`` with ball coefficients.

    Stored as a lowest exponent ``lo`` and a coefficient tuple; exact zero
    coefficients are trimmed at both ends.
    """

    __slots__ = ("lo", "coeffs")

    def __init__(self, coeffs: Sequence | Mapping[int, object] = (), lo: int = 0):
        if isinstance(coeffs, Mapping):
            if not coeffs:
                cs, lo = [], 0
            else:
                lo = min(coeffs)
                hi = max(coeffs)
                cs = [to_acb(coeffs.get(k, 0)) for k in range(lo, hi + 1)]
        else:
            cs = [to_acb(c) for c in coeffs]
        start = 0
        while start < len(cs) and cs[start].is_zero():
            start += 1
        end = len(cs)
        while end > start and cs[end - 1].is_zero():
            end -= 1
        self.coeffs = tuple(cs[start:end])
        self.lo = lo + start if self.coeffs else 0

    @classmethod
    def t(cls, k: int = 1) -> "LaurentPoly":
        return cls([1], lo=k)

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> "LaurentPoly":
        p = cls([lead])
        for r in roots:
            p = p * cls([-to_acb(r), 1])
        return p

    @property
    def hi(self) -> int:
        return self.lo + len(self.coeffs) - 1

    @property
    def window(self) -> tuple[int, int]:
        return (self.lo, self.hi)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> acb:
        i = k - self.lo
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return acb(0)

    def as_dict(self) -> dict[int, acb]:
        return {self.lo + i: c for i, c in enumerate(self.coeffs)}

    def norm(self) -> arb:
        """Max-norm of the coefficient midpoints."""
        best = arb(0)
        for c in self.coeffs:
            m = _mid_abs(c)
            if m > best:
                best = m
        return best

    def __add__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        return LaurentPoly([self.coefficient(k) + other.coefficient(k) for k in range(lo, hi + 1)], lo)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly([-c for c in self.coeffs], self.lo)

    def __sub__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return LaurentPoly.constant(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            z = to_acb(other)
            return LaurentPoly([c * z for c in self.coeffs], self.lo)
        if self.is_zero() or other.is_zero():
            return LaurentPoly()
        prod = flint.acb_poly(list(self.coeffs)) * flint.acb_poly(list(other.coeffs))
        return LaurentPoly(prod.coeffs(), self.lo + other.lo)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            raise ValueError("negative powers are not Laurent polynomials in general")
        out = LaurentPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by t^k."""
        return LaurentPoly(self.coeffs, self.lo + k)

    def substitute_sign(self) -> "LaurentPoly":
        """p(-t)."""
        return LaurentPoly([c if (self.lo + i) % 2 == 0 else -c
                            for i, c in enumerate(self.coeffs)], self.lo)

    def __call__(self, z) -> acb:
        return poly_eval(self, z)

    def mid(self) -> "LaurentPoly":
        return LaurentPoly([c.mid() for c in self.coeffs], self.lo)

    def trim(self, tol: float) -> "LaurentPoly":
        """Zero every coefficient whose magnitude is <= tol * norm."""
        if self.is_zero():
            return self
        cut = self.norm() * arb(tol)
        return LaurentPoly([acb(0) if _upper(c) <= cut else c for c in self.coeffs], self.lo)

    def to_numpy(self) -> np.ndarray:
        return np.array([to_complex(c) for c in self.coeffs], dtype=complex)

    def normalized(self) -> "LaurentPoly":
        """Representative of the class modulo +-t^p used for printing.

        The lowest exponent is shifted to 0 and the sign is chosen so the
        leading coefficient has positive real part (positive imaginary part
        when the real part vanishes).
        """
        if self.is_zero():
            return self
        lead = to_complex(self.coeffs[-1])
        scale = abs(lead) or 1.0
        flip = lead.real < -1e-12 * scale or (abs(lead.real) <= 1e-12 * scale and lead.imag < 0)
        p = LaurentPoly(self.coeffs, 0)
        return -p if flip else p

    def __repr__(self):
        return f"LaurentPoly({self.format(6)})"

    def format(self, digits: int = 6, var: str = "t") -> str:
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.hi, self.lo - 1, -1):
            c = self.coefficient(k)
            if c.is_zero():
                continue
            terms.append(_format_term(to_complex(c), k, digits, var))
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def _format_real(x: float, digits: int) -> str:
    r = round(x)
    if abs(x - r) <= 10.0 ** (-digits) * max(1.0, abs(x)):
        return str(int(r))
    return f"{x:.{digits}g}"


def _format_term(c: complex, k: int, digits: int, var: str) -> str:
    scale = max(abs(c), 1e-300)
    re_ = c.real if abs(c.real) > 10.0 ** (-digits - 2) * scale else 0.0
    im_ = c.imag if abs(c.imag) > 10.0 ** (-digits - 2) * scale else 0.0
    mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
    if im_ == 0.0:
        sign = "-" if re_ < 0 else "+"
        mag = _format_real(abs(re_), digits)
        body = mag if (mag != "1" or not mono) else ""
    elif re_ == 0.0:
        sign = "-" if im_ < 0 else "+"
        mag = _format_real(abs(im_), digits)
        body = ("" if mag == "1" else mag) + "i"
    else:
        sign = "+"
        body = f"({_format_real(re_, digits)}{'-' if im_ < 0 else '+'}{_format_real(abs(im_), digits)}i)"
    if body and mono:
        body = body + "*" + mono
    elif mono:
        body = mono
    return f"{sign} {body}"


def poly_eval(p: LaurentPoly, z) -> acb:
    """Evaluate ``p`` at ``z`` by Horner's rule on the shifted polynomial."""
    z = to_acb(z)
    if z.is_zero():
        raise ZeroDivisionError("Laurent polynomial evaluated at t = 0")
    acc = acb(0)
    for c in reversed(p.coeffs):
        acc = acc * z + c
    return acc * z ** p.lo if p.lo else acc


@dataclass(frozen=True)
class RationalFunction:
    num: LaurentPoly
    den: LaurentPoly

    def __post_init__(self):
        if self.den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")

    def __call__(self, z) -> acb:
        return poly_eval(self.num, z) / poly_eval(self.den, z)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.den, self.den * other.num)


# ---------------------------------------------------------------- deflation


@dataclass
class Deflation:
    quotient: LaurentPoly
    multiplicity: int
    ambiguous: bool
    # last remainder relative to the polynomial it came from (upper bound)
    residual: float


def synthetic_divide(p: LaurentPoly, c) -> tuple[LaurentPoly, acb]:
    """Divide ``t^-lo p`` by ``(t - c)``; returns quotient (same ``lo``) and remainder."""
    c = to_acb(c)
    cs = p.coeffs
    if not cs:
        return LaurentPoly(), acb(0)
    q = [acb(0)] * (len(cs) - 1)
    acc = acb(0)
    for i in range(len(cs) - 1, 0, -1):
        acc = acc * c + cs[i]
        q[i - 1] = acc
    rem = acc * c + cs[0]
    return LaurentPoly(q, p.lo), rem


def _deflate(p: LaurentPoly, c, tol: float) -> Deflation:
    if p.is_zero():
        raise ValueError("cannot deflate the zero polynomial")
    c = to_acb(c)
    if c.is_zero():
        raise ValueError("deflation point must be nonzero")
    tol_ = arb(tol)
    mult = 0
    while len(p.coeffs) > 1:
        q, rem = synthetic_divide(p, c)
        norm = p.norm()
        if norm.is_zero():
            return Deflation(p, mult, True, math.inf)
        hi = _upper(rem) / norm
        lo = rem.abs_lower() / norm
        if hi <= tol_:
            p, mult = q, mult + 1
            continue
        ambiguous = not (lo >= 10 * tol_)
        return Deflation(p, mult, ambiguous, float(hi.mid()) if hi.is_finite() else math.inf)
    return Deflation(p, mult, False, math.inf)


def deflate_at(p: LaurentPoly, c, tol: float = 1e-8) -> tuple[LaurentPoly, int]:
    """Divide out the factor ``(t - c)`` as often as the remainder allows.

    A division is accepted while the remainder is at most ``tol`` times the
    coefficient norm of the polynomial being divided.
    """
    d = _deflate(p, c, tol)
    return d.quotient, d.multiplicity


def compare_up_to_unit(f: LaurentPoly, g: LaurentPoly, tol: float = 1e-8) -> bool:
    """True iff ``f = +-t^p g`` to relative tolerance ``tol``."""
    f, g = f.trim(tol), g.trim(tol)
    if f.is_zero() or g.is_zero():
        return f.is_zero() and g.is_zero()
    if len(f.coeffs) != len(g.coeffs):
        return False
    fa = f.to_numpy()
    ga = g.to_numpy()
    scale = max(np.abs(fa).max(), np.abs(ga).max())
    return any(np.abs(fa - s * ga).max() <= tol * scale for s in (1, -1))


def unit_ratio(f: LaurentPoly, g: LaurentPoly, tol: float = 1e-8) -> tuple[int, int] | None:
    """The (sign, shift) with ``f = sign * t^shift * g``, or None."""
    f, g = f.trim(tol), g.trim(tol)
    if f.is_zero() or g.is_zero() or len(f.coeffs) != len(g.coeffs):
        return None
    fa, ga = f.to_numpy(), g.to_numpy()
    scale = max(np.abs(fa).max(), np.abs(ga).max())
    for s in (1, -1):
        if np.abs(fa - s * ga).max() <= tol * scale:
            return s, f.lo - g.lo
    return None


# ---------------------------------------------------------------- matrices


def as_matrix(m) -> acb_mat:
    if isinstance(m, acb_mat):
        return m
    rows = [[to_acb(x) for x in row] for row in (m.tolist() if isinstance(m, np.ndarray) else m)]
    return acb_mat(rows)


def identity(n: int) -> acb_mat:
    return acb_mat(n, n, [acb(1) if i == j else acb(0) for i in range(n) for j in range(n)])


def zeros(n: int, m: int | None = None) -> acb_mat:
    return acb_mat(n, n if m is None else m)


def to_numpy_matrix(m: acb_mat) -> np.ndarray:
    return np.array([[to_complex(x) for x in row] for row in m.tolist()], dtype=complex)


def max_abs(m: acb_mat) -> float:
    return max((float(abs(x).mid()) for row in m.tolist() for x in row), default=0.0)


@dataclass(frozen=True)
class Determinant:
    value: acb
    log_abs: float

    def __iter__(self):
        return iter((self.value, self.log_abs))


def lu_det(m) -> Determinant:
    """Determinant of a square complex matrix and its log-magnitude.

    Uses Arb's ball Gaussian elimination; magnitudes never overflow since
    ball exponents are unbounded.  A singular matrix yields 0 and ``-inf``.
    """
    m = as_matrix(m)
    if m.nrows() != m.ncols():
        raise ValueError(f"determinant of a non-square {m.nrows()}x{m.ncols()} matrix")
    if m.nrows() == 0:
        return Determinant(acb(1), 0.0)
    d = m.det()
    return Determinant(d, log_magnitude(d))


class LaurentMatrix:
    """Square matrix with Laurent polynomial entries, stored as ``{exponent: acb_mat}``."""

    __slots__ = ("size", "terms")

    def __init__(self, size: int, terms: Mapping[int, acb_mat] | None = None):
        self.size = int(size)
        self.terms: dict[int, acb_mat] = {}
        for k, m in (terms or {}).items():
            if (m.nrows(), m.ncols()) != (self.size, self.size):
                raise ValueError("dimension mismatch in LaurentMatrix term")
            self.terms[int(k)] = m

    @classmethod
    def from_entries(cls, rows: Sequence[Sequence[LaurentPoly]]) -> "LaurentMatrix":
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("LaurentMatrix must be square")
        exps = sorted({k for r in rows for p in r for k in p.as_dict()})
        terms = {}
        for k in exps:
            terms[k] = acb_mat([[p.coefficient(k) for p in r] for r in rows])
        return cls(n, terms)

    @classmethod
    def constant(cls, m) -> "LaurentMatrix":
        m = as_matrix(m)
        return cls(m.nrows(), {0: m})

    def entry(self, i: int, j: int) -> LaurentPoly:
        return LaurentPoly({k: m[i, j] for k, m in self.terms.items()})

    def evaluate(self, z) -> acb_mat:
        z = to_acb(z)
        out = zeros(self.size)
        for k, m in self.terms.items():
            out = out + m * z ** k
        return out

    def row_windows(self) -> list[tuple[int, int] | None]:
        wins: list[tuple[int, int] | None] = []
        for i in range(self.size):
            ks = [k for k, m in self.terms.items()
                  if any(not m[i, j].is_zero() for j in range(self.size))]
            wins.append((min(ks), max(ks)) if ks else None)
        return wins

    def det_window(self) -> tuple[int, int] | None:
        wins = self.row_windows()
        if any(w is None for w in wins):
            return None
        return sum(w[0] for w in wins), sum(w[1] for w in wins)

    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if self.size != other.size:
            raise ValueError("dimension mismatch")
        terms = dict(self.terms)
        for k, m in other.terms.items():
            terms[k] = terms[k] + m if k in terms else m
        return LaurentMatrix(self.size, terms)

    def __mul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if self.size != other.size:
            raise ValueError("dimension mismatch")
        terms: dict[int, acb_mat] = {}
        for k1, m1 in self.terms.items():
            for k2, m2 in other.terms.items():
                p = m1 * m2
                terms[k1 + k2] = terms[k1 + k2] + p if k1 + k2 in terms else p
        return LaurentMatrix(self.size, terms)


def unit_circle_points(count: int) -> list[acb]:
    return [acb(arb(2 * k) / count).exp_pi_i() for k in range(count)]


def interpolate_unit_circle(samples: Sequence[acb], lo: int) -> LaurentPoly:
    """Coefficients of ``t^lo P(t)`` from ``P`` sampled at the N-th roots of unity."""
    n = len(samples)
    coeffs = [c / n for c in acb.dft(list(samples))]
    return LaurentPoly(coeffs, lo)


def sample_unit_circle(p: LaurentPoly, count: int) -> list[acb]:
    """Values of ``t^-lo p`` at the ``count``-th roots of unity."""
    shifted = LaurentPoly(p.coeffs, 0)
    return [poly_eval(shifted, z) for z in unit_circle_points(count)]


def laurent_det(m: LaurentMatrix, clamp: float | None = None) -> LaurentPoly:
    """Determinant of a Laurent matrix by unit-circle evaluation and inverse DFT.

    The exponent window of the determinant is bounded by the sums of the
    row-wise minimal and maximal exponents; the matrix is sampled at that
    many roots of unity.  Coefficients whose balls lie entirely below
    ``clamp`` (default ``N * 2^-prec * max|sample|``) are set to zero.
    """
    win = m.det_window()
    if win is None:
        return LaurentPoly()
    lo, hi = win
    count = hi - lo + 1
    samples = []
    for z in unit_circle_points(count):
        d = m.evaluate(z).det()
        samples.append(d * z ** (-lo) if lo else d)
    p = interpolate_unit_circle(samples, lo)
    biggest = max((_upper(s) for s in samples), key=lambda a: a.mid(), default=arb(0))
    if clamp is None:
        cut = biggest * arb(count) * arb(2) ** (-current_bits())
    else:
        cut = biggest * arb(clamp)
    return LaurentPoly([acb(0) if _upper(c) <= cut else c for c in p.coeffs], p.lo)


def cofactor_det(rows: Sequence[Sequence[LaurentPoly]]) -> LaurentPoly:
    """Laplace expansion along the first row; exponential cost, small sizes only."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = LaurentPoly()
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * cofactor_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total
