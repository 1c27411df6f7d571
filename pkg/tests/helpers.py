"""Shared comparison helpers for the test-suite."""
import numpy as np

from twv.laurent import LaurentPoly, to_complex


def coeff_vector(p: LaurentPoly, lo: int, hi: int) -> np.ndarray:
    return np.array([to_complex(p.coefficient(k)) for k in range(lo, hi + 1)], dtype=complex)


def rel_diff(p: LaurentPoly, q: LaurentPoly) -> float:
    if p.is_zero() and q.is_zero():
        return 0.0
    lo = min(x.lo for x in (p, q) if not x.is_zero())
    hi = max(x.hi for x in (p, q) if not x.is_zero())
    a, b = coeff_vector(p, lo, hi), coeff_vector(q, lo, hi)
    scale = max(np.abs(a).max(), np.abs(b).max())
    return float(np.abs(a - b).max() / scale)


def poly(coeffs, lo=0) -> LaurentPoly:
    return LaurentPoly(list(coeffs), lo)


def from_factors(*factors) -> LaurentPoly:
    out = LaurentPoly([1])
    for f in factors:
        out = out * f
    return out
