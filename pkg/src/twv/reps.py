"""SL(2,C) holonomy data, sign-of-lift choices and symmetric powers.

The symmetric power ``sym_power(n, A)`` acts on homogeneous polynomials of
degree ``n-1`` in ``x, y`` by ``p(x, y) -> p(A^-1 (x, y))``.  With the basis
``x^(n-1), x^(n-2) y, ..., y^(n-1)`` column ``j`` of the matrix holds the
expansion of ``(d x - b y)^(n-1-j) (-c x + a y)^j`` for ``A = [[a, b], [c, d]]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import flint
import numpy as np
from flint import acb, acb_mat, acb_poly, arb

from .laurent import as_matrix, decimal_string, identity, to_acb, to_complex
from .words import Presentation, Word

DET_TOL = 1e-8


class RepresentationError(ValueError):
    pass


def _det2(m: acb_mat) -> acb:
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def inverse2(m: acb_mat) -> acb_mat:
    """Adjugate inverse of a unimodular 2x2 matrix."""
    return acb_mat([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])


def check_unimodular(m: acb_mat, tol: float = DET_TOL) -> None:
    err = abs(_det2(m) - 1)
    if not err.mid() <= arb(tol):
        raise RepresentationError(f"matrix is not in SL(2,C): |det - 1| = {float(err.mid()):.3g}")


def sym_power(n: int, a, tol: float = DET_TOL) -> acb_mat:
    if n < 1:
        raise ValueError("symmetric power dimension must be >= 1")
    a = as_matrix(a)
    if (a.nrows(), a.ncols()) != (2, 2):
        raise ValueError("sym_power expects a 2x2 matrix")
    check_unimodular(a, tol)
    if n == 2:
        # the formula below yields J A J^-1 (J = [[0, 1], [-1, 0]]); V_2 is identified
        # with the defining representation instead, so that rho_2 is the holonomy itself
        return acb_mat(a)
    p, q, r, s = a[0, 0], a[0, 1], a[1, 0], a[1, 1]
    # polynomials in y/x: coefficient k multiplies x^(n-1-k) y^k
    first = acb_poly([s, -q])
    second = acb_poly([-r, p])
    pow1 = [acb_poly([1])]
    pow2 = [acb_poly([1])]
    for _ in range(n - 1):
        pow1.append(pow1[-1] * first)
        pow2.append(pow2[-1] * second)
    cols = []
    for j in range(n):
        col = (pow1[n - 1 - j] * pow2[j]).coeffs()
        col += [acb(0)] * (n - len(col))
        cols.append(col)
    return acb_mat([[cols[j][i] for j in range(n)] for i in range(n)])


@dataclass(frozen=True)
class SignAssignment:
    signs: tuple[int, ...]

    def __post_init__(self):
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"signs must be +1/-1, got {self.signs}")

    @classmethod
    def parse(cls, text: str) -> "SignAssignment":
        text = text.strip()
        if not text or any(ch not in "+-" for ch in text):
            raise ValueError(f"sign assignment must be a string of '+'/'-', got {text!r}")
        return cls(tuple(1 if ch == "+" else -1 for ch in text))

    @classmethod
    def all_plus(cls, b: int) -> "SignAssignment":
        return cls((1,) * b)

    @classmethod
    def enumerate(cls, b: int) -> list["SignAssignment"]:
        out = []
        for mask in range(2 ** b):
            out.append(cls(tuple(-1 if mask >> (b - 1 - i) & 1 else 1 for i in range(b))))
        return out

    def __len__(self):
        return len(self.signs)

    def __str__(self):
        return "".join("+" if s == 1 else "-" for s in self.signs)


Entry = tuple[str, str]


def _entry_from(x, digits: int) -> Entry:
    z = to_acb(x)
    return (decimal_string(z.real, digits), decimal_string(z.imag, digits))


@dataclass(frozen=True)
class Sl2Rep:
    """Images of the generators in SL(2,C), kept as exact decimal strings.

    Each generator maps to four ``(re, im)`` decimal pairs (row-major).
    Matrices are materialised at the current working precision on demand,
    so fixtures can supply as many digits as the computation will need.
    """

    names: tuple[str, ...]
    entries: tuple[tuple[Entry, Entry, Entry, Entry], ...]
    branch: str = ""
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @classmethod
    def from_matrices(cls, matrices: Mapping[str, object], branch: str = "",
                      digits: int = 40) -> "Sl2Rep":
        names, entries = [], []
        for name, m in matrices.items():
            m = as_matrix(m)
            names.append(name)
            entries.append(tuple(_entry_from(m[i, j], digits) for i in range(2) for j in range(2)))
        return cls(tuple(names), tuple(entries), branch)

    def matrix(self, name_or_index) -> acb_mat:
        i = name_or_index if isinstance(name_or_index, int) else self.names.index(name_or_index)
        key = (i, flint.ctx.prec)
        if key not in self._cache:
            vals = [acb(arb(re_), arb(im_)) for re_, im_ in self.entries[i]]
            self._cache[key] = acb_mat([[vals[0], vals[1]], [vals[2], vals[3]]])
        return self._cache[key]

    def matrices(self) -> list[acb_mat]:
        return [self.matrix(i) for i in range(len(self.names))]

    @property
    def digits(self) -> int:
        """Longest decimal entry, a proxy for the precision the input supports."""
        return max(len(x) for e in self.entries for pair in e for x in pair)

    def conjugate(self, s, digits: int = 60) -> "Sl2Rep":
        """The representation g -> S rho(g) S^-1 for any invertible 2x2 ``S``."""
        s = as_matrix(s)
        # divide by det: an S that is unimodular only up to rounding must not rescale rho
        si = inverse2(s) * (1 / _det2(s))
        return Sl2Rep.from_matrices({n: s * self.matrix(n) * si for n in self.names},
                                    self.branch, digits)

    def max_det_error(self) -> float:
        return max(float(abs(_det2(m) - 1).mid()) for m in self.matrices())

    def for_presentation(self, p: Presentation) -> list[acb_mat]:
        missing = [n for n in p.names if n not in self.names]
        if missing:
            raise RepresentationError(f"no matrix for generators {missing}")
        return [self.matrix(n) for n in p.names]


class SymPowerRep:
    """``rho_n = sigma_n o (eps . rho_2)`` restricted to a presentation's generators."""

    def __init__(self, n: int, images: Sequence[acb_mat], inverses: Sequence[acb_mat],
                 base: Sl2Rep | None = None, signs: SignAssignment | None = None):
        self.n = n
        self.images = list(images)
        self.inverses = list(inverses)
        self.base = base
        self.signs = signs
        self._words: dict[Word, acb_mat] = {}

    def __len__(self):
        return len(self.images)


def lift_rep(n: int, rho2: Sl2Rep, eps: SignAssignment, p: Presentation,
             tol: float = DET_TOL) -> SymPowerRep:
    if len(eps) != p.component_count:
        raise RepresentationError(f"sign assignment {eps} has {len(eps)} entries, "
                                  f"link has {p.component_count} components")
    images, inverses = [], []
    for g, m in zip(p.generators, rho2.for_presentation(p)):
        m = m * eps.signs[g.component]
        images.append(sym_power(n, m, tol))
        # sigma_n is a homomorphism, so the inverse image is sigma_n of the adjugate
        inverses.append(sym_power(n, inverse2(m), tol))
    return SymPowerRep(n, images, inverses, rho2, eps)


def rep_from_matrices(matrices: Sequence, n: int | None = None) -> SymPowerRep:
    """Representation given directly by generator images (any dimension)."""
    images = [as_matrix(m) for m in matrices]
    n = n or images[0].nrows()
    return SymPowerRep(n, images, [m.inv() for m in images])


def evaluate_word(rho: SymPowerRep, w: Word) -> acb_mat:
    """Ordered product of generator images (inverse images for negative letters)."""
    cached = rho._words.get(w)
    if cached is not None:
        return cached
    if w.is_identity():
        out = identity(rho.n)
    else:
        head = Word(w.letters[:-1])
        g, s = w.letters[-1]
        out = evaluate_word(rho, head) * (rho.images[g] if s == 1 else rho.inverses[g])
    rho._words[w] = out
    return out


@dataclass
class RepReport:
    n: int
    relator_residuals: list[float]
    det_errors: list[float]
    traces: list[complex]
    expected_traces: list[float | None]
    failures: list[str]

    @property
    def max_residual(self) -> float:
        return max(self.relator_residuals, default=0.0)

    @property
    def ok(self) -> bool:
        return not self.failures


def _max_entry(m: acb_mat) -> float:
    return max(float(abs(x).mid()) for row in m.tolist() for x in row)


def verify_rep(p: Presentation, rho: SymPowerRep, tol: float = 1e-10,
               check_traces: bool = True) -> RepReport:
    """Relator residuals, unimodularity and meridian traces of a representation.

    For a parabolic meridian with sign ``e`` the trace of its image under
    ``sigma_n`` is ``e^(n-1) n`` (``+-2`` when ``n = 2``).
    """
    n = rho.n
    failures = []
    eye = identity(n)
    residuals = []
    for i, r in enumerate(p.relators):
        res = _max_entry(evaluate_word(rho, r) - eye)
        residuals.append(res)
        if not res <= tol:
            failures.append(f"relator {i} residual {res:.3g} exceeds {tol:g}")
    dets = []
    for g, m in zip(p.generators, rho.images):
        err = float(abs(m.det() - 1).mid())
        dets.append(err)
        if not err <= max(tol, 1e-8):
            failures.append(f"generator {g.name}: |det - 1| = {err:.3g}")
    traces, expected = [], []
    for g, m in zip(p.generators, rho.images):
        tr = to_complex(m.trace())
        traces.append(tr)
        if rho.signs is None:
            expected.append(None)
            continue
        e = rho.signs.signs[g.component]
        want = float(e ** (n - 1) * n)
        expected.append(want)
        if check_traces and abs(tr - want) > max(tol, 1e-8) * max(1.0, abs(want)):
            failures.append(f"generator {g.name}: trace {tr:.6g} but sign "
                            f"{'+' if e == 1 else '-'} expects {want:g}")
    return RepReport(n, residuals, dets, traces, expected, failures)


def whitehead_cubic(x, y, v):
    """The polynomial cutting out the irreducible characters of the Whitehead link group."""
    return x * y - (x * x + y * y - 2) * v + x * y * v * v - v ** 3


def whitehead_gamma_candidates() -> list[acb]:
    """Lower-left entries gamma of parabolic Whitehead holonomies.

    Roots ``v`` of the character cubic at ``x = y = 2`` outside the reducible
    locus ``v = +-y`` are shifted to ``gamma = v - 2`` (alpha = beta = 1).
    """
    # coefficients of p(2, 2, v) in increasing powers of v
    coeffs = [4, -6, 4, -1]
    guesses = np.roots(coeffs[::-1])
    out = []
    for g in guesses:
        v = acb(complex(g).real, complex(g).imag)
        poly = acb_poly(coeffs)
        deriv = poly.derivative()
        for _ in range(2 * flint.ctx.prec.bit_length() + 8):
            v = (v - poly(v) / deriv(v)).mid()
        if abs(v - 2).mid() < arb("1e-6") or abs(v + 2).mid() < arb("1e-6"):
            continue
        out.append(v - 2)
    out.sort(key=lambda z: float(z.imag.mid()), reverse=True)
    return out


def random_sl2(rng: np.random.Generator, scale: float = 1.0) -> acb_mat:
    """Random 2x2 matrix normalised by a square root of its determinant (det = 1 up to rounding)."""
    while True:
        z = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))) * scale
        d = np.linalg.det(z)
        if abs(d) > 1e-2:
            break
    z = z / np.sqrt(complex(d))
    # exact binary64 midpoints; unimodular up to rounding
    return as_matrix(z)
