"""Volume estimates 4*pi*log|A_n(t)|/n^2 from twisted Alexander invariants.

Two correction modes are offered:

``ratio``
    A_n = Delta_n / Delta_2 (n even) or Delta_n / Delta_3 (n odd).
``plain``
    Delta_n itself for even n, and the limit of
    Delta_n(t) / prod_l (t^a(l) - 1) for odd n.

Values at the evaluation point are obtained by deflating numerator and
denominator polynomials separately and combining the leading coefficients,
so shared ``(t - c)`` factors cancel exactly.  With ``precision="auto"`` the
working precision is raised until every zero test is decided and the value
is certified to at least ``MIN_ACCURACY_BITS`` relative bits.
"""
from __future__ import annotations

import cmath
import csv
import io
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from flint import acb, acb_mat, arb

from .fixtures import LinkData
from .laurent import (LaurentPoly, PrecisionError, log_magnitude, precision_bits,
                      to_acb, to_complex, working_precision)
from .reps import SignAssignment, Sl2Rep, lift_rep
from .wada import (DEFLATION_TOL, LocalValue, PoleError, WadaInvariant, local_value,
                   wada_invariant)
from .words import AlphaMap, Presentation

log = logging.getLogger(__name__)

MIN_ACCURACY_BITS = 30
MAX_BITS = 1 << 15
CONJECTURAL_BANNER = ("CONJECTURAL: evaluation at a root of unity other than t = +-1 "
                      "is exploratory; no volume limit is known there.")


class ParityError(ArithmeticError):
    """Zero order at t = 1 disagrees with the parity rule for the dimension."""


def start_bits(n: int) -> int:
    return 64 + 28 * n


def estimator(n: int, modulus) -> float:
    """4*pi*ln(modulus)/n^2."""
    if isinstance(modulus, (arb, acb)):
        if not (abs(modulus) > 0):
            raise ValueError("estimator needs a positive modulus")
        lm = float(abs(modulus).log().mid())
    else:
        if not modulus > 0:
            raise ValueError("estimator needs a positive modulus")
        lm = math.log(modulus)
    return 4 * math.pi * lm / n ** 2


def estimator_from_log(n: int, log_modulus: float) -> float:
    return 4 * math.pi * log_modulus / n ** 2


def _point_acb(point) -> acb:
    if isinstance(point, acb):
        return point
    if isinstance(point, (int, float)):
        return acb(point)
    return to_acb(complex(point))


def is_unimodular(point, tol: float = 1e-12) -> bool:
    return abs(abs(complex(point)) - 1) <= tol


def product_polynomial(alpha: AlphaMap) -> LaurentPoly:
    """prod_l (t^a(l) - 1)."""
    out = LaurentPoly([1])
    for a in alpha.exponents:
        out = out * (LaurentPoly.t(a) - 1)
    return out


@dataclass
class LocalPair:
    num: LocalValue
    den: LocalValue
    bits: int
    invariant: WadaInvariant

    @property
    def order(self) -> int:
        return self.num.order - self.den.order

    @property
    def value(self) -> acb:
        return self.num.value / self.den.value


class Pipeline:
    """Computes and caches Wada invariants and their local data for one link.

    ``precision`` is ``"auto"`` (adaptive), ``"f64"``, ``"dd"`` or a bit count.
    Fixed precisions raise :class:`PrecisionError` instead of escalating.
    """

    def __init__(self, data: LinkData, rep_index: int = 0, precision="auto",
                 tol: float = DEFLATION_TOL, max_bits: int = MAX_BITS):
        self.data = data
        self.rho2: Sl2Rep = data.representations[rep_index]
        self.fixed_bits = precision_bits(precision)
        self.tol = tol
        self.max_bits = max_bits
        self._invariants: dict = {}
        self._locals: dict = {}
        self._input_bits: float | None = None

    @property
    def presentation(self) -> Presentation:
        return self.data.presentation

    @property
    def alpha(self) -> AlphaMap:
        return self.data.alpha

    def _bits_ladder(self, n: int) -> Iterable[int]:
        if self.fixed_bits is not None:
            yield self.fixed_bits
            return
        bits = start_bits(n)
        while bits <= self.max_bits:
            yield bits
            bits = int(bits * 1.5)

    def _measure_input_bits(self) -> float:
        """-log2 of the relator residual of rho_2, i.e. how exact the supplied matrices are."""
        p = self.presentation
        from .reps import SymPowerRep, evaluate_word, inverse2
        with working_precision(int(self.rho2.digits * 3.4) + 128):
            mats = self.rho2.for_presentation(p)
            rho = SymPowerRep(2, mats, [inverse2(m) for m in mats])
            res = arb(0)
            for r in p.relators:
                d = evaluate_word(rho, r) - acb_mat([[1, 0], [0, 1]])
                for row in d.tolist():
                    for x in row:
                        u = x.abs_upper()
                        if u > res:
                            res = u
            if res.is_zero():
                return math.inf
            return -float(res.log().mid()) / math.log(2)

    @property
    def input_bits(self) -> float:
        if self._input_bits is None:
            self._input_bits = self._measure_input_bits()
        return self._input_bits

    def input_note(self, bits: int) -> str:
        if self.input_bits + 64 > bits:
            return ""
        return (f"; the input matrices are only accurate to about 2^-{self.input_bits:.0f}, too inexact "
                f"to resolve the zero structure at this dimension, supply more digits")

    def _beyond_input(self, bits: int) -> bool:
        return bits >= self.input_bits + 64

    def invariant_at(self, n: int, signs: SignAssignment, bits: int) -> WadaInvariant:
        key = (n, signs.signs, bits)
        if key not in self._invariants:
            with working_precision(bits):
                rho = lift_rep(n, self.rho2, signs, self.presentation)
                self._invariants[key] = wada_invariant(self.presentation, rho, self.alpha)
        return self._invariants[key]

    def certified_invariant(self, n: int, signs: SignAssignment, accuracy_bits: int = 40) -> WadaInvariant:
        """Invariant whose coefficients are known to ``accuracy_bits`` relative to the largest."""
        for bits in self._bits_ladder(n):
            w = self.invariant_at(n, signs, bits)
            with working_precision(bits):
                if all(_poly_accurate(q, accuracy_bits) for q in (w.num, w.den)):
                    return w
            if self._beyond_input(bits):
                break
        raise PrecisionError(f"n={n}, signs={signs}: coefficients not certified to {accuracy_bits} bits")

    def local(self, n: int, signs: SignAssignment, point=1) -> LocalPair:
        """Certified leading data of numerator and denominator at ``point``."""
        c = _point_acb(point)
        key = (n, signs.signs, complex(to_complex(c)))
        if key in self._locals:
            return self._locals[key]
        last_error: Exception | None = None
        for bits in self._bits_ladder(n):
            try:
                w = self.invariant_at(n, signs, bits)
                with working_precision(bits):
                    top = local_value(w.num, c, self.tol)
                    bottom = local_value(w.den, c, self.tol)
                    value = top.value / bottom.value
                    if value.rel_accuracy_bits() < MIN_ACCURACY_BITS:
                        raise PrecisionError(f"value certified to only {value.rel_accuracy_bits()} bits")
                pair = LocalPair(top, bottom, bits, w)
                self._locals[key] = pair
                return pair
            except PrecisionError as exc:
                log.debug("n=%d signs=%s at %d bits: %s", n, signs, bits, exc)
                last_error = exc
                # free the memory held by failed attempts
                self._invariants.pop((n, signs.signs, bits), None)
                if self._beyond_input(bits):
                    raise PrecisionError(
                        f"n={n}, signs={signs}: input matrices are too inexact (relator residual "
                        f"about 2^-{self.input_bits:.0f}); supply more digits") from exc
        raise PrecisionError(f"n={n}, signs={signs}: {last_error} (precision "
                             f"{'fixed at ' + str(self.fixed_bits) if self.fixed_bits else 'exhausted at ' + str(self.max_bits)} bits)")


def _poly_accurate(p: LaurentPoly, accuracy_bits: int) -> bool:
    if p.is_zero():
        return True
    scale = p.norm() * arb(2) ** (-accuracy_bits)
    return all(c.rad() < scale for c in p.coeffs)


@dataclass
class CorrectedValue:
    modulus: arb
    log_modulus: float
    zero_order: int
    bits: int
    value: complex


def corrected_ratio(pipeline: Pipeline, n: int, signs: SignAssignment, point=1) -> CorrectedValue:
    """|A_n(point)| with A_n = Delta_n / Delta_base, base 2 (even n) or 3 (odd n)."""
    if n < 2:
        raise ValueError("ratio mode needs n >= 2")
    base = 2 if n % 2 == 0 else 3
    top = pipeline.local(n, signs, point)
    bottom = pipeline.local(base, signs, point)
    order = top.order - bottom.order
    note = pipeline.input_note(max(top.bits, bottom.bits))
    if order < 0:
        raise PoleError(f"A_{n} has a pole of order {-order} at t = {point}{note}")
    if order > 0:
        raise ZeroDivisionError(f"A_{n} vanishes to order {order} at t = {point}{note}")
    with working_precision(max(top.bits, bottom.bits)):
        value = top.value / bottom.value
        mod = abs(value)
    return CorrectedValue(mod, log_magnitude(value), order, max(top.bits, bottom.bits),
                          to_complex(value))


def tilde_value(pipeline: Pipeline, n: int, signs: SignAssignment, point=1,
                enforce_parity: bool = True) -> CorrectedValue:
    """|Delta_n(point)| for even n, |lim Delta_n / prod (t^a - 1)| for odd n."""
    c = _point_acb(point)
    pair = pipeline.local(n, signs, point)
    order = pair.order
    with working_precision(pair.bits):
        value = pair.value
        if n % 2 == 1:
            prod = local_value(product_polynomial(pipeline.alpha), c, pipeline.tol)
            order -= prod.order
            value = value / prod.value
    at_one = abs(complex(to_complex(c)) - 1) < 1e-12
    if enforce_parity and at_one and order != 0:
        b = pipeline.presentation.component_count
        expected = "0 zeros (acyclic even-dimensional lift)" if n % 2 == 0 else \
            f"exactly {b} = number of components zeros of (t^a - 1)"
        raise ParityError(f"n={n}: Delta_n has zero order {pair.order} at t=1; parity rule expects "
                          f"{expected}{pipeline.input_note(pair.bits)}")
    if order < 0:
        raise PoleError(f"pole of order {-order} at t = {point}{pipeline.input_note(pair.bits)}")
    if order > 0:
        raise ZeroDivisionError(f"value vanishes to order {order} at t = {point}{pipeline.input_note(pair.bits)}")
    with working_precision(pair.bits):
        return CorrectedValue(abs(value), log_magnitude(value), order, pair.bits, to_complex(value))


@dataclass
class SeriesConfig:
    n_max: int = 20
    n_min: int = 2
    parity: str = "both"
    point: complex = 1
    signs: list[SignAssignment] | None = None
    mode: str = "ratio"
    precision: str | int | None = None
    tol: float = DEFLATION_TOL
    accel: bool = False
    exploratory: bool = False
    ns: list[int] | None = None
    rep_index: int = 0
    enforce_parity: bool | None = None

    def __post_init__(self):
        if self.mode == "tilde":
            self.mode = "plain"
        if self.mode not in ("ratio", "plain"):
            raise ValueError(f"mode must be 'ratio' or 'plain', got {self.mode!r}")
        if self.parity not in ("even", "odd", "both"):
            raise ValueError(f"parity must be even, odd or both, got {self.parity!r}")
        if self.ns is None and self.n_max < 4:
            raise ValueError("n_max must be at least 4")
        if not is_unimodular(self.point):
            raise ValueError(f"evaluation point {self.point} is not on the unit circle")
        if not self.is_standard_point and not self.exploratory:
            raise ValueError("points other than t = 1 and t = -1 need exploratory=True")

    @property
    def is_standard_point(self) -> bool:
        z = complex(self.point)
        return abs(z - 1) < 1e-12 or abs(z + 1) < 1e-12

    def dimensions(self) -> list[int]:
        if self.ns is not None:
            ns = sorted(set(self.ns))
        else:
            ns = list(range(max(self.n_min, 2), self.n_max + 1))
        if self.parity == "even":
            ns = [n for n in ns if n % 2 == 0]
        elif self.parity == "odd":
            ns = [n for n in ns if n % 2 == 1]
        return ns


@dataclass
class VolumeEstimate:
    n: int
    signs: str
    mode: str
    point: complex
    modulus_log: float = math.nan
    estimator: float = math.nan
    zero_order: int | None = None
    runtime_ms: float = 0.0
    status: str = "ok"
    bits: int | None = None
    aitken: float | None = None

    @property
    def parity(self) -> str:
        return "even" if self.n % 2 == 0 else "odd"

    @property
    def ok(self) -> bool:
        return self.status == "ok"


CSV_COLUMNS = ["n", "parity", "sign", "mode", "point", "modulus_log", "estimator",
               "zero_order", "runtime_ms", "status"]


def format_point(z: complex) -> str:
    z = complex(z)
    if abs(z.imag) < 1e-15:
        return repr(float(z.real)).rstrip("0").rstrip(".") if z.real != int(z.real) else str(int(z.real))
    return f"{z.real!r}{z.imag:+.17g}j"


@dataclass
class EstimateTable:
    rows: list[VolumeEstimate]
    metadata: dict = field(default_factory=dict)

    def row(self, n: int, signs: str | None = None) -> VolumeEstimate:
        for r in self.rows:
            if r.n == n and (signs is None or r.signs == signs):
                return r
        raise KeyError(f"no row for n={n} signs={signs}")

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = CSV_COLUMNS + (["aitken_extrapolated_not_reference"] if self.metadata.get("accel") else [])
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in self.rows:
            line = [r.n, r.parity, r.signs, r.mode, format_point(r.point),
                    repr(r.modulus_log), repr(r.estimator),
                    "" if r.zero_order is None else r.zero_order,
                    f"{r.runtime_ms:.1f}", r.status]
            if self.metadata.get("accel"):
                line.append("" if r.aitken is None else repr(r.aitken))
            w.writerow(line)
        return buf.getvalue()

    def render(self) -> str:
        lines = []
        meta = self.metadata
        head = f"{meta.get('example', '?')}  mode={meta.get('mode')}  t={format_point(meta.get('point', 1))}"
        if meta.get("branch"):
            head += f"  [{meta['branch']}]"
        lines.append(head)
        if meta.get("banner"):
            lines.append(meta["banner"])
        hdr = f"{'n':>4}  {'sign':>5}  {'4pi log|.|/n^2':>16}  {'order':>5}  {'bits':>6}  {'ms':>9}  status"
        if meta.get("accel"):
            hdr += "   aitken (extrapolated, not reference data)"
        lines.append(hdr)
        for r in self.rows:
            est = f"{truncate(r.estimator):.5f}..." if r.ok else "-"
            s = (f"{r.n:>4}  {r.signs:>5}  {est:>16}  "
                 f"{'' if r.zero_order is None else r.zero_order:>5}  {r.bits or '':>6}  "
                 f"{r.runtime_ms:>9.1f}  {r.status}")
            if meta.get("accel") and r.aitken is not None:
                s += f"   {r.aitken:.5f}"
            lines.append(s)
        return "\n".join(lines)


def truncate(x: float, places: int = 5) -> float:
    """Drop digits after ``places`` decimals (tables print truncated digits followed by '...')."""
    scale = 10 ** places
    return math.trunc(x * scale + math.copysign(1e-7, x)) / scale


def aitken(values: Sequence[float]) -> list[float | None]:
    """Aitken delta-squared transform; entry i uses values i-2, i-1, i."""
    out: list[float | None] = [None] * len(values)
    for i in range(2, len(values)):
        x0, x1, x2 = values[i - 2], values[i - 1], values[i]
        denom = x2 - 2 * x1 + x0
        if denom != 0 and all(map(math.isfinite, (x0, x1, x2))):
            out[i] = x2 - (x2 - x1) ** 2 / denom
    return out


def run_series(config: SeriesConfig, data: LinkData, pipeline: Pipeline | None = None) -> EstimateTable:
    """Estimator rows for every requested n and sign; row failures are recorded, not raised."""
    pipeline = pipeline or Pipeline(data, config.rep_index, config.precision, config.tol)
    b = data.presentation.component_count
    signs_list = config.signs or [SignAssignment.all_plus(b)]
    at_one = abs(complex(config.point) - 1) < 1e-12
    enforce = at_one if config.enforce_parity is None else config.enforce_parity
    rows = []
    for signs in signs_list:
        for n in config.dimensions():
            row = VolumeEstimate(n, str(signs), config.mode, complex(config.point))
            t0 = time.perf_counter()
            try:
                if config.mode == "ratio":
                    cv = corrected_ratio(pipeline, n, signs, config.point)
                else:
                    cv = tilde_value(pipeline, n, signs, config.point, enforce)
                row.modulus_log = cv.log_modulus
                row.estimator = estimator_from_log(n, cv.log_modulus)
                row.zero_order = cv.zero_order
                row.bits = cv.bits
            except (ArithmeticError, ValueError) as exc:
                row.status = f"error: {type(exc).__name__}: {exc}"
                log.warning("n=%d signs=%s: %s", n, signs, exc)
            row.runtime_ms = (time.perf_counter() - t0) * 1000
            rows.append(row)
    if config.accel:
        for signs in signs_list:
            for parity in (0, 1):
                group = [r for r in rows if r.signs == str(signs) and r.n % 2 == parity and r.ok]
                for r, a in zip(group, aitken([r.estimator for r in group])):
                    r.aitken = a
    meta = {"example": data.name, "mode": config.mode, "point": complex(config.point),
            "branch": pipeline.rho2.branch, "accel": config.accel,
            "signs": [str(s) for s in signs_list]}
    if not config.is_standard_point:
        meta["banner"] = CONJECTURAL_BANNER
    return EstimateTable(rows, meta)


def minus_one_series(config: SeriesConfig, data: LinkData, pipeline: Pipeline | None = None) -> EstimateTable:
    """:func:`run_series` at t = -1; the t = 1 parity rule is not enforced."""
    cfg = SeriesConfig(**{**config.__dict__, "point": -1, "enforce_parity": False})
    return run_series(cfg, data, pipeline)


def root_of_unity(k: int, m: int) -> complex:
    return cmath.exp(2j * math.pi * k / m)
