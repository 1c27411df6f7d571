"""Built-in example data: the figure-eight knot and the Whitehead link.

Holonomy entries are quadratic irrationals; they are generated here as
decimal strings with ``digits`` significant digits so that computations at
high working precision see exact-enough input.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from flint import acb, arb

from .laurent import decimal_string, to_acb, to_complex, working_precision
from .reps import Entry, SignAssignment, Sl2Rep, whitehead_gamma_candidates
from .words import AlphaMap, Presentation, parse_presentation

FIXTURE_DIGITS = 1100

FIGURE8_VOLUME = 2.029883212819307
WHITEHEAD_VOLUME = 3.663862376708876


@dataclass
class LinkData:
    """Everything needed to run the pipeline on one link group."""

    name: str
    presentation: Presentation
    representations: list[Sl2Rep]
    alpha: AlphaMap
    signs: list[SignAssignment] = field(default_factory=list)
    source: dict = field(default_factory=dict)
    volume: float | None = None

    @property
    def rho2(self) -> Sl2Rep:
        return self.representations[0]


def _entry(z: acb, digits: int) -> Entry:
    return (decimal_string(z.real, digits), decimal_string(z.imag, digits))


def _rep(names, mats, branch, digits) -> Sl2Rep:
    entries = []
    for m in mats:
        entries.append(tuple(_entry(acb(x) if not isinstance(x, acb) else x, digits)
                             for x in m))
    return Sl2Rep(tuple(names), tuple(entries), branch)


FIGURE8_PRESENTATION = {
    "generators": [{"name": "a", "component": 0}, {"name": "b", "component": 0}],
    "relators": ["a b^-1 a^-1 b a = b a b^-1 a^-1 b"],
}

WHITEHEAD_PRESENTATION = {
    "generators": [{"name": "a", "component": 0}, {"name": "b", "component": 1}],
    "definitions": {"w": "b a b^-1 a^-1 b^-1 a b"},
    "relators": ["a w a^-1 w^-1"],
}


def figure8(digits: int = FIXTURE_DIGITS) -> LinkData:
    """Figure-eight knot; holonomy a -> [[1,1],[0,1]], b -> [[1,0],[-u,1]], u^2+u+1=0."""
    p = parse_presentation(FIGURE8_PRESENTATION)
    reps = []
    with working_precision(int(digits * 3.33) + 64):
        s3 = arb(3).sqrt()
        for sgn, label in ((1, "+"), (-1, "-")):
            u = acb(-1, sgn * s3) / 2
            reps.append(_rep(("a", "b"), [(1, 1, 0, 1), (1, 0, -u, 1)],
                             f"u = (-1{label}sqrt(-3))/2", digits))
    return LinkData("figure8", p, reps, AlphaMap((1,)),
                    [SignAssignment((1,)), SignAssignment((-1,))],
                    volume=FIGURE8_VOLUME)


def figure8_deformation(m, root: int = 0, digits: int = 60) -> Sl2Rep:
    """Non-parabolic figure-eight representation with meridian eigenvalue ``m``.

    a -> [[m, 1], [0, 1/m]], b -> [[m, 0], [-u, 1/m]] where ``u`` solves
    u^2 + (3 - m^2 - m^-2)(u + 1) = 0; ``m = 1`` recovers the holonomy.
    """
    with working_precision(int(digits * 3.33) + 64):
        m = to_acb(m)
        k = 3 - m * m - 1 / (m * m)
        # square root of the midpoint: a ball straddling the branch cut (m near 1)
        # would otherwise return a wide ball centred off both roots
        disc = (k * k - 4 * k).mid().sqrt()
        u = (-k + disc) / 2 if root == 0 else (-k - disc) / 2
        return _rep(("a", "b"), [(m, 1, 0, 1 / m), (m, 0, -u, 1 / m)],
                    f"deformation m={to_complex(m):.6g}", digits)


def whitehead(digits: int = FIXTURE_DIGITS) -> LinkData:
    """Whitehead link; a -> [[1,1],[0,1]], b -> [[1,0],[gamma,1]], gamma = -1 +- i."""
    p = parse_presentation(WHITEHEAD_PRESENTATION)
    reps = []
    with working_precision(int(digits * 3.33) + 64):
        for gamma in whitehead_gamma_candidates():
            label = "+" if gamma.imag.mid() > 0 else "-"
            reps.append(_rep(("a", "b"), [(1, 1, 0, 1), (1, 0, gamma, 1)],
                             f"gamma = -1{label}i", digits))
    return LinkData("whitehead", p, reps, AlphaMap((1, 1)),
                    SignAssignment.enumerate(2), volume=WHITEHEAD_VOLUME)


EXAMPLES = {"figure8": figure8, "whitehead": whitehead}


def load_example(name: str, digits: int = FIXTURE_DIGITS) -> LinkData:
    try:
        return EXAMPLES[name](digits)
    except KeyError:
        raise KeyError(f"unknown example {name!r}; available: {', '.join(EXAMPLES)}") from None
