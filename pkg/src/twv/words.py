"""Free-group words, link-group presentations, abelianization and Fox calculus.

Words are stored as tuples of ``(generator_index, sign)`` letters and are
always freely reduced.  The grammar accepted by :func:`parse_word` is a
whitespace separated list of tokens, each one of

* ``name``        a generator (or a named abbreviation),
* ``name^k``      an integer power, ``k`` may be negative,
* ``X``           an upper-case single letter standing for ``x^-1`` when
                  ``x`` is a declared generator and ``X`` is not.

A relator may be written as an equation ``lhs = rhs``; it is stored as
``lhs * rhs^-1``.
"""
from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Mapping, Sequence

log = logging.getLogger(__name__)

Letter = tuple[int, int]

_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(.*))?$")


class PresentationError(ValueError):
    """Raised for malformed words or presentations."""


@dataclass(frozen=True)
class Generator:
    name: str
    component: int = 0


def _reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for g, s in letters:
        if out and out[-1][0] == g and out[-1][1] == -s:
            out.pop()
        else:
            out.append((g, s))
    return tuple(out)


@dataclass(frozen=True, order=True)
class Word:
    """A freely reduced word in a free group."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        for g, s in self.letters:
            if s not in (1, -1) or g < 0:
                raise PresentationError(f"bad letter {(g, s)!r}")
        object.__setattr__(self, "letters", _reduce(self.letters))

    @classmethod
    def identity(cls) -> "Word":
        return cls(())

    @classmethod
    def gen(cls, index: int, power: int = 1) -> "Word":
        s = 1 if power > 0 else -1
        return cls(((index, s),) * abs(power))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def inverse(self) -> "Word":
        return Word(tuple((g, -s) for g, s in reversed(self.letters)))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def format(self, names: Sequence[str]) -> str:
        if not self.letters:
            return "1"
        return " ".join(names[g] if s == 1 else f"{names[g]}^-1" for g, s in self.letters)


def free_reduce(w: Word) -> Word:
    # Word instances are reduced on construction; kept as an explicit operation
    return Word(_reduce(w.letters))


class GroupRingElement:
    """Finite integer combination of free-group words, an element of Z[F]."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, int] | None = None):
        clean: dict[Word, int] = {}
        for w, c in (terms or {}).items():
            c = int(c)
            if c:
                clean[w] = clean.get(w, 0) + c
                if clean[w] == 0:
                    del clean[w]
        self.terms = clean

    @classmethod
    def from_word(cls, w: Word, coeff: int = 1) -> "GroupRingElement":
        return cls({w: coeff})

    @classmethod
    def one(cls) -> "GroupRingElement":
        return cls({Word(): 1})

    @classmethod
    def zero(cls) -> "GroupRingElement":
        return cls()

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return GroupRingElement(out)

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def __mul__(self, other) -> "GroupRingElement":
        if isinstance(other, int):
            return GroupRingElement({w: c * other for w, c in self.terms.items()})
        if isinstance(other, Word):
            other = GroupRingElement.from_word(other)
        out: dict[Word, int] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 * w2
                out[w] = out.get(w, 0) + c1 * c2
        return GroupRingElement(out)

    def __rmul__(self, other) -> "GroupRingElement":
        if isinstance(other, int):
            return self * other
        if isinstance(other, Word):
            return GroupRingElement.from_word(other) * self
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return self.terms.items()

    def __repr__(self):
        if not self.terms:
            return "GroupRingElement(0)"
        parts = [f"{c:+d}*{list(w.letters)}" for w, c in sorted(self.terms.items())]
        return "GroupRingElement(" + " ".join(parts) + ")"

    def format(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
            body = w.format(names)
            if body == "1":
                parts.append(f"{c:+d}")
            elif c == 1:
                parts.append(f"+{body}")
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c:+d}*{body}")
        s = " ".join(parts)
        return s[1:] if s.startswith("+") else s


@dataclass(frozen=True)
class Presentation:
    """Finite group presentation whose generators carry link-component labels."""

    generators: tuple[Generator, ...]
    relators: tuple[Word, ...]
    component_count: int = field(default=0)

    def __post_init__(self):
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise PresentationError("generator names must be unique")
        comps = sorted({g.component for g in self.generators})
        if comps != list(range(len(comps))):
            raise PresentationError(f"component labels must be contiguous from 0, got {comps}")
        b = self.component_count or len(comps)
        if b != len(comps):
            raise PresentationError(f"component_count {b} disagrees with labels {comps}")
        object.__setattr__(self, "component_count", b)
        for r in self.relators:
            for g, _ in r:
                if g >= len(self.generators):
                    raise PresentationError(f"relator uses undeclared generator index {g}")

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    @property
    def deficiency(self) -> int:
        return len(self.generators) - len(self.relators)

    def index(self, name: str) -> int:
        for i, g in enumerate(self.generators):
            if g.name == name:
                return i
        raise PresentationError(f"unknown generator {name!r}")

    def generators_of_component(self, ell: int) -> list[int]:
        return [i for i, g in enumerate(self.generators) if g.component == ell]

    def word(self, text: str) -> Word:
        return parse_word(text, self.names)


@dataclass(frozen=True)
class AlphaMap:
    """Abelianization-type map pi_1 -> Z = <t>, meridian of component l -> t^a(l)."""

    exponents: tuple[int, ...]

    @classmethod
    def default(cls, p: Presentation) -> "AlphaMap":
        return cls((1,) * p.component_count)

    def generator_degrees(self, p: Presentation) -> list[int]:
        return [self.exponents[g.component] for g in p.generators]

    @property
    def gcd(self) -> int:
        return reduce(math.gcd, self.exponents, 0)


def _parse_power(text: str, token: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise PresentationError(f"malformed exponent in token {token!r}") from None


def parse_word(text: str, names: Sequence[str],
               definitions: Mapping[str, Word] | None = None) -> Word:
    """Parse a word in the token grammar described in the module docstring.

    ``definitions`` maps abbreviation names to already parsed words, which are
    substituted (and inverted for negative powers).
    """
    definitions = definitions or {}
    index = {n: i for i, n in enumerate(names)}
    letters: list[Letter] = []
    for token in text.split():
        if token == "1":
            continue
        m = _TOKEN.match(token)
        if not m:
            raise PresentationError(f"cannot parse token {token!r}")
        name, power = m.group(1), m.group(2)
        k = 1 if power is None else _parse_power(power, token)
        if name in definitions:
            letters.extend((definitions[name] ** k).letters)
        elif name in index:
            letters.extend(Word.gen(index[name], k).letters)
        elif len(name) == 1 and name.isupper() and name.lower() in index:
            letters.extend(Word.gen(index[name.lower()], -k).letters)
        else:
            raise PresentationError(f"unknown generator {name!r} in token {token!r}")
    return Word(tuple(letters))


def parse_relator(text: str, names: Sequence[str],
                  definitions: Mapping[str, Word] | None = None) -> Word:
    if text.count("=") > 1:
        raise PresentationError(f"relator {text!r} has more than one '='")
    if "=" in text:
        lhs, rhs = text.split("=")
        return parse_word(lhs, names, definitions) * parse_word(rhs, names, definitions).inverse()
    return parse_word(text, names, definitions)


def parse_presentation(data: Mapping) -> Presentation:
    """Build a :class:`Presentation` from a mapping.

    Expected keys: ``generators`` (list of names, or of ``{"name", "component"}``
    mappings), ``relators`` (list of word strings) and optionally
    ``definitions`` (abbreviation name -> word string, resolved in order).
    Relators that reduce to the identity are dropped with a warning.
    """
    gens = []
    for g in data["generators"]:
        if isinstance(g, str):
            gens.append(Generator(g, 0))
        else:
            gens.append(Generator(str(g["name"]), int(g.get("component", 0))))
    names = [g.name for g in gens]
    defs: dict[str, Word] = {}
    for key, text in dict(data.get("definitions", {})).items():
        if key in names:
            raise PresentationError(f"definition {key!r} shadows a generator")
        defs[key] = parse_word(text, names, defs)
    relators = []
    for text in data.get("relators", []):
        r = parse_relator(text, names, defs)
        if r.is_identity():
            log.warning("relator %r is trivial after free reduction; dropped", text)
            continue
        relators.append(r)
    return Presentation(tuple(gens), tuple(relators), int(data.get("component_count", 0)))


def fox_derivative(w: Word, x: int) -> GroupRingElement:
    """Free derivative dw/dx in Z[F] (x is a generator index)."""
    terms: dict[Word, int] = {}
    prefix: list[Letter] = []
    for g, s in w:
        if g == x:
            if s == 1:
                key, c = Word(tuple(prefix)), 1
            else:
                key, c = Word(tuple(prefix) + ((g, -1),)), -1
            terms[key] = terms.get(key, 0) + c
        prefix.append((g, s))
    return GroupRingElement(terms)


def fox_derivative_element(e: GroupRingElement, x: int) -> GroupRingElement:
    """Linear extension of :func:`fox_derivative` to the group ring."""
    out = GroupRingElement()
    for w, c in e.items():
        out = out + fox_derivative(w, x) * c
    return out


def augmentation(e: GroupRingElement) -> int:
    return sum(e.terms.values())


def alpha_degree(w: Word, alpha: AlphaMap, p: Presentation) -> int:
    degs = alpha.generator_degrees(p)
    return sum(s * degs[g] for g, s in w)


@dataclass
class ValidationReport:
    deficiency: int
    alpha_gcd: int
    relator_degrees: list[int]
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures


def validate_presentation(p: Presentation, alpha: AlphaMap) -> ValidationReport:
    failures = []
    if p.deficiency != 1:
        failures.append(f"deficiency is {p.deficiency}, the Wada construction needs 1")
    if len(alpha.exponents) != p.component_count:
        failures.append(f"alpha has {len(alpha.exponents)} exponents for "
                        f"{p.component_count} components")
        return ValidationReport(p.deficiency, alpha.gcd, [], failures)
    if any(a < 1 for a in alpha.exponents):
        failures.append(f"alpha exponents must be >= 1, got {list(alpha.exponents)}")
    g = alpha.gcd
    if g != 1:
        failures.append(f"alpha is not surjective onto Z: gcd of exponents is {g}")
    degrees = [alpha_degree(r, alpha, p) for r in p.relators]
    for i, d in enumerate(degrees):
        if d != 0:
            failures.append(f"relator {i} has alpha-degree {d} (must be 0)")
    return ValidationReport(p.deficiency, g, degrees, failures)
