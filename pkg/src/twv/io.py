"""The ``.twv`` input document: a JSON file describing one link group.

Layout::

    {
      "format": "twv/1",
      "name": "figure8",
      "presentation": {"generators": [...], "definitions": {...}, "relators": [...]},
      "alpha": [1],
      "representations": [
        {"branch": "...", "matrices": {"a": [[["1", "0"], ["1", "0"]],
                                             [["0", "0"], ["1", "0"]]], ...}}
      ],
      "signs": ["+", "-"],
      "config": {}
    }

Complex entries are ``[re, im]`` pairs of decimal strings so that no digits
are lost to binary64.  :func:`emit_document` is deterministic, hence
emit -> parse -> emit is byte-identical.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .fixtures import LinkData, load_example
from .reps import SignAssignment, Sl2Rep
from .words import AlphaMap, Presentation, PresentationError, parse_presentation

FORMAT_TAG = "twv/1"


class SchemaError(ValueError):
    """The document does not follow the ``.twv`` layout."""


@dataclass
class InputDocument:
    name: str
    presentation_source: dict
    alpha: list[int]
    representations: list[Sl2Rep]
    signs: list[str] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @property
    def presentation(self) -> Presentation:
        return parse_presentation(self.presentation_source)

    def to_link(self) -> LinkData:
        p = self.presentation
        alpha = AlphaMap(tuple(self.alpha))
        signs = [SignAssignment.parse(s) for s in self.signs] or [SignAssignment.all_plus(p.component_count)]
        return LinkData(self.name, p, self.representations, alpha, signs,
                        source={"document": self.name})

    @classmethod
    def from_link(cls, data: LinkData, source: Mapping) -> "InputDocument":
        return cls(data.name, dict(source), list(data.alpha.exponents), list(data.representations),
                   [str(s) for s in data.signs])


def _require(obj: Mapping, key: str, kind: type, where: str):
    if key not in obj:
        raise SchemaError(f"{where}: missing key {key!r}")
    value = obj[key]
    if not isinstance(value, kind):
        raise SchemaError(f"{where}.{key}: expected {kind.__name__}, got {type(value).__name__}")
    return value


def _parse_entry(x: Any, where: str) -> tuple[str, str]:
    if not (isinstance(x, list) and len(x) == 2 and all(isinstance(s, str) for s in x)):
        raise SchemaError(f"{where}: complex entries must be [re, im] decimal strings")
    for s in x:
        try:
            float(s)
        except ValueError:
            raise SchemaError(f"{where}: {s!r} is not a decimal number") from None
    return (x[0], x[1])


def _parse_rep(obj: Any, i: int) -> Sl2Rep:
    where = f"representations[{i}]"
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    mats = _require(obj, "matrices", dict, where)
    names, entries = [], []
    for name, m in mats.items():
        w = f"{where}.matrices.{name}"
        if not (isinstance(m, list) and len(m) == 2 and all(isinstance(r, list) and len(r) == 2 for r in m)):
            raise SchemaError(f"{w}: expected a 2x2 nested list")
        names.append(name)
        entries.append(tuple(_parse_entry(m[r][c], f"{w}[{r}][{c}]") for r in range(2) for c in range(2)))
    return Sl2Rep(tuple(names), tuple(entries), str(obj.get("branch", "")))


def parse_document(text: str) -> InputDocument:
    """Parse and validate a ``.twv`` document (raises :class:`SchemaError`)."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise SchemaError("top level must be an object")
    if raw.get("format", FORMAT_TAG) != FORMAT_TAG:
        raise SchemaError(f"unsupported format {raw.get('format')!r}")
    pres = _require(raw, "presentation", dict, "document")
    try:
        p = parse_presentation(pres)
    except (PresentationError, KeyError, TypeError) as exc:
        raise SchemaError(f"presentation: {exc}") from None
    alpha = raw.get("alpha", [1] * p.component_count)
    if not (isinstance(alpha, list) and all(isinstance(a, int) for a in alpha)):
        raise SchemaError("alpha: expected a list of integers")
    if len(alpha) != p.component_count:
        raise SchemaError(f"alpha has {len(alpha)} entries but the presentation has "
                          f"{p.component_count} components")
    reps = [_parse_rep(r, i) for i, r in enumerate(_require(raw, "representations", list, "document"))]
    if not reps:
        raise SchemaError("representations: at least one is required")
    for i, rep in enumerate(reps):
        missing = set(p.names) - set(rep.names)
        if missing:
            raise SchemaError(f"representations[{i}]: no matrix for {sorted(missing)}")
    signs = raw.get("signs", [])
    if not (isinstance(signs, list) and all(isinstance(s, str) for s in signs)):
        raise SchemaError("signs: expected a list of strings such as '+-'")
    for s in signs:
        try:
            eps = SignAssignment.parse(s)
        except ValueError as exc:
            raise SchemaError(f"signs: {exc}") from None
        if len(eps) != p.component_count:
            raise SchemaError(f"signs: {s!r} does not have {p.component_count} entries")
    config = raw.get("config", {})
    if not isinstance(config, dict):
        raise SchemaError("config: expected an object")
    return InputDocument(str(raw.get("name", "")), pres, alpha, reps, signs, config)


def document_dict(doc: InputDocument) -> dict:
    reps = []
    for rep in doc.representations:
        mats = {}
        for name, e in zip(rep.names, rep.entries):
            mats[name] = [[list(e[0]), list(e[1])], [list(e[2]), list(e[3])]]
        reps.append({"branch": rep.branch, "matrices": mats})
    return {
        "format": FORMAT_TAG,
        "name": doc.name,
        "presentation": doc.presentation_source,
        "alpha": list(doc.alpha),
        "representations": reps,
        "signs": list(doc.signs),
        "config": doc.config,
    }


def emit_document(doc: InputDocument) -> str:
    return json.dumps(document_dict(doc), indent=1, ensure_ascii=False) + "\n"


def load_document(path: str | Path) -> InputDocument:
    return parse_document(Path(path).read_text())


def example_document(name: str, digits: int | None = None) -> InputDocument:
    from . import fixtures
    data = load_example(name) if digits is None else load_example(name, digits)
    source = {"figure8": fixtures.FIGURE8_PRESENTATION,
              "whitehead": fixtures.WHITEHEAD_PRESENTATION}[name]
    return InputDocument.from_link(data, source)


def resolve_input(spec: str) -> LinkData:
    """An example name or the path of a ``.twv`` document."""
    from .fixtures import EXAMPLES
    if spec in EXAMPLES:
        return load_example(spec)
    path = Path(spec)
    if not path.exists():
        raise SchemaError(f"{spec!r} is neither a built-in example ({', '.join(EXAMPLES)}) nor a file")
    data = load_document(path).to_link()
    return data
