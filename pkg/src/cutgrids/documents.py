"""Exact JSON document format for bordisms, families, and finite
categorical fixtures.

Rationals travel as strings ("p/q", or "p" when integral), infinities
as "+inf"/"-inf", crossing signs as "+"/"-", labels and shapes as
integer arrays.  Serialization is deterministic — equal values produce
byte-identical text — and parsing is exact: no value is ever rounded.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Union

from .bordisms import (
    Bordism,
    BordismFamily,
    FamComponentCut1D,
    FamCut1D,
    FieldDatum,
    validate,
    validate_family,
)
from .errors import (
    DocumentSyntaxError,
    DocumentValidationError,
    ValidationError,
)
from .finitecat import FinCategory, TruncSSet
from .grids import (
    AffineMap,
    ComponentCut1D,
    ComponentCut2D,
    Cut1D,
    Cut2D,
    CutGrid,
    CutTuple,
    MonoidalCutGrid,
    Sheet,
)
from .plgeom import INF, NEG_INF, Ambient1D, Ambient2D, PLFunc, is_finite
from .reporting import ReportEntry, ValidationReport

FORMAT_NAME = "cutgrids-document"
FORMAT_VERSION = 1

Payload = Union[Bordism, BordismFamily, FinCategory, TruncSSet]


# ---------------------------------------------------------------------------
# scalar encoding
# ---------------------------------------------------------------------------


def rational_to_text(x) -> str:
    if not is_finite(x):
        return "+inf" if x > 0 else "-inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rational_from_text(s, where: str = "rational"):
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise DocumentSyntaxError(f"{where}: expected a rational string, got {s!r}")
    if s == "+inf":
        return INF
    if s == "-inf":
        return NEG_INF
    parts = s.split("/")
    try:
        if len(parts) == 1:
            return Fraction(int(parts[0]))
        if len(parts) == 2:
            num, den = int(parts[0]), int(parts[1])
            if den == 0:
                raise DocumentSyntaxError(f"{where}: zero denominator in {s!r}")
            return Fraction(num, den)
    except ValueError:
        pass
    raise DocumentSyntaxError(f"{where}: malformed rational {s!r}")


def _sign_from_text(s, where: str) -> str:
    if s not in ("+", "-"):
        raise DocumentSyntaxError(f"{where}: expected '+' or '-', got {s!r}")
    return s


def _plf_to_json(f: PLFunc) -> dict:
    return {
        "breakpoints": [rational_to_text(b) for b in f.breakpoints],
        "values": [rational_to_text(v) for v in f.values],
        "left_slope": rational_to_text(f.left_slope),
        "right_slope": rational_to_text(f.right_slope),
    }


def _plf_from_json(obj, where: str) -> PLFunc:
    if not isinstance(obj, dict):
        raise DocumentSyntaxError(f"{where}: expected a PL-function object")
    return PLFunc(
        tuple(rational_from_text(b, where) for b in obj.get("breakpoints", ())),
        tuple(rational_from_text(v, where) for v in obj.get("values", ())),
        rational_from_text(obj.get("left_slope", "0"), where),
        rational_from_text(obj.get("right_slope", "0"), where),
    )


def _val_to_json(v):
    """Objects/arrows/simplices of finite fixtures: strings, ints, or
    nested tuples thereof."""
    if isinstance(v, tuple):
        return [_val_to_json(x) for x in v]
    if isinstance(v, (str, int)):
        return v
    raise DocumentSyntaxError(f"value {v!r} has no document encoding")


def _val_from_json(v):
    if isinstance(v, list):
        return tuple(_val_from_json(x) for x in v)
    if isinstance(v, (str, int)):
        return v
    raise DocumentSyntaxError(f"unexpected value {v!r} in a finite fixture")


def _val_key(v) -> str:
    return json.dumps(_val_to_json(v), sort_keys=True)


# ---------------------------------------------------------------------------
# bordism payloads
# ---------------------------------------------------------------------------


def _comp1d_to_json(c: ComponentCut1D) -> dict:
    if c.kind == "zeros":
        return {"kind": "zeros",
                "zeros": [[rational_to_text(p), s] for p, s in c.zeros]}
    return {"kind": "whole", "side": c.whole_sign}


def _comp1d_from_json(obj, where: str) -> ComponentCut1D:
    kind = obj.get("kind")
    if kind == "zeros":
        zeros = tuple(
            (rational_from_text(p, where), _sign_from_text(s, where))
            for p, s in obj.get("zeros", []))
        return ComponentCut1D("zeros", zeros)
    if kind == "whole":
        side = obj.get("side", "below")
        if side not in ("below", "above"):
            raise DocumentSyntaxError(f"{where}: bad side {side!r}")
        return ComponentCut1D("whole", (), side)
    raise DocumentSyntaxError(f"{where}: unknown component kind {kind!r}")


def _comp2d_to_json(c: ComponentCut2D) -> dict:
    if c.kind == "sheets":
        return {"kind": "sheets",
                "sheets": [{"graph": _plf_to_json(s.graph), "sign": s.sign}
                           for s in c.sheets]}
    return {"kind": "whole", "side": c.whole_sign}


def _comp2d_from_json(obj, where: str) -> ComponentCut2D:
    kind = obj.get("kind")
    if kind == "sheets":
        sheets = tuple(
            Sheet(_plf_from_json(s.get("graph"), where),
                  _sign_from_text(s.get("sign"), where))
            for s in obj.get("sheets", []))
        return ComponentCut2D("sheets", sheets)
    if kind == "whole":
        side = obj.get("side", "below")
        if side not in ("below", "above"):
            raise DocumentSyntaxError(f"{where}: bad side {side!r}")
        return ComponentCut2D("whole", (), side)
    raise DocumentSyntaxError(f"{where}: unknown component kind {kind!r}")


def _cut_to_json(cut) -> dict:
    if isinstance(cut, Cut1D):
        return {"components": [_comp1d_to_json(c) for c in cut.components]}
    return {"axis": cut.axis,
            "components": [_comp2d_to_json(c) for c in cut.components]}


def _cut_from_json(obj, dim: int, where: str):
    comps = obj.get("components")
    if not isinstance(comps, list):
        raise DocumentSyntaxError(f"{where}: cut needs a component list")
    if dim == 1:
        return Cut1D(tuple(_comp1d_from_json(c, where) for c in comps))
    axis = obj.get("axis")
    if axis not in (1, 2):
        raise DocumentSyntaxError(f"{where}: 2D cut needs axis 1 or 2")
    return Cut2D(axis, tuple(_comp2d_from_json(c, where) for c in comps))


def _field_to_json(f: FieldDatum) -> dict:
    if f.kind == "trivial":
        return {"kind": "trivial"}
    if f.kind == "metric":
        return {"kind": "metric",
                "densities": [_plf_to_json(w) for w in f.densities]}
    return {"kind": "embedded", "target_dim": f.target_dim}


def _field_from_json(obj, where: str) -> FieldDatum:
    kind = obj.get("kind")
    if kind == "trivial":
        return FieldDatum("trivial")
    if kind == "metric":
        return FieldDatum("metric", tuple(
            _plf_from_json(w, where) for w in obj.get("densities", [])))
    if kind == "embedded":
        td = obj.get("target_dim")
        if not isinstance(td, int):
            raise DocumentSyntaxError(f"{where}: embedded field needs target_dim")
        return FieldDatum("embedded", (), td)
    raise DocumentSyntaxError(f"{where}: unknown field kind {kind!r}")


def _affine_to_json(a: AffineMap) -> dict:
    return {"perm": list(a.perm),
            "coeffs": [rational_to_text(c) for c in a.coeffs],
            "shifts": [rational_to_text(s) for s in a.shifts]}


def _affine_from_json(obj, dim: int, where: str) -> AffineMap:
    return AffineMap(
        dim,
        tuple(obj.get("perm", ())),
        tuple(rational_from_text(c, where) for c in obj.get("coeffs", ())),
        tuple(rational_from_text(s, where) for s in obj.get("shifts", ())))


def _bordism_to_json(b: Bordism) -> dict:
    dim = 1 if isinstance(b.ambient, Ambient1D) else 2
    if dim == 1:
        ambient = {
            "intervals": [[rational_to_text(lo), rational_to_text(hi)]
                          for lo, hi in b.ambient.intervals],
            "circles": [rational_to_text(L) for L in b.ambient.circles]}
    else:
        ambient = {"boxes": [[rational_to_text(v) for v in box]
                             for box in b.ambient.boxes]}
    out = {
        "dimension": dim,
        "ambient": ambient,
        "grid": [[_cut_to_json(c) for c in t.cuts]
                 for t in b.mgrid.grid.tuples],
        "ell": b.mgrid.ell,
        "labels": list(b.mgrid.labels),
        "field": _field_to_json(b.field),
        "embedding": None if b.embedding is None else _affine_to_json(b.embedding),
        "uple": b.uple,
    }
    return out


def _bordism_from_json(obj, where: str = "bordism") -> Bordism:
    dim = obj.get("dimension")
    if dim not in (1, 2):
        raise DocumentSyntaxError(f"{where}: dimension must be 1 or 2")
    amb = obj.get("ambient", {})
    if dim == 1:
        ambient = Ambient1D(
            tuple((rational_from_text(lo, where), rational_from_text(hi, where))
                  for lo, hi in amb.get("intervals", [])),
            tuple(rational_from_text(L, where) for L in amb.get("circles", [])))
    else:
        ambient = Ambient2D(tuple(
            tuple(rational_from_text(v, where) for v in box)
            for box in amb.get("boxes", [])))
    grid = obj.get("grid")
    if not isinstance(grid, list) or not grid:
        raise DocumentSyntaxError(f"{where}: grid needs one tuple per direction")
    tuples = tuple(
        CutTuple(tuple(_cut_from_json(c, dim, where) for c in cuts))
        for cuts in grid)
    ell = obj.get("ell")
    labels = obj.get("labels")
    if not isinstance(ell, int) or not isinstance(labels, list):
        raise DocumentSyntaxError(f"{where}: need integer ell and a label array")
    mgrid = MonoidalCutGrid(CutGrid(tuples), ell, tuple(labels))
    field = _field_from_json(obj.get("field", {"kind": "trivial"}), where)
    emb_obj = obj.get("embedding")
    embedding = None if emb_obj is None else _affine_from_json(emb_obj, dim, where)
    return Bordism(ambient, mgrid, field, embedding, bool(obj.get("uple", False)))


# ---------------------------------------------------------------------------
# family payloads
# ---------------------------------------------------------------------------


def _end_to_json(v):
    if isinstance(v, PLFunc):
        return _plf_to_json(v)
    return rational_to_text(v)


def _end_from_json(v, where: str):
    if isinstance(v, dict):
        return _plf_from_json(v, where)
    return rational_from_text(v, where)


def _famcomp_to_json(c: FamComponentCut1D) -> dict:
    if c.kind == "zeros":
        return {"kind": "zeros",
                "zeros": [[_plf_to_json(z), s] for z, s in c.zeros]}
    return {"kind": "whole", "side": c.whole_sign}


def _famcomp_from_json(obj, where: str) -> FamComponentCut1D:
    kind = obj.get("kind")
    if kind == "zeros":
        zeros = tuple(
            (_plf_from_json(z, where), _sign_from_text(s, where))
            for z, s in obj.get("zeros", []))
        return FamComponentCut1D("zeros", zeros)
    if kind == "whole":
        side = obj.get("side", "below")
        if side not in ("below", "above"):
            raise DocumentSyntaxError(f"{where}: bad side {side!r}")
        return FamComponentCut1D("whole", (), side)
    raise DocumentSyntaxError(f"{where}: unknown component kind {kind!r}")


def _family_to_json(fam: BordismFamily) -> dict:
    return {
        "t0": rational_to_text(fam.t0),
        "t1": rational_to_text(fam.t1),
        "intervals": [[_end_to_json(lo), _end_to_json(hi)]
                      for lo, hi in fam.intervals],
        "circles": [rational_to_text(L) for L in fam.circles],
        "tuples": [[{"components": [_famcomp_to_json(c) for c in cut.components]}
                    for cut in tup]
                   for tup in fam.tuples],
        "ell": fam.ell,
        "labels": list(fam.labels),
        "field_kind": fam.field_kind,
        "target_dim": fam.target_dim,
        "emb_scale": rational_to_text(fam.emb_scale),
        "emb_shift": None if fam.emb_shift is None else _plf_to_json(fam.emb_shift),
        "densities": [_plf_to_json(w) for w in fam.densities],
        "uple": fam.uple,
    }


def _family_from_json(obj, where: str = "family") -> BordismFamily:
    tuples = []
    for tup in obj.get("tuples", []):
        cuts = []
        for cut in tup:
            comps = cut.get("components")
            if not isinstance(comps, list):
                raise DocumentSyntaxError(f"{where}: cut needs a component list")
            cuts.append(FamCut1D(tuple(
                _famcomp_from_json(c, where) for c in comps)))
        tuples.append(tuple(cuts))
    ell = obj.get("ell")
    labels = obj.get("labels")
    if not isinstance(ell, int) or not isinstance(labels, list):
        raise DocumentSyntaxError(f"{where}: need integer ell and a label array")
    shift_obj = obj.get("emb_shift")
    return BordismFamily(
        t0=rational_from_text(obj.get("t0", "0"), where),
        t1=rational_from_text(obj.get("t1", "1"), where),
        intervals=tuple(
            (_end_from_json(lo, where), _end_from_json(hi, where))
            for lo, hi in obj.get("intervals", [])),
        circles=tuple(rational_from_text(L, where)
                      for L in obj.get("circles", [])),
        tuples=tuple(tuples),
        ell=ell,
        labels=tuple(labels),
        field_kind=obj.get("field_kind", "embedded"),
        target_dim=obj.get("target_dim", 1),
        emb_scale=rational_from_text(obj.get("emb_scale", "1"), where),
        emb_shift=None if shift_obj is None else _plf_from_json(shift_obj, where),
        densities=tuple(_plf_from_json(w, where)
                        for w in obj.get("densities", [])),
        uple=bool(obj.get("uple", False)))


# ---------------------------------------------------------------------------
# finite fixtures
# ---------------------------------------------------------------------------


def _fincat_to_json(c: FinCategory) -> dict:
    return {
        "objects": [_val_to_json(x) for x in c.objects],
        "arrows": sorted(
            ([_val_to_json(f), _val_to_json(s), _val_to_json(t)]
             for f, (s, t) in c.arrows.items()),
            key=json.dumps),
        "identity": sorted(
            ([_val_to_json(x), _val_to_json(f)]
             for x, f in c.identity.items()),
            key=json.dumps),
        "then": sorted(
            ([_val_to_json(f), _val_to_json(g), _val_to_json(h)]
             for (f, g), h in c.then_table.items()),
            key=json.dumps),
    }


def _fincat_from_json(obj, where: str = "finite-category") -> FinCategory:
    try:
        return FinCategory(
            tuple(_val_from_json(x) for x in obj.get("objects", [])),
            {_val_from_json(f): (_val_from_json(s), _val_from_json(t))
             for f, s, t in obj.get("arrows", [])},
            {_val_from_json(x): _val_from_json(f)
             for x, f in obj.get("identity", [])},
            {(_val_from_json(f), _val_from_json(g)): _val_from_json(h)
             for f, g, h in obj.get("then", [])})
    except ValueError as exc:
        raise DocumentValidationError(
            f"{where}: {exc}",
            ValidationReport((ReportEntry("well-formed", False, str(exc)),)))


def _sset_to_json(x: TruncSSet) -> dict:
    return {
        "level": x.level,
        "simplices": [sorted((_val_to_json(v) for v in level), key=json.dumps)
                      for level in x.simplices],
        "faces": sorted(
            ([k, i, sorted(([_val_to_json(a), _val_to_json(b)]
                            for a, b in m.items()), key=json.dumps)]
             for (k, i), m in x.faces.items()),
            key=json.dumps),
        "degeneracies": sorted(
            ([k, i, sorted(([_val_to_json(a), _val_to_json(b)]
                            for a, b in m.items()), key=json.dumps)]
             for (k, i), m in x.degeneracies.items()),
            key=json.dumps),
    }


def _sset_from_json(obj, where: str = "presheaf") -> TruncSSet:
    level = obj.get("level")
    if not isinstance(level, int) or level < 0:
        raise DocumentSyntaxError(f"{where}: level must be a natural number")
    try:
        return TruncSSet(
            level,
            tuple(frozenset(_val_from_json(v) for v in lv)
                  for lv in obj.get("simplices", [])),
            {(k, i): {_val_from_json(a): _val_from_json(b) for a, b in m}
             for k, i, m in obj.get("faces", [])},
            {(k, i): {_val_from_json(a): _val_from_json(b) for a, b in m}
             for k, i, m in obj.get("degeneracies", [])})
    except ValueError as exc:
        raise DocumentValidationError(
            f"{where}: {exc}",
            ValidationReport((ReportEntry("well-formed", False, str(exc)),)))


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Document:
    kind: str
    payload: Payload
    name: Optional[str] = None
    version: int = FORMAT_VERSION


def document_for(payload: Payload, name: Optional[str] = None) -> Document:
    if isinstance(payload, Bordism):
        kind = "bordism"
    elif isinstance(payload, BordismFamily):
        kind = "family"
    elif isinstance(payload, FinCategory):
        kind = "finite-category"
    elif isinstance(payload, TruncSSet):
        kind = "presheaf"
    else:
        raise DocumentSyntaxError(
            f"no document kind for payload of type {type(payload).__name__}")
    return Document(kind, payload, name)


def payload_report(doc: Document) -> ValidationReport:
    """The payload's own validation report (finite fixtures validate in
    their constructors, so a parsed one is already well-formed)."""
    if isinstance(doc.payload, Bordism):
        return validate(doc.payload)
    if isinstance(doc.payload, BordismFamily):
        return validate_family(doc.payload)
    return ValidationReport((ReportEntry("well-formed", True),))


def serialize_document(doc: Document) -> str:
    if isinstance(doc.payload, Bordism):
        payload: Any = _bordism_to_json(doc.payload)
    elif isinstance(doc.payload, BordismFamily):
        payload = _family_to_json(doc.payload)
    elif isinstance(doc.payload, FinCategory):
        payload = _fincat_to_json(doc.payload)
    elif isinstance(doc.payload, TruncSSet):
        payload = _sset_to_json(doc.payload)
    else:
        raise DocumentSyntaxError(
            f"cannot serialize payload of type {type(doc.payload).__name__}")
    out = {"format": FORMAT_NAME, "version": doc.version, "kind": doc.kind}
    if doc.name is not None:
        out["name"] = doc.name
    out["payload"] = payload
    return json.dumps(out, indent=2) + "\n"


_PARSERS = {
    "bordism": _bordism_from_json,
    "family": _family_from_json,
    "finite-category": _fincat_from_json,
    "presheaf": _sset_from_json,
}


def parse_document(text: str, check: bool = True) -> Document:
    """Parse and (by default) semantically validate a document.

    Raises DocumentSyntaxError (with line/column for JSON errors) on
    malformed input and DocumentValidationError, carrying the full
    report, when the payload is well-formed JSON but invalid data.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, exc.lineno, exc.colno)
    if not isinstance(obj, dict):
        raise DocumentSyntaxError("document must be a JSON object")
    if obj.get("format") != FORMAT_NAME:
        raise DocumentSyntaxError(
            f"not a {FORMAT_NAME} file (format = {obj.get('format')!r})")
    version = obj.get("version")
    if version != FORMAT_VERSION:
        raise DocumentSyntaxError(f"unrecognized version {version!r}")
    kind = obj.get("kind")
    parser = _PARSERS.get(kind)
    if parser is None:
        raise DocumentSyntaxError(f"unknown document kind {kind!r}")
    payload_obj = obj.get("payload")
    if not isinstance(payload_obj, dict):
        raise DocumentSyntaxError("missing payload object")
    try:
        payload = parser(payload_obj)
    except (DocumentSyntaxError, DocumentValidationError):
        raise
    except (ValidationError, ValueError, TypeError, KeyError) as exc:
        raise DocumentSyntaxError(f"malformed {kind} payload: {exc}")
    name = obj.get("name")
    if name is not None and not isinstance(name, str):
        raise DocumentSyntaxError("name must be a string")
    doc = Document(kind, payload, name, version)
    if check:
        report = payload_report(doc)
        if not report.passed:
            first = report.failures()[0]
            raise DocumentValidationError(
                f"{kind} payload failed validation: {first}", report)
    return doc
