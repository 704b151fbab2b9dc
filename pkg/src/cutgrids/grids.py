"""Signed cut data on 1- and 2-dimensional ambients, and grids thereof.

A *cut* splits an ambient manifold into a below / level / above partition.
On a line or circle component the level set is a finite signed set of
points; on a plane component it is a finite stack of signed piecewise
linear graphs (sheets).  Signs record which side is "below" immediately
after crossing the level set, and must alternate along any path, so the
partition is determined by the signed level data alone.

A *cut tuple* is a nonempty ordered list of cuts in one direction; a
*grid* is one tuple per direction; a *monoidal grid* additionally labels
every ambient component with a positive integer (0 marks discarded
components).  The operations below — region extraction, ordering and
transversality checks, between-regions, cores, compactness, a positive
distance globularity test, reindexing, relabelling, and transport along
affine embeddings — are the engine behind the bordism layer.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Literal, Optional, Sequence, Union

from .errors import (
    ArgumentError,
    UnsupportedDimensionError,
    ValidationError,
)
from .plgeom import (
    INF,
    NEG_INF,
    Ambient1D,
    Ambient2D,
    PLFunc,
    PLRegion,
    Seg,
    Slab,
    circle_cells_from_predicate,
    fr,
    is_finite,
    line_cells_from_predicate,
    line_region,
    plfunc_equal,
    plfunc_max,
    plfunc_min,
    plfunc_order,
    region_boolean,
    region_bounded,
    region_closure,
    region_difference,
    region_is_compact_in,
    region_is_empty,
    region_normalize,
    region_sample_point,
    region_subset,
    ambient_region,
    component_region,
    strict_between_cells,
)
from .reporting import ReportEntry, ValidationReport
from .shapes import GammaMorphism, MonotoneMap, Multisimplex

Sign = Literal["+", "-"]
Side = Literal["below", "level", "above"]

_OPPOSITE: dict[str, str] = {"+": "-", "-": "+"}


def _check_sign(s: str) -> str:
    if s not in ("+", "-"):
        raise ArgumentError(f"sign must be '+' or '-', got {s!r}")
    return s


# ---------------------------------------------------------------------------
# cut data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComponentCut1D:
    """Signed level data of a cut on one line or circle component.

    ``kind == "zeros"``: ``zeros`` is the level set with crossing signs,
    strictly increasing positions (angles in ``[0, L)`` on a circle).
    ``kind == "whole"``: the level set misses the component and
    ``whole_sign`` says which side the component lies on.
    """

    kind: Literal["zeros", "whole"]
    zeros: tuple[tuple[Fraction, str], ...] = ()
    whole_sign: str = "below"

    def __post_init__(self) -> None:
        if self.kind not in ("zeros", "whole"):
            raise ArgumentError(f"bad component cut kind {self.kind!r}")
        zs = tuple((fr(p), _check_sign(s)) for p, s in self.zeros)
        object.__setattr__(self, "zeros", zs)
        if self.kind == "whole":
            if zs:
                raise ArgumentError("whole-component cut cannot carry zeros")
            if self.whole_sign not in ("below", "above"):
                raise ArgumentError(f"bad whole_sign {self.whole_sign!r}")
        elif not zs:
            raise ArgumentError("kind='zeros' requires at least one zero")


@dataclass(frozen=True)
class Cut1D:
    """A cut of a 1-dimensional ambient: one data record per component.

    Components are indexed as in the ambient: line intervals first (in
    ambient order), then circles.
    """

    components: tuple[ComponentCut1D, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))


@dataclass(frozen=True)
class Sheet:
    """One signed piecewise linear graph of a planar cut."""

    graph: PLFunc
    sign: str

    def __post_init__(self) -> None:
        _check_sign(self.sign)


@dataclass(frozen=True)
class ComponentCut2D:
    """Signed level data of a planar cut on one box component.

    Sheets are graphs over the coordinate axis perpendicular to the
    cut's axis, listed bottom to top; they must be pairwise disjoint
    over the component and their signs must alternate.
    """

    kind: Literal["sheets", "whole"]
    sheets: tuple[Sheet, ...] = ()
    whole_sign: str = "below"

    def __post_init__(self) -> None:
        if self.kind not in ("sheets", "whole"):
            raise ArgumentError(f"bad component cut kind {self.kind!r}")
        object.__setattr__(self, "sheets", tuple(self.sheets))
        if self.kind == "whole":
            if self.sheets:
                raise ArgumentError("whole-component cut cannot carry sheets")
            if self.whole_sign not in ("below", "above"):
                raise ArgumentError(f"bad whole_sign {self.whole_sign!r}")
        elif not self.sheets:
            raise ArgumentError("kind='sheets' requires at least one sheet")


@dataclass(frozen=True)
class Cut2D:
    """A cut of a 2-dimensional ambient.

    ``axis`` names the coordinate the cut stratifies: ``axis == 2``
    means sheets are graphs ``y = f(x)`` and "below" is smaller ``y``;
    ``axis == 1`` means sheets are graphs ``x = g(y)`` and "below" is
    smaller ``x``.  All cuts of one tuple share the axis.
    """

    axis: int
    components: tuple[ComponentCut2D, ...]

    def __post_init__(self) -> None:
        if self.axis not in (1, 2):
            raise ArgumentError(f"cut axis must be 1 or 2, got {self.axis}")
        object.__setattr__(self, "components", tuple(self.components))


Cut = Union[Cut1D, Cut2D]
Ambient = Union[Ambient1D, Ambient2D]


@dataclass(frozen=True)
class CutTuple:
    """Cuts ``C_0 <= ... <= C_m`` in a single direction."""

    cuts: tuple[Cut, ...]

    def __post_init__(self) -> None:
        cuts = tuple(self.cuts)
        if not cuts:
            raise ArgumentError("a cut tuple needs at least one cut")
        object.__setattr__(self, "cuts", cuts)

    @property
    def m(self) -> int:
        return len(self.cuts) - 1


@dataclass(frozen=True)
class CutGrid:
    """One cut tuple per direction ``1..d``."""

    tuples: tuple[CutTuple, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "tuples", tuple(self.tuples))

    @property
    def d(self) -> int:
        return len(self.tuples)

    @property
    def shape(self) -> Multisimplex:
        return Multisimplex(tuple(t.m for t in self.tuples))


@dataclass(frozen=True)
class MonoidalCutGrid:
    """A cut grid plus a label in ``{0, 1, ..., ell}`` per ambient
    component; label 0 discards the component."""

    grid: CutGrid
    ell: int
    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(int(x) for x in self.labels))
        if self.ell < 0:
            raise ArgumentError("ell must be nonnegative")
        for lab in self.labels:
            if not 0 <= lab <= self.ell:
                raise ArgumentError(
                    f"component label {lab} outside 0..{self.ell}"
                )

    @property
    def d(self) -> int:
        return self.grid.d

    @property
    def shape(self) -> Multisimplex:
        return self.grid.shape


# ---------------------------------------------------------------------------
# pointwise classification
# ---------------------------------------------------------------------------


def _side_of_count(first_sign: str, crossings: int) -> str:
    """Side of a point separated from the component's 'start' by
    ``crossings`` level strata, given the first stratum's sign."""
    even = crossings % 2 == 0
    if first_sign == "+":
        return "below" if even else "above"
    return "above" if even else "below"


def _classify_on_interval(comp: ComponentCut1D, x: Fraction) -> str:
    if comp.kind == "whole":
        return comp.whole_sign
    before = 0
    for pos, _sign in comp.zeros:
        if x == pos:
            return "level"
        if pos < x:
            before += 1
    return _side_of_count(comp.zeros[0][1], before)


def _classify_on_circle(comp: ComponentCut1D, circumference: Fraction,
                        theta: Fraction) -> str:
    if comp.kind == "whole":
        return comp.whole_sign
    theta = theta % circumference
    best: Optional[Fraction] = None
    best_sign = ""
    for pos, sign in comp.zeros:
        if theta == pos:
            return "level"
        gap = (pos - theta) % circumference
        if best is None or gap < best:
            best, best_sign = gap, sign
    # the next zero ahead is entered from its below side iff its sign is '+'
    return "below" if best_sign == "+" else "above"


def _classify_on_box(comp: ComponentCut2D, axis: int,
                     point: tuple[Fraction, Fraction]) -> str:
    if comp.kind == "whole":
        return comp.whole_sign
    x, y = point
    coord, arg = (y, x) if axis == 2 else (x, y)
    before = 0
    for sheet in comp.sheets:
        val = sheet.graph(arg)
        if val == coord:
            return "level"
        if val < coord:
            before += 1
    return _side_of_count(comp.sheets[0].sign, before)


def classify_point(cut: Cut, ambient: Ambient, point) -> str:
    """Side ('below' / 'level' / 'above') of a point of the ambient.

    1D points are either a rational (line) or ``("circle", idx, theta)``;
    2D points are coordinate pairs.
    """
    if isinstance(cut, Cut1D):
        if not isinstance(ambient, Ambient1D):
            raise ArgumentError("1D cut needs a 1D ambient")
        if isinstance(point, tuple) and point and point[0] == "circle":
            _tag, idx, theta = point
            comp_idx = len(ambient.intervals) + idx
            return _classify_on_circle(
                cut.components[comp_idx], ambient.circles[idx], fr(theta))
        x = fr(point)
        ci = ambient.component_of_line_point(x)
        return _classify_on_interval(cut.components[ci], x)
    if not isinstance(ambient, Ambient2D):
        raise ArgumentError("2D cut needs a 2D ambient")
    p = (fr(point[0]), fr(point[1]))
    ci = ambient.component_of_point(p[0], p[1])
    return _classify_on_box(cut.components[ci], cut.axis, p)


# ---------------------------------------------------------------------------
# cut validation
# ---------------------------------------------------------------------------


def _validate_component_1d(comp: ComponentCut1D, on_circle: bool,
                           circumference: Optional[Fraction],
                           lo, hi, where: str) -> None:
    if comp.kind == "whole":
        return
    zs = comp.zeros
    for k in range(1, len(zs)):
        if zs[k - 1][0] >= zs[k][0]:
            raise ValidationError(
                f"{where}: level points must strictly increase")
    for k in range(1, len(zs)):
        if zs[k][1] == zs[k - 1][1]:
            raise ValidationError(f"{where}: crossing signs must alternate")
    if on_circle:
        assert circumference is not None
        if len(zs) % 2 != 0:
            raise ValidationError(
                f"{where}: a circle needs an even number of level points")
        for pos, _s in zs:
            if not (0 <= pos < circumference):
                raise ValidationError(
                    f"{where}: circle level point {pos} outside [0, L)")
        # cyclic alternation: last and first must also differ
        if len(zs) >= 2 and zs[0][1] == zs[-1][1]:
            raise ValidationError(
                f"{where}: crossing signs must alternate cyclically")
    else:
        for pos, _s in zs:
            inside = (lo == NEG_INF or pos > lo) and (hi == INF or pos < hi)
            if not inside:
                raise ValidationError(
                    f"{where}: level point {pos} outside the component")


def validate_cut(cut: Cut, ambient: Ambient) -> None:
    """Raise ValidationError if the cut is not well-formed over the
    ambient (component count, positions, alternation, sheet order)."""
    if isinstance(cut, Cut1D):
        if not isinstance(ambient, Ambient1D):
            raise ValidationError("1D cut on a non-1D ambient")
        n = len(ambient.intervals) + len(ambient.circles)
        if len(cut.components) != n:
            raise ValidationError(
                f"cut has {len(cut.components)} component records, "
                f"ambient has {n} components")
        for i, (lo, hi) in enumerate(ambient.intervals):
            _validate_component_1d(cut.components[i], False, None, lo, hi,
                                   f"component {i}")
        for j, length in enumerate(ambient.circles):
            i = len(ambient.intervals) + j
            _validate_component_1d(cut.components[i], True, length,
                                   None, None, f"component {i}")
        return
    if not isinstance(ambient, Ambient2D):
        raise ValidationError("2D cut on a non-2D ambient")
    n = ambient.n_components()
    if len(cut.components) != n:
        raise ValidationError(
            f"cut has {len(cut.components)} component records, "
            f"ambient has {n} components")
    for ci, comp in enumerate(cut.components):
        if comp.kind == "whole":
            continue
        for k in range(1, len(comp.sheets)):
            if comp.sheets[k].sign == comp.sheets[k - 1].sign:
                raise ValidationError(
                    f"component {ci}: sheet signs must alternate")
        lo, hi = _component_domain_window(ambient, ci, cut.axis)
        dom = line_region(Seg(lo, hi, False, False))
        for k in range(1, len(comp.sheets)):
            verdict = plfunc_order(comp.sheets[k - 1].graph,
                                   comp.sheets[k].graph, dom)
            if verdict.kind != "lt":
                raise ValidationError(
                    f"component {ci}: sheets {k - 1} and {k} are not "
                    f"strictly ordered over the component")


def _component_domain_window(ambient: Ambient2D, ci: int, axis: int):
    """Open window of the graph argument coordinate over one component."""
    lo, hi = INF, NEG_INF
    for (x0, x1, y0, y1) in ambient.component_boxes(ci):
        a, b = (x0, x1) if axis == 2 else (y0, y1)
        if lo == INF or _lt(a, lo):
            lo = a
        if hi == NEG_INF or _lt(hi, b):
            hi = b
    return (lo, hi)


def _lt(a, b) -> bool:
    """a < b with +-inf sentinels."""
    if a == b:
        return False
    if a == NEG_INF or b == INF:
        return True
    if a == INF or b == NEG_INF:
        return False
    return a < b


# ---------------------------------------------------------------------------
# region extraction
# ---------------------------------------------------------------------------


def _interval_cut_cells(comp: ComponentCut1D, lo, hi, target: str) -> list:
    if comp.kind == "whole":
        if target == comp.whole_sign:
            return [Seg(lo, hi, False, False)]
        return []
    criticals = [p for p, _s in comp.zeros]
    if is_finite(lo):
        criticals.append(lo)
    if is_finite(hi):
        criticals.append(hi)

    def pred(x: Fraction) -> bool:
        if not (_lt(lo, x) and _lt(x, hi)):
            return False
        return _classify_on_interval(comp, x) == target

    return list(line_cells_from_predicate(criticals, pred))


def _circle_cut_cells(comp: ComponentCut1D, idx: int, length: Fraction,
                      target: str) -> list:
    from .plgeom import CircleCell

    if comp.kind == "whole":
        if target == comp.whole_sign:
            return [CircleCell(idx, length)]
        return []
    criticals = [p for p, _s in comp.zeros]

    def pred(theta: Fraction) -> bool:
        return _classify_on_circle(comp, length, theta) == target

    return list(circle_cells_from_predicate(idx, length, criticals, pred))


def _box_band_cells_axis2(comp: ComponentCut2D, box, target: str) -> list:
    """Cells of one box contributing to the target side, axis-2 cut."""
    x0, x1, y0, y1 = box
    out: list = []
    if comp.kind == "whole":
        if target == comp.whole_sign:
            out.append(Slab(
                x0, x1, False, False,
                PLFunc.constant(y0) if is_finite(y0) else NEG_INF,
                PLFunc.constant(y1) if is_finite(y1) else INF,
                False, False))
        return out
    sheets = comp.sheets
    first = sheets[0].sign
    window = line_region(Seg(x0, x1, False, False))
    if target == "level":
        for sheet in sheets:
            for seg in strict_between_cells(sheet.graph, y0, y1, window):
                out.append(Slab(seg.lo, seg.hi, seg.lo_closed, seg.hi_closed,
                                sheet.graph, sheet.graph, True, True))
        return out
    n = len(sheets)
    for band in range(n + 1):
        if _side_of_count(first, band) != target:
            continue
        if band == 0:
            lower = PLFunc.constant(y0) if is_finite(y0) else NEG_INF
        else:
            g = sheets[band - 1].graph
            lower = plfunc_max(g, PLFunc.constant(y0)) if is_finite(y0) else g
        if band == n:
            upper = PLFunc.constant(y1) if is_finite(y1) else INF
        else:
            g = sheets[band].graph
            upper = plfunc_min(g, PLFunc.constant(y1)) if is_finite(y1) else g
        out.append(Slab(x0, x1, False, False, lower, upper, False, False))
    return out


def _constant_value(f: PLFunc) -> Optional[Fraction]:
    return f.values[0] if f.is_constant() else None


def _box_band_cells_axis1(comp: ComponentCut2D, box, target: str) -> list:
    """Axis-1 analogue; sheets must be constant (vertical lines)."""
    x0, x1, y0, y1 = box
    out: list = []
    ylo = PLFunc.constant(y0) if is_finite(y0) else NEG_INF
    yhi = PLFunc.constant(y1) if is_finite(y1) else INF
    if comp.kind == "whole":
        if target == comp.whole_sign:
            out.append(Slab(x0, x1, False, False, ylo, yhi, False, False))
        return out
    consts = []
    for sheet in comp.sheets:
        c = _constant_value(sheet.graph)
        if c is None:
            raise UnsupportedDimensionError(
                "region extraction for a first-axis cut needs vertical "
                "(constant) sheets")
        consts.append(c)
    first = comp.sheets[0].sign
    if target == "level":
        for c in consts:
            if _lt(x0, c) and _lt(c, x1):
                out.append(Slab(c, c, True, True, ylo, yhi, False, False))
        return out
    n = len(consts)
    for band in range(n + 1):
        if _side_of_count(first, band) != target:
            continue
        lo = x0 if band == 0 else (consts[band - 1] if _lt(x0, consts[band - 1]) else x0)
        hi = x1 if band == n else (consts[band] if _lt(consts[band], x1) else x1)
        if not _lt(lo, hi):
            continue
        out.append(Slab(lo, hi, False, False, ylo, yhi, False, False))
    return out


def cut_regions(cut: Cut, ambient: Ambient) -> tuple[PLRegion, PLRegion, PLRegion]:
    """The (below, level, above) partition of the ambient by a cut."""
    if isinstance(cut, Cut1D):
        if not isinstance(ambient, Ambient1D):
            raise ArgumentError("1D cut needs a 1D ambient")
        parts: dict[str, list] = {"below": [], "level": [], "above": []}
        for i, (lo, hi) in enumerate(ambient.intervals):
            for target in parts:
                parts[target].extend(
                    _interval_cut_cells(cut.components[i], lo, hi, target))
        for j, length in enumerate(ambient.circles):
            comp = cut.components[len(ambient.intervals) + j]
            for target in parts:
                parts[target].extend(
                    _circle_cut_cells(comp, j, length, target))
        return (PLRegion(1, tuple(parts["below"])),
                PLRegion(1, tuple(parts["level"])),
                PLRegion(1, tuple(parts["above"])))
    if not isinstance(ambient, Ambient2D):
        raise ArgumentError("2D cut needs a 2D ambient")
    builder = _box_band_cells_axis2 if cut.axis == 2 else _box_band_cells_axis1
    parts = {"below": [], "level": [], "above": []}
    for ci in range(ambient.n_components()):
        comp = cut.components[ci]
        for box in ambient.component_boxes(ci):
            for target in parts:
                parts[target].extend(builder(comp, box, target))
    return (region_normalize(PLRegion(2, tuple(parts["below"]))),
            region_normalize(PLRegion(2, tuple(parts["level"]))),
            region_normalize(PLRegion(2, tuple(parts["above"]))))


def cut_side_region(cut: Cut, ambient: Ambient, side: str) -> PLRegion:
    below, level, above = cut_regions(cut, ambient)
    return {"below": below, "level": level, "above": above}[side]


# ---------------------------------------------------------------------------
# ordering, transversality, grid validation
# ---------------------------------------------------------------------------


def tuple_is_ordered(tup: CutTuple, ambient: Ambient) -> bool:
    """C_j <= C_{j+1} for all consecutive cuts (below-regions nest)."""
    if tup.m == 0:
        return True
    belows = [cut_side_region(c, ambient, "below") for c in tup.cuts]
    for j in range(tup.m):
        if not region_subset(belows[j], belows[j + 1]):
            return False
    return True


def _tuple_axis(tup: CutTuple) -> Optional[int]:
    axes = {c.axis for c in tup.cuts if isinstance(c, Cut2D)}
    if len(axes) > 1:
        raise ValidationError("cuts of one tuple must share their axis")
    return axes.pop() if axes else None


def _tuple_max_cross_slope(tup: CutTuple) -> Fraction:
    worst = Fraction(0)
    for cut in tup.cuts:
        if isinstance(cut, Cut2D):
            for comp in cut.components:
                for sheet in comp.sheets:
                    s = sheet.graph.max_abs_slope()
                    if s > worst:
                        worst = s
    return worst


def _tuple_has_level_data(tup: CutTuple) -> bool:
    for cut in tup.cuts:
        if isinstance(cut, Cut2D):
            if any(comp.kind == "sheets" for comp in cut.components):
                return True
        else:
            if any(comp.kind == "zeros" for comp in cut.components):
                return True
    return False


def _transversality_entry(g: CutGrid, i: int, ip: int) -> ReportEntry:
    """Positive-distance transversality surrogate for directions i < ip.

    Tuples on distinct axes pass when the product of their worst
    cross-slopes is < 1 (their level sets can then only meet at isolated
    transversal crossings and cannot share tangent directions).  Tuples
    sharing an axis are only accepted when at most one of them carries
    level data at all.
    """
    ti, tp = g.tuples[i - 1], g.tuples[ip - 1]
    name = f"transversal[{i},{ip}]"
    ai, ap = _tuple_axis(ti), _tuple_axis(tp)
    if ai is not None and ap is not None and ai != ap:
        si, sp = _tuple_max_cross_slope(ti), _tuple_max_cross_slope(tp)
        if si * sp < 1:
            return ReportEntry(name, True)
        return ReportEntry(
            name, False,
            f"cross-slope product {si} * {sp} is not < 1")
    if _tuple_has_level_data(ti) and _tuple_has_level_data(tp):
        return ReportEntry(
            name, False,
            "directions share an axis and both carry level sets")
    return ReportEntry(name, True)


def grid_check(g: CutGrid, ambient: Ambient) -> ValidationReport:
    """Well-formedness report: per-direction cut validity and ordering,
    plus pairwise transversality between directions."""
    entries: list[ReportEntry] = []
    cuts_ok: list[bool] = []
    for i, tup in enumerate(g.tuples, start=1):
        ok = True
        detail = ""
        try:
            _tuple_axis(tup)
            for cut in tup.cuts:
                validate_cut(cut, ambient)
        except (ValidationError, ArgumentError) as exc:
            ok = False
            detail = str(exc)
        entries.append(ReportEntry(f"cuts-valid[{i}]", ok, detail))
        cuts_ok.append(ok)
    for i, tup in enumerate(g.tuples, start=1):
        if not cuts_ok[i - 1]:
            entries.append(ReportEntry(
                f"ordered[{i}]", False, "skipped: invalid cuts"))
            continue
        if tup.m == 0:
            entries.append(ReportEntry(f"ordered[{i}]", True))
            continue
        try:
            ok = tuple_is_ordered(tup, ambient)
            entries.append(ReportEntry(
                f"ordered[{i}]", ok,
                "" if ok else "below-regions do not nest"))
        except UnsupportedDimensionError as exc:
            entries.append(ReportEntry(f"ordered[{i}]", False, str(exc)))
    for i in range(1, g.d + 1):
        for ip in range(i + 1, g.d + 1):
            if cuts_ok[i - 1] and cuts_ok[ip - 1]:
                entries.append(_transversality_entry(g, i, ip))
            else:
                entries.append(ReportEntry(
                    f"transversal[{i},{ip}]", False, "skipped: invalid cuts"))
    return ValidationReport(tuple(entries))


# ---------------------------------------------------------------------------
# between-regions, core, compactness
# ---------------------------------------------------------------------------


def _direction_between(tup: CutTuple, ambient: Ambient, j: int, jp: int,
                       closed: bool) -> PLRegion:
    if not (0 <= j <= jp <= tup.m):
        raise ArgumentError(f"bad index pair ({j}, {jp}) for [{tup.m}]")
    lo_b, lo_l, lo_a = cut_regions(tup.cuts[j], ambient)
    hi_b, hi_l, hi_a = cut_regions(tup.cuts[jp], ambient)
    if closed:
        lo_part = region_boolean("union", lo_a, lo_l)
        hi_part = region_boolean("union", hi_b, hi_l)
    else:
        lo_part, hi_part = lo_a, hi_b
    return region_boolean("intersect", lo_part, hi_part)


def region_between(g: CutGrid, ambient: Ambient,
                   directions: Sequence[int],
                   j: Sequence[int], jp: Sequence[int],
                   closed: bool = True) -> PLRegion:
    """Intersection over the chosen directions of the (open or closed)
    slice between cut j_i and cut jp_i.  No directions: the whole ambient."""
    dirs = list(directions)
    if len(set(dirs)) != len(dirs):
        raise ArgumentError("directions must be distinct")
    if len(j) != len(dirs) or len(jp) != len(dirs):
        raise ArgumentError("index lists must match the direction list")
    out = ambient_region(ambient)
    for k, i in enumerate(dirs):
        if not 1 <= i <= g.d:
            raise ArgumentError(f"direction {i} outside 1..{g.d}")
        piece = _direction_between(g.tuples[i - 1], ambient,
                                   j[k], jp[k], closed)
        out = region_boolean("intersect", out, piece)
    return out


def kept_region(mg: MonoidalCutGrid, ambient: Ambient) -> PLRegion:
    """Union of the ambient components with a nonzero label."""
    cells: list = []
    for ci, lab in enumerate(mg.labels):
        if lab != 0:
            cells.extend(component_region(ambient, ci).cells)
    dim = 1 if isinstance(ambient, Ambient1D) else 2
    return PLRegion(dim, tuple(cells))


def core(mg: MonoidalCutGrid, ambient: Ambient) -> PLRegion:
    """Closed slice between the extreme cuts of every direction,
    restricted to the kept (nonzero-label) components."""
    g = mg.grid
    dirs = list(range(1, g.d + 1))
    lo = [0] * g.d
    hi = [t.m for t in g.tuples]
    between = region_between(g, ambient, dirs, lo, hi, closed=True)
    return region_boolean("intersect", between, kept_region(mg, ambient))


def compactness_failures(mg: MonoidalCutGrid,
                         ambient: Ambient) -> list[str]:
    """Index pairs whose closed between-slice (on kept components) is
    not compact inside the ambient, as human-readable strings."""
    return list(_compactness_failures_cached(mg, ambient))


@lru_cache(maxsize=2048)
def _compactness_failures_cached(mg: MonoidalCutGrid,
                                 ambient: Ambient) -> tuple[str, ...]:
    g = mg.grid
    kept = kept_region(mg, ambient)
    dirs = list(range(1, g.d + 1))
    failures: list[str] = []
    if all(tuple_is_ordered(t, ambient) for t in g.tuples):
        # Ordered cuts nest, so every between-slice sits inside the
        # widest one; if that is compact, all of them are.
        widest = region_between(g, ambient, dirs, [0] * g.d,
                                [t.m for t in g.tuples], closed=True)
        if region_is_compact_in(region_boolean("intersect", widest, kept),
                                ambient):
            return ()
    pair_ranges = [
        [(j, jp) for j in range(t.m + 1) for jp in range(j, t.m + 1)]
        for t in g.tuples
    ]
    for combo in itertools.product(*pair_ranges):
        lo = [p[0] for p in combo]
        hi = [p[1] for p in combo]
        between = region_between(g, ambient, dirs, lo, hi, closed=True)
        restricted = region_boolean("intersect", between, kept)
        if not region_is_compact_in(restricted, ambient):
            pairs = ", ".join(
                f"direction {i}: [{a}..{b}]"
                for i, (a, b) in enumerate(combo, start=1))
            if not region_bounded(restricted):
                why = "slice is unbounded"
            else:
                why = "closure of the slice leaves the ambient"
            failures.append(f"{pairs}: {why}")
    return tuple(failures)


def is_compact(mg: MonoidalCutGrid, ambient: Ambient) -> bool:
    """Every closed between-slice over kept components is compact
    with closure inside the ambient."""
    return not compactness_failures(mg, ambient)


# ---------------------------------------------------------------------------
# reindexing and relabelling
# ---------------------------------------------------------------------------


def apply_simplicial(mg: MonoidalCutGrid, direction: int,
                     alpha: MonotoneMap) -> MonoidalCutGrid:
    """Reindex one direction's tuple along a monotone map: the new
    j-th cut is the old alpha(j)-th cut."""
    g = mg.grid
    if not 1 <= direction <= g.d:
        raise ArgumentError(f"direction {direction} outside 1..{g.d}")
    tup = g.tuples[direction - 1]
    if alpha.target != tup.m:
        raise ArgumentError(
            f"map targets [{alpha.target}] but the tuple is a [{tup.m}]-tuple")
    new_cuts = tuple(tup.cuts[alpha(j)] for j in range(alpha.source + 1))
    new_tuples = list(g.tuples)
    new_tuples[direction - 1] = CutTuple(new_cuts)
    return replace(mg, grid=CutGrid(tuple(new_tuples)))


def vertex_grid(mg: MonoidalCutGrid, direction: int, j: int) -> MonoidalCutGrid:
    """Collapse one direction to the single cut C_j."""
    tup = mg.grid.tuples[direction - 1]
    return apply_simplicial(
        mg, direction, MonotoneMap(0, tup.m, (j,)))


def relabel(mg: MonoidalCutGrid, u: GammaMorphism) -> MonoidalCutGrid:
    """Post-compose the component labelling with a pointed map of
    finite pointed sets."""
    if u.source != mg.ell:
        raise ArgumentError(
            f"relabelling expects source {mg.ell}, got {u.source}")
    new_labels = tuple(u(lab) for lab in mg.labels)
    return MonoidalCutGrid(mg.grid, u.target, new_labels)


# ---------------------------------------------------------------------------
# globularity
# ---------------------------------------------------------------------------


def _cut_disagreement(cut_a: Cut, cut_b: Cut, ambient: Ambient,
                      within: PLRegion) -> PLRegion:
    """Points of `within` where the two cuts classify differently."""
    a_b, a_l, a_a = cut_regions(cut_a, ambient)
    b_b, b_l, b_a = cut_regions(cut_b, ambient)
    agree_cells: list = []
    for ra, rb in ((a_b, b_b), (a_l, b_l), (a_a, b_a)):
        agree_cells.extend(region_boolean("intersect", ra, rb).cells)
    dim = within.dim
    agree = PLRegion(dim, tuple(agree_cells))
    return region_difference(within, agree)


def globularity_failures(mg: MonoidalCutGrid,
                         ambient: Ambient) -> list[str]:
    """For each earlier direction's vertex: the later directions' cuts
    must agree on a neighborhood of the vertex core.  Since the
    disagreement locus is taken closed and the vertex core is compact,
    'agree on a neighborhood' is exactly 'the closed disagreement locus
    misses the core'."""
    return list(_globularity_failures_cached(mg, ambient))


@lru_cache(maxsize=2048)
def _globularity_failures_cached(mg: MonoidalCutGrid,
                                 ambient: Ambient) -> tuple[str, ...]:
    g = mg.grid
    if g.d > 2:
        raise UnsupportedDimensionError(
            "globularity test implemented for at most 2 directions")
    failures: list[str] = []
    if g.d <= 1:
        return ()
    kept = kept_region(mg, ambient)
    for i in range(1, g.d):
        tup = g.tuples[i - 1]
        later = range(i + 1, g.d + 1)
        diff_cells: list = []
        for ip in later:
            cuts = g.tuples[ip - 1].cuts
            for k in range(len(cuts)):
                for l in range(k + 1, len(cuts)):
                    if cut_equal(cuts[k], cuts[l]):
                        continue  # equal cuts cannot disagree anywhere
                    diff = _cut_disagreement(cuts[k], cuts[l], ambient, kept)
                    diff_cells.extend(diff.cells)
        if not diff_cells:
            continue
        wobble = region_closure(PLRegion(
            1 if isinstance(ambient, Ambient1D) else 2, tuple(diff_cells)))
        for j in range(tup.m + 1):
            vertex_core = core(vertex_grid(mg, i, j), ambient)
            overlap = region_boolean("intersect", wobble, vertex_core)
            if not region_is_empty(overlap):
                witness = region_sample_point(overlap)
                failures.append(
                    f"direction {i}, vertex {j}: later cuts disagree "
                    f"arbitrarily close to the core (e.g. at {witness})")
    return tuple(failures)


def is_globular(mg: MonoidalCutGrid, ambient: Ambient) -> bool:
    """Later directions' cuts coincide near every earlier vertex core."""
    return not globularity_failures(mg, ambient)


# ---------------------------------------------------------------------------
# affine embeddings and transport of cut data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AffineMap:
    """Injective affine map of R^dim whose linear part is a signed
    permutation with rational scales: output_i = coeffs[i] *
    input[perm[i]] + shifts[i], coeffs[i] != 0."""

    dim: int
    perm: tuple[int, ...]
    coeffs: tuple[Fraction, ...]
    shifts: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.dim not in (1, 2):
            raise ArgumentError("only dimensions 1 and 2 are supported")
        if sorted(self.perm) != list(range(self.dim)):
            raise ArgumentError(f"bad coordinate permutation {self.perm}")
        cs = tuple(fr(c) for c in self.coeffs)
        ss = tuple(fr(s) for s in self.shifts)
        if len(cs) != self.dim or len(ss) != self.dim:
            raise ArgumentError("coefficient arity mismatch")
        if any(c == 0 for c in cs):
            raise ArgumentError("scale coefficients must be nonzero")
        object.__setattr__(self, "coeffs", cs)
        object.__setattr__(self, "shifts", ss)
        object.__setattr__(self, "perm", tuple(int(p) for p in self.perm))

    @staticmethod
    def identity(dim: int) -> "AffineMap":
        return AffineMap(dim, tuple(range(dim)),
                         tuple(Fraction(1) for _ in range(dim)),
                         tuple(Fraction(0) for _ in range(dim)))

    @staticmethod
    def line(a, b) -> "AffineMap":
        """x -> a x + b on the line."""
        return AffineMap(1, (0,), (fr(a),), (fr(b),))

    def is_identity(self) -> bool:
        return (self.perm == tuple(range(self.dim))
                and all(c == 1 for c in self.coeffs)
                and all(s == 0 for s in self.shifts))

    def apply(self, point: tuple) -> tuple:
        p = tuple(fr(x) for x in point)
        return tuple(self.coeffs[i] * p[self.perm[i]] + self.shifts[i]
                     for i in range(self.dim))

    def inverse(self) -> "AffineMap":
        perm_inv = [0] * self.dim
        coeffs = [Fraction(1)] * self.dim
        shifts = [Fraction(0)] * self.dim
        for i in range(self.dim):
            j = self.perm[i]
            perm_inv[j] = i
            coeffs[j] = 1 / self.coeffs[i]
            shifts[j] = -self.shifts[i] / self.coeffs[i]
        return AffineMap(self.dim, tuple(perm_inv), tuple(coeffs),
                         tuple(shifts))

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other."""
        if self.dim != other.dim:
            raise ArgumentError("dimension mismatch in composition")
        perm = tuple(other.perm[self.perm[i]] for i in range(self.dim))
        coeffs = tuple(self.coeffs[i] * other.coeffs[self.perm[i]]
                       for i in range(self.dim))
        shifts = tuple(self.coeffs[i] * other.shifts[self.perm[i]]
                       + self.shifts[i] for i in range(self.dim))
        return AffineMap(self.dim, perm, coeffs, shifts)

    def map_interval(self, lo, hi) -> tuple:
        """Image of an open interval under a 1D map (ends may be inf)."""
        a, b = self.coeffs[0], self.shifts[0]

        def send(v):
            if v == INF:
                return INF if a > 0 else NEG_INF
            if v == NEG_INF:
                return NEG_INF if a > 0 else INF
            return a * v + b

        p, q = send(lo), send(hi)
        return (p, q) if a > 0 else (q, p)

    def map_box(self, box) -> tuple:
        """Image of an open box under a 2D map."""
        x0, x1, y0, y1 = box
        ranges = ((x0, x1), (y0, y1))
        out = [None, None, None, None]
        for i in range(2):
            a, b = self.coeffs[i], self.shifts[i]
            lo, hi = ranges[self.perm[i]]

            def send(v):
                if v == INF:
                    return INF if a > 0 else NEG_INF
                if v == NEG_INF:
                    return NEG_INF if a > 0 else INF
                return a * v + b

            p, q = send(lo), send(hi)
            if a < 0:
                p, q = q, p
            out[2 * i] = p
            out[2 * i + 1] = q
        return tuple(out)


@dataclass(frozen=True)
class AmbientEmbedding:
    """An affine-with-signed-permutation map between ambients (the
    identity on any circle components, which must coincide)."""

    source: Ambient
    target: Ambient
    map: AffineMap

    def __post_init__(self) -> None:
        src_dim = 1 if isinstance(self.source, Ambient1D) else 2
        tgt_dim = 1 if isinstance(self.target, Ambient1D) else 2
        if src_dim != tgt_dim or self.map.dim != src_dim:
            raise ArgumentError("embedding dimensions do not agree")
        if src_dim == 1:
            assert isinstance(self.source, Ambient1D)
            assert isinstance(self.target, Ambient1D)
            if self.source.circles != self.target.circles:
                raise ArgumentError(
                    "circle components must match up to identity")

    @property
    def dim(self) -> int:
        return self.map.dim

    def validate(self) -> None:
        """Check the image of the source lies inside the target."""
        img = image_ambient(self)
        if not region_subset(ambient_region(img), ambient_region(self.target)):
            raise ValidationError(
                "the embedding does not map the source into the target")

    def inverse_onto_image(self) -> "AmbientEmbedding":
        return AmbientEmbedding(image_ambient(self), self.source,
                                self.map.inverse())


def image_ambient(emb: AmbientEmbedding) -> Ambient:
    """The image of the source ambient, as an ambient in its own right."""
    if isinstance(emb.source, Ambient1D):
        ivals = sorted(emb.map.map_interval(lo, hi)
                       for lo, hi in emb.source.intervals)
        return Ambient1D(tuple(ivals), emb.source.circles)
    boxes = tuple(emb.map.map_box(b) for b in emb.source.boxes)
    return Ambient2D(boxes)


def _component_sample(ambient: Ambient, ci: int):
    pt = region_sample_point(component_region(ambient, ci))
    if pt is None:
        raise ArgumentError(f"component {ci} is empty")
    return pt


def _transport_component_1d(cut: Cut1D, tgt: Ambient1D,
                            emb_map: AffineMap, lo, hi) -> ComponentCut1D:
    """Pull the target's line cut data back to a source interval."""
    img_lo, img_hi = emb_map.map_interval(lo, hi)
    mid = _interval_rep(img_lo, img_hi)
    try:
        tc = tgt.component_of_line_point(mid)
    except ArgumentError:
        raise ValidationError("embedding image misses the target ambient")
    comp = cut.components[tc]
    if comp.kind == "whole":
        return comp
    inv = emb_map.inverse()
    flip = emb_map.coeffs[0] < 0
    pulled: list[tuple[Fraction, str]] = []
    for pos, sign in comp.zeros:
        if _lt(img_lo, pos) and _lt(pos, img_hi):
            new_sign = _OPPOSITE[sign] if flip else sign
            pulled.append((inv.coeffs[0] * pos + inv.shifts[0], new_sign))
    if not pulled:
        side = _classify_on_interval(comp, mid)
        return ComponentCut1D("whole", (), side)
    pulled.sort(key=lambda z: z[0])
    return ComponentCut1D("zeros", tuple(pulled))


def _interval_rep(lo, hi) -> Fraction:
    if is_finite(lo) and is_finite(hi):
        return (lo + hi) / 2
    if is_finite(lo):
        return lo + 1
    if is_finite(hi):
        return hi - 1
    return Fraction(0)


def _sheet_crosses_component(graph: PLFunc, axis: int, boxes) -> bool:
    for (x0, x1, y0, y1) in boxes:
        if axis == 2:
            window = line_region(Seg(x0, x1, False, False))
            if strict_between_cells(graph, y0, y1, window):
                return True
        else:
            window = line_region(Seg(y0, y1, False, False))
            if strict_between_cells(graph, x0, x1, window):
                return True
    return False


def _transport_component_2d(cut: Cut2D, tgt: Ambient2D,
                            emb_map: AffineMap,
                            src_boxes) -> tuple[int, ComponentCut2D]:
    """Pull the target's planar cut data back to one source component.

    Returns the new axis together with the component data.
    """
    img_boxes = [emb_map.map_box(b) for b in src_boxes]
    sample_src = _box_rep(src_boxes[0])
    sample_img = emb_map.apply(sample_src)
    try:
        tc = tgt.component_of_point(sample_img[0], sample_img[1])
    except ArgumentError:
        raise ValidationError("embedding image misses the target ambient")
    comp = cut.components[tc]
    a = cut.axis            # target coordinate index stratified (1-based)
    o = 3 - a               # the graph argument coordinate (1-based)
    new_axis = emb_map.perm[a - 1] + 1
    if comp.kind == "whole":
        return new_axis, comp
    coeff_a = emb_map.coeffs[a - 1]
    coeff_o = emb_map.coeffs[o - 1]
    shift_a = emb_map.shifts[a - 1]
    shift_o = emb_map.shifts[o - 1]
    flip = coeff_a < 0
    kept: list[Sheet] = []
    for sheet in comp.sheets:
        if not _sheet_crosses_component(sheet.graph, a, img_boxes):
            continue
        g = sheet.graph.compose_affine(coeff_o, shift_o)
        g = g.add_constant(-shift_a).scale(Fraction(1, 1) / coeff_a)
        kept.append(Sheet(g, _OPPOSITE[sheet.sign] if flip else sheet.sign))
    if not kept:
        side = _classify_on_box(comp, a, sample_img)
        return new_axis, ComponentCut2D("whole", (), side)
    # strict disjointness over the component makes the order at any one
    # shadow point the order everywhere over it
    arg_lo, arg_hi = INF, NEG_INF
    for (x0, x1, y0, y1) in src_boxes:
        wlo, whi = (x0, x1) if new_axis == 2 else (y0, y1)
        if arg_lo == INF or _lt(wlo, arg_lo):
            arg_lo = wlo
        if arg_hi == NEG_INF or _lt(arg_hi, whi):
            arg_hi = whi
    probe = _interval_rep(arg_lo, arg_hi)
    kept.sort(key=lambda s: s.graph(probe))
    return new_axis, ComponentCut2D("sheets", tuple(kept))


def _box_rep(box) -> tuple[Fraction, Fraction]:
    x0, x1, y0, y1 = box
    return (_interval_rep(x0, x1), _interval_rep(y0, y1))


def pullback_along(mg: MonoidalCutGrid,
                   emb: AmbientEmbedding) -> MonoidalCutGrid:
    """Transport a monoidal grid on the embedding's target back to its
    source: restrict the level data to the image of each source
    component and rewrite it in source coordinates.  Labels transfer
    componentwise through the embedding."""
    emb.validate()
    src, tgt = emb.source, emb.target
    g = mg.grid
    if isinstance(src, Ambient1D):
        assert isinstance(tgt, Ambient1D)
        n_src_line = len(src.intervals)
        n_tgt_line = len(tgt.intervals)
        new_tuples: list[CutTuple] = []
        for tup in g.tuples:
            new_cuts: list[Cut] = []
            for cut in tup.cuts:
                assert isinstance(cut, Cut1D)
                comps: list[ComponentCut1D] = []
                for (lo, hi) in src.intervals:
                    comps.append(_transport_component_1d(
                        cut, tgt, emb.map, lo, hi))
                for j in range(len(src.circles)):
                    comps.append(cut.components[n_tgt_line + j])
                new_cuts.append(Cut1D(tuple(comps)))
            new_tuples.append(CutTuple(tuple(new_cuts)))
        labels: list[int] = []
        for ci in range(n_src_line):
            lo, hi = src.intervals[ci]
            mid = _interval_rep(*emb.map.map_interval(lo, hi))
            try:
                tc = tgt.component_of_line_point(mid)
            except ArgumentError:
                raise ValidationError(
                    "embedding image misses the target ambient")
            labels.append(mg.labels[tc])
        for j in range(len(src.circles)):
            labels.append(mg.labels[n_tgt_line + j])
        return MonoidalCutGrid(CutGrid(tuple(new_tuples)), mg.ell,
                               tuple(labels))
    assert isinstance(src, Ambient2D) and isinstance(tgt, Ambient2D)
    new_tuples = []
    for tup in g.tuples:
        new_cuts = []
        for cut in tup.cuts:
            assert isinstance(cut, Cut2D)
            comps2: list[ComponentCut2D] = []
            axis_for_cut = emb.map.perm[cut.axis - 1] + 1
            for ci in range(src.n_components()):
                ax, comp = _transport_component_2d(
                    cut, tgt, emb.map, src.component_boxes(ci))
                comps2.append(comp)
                axis_for_cut = ax
            new_cuts.append(Cut2D(axis_for_cut, tuple(comps2)))
        new_tuples.append(CutTuple(tuple(new_cuts)))
    labels = []
    for ci in range(src.n_components()):
        sample = emb.map.apply(_box_rep(src.component_boxes(ci)[0]))
        try:
            tc = tgt.component_of_point(sample[0], sample[1])
        except ArgumentError:
            raise ValidationError(
                "embedding image misses the target ambient")
        labels.append(mg.labels[tc])
    return MonoidalCutGrid(CutGrid(tuple(new_tuples)), mg.ell, tuple(labels))


def pushforward_along(mg: MonoidalCutGrid, ambient: Ambient,
                      aff: AffineMap) -> tuple[MonoidalCutGrid, Ambient]:
    """Transport a monoidal grid forward along an invertible affine
    map: the result lives on the image ambient and is the pullback
    along the inverse."""
    fwd = AmbientEmbedding(ambient, _full_ambient_like(ambient, aff), aff)
    img = image_ambient(fwd)
    back = AmbientEmbedding(img, ambient, aff.inverse())
    return pullback_along(mg, back), img


def _full_ambient_like(ambient: Ambient, aff: AffineMap) -> Ambient:
    if isinstance(ambient, Ambient1D):
        return Ambient1D(((NEG_INF, INF),), ambient.circles)
    return Ambient2D(((NEG_INF, INF, NEG_INF, INF),))


# ---------------------------------------------------------------------------
# structural equality of grids
# ---------------------------------------------------------------------------


def _component_cut_equal(a, b) -> bool:
    if isinstance(a, ComponentCut1D) and isinstance(b, ComponentCut1D):
        if a.kind != b.kind:
            return False
        if a.kind == "whole":
            return a.whole_sign == b.whole_sign
        return a.zeros == b.zeros
    if isinstance(a, ComponentCut2D) and isinstance(b, ComponentCut2D):
        if a.kind != b.kind:
            return False
        if a.kind == "whole":
            return a.whole_sign == b.whole_sign
        if len(a.sheets) != len(b.sheets):
            return False
        return all(sa.sign == sb.sign and plfunc_equal(sa.graph, sb.graph)
                   for sa, sb in zip(a.sheets, b.sheets))
    return False


def cut_equal(a: Cut, b: Cut) -> bool:
    if isinstance(a, Cut2D) != isinstance(b, Cut2D):
        return False
    if isinstance(a, Cut2D) and a.axis != b.axis:
        if any(c.kind == "sheets" for c in a.components) or \
           any(c.kind == "sheets" for c in b.components):
            return False
    if len(a.components) != len(b.components):
        return False
    return all(_component_cut_equal(ca, cb)
               for ca, cb in zip(a.components, b.components))


def grids_equal(a: MonoidalCutGrid, b: MonoidalCutGrid) -> bool:
    if a.ell != b.ell or a.labels != b.labels:
        return False
    if a.shape != b.shape:
        return False
    for ta, tb in zip(a.grid.tuples, b.grid.tuples):
        for ca, cb in zip(ta.cuts, tb.cuts):
            if not cut_equal(ca, cb):
                return False
    return True
