"""Exact rational piecewise-linear substrate.

Everything here is computed over `fractions.Fraction`; the only floats in play
are the IEEE infinities, used purely as order sentinels for unbounded interval
endpoints (they are compared against rationals but never enter arithmetic).

The region algebra works by joint refinement: the real line (or each circle,
or the x-axis under a family of slabs) is chopped at every "event" coordinate
— cell endpoints, PL breakpoints, pairwise graph crossings — into atoms on
which membership in every region under consideration is constant, decided
exactly at one rational representative.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

from .errors import ArgumentError, ValidationError

INF = float("inf")
NEG_INF = float("-inf")

End = Union[Fraction, float]  # a rational endpoint or an infinity sentinel


def fr(x) -> Fraction:
    """Coerce ints/strings/Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) or isinstance(x, str):
        return Fraction(x)
    raise ArgumentError(f"not an exact rational: {x!r}")


def is_finite(v: End) -> bool:
    return isinstance(v, (Fraction, int))


# ---------------------------------------------------------------------------
# PL functions of one variable
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PLFunc:
    """A continuous piecewise-linear function on the whole line, given by its
    breakpoints, the values there, and the two tail slopes."""

    breakpoints: tuple[Fraction, ...]
    values: tuple[Fraction, ...]
    left_slope: Fraction
    right_slope: Fraction

    def __post_init__(self) -> None:
        bps = tuple(fr(b) for b in self.breakpoints)
        vals = tuple(fr(v) for v in self.values)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "left_slope", fr(self.left_slope))
        object.__setattr__(self, "right_slope", fr(self.right_slope))
        if not bps:
            raise ValidationError("a PL function needs at least one breakpoint")
        if len(bps) != len(vals):
            raise ValidationError("breakpoint/value length mismatch")
        if any(bps[i] >= bps[i + 1] for i in range(len(bps) - 1)):
            raise ValidationError("breakpoints must be strictly increasing")

    @classmethod
    def constant(cls, c) -> "PLFunc":
        return cls((Fraction(0),), (fr(c),), Fraction(0), Fraction(0))

    @classmethod
    def affine(cls, slope, intercept) -> "PLFunc":
        return cls((Fraction(0),), (fr(intercept),), fr(slope), fr(slope))

    @classmethod
    def from_points(cls, points: Sequence[tuple], left_slope=0, right_slope=0) -> "PLFunc":
        pts = sorted((fr(x), fr(y)) for x, y in points)
        return cls(
            tuple(p[0] for p in pts),
            tuple(p[1] for p in pts),
            fr(left_slope),
            fr(right_slope),
        )

    def __call__(self, x) -> Fraction:
        x = fr(x)
        bps, vals = self.breakpoints, self.values
        if x <= bps[0]:
            return vals[0] + self.left_slope * (x - bps[0])
        if x >= bps[-1]:
            return vals[-1] + self.right_slope * (x - bps[-1])
        # linear scan; cut data is small
        for i in range(len(bps) - 1):
            if bps[i] <= x <= bps[i + 1]:
                m = (vals[i + 1] - vals[i]) / (bps[i + 1] - bps[i])
                return vals[i] + m * (x - bps[i])
        raise AssertionError("unreachable")

    def pieces(self) -> list[tuple[End, End, Fraction, Fraction]]:
        """Affine pieces as (lo, hi, slope, intercept) with f(x) = slope*x + intercept."""
        bps, vals = self.breakpoints, self.values
        out: list[tuple[End, End, Fraction, Fraction]] = []
        out.append((NEG_INF, bps[0], self.left_slope, vals[0] - self.left_slope * bps[0]))
        for i in range(len(bps) - 1):
            m = (vals[i + 1] - vals[i]) / (bps[i + 1] - bps[i])
            out.append((bps[i], bps[i + 1], m, vals[i] - m * bps[i]))
        out.append((bps[-1], INF, self.right_slope, vals[-1] - self.right_slope * bps[-1]))
        return out

    def piece_at(self, x) -> tuple[Fraction, Fraction]:
        """(slope, intercept) of the affine piece whose closed hull contains x,
        preferring interior pieces; at a breakpoint either adjacent answer has
        the same value."""
        x = fr(x)
        for lo, hi, m, c in self.pieces():
            if lo <= x <= hi:
                return (m, c)
        raise AssertionError("unreachable")

    def is_constant(self) -> bool:
        return (
            self.left_slope == 0
            and self.right_slope == 0
            and all(v == self.values[0] for v in self.values)
        )

    def add(self, other: "PLFunc") -> "PLFunc":
        xs = sorted(set(self.breakpoints) | set(other.breakpoints))
        return PLFunc(
            tuple(xs),
            tuple(self(x) + other(x) for x in xs),
            self.left_slope + other.left_slope,
            self.right_slope + other.right_slope,
        )

    def neg(self) -> "PLFunc":
        return PLFunc(
            self.breakpoints,
            tuple(-v for v in self.values),
            -self.left_slope,
            -self.right_slope,
        )

    def sub(self, other: "PLFunc") -> "PLFunc":
        return self.add(other.neg())

    def scale(self, c) -> "PLFunc":
        c = fr(c)
        return PLFunc(
            self.breakpoints,
            tuple(c * v for v in self.values),
            c * self.left_slope,
            c * self.right_slope,
        )

    def add_constant(self, c) -> "PLFunc":
        c = fr(c)
        return PLFunc(
            self.breakpoints,
            tuple(v + c for v in self.values),
            self.left_slope,
            self.right_slope,
        )

    def compose_affine(self, a, b) -> "PLFunc":
        """The function x -> f(a*x + b), a != 0."""
        a, b = fr(a), fr(b)
        if a == 0:
            raise ArgumentError("affine reparameterization must be invertible")
        new_bps = [(bp - b) / a for bp in self.breakpoints]
        pairs = sorted(zip(new_bps, self.values))
        ls, rs = a * self.left_slope, a * self.right_slope
        if a < 0:
            ls, rs = a * self.right_slope, a * self.left_slope
        return PLFunc(
            tuple(p[0] for p in pairs), tuple(p[1] for p in pairs), ls, rs
        )

    def max_abs_slope(self) -> Fraction:
        return max(abs(m) for _, _, m, _ in self.pieces())


def plfunc_equal(f: PLFunc, g: PLFunc) -> bool:
    """Equality as functions (representations may differ)."""
    h = f.sub(g)
    return h.left_slope == 0 and h.right_slope == 0 and all(v == 0 for v in h.values)


def plfunc_eval(f: PLFunc, x) -> Fraction:
    return f(fr(x))


def plfunc_integral(f: PLFunc, a, b) -> Fraction:
    """Exact trapezoidal integral over [a, b]."""
    a, b = fr(a), fr(b)
    if a > b:
        raise ArgumentError("integral bounds out of order")
    if a == b:
        return Fraction(0)
    xs = [a] + [bp for bp in f.breakpoints if a < bp < b] + [b]
    total = Fraction(0)
    for x0, x1 in zip(xs, xs[1:]):
        total += (f(x0) + f(x1)) * (x1 - x0) / 2
    return total


def plfunc_zeros(f: PLFunc) -> list[Fraction]:
    """Event coordinates of the zero set: isolated zeros plus the finite
    endpoints of identically-zero pieces (a refinement superset)."""
    out: set[Fraction] = set()
    for lo, hi, m, c in f.pieces():
        if m == 0:
            if c == 0:
                if is_finite(lo):
                    out.add(lo)
                if is_finite(hi):
                    out.add(hi)
        else:
            x0 = -c / m
            if lo <= x0 <= hi:
                out.add(x0)
    return sorted(out)


@lru_cache(maxsize=8192)
def _crossings_cached(f: PLFunc, g: PLFunc) -> tuple[Fraction, ...]:
    return tuple(plfunc_zeros(f.sub(g)))


def plfunc_crossings(f: PLFunc, g: PLFunc) -> list[Fraction]:
    if f is g or f == g:
        return []
    return list(_crossings_cached(f, g))


def plfunc_max_on_closed(f: PLFunc, lo: End, hi: End) -> End:
    """Supremum of f over the closed hull [lo, hi] (ends may be infinite);
    returns +inf when unbounded above there."""
    if lo > hi:
        raise ArgumentError("empty hull")
    cands: list[Fraction] = []
    if is_finite(lo):
        cands.append(f(lo))
    elif f.left_slope < 0:
        return INF
    else:
        cands.append(f(f.breakpoints[0]))
    if is_finite(hi):
        cands.append(f(hi))
    elif f.right_slope > 0:
        return INF
    else:
        cands.append(f(f.breakpoints[-1]))
    cands.extend(f(bp) for bp in f.breakpoints if lo <= bp <= hi)
    return max(cands)


def plfunc_min_on_closed(f: PLFunc, lo: End, hi: End) -> End:
    m = plfunc_max_on_closed(f.neg(), lo, hi)
    return NEG_INF if m == INF else -m


def _tail_winner(f: PLFunc, g: PLFunc, x_probe: Fraction, want_max: bool) -> PLFunc:
    fv, gv = f(x_probe), g(x_probe)
    if fv == gv:
        # tied on the whole tail (probe sits beyond every crossing)
        return f
    return (f if fv > gv else g) if want_max else (f if fv < gv else g)


def _combine(f: PLFunc, g: PLFunc, want_max: bool) -> PLFunc:
    xs = sorted(
        set(f.breakpoints) | set(g.breakpoints) | set(plfunc_crossings(f, g))
    )
    pick = max if want_max else min
    values = tuple(pick(f(x), g(x)) for x in xs)
    left = _tail_winner(f, g, xs[0] - 1, want_max).left_slope
    right = _tail_winner(f, g, xs[-1] + 1, want_max).right_slope
    return PLFunc(tuple(xs), values, left, right)


def plfunc_max(f: PLFunc, g: PLFunc) -> PLFunc:
    return _combine(f, g, True)


def plfunc_min(f: PLFunc, g: PLFunc) -> PLFunc:
    return _combine(f, g, False)


# ---------------------------------------------------------------------------
# Region cells
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Seg:
    """A line interval with per-endpoint inclusion flags; lo == hi (both
    closed) is a point; infinite ends are open."""

    lo: End
    hi: End
    lo_closed: bool
    hi_closed: bool

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValidationError("segment endpoints out of order")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise ValidationError("a degenerate segment must be a closed point")
        if not is_finite(self.lo) and self.lo_closed:
            raise ValidationError("infinite endpoint cannot be closed")
        if not is_finite(self.hi) and self.hi_closed:
            raise ValidationError("infinite endpoint cannot be closed")
        if self.lo == self.hi and not is_finite(self.lo):
            raise ValidationError("degenerate segment at infinity")

    def contains(self, x) -> bool:
        lo_ok = self.lo < x or (self.lo == x and self.lo_closed)
        hi_ok = x < self.hi or (x == self.hi and self.hi_closed)
        return lo_ok and hi_ok


@dataclass(frozen=True)
class Arc:
    """An arc on circle #circle of the given circumference, running in the
    positive direction from start to end (coordinates mod circumference);
    start == end (both closed) is a single point."""

    circle: int
    circumference: Fraction
    start: Fraction
    end: Fraction
    start_closed: bool
    end_closed: bool

    def __post_init__(self) -> None:
        L = fr(self.circumference)
        object.__setattr__(self, "circumference", L)
        object.__setattr__(self, "start", fr(self.start) % L)
        object.__setattr__(self, "end", fr(self.end) % L)
        if L <= 0:
            raise ValidationError("circumference must be positive")
        if self.start == self.end and not (self.start_closed and self.end_closed):
            raise ValidationError("a degenerate arc must be a closed point")

    def contains(self, theta) -> bool:
        L = self.circumference
        theta = fr(theta) % L
        if self.start == self.end:
            return theta == self.start
        span = (self.end - self.start) % L
        delta = (theta - self.start) % L
        if delta == 0:
            return self.start_closed
        if delta == span:
            return self.end_closed
        return 0 < delta < span


@dataclass(frozen=True)
class CircleCell:
    circle: int
    circumference: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "circumference", fr(self.circumference))

    def contains(self, theta) -> bool:
        return True


@dataclass(frozen=True)
class Slab:
    """A 2D cell {x in the x-range, lower(x) <= y <= upper(x)} with inclusion
    flags on all four sides; lower/upper are PLFunc graphs or infinities."""

    x_lo: End
    x_hi: End
    x_lo_closed: bool
    x_hi_closed: bool
    lower: Union[PLFunc, float]
    upper: Union[PLFunc, float]
    lower_closed: bool
    upper_closed: bool

    def __post_init__(self) -> None:
        if self.x_lo > self.x_hi:
            raise ValidationError("slab x-range out of order")
        if self.x_lo == self.x_hi and not (self.x_lo_closed and self.x_hi_closed):
            raise ValidationError("a degenerate x-range must be a closed point")
        for v, closed in ((self.lower, self.lower_closed), (self.upper, self.upper_closed)):
            if isinstance(v, float) and closed:
                raise ValidationError("infinite graph bound cannot be closed")
        if isinstance(self.lower, float) and self.lower != NEG_INF:
            raise ValidationError("lower bound must be a PLFunc or -inf")
        if isinstance(self.upper, float) and self.upper != INF:
            raise ValidationError("upper bound must be a PLFunc or +inf")

    def covers_x(self, x) -> bool:
        lo_ok = self.x_lo < x or (self.x_lo == x and self.x_lo_closed)
        hi_ok = x < self.x_hi or (x == self.x_hi and self.x_hi_closed)
        return lo_ok and hi_ok

    def contains(self, x, y) -> bool:
        if not self.covers_x(x):
            return False
        x, y = fr(x), fr(y)
        if isinstance(self.lower, PLFunc):
            lv = self.lower(x)
            if y < lv or (y == lv and not self.lower_closed):
                return False
        if isinstance(self.upper, PLFunc):
            uv = self.upper(x)
            if y > uv or (y == uv and not self.upper_closed):
                return False
        return True


Cell = Union[Seg, Arc, CircleCell, Slab]


@dataclass(frozen=True)
class PLRegion:
    dim: int
    cells: tuple[Cell, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "cells", tuple(self.cells))
        for c in self.cells:
            if self.dim == 1 and isinstance(c, Slab):
                raise ValidationError("slab cell in a 1D region")
            if self.dim == 2 and not isinstance(c, Slab):
                raise ValidationError("non-slab cell in a 2D region")

    def is_structurally_empty(self) -> bool:
        return not self.cells


def empty_region(dim: int) -> PLRegion:
    return PLRegion(dim, ())


def line_region(*segs: Seg) -> PLRegion:
    return PLRegion(1, tuple(segs))


# ---------------------------------------------------------------------------
# Line atomization
# ---------------------------------------------------------------------------

def _line_atoms(criticals: Sequence[Fraction]) -> list[tuple]:
    crit = sorted(set(criticals))
    if not crit:
        return [("iv", NEG_INF, INF)]
    atoms: list[tuple] = [("iv", NEG_INF, crit[0])]
    for i, c in enumerate(crit):
        atoms.append(("pt", c))
        nxt = crit[i + 1] if i + 1 < len(crit) else INF
        atoms.append(("iv", c, nxt))
    return atoms


def _atom_rep(atom: tuple) -> Fraction:
    if atom[0] == "pt":
        return atom[1]
    lo, hi = atom[1], atom[2]
    if is_finite(lo) and is_finite(hi):
        return (lo + hi) / 2
    if is_finite(lo):
        return lo + 1
    if is_finite(hi):
        return hi - 1
    return Fraction(0)


def line_cells_from_predicate(
    criticals: Iterable[Fraction], pred: Callable[[Fraction], bool]
) -> tuple[Seg, ...]:
    """The subset {x : pred(x)} as segments, assuming pred is constant between
    consecutive critical coordinates."""
    atoms = _line_atoms(list(criticals))
    included = [pred(_atom_rep(a)) for a in atoms]
    return _coalesce_line(atoms, included)


def _coalesce_line(atoms: list[tuple], included: list[bool]) -> tuple[Seg, ...]:
    segs: list[Seg] = []
    i = 0
    n = len(atoms)
    while i < n:
        if not included[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and included[j + 1]:
            j += 1
        first, last = atoms[i], atoms[j]
        if first[0] == "pt":
            lo, lo_closed = first[1], True
        else:
            lo, lo_closed = first[1], False
        if last[0] == "pt":
            hi, hi_closed = last[1], True
        else:
            hi, hi_closed = last[2], False
        segs.append(Seg(lo, hi, lo_closed, hi_closed))
        i = j + 1
    return tuple(segs)


# ---------------------------------------------------------------------------
# Circle atomization
# ---------------------------------------------------------------------------

def _circle_atoms(L: Fraction, criticals: Sequence[Fraction]) -> list[tuple]:
    crit = sorted({fr(c) % L for c in criticals})
    if not crit:
        return [("full",)]
    atoms: list[tuple] = []
    k = len(crit)
    for i, c in enumerate(crit):
        atoms.append(("pt", c))
        nxt = crit[(i + 1) % k]
        span = (nxt - c) % L
        if span == 0:
            span = L  # single critical point: the rest of the circle
        atoms.append(("gap", c, span))
    return atoms


def _circle_atom_rep(L: Fraction, atom: tuple) -> Fraction:
    if atom[0] == "pt":
        return atom[1]
    if atom[0] == "full":
        return Fraction(0)
    c, span = atom[1], atom[2]
    return (c + span / 2) % L


def circle_cells_from_predicate(
    circle: int, L, criticals: Iterable[Fraction], pred: Callable[[Fraction], bool]
) -> tuple[Cell, ...]:
    L = fr(L)
    atoms = _circle_atoms(L, list(criticals))
    if atoms == [("full",)]:
        return (CircleCell(circle, L),) if pred(Fraction(0)) else ()
    included = [pred(_circle_atom_rep(L, a)) for a in atoms]
    if all(included):
        return (CircleCell(circle, L),)
    if not any(included):
        return ()
    # rotate so the walk starts just after an excluded atom
    n = len(atoms)
    start = next(i for i in range(n) if not included[i])
    order = [(start + 1 + t) % n for t in range(n - 1)]
    cells: list[Cell] = []
    t = 0
    while t < len(order):
        idx = order[t]
        if not included[idx]:
            t += 1
            continue
        u = t
        while u + 1 < len(order) and included[order[u + 1]]:
            u += 1
        first, last = atoms[order[t]], atoms[order[u]]
        if first[0] == "pt":
            a, ac = first[1], True
        else:
            a, ac = first[1], False
        if last[0] == "pt":
            b, bc = last[1], True
        else:
            b, bc = (last[1] + last[2]) % L, False
        if a == b and not (ac and bc):
            # Full wrap minus the single excluded point: split in two,
            # since an arc with equal open endpoints is not representable.
            m = (a + L / 2) % L
            cells.append(Arc(circle, L, a, m, ac, True))
            cells.append(Arc(circle, L, m, b, False, bc))
        else:
            cells.append(Arc(circle, L, a, b, ac, bc))
        t = u + 1
    return tuple(cells)


# ---------------------------------------------------------------------------
# Joint refinement of regions
# ---------------------------------------------------------------------------

def _split_1d(cells: Iterable[Cell]):
    line: list[Seg] = []
    circ: dict[tuple[int, Fraction], list[Cell]] = {}
    for c in cells:
        if isinstance(c, Seg):
            line.append(c)
        else:
            key = (c.circle, c.circumference)
            circ.setdefault(key, []).append(c)
    return line, circ


def _refine_1d(regions: Sequence[PLRegion]):
    """Yield (universe, atom, rep, memberships) over the joint refinement of
    any number of 1D regions.  universe is ("line",) or ("circle", idx, L)."""
    per = [_split_1d(r.cells) for r in regions]
    line_crit: list[Fraction] = []
    for line, _ in per:
        for s in line:
            if is_finite(s.lo):
                line_crit.append(s.lo)
            if is_finite(s.hi):
                line_crit.append(s.hi)
    for atom in _line_atoms(line_crit):
        rep = _atom_rep(atom)
        mems = tuple(any(s.contains(rep) for s in line) for line, _ in per)
        yield ("line",), atom, rep, mems
    keys = sorted({k for _, circ in per for k in circ})
    for key in keys:
        idx, L = key
        crit: list[Fraction] = []
        for _, circ in per:
            for c in circ.get(key, []):
                if isinstance(c, Arc):
                    crit.append(c.start)
                    crit.append(c.end)
        for atom in _circle_atoms(L, crit):
            rep = _circle_atom_rep(L, atom)
            mems = tuple(
                any(c.contains(rep) for c in circ.get(key, [])) for _, circ in per
            )
            yield ("circle", idx, L), atom, rep, mems


def _rebuild_1d(universe_atoms: dict) -> tuple[Cell, ...]:
    """universe_atoms: universe -> (atoms, included list)."""
    cells: list[Cell] = []
    for universe, (atoms, included) in universe_atoms.items():
        if universe[0] == "line":
            cells.extend(_coalesce_line(atoms, included))
        else:
            _, idx, L = universe
            if atoms == [("full",)]:
                if included[0]:
                    cells.append(CircleCell(idx, L))
                continue
            incl_map = dict(zip(range(len(atoms)), included))
            if all(included):
                cells.append(CircleCell(idx, L))
                continue
            if not any(included):
                continue
            n = len(atoms)
            start = next(i for i in range(n) if not included[i])
            order = [(start + 1 + t) % n for t in range(n - 1)]
            t = 0
            while t < len(order):
                if not incl_map[order[t]]:
                    t += 1
                    continue
                u = t
                while u + 1 < len(order) and incl_map[order[u + 1]]:
                    u += 1
                first, last = atoms[order[t]], atoms[order[u]]
                a, ac = (first[1], True) if first[0] == "pt" else (first[1], False)
                b, bc = (
                    (last[1], True)
                    if last[0] == "pt"
                    else ((last[1] + last[2]) % L, False)
                )
                if a == b and not (ac and bc):
                    # Full wrap minus the single excluded point: split in
                    # two, since equal open endpoints are not representable.
                    m = (a + L / 2) % L
                    cells.append(Arc(idx, L, a, m, ac, True))
                    cells.append(Arc(idx, L, m, b, False, bc))
                else:
                    cells.append(Arc(idx, L, a, b, ac, bc))
                t = u + 1
    return tuple(cells)


# ----- 2D refinement -------------------------------------------------------

def _bound_key(bound, atom, rep) -> tuple:
    """Canonical (slope, intercept) of a finite bound on an x-atom."""
    if atom[0] == "pt":
        return (Fraction(0), bound(atom[1]))
    m, c = bound.piece_at(rep)
    return (m, c)


def _slab_covers_atom(slab: Slab, atom: tuple) -> bool:
    if atom[0] == "pt":
        return slab.covers_x(atom[1])
    lo, hi = atom[1], atom[2]
    return slab.x_lo <= lo and hi <= slab.x_hi


class _XAtomView:
    """All y-structure of a family of 2D regions over one x-atom."""

    def __init__(self, regions: Sequence[PLRegion], atom: tuple, rep: Fraction):
        self.atom = atom
        self.rep = rep
        self.intervals_per_region: list[list[tuple]] = []
        keyset = {}
        for r in regions:
            ivs = []
            for slab in r.cells:
                if not _slab_covers_atom(slab, atom):
                    continue
                kl = (
                    None
                    if isinstance(slab.lower, float)
                    else _bound_key(slab.lower, atom, rep)
                )
                ku = (
                    None
                    if isinstance(slab.upper, float)
                    else _bound_key(slab.upper, atom, rep)
                )
                if kl is not None:
                    keyset[kl] = True
                if ku is not None:
                    keyset[ku] = True
                ivs.append((kl, ku, slab.lower_closed, slab.upper_closed))
            self.intervals_per_region.append(ivs)
        self.keys = sorted(keyset, key=lambda mc: mc[0] * rep + mc[1])
        self.key_index = {k: i for i, k in enumerate(self.keys)}
        if self.keys:
            self.y_atoms: list[tuple] = [("low",)]
            for i in range(len(self.keys)):
                self.y_atoms.append(("m", i))
                if i + 1 < len(self.keys):
                    self.y_atoms.append(("b", i))
            self.y_atoms.append(("high",))
        else:
            self.y_atoms = [("all",)]

    def _in_interval(self, y_atom: tuple, iv: tuple) -> bool:
        kl, ku, loc, upc = iv
        li = None if kl is None else self.key_index[kl]
        ui = None if ku is None else self.key_index[ku]
        kind = y_atom[0]
        if kind == "all":
            return kl is None and ku is None
        if kind == "low":
            return kl is None
        if kind == "high":
            return ku is None
        if kind == "m":
            k = y_atom[1]
            lo_ok = kl is None or li < k or (li == k and loc)
            hi_ok = ku is None or k < ui or (ui == k and upc)
            return lo_ok and hi_ok
        k = y_atom[1]  # band between keys k and k+1
        lo_ok = kl is None or li <= k
        hi_ok = ku is None or ui >= k + 1
        return lo_ok and hi_ok

    def membership(self, region_index: int, y_atom: tuple) -> bool:
        return any(
            self._in_interval(y_atom, iv)
            for iv in self.intervals_per_region[region_index]
        )

    def y_rep(self, y_atom: tuple) -> Fraction:
        vals = [m * self.rep + c for (m, c) in self.keys]
        kind = y_atom[0]
        if kind == "all":
            return Fraction(0)
        if kind == "low":
            return vals[0] - 1
        if kind == "high":
            return vals[-1] + 1
        if kind == "m":
            return vals[y_atom[1]]
        return (vals[y_atom[1]] + vals[y_atom[1] + 1]) / 2

    def build_cells(self, included: list[bool]) -> list[Slab]:
        atom = self.atom
        if atom[0] == "pt":
            x_lo = x_hi = atom[1]
            xlc = xhc = True
        else:
            x_lo, x_hi, xlc, xhc = atom[1], atom[2], False, False
        out: list[Slab] = []
        i = 0
        n = len(self.y_atoms)

        def bound_fn(key_idx: int) -> PLFunc:
            m, c = self.keys[key_idx]
            return PLFunc.affine(m, c)

        while i < n:
            if not included[i]:
                i += 1
                continue
            j = i
            while j + 1 < n and included[j + 1]:
                j += 1
            first, last = self.y_atoms[i], self.y_atoms[j]
            if first[0] in ("low", "all"):
                lower, loc = NEG_INF, False
            elif first[0] == "m":
                lower, loc = bound_fn(first[1]), True
            elif first[0] == "b":
                lower, loc = bound_fn(first[1]), False
            else:  # a run of just the "high" tail
                lower, loc = bound_fn(len(self.keys) - 1), False
            if last[0] in ("high", "all"):
                upper, upc = INF, False
            elif last[0] == "m":
                upper, upc = bound_fn(last[1]), True
            elif last[0] == "b":
                upper, upc = bound_fn(last[1] + 1), False
            else:  # a run of just the "low" tail
                upper, upc = bound_fn(0), False
            out.append(Slab(x_lo, x_hi, xlc, xhc, lower, upper, loc, upc))
            i = j + 1
        return out


def _refine_2d(regions: Sequence[PLRegion]) -> list[_XAtomView]:
    xs: set[Fraction] = set()
    bounds: list[PLFunc] = []
    seen: set[PLFunc] = set()
    for r in regions:
        for slab in r.cells:
            if is_finite(slab.x_lo):
                xs.add(slab.x_lo)
            if is_finite(slab.x_hi):
                xs.add(slab.x_hi)
            for b in (slab.lower, slab.upper):
                if isinstance(b, PLFunc):
                    xs.update(b.breakpoints)
                    if b not in seen:
                        seen.add(b)
                        bounds.append(b)
    for f, g in itertools.combinations(bounds, 2):
        xs.update(plfunc_crossings(f, g))
    return [
        _XAtomView(regions, atom, _atom_rep(atom)) for atom in _line_atoms(xs)
    ]


# ---------------------------------------------------------------------------
# Region operations
# ---------------------------------------------------------------------------

def _check_same_dim(a: PLRegion, b: PLRegion) -> None:
    if a.dim != b.dim:
        raise ArgumentError("region dimension mismatch")


def _combine_regions(a: PLRegion, b: PLRegion, combine: Callable[[bool, bool], bool]) -> PLRegion:
    _check_same_dim(a, b)
    if a.dim == 1:
        universe_atoms: dict = {}
        for universe, atom, _, mems in _refine_1d([a, b]):
            atoms, incl = universe_atoms.setdefault(universe, ([], []))
            atoms.append(atom)
            incl.append(combine(mems[0], mems[1]))
        return PLRegion(1, _rebuild_1d(universe_atoms))
    cells: list[Slab] = []
    for view in _refine_2d([a, b]):
        included = [
            combine(view.membership(0, ya), view.membership(1, ya))
            for ya in view.y_atoms
        ]
        cells.extend(view.build_cells(included))
    return PLRegion(2, tuple(cells))


def region_boolean(op: str, a: PLRegion, b: PLRegion) -> PLRegion:
    if op == "intersect":
        return _combine_regions(a, b, lambda x, y: x and y)
    if op == "union":
        return _combine_regions(a, b, lambda x, y: x or y)
    raise ArgumentError(f"unknown boolean op {op!r}")


def region_difference(a: PLRegion, b: PLRegion) -> PLRegion:
    return _combine_regions(a, b, lambda x, y: x and not y)


def region_subset(a: PLRegion, b: PLRegion) -> bool:
    _check_same_dim(a, b)
    if a.dim == 1:
        return all(
            (not mems[0]) or mems[1] for _, _, _, mems in _refine_1d([a, b])
        )
    for view in _refine_2d([a, b]):
        for ya in view.y_atoms:
            if view.membership(0, ya) and not view.membership(1, ya):
                return False
    return True


def region_equal(a: PLRegion, b: PLRegion) -> bool:
    _check_same_dim(a, b)
    if a.dim == 1:
        return all(mems[0] == mems[1] for _, _, _, mems in _refine_1d([a, b]))
    for view in _refine_2d([a, b]):
        for ya in view.y_atoms:
            if view.membership(0, ya) != view.membership(1, ya):
                return False
    return True


def region_is_empty(a: PLRegion) -> bool:
    if a.dim == 1:
        return all(not mems[0] for _, _, _, mems in _refine_1d([a]))
    for view in _refine_2d([a]):
        for ya in view.y_atoms:
            if view.membership(0, ya):
                return False
    return True


def region_normalize(a: PLRegion) -> PLRegion:
    """Re-express through the refinement (coalescing adjacent 1D atoms)."""
    if a.dim == 1:
        universe_atoms: dict = {}
        for universe, atom, _, mems in _refine_1d([a]):
            atoms, incl = universe_atoms.setdefault(universe, ([], []))
            atoms.append(atom)
            incl.append(mems[0])
        return PLRegion(1, _rebuild_1d(universe_atoms))
    cells: list[Slab] = []
    for view in _refine_2d([a]):
        included = [view.membership(0, ya) for ya in view.y_atoms]
        cells.extend(view.build_cells(included))
    return PLRegion(2, tuple(cells))


def _slab_is_empty(s: Slab) -> bool:
    if isinstance(s.lower, float) or isinstance(s.upper, float):
        return False
    diff = s.upper.sub(s.lower)
    dmax = plfunc_max_on_closed(diff, s.x_lo, s.x_hi)
    if dmax == INF or dmax > 0:
        return False
    if dmax < 0:
        raise ValidationError("slab with lower bound above upper bound")
    return not (s.lower_closed and s.upper_closed)


def _cell_closure(c: Cell) -> Cell:
    if isinstance(c, Seg):
        return Seg(c.lo, c.hi, is_finite(c.lo), is_finite(c.hi))
    if isinstance(c, Arc):
        return Arc(c.circle, c.circumference, c.start, c.end, True, True)
    if isinstance(c, CircleCell):
        return c
    return Slab(
        c.x_lo,
        c.x_hi,
        is_finite(c.x_lo),
        is_finite(c.x_hi),
        c.lower,
        c.upper,
        isinstance(c.lower, PLFunc),
        isinstance(c.upper, PLFunc),
    )


def region_closure(a: PLRegion) -> PLRegion:
    kept = []
    for c in a.cells:
        if isinstance(c, Slab) and _slab_is_empty(c):
            continue
        kept.append(_cell_closure(c))
    return PLRegion(a.dim, tuple(kept))


def region_bounded(a: PLRegion) -> bool:
    for c in a.cells:
        if isinstance(c, Seg):
            if not (is_finite(c.lo) and is_finite(c.hi)):
                return False
        elif isinstance(c, Slab):
            if _slab_is_empty(c):
                continue
            if not (is_finite(c.x_lo) and is_finite(c.x_hi)):
                return False
            if isinstance(c.lower, float) or isinstance(c.upper, float):
                return False
    return True


def region_contains_point(a: PLRegion, point) -> bool:
    """point: a rational (line), ("circle", idx, theta), or an (x, y) pair."""
    if a.dim == 2:
        x, y = point
        return any(c.contains(fr(x), fr(y)) for c in a.cells)
    if isinstance(point, tuple) and point and point[0] == "circle":
        _, idx, theta = point
        return any(
            not isinstance(c, Seg) and c.circle == idx and c.contains(theta)
            for c in a.cells
        )
    x = fr(point)
    return any(isinstance(c, Seg) and c.contains(x) for c in a.cells)


def region_bbox(a: PLRegion):
    """((x0, x1), (y0, y1)) over finite data; None coordinates where the
    region is unbounded or empty in that direction.  Circle cells use the
    fundamental domain [0, L]."""
    xs: list[Fraction] = []
    ys: list[Fraction] = []
    unbounded_x = unbounded_y = False
    for c in a.cells:
        if isinstance(c, Seg):
            if is_finite(c.lo):
                xs.append(c.lo)
            else:
                unbounded_x = True
            if is_finite(c.hi):
                xs.append(c.hi)
            else:
                unbounded_x = True
        elif isinstance(c, (Arc, CircleCell)):
            xs.extend([Fraction(0), c.circumference])
        elif isinstance(c, Slab):
            if _slab_is_empty(c):
                continue
            if is_finite(c.x_lo) and is_finite(c.x_hi):
                xs.extend([c.x_lo, c.x_hi])
                for b, side in ((c.lower, "lo"), (c.upper, "hi")):
                    if isinstance(b, PLFunc):
                        mn = plfunc_min_on_closed(b, c.x_lo, c.x_hi)
                        mx = plfunc_max_on_closed(b, c.x_lo, c.x_hi)
                        ys.extend([mn, mx])
                    else:
                        unbounded_y = True
            else:
                unbounded_x = True
    xr = None if (unbounded_x or not xs) else (min(xs), max(xs))
    if a.dim == 1:
        return (xr, None)
    yr = None if (unbounded_y or not ys) else (min(ys), max(ys))
    return (xr, yr)


def region_components(a: PLRegion) -> list[PLRegion]:
    """Split a region into connected pieces.

    Cells whose closures meet are glued; for closed regions this is exactly
    the point-set decomposition into connected components (cells are
    connected, and two closed connected sets meeting have connected union).
    """
    norm = region_normalize(a)
    cells = list(norm.cells)
    n = len(cells)
    closures = [region_closure(PLRegion(a.dim, (c,))) for c in cells]
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if find(i) == find(j):
                continue
            meet = region_boolean("intersect", closures[i], closures[j])
            if not region_is_empty(meet):
                parent[find(i)] = find(j)
    groups: dict[int, list] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(cells[i])
    return [PLRegion(a.dim, tuple(g))
            for _root, g in sorted(groups.items())]


def region_sample_point(a: PLRegion):
    """A representative point of the region, or None if it is empty.

    1D points come back as a rational (line) or ("circle", idx, theta);
    2D points as an (x, y) pair of rationals.
    """
    if a.dim == 1:
        for universe, _atom, rep, mems in _refine_1d([a]):
            if mems[0]:
                if universe[0] == "line":
                    return rep
                return ("circle", universe[1], rep)
        return None
    for view in _refine_2d([a]):
        for ya in view.y_atoms:
            if view.membership(0, ya):
                return (view.rep, view.y_rep(ya))
    return None


# ---------------------------------------------------------------------------
# Ambient manifolds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Ambient1D:
    """A disjoint union of open intervals of the line and circles."""

    intervals: tuple[tuple[End, End], ...]
    circles: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        ivs = []
        for lo, hi in self.intervals:
            lo = lo if not is_finite(lo) else fr(lo)
            hi = hi if not is_finite(hi) else fr(hi)
            if lo >= hi:
                raise ValidationError("ambient interval endpoints out of order")
            ivs.append((lo, hi))
        ivs.sort(key=lambda p: p[0])
        for (a, b), (c, d) in zip(ivs, ivs[1:]):
            if b > c:
                raise ValidationError("ambient intervals must be pairwise disjoint")
        object.__setattr__(self, "intervals", tuple(ivs))
        object.__setattr__(self, "circles", tuple(fr(L) for L in self.circles))
        if any(L <= 0 for L in self.circles):
            raise ValidationError("circumferences must be positive")

    @property
    def dim(self) -> int:
        return 1

    def n_components(self) -> int:
        return len(self.intervals) + len(self.circles)

    def component_kind(self, k: int):
        if k < len(self.intervals):
            return ("interval", self.intervals[k])
        return ("circle", self.circles[k - len(self.intervals)])

    def component_of_line_point(self, x) -> int:
        x = fr(x)
        for k, (lo, hi) in enumerate(self.intervals):
            if lo < x < hi:
                return k
        raise ArgumentError(f"point {x} lies outside the ambient")


@dataclass(frozen=True)
class Ambient2D:
    """A union of open axis boxes (x0, x1) x (y0, y1); boxes may overlap, and
    overlapping boxes belong to one connected component."""

    boxes: tuple[tuple[End, End, End, End], ...]

    def __post_init__(self) -> None:
        normed = []
        for x0, x1, y0, y1 in self.boxes:
            box = tuple(v if not is_finite(v) else fr(v) for v in (x0, x1, y0, y1))
            if box[0] >= box[1] or box[2] >= box[3]:
                raise ValidationError("empty ambient box")
            normed.append(box)
        object.__setattr__(self, "boxes", tuple(normed))

    @property
    def dim(self) -> int:
        return 2

    def _box_components(self) -> list[list[int]]:
        n = len(self.boxes)
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(n):
            for j in range(i + 1, n):
                a, b = self.boxes[i], self.boxes[j]
                if max(a[0], b[0]) < min(a[1], b[1]) and max(a[2], b[2]) < min(
                    a[3], b[3]
                ):
                    parent[find(i)] = find(j)
        groups: dict[int, list[int]] = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        return sorted(groups.values())

    def n_components(self) -> int:
        return len(self._box_components())

    def component_boxes(self, k: int) -> tuple:
        return tuple(self.boxes[i] for i in self._box_components()[k])

    def component_of_point(self, x, y) -> int:
        x, y = fr(x), fr(y)
        for k, idxs in enumerate(self._box_components()):
            for i in idxs:
                x0, x1, y0, y1 = self.boxes[i]
                if x0 < x < x1 and y0 < y < y1:
                    return k
        raise ArgumentError(f"point ({x}, {y}) lies outside the ambient")

    def contains_point(self, x, y) -> bool:
        x, y = fr(x), fr(y)
        return any(
            x0 < x < x1 and y0 < y < y1 for x0, x1, y0, y1 in self.boxes
        )


Ambient = Union[Ambient1D, Ambient2D]


def _box_slab(box) -> Slab:
    x0, x1, y0, y1 = box
    lower = NEG_INF if not is_finite(y0) else PLFunc.constant(y0)
    upper = INF if not is_finite(y1) else PLFunc.constant(y1)
    return Slab(x0, x1, False, False, lower, upper, False, False)


def ambient_region(m: Ambient) -> PLRegion:
    if isinstance(m, Ambient1D):
        cells: list[Cell] = [
            Seg(lo, hi, False, False) for lo, hi in m.intervals
        ]
        cells.extend(CircleCell(i, L) for i, L in enumerate(m.circles))
        return PLRegion(1, tuple(cells))
    return PLRegion(2, tuple(_box_slab(b) for b in m.boxes))


def component_region(m: Ambient, k: int) -> PLRegion:
    if isinstance(m, Ambient1D):
        kind, data = m.component_kind(k)
        if kind == "interval":
            return PLRegion(1, (Seg(data[0], data[1], False, False),))
        return PLRegion(1, (CircleCell(k - len(m.intervals), data),))
    return PLRegion(2, tuple(_box_slab(b) for b in m.component_boxes(k)))


@dataclass(frozen=True)
class AmbientComponent:
    """One connected component of an ambient, with a membership test."""

    index: int
    kind: str  # "interval" | "circle" | "boxes"
    data: tuple
    region: PLRegion

    def contains(self, point) -> bool:
        if self.kind == "boxes":
            return region_contains_point(self.region, point)
        if self.kind == "circle":
            return True  # any angle mod the circumference lies on the circle
        return region_contains_point(self.region, point)


def connected_components(m: Ambient) -> list[AmbientComponent]:
    out = []
    if isinstance(m, Ambient1D):
        for k in range(m.n_components()):
            kind, data = m.component_kind(k)
            out.append(
                AmbientComponent(
                    k,
                    kind,
                    data if kind == "circle" else tuple(data),
                    component_region(m, k),
                )
            )
        return out
    for k in range(m.n_components()):
        out.append(
            AmbientComponent(k, "boxes", m.component_boxes(k), component_region(m, k))
        )
    return out


def region_is_compact_in(a: PLRegion, m: Ambient) -> bool:
    amb = ambient_region(m)
    if not region_subset(a, amb):
        raise ArgumentError("region is not contained in the ambient")
    if not region_bounded(a):
        return False
    return region_subset(region_closure(a), amb)


# ---------------------------------------------------------------------------
# PL function comparison over a 1D domain
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrderVerdict:
    kind: str  # "lt" (everywhere <), "le" (everywhere <=), "incomparable"
    witness: Union[Fraction, None] = None


def _sublevel_region(h: PLFunc, strict: bool) -> PLRegion:
    """{x : h(x) < 0} (strict) or {x : h(x) <= 0}."""
    crit = set(plfunc_zeros(h)) | set(h.breakpoints)
    pred = (lambda x: h(x) < 0) if strict else (lambda x: h(x) <= 0)
    return PLRegion(1, line_cells_from_predicate(crit, pred))


def plfunc_order(f: PLFunc, g: PLFunc, domain: PLRegion) -> OrderVerdict:
    """Compare f and g over a 1D line domain: everywhere <, everywhere <=, or
    incomparable with a rational witness where f > g."""
    if domain.dim != 1:
        raise ArgumentError("ordering domains are 1D")
    if any(not isinstance(c, Seg) for c in domain.cells):
        raise ArgumentError("ordering domains live on the line, not circles")
    if region_is_empty(domain):
        raise ArgumentError("ordering domain is empty")
    h = g.sub(f)  # f <= g iff h >= 0
    neg = region_boolean("intersect", _sublevel_region(h, True), domain)
    if not region_is_empty(neg):
        witness = None
        for universe, atom, rep, mems in _refine_1d([neg]):
            if mems[0]:
                witness = rep
                break
        return OrderVerdict("incomparable", witness)
    nonpos = region_boolean("intersect", _sublevel_region(h, False), domain)
    if region_is_empty(nonpos):
        return OrderVerdict("lt")
    return OrderVerdict("le")


def plfunc_is_positive_on(f: PLFunc, domain: PLRegion) -> bool:
    """f > 0 at every point of a 1D line domain."""
    nonpos = region_boolean("intersect", _sublevel_region(f, False), domain)
    return region_is_empty(nonpos)


def strict_between_cells(
    f: PLFunc, y_lo: End, y_hi: End, window: PLRegion
) -> tuple[Seg, ...]:
    """{x in window : y_lo < f(x) < y_hi} as line segments."""
    crit = set(f.breakpoints)
    if is_finite(y_lo):
        crit |= set(plfunc_zeros(f.add_constant(-fr(y_lo))))
    if is_finite(y_hi):
        crit |= set(plfunc_zeros(f.add_constant(-fr(y_hi))))
    for c in window.cells:
        if isinstance(c, Seg):
            if is_finite(c.lo):
                crit.add(c.lo)
            if is_finite(c.hi):
                crit.add(c.hi)

    def pred(x: Fraction) -> bool:
        if not region_contains_point(window, x):
            return False
        v = f(x)
        return (y_lo < v if is_finite(y_lo) else True) and (
            v < y_hi if is_finite(y_hi) else True
        )

    return line_cells_from_predicate(crit, pred)
