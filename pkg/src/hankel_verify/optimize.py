"""Global maximization of the surrogate envelopes over the closed cuboid.

The search is a dense boundary-inclusive lattice followed by shrinking-box
refinement.  It is run separately on the open cuboid, on each of the six
faces and on each of the twelve edges, so that the report carries a
face/edge table alongside the global maximum.  This is a high-confidence
numerical check, not a certified enclosure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .bounds import CuboidPoint, h3, sharp_bound, surrogate_qstar, surrogate_star
from .classes import ClassTag, CoefficientVector, extremal
from .errors import BoundViolation, InvalidParameter, SharpnessGap

AXES = ("p", "x", "y")
MIN_TOLERANCE = 1e-9
BOUNDARY_TOLERANCE = 1e-12
REFINE_SAMPLES = 9
DEFAULT_RESOLUTION = 64
DEFAULT_ROUNDS = 30


@dataclass(frozen=True)
class Box:
    """Axis-aligned box in ``(p, x, y)``; an axis with ``lo == hi`` is frozen."""

    lo: tuple
    hi: tuple

    def fix(self, axis: str, value: float) -> "Box":
        i = AXES.index(axis)
        lo, hi = list(self.lo), list(self.hi)
        lo[i] = hi[i] = float(value)
        return Box(tuple(lo), tuple(hi))

    @property
    def extent(self) -> np.ndarray:
        return np.asarray(self.hi, dtype=float) - np.asarray(self.lo, dtype=float)

    def clip(self, point) -> tuple:
        return tuple(float(min(max(v, l), h)) for v, l, h in zip(point, self.lo, self.hi))


CUBOID = Box((0.0, 0.0, 0.0), (2.0, 1.0, 1.0))


@dataclass(frozen=True)
class ScalarField:
    """A deterministic function on the cuboid, vectorized over ``(p, x, y)`` arrays."""

    evaluator: Callable
    label: str

    def __call__(self, p, x, y):
        return self.evaluator(p, x, y)


def star_field() -> ScalarField:
    return ScalarField(surrogate_star, "S")


def qstar_field(q: float) -> ScalarField:
    return ScalarField(lambda p, x, y: surrogate_qstar(p, x, y, q), f"T(q={q!r})")


def field_for(tag: ClassTag) -> ScalarField:
    return star_field() if tag.is_star else qstar_field(tag.q)


class Maximum(NamedTuple):
    value: float
    point: CuboidPoint


def _axis_points(lo: float, hi: float, n: int) -> np.ndarray:
    if hi <= lo:
        return np.array([lo])
    return np.linspace(lo, hi, n)


def _lattice_max(fld: ScalarField, axes: list) -> tuple[float, tuple, np.ndarray]:
    grids = np.meshgrid(*axes, indexing="ij")
    values = np.broadcast_to(np.asarray(fld(*grids), dtype=float), grids[0].shape)
    # first occurrence in C order is the lexicographically smallest (p, x, y)
    k = int(np.argmax(values))
    idx = np.unravel_index(k, values.shape)
    point = tuple(float(a[i]) for a, i in zip(axes, idx))
    return float(values[idx]), point, values


def grid_max(fld: ScalarField, resolution: int = DEFAULT_RESOLUTION, box: Box = CUBOID) -> Maximum:
    """Maximum over the uniform lattice with ``resolution + 1`` points per free axis."""
    if resolution < 2:
        raise InvalidParameter("resolution must be >= 2")
    axes = [_axis_points(l, h, resolution + 1) for l, h in zip(box.lo, box.hi)]
    value, point, _ = _lattice_max(fld, axes)
    return Maximum(value, CuboidPoint(*point))


def _refine(fld, start, rounds, box, halfwidth, trace):
    best_pt = box.clip(tuple(start))
    best = float(fld(*best_pt))
    hw = box.extent / 8.0 if halfwidth is None else np.asarray(halfwidth, dtype=float) * (box.extent > 0)
    values = None
    for _ in range(rounds):
        axes = [_axis_points(max(l, c - w), min(h, c + w), REFINE_SAMPLES)
                for c, w, l, h in zip(best_pt, hw, box.lo, box.hi)]
        value, point, values = _lattice_max(fld, axes)
        if value > best:
            best, best_pt = value, point
        if trace is not None:
            assert not trace or best >= trace[-1], "refinement incumbent decreased"
            trace.append(best)
        hw = hw / 2.0
    return best, best_pt, hw


def refine_max(fld: ScalarField, start, shrink_rounds: int = DEFAULT_ROUNDS, box: Box = CUBOID,
               halfwidth=None, trace: Optional[list] = None) -> Maximum:
    """Shrinking-box local search around ``start``.

    Each round samples a ``9 x 9 x 9`` lattice (fewer along frozen axes) on
    the box of half-width ``hw`` centred at the incumbent, clipped to ``box``,
    then halves ``hw``.  The incumbent only moves on strict improvement, so
    the value is non-decreasing; pass a list as ``trace`` to record it.
    ``halfwidth`` defaults to one eighth of the box extent.
    """
    best, pt, _ = _refine(fld, start, shrink_rounds, box, halfwidth, trace)
    return Maximum(best, CuboidPoint(*pt))


def lipschitz_tolerance(fld: ScalarField, point, halfwidth, box: Box = CUBOID) -> float:
    """Error estimate for a maximum located to within ``halfwidth`` per axis.

    The largest finite-difference jump between neighbouring samples of a
    ``9**3`` lattice on the final sub-box bounds how much higher the field can
    rise inside one lattice cell; the result is floored at 1e-9.
    """
    axes = [_axis_points(max(l, c - w), min(h, c + w), REFINE_SAMPLES)
            for c, w, l, h in zip(point, halfwidth, box.lo, box.hi)]
    grids = np.meshgrid(*axes, indexing="ij")
    values = np.broadcast_to(np.asarray(fld(*grids), dtype=float), grids[0].shape)
    est = 0.0
    for i in range(values.ndim):
        if values.shape[i] > 1:
            est += 0.5 * float(np.max(np.abs(np.diff(values, axis=i))))
    return max(est, MIN_TOLERANCE)


class ScanEntry(NamedTuple):
    id: str
    value: float
    point: CuboidPoint


def _fmt(v: float) -> str:
    return f"{v:g}"


FACES = [(axis, v) for axis, hi in zip(AXES, CUBOID.hi) for v in (0.0, hi)]
EDGES = [
    ((a, va), (b, vb))
    for i, (a, ha) in enumerate(zip(AXES, CUBOID.hi))
    for (b, hb) in list(zip(AXES, CUBOID.hi))[i + 1 :]
    for va in (0.0, ha)
    for vb in (0.0, hb)
]


def face_id(axis: str, value: float) -> str:
    return f"{axis}={_fmt(value)}"


def edge_id(fixed) -> str:
    return ",".join(face_id(a, v) for a, v in fixed)


def _scan_box(fld, box, resolution, rounds) -> Maximum:
    g = grid_max(fld, resolution, box)
    r = refine_max(fld, g.point, rounds, box)
    return r if r.value > g.value else g


def _better(a: ScanEntry | Maximum, b: ScanEntry | Maximum) -> bool:
    """True when ``a`` beats ``b``: larger value, ties to the smaller point."""
    if a.value != b.value:
        return a.value > b.value
    return tuple(a.point) < tuple(b.point)


def edge_scan(fld: ScalarField, resolution: int = DEFAULT_RESOLUTION,
              rounds: int = DEFAULT_ROUNDS) -> list[ScanEntry]:
    """Maximum on each of the 12 edges of the cuboid (vertices included)."""
    out = []
    for fixed in EDGES:
        box = CUBOID
        for axis, v in fixed:
            box = box.fix(axis, v)
        m = _scan_box(fld, box, resolution, rounds)
        out.append(ScanEntry(edge_id(fixed), m.value, m.point))
    return out


def face_scan(fld: ScalarField, resolution: int = DEFAULT_RESOLUTION, rounds: int = DEFAULT_ROUNDS,
              edge_table: Optional[list] = None) -> list[ScanEntry]:
    """Maximum on each of the 6 closed faces.

    A face maximum also takes the maxima of its four bounding edges into
    account, so every face entry dominates the adjacent edge entries.
    """
    if edge_table is None:
        edge_table = edge_scan(fld, resolution, rounds)
    edges = dict((e.id, e) for e in edge_table)
    out = []
    for axis, v in FACES:
        m = _scan_box(fld, CUBOID.fix(axis, v), resolution, rounds)
        best = ScanEntry(face_id(axis, v), m.value, m.point)
        for fixed in EDGES:
            if (axis, v) in fixed and edge_id(fixed) in edges:
                e = edges[edge_id(fixed)]
                if _better(e, best):
                    best = ScanEntry(best.id, e.value, e.point)
        out.append(best)
    return out


class Stage(enum.Enum):
    INTERIOR = "interior"
    FACE = "face"
    EDGE = "edge"
    VERTEX = "vertex"


def stage_of(point: CuboidPoint) -> Stage:
    on = sum(
        min(abs(v - l), abs(h - v)) <= BOUNDARY_TOLERANCE
        for v, l, h in zip(point, CUBOID.lo, CUBOID.hi)
    )
    return [Stage.INTERIOR, Stage.FACE, Stage.EDGE, Stage.VERTEX][on]


@dataclass
class OptimizationReport:
    tag: ClassTag
    max_value: float
    argmax: CuboidPoint
    stage: Stage
    face_table: list
    edge_table: list
    grid_initial: int
    refinement_rounds: int
    tolerance_estimate: float
    bound_closed_form: float
    extremal_h3: float
    refinement_trace: list = field(default_factory=list)
    seeds: list = field(default_factory=list)

    @property
    def bound_gap(self) -> float:
        return self.max_value - self.bound_closed_form


def extremal_h3(tag: ClassTag) -> float:
    return abs(complex(h3(CoefficientVector.from_series(extremal(tag)))))


def verify_sharp_bound(tag: ClassTag, resolution: int = DEFAULT_RESOLUTION,
                       rounds: int = DEFAULT_ROUNDS, strict: bool = True) -> OptimizationReport:
    """Maximize the class surrogate over the cuboid and compare with the sharp bound.

    The global maximum is the best of the interior search and the face
    table (which already folds in the edge table).  With ``strict`` set,
    :class:`BoundViolation` is raised when the maximum exceeds the closed
    form by more than the tolerance estimate and :class:`SharpnessGap` when
    the extremal function's ``|H3(1)|`` misses the maximum by more than it;
    the report is attached to the exception as ``.report``.
    """
    fld = field_for(tag)
    trace: list = []
    g = grid_max(fld, resolution)
    interior = refine_max(fld, g.point, rounds, trace=trace)
    if _better(g, interior):
        interior = g
    edges = edge_scan(fld, resolution, rounds)
    faces = face_scan(fld, resolution, rounds, edge_table=edges)

    best = interior
    for f in faces:
        if _better(f, best):
            best = Maximum(f.value, f.point)

    final_hw = CUBOID.extent / 8.0 / 2.0**rounds
    tol = lipschitz_tolerance(fld, tuple(best.point), final_hw)
    report = OptimizationReport(
        tag=tag,
        max_value=best.value,
        argmax=best.point,
        stage=stage_of(best.point),
        face_table=faces,
        edge_table=edges,
        grid_initial=resolution,
        refinement_rounds=rounds,
        tolerance_estimate=tol,
        bound_closed_form=sharp_bound(tag),
        extremal_h3=extremal_h3(tag),
        refinement_trace=trace,
    )
    if strict:
        if report.max_value > report.bound_closed_form + tol:
            exc = BoundViolation(
                f"{tag.label}: numerical max {report.max_value!r} exceeds bound "
                f"{report.bound_closed_form!r} by more than {tol:.3g}"
            )
            exc.report = report
            raise exc
        if abs(report.extremal_h3 - report.max_value) > tol:
            exc = SharpnessGap(
                f"{tag.label}: extremal |H3(1)| = {report.extremal_h3!r} differs from max "
                f"{report.max_value!r} by more than {tol:.3g}"
            )
            exc.report = report
            raise exc
    return report


def grid_spacing(resolution: int) -> float:
    """Largest lattice spacing of the initial grid (the p-axis spacing)."""
    return float(max(CUBOID.extent) / resolution)


def distance_to_boundary(point: CuboidPoint) -> float:
    return min(min(v - l, h - v) for v, l, h in zip(point, CUBOID.lo, CUBOID.hi))


def with_q_sweep(qs, **kwargs) -> list[OptimizationReport]:
    return [verify_sharp_bound(ClassTag.qstar(q), **kwargs) for q in qs]

