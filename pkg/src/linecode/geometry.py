"""Affine lines over F_q, general position, and the configuration point family."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import GenerationError, NoIntersectionError, ParameterError
from .gfield import FieldElement, FieldSpec, Matrix, det

MAX_ATTEMPTS = 10_000


@dataclass(frozen=True)
class Point:
    x: FieldElement
    y: FieldElement

    @property
    def coords(self) -> tuple[int, int]:
        return (self.x.value, self.y.value)

    def __repr__(self) -> str:
        return f"Point{self.coords}"


@dataclass(frozen=True)
class Line:
    """The zero set of the linear form ``a*x + b*y + c``."""

    a: FieldElement
    b: FieldElement
    c: FieldElement

    def __post_init__(self):
        if not (self.a or self.b):
            raise ParameterError("a line needs (a, b) != (0, 0)")
        if not self.a.spec == self.b.spec == self.c.spec:
            raise ParameterError("line coefficients from different fields")

    @classmethod
    def from_ints(cls, spec: FieldSpec, a: int, b: int, c: int) -> "Line":
        return cls(spec.reduce(a), spec.reduce(b), spec.reduce(c))

    @property
    def spec(self) -> FieldSpec:
        return self.a.spec

    @property
    def coeffs(self) -> tuple[int, int, int]:
        return (self.a.value, self.b.value, self.c.value)

    def __call__(self, p: Point) -> FieldElement:
        return self.a * p.x + self.b * p.y + self.c

    def contains(self, p: Point) -> bool:
        return self(p).value == 0

    def direction(self) -> tuple[int, int]:
        """Direction vector (b, -a) scaled so its first nonzero coordinate is 1."""
        dx, dy = self.b, -self.a
        lead = dx if dx else dy
        s = 1 / lead
        return ((dx * s).value, (dy * s).value)

    def base_point(self) -> Point:
        """Point at parameter 0: the y-intercept, or the x-intercept for vertical lines."""
        zero = self.spec.zero
        if self.b:
            return Point(zero, -self.c / self.b)
        return Point(-self.c / self.a, zero)

    def __repr__(self) -> str:
        return f"Line{self.coeffs}"


def points_on_line(line: Line) -> Iterator[Point]:
    """Yield the q rational points of ``line`` at parameters t = 0, ..., q-1."""
    spec = line.spec
    base = line.base_point()
    dx, dy = line.direction()
    for t in range(spec.q):
        yield Point(base.x + t * dx, base.y + t * dy)


def _minor2(l1: Line, l2: Line) -> FieldElement:
    return l1.a * l2.b - l1.b * l2.a


def intersection(l1: Line, l2: Line) -> Point:
    dt = _minor2(l1, l2)
    if not dt:
        raise NoIntersectionError(f"{l1} and {l2} are parallel or equal")
    # Cramer's rule on a x + b y = -c.
    x = (l1.b * l2.c - l2.b * l1.c) / dt
    y = (l2.a * l1.c - l1.a * l2.c) / dt
    return Point(x, y)


@dataclass(frozen=True)
class GeneralPositionResult:
    ok: bool
    witness: Optional[tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.ok


def is_general_position(lines: Sequence[Line]) -> GeneralPositionResult:
    """Pairwise non-parallel and no three concurrent.

    Returns a falsy result carrying the offending index pair or triple.
    """
    if len(lines) < 2:
        raise ParameterError("general position needs at least two lines")
    for i, j in combinations(range(len(lines)), 2):
        if not _minor2(lines[i], lines[j]):
            return GeneralPositionResult(False, (i, j))
    spec = lines[0].spec
    for tri in combinations(range(len(lines)), 3):
        m = Matrix.from_rows(spec, [lines[k].coeffs for k in tri])
        if not det(m):
            return GeneralPositionResult(False, tri)
    return GeneralPositionResult(True)


def _extends_general_position(lines: Sequence[Line], new: Line, crossings: set) -> bool:
    for old in lines:
        if not _minor2(old, new):
            return False
    return not any(new.contains(p) for p in crossings)


@dataclass(frozen=True)
class Configuration:
    """n lines in general position with m chosen points on each.

    ``points[i][j]`` lies on ``lines[i]``; ``grid_lines`` is set when the
    points were built as intersections with auxiliary lines.
    """

    spec: FieldSpec
    lines: tuple[Line, ...]
    points: tuple[tuple[Point, ...], ...]
    grid_lines: Optional[tuple[Line, ...]] = None
    construction: str = "random"
    seed: Optional[int] = None

    def __post_init__(self):
        validate_configuration(self)

    @property
    def n(self) -> int:
        return len(self.lines)

    @property
    def m(self) -> int:
        return len(self.points[0])

    def flat_points(self) -> list[Point]:
        """Points in the lexicographic order (1,1), ..., (1,m), ..., (n,m)."""
        return [p for row in self.points for p in row]

    def crossings(self) -> dict[tuple[int, int], Point]:
        return {(u, v): intersection(self.lines[u], self.lines[v])
                for u, v in combinations(range(self.n), 2)}


def configuration_problems(config: Configuration) -> list[str]:
    """Every violated configuration invariant, as human-readable messages."""
    problems = []
    n = len(config.lines)
    if n < 2:
        return ["need at least two lines"]
    if not config.points or len(config.points) != n:
        return [f"expected {n} point rows, got {len(config.points)}"]
    m = len(config.points[0])
    if m < 1 or any(len(row) != m for row in config.points):
        return ["point rows must all have the same positive length"]
    for ln in config.lines:
        if ln.spec != config.spec:
            problems.append(f"{ln} is over the wrong field")
    gp = is_general_position(config.lines)
    if not gp:
        problems.append(f"lines not in general position, witness {gp.witness}")
        return problems
    crossings = {p.coords for p in config.crossings().values()}
    seen = set()
    for i, row in enumerate(config.points):
        for j, p in enumerate(row):
            if p.x.spec != config.spec:
                problems.append(f"P[{i}][{j}] is over the wrong field")
                continue
            if not config.lines[i].contains(p):
                problems.append(f"P[{i}][{j}] = {p.coords} is not on line {i}")
            if p.coords in crossings:
                problems.append(f"P[{i}][{j}] = {p.coords} is a pairwise intersection")
            if p.coords in seen:
                problems.append(f"P[{i}][{j}] = {p.coords} is repeated")
            seen.add(p.coords)
    if config.grid_lines is not None:
        if len(config.grid_lines) != m:
            problems.append(f"{len(config.grid_lines)} grid lines for m = {m}")
        for j, g in enumerate(config.grid_lines[:m]):
            for i in range(n):
                if not g.contains(config.points[i][j]):
                    problems.append(f"P[{i}][{j}] is not on grid line {j}")
    return problems


def validate_configuration(config: Configuration) -> None:
    problems = configuration_problems(config)
    if problems:
        raise ParameterError("invalid configuration: " + "; ".join(problems))


def _random_line(spec: FieldSpec, rng: np.random.Generator) -> Line:
    q = spec.q
    while True:
        a, b, c = (int(v) for v in rng.integers(0, q, size=3))
        if a or b:
            return Line.from_ints(spec, a, b, c)


def random_lines_in_general_position(spec: FieldSpec, count: int,
                                     rng: np.random.Generator) -> list[Line]:
    """Grow a family one line at a time, restarting on dead ends.

    Every drawn line counts against ``MAX_ATTEMPTS``.
    """
    attempts = 0
    while attempts < MAX_ATTEMPTS:
        lines: list[Line] = []
        crossings: set = set()
        stalls = 0
        while len(lines) < count and attempts < MAX_ATTEMPTS:
            cand = _random_line(spec, rng)
            attempts += 1
            if _extends_general_position(lines, cand, crossings):
                crossings.update(intersection(old, cand) for old in lines)
                lines.append(cand)
                stalls = 0
            else:
                stalls += 1
                if stalls > 20 * spec.q:
                    break
        if len(lines) == count:
            return lines
    raise GenerationError(
        f"no {count} lines in general position over F_{spec.q} after {MAX_ATTEMPTS} draws")


def random_configuration(spec: FieldSpec, n: int, m: int, rng_seed: int) -> Configuration:
    if n < 2 or m < 1:
        raise ParameterError("need n >= 2 and m >= 1")
    if n > spec.q + 1:
        raise ParameterError(f"n = {n} exceeds q + 1 = {spec.q + 1} line directions")
    if m > spec.q - (n - 1):
        raise ParameterError(
            f"m = {m} exceeds q - (n - 1) = {spec.q - (n - 1)} free points per line")
    rng = np.random.default_rng(rng_seed)
    lines = random_lines_in_general_position(spec, n, rng)
    crossing_pts = {
        intersection(lines[u], lines[v]).coords for u, v in combinations(range(n), 2)
    }
    rows = []
    for ln in lines:
        free = [p for p in points_on_line(ln) if p.coords not in crossing_pts]
        pick = sorted(rng.choice(len(free), size=m, replace=False))
        rows.append(tuple(free[k] for k in pick))
    return Configuration(spec, tuple(lines), tuple(rows), None, "random", rng_seed)


def grid_configuration(spec: FieldSpec, n: int, m: int, rng_seed: int) -> Configuration:
    """Points P_ij = L_i meet M_j.

    With n + m <= q the n + m lines are drawn jointly in general position.  At
    n + m = q + 1 that is impossible for odd q (it would give a (q+2)-arc in
    the projective plane), so the M_j are only required to be transversal:
    each meets every L_i away from the crossings, and no two meet on an L_i.
    """
    if n < 2 or m < 1:
        raise ParameterError("need n >= 2 and m >= 1")
    if n + m > spec.q + 1:
        raise ParameterError(f"n + m = {n + m} exceeds q + 1 = {spec.q + 1}")
    rng = np.random.default_rng(rng_seed)
    if n + m <= spec.q:
        family = random_lines_in_general_position(spec, n + m, rng)
        return grid_from_lines(family[:n], family[n:], seed=rng_seed)
    lines = random_lines_in_general_position(spec, n, rng)
    return grid_from_lines(lines, random_transversals(spec, lines, m, rng), seed=rng_seed)


def random_transversals(spec: FieldSpec, lines: Sequence[Line], count: int,
                        rng: np.random.Generator) -> list[Line]:
    """Greedy random transversals with restarts; every draw counts against the budget."""
    crossings = {intersection(u, v).coords for u, v in combinations(lines, 2)}
    draws = 0
    while draws < MAX_ATTEMPTS:
        used = [set() for _ in lines]
        out: list[Line] = []
        stalls = 0
        while len(out) < count and draws < MAX_ATTEMPTS and stalls <= 20 * spec.q:
            cand = _random_line(spec, rng)
            draws += 1
            stalls += 1
            if any(not _minor2(cand, ln) for ln in lines):
                continue
            hits = [intersection(ln, cand).coords for ln in lines]
            if any(h in crossings or h in seen for h, seen in zip(hits, used)):
                continue
            for h, seen in zip(hits, used):
                seen.add(h)
            out.append(cand)
            stalls = 0
        if len(out) == count:
            return out
    raise GenerationError(f"no {count} transversal lines over F_{spec.q} after {MAX_ATTEMPTS} draws")


def grid_from_lines(lines: Sequence[Line], grid_lines: Sequence[Line],
                    seed: Optional[int] = None) -> Configuration:
    """Configuration whose point (i, j) is the crossing of lines[i] and grid_lines[j]."""
    if not lines:
        raise ParameterError("need at least one line")
    spec = lines[0].spec
    rows = tuple(tuple(intersection(li, mj) for mj in grid_lines) for li in lines)
    return Configuration(spec, tuple(lines), rows, tuple(grid_lines), "grid", seed)
