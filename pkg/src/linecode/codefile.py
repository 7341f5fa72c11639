"""JSON code files and one-line CSV vector files."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Sequence

from .errors import ParameterError, ShapeError
from .evalcode import CodeInstance, build_code
from .geometry import Configuration, Line, Point, grid_configuration, random_configuration
from .gfield import FieldSpec

CONSTRUCTIONS = ("grid", "random")


def make_code(q: int, n: int, m: int, d: int, construction: str = "grid", seed: int = 0) -> CodeInstance:
    spec = FieldSpec(q)
    if not 1 <= d < min(n, m):
        raise ParameterError(f"degree d = {d} must satisfy 1 <= d < min(n, m) = {min(n, m)}")
    if construction == "grid":
        config = grid_configuration(spec, n, m, seed)
    elif construction == "random":
        config = random_configuration(spec, n, m, seed)
    else:
        raise ParameterError(f"construction must be one of {CONSTRUCTIONS}, got {construction!r}")
    return build_code(config, d)


def code_to_dict(code: CodeInstance) -> dict:
    cfg = code.config
    out = {
        "q": code.q,
        "n": code.n,
        "m": code.m,
        "d": code.d,
        "construction": cfg.construction,
        "seed": cfg.seed,
        "lines": [list(ln.coeffs) for ln in cfg.lines],
    }
    if cfg.grid_lines is not None:
        out["grid_lines"] = [list(ln.coeffs) for ln in cfg.grid_lines]
    out["points"] = [[list(p.coords) for p in row] for row in cfg.points]
    return out


def _int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParameterError(f"{what} must be an integer, got {value!r}")
    return value


def _line(spec: FieldSpec, triple, what: str) -> Line:
    if not isinstance(triple, list) or len(triple) != 3:
        raise ParameterError(f"{what} must be [a, b, c], got {triple!r}")
    a, b, c = (spec.check(v) for v in triple)
    return Line(spec(a), spec(b), spec(c))


def code_from_dict(doc: dict) -> CodeInstance:
    """Rebuild and revalidate a code; any inconsistency raises ParameterError."""
    try:
        q, n, m, d = (_int(doc[k], k) for k in ("q", "n", "m", "d"))
        spec = FieldSpec(q)
        lines = tuple(_line(spec, t, "line") for t in doc["lines"])
        grid = doc.get("grid_lines")
        grid_lines = tuple(_line(spec, t, "grid line") for t in grid) if grid is not None else None
        rows = []
        for row in doc["points"]:
            pts = []
            for xy in row:
                if not isinstance(xy, list) or len(xy) != 2:
                    raise ParameterError(f"point must be [x, y], got {xy!r}")
                x, y = (spec.check(v) for v in xy)
                pts.append(Point(spec(x), spec(y)))
            rows.append(tuple(pts))
        construction = doc.get("construction", "random")
        seed = doc.get("seed")
    except KeyError as exc:
        raise ParameterError(f"code file is missing key {exc}") from None
    except TypeError as exc:
        raise ParameterError(f"malformed code file: {exc}") from None
    if construction not in CONSTRUCTIONS:
        raise ParameterError(f"unknown construction {construction!r}")
    if len(lines) != n or len(rows) != n or any(len(r) != m for r in rows):
        raise ParameterError(f"code file shape does not match n = {n}, m = {m}")
    config = Configuration(spec, lines, tuple(rows), grid_lines, construction, seed)
    return build_code(config, d)


def save_code(code: CodeInstance, path: Optional[str | Path]) -> str:
    text = json.dumps(code_to_dict(code), indent=1) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def load_code(path: str | Path) -> CodeInstance:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParameterError(f"cannot read code file {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise ParameterError(f"{path} does not hold a JSON object")
    return code_from_dict(doc)


def format_vector(vec: Sequence[int]) -> str:
    return ",".join(str(int(v)) for v in vec) + "\n"


def parse_vector(text: str, q: int, length: Optional[int] = None) -> tuple[int, ...]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) != 1:
        raise ParameterError(f"vector file must hold exactly one line, found {len(lines)}")
    try:
        values = tuple(int(tok) for tok in lines[0].split(","))
    except ValueError as exc:
        raise ParameterError(f"bad vector entry: {exc}") from None
    for v in values:
        if not 0 <= v < q:
            raise ParameterError(f"{v} is not a canonical residue mod {q}")
    if length is not None and len(values) != length:
        raise ShapeError(f"vector has {len(values)} entries, expected {length}")
    return values


def read_vector(path: str | Path, q: int, length: Optional[int] = None) -> tuple[int, ...]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParameterError(f"cannot read vector file {path}: {exc}") from None
    return parse_vector(text, q, length)
