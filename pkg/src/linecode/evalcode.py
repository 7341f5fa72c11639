"""Evaluation code of bivariate polynomials of degree <= d on a configuration."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import InconsistencyError, ParameterError, ShapeError
from .geometry import Configuration, Point
from .gfield import FieldElement, Matrix, rank


def monomial_count(d: int) -> int:
    return (d + 2) * (d + 1) // 2


def numpy_dtype(q: int, terms: int):
    """int64 when a length-``terms`` dot product of residues cannot overflow."""
    return np.int64 if terms * (q - 1) ** 2 < 2**63 else object


@dataclass(frozen=True)
class MonomialBasis:
    """Exponent pairs (i, j) of x^i y^j, ordered 1; x, y; x^2, xy, y^2; ..."""

    d: int

    @cached_property
    def exponents(self) -> tuple[tuple[int, int], ...]:
        return tuple((t - j, j) for t in range(self.d + 1) for j in range(t + 1))

    def __len__(self) -> int:
        return monomial_count(self.d)

    def index(self, i: int, j: int) -> int:
        t = i + j
        if t > self.d or i < 0 or j < 0:
            raise ParameterError(f"x^{i} y^{j} is not in degree {self.d}")
        return monomial_count(t - 1) + j

    def row(self, x: int, y: int, q: int) -> tuple[int, ...]:
        return tuple(pow(x, i, q) * pow(y, j, q) % q for i, j in self.exponents)


@dataclass(frozen=True)
class CodeInstance:
    config: Configuration
    d: int
    basis: MonomialBasis
    E: Matrix

    @property
    def spec(self):
        return self.config.spec

    @property
    def q(self) -> int:
        return self.config.spec.q

    @property
    def n(self) -> int:
        return self.config.n

    @property
    def m(self) -> int:
        return self.config.m

    @property
    def length(self) -> int:
        return self.config.n * self.config.m

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @cached_property
    def E_array(self) -> np.ndarray:
        dtype = numpy_dtype(self.q, self.dimension)
        return np.array(self.E.to_rows(), dtype=dtype)

    def row_index(self, line: int, column: int) -> int:
        return line * self.config.m + column


def build_code(config: Configuration, d: int) -> CodeInstance:
    if not 1 <= d < min(config.n, config.m):
        raise ParameterError(
            f"degree d = {d} must satisfy 1 <= d < min(n, m) = {min(config.n, config.m)}")
    basis = MonomialBasis(d)
    q = config.spec.q
    rows = [basis.row(p.x.value, p.y.value, q) for p in config.flat_points()]
    E = Matrix.from_rows(config.spec, rows)
    r = rank(E)
    if r != len(basis):
        raise InconsistencyError(
            f"generator matrix has rank {r} < {len(basis)}; configuration invariants are broken")
    return CodeInstance(config, d, basis, E)


def _check_vector(code: CodeInstance, vec: Sequence[int], length: int, what: str) -> list[int]:
    if len(vec) != length:
        raise ShapeError(f"{what} has length {len(vec)}, expected {length}")
    return [int(v) % code.q for v in vec]


def encode(code: CodeInstance, a: Sequence[int]) -> tuple[int, ...]:
    """Codeword E @ a for coefficient vector ``a`` in basis order."""
    coeffs = _check_vector(code, a, code.dimension, "coefficient vector")
    return code.E.apply(coeffs)


def encode_many(code: CodeInstance, coeffs: np.ndarray) -> np.ndarray:
    """Row-wise encoding of a (batch, dimension) array."""
    return (np.asarray(coeffs, dtype=code.E_array.dtype) @ code.E_array.T) % code.q


def evaluate_poly(a: Sequence[int], p: Point) -> FieldElement:
    """Value at ``p`` of the polynomial with coefficients ``a`` in basis order."""
    spec = p.x.spec
    d = 0
    while monomial_count(d) < len(a):
        d += 1
    if monomial_count(d) != len(a):
        raise ShapeError(f"{len(a)} is not a triangular number of coefficients")
    q = spec.q
    row = MonomialBasis(d).row(p.x.value, p.y.value, q)
    return FieldElement(sum(int(c) * r for c, r in zip(a, row)) % q, spec)


def code_parameters(code: CodeInstance) -> dict:
    from .bounds import RadiusPolynomial

    max_f, _ = RadiusPolynomial(code.n, code.m, code.d).maximum()
    return {
        "length": code.length,
        "dimension": code.dimension,
        "distance_lower_bound": code.length - max_f,
    }


class Polynomial(dict):
    """Sparse bivariate polynomial {(i, j): coefficient} over F_q."""

    def __init__(self, q: int, terms=None):
        super().__init__()
        self.q = q
        for k, v in (terms or {}).items():
            if v % q:
                self[k] = v % q

    @classmethod
    def linear_form(cls, q: int, a: int, b: int, c: int) -> "Polynomial":
        return cls(q, {(1, 0): a, (0, 1): b, (0, 0): c})

    @property
    def degree(self) -> int:
        return max((i + j for i, j in self), default=0)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        out: dict = {}
        for (i1, j1), c1 in self.items():
            for (i2, j2), c2 in other.items():
                k = (i1 + i2, j1 + j2)
                out[k] = (out.get(k, 0) + c1 * c2) % self.q
        return Polynomial(self.q, out)

    def coefficients(self, basis: MonomialBasis) -> tuple[int, ...]:
        if self.degree > basis.d:
            raise ParameterError(f"degree {self.degree} exceeds {basis.d}")
        vec = [0] * len(basis)
        for (i, j), c in self.items():
            vec[basis.index(i, j)] = c
        return tuple(vec)
