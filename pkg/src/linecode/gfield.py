"""Prime field arithmetic and dense linear algebra over F_q.

Field elements are canonical residues in ``[0, q)``.  Scalars are wrapped in
:class:`FieldElement` for the public arithmetic API; matrices and vectors keep
plain ``int`` entries tagged by their :class:`FieldSpec`, which is what every
hot path (encoding, minor solves, voting) works with.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import (
    FieldDivisionError,
    FieldMismatchError,
    ParameterError,
    ShapeError,
    SingularMatrixError,
)

# Deterministic Miller-Rabin witnesses, valid for every n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The prime field F_q."""

    q: int

    def __post_init__(self):
        if not isinstance(self.q, int) or isinstance(self.q, bool):
            raise ParameterError(f"field order must be an integer, got {self.q!r}")
        if self.q >= 2**64:
            raise ParameterError("field order must fit in a 64-bit word")
        if not is_prime(self.q):
            raise ParameterError(f"q = {self.q} is not prime")

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value, self)

    def reduce(self, value: int) -> "FieldElement":
        """Element for an arbitrary integer, reduced mod q."""
        return FieldElement(value % self.q, self)

    def check(self, value: int) -> int:
        """Validate a canonical residue (used when reading files)."""
        if isinstance(value, bool) or not isinstance(value, int):
            raise ParameterError(f"field element must be an integer, got {value!r}")
        if not 0 <= value < self.q:
            raise ParameterError(f"{value} is not a canonical residue mod {self.q}")
        return value

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def elements(self) -> Iterable["FieldElement"]:
        return (FieldElement(v, self) for v in range(self.q))


Scalar = Union["FieldElement", int]


@dataclass(frozen=True)
class FieldElement:
    value: int
    spec: FieldSpec

    def __post_init__(self):
        if not 0 <= self.value < self.spec.q:
            raise ParameterError(f"{self.value} is not a canonical residue mod {self.spec.q}")

    def _coerce(self, other: Scalar) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldMismatchError(f"F_{self.spec.q} vs F_{other.spec.q}")
            return other.value
        if isinstance(other, int):
            return other % self.spec.q
        return NotImplemented

    def __add__(self, other: Scalar) -> "FieldElement":
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement((self.value + v) % self.spec.q, self.spec)

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> "FieldElement":
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement((self.value - v) % self.spec.q, self.spec)

    def __rsub__(self, other: Scalar) -> "FieldElement":
        return (-self) + other

    def __mul__(self, other: Scalar) -> "FieldElement":
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.value * v % self.spec.q, self.spec)

    __rmul__ = __mul__

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.value % self.spec.q, self.spec)

    def __truediv__(self, other: Scalar) -> "FieldElement":
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return self * mul_inv(FieldElement(v, self.spec))

    def __rtruediv__(self, other: Scalar) -> "FieldElement":
        return FieldElement(self._coerce(other), self.spec) / self

    def __pow__(self, k: int) -> "FieldElement":
        if k < 0:
            return mul_inv(self) ** (-k)
        return FieldElement(pow(self.value, k, self.spec.q), self.spec)

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.spec.q})"


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def mul_inv(x: FieldElement) -> FieldElement:
    if x.value == 0:
        raise FieldDivisionError(f"0 has no inverse in F_{x.spec.q}")
    return FieldElement(pow(x.value, -1, x.spec.q), x.spec)


def inv_mod(value: int, q: int) -> int:
    if value % q == 0:
        raise FieldDivisionError(f"0 has no inverse in F_{q}")
    return pow(value, -1, q)


@dataclass(frozen=True)
class Matrix:
    """Dense matrix over F_q; ``data`` holds canonical residues row-major."""

    spec: FieldSpec
    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ShapeError(f"bad shape {self.rows}x{self.cols}")
        if len(self.data) != self.rows * self.cols:
            raise ShapeError(f"{len(self.data)} entries for a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows: Sequence[Sequence[Scalar]]) -> "Matrix":
        if not rows:
            raise ShapeError("matrix needs at least one row")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ShapeError("ragged rows")
        data = tuple(_residue(spec, v) for r in rows for v in r)
        return cls(spec, len(rows), width, data)

    @classmethod
    def identity(cls, spec: FieldSpec, size: int) -> "Matrix":
        return cls(spec, size, size, tuple(int(i == j) for i in range(size) for j in range(size)))

    @classmethod
    def zeros(cls, spec: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls(spec, rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> FieldElement:
        i, j = ij
        return FieldElement(self.data[i * self.cols + j], self.spec)

    def row(self, i: int) -> tuple[int, ...]:
        return self.data[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        t = tuple(self.data[i * self.cols + j] for j in range(self.cols) for i in range(self.rows))
        return Matrix(self.spec, self.cols, self.rows, t)

    def submatrix(self, row_indices: Sequence[int]) -> "Matrix":
        data = tuple(v for i in row_indices for v in self.row(i))
        return Matrix(self.spec, len(row_indices), self.cols, data)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        _same_field(self.spec, other.spec)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        q = self.spec.q
        ocols = [other.data[j :: other.cols] for j in range(other.cols)]
        data = tuple(
            sum(a * b for a, b in zip(self.row(i), col)) % q
            for i in range(self.rows)
            for col in ocols
        )
        return Matrix(self.spec, self.rows, other.cols, data)

    def apply(self, vector: Sequence[Scalar]) -> tuple[int, ...]:
        """Matrix-vector product."""
        v = _vector(self.spec, vector)
        if len(v) != self.cols:
            raise ShapeError(f"vector of length {len(v)} for {self.cols} columns")
        q = self.spec.q
        return tuple(sum(a * b for a, b in zip(self.row(i), v)) % q for i in range(self.rows))


def _same_field(a: FieldSpec, b: FieldSpec) -> None:
    if a != b:
        raise FieldMismatchError(f"F_{a.q} vs F_{b.q}")


def _residue(spec: FieldSpec, v: Scalar) -> int:
    if isinstance(v, FieldElement):
        _same_field(spec, v.spec)
        return v.value
    return int(v) % spec.q


def _vector(spec: FieldSpec, vector: Sequence[Scalar]) -> list[int]:
    return [_residue(spec, v) for v in vector]


def _echelon(rows: list[list[int]], q: int, ncols: int) -> tuple[int, int]:
    """In-place row reduction; returns (rank, determinant sign/scale factor).

    Pivot is the first nonzero entry at or below the current row.  The second
    return value is the product of pivots times the swap sign, which equals
    det for square input of full rank.
    """
    r = 0
    det = 1
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        if pivot != r:
            rows[r], rows[pivot] = rows[pivot], rows[r]
            det = -det
        pr = rows[r]
        det = det * pr[c] % q
        inv = pow(pr[c], -1, q)
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                f = f * inv % q
                ri = rows[i]
                for k in range(c, len(ri)):
                    ri[k] = (ri[k] - f * pr[k]) % q
        r += 1
        if r == len(rows):
            break
    return r, det % q


def rank(a: Matrix) -> int:
    rows = a.to_rows()
    r, _ = _echelon(rows, a.spec.q, a.cols)
    return r


def det(a: Matrix) -> FieldElement:
    if a.rows != a.cols:
        raise ShapeError(f"determinant of a non-square {a.rows}x{a.cols} matrix")
    rows = a.to_rows()
    r, d = _echelon(rows, a.spec.q, a.cols)
    return FieldElement(d if r == a.rows else 0, a.spec)


def solve(a: Matrix, b: Sequence[Scalar]) -> tuple[int, ...]:
    """Solve ``a @ x = b`` for square regular ``a`` by Gauss-Jordan elimination."""
    if a.rows != a.cols:
        raise ShapeError(f"solve needs a square matrix, got {a.rows}x{a.cols}")
    rhs = _vector(a.spec, b)
    if len(rhs) != a.rows:
        raise ShapeError(f"right-hand side of length {len(rhs)} for {a.rows} rows")
    n, q = a.rows, a.spec.q
    aug = [list(a.row(i)) + [rhs[i]] for i in range(n)]
    _gauss_jordan(aug, n, q, a)
    return tuple(aug[i][n] for i in range(n))


def inverse(a: Matrix) -> Matrix:
    if a.rows != a.cols:
        raise ShapeError(f"inverse of a non-square {a.rows}x{a.cols} matrix")
    n, q = a.rows, a.spec.q
    aug = [list(a.row(i)) + [int(i == j) for j in range(n)] for i in range(n)]
    _gauss_jordan(aug, n, q, a)
    return Matrix(a.spec, n, n, tuple(v for r in aug for v in r[n:]))


def _gauss_jordan(aug: list[list[int]], n: int, q: int, original: Matrix) -> None:
    width = len(aug[0])
    for c in range(n):
        pivot = next((i for i in range(c, n) if aug[i][c]), None)
        if pivot is None:
            raise SingularMatrixError(rank(original), n)
        if pivot != c:
            aug[c], aug[pivot] = aug[pivot], aug[c]
        pr = aug[c]
        inv = pow(pr[c], -1, q)
        if inv != 1:
            for k in range(c, width):
                pr[k] = pr[k] * inv % q
        for i in range(n):
            if i != c:
                f = aug[i][c]
                if f:
                    ri = aug[i]
                    for k in range(c, width):
                        ri[k] = (ri[k] - f * pr[k]) % q
