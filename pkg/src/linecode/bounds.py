"""Tableau combinatorics, the radius polynomial, and minimum-distance oracles.

Cells are 1-based (row, column) pairs in the n x m grid; cell (i, j) stands
for the point P_ij, i.e. codeword position (i-1)*m + (j-1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations
from math import comb, prod
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ParameterError, TooLargeError, UnsupportedError
from .evalcode import CodeInstance, Polynomial, encode, numpy_dtype
from .gfield import FieldSpec

Cell = tuple[int, int]

BRUTE_FORCE_GUARD = 10**7


@dataclass(frozen=True)
class Tableau:
    n: int
    m: int
    cells: frozenset[Cell]

    def __post_init__(self):
        for i, j in self.cells:
            if not (1 <= i <= self.n and 1 <= j <= self.m):
                raise ParameterError(f"cell {(i, j)} outside the {self.n}x{self.m} grid")
            if (i > 1 and (i - 1, j) not in self.cells) or (j > 1 and (i, j - 1) not in self.cells):
                raise ParameterError(f"cells are not downward closed at {(i, j)}")

    @classmethod
    def from_row_lengths(cls, n: int, m: int, lengths: Sequence[int]) -> "Tableau":
        cells = frozenset((i + 1, j + 1) for i, w in enumerate(lengths) for j in range(w))
        return cls(n, m, cells)

    def row_lengths(self) -> list[int]:
        return [sum(1 for j in range(1, self.m + 1) if (i, j) in self.cells)
                for i in range(1, self.n + 1)]

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, cell) -> bool:
        return cell in self.cells


def sigma(cells: Iterable[Cell]) -> int:
    if isinstance(cells, Tableau):
        return len(cells.cells)
    return len(set(cells))


def regular_tableau(size: int, n: int | None = None, m: int | None = None) -> Tableau:
    """Staircase R_size = {(i, j) : i + j <= size + 1}."""
    n = size if n is None else n
    m = size if m is None else m
    if size < 0 or size > min(n, m):
        raise ParameterError(f"R_{size} does not fit in a {n}x{m} grid")
    return Tableau.from_row_lengths(n, m, [size + 1 - i for i in range(1, size + 1)])


def t_tableau(k: int, l: int, n: int, m: int) -> Tableau:
    """First k full rows together with first l full columns."""
    if not (0 <= k <= n and 0 <= l <= m):
        raise ParameterError(f"T_({k},{l}) does not fit in a {n}x{m} grid")
    return Tableau.from_row_lengths(n, m, [m if i < k else l for i in range(n)])


def contains_regular_tableau(cells: Tableau | Iterable[Cell], size: int) -> bool:
    cs = cells.cells if isinstance(cells, Tableau) else set(cells)
    if size < 1:
        return True
    return all((i, size + 1 - i) in cs for i in range(1, size + 1))


def enumerate_tableaux(n: int, m: int) -> Iterator[Tableau]:
    """All C(n+m, n) tableaux of the grid, as non-increasing row-length profiles."""
    def profiles(rows_left: int, cap: int) -> Iterator[list[int]]:
        if rows_left == 0:
            yield []
            return
        for w in range(cap, -1, -1):
            for rest in profiles(rows_left - 1, w):
                yield [w] + rest

    for lengths in profiles(n, m):
        yield Tableau.from_row_lengths(n, m, lengths)


def count_effective_subsets(n: int, m: int, d: int, cells: Tableau | Iterable[Cell],
                            guard: int = BRUTE_FORCE_GUARD) -> int:
    """Number of effective sets whose points all lie in ``cells``."""
    cs = cells.cells if isinstance(cells, Tableau) else set(cells)
    if d + 1 > n:
        return 0
    assignments = math.perm(n, d + 1)
    if assignments > guard:
        raise TooLargeError(f"{assignments} line assignments exceed the guard {guard}")
    per_row = [0] * (n + 1)
    for i, j in cs:
        if not (1 <= i <= n and 1 <= j <= m):
            raise ParameterError(f"cell {(i, j)} outside the {n}x{m} grid")
        per_row[i] += 1
    return sum(
        prod(comb(per_row[row], nu) for nu, row in enumerate(rows, start=1))
        for rows in permutations(range(1, n + 1), d + 1)
    )


@dataclass(frozen=True)
class RadiusPolynomial:
    """f(x) = x^2 + (m - n - d - 2) x + (n + 1)(d + 1) - m."""

    n: int
    m: int
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ParameterError("d must be positive")
        if self(1) != self.n * self.d or self(self.d + 1) != self.m * self.d:
            raise ArithmeticError("radius polynomial endpoint identities failed")

    def __call__(self, k: int) -> int:
        return k * k + (self.m - self.n - self.d - 2) * k + (self.n + 1) * (self.d + 1) - self.m

    def table(self) -> list[tuple[int, int]]:
        return [(k, self(k)) for k in range(1, self.d + 2)]

    def maximum(self) -> tuple[int, int]:
        """(max f(k) over 1 <= k <= d+1, smallest k attaining it)."""
        best_k, best = max(self.table(), key=lambda kv: (kv[1], -kv[0]))
        return best, best_k


@dataclass(frozen=True)
class ErrorRadius:
    max_f: int
    argmax_k: int
    radius: int


def error_radius(n: int, m: int, d: int) -> ErrorRadius:
    if d < 1:
        raise ParameterError("d must be positive")
    if m < d + 2 and n < d + 2:
        raise ParameterError(f"need m >= d + 2 or n >= d + 2 (n={n}, m={m}, d={d})")
    max_f, k = RadiusPolynomial(n, m, d).maximum()
    return ErrorRadius(max_f, k, n * m - max_f)


def extremal_polynomial(code: CodeInstance) -> Polynomial:
    """Product of the first k0-1 lines and the first d+1-k0 grid lines."""
    cfg = code.config
    if cfg.grid_lines is None:
        raise UnsupportedError("extremal codeword needs a grid-built configuration")
    _, k0 = RadiusPolynomial(code.n, code.m, code.d).maximum()
    q = code.q
    p = Polynomial(q, {(0, 0): 1})
    for ln in list(cfg.lines[: k0 - 1]) + list(cfg.grid_lines[: code.d + 1 - k0]):
        p = p * Polynomial.linear_form(q, *ln.coeffs)
    return p


def extremal_codeword(code: CodeInstance) -> tuple[int, ...]:
    return encode(code, extremal_polynomial(code).coefficients(code.basis))


def zero_cells(codeword: Sequence[int], m: int) -> frozenset[Cell]:
    return frozenset((r // m + 1, r % m + 1) for r, v in enumerate(codeword) if v == 0)


def weight(vector: Sequence[int]) -> int:
    return sum(1 for v in vector if v)


def min_distance_bruteforce(code: CodeInstance, guard: int = BRUTE_FORCE_GUARD,
                            chunk: int = 1 << 16) -> int:
    """Minimum weight over all q^delta - 1 nonzero codewords."""
    q, k = code.q, code.dimension
    total = q**k
    if total > guard:
        raise TooLargeError(f"q^delta = {total} codewords exceed the guard {guard}")
    dtype = numpy_dtype(q, k)
    E = code.E_array
    powers = np.array([q**i for i in range(k)], dtype=np.int64)
    best = code.length
    for start in range(1, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        coeffs = ((idx[:, None] // powers[None, :]) % q).astype(dtype)
        words = (coeffs @ E.T) % q
        best = min(best, int(np.count_nonzero(words, axis=1).min()))
    return best


@dataclass(frozen=True)
class PointCount:
    config_points: int
    weil_bound: float

    @property
    def exceeds(self) -> bool:
        return self.config_points > self.weil_bound


def point_count_comparison(q: int, n: int) -> PointCount:
    """Rational points on n lines in general position vs. the Weil bound for degree n."""
    FieldSpec(q)
    if n < 1:
        raise ParameterError("need at least one line")
    return PointCount(n * q - n * (n - 1) // 2, 1 + q + (n - 1) * (n - 2) * math.sqrt(q))


@dataclass
class LemmaCheck:
    """Counterexamples found by :func:`check_tableau_lemmas` (all lists empty when sound)."""

    tableaux: int = 0
    two_effective_sets: list = field(default_factory=list)
    avoiding_staircase_bound: list = field(default_factory=list)
    large_contains_staircase: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.two_effective_sets or self.avoiding_staircase_bound
                    or self.large_contains_staircase)


def check_tableau_lemmas(max_n: int = 5, max_m: int = 5, degrees: Sequence[int] = (1, 2)) -> LemmaCheck:
    """Exhaustive check of the three tableau statements on every small grid.

    * a tableau containing R_{d+1} with more than delta cells holds two effective sets;
    * a tableau avoiding R_{d+1} misses some staircase corner (k, d+2-k), so it sits
      inside T_{k-1,d+1-k} and has at most f(k) <= max f cells;
    * a tableau with more than max f cells contains R_{d+1}.
    """
    out = LemmaCheck()
    for n in range(2, max_n + 1):
        for m in range(2, max_m + 1):
            for d in degrees:
                if not d < min(n, m):
                    continue
                delta = (d + 2) * (d + 1) // 2
                f = RadiusPolynomial(n, m, d)
                max_f, _ = f.maximum()
                for T in enumerate_tableaux(n, m):
                    out.tableaux += 1
                    s = len(T)
                    key = (n, m, d, T.row_lengths())
                    has_r = contains_regular_tableau(T, d + 1)
                    if has_r and s > delta and count_effective_subsets(n, m, d, T) < 2:
                        out.two_effective_sets.append(key)
                    if not has_r:
                        k = next(k for k in range(1, d + 2) if (k, d + 2 - k) not in T)
                        box = t_tableau(k - 1, d + 1 - k, n, m)
                        if not (T.cells <= box.cells and len(box) == f(k) and s <= max_f):
                            out.avoiding_staircase_bound.append(key)
                    if s > max_f and not has_r:
                        out.large_contains_staircase.append(key)
    return out
