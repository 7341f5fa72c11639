"""Effective sets, minor solves and majority-vote decoding.

An effective set picks d+1 distinct lines and takes exactly nu points on the
nu-th of them, delta points in total; its rows of the generator matrix form a
regular delta x delta minor.  Decoding solves every such minor against the
received word and keeps the coefficient vector with the most votes.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations, product
from math import comb, prod
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .errors import InconsistencyError, ParameterError, ShapeError, SingularMatrixError, TooLargeError
from .evalcode import CodeInstance, encode, numpy_dtype
from .gfield import Matrix, inverse, rank, solve

ENUMERATION_GUARD = 10**7
EXHAUSTIVE_LIMIT = 10**5
DEFAULT_SAMPLES = 1000


def _check_shape(n: int, m: int, d: int) -> None:
    if not 1 <= d < min(n, m):
        raise ParameterError(f"need 1 <= d < min(n, m); got n={n}, m={m}, d={d}")


@dataclass(frozen=True, order=True)
class EffectiveSet:
    """``assignments[k]`` is (line index, point columns) holding k+1 points."""

    assignments: tuple[tuple[int, tuple[int, ...]], ...]

    def __post_init__(self):
        lines = [ln for ln, _ in self.assignments]
        if len(set(lines)) != len(lines):
            raise ParameterError(f"repeated line in {self.assignments}")
        for k, (_, cols) in enumerate(self.assignments):
            if len(cols) != k + 1 or len(set(cols)) != len(cols):
                raise ParameterError(f"entry {k} must hold {k + 1} distinct columns, got {cols}")
            if list(cols) != sorted(cols):
                raise ParameterError(f"columns {cols} not in ascending order")

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[int, Sequence[int]]]) -> "EffectiveSet":
        """Build from (line, columns) pairs in any order."""
        ordered = sorted(((ln, tuple(sorted(c))) for ln, c in pairs), key=lambda e: len(e[1]))
        return cls(tuple(ordered))

    @property
    def d(self) -> int:
        return len(self.assignments) - 1

    def cells(self) -> frozenset[tuple[int, int]]:
        return frozenset((ln, c) for ln, cols in self.assignments for c in cols)

    def rows(self, m: int) -> tuple[int, ...]:
        """Global row indices line * m + column, in assignment order."""
        return tuple(ln * m + c for ln, cols in self.assignments for c in cols)

    def check(self, n: int, m: int, d: int) -> None:
        if self.d != d:
            raise ParameterError(f"effective set for d={self.d}, code has d={d}")
        for ln, cols in self.assignments:
            if not 0 <= ln < n or any(not 0 <= c < m for c in cols):
                raise ParameterError(f"effective set entry {(ln, cols)} out of range for {n}x{m}")


def count_effective_sets(n: int, m: int, d: int) -> int:
    _check_shape(n, m, d)
    return prod((n - i) * comb(m, d + 1 - i) for i in range(d + 1))


def enumerate_effective_sets(n: int, m: int, d: int,
                             guard: int = ENUMERATION_GUARD) -> Iterator[EffectiveSet]:
    total = count_effective_sets(n, m, d)
    if total > guard:
        raise TooLargeError(f"{total} effective sets exceed the guard {guard}; sample instead")
    col_choices = [list(combinations(range(m), k + 1)) for k in range(d + 1)]
    for lines in permutations(range(n), d + 1):
        for cols in product(*col_choices):
            yield EffectiveSet(tuple(zip(lines, cols)))


def sample_effective_set(n: int, m: int, d: int, rng: np.random.Generator) -> EffectiveSet:
    """Uniform draw: assign multiplicities d+1, d, ..., 1 to fresh random lines."""
    _check_shape(n, m, d)
    unused = list(range(n))
    entries = []
    for i in range(d + 1):
        k = d + 1 - i
        ln = unused.pop(int(rng.integers(len(unused))))
        cols = tuple(sorted(int(c) for c in rng.choice(m, size=k, replace=False)))
        entries.append((ln, cols))
    return EffectiveSet(tuple(reversed(entries)))


def _distinct_samples(n: int, m: int, d: int, k: int, seed: int) -> list[EffectiveSet]:
    total = count_effective_sets(n, m, d)
    if k >= total:
        return list(enumerate_effective_sets(n, m, d))
    rng = np.random.default_rng(seed)
    seen: dict[EffectiveSet, None] = {}
    while len(seen) < k:
        seen.setdefault(sample_effective_set(n, m, d, rng))
    return list(seen)


def minor(code: CodeInstance, Q: EffectiveSet) -> Matrix:
    Q.check(code.n, code.m, code.d)
    return code.E.submatrix(Q.rows(code.m))


def solve_minor(code: CodeInstance, Q: EffectiveSet, received: Sequence[int]) -> tuple[int, ...]:
    """Coefficient vector interpolating ``received`` on the points of Q."""
    if len(received) != code.length:
        raise ShapeError(f"received word has length {len(received)}, expected {code.length}")
    EQ = minor(code, Q)
    try:
        return solve(EQ, [received[r] for r in Q.rows(code.m)])
    except SingularMatrixError as exc:
        raise InconsistencyError(f"minor for {Q} is singular (rank {exc.rank})") from exc


@dataclass
class MinorTable:
    """Stacked row indices and inverse minors for a list of effective sets."""

    sets: list[EffectiveSet]
    rows: np.ndarray       # (N, delta) global row indices
    inverses: np.ndarray   # (N, delta, delta)

    @classmethod
    def build(cls, code: CodeInstance, sets: Sequence[EffectiveSet]) -> "MinorTable":
        sets = list(sets)
        dtype = numpy_dtype(code.q, code.dimension)
        rows = np.array([Q.rows(code.m) for Q in sets], dtype=np.int64)
        invs = np.empty((len(sets), code.dimension, code.dimension), dtype=dtype)
        for k, Q in enumerate(sets):
            try:
                invs[k] = inverse(minor(code, Q)).to_rows()
            except SingularMatrixError as exc:
                raise InconsistencyError(f"minor for {Q} is singular (rank {exc.rank})") from exc
        return cls(sets, rows, invs)

    def candidates(self, received: Sequence[int], q: int) -> np.ndarray:
        """(N, delta) array whose k-th row is inverse_k @ received[rows_k]."""
        r = np.asarray(received, dtype=self.inverses.dtype)[self.rows]
        return np.einsum("kij,kj->ki", self.inverses, r) % q


@dataclass(frozen=True)
class Exhaustive:
    def __str__(self) -> str:
        return "exhaustive"


@dataclass(frozen=True)
class Sampled:
    k: int = DEFAULT_SAMPLES
    seed: int = 0

    def __post_init__(self):
        if self.k < 2:
            raise ParameterError("sampled decoding needs at least two effective sets")

    def __str__(self) -> str:
        return f"sampled({self.k}, {self.seed})"


Strategy = Union[Exhaustive, Sampled]


def default_strategy(n: int, m: int, d: int, seed: int = 0) -> Strategy:
    if count_effective_sets(n, m, d) <= EXHAUSTIVE_LIMIT:
        return Exhaustive()
    return Sampled(DEFAULT_SAMPLES, seed)


@dataclass
class DecodeReport:
    outcome: str                              # "decoded" | "ambiguous" | "failed"
    candidate: Optional[tuple[int, ...]]
    multiplicity: int
    votes: list[tuple[tuple[int, ...], int]]  # distinct candidates, most votes first
    sets_examined: int
    strategy: str
    codeword: Optional[tuple[int, ...]] = None
    tied: list[tuple[int, ...]] = field(default_factory=list)

    def to_dict(self, top: Optional[int] = 10) -> dict:
        shown = self.votes if top is None else self.votes[:top]
        return {
            "outcome": self.outcome,
            "candidate": list(self.candidate) if self.candidate is not None else None,
            "multiplicity": self.multiplicity,
            "sets_examined": self.sets_examined,
            "distinct_candidates": len(self.votes),
            "strategy": self.strategy,
            "codeword": list(self.codeword) if self.codeword is not None else None,
            "tied": [list(c) for c in self.tied],
            "votes": [{"candidate": list(c), "count": n} for c, n in shown],
        }


def tally(candidates: np.ndarray, q: int) -> list[tuple[tuple[int, ...], int]]:
    """Distinct rows with counts, ordered by count desc then lexicographically."""
    width = candidates.shape[1]
    if candidates.dtype != object and q**width < 2**63:
        weights = np.array([q ** (width - 1 - i) for i in range(width)], dtype=np.int64)
        keys, counts = np.unique(candidates @ weights, return_counts=True)
        digits = (keys[:, None] // weights[None, :]) % q
        pairs = [(tuple(int(v) for v in row), int(c)) for row, c in zip(digits, counts)]
    else:
        pairs = list(Counter(tuple(int(v) for v in row) for row in candidates).items())
    pairs.sort(key=lambda p: (-p[1], p[0]))
    return pairs


def report_from_votes(code: CodeInstance, votes, examined: int, strategy: str) -> DecodeReport:
    best = votes[0][1]
    tied = [c for c, n in votes if n == best]
    if best < 2:
        return DecodeReport("failed", None, best, votes, examined, strategy)
    if len(tied) > 1:
        return DecodeReport("ambiguous", None, best, votes, examined, strategy, tied=tied)
    cand = tied[0]
    return DecodeReport("decoded", cand, best, votes, examined, strategy,
                        codeword=encode(code, cand), tied=tied)


class Decoder:
    """Majority-vote decoder with cached inverse minors for one code."""

    def __init__(self, code: CodeInstance, strategy: Optional[Strategy] = None):
        self.code = code
        self.strategy = strategy or default_strategy(code.n, code.m, code.d)

    @cached_property
    def table(self) -> MinorTable:
        c = self.code
        if isinstance(self.strategy, Exhaustive):
            sets = list(enumerate_effective_sets(c.n, c.m, c.d))
        else:
            sets = _distinct_samples(c.n, c.m, c.d, self.strategy.k, self.strategy.seed)
        return MinorTable.build(c, sets)

    def decode(self, received: Sequence[int]) -> DecodeReport:
        if len(received) != self.code.length:
            raise ShapeError(f"received word has length {len(received)}, expected {self.code.length}")
        received = [int(v) % self.code.q for v in received]
        cands = self.table.candidates(received, self.code.q)
        votes = tally(cands, self.code.q)
        return report_from_votes(self.code, votes, len(self.table.sets), str(self.strategy))


def decode(code: CodeInstance, received: Sequence[int],
           strategy: Optional[Strategy] = None) -> DecodeReport:
    return Decoder(code, strategy).decode(received)


def decode_by_solves(code: CodeInstance, received: Sequence[int],
                     sets: Sequence[EffectiveSet], strategy: str = "custom") -> DecodeReport:
    """Same vote as :func:`decode` but one Gaussian solve per set, in the given order."""
    counts = Counter(solve_minor(code, Q, received) for Q in sets)
    votes = sorted(counts.items(), key=lambda p: (-p[1], p[0]))
    return report_from_votes(code, votes, len(sets), strategy)


@dataclass(frozen=True)
class CollisionRank:
    rank: int
    symmetric_difference: int
    union_size: int


def difference_map(code: CodeInstance, Q: EffectiveSet, Q2: EffectiveSet) -> tuple[Matrix, list[int]]:
    """Matrix of e -> E_Q^-1 e_Q - E_Q2^-1 e_Q2 on the coordinates of Q u Q2."""
    m = code.m
    rows1, rows2 = Q.rows(m), Q2.rows(m)
    union = sorted(set(rows1) | set(rows2))
    inv1, inv2 = inverse(minor(code, Q)), inverse(minor(code, Q2))
    q, dim = code.q, code.dimension
    pos1 = {r: k for k, r in enumerate(rows1)}
    pos2 = {r: k for k, r in enumerate(rows2)}
    data = []
    for i in range(dim):
        for r in union:
            v = inv1[i, pos1[r]].value if r in pos1 else 0
            if r in pos2:
                v -= inv2[i, pos2[r]].value
            data.append(v % q)
    return Matrix(code.spec, dim, len(union), tuple(data)), union


def collision_rank(code: CodeInstance, Q: EffectiveSet, Q2: EffectiveSet) -> CollisionRank:
    """Rank of the difference map; a uniform error makes Q and Q2 agree with probability q**-rank."""
    if Q == Q2:
        raise ParameterError("collision rank needs two different effective sets")
    M, union = difference_map(code, Q, Q2)
    sym = len(Q.cells() ^ Q2.cells())
    return CollisionRank(rank(M), sym, len(union))


def coincidence_frequency(code: CodeInstance, Q: EffectiveSet, Q2: EffectiveSet,
                          trials: int, rng: np.random.Generator) -> float:
    """Fraction of uniform error vectors on which both minors give the same solution."""
    M, union = difference_map(code, Q, Q2)
    dtype = numpy_dtype(code.q, len(union))
    A = np.array(M.to_rows(), dtype=dtype)
    hits = 0
    for start in range(0, trials, 10_000):
        e = rng.integers(0, code.q, size=(min(10_000, trials - start), len(union))).astype(dtype)
        hits += int(np.count_nonzero(~((e @ A.T) % code.q).any(axis=1)))
    return hits / trials
