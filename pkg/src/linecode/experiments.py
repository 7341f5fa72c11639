"""Channel model, Monte Carlo decoding runs, and invariant checks on a code."""

from __future__ import annotations

import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .codefile import code_from_dict, code_to_dict
from .decoder import (
    Decoder,
    Exhaustive,
    MinorTable,
    Strategy,
    coincidence_frequency,
    collision_rank,
    count_effective_sets,
    default_strategy,
    enumerate_effective_sets,
    sample_effective_set,
)
from .errors import LinecodeError, ParameterError
from .evalcode import CodeInstance, build_code, encode, encode_many, evaluate_poly
from .geometry import configuration_problems
from .gfield import rank

CSV_HEADER = "t,trials,decoded,ambiguous,failed,wrong,success_rate"


def corrupt(word: Sequence[int], t: int, q: int,
            rng: np.random.Generator) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Add a uniformly placed error of weight exactly ``t`` with uniform nonzero symbols.

    Returns (received word, error vector).
    """
    n = len(word)
    if not 0 <= t <= n:
        raise ParameterError(f"error weight t = {t} must lie in [0, {n}]")
    error = np.zeros(n, dtype=np.int64)
    if t:
        where = rng.choice(n, size=t, replace=False)
        error[where] = rng.integers(1, q, size=t)
    received = tuple(int((w + e) % q) for w, e in zip(word, error))
    return received, tuple(int(e) for e in error)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    t: int
    support: tuple[int, ...]
    outcome: str
    correct: bool
    sets_examined: int


def run_trial(decoder: Decoder, t: int, trial: int, seed: int) -> TrialRecord:
    code = decoder.code
    rng = np.random.default_rng([seed, t, trial])
    message = tuple(int(v) for v in rng.integers(0, code.q, size=code.dimension))
    received, error = corrupt(encode(code, message), t, code.q, rng)
    report = decoder.decode(received)
    correct = report.outcome == "decoded" and report.candidate == message
    support = tuple(i for i, e in enumerate(error) if e)
    return TrialRecord(trial, t, support, report.outcome, correct, report.sets_examined)


@dataclass(frozen=True)
class CurvePoint:
    t: int
    trials: int
    decoded: int
    ambiguous: int
    failed: int
    wrong: int

    @property
    def success_rate(self) -> float:
        return self.decoded / self.trials if self.trials else 0.0

    def csv_row(self) -> str:
        return (f"{self.t},{self.trials},{self.decoded},{self.ambiguous},"
                f"{self.failed},{self.wrong},{self.success_rate:.4f}")


def summarize(t: int, records: Sequence[TrialRecord]) -> CurvePoint:
    """``decoded`` counts correct decodes; a decode to the wrong message is ``wrong``."""
    return CurvePoint(
        t=t,
        trials=len(records),
        decoded=sum(r.correct for r in records),
        ambiguous=sum(r.outcome == "ambiguous" for r in records),
        failed=sum(r.outcome == "failed" for r in records),
        wrong=sum(r.outcome == "decoded" and not r.correct for r in records),
    )


_worker: Optional[Decoder] = None


def _init_worker(doc: dict, strategy: Strategy) -> None:
    global _worker
    _worker = Decoder(code_from_dict(doc), strategy)


def _worker_trials(args: tuple[int, Sequence[int], int]) -> list[TrialRecord]:
    t, trials, seed = args
    return [run_trial(_worker, t, k, seed) for k in trials]


def simulate(code: CodeInstance, t_values: Sequence[int], trials: int, seed: int = 0,
             strategy: Optional[Strategy] = None, jobs: int = 1) -> list[CurvePoint]:
    """Success curve; each trial draws from its own (seed, t, trial) stream."""
    if trials < 1:
        raise ParameterError("need at least one trial")
    strategy = strategy or default_strategy(code.n, code.m, code.d, seed)
    if jobs <= 1:
        decoder = Decoder(code, strategy)
        return [summarize(t, [run_trial(decoder, t, k, seed) for k in range(trials)])
                for t in t_values]
    batches = [(t, range(k, min(k + 64, trials)), seed)
               for t in t_values for k in range(0, trials, 64)]
    with ProcessPoolExecutor(jobs, initializer=_init_worker,
                             initargs=(code_to_dict(code), strategy)) as pool:
        results = list(pool.map(_worker_trials, batches))
    by_t: dict[int, list[TrialRecord]] = {t: [] for t in t_values}
    for (t, _, _), recs in zip(batches, results):
        by_t[t].extend(recs)
    return [summarize(t, by_t[t]) for t in t_values]


def curve_csv(points: Sequence[CurvePoint]) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for p in points:
        buf.write(p.csv_row() + "\n")
    return buf.getvalue()


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


def verify_code(code: CodeInstance, seed: int = 0, codewords: int = 5,
                sampled_sets: int = 1000) -> list[Check]:
    """Run the structural invariant suite; every failure is reported, none raised."""
    checks = []

    def run(name, fn):
        try:
            ok, detail = fn()
        except LinecodeError as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        checks.append(Check(name, ok, detail))

    problems = configuration_problems(code.config)
    checks.append(Check("configuration invariants", not problems, "; ".join(problems)))
    if problems:
        return checks

    def rebuild():
        again = build_code(code.config, code.d)
        via_file = code_from_dict(code_to_dict(code))
        same = again.E == code.E and via_file.E == code.E
        return same, "" if same else "rebuilt generator matrix differs"

    def full_rank():
        r = rank(code.E)
        return r == code.dimension, f"rank {r}, dimension {code.dimension}"

    rng = np.random.default_rng(seed)
    total = count_effective_sets(code.n, code.m, code.d)

    def minors():
        if isinstance(default_strategy(code.n, code.m, code.d), Exhaustive):
            sets = list(enumerate_effective_sets(code.n, code.m, code.d))
        else:
            sets = [sample_effective_set(code.n, code.m, code.d, rng) for _ in range(sampled_sets)]
        MinorTable.build(code, sets)  # raises on a singular minor
        return True, f"{len(sets)} of {total} minors regular"

    def diagonal():
        decoder = Decoder(code)
        for _ in range(codewords):
            a = tuple(int(v) for v in rng.integers(0, code.q, size=code.dimension))
            cands = decoder.table.candidates(encode(code, a), code.q)
            if not (cands == np.array(a)).all():
                return False, f"minor solutions disagree for message {a}"
        return True, f"{codewords} codewords x {len(decoder.table.sets)} sets agree"

    def pointwise():
        a = rng.integers(0, code.q, size=(codewords, code.dimension))
        words = encode_many(code, a)
        pts = code.config.flat_points()
        for row, w in zip(a, words):
            if any(evaluate_poly(row, p).value != int(v) for p, v in zip(pts, w)):
                return False, "matrix and pointwise evaluation disagree"
        return True, ""

    run("generator matrix rebuild", rebuild)
    run("generator matrix full rank", full_rank)
    run("effective minors regular", minors)
    run("minor solutions agree on codewords", diagonal)
    run("encoding matches pointwise evaluation", pointwise)
    return checks


@dataclass(frozen=True)
class CollisionRow:
    rank: int
    symmetric_difference: int
    union_size: int
    predicted: float
    observed: float
    sd: float

    @property
    def within_3sd(self) -> bool:
        return abs(self.observed - self.predicted) <= 3 * self.sd


def collision_experiment(code: CodeInstance, pairs: int, trials: int, seed: int = 0) -> list[CollisionRow]:
    """Coincidence frequency of two random effective minors under uniform errors."""
    rng = np.random.default_rng(seed)
    rows = []
    while len(rows) < pairs:
        Q1 = sample_effective_set(code.n, code.m, code.d, rng)
        Q2 = sample_effective_set(code.n, code.m, code.d, rng)
        if Q1 == Q2:
            continue
        cr = collision_rank(code, Q1, Q2)
        p = code.q ** -cr.rank
        observed = coincidence_frequency(code, Q1, Q2, trials, rng)
        sd = math.sqrt(p * (1 - p) / trials)
        rows.append(CollisionRow(cr.rank, cr.symmetric_difference, cr.union_size, p, observed, sd))
    return rows
