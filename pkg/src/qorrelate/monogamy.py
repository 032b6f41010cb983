"""Monogamy scores, ensemble percentage tables, and the scaling-law fit.

The monogamy score of a measure Q on an n-qubit pure state with nodal
qubit 1 is

    delta_Q = Q(1 : rest) - sum_{j != 1} Q(1 : j)

with both the cut value and the pair values squared first for the squared
kinds.  A state counts as monogamous for Q when delta_Q >= -eps.

Percentage tables are deterministic: every sample is a pure function of
(master seed, sample index), chunks are counted independently and summed
as integers, so results are identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .linalg import partial_trace, von_neumann_entropy
from .measures import (
    DEFAULT_OPTIMIZER,
    Direction,
    MeasureKind,
    OptimizerOptions,
    _minimize_measurement,
    _pair_pieces,
    concurrence_two_qubit,
    eof_from_concurrence,
    negativity,
    pure_cut_value,
    unmeasured_conditional_entropy,
)
from .states import EnsembleSpec, PureState

DEFAULT_EPS = 1e-9
_CHUNK = 64


class InvariantViolation(RuntimeError):
    """A per-sample consistency check failed during a checked sweep."""


@dataclass(frozen=True)
class MonogamyRecord:
    """One scored (state, kind) pair.

    For squared kinds cut_value and pair_values are already squared, so
    score = cut_value - sum(pair_values) holds for every kind.
    """

    kind: MeasureKind
    nodal: int
    cut_value: float
    pair_values: tuple[float, ...]
    score: float

    def recomputed_score(self) -> float:
        return self.cut_value - sum(self.pair_values)


def _base_values_for_pair(
    rho_pair, needed: set[MeasureKind], options: OptimizerOptions
) -> dict[MeasureKind, float]:
    """Unsquared pair values for every base kind in ``needed``, sharing the
    expensive pieces (Wootters spectrum, basis searches) between kinds."""
    out: dict[MeasureKind, float] = {}
    if MeasureKind.CONCURRENCE in needed or MeasureKind.EOF in needed:
        c = concurrence_two_qubit(rho_pair)
        out[MeasureKind.CONCURRENCE] = c
        if MeasureKind.EOF in needed:
            out[MeasureKind.EOF] = eof_from_concurrence(c)
    if MeasureKind.NEGATIVITY in needed or MeasureKind.LOG_NEGATIVITY in needed:
        neg = negativity(rho_pair, (rho_pair.qubits[0],))
        out[MeasureKind.NEGATIVITY] = neg
        out[MeasureKind.LOG_NEGATIVITY] = math.log2(1.0 + 2.0 * neg)
    by_side = {
        Direction.ON_FIRST: (MeasureKind.DISCORD_FWD, MeasureKind.WORK_DEFICIT_FWD),
        Direction.ON_SECOND: (MeasureKind.DISCORD_BWD, MeasureKind.WORK_DEFICIT_BWD),
    }
    pieces = None
    for direction, (d_kind, wd_kind) in by_side.items():
        want_d, want_wd = d_kind in needed, wd_kind in needed
        if not (want_d or want_wd):
            continue
        if pieces is None:
            pieces = _pair_pieces(rho_pair.matrix)
        r4, s_first, s_second, s_pair = pieces
        opt = _minimize_measurement(r4, direction, options, want_mce=want_d, want_deph=want_wd)
        if want_d:
            s_meas = s_first if direction is Direction.ON_FIRST else s_second
            out[d_kind] = max(0.0, s_meas - s_pair + opt.mce)
        if want_wd:
            out[wd_kind] = max(0.0, opt.dephased_entropy - s_pair)
    return out


def evaluate_state(
    psi: PureState,
    kinds: Sequence[MeasureKind],
    nodal: int = 1,
    options: OptimizerOptions | None = None,
) -> dict[MeasureKind, MonogamyRecord]:
    """Monogamy records for every requested kind of one pure state.

    Base quantities are computed once per pair and reused across squared
    and unsquared variants.
    """
    options = options or DEFAULT_OPTIMIZER
    if nodal < 1 or nodal > psi.n:
        raise ValueError(f"nodal qubit {nodal} outside 1..{psi.n}")
    kinds = list(dict.fromkeys(kinds))
    if not kinds:
        raise ValueError("no measure kinds requested")
    needed = {k.base for k in kinds}

    others = [q for q in psi.qubits if q != nodal]
    pair_values: dict[MeasureKind, list[float]] = {b: [] for b in needed}
    for j in others:
        rho_pair = partial_trace(psi, (nodal, j))
        vals = _base_values_for_pair(rho_pair, needed, options)
        for b in needed:
            pair_values[b].append(vals[b])

    cut_values = {b: pure_cut_value(psi, nodal, b) for b in needed}

    records = {}
    for kind in kinds:
        cut = cut_values[kind.base]
        pairs = tuple(pair_values[kind.base])
        if kind.squared:
            cut = cut * cut
            pairs = tuple(p * p for p in pairs)
        records[kind] = MonogamyRecord(kind, nodal, cut, pairs, score=cut - sum(pairs))
    return records


def monogamy_score(
    psi: PureState,
    kind: MeasureKind,
    nodal: int = 1,
    options: OptimizerOptions | None = None,
) -> MonogamyRecord:
    """Monogamy record of a single kind; see module docstring for the score."""
    return evaluate_state(psi, [kind], nodal, options)[kind]


def tangle(psi: PureState, nodal: int = 1) -> float:
    """Monogamy score of squared concurrence (the CKW residual)."""
    return monogamy_score(psi, MeasureKind.CONCURRENCE_SQ, nodal).score


@dataclass(frozen=True)
class Theorem4Check:
    """Discord monogamy score, its conditional-entropy upper bound
    sum_j S(nodal | j), and the tangle that switches the bound on."""

    score: float
    bound: float
    tangle: float


def theorem4_bound_check(
    psi: PureState, nodal: int = 1, options: OptimizerOptions | None = None
) -> Theorem4Check:
    """For tangle-free states the discord score delta_D(bwd) is bounded by
    the sum of unmeasured conditional entropies over the pairs."""
    if psi.n < 3:
        raise ValueError("the conditional-entropy bound needs at least 3 parties")
    recs = evaluate_state(
        psi, [MeasureKind.DISCORD_BWD, MeasureKind.CONCURRENCE_SQ], nodal, options
    )
    score = recs[MeasureKind.DISCORD_BWD].score
    tau = recs[MeasureKind.CONCURRENCE_SQ].score
    bound = 0.0
    for j in psi.qubits:
        if j == nodal:
            continue
        bound += unmeasured_conditional_entropy(partial_trace(psi, (nodal, j)))
    if tau <= 1e-8 and score > bound + 1e-6:
        raise InvariantViolation(
            f"discord score {score!r} exceeds bound {bound!r} at tangle {tau!r}"
        )
    return Theorem4Check(score, bound, tau)


def koashi_winter_gap(
    psi: PureState,
    nodal: int,
    other: int,
    cond: int,
    options: OptimizerOptions | None = None,
) -> float:
    """S(nodal|cond) + D(nodal:cond, measured on cond) - E(nodal:other) for a
    three-qubit pure state; nonnegative up to optimizer slack."""
    if psi.n != 3:
        raise ValueError(f"need a three-qubit state, got n={psi.n}")
    if sorted((nodal, other, cond)) != [1, 2, 3]:
        raise ValueError(f"({nodal}, {other}, {cond}) is not a permutation of (1, 2, 3)")
    options = options or DEFAULT_OPTIMIZER
    pair_nc = partial_trace(psi, (nodal, cond))
    vals = _base_values_for_pair(pair_nc, {MeasureKind.DISCORD_BWD}, options)
    cond_ent = unmeasured_conditional_entropy(pair_nc)
    pair_no = partial_trace(psi, (nodal, other))
    eof = eof_from_concurrence(concurrence_two_qubit(pair_no))
    return cond_ent + vals[MeasureKind.DISCORD_BWD] - eof


def eof_discord_chain_gap(
    psi: PureState, nodal: int = 1, options: OptimizerOptions | None = None
) -> float:
    """sum_j [S(nodal|j) + D(nodal:j, measured on j)] - sum_j E(nodal:j);
    nonnegative up to optimizer slack."""
    options = options or DEFAULT_OPTIMIZER
    lhs = rhs = 0.0
    for j in psi.qubits:
        if j == nodal:
            continue
        rho_pair = partial_trace(psi, (nodal, j))
        vals = _base_values_for_pair(
            rho_pair, {MeasureKind.DISCORD_BWD, MeasureKind.EOF}, options
        )
        lhs += vals[MeasureKind.EOF]
        rhs += unmeasured_conditional_entropy(rho_pair) + vals[MeasureKind.DISCORD_BWD]
    return rhs - lhs


@dataclass(frozen=True)
class PercentageRow:
    """Share of an ensemble classified monogamous for one kind."""

    ensemble: EnsembleSpec
    kind: MeasureKind
    monogamous_count: int
    total: int
    percentage: float
    classification_epsilon: float


def _check_record(rec: MonogamyRecord, problems: list[str]) -> None:
    if abs(rec.score - rec.recomputed_score()) > 1e-12:
        problems.append(f"{rec.kind.flag}: stored score differs from recomputation")
    if rec.kind.base is MeasureKind.CONCURRENCE:
        bad = [v for v in (rec.cut_value, *rec.pair_values) if not -1e-12 <= v <= 1.0 + 1e-9]
        if bad:
            problems.append(f"{rec.kind.flag}: concurrence values {bad} outside [0, 1]")
    elif any(v < -1e-12 for v in (rec.cut_value, *rec.pair_values)):
        problems.append(f"{rec.kind.flag}: negative base value")
    if rec.kind is MeasureKind.CONCURRENCE_SQ and rec.score < -1e-9:
        problems.append(f"tangle {rec.score!r} below -1e-9")


def _chunk_counts(args):
    ensemble, kinds, nodal, eps, options, check, start, stop = args
    counts = np.zeros(len(kinds), dtype=np.int64)
    problems: list[str] = []
    for i in range(start, stop):
        psi = ensemble.state(i)
        records = evaluate_state(psi, kinds, nodal, options)
        for k_idx, kind in enumerate(kinds):
            rec = records[kind]
            if check and len(problems) < 8:
                _check_record(rec, problems)
            if rec.score >= -eps:
                counts[k_idx] += 1
    return counts, problems


def percentage_table(
    ensemble: EnsembleSpec,
    kinds: Sequence[MeasureKind],
    nodal: int = 1,
    eps: float = DEFAULT_EPS,
    options: OptimizerOptions | None = None,
    workers: int = 1,
    check: bool = False,
) -> list[PercentageRow]:
    """Monogamous percentage of ``ensemble`` for each kind.

    ``workers`` > 1 spreads fixed-size sample chunks over a process pool;
    the counts are integers, so the result is byte-identical for any worker
    count.  With ``check`` set, per-sample consistency assertions run and
    any violation raises InvariantViolation after the sweep.
    """
    options = options or DEFAULT_OPTIMIZER
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    kinds = list(dict.fromkeys(kinds))
    if not kinds:
        raise ValueError("no measure kinds requested")
    if nodal < 1 or nodal > ensemble.n:
        raise ValueError(f"nodal qubit {nodal} outside 1..{ensemble.n}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")

    tasks = [
        (ensemble, kinds, nodal, eps, options, check, start, min(start + _CHUNK, ensemble.samples))
        for start in range(0, ensemble.samples, _CHUNK)
    ]
    counts = np.zeros(len(kinds), dtype=np.int64)
    problems: list[str] = []
    if workers == 1 or len(tasks) == 1:
        results = map(_chunk_counts, tasks)
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        try:
            results = list(pool.map(_chunk_counts, tasks, chunksize=1))
        finally:
            pool.shutdown()
    for part, probs in results:
        counts += part
        problems.extend(probs)
    if check and problems:
        raise InvariantViolation("; ".join(problems[:8]))

    total = ensemble.samples
    return [
        PercentageRow(ensemble, kind, int(counts[i]), total, 100.0 * counts[i] / total, eps)
        for i, kind in enumerate(kinds)
    ]


@dataclass(frozen=True)
class ScalingFit:
    """Power-law fit p_n - p_c ~ n^(-alpha) from a log-log least-squares line."""

    alpha: float
    intercept: float
    residual: float
    p_c: float
    points: tuple[tuple[float, float], ...]


def scaling_fit(points: Iterable[tuple[float, float]], p_c: float) -> ScalingFit:
    """Fit log(p_n - p_c) = -alpha log n + intercept by least squares.

    Every point needs n > 0 and p_n > p_c (the log is undefined otherwise);
    residual is the root-mean-square misfit in log space.  alpha is
    invariant under a common rescaling of p and p_c, so fractions and
    percentages give the same exponent.
    """
    pts = tuple((float(n), float(p)) for n, p in points)
    if len(pts) < 2:
        raise ValueError(f"need at least 2 points, got {len(pts)}")
    for n, p in pts:
        if n <= 0:
            raise ValueError(f"n must be positive, got {n}")
        if p <= p_c:
            raise ValueError(f"p={p} must exceed p_c={p_c} for a log-log fit")
    xs = np.log([n for n, _ in pts])
    ys = np.log([p - p_c for _, p in pts])
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    return ScalingFit(
        alpha=float(-slope),
        intercept=float(intercept),
        residual=float(np.sqrt(np.mean(resid**2))),
        p_c=float(p_c),
        points=pts,
    )
