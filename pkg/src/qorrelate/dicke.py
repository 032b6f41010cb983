"""Closed-form monogamy scores for Dicke states.

For the n-qubit Dicke state with r excitations the nodal-vs-rest cut value
and all n-1 pair values are available analytically, which keeps the scores
exact at any n (no basis search, no sampling).  The discord pair value uses
the fact that the sigma_x measurement is optimal for the X-shaped Dicke
pair marginal, so the minimal conditional entropy is the binary entropy of
lambda_+ = (1 + sqrt(1 - 4(ab + bc + ca))) / 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .linalg import binary_entropy, entropy_from_probs
from .measures import (
    DEFAULT_OPTIMIZER,
    Direction,
    OptimizerOptions,
    work_deficit_one_way,
)
from .states import dicke_pair_populations, dicke_pair_rdm

LAMBDA_SUM_ATOL = 1e-12


@dataclass(frozen=True)
class DickeParams:
    """Spectral data of the (n, r) Dicke state's one- and two-qubit marginals.

    a, b, c are the pair-marginal populations (both low / one high / both
    high), s1 and s12 the single and pair marginal entropies, s2 the entropy
    of the diagonal pair populations grouped by the first qubit, and
    lambda_plus/lambda_minus the conditional spectrum after a sigma_x
    measurement.
    """

    n: int
    r: int
    a: float
    b: float
    c: float
    s1: float
    s2: float
    s12: float
    lambda_plus: float
    lambda_minus: float


def dicke_params(n: int, r: int) -> DickeParams:
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    if r < 1 or r > n - 1:
        raise ValueError(f"excitation count r={r} outside 1..{n - 1}")
    a, b, c = dicke_pair_populations(n, r)
    s1 = binary_entropy(r / n)
    s2 = entropy_from_probs([a + b, b + c])
    # pair marginal eigenvalues: a, 2b, 0, c
    s12 = entropy_from_probs([a, 2.0 * b, c])
    root = math.sqrt(max(0.0, 1.0 - 4.0 * (a * b + b * c + c * a)))
    lam_p, lam_m = 0.5 * (1.0 + root), 0.5 * (1.0 - root)
    if abs(lam_p + lam_m - 1.0) > LAMBDA_SUM_ATOL:
        raise AssertionError(f"lambda_+ + lambda_- = {lam_p + lam_m!r} != 1")
    return DickeParams(n, r, a, b, c, s1, s2, s12, lam_p, lam_m)


def dicke_discord_score(n: int, r: int) -> float:
    """Monogamy score of discord (measured on the unlabeled side) for the
    (n, r) Dicke state: s1 - (n-1) (s2 - s12 + h(lambda_+))."""
    p = dicke_params(n, r)
    return p.s1 - (n - 1) * (p.s2 - p.s12 + binary_entropy(p.lambda_plus))


def dicke_workdeficit_score(
    n: int, r: int, direction: Direction, options: OptimizerOptions | None = None
) -> float:
    """Monogamy score of the one-way work deficit for the (n, r) Dicke state.

    The cut value is the closed-form s1; the shared pair value comes from
    the deterministic dephasing-basis search on the closed-form pair
    marginal.  Symmetric marginals make both directions coincide.
    """
    p = dicke_params(n, r)
    pair = work_deficit_one_way(dicke_pair_rdm(n, r), direction, options or DEFAULT_OPTIMIZER)
    return p.s1 - (n - 1) * pair


def dicke_tangle(n: int, r: int) -> float:
    """Monogamy score of squared concurrence for the (n, r) Dicke state:
    4 (r/n)(1 - r/n) - (n-1) max(0, 2(b - sqrt(ac)))^2."""
    p = dicke_params(n, r)
    cut_sq = 4.0 * (p.r / p.n) * (1.0 - p.r / p.n)
    pair_c = max(0.0, 2.0 * (p.b - math.sqrt(p.a * p.c)))
    return cut_sq - (n - 1) * pair_c * pair_c
