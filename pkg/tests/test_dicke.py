import numpy as np
import pytest

from qorrelate.dicke import (
    dicke_discord_score,
    dicke_params,
    dicke_tangle,
    dicke_workdeficit_score,
)
from qorrelate.linalg import binary_entropy, entropy_from_probs
from qorrelate.measures import (
    Direction,
    MeasureKind,
    concurrence_pure_cut,
    concurrence_two_qubit,
)
from qorrelate.monogamy import evaluate_state
from qorrelate.states import dicke_pair_populations, dicke_state


def test_params_validation_and_consistency():
    with pytest.raises(ValueError):
        dicke_params(2, 1)
    with pytest.raises(ValueError):
        dicke_params(4, 0)
    with pytest.raises(ValueError):
        dicke_params(4, 4)
    p = dicke_params(5, 2)
    assert (p.a, p.b, p.c) == pytest.approx(dicke_pair_populations(5, 2), abs=1e-15)
    assert p.lambda_plus + p.lambda_minus == pytest.approx(1.0, abs=1e-12)
    assert p.s1 == pytest.approx(binary_entropy(2 / 5), abs=1e-14)
    assert p.s12 == pytest.approx(entropy_from_probs([p.a, 2 * p.b, p.c]), abs=1e-14)


def test_w3_discord_score_frozen():
    # hand recompute from the population parameters
    p = dicke_params(3, 1)
    ref = p.s1 - 2 * (p.s2 - p.s12 + binary_entropy(p.lambda_plus))
    assert dicke_discord_score(3, 1) == pytest.approx(ref, abs=1e-14)
    assert dicke_discord_score(3, 1) == pytest.approx(-0.1817996851110255, abs=1e-12)


def test_w_state_discord_score_negative_small_n():
    for n in range(3, 9):
        assert dicke_discord_score(n, 1) < 0.0


def test_scores_symmetric_in_excitation_flip():
    for n in (3, 4, 5, 7, 10):
        for r in range(1, n // 2 + 1):
            assert dicke_discord_score(n, r) == pytest.approx(
                dicke_discord_score(n, n - r), abs=1e-12
            )
            assert dicke_tangle(n, r) == pytest.approx(dicke_tangle(n, n - r), abs=1e-12)
            wd_a = dicke_workdeficit_score(n, r, Direction.ON_FIRST)
            wd_b = dicke_workdeficit_score(n, n - r, Direction.ON_FIRST)
            assert wd_a == pytest.approx(wd_b, abs=1e-9)


def test_workdeficit_directions_coincide():
    for n, r in ((4, 1), (5, 2), (8, 3)):
        fwd = dicke_workdeficit_score(n, r, Direction.ON_FIRST)
        bwd = dicke_workdeficit_score(n, r, Direction.ON_SECOND)
        assert fwd == pytest.approx(bwd, abs=1e-9)


def test_discord_score_decreases_with_r_at_n8():
    scores = [dicke_discord_score(8, r) for r in range(1, 5)]
    assert all(a > b for a, b in zip(scores, scores[1:]))


def test_workdeficit_score_dips_near_r2_at_n8():
    scores = {r: dicke_workdeficit_score(8, r, Direction.ON_FIRST) for r in range(1, 5)}
    r_min = min(scores, key=scores.get)
    assert abs(r_min - 2) <= 1
    assert scores[3] < scores[4]


def test_tangle_landmarks():
    for n in (3, 5, 8, 12):
        assert dicke_tangle(n, 1) == pytest.approx(0.0, abs=1e-12)
    assert dicke_tangle(4, 2) > 0.0


def test_tangle_matches_dense_route():
    for n in (3, 4, 5, 6):
        for r in range(1, n):
            psi = dicke_state(n, r)
            cut = concurrence_pure_cut(psi, 1)
            pair = concurrence_two_qubit(psi.rdm([1, 2]))
            dense = cut * cut - (n - 1) * pair * pair
            assert dicke_tangle(n, r) == pytest.approx(dense, abs=1e-8)


def test_discord_score_matches_generic_route():
    for n, r in ((3, 1), (4, 2), (5, 2)):
        psi = dicke_state(n, r)
        rec = evaluate_state(psi, [MeasureKind.DISCORD_BWD])[MeasureKind.DISCORD_BWD]
        assert dicke_discord_score(n, r) == pytest.approx(rec.score, abs=1e-4)


def test_workdeficit_score_matches_generic_route():
    for n, r in ((4, 2), (5, 1)):
        psi = dicke_state(n, r)
        rec = evaluate_state(psi, [MeasureKind.WORK_DEFICIT_FWD])[
            MeasureKind.WORK_DEFICIT_FWD
        ]
        ref = dicke_workdeficit_score(n, r, Direction.ON_FIRST)
        assert ref == pytest.approx(rec.score, abs=1e-4)
