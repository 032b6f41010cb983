import numpy as np
import pytest

from qorrelate.linalg import DensityMatrix, binary_entropy, von_neumann_entropy
from qorrelate.measures import (
    DEFAULT_OPTIMIZER,
    Direction,
    MeasureKind,
    MeasurementBasis,
    OptimizerOptions,
    concurrence_pure_cut,
    concurrence_two_qubit,
    discord_and_deficit,
    eof_from_concurrence,
    log_negativity,
    measured_conditional_entropy,
    mutual_information,
    negativity,
    pure_cut_value,
    quantum_discord,
    unmeasured_conditional_entropy,
    work_deficit_one_way,
)
from qorrelate.states import PureState, ghz_state, haar_random_pure, w_state

from conftest import oracle_minima, rand_unitary2

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]]),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def bell_dm() -> DensityMatrix:
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1 / np.sqrt(2)
    return DensityMatrix(np.outer(v, v.conj()), (1, 2))


def werner(p: float) -> DensityMatrix:
    v = np.zeros(4, dtype=complex)
    v[1], v[2] = 1 / np.sqrt(2), -1 / np.sqrt(2)
    m = p * np.outer(v, v.conj()) + (1 - p) * np.eye(4) / 4
    return DensityMatrix(m, (1, 2))


def bell_diagonal(c1: float, c2: float, c3: float) -> DensityMatrix:
    m = np.eye(4, dtype=complex)
    for c, s in zip((c1, c2, c3), "xyz"):
        m += c * np.kron(_PAULI[s], _PAULI[s])
    return DensityMatrix(m / 4, (1, 2))


def w3_pair() -> DensityMatrix:
    return w_state(3).rdm([1, 2])


def random_pair(seed: int) -> DensityMatrix:
    return haar_random_pure(4, seed).rdm([1, 2])


def product_dm(seed: int) -> DensityMatrix:
    rng = np.random.default_rng(seed)
    blocks = []
    for _ in range(2):
        g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = g @ g.conj().T
        blocks.append(b / np.trace(b).real)
    return DensityMatrix(np.kron(blocks[0], blocks[1]), (1, 2))


# --- concurrence, EoF, negativity ---


def test_concurrence_landmarks():
    assert concurrence_two_qubit(bell_dm()) == pytest.approx(1.0, abs=1e-12)
    assert concurrence_two_qubit(product_dm(0)) == pytest.approx(0.0, abs=1e-8)
    assert concurrence_two_qubit(w3_pair()) == pytest.approx(2 / 3, abs=1e-12)
    # Werner state: C = max(0, (3p-1)/2)
    assert concurrence_two_qubit(werner(0.5)) == pytest.approx(0.25, abs=1e-12)
    assert concurrence_two_qubit(werner(1 / 3)) == pytest.approx(0.0, abs=1e-10)


def test_concurrence_matches_nonhermitian_route():
    # same quantity via eigenvalues of rho @ rho_tilde instead of the
    # symmetrized sqrt construction
    yy = np.kron(_PAULI["y"], _PAULI["y"])
    rng = np.random.default_rng(21)
    for seed in range(10):
        rho = random_pair(seed + 100)
        tilde = yy @ rho.matrix.conj() @ yy
        lam = np.sqrt(np.abs(np.linalg.eigvals(rho.matrix @ tilde).real))
        lam.sort()
        ref = max(0.0, lam[-1] - lam[:-1].sum())
        assert concurrence_two_qubit(rho) == pytest.approx(ref, abs=1e-8)


def test_eof_from_concurrence():
    assert eof_from_concurrence(0.0) == 0.0
    assert eof_from_concurrence(1.0) == pytest.approx(1.0, abs=1e-14)
    ref = binary_entropy((1 + np.sqrt(1 - 4 / 9)) / 2)
    assert eof_from_concurrence(2 / 3) == pytest.approx(ref, abs=1e-15)
    assert eof_from_concurrence(2 / 3) == pytest.approx(0.5500477595827573, abs=1e-13)


def test_negativity_landmarks():
    assert negativity(bell_dm(), [1]) == pytest.approx(0.5, abs=1e-12)
    assert log_negativity(bell_dm(), [1]) == pytest.approx(1.0, abs=1e-12)
    assert negativity(product_dm(1), [1]) == pytest.approx(0.0, abs=1e-10)
    # Werner PT eigenvalue (1-3p)/4
    assert negativity(werner(0.5), [1]) == pytest.approx(1 / 8, abs=1e-12)
    assert negativity(werner(1 / 3), [1]) == pytest.approx(0.0, abs=1e-12)


def test_pure_cut_negativity_is_half_concurrence():
    for seed in range(5):
        psi = haar_random_pure(3, seed + 11)
        c = concurrence_pure_cut(psi, 1)
        n = negativity(psi.projector(), [1])
        assert 2 * n == pytest.approx(c, abs=1e-8)


def test_mutual_information_landmarks():
    assert mutual_information(bell_dm()) == pytest.approx(2.0, abs=1e-9)
    assert mutual_information(product_dm(2)) == pytest.approx(0.0, abs=1e-9)


def test_unmeasured_conditional_entropy():
    assert unmeasured_conditional_entropy(bell_dm()) == pytest.approx(-1.0, abs=1e-9)
    assert unmeasured_conditional_entropy(product_dm(3)) >= -1e-10


# --- bases, options, kinds ---


def test_measurement_basis_projectors():
    b = MeasurementBasis(0.7, 1.3)
    p0, p1 = b.projectors()
    assert np.allclose(p0 + p1, np.eye(2), atol=1e-14)
    assert np.allclose(p0 @ p0, p0, atol=1e-14)
    assert np.allclose(p0 @ p1, 0.0, atol=1e-14)
    with pytest.raises(ValueError):
        MeasurementBasis(3.5, 0.0)
    with pytest.raises(ValueError):
        MeasurementBasis(-0.1, 0.0)


def test_optimizer_options_validation():
    OptimizerOptions(grid_theta=10, grid_phi=10, starts=1)
    with pytest.raises(ValueError):
        OptimizerOptions(grid_theta=1)
    with pytest.raises(ValueError):
        OptimizerOptions(starts=0)
    with pytest.raises(ValueError):
        OptimizerOptions(step_tol=-1.0)


def test_measure_kind_flags_roundtrip():
    flags = [k.flag for k in MeasureKind]
    assert len(set(flags)) == 16
    for k in MeasureKind:
        assert MeasureKind.from_flag(k.flag) is k
    with pytest.raises(ValueError):
        MeasureKind.from_flag("nope")


def test_measure_kind_structure():
    assert MeasureKind.CONCURRENCE_SQ.squared
    assert MeasureKind.CONCURRENCE_SQ.base is MeasureKind.CONCURRENCE
    assert not MeasureKind.DISCORD_FWD.squared
    assert MeasureKind.DISCORD_SQ_BWD.base is MeasureKind.DISCORD_BWD
    assert MeasureKind.DISCORD_FWD.direction is Direction.ON_FIRST
    assert MeasureKind.WORK_DEFICIT_BWD.direction is Direction.ON_SECOND
    assert MeasureKind.EOF.direction is None
    assert Direction.from_flag("fwd") is Direction.ON_FIRST
    assert Direction.from_flag("bwd") is Direction.ON_SECOND


# --- discord and work deficit ---


def test_discord_zero_for_classical_states():
    diag = DensityMatrix(np.diag([0.6, 0.0, 0.0, 0.4]).astype(complex), (1, 2))
    for d in Direction:
        assert quantum_discord(diag, d) == pytest.approx(0.0, abs=1e-9)
        assert quantum_discord(product_dm(4), d) == pytest.approx(0.0, abs=1e-8)


def test_discord_of_bell_state_is_one():
    for d in Direction:
        assert quantum_discord(bell_dm(), d) == pytest.approx(1.0, abs=1e-9)


def test_pure_state_discord_equals_entanglement():
    # for pure two-qubit states discord, EoF and the marginal entropy agree
    for seed in range(4):
        psi = haar_random_pure(2, seed + 30)
        dm = psi.projector()
        ent = von_neumann_entropy(psi.rdm([1]))
        eof = eof_from_concurrence(concurrence_two_qubit(dm))
        assert eof == pytest.approx(ent, abs=1e-7)
        for d in Direction:
            assert quantum_discord(dm, d) == pytest.approx(ent, abs=1e-6)
            assert work_deficit_one_way(dm, d) == pytest.approx(ent, abs=1e-6)


def test_bell_diagonal_states_match_closed_form():
    # for Bell-diagonal states the optimal measurement lies along the
    # largest |c_i| axis: min conditional entropy is h((1+c)/2) and the
    # one-way deficit coincides with the discord
    cases = [(0.5, -0.3, 0.2), (-0.7, 0.1, 0.1), (0.25, 0.25, -0.25)]
    for c in cases:
        rho = bell_diagonal(*c)
        cmax = max(abs(x) for x in c)
        ref = 1.0 - von_neumann_entropy(rho) + binary_entropy((1 + cmax) / 2)
        ref = max(0.0, ref)
        for d in Direction:
            assert quantum_discord(rho, d) == pytest.approx(ref, abs=1e-7)
            assert work_deficit_one_way(rho, d) == pytest.approx(ref, abs=1e-7)


def test_werner_discord_closed_form():
    p = 0.5
    rho = werner(p)
    ref = 1.0 - von_neumann_entropy(rho) + binary_entropy((1 + p) / 2)
    for d in Direction:
        assert quantum_discord(rho, d) == pytest.approx(ref, abs=1e-7)


def test_w3_pair_frozen_values():
    rho = w3_pair()
    # the pair marginal is swap symmetric so both directions coincide
    assert quantum_discord(rho, Direction.ON_SECOND) == pytest.approx(
        0.5500477595827573, abs=1e-7
    )
    assert quantum_discord(rho, Direction.ON_FIRST) == pytest.approx(
        0.5500477595827573, abs=1e-7
    )
    assert work_deficit_one_way(rho, Direction.ON_SECOND) == pytest.approx(
        0.6314420156377429, abs=1e-7
    )


def test_w3_pair_against_dense_grid_oracle():
    # independent dense search (1000 x 2000 grid plus local refinement)
    rho = w3_pair()
    s_pair = von_neumann_entropy(rho)
    mce_min, deph_min = oracle_minima(rho.matrix, Direction.ON_SECOND, 1000, 2000)
    s_b = von_neumann_entropy(w_state(3).rdm([2]))
    assert quantum_discord(rho, Direction.ON_SECOND) == pytest.approx(
        s_b - s_pair + mce_min, abs=1e-4
    )
    assert work_deficit_one_way(rho, Direction.ON_SECOND) == pytest.approx(
        deph_min - s_pair, abs=1e-4
    )


def test_random_pairs_against_dense_grid_oracle():
    for seed in (201, 202, 203):
        rho = random_pair(seed)
        s_pair = von_neumann_entropy(rho)
        s_first = von_neumann_entropy(partial_first(rho))
        s_second = von_neumann_entropy(partial_second(rho))
        for direction, s_meas in (
            (Direction.ON_FIRST, s_first),
            (Direction.ON_SECOND, s_second),
        ):
            mce_min, deph_min = oracle_minima(rho.matrix, direction, 120, 240)
            d_ref = max(0.0, s_meas - s_pair + mce_min)
            wd_ref = max(0.0, deph_min - s_pair)
            d, wd = discord_and_deficit(rho, direction)
            assert d == pytest.approx(d_ref, abs=2e-5)
            assert wd == pytest.approx(wd_ref, abs=2e-5)


def partial_first(rho: DensityMatrix) -> DensityMatrix:
    from qorrelate.linalg import partial_trace

    return partial_trace(rho, [rho.qubits[0]])


def partial_second(rho: DensityMatrix) -> DensityMatrix:
    from qorrelate.linalg import partial_trace

    return partial_trace(rho, [rho.qubits[1]])


def test_deficit_dominates_discord():
    for seed in range(5):
        rho = random_pair(seed + 300)
        for direction in Direction:
            d, wd = discord_and_deficit(rho, direction)
            assert wd >= d - 1e-9
            assert d >= 0.0 and wd >= 0.0


def test_discord_and_deficit_matches_separate_calls():
    rho = random_pair(400)
    for direction in Direction:
        d, wd = discord_and_deficit(rho, direction)
        assert d == pytest.approx(quantum_discord(rho, direction), abs=1e-9)
        assert wd == pytest.approx(work_deficit_one_way(rho, direction), abs=1e-9)


def test_measured_conditional_entropy_explicit_basis():
    # measuring a Bell state in any basis leaves a pure conditional state
    for theta, phi in [(0.0, 0.0), (np.pi / 2, 0.3), (1.1, 4.0)]:
        mce = measured_conditional_entropy(
            bell_dm(), MeasurementBasis(theta, phi), Direction.ON_FIRST
        )
        assert mce == pytest.approx(0.0, abs=1e-10)
    # product of maximally mixed qubits: conditional entropy is 1 always
    mixed = DensityMatrix(np.eye(4) / 4, (1, 2))
    assert measured_conditional_entropy(
        mixed, MeasurementBasis(0.4, 2.0), Direction.ON_SECOND
    ) == pytest.approx(1.0, abs=1e-12)


def test_local_unitary_invariance():
    rng = np.random.default_rng(55)
    rho = random_pair(500)
    base_d = quantum_discord(rho, Direction.ON_SECOND)
    base_wd = work_deficit_one_way(rho, Direction.ON_SECOND)
    for _ in range(3):
        u = np.kron(rand_unitary2(rng), rand_unitary2(rng))
        rotated = DensityMatrix(u @ rho.matrix @ u.conj().T, (1, 2))
        assert quantum_discord(rotated, Direction.ON_SECOND) == pytest.approx(
            base_d, abs=5e-5
        )
        assert work_deficit_one_way(rotated, Direction.ON_SECOND) == pytest.approx(
            base_wd, abs=5e-5
        )


# --- pure cut values ---


def test_concurrence_pure_cut_landmarks():
    assert concurrence_pure_cut(ghz_state(3), 1) == pytest.approx(1.0, abs=1e-12)
    assert concurrence_pure_cut(w_state(3), 1) == pytest.approx(
        2 * np.sqrt(2 / 9), abs=1e-12
    )
    prod = PureState(3, np.kron([1, 0], np.kron([1, 0], [0, 1])).astype(complex))
    assert concurrence_pure_cut(prod, 1) == 0.0


def test_pure_cut_value_per_kind():
    g = ghz_state(3)
    assert pure_cut_value(g, 1, MeasureKind.CONCURRENCE) == pytest.approx(1.0, abs=1e-12)
    assert pure_cut_value(g, 1, MeasureKind.EOF) == pytest.approx(1.0, abs=1e-12)
    assert pure_cut_value(g, 1, MeasureKind.NEGATIVITY) == pytest.approx(0.5, abs=1e-12)
    assert pure_cut_value(g, 1, MeasureKind.LOG_NEGATIVITY) == pytest.approx(1.0, abs=1e-12)
    assert pure_cut_value(g, 1, MeasureKind.DISCORD_FWD) == pytest.approx(1.0, abs=1e-12)
    assert pure_cut_value(g, 1, MeasureKind.WORK_DEFICIT_BWD) == pytest.approx(1.0, abs=1e-12)
    # squared kinds square the cut value
    w = w_state(3)
    c = pure_cut_value(w, 1, MeasureKind.CONCURRENCE)
    assert pure_cut_value(w, 1, MeasureKind.CONCURRENCE_SQ) == pytest.approx(c * c, abs=1e-14)
    n = pure_cut_value(w, 1, MeasureKind.NEGATIVITY)
    assert pure_cut_value(w, 1, MeasureKind.NEGATIVITY_SQ) == pytest.approx(n * n, abs=1e-14)
    # entropy-based cuts use the nodal marginal entropy
    psi = haar_random_pure(3, 708)
    assert pure_cut_value(psi, 2, MeasureKind.EOF) == pytest.approx(
        von_neumann_entropy(psi.rdm([2])), abs=1e-12
    )
