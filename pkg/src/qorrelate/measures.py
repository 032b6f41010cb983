"""Bipartite correlation measures for two-qubit states and pure cuts.

Entanglement measures (concurrence, entanglement of formation, negativity,
logarithmic negativity) are closed-form.  The measurement-based quantities
(quantum discord, one-way work deficit) minimize over rank-one projective
measurements of a single qubit, parameterized by Bloch angles (theta, phi).
The minimizer is deterministic: a fixed (theta, phi) grid followed by a
compass pattern search from the best grid points, so repeated runs agree
bit for bit.  Any basis the search misses can only overestimate discord
and work deficit, never underestimate them.

Direction convention: "fwd" measures or dephases the first subsystem of the
pair (the nodal side in monogamy sweeps), "bwd" the second.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .linalg import (
    DensityMatrix,
    entropy_from_probs,
    binary_entropy,
    partial_trace,
    partial_transpose,
    trace_norm_hermitian,
    von_neumann_entropy,
    _xlog2x,
)
from .states import PureState


class Direction(Enum):
    """Which subsystem of an ordered pair is measured or dephased."""

    ON_FIRST = "fwd"
    ON_SECOND = "bwd"

    @classmethod
    def from_flag(cls, flag: str) -> "Direction":
        for d in cls:
            if d.value == flag:
                return d
        raise ValueError(f"unknown direction {flag!r}, expected 'fwd' or 'bwd'")


@dataclass(frozen=True)
class MeasurementBasis:
    """Rank-one projective qubit measurement along the Bloch direction
    (theta, phi); theta in [0, pi], phi reduced mod 2*pi."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (-1e-12 <= self.theta <= math.pi + 1e-12):
            raise ValueError(f"theta {self.theta!r} outside [0, pi]")
        object.__setattr__(self, "theta", float(min(max(self.theta, 0.0), math.pi)))
        object.__setattr__(self, "phi", float(self.phi) % (2.0 * math.pi))

    def vectors(self) -> tuple[np.ndarray, np.ndarray]:
        """Orthonormal measurement vectors |+n> and |-n>."""
        half = 0.5 * self.theta
        c, s = math.cos(half), math.sin(half)
        e = complex(math.cos(self.phi), math.sin(self.phi))
        vp = np.array([c, s * e], dtype=np.complex128)
        vm = np.array([-s * e.conjugate(), c], dtype=np.complex128)
        return vp, vm

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        vp, vm = self.vectors()
        return np.outer(vp, vp.conj()), np.outer(vm, vm.conj())


@dataclass(frozen=True)
class OptimizerOptions:
    """Deterministic measurement-basis search: uniform grid, then compass
    pattern search from the best ``starts`` grid points, halving the step
    until it drops below ``step_tol`` radians."""

    grid_theta: int = 60
    grid_phi: int = 120
    starts: int = 3
    step_tol: float = 1e-5
    objective_tol: float = 1e-7
    max_iters: int = 500

    def __post_init__(self):
        if self.grid_theta < 2 or self.grid_phi < 2:
            raise ValueError("grid must have at least 2 points per axis")
        if self.starts < 1:
            raise ValueError("need at least one refinement start")
        if self.step_tol <= 0 or self.objective_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


DEFAULT_OPTIMIZER = OptimizerOptions()


class MeasureKind(Enum):
    """The sixteen scored quantities; values are the CLI flags."""

    CONCURRENCE = "c"
    CONCURRENCE_SQ = "c2"
    EOF = "e"
    EOF_SQ = "e2"
    NEGATIVITY = "n"
    NEGATIVITY_SQ = "n2"
    LOG_NEGATIVITY = "ln"
    LOG_NEGATIVITY_SQ = "ln2"
    DISCORD_FWD = "d-fwd"
    DISCORD_BWD = "d-bwd"
    DISCORD_SQ_FWD = "d2-fwd"
    DISCORD_SQ_BWD = "d2-bwd"
    WORK_DEFICIT_FWD = "wd-fwd"
    WORK_DEFICIT_BWD = "wd-bwd"
    WORK_DEFICIT_SQ_FWD = "wd2-fwd"
    WORK_DEFICIT_SQ_BWD = "wd2-bwd"

    @property
    def flag(self) -> str:
        return self.value

    @property
    def squared(self) -> bool:
        return self in _SQUARED_OF

    @property
    def base(self) -> "MeasureKind":
        """The unsquared kind scoring the same underlying quantity."""
        return _SQUARED_OF.get(self, self)

    @property
    def direction(self) -> Direction | None:
        """Measurement direction for discord and work-deficit kinds."""
        if self.value.endswith("-fwd"):
            return Direction.ON_FIRST
        if self.value.endswith("-bwd"):
            return Direction.ON_SECOND
        return None

    @classmethod
    def from_flag(cls, flag: str) -> "MeasureKind":
        for k in cls:
            if k.value == flag:
                return k
        raise ValueError(f"unknown measure flag {flag!r}")


_SQUARED_OF = {
    MeasureKind.CONCURRENCE_SQ: MeasureKind.CONCURRENCE,
    MeasureKind.EOF_SQ: MeasureKind.EOF,
    MeasureKind.NEGATIVITY_SQ: MeasureKind.NEGATIVITY,
    MeasureKind.LOG_NEGATIVITY_SQ: MeasureKind.LOG_NEGATIVITY,
    MeasureKind.DISCORD_SQ_FWD: MeasureKind.DISCORD_FWD,
    MeasureKind.DISCORD_SQ_BWD: MeasureKind.DISCORD_BWD,
    MeasureKind.WORK_DEFICIT_SQ_FWD: MeasureKind.WORK_DEFICIT_FWD,
    MeasureKind.WORK_DEFICIT_SQ_BWD: MeasureKind.WORK_DEFICIT_BWD,
}

_SY_SY = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=np.float64
)


def _require_pair(rho: DensityMatrix) -> np.ndarray:
    if rho.n_qubits != 2:
        raise ValueError(f"expected a two-qubit state, got {rho.n_qubits} qubit(s)")
    return rho.matrix


def concurrence_two_qubit(rho: DensityMatrix) -> float:
    """Concurrence of a two-qubit mixed state.

    max(0, l1 - l2 - l3 - l4) where the l_i are the descending singular
    values of the symmetric matrix tau_ij = sqrt(w_i w_j) <phi_i| sy x sy
    |phi_j*> built from the eigensystem of rho.  Singular values are
    perfectly conditioned, so exact zeros stay at machine precision instead
    of picking up sqrt-amplified noise from the rho * rho~ spectrum.
    """
    m = _require_pair(rho)
    w, phi = np.linalg.eigh(m)
    tau = np.sqrt(np.outer(np.clip(w, 0.0, None), np.clip(w, 0.0, None)))
    tau = tau * (phi.T @ _SY_SY @ phi)
    lam = np.linalg.svd(tau, compute_uv=False)
    return float(min(1.0, max(0.0, 2.0 * lam[0] - lam.sum())))


def eof_from_concurrence(c: float) -> float:
    """Entanglement of formation in bits as a function of concurrence."""
    if c < -1e-12 or c > 1.0 + 1e-12:
        raise ValueError(f"concurrence {c!r} outside [0, 1]")
    c = min(max(c, 0.0), 1.0)
    return binary_entropy(0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - c * c))))


def negativity(rho: DensityMatrix, part) -> float:
    """(||rho^{T_part}||_1 - 1) / 2."""
    return max(0.0, 0.5 * (trace_norm_hermitian(partial_transpose(rho, part)) - 1.0))


def log_negativity(rho: DensityMatrix, part) -> float:
    """log2 ||rho^{T_part}||_1 = log2(2 N + 1)."""
    return math.log2(1.0 + 2.0 * negativity(rho, part))


def mutual_information(rho: DensityMatrix) -> float:
    """I = S(first) + S(second) - S(pair) for a two-qubit state."""
    _require_pair(rho)
    q1, q2 = rho.qubits
    s1 = von_neumann_entropy(partial_trace(rho, (q1,)))
    s2 = von_neumann_entropy(partial_trace(rho, (q2,)))
    return s1 + s2 - von_neumann_entropy(rho)


def unmeasured_conditional_entropy(rho: DensityMatrix) -> float:
    """S(pair) - S(second marginal); may be negative for entangled states."""
    _require_pair(rho)
    return von_neumann_entropy(rho) - von_neumann_entropy(partial_trace(rho, (rho.qubits[1],)))


# ---------------------------------------------------------------------------
# measurement-basis search


def _basis_vector_pairs(thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """Both outcome vectors for each (theta, phi); shape (2, K, 2)."""
    half = 0.5 * thetas
    c, s = np.cos(half), np.sin(half)
    e = np.exp(1j * phis)
    vp = np.stack([c + 0j, s * e], axis=-1)
    vm = np.stack([-s * e.conj(), c + 0j], axis=-1)
    return np.stack([vp, vm])


def _measured_flat(r4: np.ndarray, direction: Direction) -> np.ndarray:
    """Pair matrix recast as a 4 x 4 map from the measured side's index pair
    (row, col) to the kept side's, so conditional blocks become one matmul."""
    if direction is Direction.ON_SECOND:
        m = r4.transpose(1, 3, 0, 2)
    else:
        m = r4.transpose(0, 2, 1, 3)
    return np.ascontiguousarray(m.reshape(4, 4))


def _fast_xlog2x(x: np.ndarray) -> np.ndarray:
    # x >= 0; x * log2(max(x, tiny)) is exactly 0 at x = 0
    return x * np.log2(np.maximum(x, 1e-300))


def _entropy_pair(m4: np.ndarray, v: np.ndarray):
    """Measured conditional entropy and dephased entropy per basis point.

    m4 comes from _measured_flat; v has shape (2, K, 2).  Works on the
    unnormalized conditional blocks B_o = <v_o| rho |v_o> (partial inner
    product on the measured side): their eigenvalue union is the
    dephased-state spectrum, their traces the outcome probabilities, and
    S_meas = S_deph - H(p).
    """
    w = (v.conj()[:, :, :, None] * v[:, :, None, :]).reshape(2, -1, 4)
    blocks = (w @ m4).reshape(2, -1, 2, 2)
    b00 = blocks[..., 0, 0].real
    b11 = blocks[..., 1, 1].real
    off = blocks[..., 0, 1]
    prob = np.clip(b00 + b11, 0.0, None)
    gap = np.sqrt((b00 - b11) ** 2 + 4.0 * (off.real**2 + off.imag**2))
    mu_hi = np.clip(0.5 * (prob + gap), 0.0, None)
    mu_lo = np.clip(0.5 * (prob - gap), 0.0, None)
    deph = -(_fast_xlog2x(mu_hi) + _fast_xlog2x(mu_lo)).sum(axis=0)
    mce = deph + _fast_xlog2x(prob).sum(axis=0)
    return mce, deph


def measured_conditional_entropy(
    rho: DensityMatrix, basis: MeasurementBasis, direction: Direction
) -> float:
    """Average post-measurement entropy of the unmeasured qubit,
    sum_i p_i S(rho | outcome i), for the given basis on one side."""
    m = _require_pair(rho)
    v = _basis_vector_pairs(np.array([basis.theta]), np.array([basis.phi]))
    mce, _ = _entropy_pair(_measured_flat(m.reshape(2, 2, 2, 2), direction), v)
    return float(mce[0])


_GRID_CACHE: dict[tuple[int, int], tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def _grid(options: OptimizerOptions):
    key = (options.grid_theta, options.grid_phi)
    hit = _GRID_CACHE.get(key)
    if hit is None:
        thetas = np.linspace(0.0, math.pi, options.grid_theta)
        phis = np.linspace(0.0, 2.0 * math.pi, options.grid_phi, endpoint=False)
        tg, pg = np.meshgrid(thetas, phis, indexing="ij")
        tg, pg = tg.ravel(), pg.ravel()
        hit = (tg, pg, _basis_vector_pairs(tg, pg))
        _GRID_CACHE[key] = hit
    return hit


@dataclass(frozen=True)
class MeasurementOptimum:
    """Minima of the two measurement objectives over bases on one side."""

    mce: float | None
    mce_basis: MeasurementBasis | None
    dephased_entropy: float | None
    dephased_basis: MeasurementBasis | None


def _minimize_measurement(
    r4: np.ndarray,
    direction: Direction,
    options: OptimizerOptions,
    want_mce: bool = True,
    want_deph: bool = True,
) -> MeasurementOptimum:
    tg, pg, vg = _grid(options)
    m4 = _measured_flat(r4, direction)
    mce_g, deph_g = _entropy_pair(m4, vg)

    objectives = []
    if want_mce:
        objectives.append(0)
    if want_deph:
        objectives.append(1)
    if not objectives:
        raise ValueError("nothing to minimize")
    grids = (mce_g, deph_g)

    # searcher state, one row per (objective, start)
    ts, ps, fs, obj = [], [], [], []
    n_starts = min(options.starts, len(tg))
    for o in objectives:
        order = np.argpartition(grids[o], n_starts - 1)[:n_starts]
        for i in order:
            ts.append(tg[i])
            ps.append(pg[i])
            fs.append(grids[o][i])
            obj.append(o)
    ts = np.array(ts)
    ps = np.array(ps)
    fs = np.array(fs)
    obj = np.array(obj)

    h0 = max(math.pi / (options.grid_theta - 1), 2.0 * math.pi / options.grid_phi)
    hs = np.full(len(ts), h0)
    active = hs >= options.step_tol

    for _ in range(options.max_iters):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        t0, p0, h = ts[idx], ps[idx], hs[idx]
        cand_t = np.stack([t0 + h, t0 - h, t0, t0], axis=1)
        cand_p = np.stack([p0, p0, p0 + h, p0 - h], axis=1)
        cand_t = np.clip(cand_t, 0.0, math.pi)
        cand_p = np.mod(cand_p, 2.0 * math.pi)
        v = _basis_vector_pairs(cand_t.ravel(), cand_p.ravel())
        mce_c, deph_c = _entropy_pair(m4, v)
        vals = np.where(obj[idx, None] == 0, mce_c.reshape(-1, 4), deph_c.reshape(-1, 4))
        best_j = np.argmin(vals, axis=1)
        best_v = vals[np.arange(len(idx)), best_j]
        improved = best_v < fs[idx]
        small = fs[idx] - best_v <= options.objective_tol
        rows = idx[improved]
        ts[rows] = cand_t[improved, best_j[improved]]
        ps[rows] = cand_p[improved, best_j[improved]]
        fs[rows] = best_v[improved]
        hs[idx[small | ~improved]] *= 0.5
        active = hs >= options.step_tol

    def _pick(o: int):
        rows = np.flatnonzero(obj == o)
        if len(rows) == 0:
            return None, None
        r = rows[np.argmin(fs[rows])]
        return float(fs[r]), MeasurementBasis(float(ts[r]), float(ps[r]))

    mce_min, mce_basis = _pick(0) if want_mce else (None, None)
    deph_min, deph_basis = _pick(1) if want_deph else (None, None)
    return MeasurementOptimum(mce_min, mce_basis, deph_min, deph_basis)


def _pair_pieces(m: np.ndarray):
    r4 = m.reshape(2, 2, 2, 2)
    rho_first = np.einsum("abcb->ac", r4)
    rho_second = np.einsum("abad->bd", r4)
    s_first = entropy_from_probs(np.linalg.eigvalsh(0.5 * (rho_first + rho_first.conj().T)))
    s_second = entropy_from_probs(np.linalg.eigvalsh(0.5 * (rho_second + rho_second.conj().T)))
    s_pair = entropy_from_probs(np.linalg.eigvalsh(m))
    return r4, s_first, s_second, s_pair


def quantum_discord(
    rho: DensityMatrix, direction: Direction, options: OptimizerOptions | None = None
) -> float:
    """Quantum discord of a two-qubit state, measuring the side selected by
    ``direction``: I(rho) minus the classical correlations
    J = S(unmeasured) - min_basis S(unmeasured | measured)."""
    options = options or DEFAULT_OPTIMIZER
    m = _require_pair(rho)
    r4, s_first, s_second, s_pair = _pair_pieces(m)
    opt = _minimize_measurement(r4, direction, options, want_mce=True, want_deph=False)
    s_meas = s_first if direction is Direction.ON_FIRST else s_second
    return max(0.0, s_meas - s_pair + opt.mce)


def work_deficit_one_way(
    rho: DensityMatrix, direction: Direction, options: OptimizerOptions | None = None
) -> float:
    """One-way quantum work deficit: min over dephasing bases on the
    ``direction`` side of S(dephased state) - S(state), clamped at zero."""
    options = options or DEFAULT_OPTIMIZER
    m = _require_pair(rho)
    r4 = m.reshape(2, 2, 2, 2)
    s_pair = entropy_from_probs(np.linalg.eigvalsh(m))
    opt = _minimize_measurement(r4, direction, options, want_mce=False, want_deph=True)
    return max(0.0, opt.dephased_entropy - s_pair)


def discord_and_deficit(
    rho: DensityMatrix, direction: Direction, options: OptimizerOptions | None = None
) -> tuple[float, float]:
    """Discord and one-way work deficit for one side, sharing a single
    basis search (the two objectives reuse the same conditional blocks)."""
    options = options or DEFAULT_OPTIMIZER
    m = _require_pair(rho)
    r4, s_first, s_second, s_pair = _pair_pieces(m)
    opt = _minimize_measurement(r4, direction, options, want_mce=True, want_deph=True)
    s_meas = s_first if direction is Direction.ON_FIRST else s_second
    discord = max(0.0, s_meas - s_pair + opt.mce)
    deficit = max(0.0, opt.dephased_entropy - s_pair)
    return discord, deficit


# ---------------------------------------------------------------------------
# pure-cut values


def concurrence_pure_cut(psi: PureState, nodal: int) -> float:
    """Concurrence across the nodal-vs-rest cut of a pure state:
    2 sqrt(det rho_nodal)."""
    m = partial_trace(psi, (nodal,)).matrix
    det = float((m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]).real)
    return 2.0 * math.sqrt(min(max(det, 0.0), 0.25))


def pure_cut_value(psi: PureState, nodal: int, kind: MeasureKind) -> float:
    """Value of ``kind`` across the 2 x 2^(n-1) cut separating the nodal
    qubit from the rest.

    Entropy-based kinds (EoF, discord, work deficit) all equal the nodal
    marginal entropy on a pure cut, with no basis search; negativity kinds
    go through the partial transpose of the projector.
    """
    base = kind.base
    if base is MeasureKind.CONCURRENCE:
        value = concurrence_pure_cut(psi, nodal)
    elif base in (MeasureKind.NEGATIVITY, MeasureKind.LOG_NEGATIVITY):
        neg = negativity(psi.projector(), (nodal,))
        value = neg if base is MeasureKind.NEGATIVITY else math.log2(1.0 + 2.0 * neg)
    else:
        value = von_neumann_entropy(partial_trace(psi, (nodal,)))
    return value * value if kind.squared else value
