"""Dense linear algebra for small qubit registers.

Conventions used throughout the package:

* qubit labels are 1-based,
* qubit 1 is the most significant bit of the computational-basis index,
  so for two qubits the basis ordering is ``|00>, |01>, |10>, |11>``,
* entropies are in bits (log base 2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

HERMITICITY_ATOL = 1e-10
TRACE_ATOL = 1e-10
EIGENVALUE_FLOOR = -1e-9
# full spectrum validation is only run up to this dimension (7 qubits);
# larger matrices (pure-state projectors up to 12 qubits) get the cheap checks
SPECTRUM_CHECK_MAX_DIM = 128
MAX_DENSE_QUBITS = 12


class InvalidSubsetError(ValueError):
    """A qubit subset is empty, has duplicates, or names absent qubits."""


class NotHermitianError(ValueError):
    """An operation that requires a hermitian input got a non-hermitian one."""


def _as_square_array(m, name: str = "matrix") -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be a square 2d array, got shape {a.shape}")
    return a


def hermiticity_defect(m) -> float:
    """Largest absolute deviation of m from its conjugate transpose."""
    a = _as_square_array(m)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - a.conj().T)))


def _require_hermitian(a: np.ndarray, name: str = "matrix") -> None:
    defect = float(np.max(np.abs(a - a.conj().T)))
    if defect > HERMITICITY_ATOL:
        raise NotHermitianError(
            f"{name} is not hermitian (max deviation {defect:.3e} > {HERMITICITY_ATOL:.0e})"
        )


def _xlog2x(w: np.ndarray) -> np.ndarray:
    out = np.zeros_like(w)
    pos = w > 0.0
    out[pos] = w[pos] * np.log2(w[pos])
    return out


def entropy_from_probs(w: Sequence[float] | np.ndarray) -> float:
    """Shannon entropy in bits of a probability vector; entries clamped to [0, 1]."""
    p = np.clip(np.asarray(w, dtype=np.float64), 0.0, 1.0)
    return float(-np.sum(_xlog2x(p))) + 0.0  # keep -0.0 out of reports


def binary_entropy(x: float) -> float:
    """h(x) = -x log2 x - (1-x) log2(1-x), with h(0) = h(1) = 0."""
    if x < -1e-12 or x > 1.0 + 1e-12:
        raise ValueError(f"binary_entropy argument {x!r} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    return entropy_from_probs(np.array([x, 1.0 - x]))


def hermitian_eigvals(m) -> np.ndarray:
    """Eigenvalues of a hermitian matrix, ascending."""
    a = _as_square_array(m)
    _require_hermitian(a)
    return np.linalg.eigvalsh(a)


def matrix_sqrt_psd(m) -> np.ndarray:
    """Principal square root of a positive semidefinite hermitian matrix.

    Eigenvalues in [-1e-9, 0) are clamped to zero; anything below that is
    rejected as genuinely non-PSD.
    """
    a = _as_square_array(m)
    _require_hermitian(a)
    w, v = np.linalg.eigh(a)
    if w[0] < EIGENVALUE_FLOOR:
        raise ValueError(f"matrix is not PSD (min eigenvalue {w[0]:.3e})")
    w = np.clip(w, 0.0, None)
    root = (v * np.sqrt(w)) @ v.conj().T
    return 0.5 * (root + root.conj().T)


def trace_norm_hermitian(m) -> float:
    """Sum of absolute eigenvalues of a hermitian matrix."""
    a = _as_square_array(m)
    _require_hermitian(a)
    return float(np.sum(np.abs(np.linalg.eigvalsh(a))))


def _check_labels(qubits: tuple[int, ...]) -> None:
    if len(qubits) == 0:
        raise ValueError("a density matrix needs at least one qubit label")
    for q in qubits:
        if not isinstance(q, int) or q < 1:
            raise ValueError(f"qubit labels must be positive integers, got {q!r}")
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"duplicate qubit labels in {qubits}")


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density matrix over an ordered tuple of labeled qubits.

    Construction checks hermiticity (1e-10), unit trace (1e-10) and, for
    dimensions up to 128, that the minimum eigenvalue is >= -1e-9.
    """

    matrix: np.ndarray
    qubits: tuple[int, ...]

    def __post_init__(self):
        a = _as_square_array(self.matrix, "density matrix")
        qubits = tuple(int(q) for q in self.qubits)
        _check_labels(qubits)
        if len(qubits) > MAX_DENSE_QUBITS:
            raise ValueError(f"at most {MAX_DENSE_QUBITS} qubits supported, got {len(qubits)}")
        if a.shape[0] != 2 ** len(qubits):
            raise ValueError(
                f"dimension {a.shape[0]} does not match {len(qubits)} qubit(s)"
            )
        _require_hermitian(a, "density matrix")
        tr = complex(np.trace(a))
        if abs(tr - 1.0) > TRACE_ATOL:
            raise ValueError(f"trace {tr:.12g} is not 1 within {TRACE_ATOL:.0e}")
        if a.shape[0] <= SPECTRUM_CHECK_MAX_DIM:
            w_min = float(np.linalg.eigvalsh(a)[0])
            if w_min < EIGENVALUE_FLOOR:
                raise ValueError(f"minimum eigenvalue {w_min:.3e} below {EIGENVALUE_FLOOR:.0e}")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "qubits", qubits)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)


def _normalize_keep(keep: Iterable[int]) -> tuple[int, ...]:
    if isinstance(keep, (set, frozenset)):
        keep = sorted(keep)
    keep = tuple(int(q) for q in keep)
    if len(keep) == 0:
        raise InvalidSubsetError("keep subset is empty")
    if len(set(keep)) != len(keep):
        raise InvalidSubsetError(f"keep subset {keep} has duplicates")
    return keep


def partial_trace(state, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix on ``keep``, tracing out every other qubit.

    ``state`` is a PureState or a DensityMatrix.  ``keep`` is an ordered
    sequence of qubit labels; its order fixes the subsystem order of the
    result (a plain set is normalized to ascending order).  The result is
    hermitized exactly, as (M + M^dagger) / 2.
    """
    from .states import PureState

    keep = _normalize_keep(keep)
    if isinstance(state, PureState):
        n = state.n
        bad = [q for q in keep if q < 1 or q > n]
        if bad:
            raise InvalidSubsetError(f"labels {bad} outside 1..{n}")
        keep_axes = [q - 1 for q in keep]
        rest = [i for i in range(n) if i not in keep_axes]
        t = state.amplitudes.reshape((2,) * n).transpose(keep_axes + rest)
        t = t.reshape(2 ** len(keep), -1)
        m = t @ t.conj().T
    elif isinstance(state, DensityMatrix):
        pos = {q: i for i, q in enumerate(state.qubits)}
        bad = [q for q in keep if q not in pos]
        if bad:
            raise InvalidSubsetError(f"labels {bad} not among {state.qubits}")
        n = state.n_qubits
        keep_pos = [pos[q] for q in keep]
        rest = [i for i in range(n) if i not in keep_pos]
        perm = keep_pos + rest + [n + i for i in keep_pos] + [n + i for i in rest]
        t = state.matrix.reshape((2,) * (2 * n)).transpose(perm)
        k, r = 2 ** len(keep), 2 ** len(rest)
        m = np.einsum("itjt->ij", t.reshape(k, r, k, r))
    else:
        raise TypeError(f"expected PureState or DensityMatrix, got {type(state).__name__}")
    m = 0.5 * (m + m.conj().T)
    return DensityMatrix(m, keep)


def partial_transpose(rho: DensityMatrix, part: Iterable[int]) -> np.ndarray:
    """Transpose the indices of the qubits in ``part``; returns a plain array.

    Pure index permutation, so applying it twice restores the input bit for
    bit, and hermiticity and trace are preserved.
    """
    part = _normalize_keep(part)
    pos = {q: i for i, q in enumerate(rho.qubits)}
    bad = [q for q in part if q not in pos]
    if bad:
        raise InvalidSubsetError(f"labels {bad} not among {rho.qubits}")
    n = rho.n_qubits
    axes = list(range(2 * n))
    for q in part:
        i = pos[q]
        axes[i], axes[n + i] = axes[n + i], axes[i]
    t = rho.matrix.reshape((2,) * (2 * n)).transpose(axes)
    return np.ascontiguousarray(t.reshape(rho.dim, rho.dim))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S(rho) = -tr(rho log2 rho) in bits; eigenvalues clamped to [0, 1]."""
    return entropy_from_probs(np.linalg.eigvalsh(rho.matrix))
