"""n-qubit pure states: named constructors and seeded random ensembles.

Random sampling is bit-reproducible across platforms: every sampler derives
its randomness from a 64-bit seed through a counter-based splitmix64-style
stream, and Gaussians come from Box-Muller on that stream.  The same
(master_seed, sample index) pair always yields the same state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .linalg import DensityMatrix, partial_trace

NORM_ATOL = 1e-12
MAX_DENSE_QUBITS = 12

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_2 = np.uint64(0x94D049BB133111EB)
_U64_MASK = (1 << 64) - 1


def _scramble64(z: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer, arithmetic mod 2^64
    z = (z ^ (z >> np.uint64(30))) * _MIX_1
    z = (z ^ (z >> np.uint64(27))) * _MIX_2
    return z ^ (z >> np.uint64(31))


def mix_seed(master_seed: int, index: int) -> int:
    """Per-sample seed for sample ``index`` under ``master_seed``."""
    if index < 0:
        raise ValueError(f"sample index must be >= 0, got {index}")
    with np.errstate(over="ignore"):
        z = np.uint64(master_seed & _U64_MASK) + np.uint64((index + 1) & _U64_MASK) * _GOLDEN
        return int(_scramble64(np.array([z], dtype=np.uint64))[0])


def _uniform_stream(seed: int, count: int) -> np.ndarray:
    """count floats in the open interval (0, 1), deterministic in seed."""
    with np.errstate(over="ignore"):
        idx = np.arange(1, count + 1, dtype=np.uint64)
        z = _scramble64(np.uint64(seed & _U64_MASK) + idx * _GOLDEN)
    return ((z >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def _complex_gaussians(seed: int, count: int) -> np.ndarray:
    """count i.i.d. standard complex Gaussians via Box-Muller."""
    u = _uniform_stream(seed, 2 * count)
    radius = np.sqrt(-2.0 * np.log(u[:count]))
    angle = 2.0 * np.pi * u[count:]
    return radius * np.cos(angle) + 1j * radius * np.sin(angle)


@dataclass(frozen=True)
class PureState:
    """Normalized amplitude vector over n qubits (2 <= n <= 12).

    amplitudes[k] is the coefficient of the basis ket whose bitstring is k
    written in n bits, qubit 1 first (most significant).
    """

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        n = int(self.n)
        if n < 2 or n > MAX_DENSE_QUBITS:
            raise ValueError(f"n must be in 2..{MAX_DENSE_QUBITS}, got {n}")
        a = np.asarray(self.amplitudes, dtype=np.complex128)
        if a.shape != (2**n,):
            raise ValueError(f"amplitudes shape {a.shape} does not match n={n}")
        norm = float(np.linalg.norm(a))
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValueError(f"state norm {norm!r} deviates from 1 by more than {NORM_ATOL:.0e}")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "amplitudes", a)

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))

    def rdm(self, keep) -> DensityMatrix:
        return partial_trace(self, keep)

    def projector(self) -> DensityMatrix:
        """|psi><psi| as a DensityMatrix over all n qubits."""
        m = np.outer(self.amplitudes, self.amplitudes.conj())
        m = 0.5 * (m + m.conj().T)
        return DensityMatrix(m, self.qubits)


def _normalized(amps: np.ndarray, n: int) -> PureState:
    return PureState(n, amps / np.linalg.norm(amps))


def ghz_state(n: int) -> PureState:
    """(|0...0> + |1...1>) / sqrt(2)."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[0] = amps[-1] = 1.0 / math.sqrt(2.0)
    return PureState(n, amps)


def weight_indices(n: int, r: int) -> np.ndarray:
    """Ascending basis indices whose n-bit string has exactly r ones."""
    idx = [k for k in range(2**n) if bin(k).count("1") == r]
    return np.asarray(idx, dtype=np.intp)


def dicke_state(n: int, r: int) -> PureState:
    """Equal-amplitude superposition of all n-bit strings with r excitations."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if r < 0 or r > n:
        raise ValueError(f"excitation count r={r} outside 0..{n}")
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[weight_indices(n, r)] = 1.0 / math.sqrt(math.comb(n, r))
    return PureState(n, amps)


def w_state(n: int) -> PureState:
    """Single-excitation Dicke state."""
    return dicke_state(n, 1)


def haar_random_pure(n: int, seed: int) -> PureState:
    """Haar-random pure state: normalized vector of 2^n standard complex Gaussians."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    return _normalized(_complex_gaussians(seed, 2**n), n)


def generalized_dicke_random(n: int, r: int, seed: int) -> PureState:
    """Random state supported on the weight-r subspace, Gaussian coefficients."""
    if r < 1 or r > n - 1:
        raise ValueError(f"excitation count r={r} outside 1..{n - 1}")
    idx = weight_indices(n, r)
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[idx] = _complex_gaussians(seed, len(idx))
    return _normalized(amps, n)


def symmetric_random(n: int, seed: int) -> PureState:
    """Random permutation-symmetric state: Gaussian mix over all n+1 Dicke layers."""
    coeff = _complex_gaussians(seed, n + 1)
    amps = np.zeros(2**n, dtype=np.complex128)
    for r in range(n + 1):
        idx = weight_indices(n, r)
        amps[idx] = coeff[r] / math.sqrt(math.comb(n, r))
    return _normalized(amps, n)


def dicke_pair_populations(n: int, r: int) -> tuple[float, float, float]:
    """(a, b, c) entries of the two-qubit marginal of the (n, r) Dicke state.

    a, b, c are the probabilities of both qubits low, one high, both high;
    b is also the coherence between |01> and |10>.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if r < 0 or r > n:
        raise ValueError(f"excitation count r={r} outside 0..{n}")
    denom = n * (n - 1)
    a = (n - r) * (n - r - 1) / denom
    b = r * (n - r) / denom
    c = r * (r - 1) / denom
    return a, b, c


def dicke_single_rdm(n: int, r: int) -> DensityMatrix:
    """One-qubit marginal of the (n, r) Dicke state: diag(1 - r/n, r/n)."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if r < 0 or r > n:
        raise ValueError(f"excitation count r={r} outside 0..{n}")
    m = np.diag([1.0 - r / n, r / n]).astype(np.complex128)
    return DensityMatrix(m, (1,))


def dicke_pair_rdm(n: int, r: int) -> DensityMatrix:
    """Two-qubit marginal of the (n, r) Dicke state, closed form.

    diag(a, b, b, c) plus coherence b between |01> and |10>.
    """
    a, b, c = dicke_pair_populations(n, r)
    m = np.diag([a, b, b, c]).astype(np.complex128)
    m[1, 2] = m[2, 1] = b
    return DensityMatrix(m, (1, 2))


class Family(Enum):
    """Supported random (or point) ensembles of n-qubit pure states."""

    HAAR = "haar"
    W = "w"
    DICKE = "dicke"
    GENERALIZED_DICKE = "gen-dicke"
    SYMMETRIC = "symmetric"


@dataclass(frozen=True)
class EnsembleSpec:
    """A reproducible ensemble: family, qubit count, optional excitation count,
    sample count, and master seed.

    ``state(i)`` is a pure function of the fields; W and Dicke families are
    point ensembles that ignore the per-sample seed.
    """

    family: Family
    n: int
    r: int | None
    samples: int
    master_seed: int

    def __post_init__(self):
        family = self.family if isinstance(self.family, Family) else Family(self.family)
        object.__setattr__(self, "family", family)
        if self.n < 2 or self.n > MAX_DENSE_QUBITS:
            raise ValueError(f"n must be in 2..{MAX_DENSE_QUBITS}, got {self.n}")
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if family in (Family.DICKE, Family.GENERALIZED_DICKE):
            if self.r is None:
                raise ValueError(f"family {family.value!r} needs an excitation count r")
            lo, hi = (0, self.n) if family is Family.DICKE else (1, self.n - 1)
            if self.r < lo or self.r > hi:
                raise ValueError(f"r={self.r} outside {lo}..{hi} for family {family.value!r}")
        elif self.r is not None:
            raise ValueError(f"family {family.value!r} takes no excitation count")

    def state(self, index: int) -> PureState:
        if index < 0 or index >= self.samples:
            raise ValueError(f"sample index {index} outside 0..{self.samples - 1}")
        if self.family is Family.HAAR:
            return haar_random_pure(self.n, mix_seed(self.master_seed, index))
        if self.family is Family.W:
            return w_state(self.n)
        if self.family is Family.DICKE:
            return dicke_state(self.n, self.r)
        if self.family is Family.GENERALIZED_DICKE:
            return generalized_dicke_random(self.n, self.r, mix_seed(self.master_seed, index))
        return symmetric_random(self.n, mix_seed(self.master_seed, index))
