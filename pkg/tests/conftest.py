"""Shared helpers: random matrix generators and an independent dense-grid
oracle for the measurement-optimized quantities.

The oracle deliberately takes a different route from the library: it builds
the full 4x4 projector sandwiches K rho K, gets the dephased entropy from a
batched 4x4 eigendecomposition and the conditional entropies from batched
2x2 eigendecompositions, and refines by re-gridding around the incumbent
instead of pattern search.
"""

import numpy as np

from qorrelate.measures import Direction

_EYE2 = np.eye(2, dtype=np.complex128)


def rand_unitary2(rng) -> np.ndarray:
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def rand_density(rng, dim: int, rank: int) -> np.ndarray:
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    m /= np.trace(m).real
    return 0.5 * (m + m.conj().T)


def _entropy_rows(w: np.ndarray) -> np.ndarray:
    w = np.clip(w, 0.0, 1.0)
    return -np.sum(w * np.log2(np.maximum(w, 1e-300)), axis=-1)


def _oracle_eval(rho: np.ndarray, direction: Direction, thetas: np.ndarray, phis: np.ndarray):
    """Both objectives on an explicit (theta, phi) point list."""
    half = 0.5 * thetas
    vp = np.stack([np.cos(half) + 0j, np.sin(half) * np.exp(1j * phis)], axis=-1)
    proj_p = vp[:, :, None] * vp.conj()[:, None, :]
    proj_m = _EYE2[None] - proj_p
    mce = np.zeros(len(thetas))
    deph4 = np.zeros((len(thetas), 4, 4), dtype=np.complex128)
    for proj in (proj_p, proj_m):
        if direction is Direction.ON_SECOND:
            k = np.einsum("ij,gab->giajb", _EYE2, proj).reshape(-1, 4, 4)
        else:
            k = np.einsum("gab,ij->gaibj", proj, _EYE2).reshape(-1, 4, 4)
        sand = k @ rho @ k
        deph4 += sand
        if direction is Direction.ON_SECOND:
            kept = np.trace(sand.reshape(-1, 2, 2, 2, 2), axis1=2, axis2=4)
        else:
            kept = np.trace(sand.reshape(-1, 2, 2, 2, 2), axis1=1, axis2=3)
        p = np.trace(kept, axis1=1, axis2=2).real
        safe_p = np.maximum(p, 1e-14)
        w = np.linalg.eigvalsh(kept) / safe_p[:, None]
        mce += np.where(p > 1e-14, p * _entropy_rows(w), 0.0)
    deph = _entropy_rows(np.linalg.eigvalsh(deph4))
    return mce, deph


def oracle_minima(
    rho: np.ndarray,
    direction: Direction,
    n_theta: int = 300,
    n_phi: int = 600,
    zooms: int = 2,
    chunk: int = 50_000,
):
    """Global dense-grid minimum of (measured conditional entropy, dephased
    entropy), each refined by ``zooms`` rounds of local re-gridding."""
    tg, pg = np.meshgrid(
        np.linspace(0.0, np.pi, n_theta),
        np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False),
        indexing="ij",
    )
    tg, pg = tg.ravel(), pg.ravel()
    best = {0: (np.inf, 0.0, 0.0), 1: (np.inf, 0.0, 0.0)}
    for lo in range(0, len(tg), chunk):
        t, p = tg[lo : lo + chunk], pg[lo : lo + chunk]
        mce, deph = _oracle_eval(rho, direction, t, p)
        for obj, vals in ((0, mce), (1, deph)):
            i = int(np.argmin(vals))
            if vals[i] < best[obj][0]:
                best[obj] = (float(vals[i]), float(t[i]), float(p[i]))

    spacing = max(np.pi / (n_theta - 1), 2.0 * np.pi / n_phi)
    out = []
    for obj in (0, 1):
        f, t0, p0 = best[obj]
        width = spacing
        for _ in range(zooms):
            t = np.clip(np.linspace(t0 - width, t0 + width, 41), 0.0, np.pi)
            p = np.linspace(p0 - width, p0 + width, 41)
            tg2, pg2 = np.meshgrid(t, p, indexing="ij")
            mce, deph = _oracle_eval(rho, direction, tg2.ravel(), np.mod(pg2.ravel(), 2 * np.pi))
            vals = mce if obj == 0 else deph
            i = int(np.argmin(vals))
            if vals[i] < f:
                f, t0, p0 = float(vals[i]), float(tg2.ravel()[i]), float(pg2.ravel()[i])
            width /= 20.0
        out.append(f)
    return out[0], out[1]
