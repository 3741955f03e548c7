"""NumPy implementations of the hot kernels.

Same signatures and results (to rounding) as the compiled ``_kernels``
module; used when the extension is unavailable or ``SPINPHASE_PURE_PYTHON``
is set.
"""
import numpy as np


def _lab_hamiltonians(B, theta, omega, J, times):
    s = B * np.sin(theta)
    c = B * np.cos(theta)
    down = s * np.exp(-1j * omega * times)
    up = np.conj(down)
    H = np.zeros((times.size, 4, 4), dtype=complex)
    H[:, 0, 0] = J + 2 * c
    H[:, 1, 1] = H[:, 2, 2] = -J
    H[:, 3, 3] = J - 2 * c
    H[:, 1, 2] = H[:, 2, 1] = 2 * J
    H[:, 0, 1] = H[:, 0, 2] = H[:, 1, 3] = H[:, 2, 3] = down
    H[:, 1, 0] = H[:, 2, 0] = H[:, 3, 1] = H[:, 3, 2] = up
    return -1j * H


def rk4_lab(B, theta, omega, J, psi0, t_final, steps):
    """Classical RK4 for ``i df/dt = H_lab(t) f`` on a uniform grid.

    Returns the raw (unnormalized) states, shape ``(steps + 1, 4)``.
    """
    h = t_final / steps
    # generator at every half step, reused by consecutive stages
    gen = _lab_hamiltonians(B, theta, omega, J, 0.5 * h * np.arange(2 * steps + 1))
    out = np.empty((steps + 1, 4), dtype=complex)
    psi = np.array(psi0, dtype=complex)
    out[0] = psi
    half = 0.5 * h
    for n in range(steps):
        g0 = gen[2 * n]
        g1 = gen[2 * n + 1]
        g2 = gen[2 * n + 2]
        k1 = g0 @ psi
        k2 = g1 @ (psi + half * k1)
        k3 = g1 @ (psi + half * k2)
        k4 = g2 @ (psi + h * k3)
        psi = psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[n + 1] = psi
    return out


def track_branches(vecs, weights, frozen):
    """Match 2x2 eigenvector columns across time and fix their phase gauge.

    Columns of ``vecs[i]`` are permuted so each branch follows the maximal
    overlap with the previous sample, then rephased so that
    ``<phi_m(t_{i-1})|phi_m(t_i)>`` is real and non-negative. Samples marked
    ``frozen`` copy the previous branches.
    """
    vecs = np.asarray(vecs, dtype=complex)
    weights = np.asarray(weights, dtype=float)
    n = vecs.shape[0]
    live = ~np.asarray(frozen, dtype=bool)
    live[0] = True
    idx = np.flatnonzero(live)
    raw = vecs[idx]

    G = np.einsum("nak,nal->nkl", raw[:-1].conj(), raw[1:])
    same = np.abs(G[:, 0, 0]) ** 2 + np.abs(G[:, 1, 1]) ** 2
    cross = np.abs(G[:, 0, 1]) ** 2 + np.abs(G[:, 1, 0]) ** 2
    swap = cross > same
    perm = np.concatenate([[0], np.cumsum(swap) % 2])

    # q[:, k]: overlap of raw column k at the previous live sample with its match
    q = np.where(
        swap[:, None],
        np.stack([G[:, 0, 1], G[:, 1, 0]], axis=1),
        np.stack([G[:, 0, 0], G[:, 1, 1]], axis=1),
    )
    prev_perm = perm[:-1]
    q_branch = np.where(prev_perm[:, None] == 0, q, q[:, ::-1])
    inc = np.where(np.abs(q_branch) > 0, -np.angle(q_branch), 0.0)
    theta = np.concatenate([np.zeros((1, 2)), np.cumsum(inc, axis=0)])

    cols = np.stack([perm, 1 - perm], axis=1)
    rows = np.arange(idx.size)[:, None]
    live_vecs = raw.transpose(0, 2, 1)[rows, cols].transpose(0, 2, 1)
    live_vecs = live_vecs * np.exp(1j * theta)[:, None, :]
    live_weights = weights[idx][rows, cols]

    pos = np.maximum.accumulate(np.where(live, np.arange(n), 0))
    slot = np.searchsorted(idx, pos)
    out_vecs = live_vecs[slot]
    out_weights = np.where(live[:, None], live_weights[slot], weights)
    return out_vecs, out_weights
