# cython: language_level=3
"""Compiled hot kernels; see ``_kernels_py`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, sqrt, atan2

cnp.import_array()


cdef inline void _apply(double complex[:, :] g, double complex* x, double complex* y) noexcept nogil:
    cdef int r, c
    cdef double complex acc
    for r in range(4):
        acc = 0
        for c in range(4):
            acc = acc + g[r, c] * x[c]
        y[r] = acc


cdef inline void _generator(double s, double c2, double J, double omega, double t,
                            double complex[:, :] g) noexcept nogil:
    # -i H_lab(t)
    cdef double complex down = s * (cos(omega * t) - 1j * sin(omega * t))
    cdef double complex up = s * (cos(omega * t) + 1j * sin(omega * t))
    cdef double complex mi = -1j
    g[0, 0] = mi * (J + c2)
    g[0, 1] = mi * down
    g[0, 2] = mi * down
    g[0, 3] = 0
    g[1, 0] = mi * up
    g[1, 1] = mi * (-J)
    g[1, 2] = mi * (2 * J)
    g[1, 3] = mi * down
    g[2, 0] = mi * up
    g[2, 1] = mi * (2 * J)
    g[2, 2] = mi * (-J)
    g[2, 3] = mi * down
    g[3, 0] = 0
    g[3, 1] = mi * up
    g[3, 2] = mi * up
    g[3, 3] = mi * (J - c2)


def rk4_lab(double B, double theta, double omega, double J, psi0, double t_final, Py_ssize_t steps):
    cdef double h = t_final / steps
    cdef double s = B * sin(theta)
    cdef double c2 = 2 * B * cos(theta)
    out_arr = np.empty((steps + 1, 4), dtype=np.complex128)
    cdef double complex[:, :] out = out_arr
    cdef double complex[:] p0 = np.ascontiguousarray(psi0, dtype=np.complex128)
    cdef double complex[:, :] g0 = np.empty((4, 4), dtype=np.complex128)
    cdef double complex[:, :] g1 = np.empty((4, 4), dtype=np.complex128)
    cdef double complex[:, :] g2 = np.empty((4, 4), dtype=np.complex128)
    cdef double complex psi[4]
    cdef double complex tmp[4]
    cdef double complex k1[4]
    cdef double complex k2[4]
    cdef double complex k3[4]
    cdef double complex k4[4]
    cdef Py_ssize_t n
    cdef int j
    cdef double t
    for j in range(4):
        psi[j] = p0[j]
        out[0, j] = psi[j]
    with nogil:
        _generator(s, c2, J, omega, 0.0, g0)
        for n in range(steps):
            t = n * h
            _generator(s, c2, J, omega, t + 0.5 * h, g1)
            _generator(s, c2, J, omega, (n + 1) * h, g2)
            _apply(g0, psi, k1)
            for j in range(4):
                tmp[j] = psi[j] + 0.5 * h * k1[j]
            _apply(g1, tmp, k2)
            for j in range(4):
                tmp[j] = psi[j] + 0.5 * h * k2[j]
            _apply(g1, tmp, k3)
            for j in range(4):
                tmp[j] = psi[j] + h * k3[j]
            _apply(g2, tmp, k4)
            for j in range(4):
                psi[j] = psi[j] + (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
                out[n + 1, j] = psi[j]
            g0[:, :] = g2
    return out_arr


cdef inline double _abs2(double complex z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


def track_branches(vecs, weights, frozen):
    v_in = np.ascontiguousarray(vecs, dtype=np.complex128)
    w_in = np.ascontiguousarray(weights, dtype=np.float64)
    f_in = np.ascontiguousarray(frozen, dtype=np.uint8)
    cdef Py_ssize_t n = v_in.shape[0]
    out_v_arr = np.empty_like(v_in)
    out_w_arr = np.empty_like(w_in)
    cdef double complex[:, :, :] raw = v_in
    cdef double[:, :] w = w_in
    cdef unsigned char[:] fr = f_in
    cdef double complex[:, :, :] out = out_v_arr
    cdef double[:, :] ow = out_w_arr
    cdef Py_ssize_t i
    cdef int a, m, k
    cdef double complex G[2][2]
    cdef double complex ov
    cdef double mag, same, cross
    cdef int cols[2]
    if n == 0:
        return out_v_arr, out_w_arr
    with nogil:
        for a in range(2):
            for m in range(2):
                out[0, a, m] = raw[0, a, m]
            ow[0, a] = w[0, a]
        for i in range(1, n):
            if fr[i]:
                for a in range(2):
                    for m in range(2):
                        out[i, a, m] = out[i - 1, a, m]
                    ow[i, a] = w[i, a]
                continue
            for m in range(2):
                for k in range(2):
                    G[m][k] = 0
                    for a in range(2):
                        G[m][k] = G[m][k] + out[i - 1, a, m].conjugate() * raw[i, a, k]
            same = _abs2(G[0][0]) + _abs2(G[1][1])
            cross = _abs2(G[0][1]) + _abs2(G[1][0])
            if cross > same:
                cols[0] = 1
                cols[1] = 0
            else:
                cols[0] = 0
                cols[1] = 1
            for m in range(2):
                ov = G[m][cols[m]]
                mag = sqrt(_abs2(ov))
                if mag > 0:
                    ov = ov.conjugate() / mag
                else:
                    ov = 1
                for a in range(2):
                    out[i, a, m] = raw[i, a, cols[m]] * ov
                ow[i, m] = w[i, cols[m]]
    return out_v_arr, out_w_arr
