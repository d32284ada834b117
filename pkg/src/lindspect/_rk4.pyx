# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Lindblad right-hand side and fixed-step RK4 propagation.

Both routines take the master equation in the form

    drho/dt = -i (Heff rho - rho Heff^dag) + sum_k rate_k L_k rho L_k^dag

with ``Heff = H - (i/2) sum_k rate_k L_k^dag L_k`` precomputed by the caller.
"""

import numpy as np
cimport numpy as cnp
from scipy.linalg.cython_blas cimport zgemm

cnp.import_array()

ctypedef double complex cplx


cdef cplx _one = 1.0, _zero = 0.0, _mi = -1j, _pi = 1j


cdef inline void _mm(char *tb, cplx alpha, const cplx *a, const cplx *b, cplx beta,
                     cplx *c, int d) noexcept nogil:
    # row-major c = alpha * a @ op(b) + beta * c, with op(b) = b ('N') or b^dag ('C').
    # Seen column-major the buffers hold transposes, so swap operands:
    # c^T = op'(b) a^T where op'(b_mem) = b^T or conj(b).
    zgemm(tb, b"N", &d, &d, &d, &alpha, <cplx *>b, &d, <cplx *>a, &d, &beta, c, &d)


cdef void _rhs(const cplx[:, ::1] heff, const cplx[:, :, ::1] jumps,
               const double[::1] rates, const cplx[:, ::1] rho,
               cplx[:, ::1] out, cplx[:, ::1] tmp) noexcept nogil:
    cdef int d = <int>rho.shape[0]
    cdef Py_ssize_t c
    cdef double g
    if d == 0:
        return
    # -i Heff rho + i rho Heff^dag
    _mm(b"N", _mi, &heff[0, 0], &rho[0, 0], _zero, &out[0, 0], d)
    _mm(b"C", _pi, &rho[0, 0], &heff[0, 0], _one, &out[0, 0], d)
    for c in range(jumps.shape[0]):
        g = rates[c]
        if g == 0.0:
            continue
        _mm(b"N", g, &jumps[c, 0, 0], &rho[0, 0], _zero, &tmp[0, 0], d)
        _mm(b"C", _one, &tmp[0, 0], &jumps[c, 0, 0], _one, &out[0, 0], d)


def lindblad_rhs(heff, jumps, rates, rho):
    """Evaluate the master-equation right-hand side at ``rho``."""
    cdef cplx[:, ::1] h = np.ascontiguousarray(heff, dtype=np.complex128)
    cdef cplx[:, :, ::1] ls = np.ascontiguousarray(jumps, dtype=np.complex128)
    cdef double[::1] g = np.ascontiguousarray(rates, dtype=np.float64)
    cdef cplx[:, ::1] r = np.ascontiguousarray(rho, dtype=np.complex128)
    d = r.shape[0]
    out = np.empty((d, d), dtype=np.complex128)
    tmp = np.empty((d, d), dtype=np.complex128)
    cdef cplx[:, ::1] o = out
    cdef cplx[:, ::1] t = tmp
    with nogil:
        _rhs(h, ls, g, r, o, t)
    return out


def rk4_propagate(heff, jumps, rates, rho0, double dt, Py_ssize_t n_steps, Py_ssize_t stride):
    """Classical RK4 with ``n_steps`` steps of size ``dt``.

    Returns an array of shape ``(n_steps // stride + 1, d, d)`` holding the
    state at steps ``0, stride, 2*stride, ...``.
    """
    cdef cplx[:, ::1] h = np.ascontiguousarray(heff, dtype=np.complex128)
    cdef cplx[:, :, ::1] ls = np.ascontiguousarray(jumps, dtype=np.complex128)
    cdef double[::1] g = np.ascontiguousarray(rates, dtype=np.float64)
    cdef Py_ssize_t d = h.shape[0]
    cdef Py_ssize_t n_rec = n_steps // stride + 1
    records = np.empty((n_rec, d, d), dtype=np.complex128)
    cdef cplx[:, :, ::1] rec = records
    cdef cplx[:, ::1] rho = np.array(rho0, dtype=np.complex128, order="C")
    cdef cplx[:, ::1] stage = np.empty((d, d), dtype=np.complex128)
    cdef cplx[:, ::1] k1 = np.empty((d, d), dtype=np.complex128)
    cdef cplx[:, ::1] k2 = np.empty((d, d), dtype=np.complex128)
    cdef cplx[:, ::1] k3 = np.empty((d, d), dtype=np.complex128)
    cdef cplx[:, ::1] k4 = np.empty((d, d), dtype=np.complex128)
    cdef cplx[:, ::1] tmp = np.empty((d, d), dtype=np.complex128)
    cdef Py_ssize_t step, i, j, r = 0
    cdef double half = 0.5 * dt, sixth = dt / 6.0
    with nogil:
        rec[0, :, :] = rho
        r = 1
        for step in range(1, n_steps + 1):
            _rhs(h, ls, g, rho, k1, tmp)
            for i in range(d):
                for j in range(d):
                    stage[i, j] = rho[i, j] + half * k1[i, j]
            _rhs(h, ls, g, stage, k2, tmp)
            for i in range(d):
                for j in range(d):
                    stage[i, j] = rho[i, j] + half * k2[i, j]
            _rhs(h, ls, g, stage, k3, tmp)
            for i in range(d):
                for j in range(d):
                    stage[i, j] = rho[i, j] + dt * k3[i, j]
            _rhs(h, ls, g, stage, k4, tmp)
            for i in range(d):
                for j in range(d):
                    rho[i, j] = rho[i, j] + sixth * (k1[i, j] + 2.0 * k2[i, j] + 2.0 * k3[i, j] + k4[i, j])
            if step % stride == 0:
                rec[r, :, :] = rho
                r = r + 1
    return records
