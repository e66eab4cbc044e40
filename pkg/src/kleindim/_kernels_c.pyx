# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernel: batched 2x2 complex matrix products,
det renormalization, sign canonicalization, and base-point displacements.

Mirrors the contract of ``_kernels_py``.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport acosh, copysign, hypot, sqrt

cnp.import_array()

DEF PIVOT_TOL = 1e-9
DEF REAL_TOL = 1e-12


cdef inline double complex _csqrt(double complex z):
    # principal branch, matching the fallback kernel's np.sqrt
    cdef double r = hypot(z.real, z.imag)
    cdef double re = sqrt((r + z.real) / 2.0)
    cdef double im = copysign(sqrt((r - z.real) / 2.0), z.imag)
    return re + 1j * im


def canonicalize(cnp.ndarray[cnp.complex128_t, ndim=2] mats):
    """In place: renormalize rows (a, b, c, d) to det 1 and fix the sign."""
    cdef Py_ssize_t n = mats.shape[0]
    cdef Py_ssize_t i, j, piv
    cdef double complex a, b, c, d, det, s
    cdef double absval, re, im
    for i in range(n):
        a = mats[i, 0]; b = mats[i, 1]; c = mats[i, 2]; d = mats[i, 3]
        det = a * d - b * c
        s = _csqrt(det)
        a = a / s; b = b / s; c = c / s; d = d / s
        # sign representative: first entry above the pivot threshold
        piv = -1
        for j in range(4):
            if j == 0:
                re = a.real; im = a.imag
            elif j == 1:
                re = b.real; im = b.imag
            elif j == 2:
                re = c.real; im = c.imag
            else:
                re = d.real; im = d.imag
            absval = sqrt(re * re + im * im)
            if absval > PIVOT_TOL:
                piv = j
                break
        if piv >= 0:
            if re * re <= REAL_TOL * REAL_TOL * (re * re + im * im):
                if im < 0.0:
                    a = -a; b = -b; c = -c; d = -d
            elif re < 0.0:
                a = -a; b = -b; c = -c; d = -d
        mats[i, 0] = a; mats[i, 1] = b; mats[i, 2] = c; mats[i, 3] = d
    return mats


def expand(cnp.ndarray[cnp.complex128_t, ndim=2] frontier,
           cnp.ndarray[cnp.complex128_t, ndim=2] gens):
    """All products frontier[i] @ gens[j], canonicalized, j fastest."""
    cdef Py_ssize_t n = frontier.shape[0]
    cdef Py_ssize_t k = gens.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.empty(
        (n * k, 4), dtype=np.complex128)
    cdef Py_ssize_t i, j, row
    cdef double complex fa, fb, fc, fd, ga, gb, gc, gd
    for i in range(n):
        fa = frontier[i, 0]; fb = frontier[i, 1]
        fc = frontier[i, 2]; fd = frontier[i, 3]
        for j in range(k):
            ga = gens[j, 0]; gb = gens[j, 1]
            gc = gens[j, 2]; gd = gens[j, 3]
            row = i * k + j
            out[row, 0] = fa * ga + fb * gc
            out[row, 1] = fa * gb + fb * gd
            out[row, 2] = fc * ga + fd * gc
            out[row, 3] = fc * gb + fd * gd
    return canonicalize(out)


def displacements(cnp.ndarray[cnp.complex128_t, ndim=2] mats):
    """Hyperbolic displacement of the base point (0, 1) per row."""
    cdef Py_ssize_t n = mats.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i, j
    cdef double s, re, im
    cdef double complex z
    for i in range(n):
        s = 0.0
        for j in range(4):
            z = mats[i, j]
            s += z.real * z.real + z.imag * z.imag
        s = s / 2.0
        if s < 1.0:
            s = 1.0
        out[i] = acosh(s)
    return out
