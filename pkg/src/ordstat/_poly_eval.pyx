# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernels for piecewise polynomial-exponential sums.

Twin of ``_poly_eval_py``; see that module for the term convention.  The
summation order and compensation are identical so both backends agree to
the last rounding.
"""

from libc.math cimport exp, fabs, pow

COMPILED = True


def poly_exp_eval(const double[::1] coeff, const double[::1] threshold,
                  const double[::1] power, const double[::1] decay, double z):
    """Evaluate a piecewise polynomial-exponential term sum at ``z``."""
    cdef Py_ssize_t i, n = coeff.shape[0]
    cdef double s = 0.0, c = 0.0, x, t
    for i in range(n):
        if z < threshold[i]:
            continue
        x = coeff[i] * pow(z - threshold[i], power[i]) * exp(-decay[i] * z)
        t = s + x
        if fabs(s) >= fabs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
    return s + c


def poly_exp_eval_scale(const double[::1] coeff, const double[::1] threshold,
                        const double[::1] power, const double[::1] decay, double z):
    """Like :func:`poly_exp_eval` but also return the sum of |term|."""
    cdef Py_ssize_t i, n = coeff.shape[0]
    cdef double s = 0.0, c = 0.0, mag = 0.0, x, t
    for i in range(n):
        if z < threshold[i]:
            continue
        x = coeff[i] * pow(z - threshold[i], power[i]) * exp(-decay[i] * z)
        mag += fabs(x)
        t = s + x
        if fabs(s) >= fabs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
    return s + c, mag


def poly_exp_eval_many(const double[::1] coeff, const double[::1] threshold,
                       const double[::1] power, const double[::1] decay,
                       const double[::1] zs, double[::1] out):
    """Evaluate the term sum at every point of ``zs`` into ``out``."""
    cdef Py_ssize_t i, j, n = coeff.shape[0], m = zs.shape[0]
    cdef double s, c, x, t, z
    for j in range(m):
        z = zs[j]
        s = 0.0
        c = 0.0
        for i in range(n):
            if z < threshold[i]:
                continue
            x = coeff[i] * pow(z - threshold[i], power[i]) * exp(-decay[i] * z)
            t = s + x
            if fabs(s) >= fabs(x):
                c += (s - t) + x
            else:
                c += (x - t) + s
            s = t
        out[j] = s + c
    return out
