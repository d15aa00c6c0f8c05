"""Pure Python twins of the compiled evaluation kernels.

Same call signatures and same summation order as ``_poly_eval.pyx`` so the
two backends are interchangeable.  These routines sit in the innermost loop
of every quadrature over an inverted transform, which is why a compiled
version exists at all; the arithmetic itself is deliberately simple.

A term is ``coeff * (z - threshold)**power * exp(-decay*z)`` supported on
``z >= threshold`` (the step is closed on the left: a term counts exactly at
its threshold).  Callers pass terms sorted by ascending ``|coeff|``;
accumulation uses Neumaier compensation so that the alternating sums
produced by binomial expansions lose as little as possible.
"""

import math

__all__ = ["poly_exp_eval", "poly_exp_eval_scale", "poly_exp_eval_many", "COMPILED"]

COMPILED = False


def poly_exp_eval(coeff, threshold, power, decay, z):
    """Evaluate a piecewise polynomial-exponential term sum at ``z``."""
    s = 0.0
    c = 0.0
    for i in range(len(coeff)):
        if z < threshold[i]:
            continue
        x = coeff[i] * (z - threshold[i]) ** power[i] * math.exp(-decay[i] * z)
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
    return s + c


def poly_exp_eval_scale(coeff, threshold, power, decay, z):
    """Like :func:`poly_exp_eval` but also return the sum of |term|.

    The second value bounds the roundoff scale of the cancellation, which
    is what nonnegativity of a density can honestly be measured against.
    """
    s = 0.0
    c = 0.0
    mag = 0.0
    for i in range(len(coeff)):
        if z < threshold[i]:
            continue
        x = coeff[i] * (z - threshold[i]) ** power[i] * math.exp(-decay[i] * z)
        mag += abs(x)
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
    return s + c, mag


def poly_exp_eval_many(coeff, threshold, power, decay, zs, out):
    """Evaluate the term sum at every point of ``zs`` into ``out``."""
    for j in range(len(zs)):
        out[j] = poly_exp_eval(coeff, threshold, power, decay, zs[j])
    return out
