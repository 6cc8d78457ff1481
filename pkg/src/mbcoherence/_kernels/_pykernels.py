"""Pure-Python implementations of the hot kernels.

Same signatures and results as the compiled ``_ckernels`` module, used
whenever the extension is not built or ``MBCOHERENCE_PURE=1`` is set.
"""
import math

from ..symgroup import cycle_type_classes


def _norm(m, e):
    if m == 0.0:
        return 0.0, 0
    f, k = math.frexp(m)
    return 2.0 * f, e + k - 1


def h_complete_series(lam, n):
    """Complete homogeneous symmetric polynomials h_0..h_n of ``lam``.

    Returns two lists ``(mantissas, exponents)`` with each mantissa in
    [1, 2) or 0.  Uses h_k <- h_k + lam_j * h_{k-1}, sweeping k upward once
    per eigenvalue, with every value carried as a scaled pair.
    """
    n = int(n)
    if n < 0:
        raise ValueError("degree must be non-negative")
    mant = [0.0] * (n + 1)
    expo = [0] * (n + 1)
    mant[0] = 1.0
    for x in lam:
        x = float(x)
        if x <= 0.0:
            continue
        lm, le = _norm(x, 0)
        for k in range(1, n + 1):
            pm = mant[k - 1]
            if pm == 0.0:
                continue
            pm, pe = _norm(pm * lm, expo[k - 1] + le)
            cm = mant[k]
            if cm == 0.0:
                mant[k], expo[k] = pm, pe
                continue
            ce = expo[k]
            if ce >= pe:
                s = cm + math.ldexp(pm, pe - ce)
                mant[k], expo[k] = _norm(s, ce)
            else:
                s = pm + math.ldexp(cm, ce - pe)
                mant[k], expo[k] = _norm(s, pe)
    return mant, expo


def power_sum_average(lam, n):
    """(1/n!) * sum over S_n of prod over cycles of p_len(lam).

    The group is enumerated once per ``n`` to tabulate cycle-type class
    sizes; each call then sums over the classes.
    """
    n = int(n)
    p = [0.0] * (n + 1)
    for ell in range(1, n + 1):
        p[ell] = math.fsum(float(x) ** ell for x in lam)
    total = []
    for ctype, count in cycle_type_classes(n):
        prod = float(count)
        for ell in ctype:
            prod *= p[ell]
        total.append(prod)
    return math.fsum(total) / math.factorial(n)
