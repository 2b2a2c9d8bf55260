"""Compiled kernels for the dense symmetric eigensolver.

Two stages, both operating on float64 and eigenvalues-only (no eigenvector
accumulation):

1. ``householder_kernel`` reduces a symmetric matrix to tridiagonal form by a
   sequence of Householder reflections, touching only the lower triangle. The
   reflections are orthogonal similarity transforms, so the spectrum is
   preserved exactly (up to roundoff).
2. ``tql_kernel`` runs the implicit-shift QL iteration on the tridiagonal
   (diagonal d, subdiagonal e). Each sweep chases a bulge from the bottom of
   the active block to the top using Givens rotations derived from a Wilkinson
   shift; an off-diagonal entry is declared negligible once it drops below
   machine epsilon times the adjacent diagonal magnitudes.

Kernels release the GIL so callers can fan out across graphs with threads.
"""

import numpy as np
from numba import njit

_EPS = 2.220446049250313e-16  # 2**-52
_MAX_SWEEPS = 30  # per eigenvalue


@njit(cache=True, nogil=True)
def householder_kernel(a):
    """Reduce symmetric ``a`` (modified in place) to tridiagonal (d, e).

    Only the lower triangle of ``a`` is read or written.
    """
    n = a.shape[0]
    d = np.empty(n, np.float64)
    e = np.zeros(max(n - 1, 0), np.float64)
    u = np.zeros(n, np.float64)
    p = np.zeros(n, np.float64)
    q = np.zeros(n, np.float64)

    for k in range(n - 2):
        # column below the diagonal, scaled to avoid overflow in the norm
        scale = 0.0
        for i in range(k + 1, n):
            scale += abs(a[i, k])
        if scale == 0.0:
            e[k] = 0.0
            continue
        sig = 0.0
        for i in range(k + 1, n):
            u[i] = a[i, k] / scale
            sig += u[i] * u[i]
        alpha = np.sqrt(sig)
        if u[k + 1] > 0.0:
            alpha = -alpha  # sign opposite the pivot: no cancellation below
        e[k] = scale * alpha
        h = sig - u[k + 1] * alpha  # = |u_reflector|^2 / 2
        u[k + 1] -= alpha

        # p = B u / h over the trailing block B, using only its lower triangle
        for i in range(k + 1, n):
            p[i] = 0.0
        for i in range(k + 1, n):
            s = a[i, i] * u[i]
            ui = u[i]
            for j in range(k + 1, i):
                s += a[i, j] * u[j]
                p[j] += a[i, j] * ui
            p[i] += s
        kappa = 0.0
        for i in range(k + 1, n):
            p[i] /= h
            kappa += u[i] * p[i]
        kappa /= 2.0 * h
        for i in range(k + 1, n):
            q[i] = p[i] - kappa * u[i]

        # symmetric rank-2 update: B <- B - q u^T - u q^T
        for i in range(k + 1, n):
            ui = u[i]
            qi = q[i]
            for j in range(k + 1, i + 1):
                a[i, j] -= qi * u[j] + ui * q[j]

    for i in range(n):
        d[i] = a[i, i]
    if n >= 2:
        e[n - 2] = a[n - 1, n - 2]
    return d, e


@njit(cache=True, nogil=True)
def tql_kernel(d, e):
    """Implicit-shift QL eigenvalue iteration on a tridiagonal (d, e).

    Overwrites ``d`` with the (unsorted) eigenvalues. Returns 0 on success or
    the 1-based index of the first eigenvalue that failed to converge within
    the per-eigenvalue sweep cap.
    """
    n = d.shape[0]
    if n <= 1:
        return 0
    ee = np.zeros(n, np.float64)
    for i in range(n - 1):
        ee[i] = e[i]

    for l in range(n):
        sweeps = 0
        while True:
            # first negligible subdiagonal at or after l
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(ee[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > _MAX_SWEEPS:
                return l + 1

            # Wilkinson shift from the leading 2x2 of the active block
            g = (d[l + 1] - d[l]) / (2.0 * ee[l])
            r = np.hypot(g, 1.0)
            if g >= 0.0:
                g = d[m] - d[l] + ee[l] / (g + r)
            else:
                g = d[m] - d[l] + ee[l] / (g - r)
            s = 1.0
            c = 1.0
            peak = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * ee[i]
                b = c * ee[i]
                r = np.hypot(f, g)
                ee[i + 1] = r
                if r == 0.0:  # rotation annihilated early: split and restart
                    d[i + 1] -= peak
                    ee[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - peak
                r = (d[i] - g) * s + 2.0 * c * b
                peak = s * r
                d[i + 1] = g + peak
                g = c * r - b
            if not underflow:
                d[l] -= peak
                ee[l] = g
                ee[m] = 0.0
    return 0
