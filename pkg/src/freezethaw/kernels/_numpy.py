"""Vectorized pure-numpy kernels, the fallback for ``_numba``."""
import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

SERIES_LIMIT = 5.0


def _series(n, x):
    half = 0.5 * x
    term = np.ones_like(x)
    for i in range(1, n + 1):
        term *= half / i
    total = term.copy()
    q = -half * half
    top = half.max(initial=0.0)
    for k in range(1, 400):
        term *= q / (k * (k + n))
        total += term
        if k > top and np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total


def _miller(n, x):
    # one start order for the whole batch; starting higher only costs work
    m = int(x.max() + 15.0 * x.max() ** (1.0 / 3.0) + 30.0)
    m += m % 2
    jp1 = np.zeros_like(x)
    j = np.full_like(x, 1e-30)
    norm = 2.0 * j
    res = np.zeros_like(x)
    for k in range(m, 0, -1):
        jp1, j = j, (2.0 * k / x) * j - jp1
        order = k - 1
        if order == n:
            res = j.copy()
        if order > 0 and order % 2 == 0:
            norm += 2.0 * j
        big = np.abs(j) > 1e250
        if big.any():
            scale = np.where(big, 1e-250, 1.0)
            j *= scale
            jp1 *= scale
            norm *= scale
            res *= scale
    norm += j
    return res / norm


def bessel_jn(n, x):
    """J_n(x) for integer ``n >= 0`` on an array of non-negative ``x``."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    small = x < SERIES_LIMIT
    if small.any():
        out[small] = _series(n, x[small])
    if (~small).any():
        out[~small] = _miller(n, x[~small])
    return out


def phase_sum(energies, weights, taus):
    """out[s, p] = sum_k weights[k, p] * (exp(-i E_k tau_s) - 1)."""
    phi = -np.outer(taus, energies)
    z = -2.0 * np.sin(0.5 * phi) ** 2 + 1j * np.sin(phi)
    return z @ weights


def _hop(coupling, psi):
    out = np.empty_like(psi)
    out[0] = psi[1]
    out[-1] = psi[-2]
    out[1:-1] = psi[:-2] + psi[2:]
    return -1j * coupling * out


def rk4_chain(coupling, psi0, taus, h_max):
    """Classical RK4 for i dpsi/dtau = H psi on a uniform open chain."""
    out = np.empty((taus.shape[0], psi0.shape[0]), dtype=np.complex128)
    psi = psi0.astype(np.complex128)
    out[0] = psi
    for s in range(1, taus.shape[0]):
        span = taus[s] - taus[s - 1]
        nsteps = max(1, math.ceil(span / h_max - 1e-9))
        h = span / nsteps
        for _ in range(nsteps):
            k1 = _hop(coupling, psi)
            k2 = _hop(coupling, psi + 0.5 * h * k1)
            k3 = _hop(coupling, psi + 0.5 * h * k2)
            k4 = _hop(coupling, psi + h * k3)
            psi = psi + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[s] = psi
    return out


def tql_implicit(diag, offdiag, max_iter=60):
    """Implicit-shift QL; same contract as the numba kernel.

    The scalar recurrences stay as Python loops, the Givens updates of the
    eigenvector columns are vectorized.
    """
    n = diag.shape[0]
    d = np.array(diag, dtype=np.float64)
    e = np.zeros(n)
    e[: n - 1] = offdiag
    z = np.eye(n)
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                raise ArithmeticError("tql_implicit: no convergence")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                col = z[:, i + 1].copy()
                z[:, i + 1] = s * z[:, i] + c * col
                z[:, i] = c * z[:, i] - s * col
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, z


def window_stats(values, width, spacing):
    """Mean, population std and max |dv/dtau| over each window of ``width + 1`` samples."""
    win = sliding_window_view(values, width + 1)
    slope = sliding_window_view(np.abs(np.diff(values)), width).max(axis=1) / spacing
    return win.mean(axis=1), win.std(axis=1), slope
