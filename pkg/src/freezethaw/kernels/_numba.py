"""Loop kernels compiled with numba."""
import math

import numpy as np
from numba import njit

# below this argument the ascending series is used, above it Miller recurrence
SERIES_LIMIT = 5.0


@njit(cache=True)
def _bessel_series(n, x):
    half = 0.5 * x
    term = 1.0
    for i in range(1, n + 1):
        term *= half / i
    total = term
    q = -half * half
    for k in range(1, 400):
        term *= q / (k * (k + n))
        total += term
        if k > half and abs(term) <= 1e-17 * abs(total):
            break
    return total


@njit(cache=True)
def _miller_start(x):
    m = int(x + 15.0 * x ** (1.0 / 3.0) + 30.0)
    return m + (m % 2)


@njit(cache=True)
def _bessel_miller(n, x):
    m = _miller_start(x)
    jp1 = 0.0
    j = 1e-30
    norm = 2.0 * j
    res = 0.0
    for k in range(m, 0, -1):
        jm1 = (2.0 * k / x) * j - jp1
        jp1 = j
        j = jm1
        order = k - 1
        if order == n:
            res = j
        if order > 0 and order % 2 == 0:
            norm += 2.0 * j
        if abs(j) > 1e250:
            j *= 1e-250
            jp1 *= 1e-250
            norm *= 1e-250
            res *= 1e-250
    norm += j
    return res / norm


@njit(cache=True)
def bessel_jn(n, x):
    """J_n(x) for integer ``n >= 0`` on an array of non-negative ``x``."""
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        xi = x[i]
        if xi < SERIES_LIMIT:
            out[i] = _bessel_series(n, xi)
        else:
            out[i] = _bessel_miller(n, xi)
    return out


@njit(cache=True)
def phase_sum(energies, weights, taus):
    """out[s, p] = sum_k weights[k, p] * (exp(-i E_k tau_s) - 1)."""
    n_modes, n_cols = weights.shape
    out = np.zeros((taus.shape[0], n_cols), dtype=np.complex128)
    for s in range(taus.shape[0]):
        for k in range(n_modes):
            phi = -energies[k] * taus[s]
            sh = math.sin(0.5 * phi)
            z = complex(-2.0 * sh * sh, math.sin(phi))
            for p in range(n_cols):
                out[s, p] += weights[k, p] * z
    return out


@njit(cache=True)
def _hop(coupling, psi, out):
    d = psi.shape[0]
    out[0] = -1j * coupling * psi[1]
    out[d - 1] = -1j * coupling * psi[d - 2]
    for i in range(1, d - 1):
        out[i] = -1j * coupling * (psi[i - 1] + psi[i + 1])


@njit(cache=True)
def rk4_chain(coupling, psi0, taus, h_max):
    """Classical RK4 for i dpsi/dtau = H psi on a uniform open chain.

    Each grid interval is split into the fewest equal steps no longer than
    ``h_max``.  Row 0 of the output is ``psi0`` at ``taus[0]``.
    """
    d = psi0.shape[0]
    out = np.empty((taus.shape[0], d), dtype=np.complex128)
    psi = psi0.copy()
    out[0] = psi
    k1 = np.empty(d, dtype=np.complex128)
    k2 = np.empty(d, dtype=np.complex128)
    k3 = np.empty(d, dtype=np.complex128)
    k4 = np.empty(d, dtype=np.complex128)
    tmp = np.empty(d, dtype=np.complex128)
    for s in range(1, taus.shape[0]):
        span = taus[s] - taus[s - 1]
        nsteps = max(1, int(math.ceil(span / h_max - 1e-9)))
        h = span / nsteps
        for _ in range(nsteps):
            _hop(coupling, psi, k1)
            for i in range(d):
                tmp[i] = psi[i] + 0.5 * h * k1[i]
            _hop(coupling, tmp, k2)
            for i in range(d):
                tmp[i] = psi[i] + 0.5 * h * k2[i]
            _hop(coupling, tmp, k3)
            for i in range(d):
                tmp[i] = psi[i] + h * k3[i]
            _hop(coupling, tmp, k4)
            for i in range(d):
                psi[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        out[s] = psi
    return out


@njit(cache=True)
def tql_implicit(diag, offdiag, max_iter=60):
    """Implicit-shift QL on a symmetric tridiagonal matrix.

    ``offdiag[i]`` couples rows ``i`` and ``i + 1`` (length n - 1).  Returns
    unsorted eigenvalues and the eigenvector matrix (columns).
    """
    n = diag.shape[0]
    d = diag.copy()
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
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            i = m - 1
            while i >= l:
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
                for k in range(n):
                    f = z[k, i + 1]
                    z[k, i + 1] = s * z[k, i] + c * f
                    z[k, i] = c * z[k, i] - s * f
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, z


@njit(cache=True)
def window_stats(values, width, spacing):
    """Mean, population std and max |dv/dtau| over each window of ``width + 1`` samples."""
    n_win = values.shape[0] - width
    mean = np.empty(n_win)
    std = np.empty(n_win)
    slope = np.empty(n_win)
    for i in range(n_win):
        acc = 0.0
        for j in range(i, i + width + 1):
            acc += values[j]
        mu = acc / (width + 1)
        var = 0.0
        top = 0.0
        for j in range(i, i + width + 1):
            var += (values[j] - mu) ** 2
            if j < i + width:
                dv = abs(values[j + 1] - values[j])
                if dv > top:
                    top = dv
        mean[i] = mu
        std[i] = math.sqrt(var / (width + 1))
        slope[i] = top / spacing
    return mean, std, slope
