"""Hot numeric kernels with a numba path and a numpy fallback.

Three kernels dominate runtime in sweeps and verification runs:

* Hermitian eigendecomposition (concurrence oracle, PSD checks),
* the matrix exponential of superoperators (propagators),
* the trapezoidal orbit sum used for Heisenberg time averages.

``expm`` and ``trapezoid_orbit`` dispatch on :data:`symbath._accel.USE_NUMBA`;
``eigh`` always calls LAPACK.  The raw implementations are importable under ``*_numba`` / ``*_numpy`` names so
they can be tested and benchmarked side by side.
"""

import numpy as np

from . import _accel

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
TAYLOR_ORDER = 18
# ||A||_1 / 2**s is pushed below this before the series is summed.
TAYLOR_NORM_BOUND = 0.5


def _jacobi_eigh(a, tol, max_sweeps):
    # Cyclic complex Jacobi.  Works on a copy; returns unsorted (w, v, sweeps).
    n = a.shape[0]
    h = a.copy()
    v = np.eye(n, dtype=np.complex128)
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += abs(h[i, j]) ** 2
    scale = max(1.0, np.sqrt(scale))
    sweeps = 0
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += abs(h[p, q]) ** 2
        if np.sqrt(2.0 * off) < tol * scale:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = h[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                phase = apq / mag
                app = h[p, p].real
                aqq = h[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # G = diag-phase(q) @ real rotation; h <- G^H h G, v <- v G
                gpp = c + 0j
                gpq = s + 0j
                gqp = -s * np.conj(phase)
                gqq = c * np.conj(phase)
                for k in range(n):
                    hkp = h[k, p]
                    hkq = h[k, q]
                    h[k, p] = hkp * gpp + hkq * gqp
                    h[k, q] = hkp * gpq + hkq * gqq
                for k in range(n):
                    hpk = h[p, k]
                    hqk = h[q, k]
                    h[p, k] = np.conj(gpp) * hpk + np.conj(gqp) * hqk
                    h[q, k] = np.conj(gpq) * hpk + np.conj(gqq) * hqk
                h[p, q] = 0.0
                h[q, p] = 0.0
                h[p, p] = h[p, p].real
                h[q, q] = h[q, q].real
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = vkp * gpp + vkq * gqp
                    v[k, q] = vkp * gpq + vkq * gqq
    w = np.empty(n)
    for i in range(n):
        w[i] = h[i, i].real
    return w, v, sweeps


_jacobi_eigh_nb = _accel.njit(_jacobi_eigh)


def eigh_numba(h):
    """Cyclic Jacobi eigendecomposition of a Hermitian matrix (ascending)."""
    h = np.ascontiguousarray(h, dtype=np.complex128)
    w, v, _ = _jacobi_eigh_nb(h, JACOBI_TOL, JACOBI_MAX_SWEEPS)
    order = np.argsort(w)
    return w[order], v[:, order]


def eigh_numpy(h):
    return np.linalg.eigh(np.asarray(h, dtype=np.complex128))


def eigh(h):
    """Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.

    Always LAPACK: the compiled Jacobi sweep loses to it at every size used
    here (see ``benchmarks/bench_kernels.py``) and is kept as a cross-check.
    """
    return eigh_numpy(h)


def eigvalsh(h):
    return eigh(h)[0]


def _expm_taylor(a, order, bound):
    n = a.shape[0]
    norm1 = 0.0
    for j in range(n):
        col = 0.0
        for i in range(n):
            col += abs(a[i, j])
        norm1 = max(norm1, col)
    s = 0
    while norm1 > bound:
        norm1 *= 0.5
        s += 1
    x = a * (0.5 ** s)
    term = np.eye(n, dtype=np.complex128)
    out = np.eye(n, dtype=np.complex128)
    for k in range(1, order + 1):
        term = np.dot(term, x) / k
        out = out + term
    for _ in range(s):
        out = np.dot(out, out)
    return out


_expm_taylor_nb = _accel.njit(_expm_taylor)


def expm_numba(a):
    a = np.ascontiguousarray(a, dtype=np.complex128)
    return _expm_taylor_nb(a, TAYLOR_ORDER, TAYLOR_NORM_BOUND)


def expm_numpy(a):
    a = np.ascontiguousarray(a, dtype=np.complex128)
    return _expm_taylor(a, TAYLOR_ORDER, TAYLOR_NORM_BOUND)


def expm(a):
    """Matrix exponential by scaling and squaring around a Taylor core.

    With ``||A/2**s||_1 <= 0.5`` the truncation after order 18 leaves a
    relative remainder below ``0.5**19 / 19!``, far under double precision.
    """
    if _accel.USE_NUMBA:
        return expm_numba(a)
    return expm_numpy(a)


def _trapezoid_orbit(step, v0, steps):
    # Returns the running trapezoid sums (without the factor h) after
    # steps//2 and steps applications of ``step``.
    acc = 0.5 * v0
    v = v0.copy()
    half = steps // 2
    acc_half = acc.copy()
    for k in range(1, steps + 1):
        v = np.dot(step, v)
        if k == half:
            acc_half = acc + 0.5 * v
        if k < steps:
            acc = acc + v
        else:
            acc = acc + 0.5 * v
    return acc_half, acc


_trapezoid_orbit_nb = _accel.njit(_trapezoid_orbit)


def trapezoid_orbit_numba(step, v0, steps):
    step = np.ascontiguousarray(step, dtype=np.complex128)
    v0 = np.ascontiguousarray(v0, dtype=np.complex128)
    return _trapezoid_orbit_nb(step, v0, steps)


def trapezoid_orbit_numpy(step, v0, steps):
    step = np.ascontiguousarray(step, dtype=np.complex128)
    v0 = np.ascontiguousarray(v0, dtype=np.complex128)
    return _trapezoid_orbit(step, v0, steps)


def trapezoid_orbit(step, v0, steps):
    """Trapezoid sums of ``step**k @ v0`` over ``k = 0..steps/2`` and ``0..steps``.

    ``steps`` must be even.  Multiply by the time step to get integrals.
    """
    if steps < 2 or steps % 2:
        raise ValueError("steps must be an even integer >= 2")
    if _accel.USE_NUMBA:
        return trapezoid_orbit_numba(step, v0, steps)
    return trapezoid_orbit_numpy(step, v0, steps)
