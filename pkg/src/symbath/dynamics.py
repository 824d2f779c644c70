"""Superoperators, propagators, asymptotic states and time averages."""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .algebra import qubit_count, unvec, vec
from .errors import ConvergenceError, ValidationError

DEFAULT_TOL = 1e-10
BASE_HORIZON = 1.0
MAX_DOUBLINGS = 60
KERNEL_SV_TOL = 1e-10


@dataclass(frozen=True)
class Superoperator:
    """Column-stacked matrix of a generator on ``2**n x 2**n`` matrices."""

    matrix: np.ndarray
    qubit_count: int

    @property
    def dim(self):
        return 2 ** self.qubit_count

    def apply(self, rho):
        return unvec(self.matrix @ vec(rho), self.dim)

    def heisenberg(self):
        """Dual generator acting on observables.

        For Hermiticity-preserving maps the Heisenberg dual defined through
        ``Tr(x L[rho]) = Tr(L^[x] rho)`` has matrix ``M^dag``.
        """
        return Superoperator(self.matrix.conj().T, self.qubit_count)


@dataclass(frozen=True)
class ConvergenceResult:
    state: np.ndarray
    horizon: float
    residual: float
    doublings: int


def vectorize(generator):
    return Superoperator(np.asarray(generator.superoperator_matrix(), dtype=complex), generator.qubit_count)


def propagator(superop, t):
    """``exp(t M)`` for ``t >= 0``."""
    if t < 0:
        raise ValidationError(f"propagation time must be >= 0, got {t}")
    m = superop.matrix if isinstance(superop, Superoperator) else np.asarray(superop)
    return kernels.expm(t * m)


def evolve(superop, rho0, t):
    return unvec(propagator(superop, t) @ vec(rho0), superop.dim)


def asymptotic_state(superop, rho0, tol=DEFAULT_TOL, base_horizon=BASE_HORIZON, max_doublings=MAX_DOUBLINGS):
    """Long-time limit of ``exp(tL) rho0`` by repeated squaring of the propagator.

    Horizons ``t0, 2 t0, 4 t0, ...`` are visited until two consecutive states
    differ by less than ``tol`` entrywise.  ``rho0`` may be a single matrix or
    a stack ``(k, d, d)``; the residual is then the maximum over the stack.
    """
    if not tol > 0:
        raise ValidationError(f"tol must be > 0, got {tol}")
    rho0 = np.asarray(rho0, dtype=complex)
    single = rho0.ndim == 2
    stack = rho0[None] if single else rho0
    d = superop.dim
    if stack.shape[1:] != (d, d):
        raise ValidationError(f"initial state shape {stack.shape[1:]} does not match dimension {d}")
    v0 = np.stack([vec(x) for x in stack], axis=1)
    prop = propagator(superop, base_horizon)
    horizon = base_horizon
    current = prop @ v0
    residual = np.inf
    for doubling in range(1, max_doublings + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            prop = prop @ prop
            nxt = prop @ v0
            residual = float(np.max(np.abs(nxt - current)))
        horizon *= 2
        current = nxt
        if not np.isfinite(residual):
            # round-off amplified by squaring; further doublings cannot recover
            raise ConvergenceError(f"propagator diverged at horizon {horizon:g} (tol {tol:g} unreachable)", residual)
        if residual < tol:
            states = np.array([unvec(current[:, k], d) for k in range(current.shape[1])])
            states = 0.5 * (states + states.conj().transpose(0, 2, 1))
            return ConvergenceResult(states[0] if single else states, horizon, residual, doubling)
    raise ConvergenceError(
        f"no convergence after {max_doublings} doublings (residual {residual:.3e})", residual
    )


def time_average(superop, x0, horizon, steps, extrapolate=False):
    """Heisenberg time average ``(1/T) int_0^T exp(t L^)[x0] dt`` (trapezoid).

    The plain average carries an ``O(1/T)`` bias from the decaying modes.
    With ``extrapolate=True`` the averages over ``T/2`` and ``T`` (same time
    step) are combined as ``2 A(T) - A(T/2)``, which cancels that term and
    leaves only contributions of order ``exp(-gap T/2)``.
    """
    if horizon <= 0:
        raise ValidationError("horizon must be > 0")
    if steps < 2:
        raise ValidationError("steps must be >= 2")
    if steps % 2:
        steps += 1
    heis = superop.heisenberg()
    h = horizon / steps
    step = kernels.expm(h * heis.matrix)
    acc_half, acc = kernels.trapezoid_orbit(step, vec(np.asarray(x0, dtype=complex)), steps)
    full = acc * h / horizon
    if not extrapolate:
        return unvec(full, superop.dim)
    half = acc_half * h / (0.5 * horizon)
    return unvec(2 * full - half, superop.dim)


def heisenberg_limit(superop, x0, tol=DEFAULT_TOL):
    """``lim exp(t L^)[x0]`` by propagator squaring on the dual generator."""
    return asymptotic_state(superop.heisenberg(), x0, tol=tol).state


def spectrum(superop):
    return np.linalg.eigvals(superop.matrix)


def spectral_abscissa(superop):
    return float(np.max(spectrum(superop).real))


def kernel_dimension(superop, sv_tol=KERNEL_SV_TOL):
    sv = np.linalg.svd(superop.matrix, compute_uv=False)
    return int(np.sum(sv <= sv_tol))


def trace_row_residual(superop):
    """Max-abs entry of ``vec(1)^dag M`` (zero for trace-preserving maps)."""
    d = superop.dim
    return float(np.max(np.abs(vec(np.eye(d)).conj() @ superop.matrix)))


def choi_matrix(prop, d=None):
    """Choi matrix ``sum_ij |i><j| kron Phi(|i><j|)`` of a column-stacked map."""
    prop = np.asarray(prop)
    if d is None:
        d = int(round(np.sqrt(prop.shape[0])))
    choi = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1
            choi += np.kron(e, unvec(prop @ vec(e), d))
    return choi


def superoperator_from_matrix(matrix):
    matrix = np.asarray(matrix, dtype=complex)
    d = int(round(np.sqrt(matrix.shape[0])))
    return Superoperator(matrix, qubit_count(d))
