"""Closed-form asymptotic states for one, two and three qubits.

Everything here is expressed through the one-qubit stationary state
``rho* = (1 + r sigma_3)/2`` with ``r = b/a`` and through singlet
projectors.  ``P^(ab) rho^(c)`` denotes the singlet projector on qubits
``a, b`` times ``rho*`` on the remaining qubit, in the global ordering.
"""

from dataclasses import dataclass

import numpy as np

from . import dynamics
from .algebra import PAIRS, embed_single_qubit, invariant_operators, kron, max_abs, partial_trace, pauli, singlet_projector
from .errors import ValidationError
from .generator import build_generator

ALPHA_MAX = 1 / 3
SPAN_TOL = 1e-12
XFORM_TOL = 1e-12


@dataclass(frozen=True)
class OneQubitStationary:
    state: np.ndarray
    bloch_vector: np.ndarray
    drift: np.ndarray
    source: np.ndarray


@dataclass(frozen=True)
class XFormEntries:
    """Entries of the reduced protocol state, before the ``1/(1+r^2)`` factor."""

    x_plus: float
    x_minus: float
    y: float
    u: float

    def matrix(self, r):
        m = np.array(
            [
                [self.x_plus, 0, 0, 0],
                [0, self.y, -self.u, 0],
                [0, -self.u, self.y, 0],
                [0, 0, 0, self.x_minus],
            ],
            dtype=complex,
        )
        return m / (1 + r * r)


def check_alpha(alpha):
    if not 0 <= alpha <= ALPHA_MAX + 1e-15:
        raise ValidationError(f"alpha must lie in [0, 1/3], got {alpha!r}")
    return min(float(alpha), ALPHA_MAX)


def stationary_qubit(r):
    return 0.5 * (np.eye(2) + r * pauli(3))


def stationary_product(r, n):
    return kron(*[stationary_qubit(r)] * n)


def bloch_equations(params):
    """Drift matrix ``D`` and source ``z`` with ``dr/dt = -2 (D r - z)``.

    Derived from the one-qubit generator in this package's conventions; the
    precession entries carry the sign of ``-i(omega/2)[sigma_3, .]``.
    """
    a, b, c, w = params.a, params.b, params.c, params.omega
    drift = np.array([[a + c, w / 2, 0], [-w / 2, a + c, 0], [0, 0, 2 * a]])
    source = np.array([0.0, 0.0, 2 * b])
    return drift, source


def one_qubit_stationary(params):
    params.require_nondegenerate()
    drift, source = bloch_equations(params)
    r_vec = np.linalg.solve(drift, source)
    state = 0.5 * (np.eye(2) + sum(r_vec[i] * pauli(i + 1) for i in range(3)))
    return OneQubitStationary(state=state, bloch_vector=r_vec, drift=drift, source=source)


def alpha_family(alpha, n=2):
    """``alpha 1 + (1 - 4 alpha) P`` on two qubits, tensored with ``1/2`` for ``n = 3``."""
    alpha = check_alpha(alpha)
    rho = alpha * np.eye(4) + (1 - 4 * alpha) * singlet_projector()
    if n == 2:
        return rho
    if n == 3:
        return np.kron(rho, np.eye(2) / 2)
    raise ValidationError(f"alpha family defined for 2 or 3 qubits, got {n}")


def two_qubit_conditional_expectation(rho, params):
    """Asymptotic image of any two-qubit state."""
    params.require_nondegenerate()
    r = params.r_infinity
    p = singlet_projector()
    rho_p = float(np.trace(np.asarray(rho) @ p).real)
    denom = 3 + r * r
    return 4 * (1 - rho_p) / denom * stationary_product(r, 2) + (4 * rho_p - 1 + r * r) / denom * p


def two_qubit_alpha_asymptote(alpha, params):
    """Asymptote of the alpha family (two qubits evolving alone)."""
    params.require_nondegenerate()
    alpha = check_alpha(alpha)
    r = params.r_infinity
    denom = 3 + r * r
    return 12 * alpha / denom * stationary_product(r, 2) + (denom - 12 * alpha) / denom * singlet_projector()


def singlet_times_stationary(pair, r, ops=None):
    """``P^(ab)`` on ``pair`` times ``rho*`` on the third qubit."""
    ops = ops or invariant_operators()
    (c,) = {1, 2, 3} - set(pair)
    return ops.p_ab[tuple(sorted(pair))] @ embed_single_qubit(stationary_qubit(r), c, 3)


def _singlet_sum(r, ops):
    return sum(singlet_times_stationary(ab, r, ops) for ab in PAIRS)


def three_qubit_map_of_identity(params):
    """Asymptotic image of the (unnormalized) identity on three qubits."""
    params.require_nondegenerate()
    r = params.r_infinity
    r2 = r * r
    ops = invariant_operators()
    return 8 / (1 + r2) * stationary_product(r, 3) + 8 * r2 / (3 * (1 + r2)) * _singlet_sum(r, ops)


def three_qubit_map_of_q(params):
    """Asymptotic image of the projection ``Q = 1 - P``."""
    params.require_nondegenerate()
    r = params.r_infinity
    r2 = r * r
    ops = invariant_operators()
    return 8 / (1 + r2) * (stationary_product(r, 3) - (1 - r2) / 6 * _singlet_sum(r, ops))


def three_qubit_map_of_singlet(pair, params):
    """Asymptotic image of ``P^(ab)``: twice the singlet times ``rho*``."""
    params.require_nondegenerate()
    return 2 * singlet_times_stationary(pair, params.r_infinity)


def three_qubit_protocol_asymptote(alpha, params):
    """Asymptote of ``rho(alpha) kron 1/2`` under the three-qubit dynamics."""
    params.require_nondegenerate()
    alpha = check_alpha(alpha)
    r = params.r_infinity
    r2 = r * r
    ops = invariant_operators()
    return (
        4 * alpha / (1 + r2) * stationary_product(r, 3)
        + 4 * alpha * r2 / (3 * (1 + r2)) * _singlet_sum(r, ops)
        + (1 - 4 * alpha) * singlet_times_stationary((1, 2), r, ops)
    )


def decompose_in_singlet_span(rho, tol=SPAN_TOL):
    """Coefficients ``(c0, {ab: c_ab})`` with ``rho = c0 1 + sum c_ab P^(ab)``.

    Returns ``None`` when ``rho`` is not in that span within ``tol``.
    """
    ops = invariant_operators()
    basis = [np.eye(8, dtype=complex)] + [ops.p_ab[ab] for ab in PAIRS]
    design = np.stack([b.reshape(-1) for b in basis], axis=1)
    target = np.asarray(rho, dtype=complex).reshape(-1)
    coef, *_ = np.linalg.lstsq(design, target, rcond=None)
    if max_abs(design @ coef - target) > tol:
        return None
    return coef[0], dict(zip(PAIRS, coef[1:]))


def three_qubit_conditional_expectation(rho, params, tol=dynamics.DEFAULT_TOL):
    """Asymptotic image of a three-qubit state.

    States in the span of the identity and the singlet projectors use the
    closed forms; anything else goes through the numeric propagator.
    Returns ``(state, "analytic" | "numeric")``.
    """
    params.require_nondegenerate()
    parts = decompose_in_singlet_span(rho)
    if parts is None:
        superop = dynamics.vectorize(build_generator(params, 3))
        return dynamics.asymptotic_state(superop, rho, tol=tol).state, "numeric"
    c0, c_ab = parts
    out = c0 * three_qubit_map_of_identity(params)
    for ab, cab in c_ab.items():
        out = out + cab * three_qubit_map_of_singlet(ab, params)
    return out, "analytic"


def x_form_entries(alpha, r):
    alpha = check_alpha(alpha)
    r2 = r * r
    x_plus = alpha / 3 * (1 + r) * (3 * (1 + r) + 2 * r2)
    x_minus = alpha / 3 * (1 - r) * (3 * (1 - r) + 2 * r2)
    y = (3 * (1 + r2) - 2 * alpha * (3 + 5 * r2)) / 6
    u = (3 * (1 + r2) - 4 * alpha * (3 + 2 * r2)) / 6
    return XFormEntries(x_plus, x_minus, y, u)


def reduced_protocol_state(alpha, params, check=True):
    """Two-qubit state left after tracing the ancilla out of the protocol asymptote.

    Returns ``(matrix, entries)``.  With ``check`` the assembled matrix is
    compared against the X-form entries and a mismatch raises.
    """
    params.require_nondegenerate()
    alpha = check_alpha(alpha)
    r = params.r_infinity
    r2 = r * r
    rho1 = stationary_qubit(r)
    eye = np.eye(2)
    mat = (
        4 * alpha / (1 + r2) * np.kron(rho1, rho1)
        + (4 * alpha * r2 + 3 * (1 - 4 * alpha) * (1 + r2)) / (3 * (1 + r2)) * singlet_projector()
        + 2 * alpha * r2 / (3 * (1 + r2)) * (np.kron(eye, rho1) + np.kron(rho1, eye))
    )
    entries = x_form_entries(alpha, r)
    if check:
        dev = max_abs(mat - entries.matrix(r))
        if dev > XFORM_TOL:
            raise AssertionError(f"reduced state disagrees with its X-form entries by {dev:.3e}")
    return mat, entries


def reduced_from_three_qubit(rho3):
    return partial_trace(rho3, keep=(1, 2))
