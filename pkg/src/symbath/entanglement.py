"""Two-qubit concurrence: the Wootters oracle and the closed-form expressions.

The oracle is ground truth.  The closed forms are kept verbatim so their
residuals against the oracle can be reported; where the printed magnitude
formulas disagree with the oracle they are not corrected here.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from . import kernels
from .algebra import check_density, kron, pauli, singlet_projector
from .asymptotics import alpha_family, check_alpha, reduced_protocol_state, two_qubit_alpha_asymptote
from .errors import ValidationError
from .generator import EnvironmentParams

CLAMP = -1e-12
NULL_WEIGHT = 1e-14
PRINTED_CRITICAL_R = 0.980965
RADICANDS = ("delta", "paper-literal")

_YY = kron(pauli(2), pauli(2))


@dataclass(frozen=True)
class ConcurrenceBreakdown:
    value: float
    lambdas: tuple
    source: str = "oracle"

    @property
    def raw(self):
        """``lambda_1 - lambda_2 - lambda_3 - lambda_4`` before clipping at 0."""
        return self.lambdas[0] - sum(self.lambdas[1:])


@dataclass(frozen=True)
class ThresholdSet:
    alpha_sep: float
    alpha_gain: float
    alpha_minus: float
    alpha_plus: float
    delta_r: float


def concurrence_oracle(rho, check=True):
    """Wootters concurrence of a two-qubit density matrix.

    The lambdas (square roots of the eigenvalues of ``rho rho~``) are taken
    as the singular values of ``sqrt(rho) YY conj(sqrt(rho))``, whose Gram
    matrix is ``sqrt(rho) rho~ sqrt(rho)``.  Working with singular values
    avoids square roots of round-off sized eigenvalues.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValidationError(f"concurrence needs a 4x4 state, got {rho.shape}")
    if check:
        rho = check_density(rho, herm_tol=1e-10, trace_tol=1e-10)
    rho = 0.5 * (rho + rho.conj().T)
    w, v = kernels.eigh(rho)
    if w[0] < CLAMP:
        raise ValidationError(f"state has eigenvalue {w[0]:.3e} below clamp")
    # round-off sized weights would enter through their square roots
    w = np.where(w < NULL_WEIGHT, 0.0, w)
    sqrt_rho = (v * np.sqrt(w)) @ v.conj().T
    sv = np.linalg.svd(sqrt_rho @ _YY @ sqrt_rho.conj(), compute_uv=False)
    lambdas = tuple(float(x) for x in sv)
    value = max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3])
    return ConcurrenceBreakdown(value=min(value, 1.0), lambdas=lambdas)


def concurrence(rho):
    return concurrence_oracle(rho).value


def printed_concurrence_initial(alpha):
    return max(0.0, 1 - 6 * alpha)


def printed_concurrence_asymptotic_2q(alpha, r):
    """Printed magnitude for the two-qubit asymptote of the alpha family.

    Zero for ``alpha >= alpha_sep(r)`` where the printed text declares the
    state separable.
    """
    if alpha >= alpha_separable(r):
        return 0.0
    return 0.5 - 3 * alpha * (3 - r * r) / (3 + r * r)


def printed_concurrence_general_2q(rho_p, r):
    """Printed concurrence of a two-qubit asymptote in terms of its singlet weight."""
    if not 0 <= rho_p <= 1:
        raise ValidationError(f"singlet weight must lie in [0, 1], got {rho_p}")
    r2 = r * r
    inner = 2 * abs(4 * rho_p - (1 - r2)) - 2 * (1 - rho_p) * (1 - r2)
    return max(0.0, inner) / (2 * (3 + r2))


def delta_r(r):
    r2 = r * r
    return (1 - r2) * ((3 + 2 * r2) ** 2 - 9 * r2)


def delta_r_literal(r):
    r2 = r * r
    return (1 - r2) * (9 + 9 * r2 + 4 * r2 * r2)


def _radicand(r, radicand):
    if radicand == "delta":
        return delta_r(r)
    if radicand == "paper-literal":
        return delta_r_literal(r)
    raise ValidationError(f"radicand must be one of {RADICANDS}, got {radicand!r}")


def reduced_state_concurrence(alpha, r, radicand="delta"):
    """Closed-form concurrence of the two-qubit state left by the protocol."""
    r2 = r * r
    dl = max(0.0, _radicand(r, radicand))
    val = abs(3 * (1 + r2) - 4 * alpha * (3 + 2 * r2)) - 2 * alpha * np.sqrt(dl)
    return max(0.0, val) / (3 * (1 + r2))


def alpha_separable(r):
    r2 = r * r
    return (3 + r2) / (6 * (3 - r2))


def alpha_gain(r):
    r2 = r * r
    return (3 + r2) / (18 * (1 + r2))


def alpha_minus(r, radicand="delta"):
    r2 = r * r
    return 3 * (1 + r2) / (4 * (3 + 2 * r2) - 2 * np.sqrt(max(0.0, _radicand(r, radicand))))


def alpha_plus(r, radicand="delta"):
    r2 = r * r
    return 3 * (1 + r2) / (4 * (3 + 2 * r2) + 2 * np.sqrt(max(0.0, _radicand(r, radicand))))


def thresholds(r, radicand="delta"):
    if abs(r) > 1:
        raise ValidationError(f"|r| must not exceed 1, got {r}")
    return ThresholdSet(
        alpha_sep=alpha_separable(r),
        alpha_gain=alpha_gain(r),
        alpha_minus=alpha_minus(r, radicand),
        alpha_plus=alpha_plus(r, radicand),
        delta_r=_radicand(r, radicand),
    )


def critical_r(radicand="delta", xtol=1e-12):
    """Root of ``alpha_minus(r) = 1/3`` on ``(0, 1)``."""
    return bisect(lambda r: alpha_minus(r, radicand) - 1 / 3, 0.0, 1.0, xtol=xtol)


def oracle_critical_r(lo=0.9, hi=1.0, step=1e-4):
    """Smallest grid ``r`` where the oracle sees entanglement in the reduced state at alpha = 1/3."""
    for r in np.arange(lo, hi, step):
        rho, _ = reduced_protocol_state(1 / 3, EnvironmentParams.from_r(r))
        if concurrence_oracle(rho).raw > 0:
            return float(r)
    return float("nan")


def oracle_zero_crossing(state_of, lo, hi, xtol=1e-12):
    """Bisect the unclipped oracle concurrence of ``state_of(x)`` on ``[lo, hi]``."""
    return bisect(lambda a: concurrence_oracle(state_of(a)).raw, lo, hi, xtol=xtol)


def delta_quantities(alpha, r, mode="oracle", radicand="delta"):
    """Concurrence gains ``(D, D1, D2)``.

    ``D`` compares the two-qubit asymptote with the initial state, ``D1`` the
    ancilla-protocol state with the initial state and ``D2`` the protocol
    state with the two-qubit asymptote.
    """
    alpha = check_alpha(alpha)
    if mode == "paper":
        c_init = printed_concurrence_initial(alpha)
        c_asym = printed_concurrence_asymptotic_2q(alpha, r)
        c_red = reduced_state_concurrence(alpha, r, radicand)
    elif mode == "oracle":
        params = EnvironmentParams.from_r(r)
        c_init = concurrence(alpha_family(alpha))
        c_asym = concurrence(two_qubit_alpha_asymptote(alpha, params))
        c_red = concurrence(reduced_protocol_state(alpha, params)[0])
    else:
        raise ValidationError(f"mode must be 'paper' or 'oracle', got {mode!r}")
    return c_asym - c_init, c_red - c_init, c_red - c_asym


def singlet_weight(rho):
    return float(np.trace(np.asarray(rho) @ singlet_projector()).real)
