"""Ancilla protocol: append a depolarized qubit, relax, trace it out.

Grid points are independent; :func:`sweep` may evaluate them on a thread
pool and always returns records sorted by ``(r, alpha)``.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from functools import lru_cache
import math

import numpy as np

from . import dynamics
from .algebra import max_abs, partial_trace
from .asymptotics import (
    ALPHA_MAX,
    alpha_family,
    check_alpha,
    reduced_protocol_state,
    three_qubit_protocol_asymptote,
    two_qubit_alpha_asymptote,
)
from .entanglement import (
    alpha_gain,
    alpha_separable,
    concurrence,
    printed_concurrence_asymptotic_2q,
    printed_concurrence_initial,
    reduced_state_concurrence,
)
from .errors import ValidationError
from .generator import EnvironmentParams, build_generator

ENTANGLED_TOL = 1e-12
DEFAULT_ALPHA_STEP = 0.005
FIG1_ALPHA_FLOOR = 1 / 5

# (initial, two-qubit asymptote, reduced protocol state) entangled? -> label
REGIMES = {
    (False, False, False): "separable",
    (False, False, True): "ancilla-induced",
    (False, True, False): "bath-induced",
    (False, True, True): "bath-and-ancilla-induced",
    (True, False, False): "entanglement-lost",
    (True, False, True): "ancilla-preserved",
    (True, True, False): "bath-preserved",
    (True, True, True): "entangled-throughout",
}
SINGLET_REGIME = "singlet-preserved"

CSV_COLUMNS = (
    "r",
    "alpha",
    "C_init",
    "C_asym2q_oracle",
    "C_asym2q_paper",
    "C_red3q_oracle",
    "C_red3q_paper",
    "delta",
    "delta1",
    "delta2",
    "regime",
    "residual",
)


def default_r_values():
    return [round(0.02 * k, 10) for k in range(50)] + [0.99]


def alpha_grid(lo, hi, step=DEFAULT_ALPHA_STEP):
    """``lo, lo+step, ...`` up to ``hi``, with ``hi`` itself always included."""
    if step <= 0:
        raise ValidationError(f"step must be > 0, got {step}")
    if lo > hi + 1e-15:
        raise ValidationError(f"empty range [{lo}, {hi}]")
    count = int(math.floor((hi - lo) / step + 1e-9))
    values = [lo + k * step for k in range(count + 1)]
    if hi - values[-1] > 1e-12:
        values.append(hi)
    return values


def classify(c_initial, c_asym, c_reduced, alpha=None):
    if alpha == 0:
        return SINGLET_REGIME
    key = (c_initial > ENTANGLED_TOL, c_asym > ENTANGLED_TOL, c_reduced > ENTANGLED_TOL)
    return REGIMES[key]


@dataclass(frozen=True)
class ProtocolRecord:
    r: float
    alpha: float
    c_initial: float
    c_initial_paper: float
    c_asymptotic_2q: float
    c_asymptotic_2q_paper: float
    c_reduced_3q: float
    c_reduced_3q_paper: float
    delta: float
    delta1: float
    delta2: float
    delta_paper: float
    delta1_paper: float
    delta2_paper: float
    regime: str
    regime_paper: str
    residual_analytic_vs_numeric: float
    method: str

    def deltas(self, mode):
        if mode == "paper":
            return self.delta_paper, self.delta1_paper, self.delta2_paper
        if mode == "oracle":
            return self.delta, self.delta1, self.delta2
        raise ValidationError(f"mode must be 'paper' or 'oracle', got {mode!r}")


@lru_cache(maxsize=64)
def _superoperators(params):
    return (
        dynamics.vectorize(build_generator(params, 2)),
        dynamics.vectorize(build_generator(params, 3)),
    )


def protocol_states(alpha, params, method="analytic", tol=dynamics.DEFAULT_TOL):
    """``(rho(alpha), two-qubit asymptote, three-qubit asymptote, reduced state)``."""
    params.require_nondegenerate()
    alpha = check_alpha(alpha)
    rho2 = alpha_family(alpha, 2)
    if method == "analytic":
        asym2 = two_qubit_alpha_asymptote(alpha, params)
        asym3 = three_qubit_protocol_asymptote(alpha, params)
    elif method == "numeric":
        so2, so3 = _superoperators(params)
        asym2 = dynamics.asymptotic_state(so2, rho2, tol=tol).state
        asym3 = dynamics.asymptotic_state(so3, alpha_family(alpha, 3), tol=tol).state
    else:
        raise ValidationError(f"method must be 'analytic' or 'numeric', got {method!r}")
    return rho2, asym2, asym3, partial_trace(asym3, keep=(1, 2))


def run_protocol_point(alpha, params, method="analytic", cross_check=None):
    """Evaluate one ``(r, alpha)`` point of the protocol.

    ``residual_analytic_vs_numeric`` is the max-abs gap between the closed-form
    and propagated asymptotes (two- and three-qubit).  It is always filled for
    ``method="numeric"``; for the analytic method only with ``cross_check``.
    """
    params.require_nondegenerate()
    alpha = check_alpha(alpha)
    r = params.r_infinity
    rho2, asym2, asym3, reduced = protocol_states(alpha, params, method)
    if cross_check is None:
        cross_check = method == "numeric"
    residual = float("nan")
    if cross_check:
        other = "analytic" if method == "numeric" else "numeric"
        _, o2, o3, _ = protocol_states(alpha, params, other)
        residual = max(max_abs(asym2 - o2), max_abs(asym3 - o3))
    if method == "analytic":
        # tracing the three-qubit closed form must reproduce the X-form entries
        reduced_protocol_state(alpha, params)

    c_init = concurrence(rho2)
    c_asym = concurrence(asym2)
    c_red = concurrence(reduced)
    p_init = printed_concurrence_initial(alpha)
    p_asym = printed_concurrence_asymptotic_2q(alpha, r)
    p_red = reduced_state_concurrence(alpha, r)
    return ProtocolRecord(
        r=r,
        alpha=alpha,
        c_initial=c_init,
        c_initial_paper=p_init,
        c_asymptotic_2q=c_asym,
        c_asymptotic_2q_paper=p_asym,
        c_reduced_3q=c_red,
        c_reduced_3q_paper=p_red,
        delta=c_asym - c_init,
        delta1=c_red - c_init,
        delta2=c_red - c_asym,
        delta_paper=p_asym - p_init,
        delta1_paper=p_red - p_init,
        delta2_paper=p_red - p_asym,
        regime=classify(c_init, c_asym, c_red, alpha),
        regime_paper=classify(p_init, p_asym, p_red, alpha),
        residual_analytic_vs_numeric=residual,
        method=method,
    )


def _validate_points(points, params_factory):
    checked = []
    for r, alpha in points:
        try:
            params = params_factory(r)
            params.require_nondegenerate()
            check_alpha(alpha)
        except ValidationError as exc:
            raise ValidationError(f"invalid grid point (r={r}, alpha={alpha}): {exc}") from None
        checked.append((params, alpha))
    return checked


def sweep(points, method="analytic", workers=1, params_factory=EnvironmentParams.from_r, cross_check=None):
    """One record per ``(r, alpha)`` point, sorted by ``(r, alpha)``.

    Every point is validated before any is evaluated, so an invalid grid
    produces an error and no records.
    """
    points = list(points)
    if not points:
        raise ValidationError("grid is empty")
    checked = _validate_points(points, params_factory)

    def run(item):
        params, alpha = item
        return run_protocol_point(alpha, params, method=method, cross_check=cross_check)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(run, checked))
    else:
        records = [run(item) for item in checked]
    return sorted(records, key=lambda rec: (rec.r, rec.alpha))


def grid_points(r_values, alpha_values):
    return [(r, a) for r in r_values for a in alpha_values]


def figure_points(figure, r_values=None, alpha_step=DEFAULT_ALPHA_STEP, fig1_floor=FIG1_ALPHA_FLOOR):
    """Grid of the ``--figure`` preset 1, 2 or 3.

    1. reduced-state concurrence where both two-qubit states are separable,
       ``alpha in [max(floor, alpha_sep(r)), 1/3]``;
    2. ``D1`` on ``alpha in [0, alpha_gain(r)]``;
    3. ``D2`` on ``alpha in [alpha_gain(r), 1/3]``.
    """
    r_values = default_r_values() if r_values is None else list(r_values)
    pts = []
    for r in r_values:
        if figure == 1:
            lo, hi = max(fig1_floor, alpha_separable(r)), ALPHA_MAX
        elif figure == 2:
            lo, hi = 0.0, alpha_gain(r)
        elif figure == 3:
            lo, hi = alpha_gain(r), ALPHA_MAX
        else:
            raise ValidationError(f"figure must be 1, 2 or 3, got {figure!r}")
        if lo > hi:
            continue
        pts.extend((r, a) for a in alpha_grid(lo, hi, alpha_step))
    return pts


def format_float(x):
    return format(float(x), ".17g")


def records_to_rows(records, mode="paper"):
    rows = []
    for rec in records:
        d, d1, d2 = rec.deltas(mode)
        rows.append(
            [
                format_float(rec.r),
                format_float(rec.alpha),
                format_float(rec.c_initial),
                format_float(rec.c_asymptotic_2q),
                format_float(rec.c_asymptotic_2q_paper),
                format_float(rec.c_reduced_3q),
                format_float(rec.c_reduced_3q_paper),
                format_float(d),
                format_float(d1),
                format_float(d2),
                rec.regime,
                format_float(rec.residual_analytic_vs_numeric),
            ]
        )
    return rows


def records_to_csv(records, mode="paper", header=None):
    """CSV text: optional ``# key=value`` comment line, column header, rows."""
    lines = []
    if header:
        lines.append("# " + " ".join(f"{k}={v}" for k, v in header.items()))
    lines.append(",".join(CSV_COLUMNS))
    lines.extend(",".join(row) for row in records_to_rows(records, mode))
    return "\n".join(lines) + "\n"


def record_fields():
    return [f.name for f in fields(ProtocolRecord)]


def record_residual(rec_a, rec_b):
    """Largest difference over the numeric fields of two records."""
    worst = 0.0
    for name in record_fields():
        va, vb = getattr(rec_a, name), getattr(rec_b, name)
        if isinstance(va, float) and not (np.isnan(va) or np.isnan(vb)):
            worst = max(worst, abs(va - vb))
    return worst
