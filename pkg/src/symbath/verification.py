"""Cross-checks of every closed form against the numeric oracles.

Each claim returns a residual and a tolerance.  Claims that compare a
printed formula known to disagree with the oracle are *flag* claims: a
residual above tolerance is reported as ``flag`` rather than ``fail``.
"""

from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from . import dynamics
from .algebra import (
    PAIRS,
    allclose,
    anticommutator,
    brute_force_commutant,
    commutator,
    global_spin,
    invariant_operators,
    max_abs,
    partial_trace,
    project_onto_basis,
    random_density,
    random_hermitian,
)
from .asymptotics import (
    alpha_family,
    one_qubit_stationary,
    reduced_protocol_state,
    stationary_product,
    three_qubit_protocol_asymptote,
    two_qubit_alpha_asymptote,
    two_qubit_conditional_expectation,
)
from .entanglement import (
    PRINTED_CRITICAL_R,
    alpha_gain,
    alpha_minus,
    alpha_plus,
    alpha_separable,
    concurrence,
    concurrence_oracle,
    critical_r,
    oracle_critical_r,
    oracle_zero_crossing,
    printed_concurrence_asymptotic_2q,
    printed_concurrence_general_2q,
    reduced_state_concurrence,
    singlet_weight,
)
from .generator import EnvironmentParams, build_generator
from .protocol import ENTANGLED_TOL, figure_points, records_to_csv, sweep

DEFAULT_B_VALUES = (0.0, 0.5, -0.5, 0.9, 0.99)
ACCEPTANCE_ALPHAS = (0.0, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 1 / 3)


def default_params():
    return [EnvironmentParams(a=1.0, b=b, c=1.0) for b in DEFAULT_B_VALUES]


@dataclass(frozen=True)
class ClaimResult:
    claim_id: str
    description: str
    residual: float
    tolerance: float
    status: str
    detail: str = ""


@dataclass
class VerificationReport:
    entries: list = field(default_factory=list)

    @property
    def counts(self):
        out = {"pass": 0, "fail": 0, "flag": 0}
        for e in self.entries:
            out[e.status] += 1
        return out

    @property
    def passed(self):
        return all(e.status != "fail" for e in self.entries)

    def to_csv(self):
        lines = ["claim_id,status,residual,tolerance,description,detail"]
        for e in self.entries:
            desc = e.description.replace(",", ";")
            detail = e.detail.replace(",", ";")
            lines.append(f"{e.claim_id},{e.status},{e.residual:.6e},{e.tolerance:.1e},{desc},{detail}")
        return "\n".join(lines) + "\n"

    def table(self):
        width = max(len(e.claim_id) for e in self.entries) if self.entries else 8
        lines = [f"{'claim':<{width}}  status  {'residual':>12}  {'tolerance':>9}  detail"]
        for e in self.entries:
            lines.append(
                f"{e.claim_id:<{width}}  {e.status:<6}  {e.residual:12.3e}  {e.tolerance:9.1e}  {e.detail}"
            )
        c = self.counts
        lines.append(f"-- {c['pass']} pass, {c['fail']} fail, {c['flag']} flag")
        return "\n".join(lines)


# --- individual claims -------------------------------------------------------
# Each returns (residual, default tolerance, detail).  A claim passes when
# residual <= tolerance.


def claim_stationarity(params_list):
    worst = 0.0
    for p in params_list:
        r = p.r_infinity
        for n in (1, 2, 3):
            worst = max(worst, max_abs(build_generator(p, n).apply(stationary_product(r, n))))
    return worst, 1e-11, f"max |L[rho*^n]| over n=1..3 and {len(params_list)} parameter sets"


def claim_one_qubit_fixed_point(params_list):
    worst = 0.0
    for p in params_list:
        so = dynamics.vectorize(build_generator(p, 1))
        state = dynamics.asymptotic_state(so, np.array([[1, 0], [0, 0]], dtype=complex)).state
        bloch = np.array([2 * state[0, 1].real, -2 * state[0, 1].imag, (state[0, 0] - state[1, 1]).real])
        worst = max(worst, float(np.max(np.abs(bloch - [0, 0, p.b / p.a]))))
        worst = max(worst, float(np.max(np.abs(one_qubit_stationary(p).bloch_vector - [0, 0, p.b / p.a]))))
    return worst, 1e-9, "numeric Bloch vector vs (0, 0, b/a)"


def claim_two_qubit_asymptote(params_list):
    worst = 0.0
    for p in params_list:
        so = dynamics.vectorize(build_generator(p, 2))
        stack = np.array([alpha_family(a, 2) for a in ACCEPTANCE_ALPHAS])
        num = dynamics.asymptotic_state(so, stack).state
        for a, s in zip(ACCEPTANCE_ALPHAS, num):
            worst = max(worst, max_abs(s - two_qubit_alpha_asymptote(a, p)))
            worst = max(worst, max_abs(s - two_qubit_conditional_expectation(alpha_family(a, 2), p)))
    return worst, 1e-8, "propagated two-qubit asymptote vs closed form"


def claim_three_qubit_asymptote(params_list):
    worst = 0.0
    for p in params_list:
        so = dynamics.vectorize(build_generator(p, 3))
        stack = np.array([alpha_family(a, 3) for a in ACCEPTANCE_ALPHAS])
        num = dynamics.asymptotic_state(so, stack).state
        for a, s in zip(ACCEPTANCE_ALPHAS, num):
            worst = max(worst, max_abs(s - three_qubit_protocol_asymptote(a, p)))
            _, entries = reduced_protocol_state(a, p)
            worst = max(worst, max_abs(partial_trace(s, (1, 2)) - entries.matrix(p.r_infinity)))
    return worst, 1e-8, "propagated three-qubit asymptote and its reduction vs closed forms"


def _reduced_grid(n=50):
    alphas = np.linspace(0, 1 / 3, n)
    rs = np.linspace(0, 0.99, n)
    return alphas, rs


def claim_reduced_concurrence(radicand="delta"):
    alphas, rs = _reduced_grid()
    worst = 0.0
    for r in rs:
        p = EnvironmentParams.from_r(r)
        for a in alphas:
            rho, _ = reduced_protocol_state(a, p)
            worst = max(worst, abs(concurrence(rho) - reduced_state_concurrence(a, r, radicand)))
    return worst, 1e-10, f"closed-form ({radicand} radicand) vs Wootters oracle on a 50x50 grid"


def claim_threshold_endpoints():
    expected = [
        (alpha_separable(0), 1 / 6),
        (alpha_separable(1), 1 / 3),
        (alpha_gain(0), 1 / 6),
        (alpha_gain(1), 1 / 9),
        (alpha_minus(0), 1 / 2),
        (alpha_minus(1), 3 / 10),
        (alpha_plus(0), 1 / 6),
        (alpha_plus(1), 3 / 10),
    ]
    worst = max(abs(got - want) for got, want in expected)
    return worst, 1e-12, "threshold values at r = 0 and r = 1"


def claim_zero_crossing():
    worst = 0.0
    for r in (0.0, 0.5, 0.9):
        p = EnvironmentParams.from_r(r)
        root = oracle_zero_crossing(lambda a: two_qubit_alpha_asymptote(a, p), 0.0, 1 / 3)
        worst = max(worst, abs(root - alpha_separable(r)))
    return worst, 1e-8, "oracle zero of the two-qubit asymptote concurrence vs alpha_sep(r)"


def claim_headline(r=0.99, step=1e-3):
    p = EnvironmentParams.from_r(r)
    lo = alpha_minus(r)
    witnesses = []
    for a in np.arange(lo + step, 1 / 3, step).tolist() + [1 / 3]:
        c0 = concurrence(alpha_family(a, 2))
        c2 = concurrence(two_qubit_alpha_asymptote(a, p))
        c3 = concurrence(reduced_protocol_state(a, p)[0])
        if c0 <= ENTANGLED_TOL and c2 <= ENTANGLED_TOL and c3 > ENTANGLED_TOL:
            witnesses.append((a, c3))
    if not witnesses:
        return 1.0, 0.0, f"no alpha in (alpha_-({r}), 1/3] activates entanglement"
    a, c3 = max(witnesses, key=lambda w: w[1])
    return 0.0, 0.0, f"{len(witnesses)} witnesses; best alpha={a:.6f} with reduced concurrence {c3:.6f}"


def claim_critical_r():
    root = critical_r()
    crossing = oracle_critical_r()
    refined = oracle_zero_crossing(
        lambda r: reduced_protocol_state(1 / 3, EnvironmentParams.from_r(r))[0], 0.9, 0.999
    )
    root_err = abs(alpha_minus(root) - 1 / 3)
    residual = max(abs(root - crossing), abs(root - refined), root_err)
    return residual, 1e-4, (
        f"bisection r*={root:.10f}; oracle grid crossing {crossing:.4f}, oracle bisection {refined:.10f}"
    )


def claim_commutant_algebra():
    ops = invariant_operators()
    s, t, q = ops.s, ops.t, ops.q
    sab = ops.s_ab
    eye = np.eye(8)

    def pair(a, b):
        return sab[tuple(sorted((a, b)))]

    def eps(a, b, c):
        return (a - b) * (b - c) * (c - a) / 2

    res = 0.0
    for a, b, c in permutations((1, 2, 3)):
        e = eps(a, b, c)
        res = max(res, max_abs(commutator(pair(a, b), pair(a, c)) - 2j * e * s))
        res = max(res, max_abs(anticommutator(pair(a, b), pair(a, c)) - 2 * pair(b, c)))
        if a < b:
            res = max(res, max_abs(commutator(pair(a, b), s) - 4j * e * (pair(b, c) - pair(a, c))))
    for ab in PAIRS:
        res = max(res, max_abs(commutator(t, sab[ab])))
        res = max(res, max_abs(sab[ab] @ sab[ab] - (3 * eye - 2 * sab[ab])))
        res = max(res, max_abs(q @ sab[ab] - q))
    res = max(res, max_abs(commutator(t, s)))
    res = max(res, max_abs(s @ s - 2 * (3 * eye - t)))
    res = max(res, max_abs(q @ s))

    spins2 = [global_spin(i, 2) for i in (1, 2, 3)]
    spins3 = [global_spin(i, 3) for i in (1, 2, 3)]
    basis2 = brute_force_commutant(spins2)
    basis3 = brute_force_commutant(spins3)
    p = EnvironmentParams(1.0, 0.5, 1.0)
    k2 = dynamics.kernel_dimension(dynamics.vectorize(build_generator(p, 2)))
    k3 = dynamics.kernel_dimension(dynamics.vectorize(build_generator(p, 3)))
    for x in [np.eye(8), *sab.values(), s]:
        res = max(res, max_abs(project_onto_basis(x, basis3) - x))
    dims = (len(basis2), len(basis3), k2, k3)
    if dims != (2, 5, 2, 5):
        res = max(res, 1.0)
    return res, 1e-12, f"commutant dims {dims[0]}, {dims[1]}; kernel dims {dims[2]}, {dims[3]}"


def claim_figures():
    problems = []
    discrepancies = 0
    features = {}
    for fig in (1, 2, 3):
        pts = figure_points(fig)
        recs = sweep(pts)
        text = records_to_csv(recs, mode="paper", header={"figure": fig, "mode": "paper"})
        again = records_to_csv(sweep(pts, workers=4), mode="paper", header={"figure": fig, "mode": "paper"})
        if not recs:
            problems.append(f"fig{fig} empty")
        if text != again:
            problems.append(f"fig{fig} not deterministic")
        for rec in recs:
            if max(abs(x - y) for x, y in zip(rec.deltas("paper"), rec.deltas("oracle"))) > 1e-9:
                discrepancies += 1
        if fig == 1:
            corner = max(recs, key=lambda rec: (rec.r, rec.alpha))
            features[1] = corner.c_reduced_3q_paper
        elif fig == 2:
            features[2] = max(rec.delta1_paper for rec in recs)
        else:
            features[3] = max(rec.delta2_paper for rec in recs)
    for fig, value in features.items():
        if not value > 0:
            problems.append(f"fig{fig} feature not positive ({value:.3e})")
    detail = (
        f"corner C={features.get(1, float('nan')):.4f}, max D1={features.get(2, float('nan')):.4f}, "
        f"max D2={features.get(3, float('nan')):.4f}; {discrepancies} points where printed-formula and oracle deltas differ"
    )
    if problems:
        return 1.0, 0.0, "; ".join(problems)
    return 0.0, 0.0, detail


def claim_duality(pairs=20, horizon=200.0, steps=20000, seed=7):
    rng = np.random.default_rng(seed)
    p = EnvironmentParams(1.0, 0.5, 1.0)
    so = dynamics.vectorize(build_generator(p, 2))
    worst = 0.0
    for _ in range(pairs):
        rho = random_density(2, rng)
        x = random_hermitian(4, rng)
        ex = dynamics.time_average(so, x, horizon, steps, extrapolate=True)
        erho = dynamics.asymptotic_state(so, rho).state
        worst = max(worst, abs(np.trace(rho @ ex) - np.trace(erho @ x)))
    return worst, 1e-7, f"{pairs} random pairs; extrapolated time average at T={horizon:g}"


# --- flagged discrepancies ---------------------------------------------------


def flag_two_qubit_magnitude():
    worst, where = 0.0, None
    for r in (0.0, 0.5, 0.9):
        p = EnvironmentParams.from_r(r)
        for a in np.linspace(0, alpha_separable(r), 11):
            d = abs(printed_concurrence_asymptotic_2q(a, r) - concurrence(two_qubit_alpha_asymptote(a, p)))
            if d > worst:
                worst, where = d, (a, r)
    return worst, 1e-10, f"largest gap at alpha={where[0]:.4f}, r={where[1]}"


def flag_general_formula():
    worst, where = 0.0, None
    for r in (0.0, 0.5, 0.9):
        p = EnvironmentParams.from_r(r)
        for a in np.linspace(0, 1 / 3, 11):
            rho = alpha_family(a, 2)
            asym = two_qubit_conditional_expectation(rho, p)
            d = abs(printed_concurrence_general_2q(singlet_weight(rho), r) - concurrence(asym))
            if d > worst:
                worst, where = d, (a, r)
    return worst, 1e-10, f"largest gap at alpha={where[0]:.4f}, r={where[1]}"


def flag_printed_commutators():
    """Printed commutators: ``S^(bc)`` on the right of the first, no epsilon in the second."""
    ops = invariant_operators()
    s, sab = ops.s, ops.s_ab

    def pair(a, b):
        return sab[tuple(sorted((a, b)))]

    res = 0.0
    for a, b, c in permutations((1, 2, 3)):
        e = (a - b) * (b - c) * (c - a) / 2
        res = max(res, max_abs(commutator(pair(a, b), pair(a, c)) - 2j * e * pair(b, c)))
        if a < b:
            res = max(res, max_abs(commutator(pair(a, b), s) - 4j * (pair(b, c) - pair(a, c))))
    return res, 1e-12, "printed commutator identities taken literally"


def flag_literal_radicand():
    res, tol, _ = claim_reduced_concurrence("paper-literal")
    return res, tol, "printed radicand (1-r^2)(9+9r^2+4r^4) vs oracle"


def flag_printed_critical_r():
    root = critical_r()
    literal = critical_r("paper-literal")
    return abs(root - PRINTED_CRITICAL_R), 1e-6, (
        f"printed {PRINTED_CRITICAL_R} vs bisection {root:.10f} (literal radicand {literal:.10f})"
    )


CLAIMS = [
    ("stationarity", "product of one-qubit stationary states is stationary", "acceptance", claim_stationarity, True),
    ("one-qubit-fixed-point", "one-qubit asymptote has Bloch vector (0,0,b/a)", "acceptance", claim_one_qubit_fixed_point, True),
    ("two-qubit-asymptote", "two-qubit conditional expectation of the alpha family", "acceptance", claim_two_qubit_asymptote, True),
    ("three-qubit-asymptote", "three-qubit protocol asymptote and reduced X-form", "acceptance", claim_three_qubit_asymptote, True),
    ("reduced-concurrence", "closed-form reduced concurrence equals oracle", "acceptance", claim_reduced_concurrence, False),
    ("threshold-endpoints", "threshold curves at r=0 and r=1", "acceptance", claim_threshold_endpoints, False),
    ("zero-crossing", "two-qubit asymptote separability threshold", "acceptance", claim_zero_crossing, False),
    ("headline", "ancilla activates entanglement at r=0.99", "acceptance", claim_headline, False),
    ("critical-r", "critical r from bisection vs oracle crossing", "acceptance", claim_critical_r, False),
    ("commutant-algebra", "invariant-operator identities and commutant dimensions", "acceptance", claim_commutant_algebra, False),
    ("figures", "figure datasets: non-empty, deterministic, qualitative features", "acceptance", claim_figures, False),
    ("duality", "time-averaged dual vs asymptotic state", "acceptance", claim_duality, False),
    ("flag:two-qubit-magnitude", "printed two-qubit asymptote concurrence vs oracle", "flag", flag_two_qubit_magnitude, False),
    ("flag:singlet-weight-formula", "printed concurrence in terms of singlet weight vs oracle", "flag", flag_general_formula, False),
    ("flag:printed-commutators", "printed commutant commutators vs direct evaluation", "flag", flag_printed_commutators, False),
    ("flag:literal-radicand", "printed reduced-concurrence radicand vs oracle", "flag", flag_literal_radicand, False),
    ("flag:printed-critical-r", "printed critical r vs bisection root", "flag", flag_printed_critical_r, False),
]


def claim_ids():
    return [c[0] for c in CLAIMS]


def _selected(claim_id, claims):
    if not claims:
        return True
    return any(claim_id == c or claim_id.startswith(c) for c in claims)


def verify_all(params_list=None, tolerances=None, claims=None, tol=None):
    """Run the claim suite and return a :class:`VerificationReport`.

    ``tolerances`` maps claim ids to overrides; ``tol`` overrides every
    numeric tolerance.  An empty ``params_list`` uses the built-in defaults.
    """
    params_list = list(params_list) if params_list else default_params()
    tolerances = tolerances or {}
    report = VerificationReport()
    for claim_id, description, kind, fn, takes_params in CLAIMS:
        if not _selected(claim_id, claims):
            continue
        try:
            residual, default_tol, detail = fn(params_list) if takes_params else fn()
        except Exception as exc:  # a crashing check is a failed check
            report.entries.append(ClaimResult(claim_id, description, float("inf"), 0.0, "fail", repr(exc)))
            continue
        limit = tolerances.get(claim_id, default_tol)
        if tol is not None and default_tol > 0:
            limit = tol
        ok = residual <= limit
        status = "pass" if ok else ("flag" if kind == "flag" else "fail")
        report.entries.append(ClaimResult(claim_id, description, float(residual), limit, status, detail))
    return report


__all__ = ["VerificationReport", "ClaimResult", "verify_all", "claim_ids", "CLAIMS", "default_params", "allclose"]
