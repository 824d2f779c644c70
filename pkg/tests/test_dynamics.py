import numpy as np
import pytest

from symbath import dynamics
from symbath.algebra import max_abs, random_density, random_hermitian, singlet_projector
from symbath.errors import ConvergenceError, ValidationError
from symbath.generator import EnvironmentParams, build_generator


@pytest.fixture
def so2(generic):
    return dynamics.vectorize(build_generator(generic, 2))


def test_negative_time_rejected(so2):
    with pytest.raises(ValidationError):
        dynamics.propagator(so2, -1.0)


def test_propagator_semigroup(so2):
    p1 = dynamics.propagator(so2, 0.7)
    p2 = dynamics.propagator(so2, 1.4)
    assert max_abs(p1 @ p1 - p2) < 1e-12
    assert max_abs(dynamics.propagator(so2, 0.0) - np.eye(16)) == 0


def test_evolution_keeps_state_valid(so2, rng):
    rho = random_density(2, rng)
    for t in (0.01, 0.5, 5.0):
        out = dynamics.evolve(so2, rho, t)
        assert abs(np.trace(out) - 1) < 1e-12
        assert np.linalg.eigvalsh(0.5 * (out + out.conj().T)).min() > -1e-12


def test_asymptote_is_stationary(so2, rng):
    res = dynamics.asymptotic_state(so2, random_density(2, rng))
    assert res.residual < 1e-10
    assert max_abs(so2.apply(res.state)) < 1e-10
    assert np.allclose(res.state, res.state.conj().T)


def test_asymptote_of_stack(so2, rng):
    stack = np.array([random_density(2, rng) for _ in range(3)])
    out = dynamics.asymptotic_state(so2, stack).state
    for rho, s in zip(stack, out):
        assert max_abs(s - dynamics.asymptotic_state(so2, rho).state) < 1e-10


def test_singlet_is_invariant(so2):
    res = dynamics.asymptotic_state(so2, singlet_projector())
    assert max_abs(res.state - singlet_projector()) < 1e-10


def test_nonconvergence_raises(so2, rng):
    with pytest.raises(ConvergenceError) as info:
        dynamics.asymptotic_state(so2, random_density(2, rng), tol=1e-30, max_doublings=2)
    assert info.value.residual > 0


def test_shape_mismatch(so2):
    with pytest.raises(ValidationError):
        dynamics.asymptotic_state(so2, np.eye(2) / 2)


def test_heisenberg_dual(so2, rng):
    rho, x = random_density(2, rng), random_hermitian(4, rng)
    lhs = np.trace(x @ so2.apply(rho))
    rhs = np.trace(so2.heisenberg().apply(x) @ rho)
    assert abs(lhs - rhs) < 1e-12


def test_heisenberg_limit_is_unital(so2):
    assert max_abs(dynamics.heisenberg_limit(so2, np.eye(4)) - np.eye(4)) < 1e-10


def test_time_average_extrapolation_removes_bias(so2, rng):
    x = random_hermitian(4, rng)
    exact = dynamics.heisenberg_limit(so2, x)
    plain = dynamics.time_average(so2, x, 200.0, 20000)
    fixed = dynamics.time_average(so2, x, 200.0, 20000, extrapolate=True)
    assert max_abs(plain - exact) > 1e-5
    assert max_abs(fixed - exact) < 1e-9


def test_time_average_validation(so2):
    with pytest.raises(ValidationError):
        dynamics.time_average(so2, np.eye(4), 0.0, 10)
    with pytest.raises(ValidationError):
        dynamics.time_average(so2, np.eye(4), 1.0, 1)


@pytest.mark.parametrize("n,dim", [(1, 1), (2, 2), (3, 5)])
def test_kernel_dimension(generic, n, dim):
    so = dynamics.vectorize(build_generator(generic, n))
    assert dynamics.kernel_dimension(so) == dim
    assert dynamics.spectral_abscissa(so) < 1e-10


def test_superoperator_from_matrix(so2):
    again = dynamics.superoperator_from_matrix(so2.matrix)
    assert again.qubit_count == 2 and again.dim == 4


def test_degenerate_boundary_still_propagates():
    so = dynamics.vectorize(build_generator(EnvironmentParams(1.0, 1.0), 1))
    out = dynamics.evolve(so, np.eye(2) / 2, 3.0)
    assert abs(np.trace(out) - 1) < 1e-12
