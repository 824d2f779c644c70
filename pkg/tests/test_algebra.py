from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symbath.algebra import (
    PAIRS,
    anticommutator,
    brute_force_commutant,
    check_density,
    commutator,
    embed_single_qubit,
    global_spin,
    invariant_operators,
    kron,
    max_abs,
    partial_trace,
    pauli,
    project_onto_basis,
    qubit_count,
    random_density,
    singlet_projector,
)
from symbath.errors import ValidationError


def test_pauli_algebra():
    s1, s2, s3 = pauli(1), pauli(2), pauli(3)
    assert np.allclose(s1 @ s2, 1j * s3)
    assert np.allclose(s3 @ np.array([1, 0]), [1, 0])
    for s in (s1, s2, s3):
        assert np.allclose(s @ s, np.eye(2))
    with pytest.raises(ValidationError):
        pauli(4)


def test_embedding_order():
    # qubit 1 is the leftmost factor
    assert np.allclose(embed_single_qubit(pauli(3), 1, 2), np.diag([1, 1, -1, -1]))
    assert np.allclose(embed_single_qubit(pauli(3), 2, 2), np.diag([1, -1, 1, -1]))
    with pytest.raises(ValidationError):
        embed_single_qubit(pauli(1), 3, 2)


def test_global_spin_su2():
    for n in (1, 2, 3):
        s1, s2, s3 = (global_spin(i, n) for i in (1, 2, 3))
        assert max_abs(commutator(s1, s2) - 2j * s3) < 1e-12


def test_qubit_count():
    assert qubit_count(8) == 3
    with pytest.raises(ValidationError):
        qubit_count(6)


def test_partial_trace_of_product(rng):
    a, b, c = (random_density(1, rng) for _ in range(3))
    rho = kron(a, b, c)
    assert np.allclose(partial_trace(rho, (1, 2)), np.kron(a, b))
    assert np.allclose(partial_trace(rho, (1, 3)), np.kron(a, c))
    assert np.allclose(partial_trace(rho, (2,)), b)
    with pytest.raises(ValidationError):
        partial_trace(rho, ())
    with pytest.raises(ValidationError):
        partial_trace(rho, (4,))


def test_partial_trace_of_singlet():
    assert np.allclose(partial_trace(singlet_projector(), (1,)), np.eye(2) / 2)


@pytest.mark.parametrize(
    "bad",
    [
        np.diag([0.5, 0.6]),
        np.array([[0.5, 0.1], [0.3, 0.5]]),
        np.diag([1.2, -0.2]),
    ],
    ids=["trace", "hermiticity", "negative"],
)
def test_check_density_rejects(bad):
    with pytest.raises(ValidationError):
        check_density(bad)


def test_invariant_identities():
    ops = invariant_operators()
    s, t, q, sab = ops.s, ops.t, ops.q, ops.s_ab
    eye = np.eye(8)

    def pair(a, b):
        return sab[tuple(sorted((a, b)))]

    for a, b, c in permutations((1, 2, 3)):
        eps = (a - b) * (b - c) * (c - a) / 2
        assert max_abs(commutator(pair(a, b), pair(a, c)) - 2j * eps * s) < 1e-12
        assert max_abs(anticommutator(pair(a, b), pair(a, c)) - 2 * pair(b, c)) < 1e-12
        if a < b:
            assert max_abs(commutator(pair(a, b), s) - 4j * eps * (pair(b, c) - pair(a, c))) < 1e-12
    assert max_abs(s @ s - 2 * (3 * eye - t)) < 1e-12
    assert max_abs(q @ s) < 1e-12
    for ab in PAIRS:
        assert max_abs(commutator(t, sab[ab])) < 1e-12
        assert max_abs(sab[ab] @ sab[ab] - (3 * eye - 2 * sab[ab])) < 1e-12
        assert max_abs(q @ sab[ab] - q) < 1e-12


def test_projections():
    ops = invariant_operators()
    assert np.allclose(ops.p @ ops.p, ops.p)
    assert np.isclose(np.trace(ops.p).real, 4)
    for ab in PAIRS:
        p = ops.p_ab[ab]
        assert np.allclose(p @ p, p)
        assert np.isclose(np.trace(p).real, 2)
    assert np.allclose(ops.p_ab[(1, 2)], np.kron(singlet_projector(), np.eye(2)))
    assert np.allclose(ops.p, 0.5 * (np.eye(8) - ops.t / 3))


@pytest.mark.parametrize("n,dim", [(1, 1), (2, 2), (3, 5)])
def test_commutant_dimension(n, dim):
    basis = brute_force_commutant([global_spin(i, n) for i in (1, 2, 3)])
    assert len(basis) == dim


def test_commutant_spanned_by_invariants():
    ops = invariant_operators()
    basis = brute_force_commutant([global_spin(i, 3) for i in (1, 2, 3)])
    for x in [np.eye(8), ops.s, *ops.s_ab.values()]:
        assert max_abs(project_onto_basis(x, basis) - x) < 1e-12
    # and nothing else: a single-qubit operator is not invariant
    x = embed_single_qubit(pauli(3), 1, 3)
    assert max_abs(project_onto_basis(x, basis) - x) > 0.1


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=3), st.integers(min_value=0, max_value=2**32 - 1))
def test_random_density_valid_and_reductions_valid(n, seed):
    rho = random_density(n, np.random.default_rng(seed))
    check_density(rho)
    for q in range(1, n + 1):
        check_density(partial_trace(rho, (q,)))
