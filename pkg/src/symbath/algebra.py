"""Dense qubit algebra: Paulis, tensor embeddings, partial traces, commutants.

Conventions used everywhere in the package:

* computational basis ``|0>, |1>`` with ``sigma_3 |0> = +|0>``;
* qubit 1 is the slowest tensor index (leftmost Kronecker factor);
* qubit labels passed to public functions are 1-based.
"""

from dataclasses import dataclass
from functools import reduce

import numpy as np

from . import kernels
from .errors import ValidationError

DEFAULT_ATOL = 1e-10
COMMUTANT_SV_TOL = 1e-10

_PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

SINGLET = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)


def pauli(index):
    """Identity (``index=0``) or the Pauli matrix sigma_index."""
    if index not in (0, 1, 2, 3):
        raise ValidationError(f"Pauli index must be 0..3, got {index!r}")
    return _PAULI[index].copy()


def kron(*ops):
    """Kronecker product, leftmost factor slowest."""
    return reduce(np.kron, ops)


def qubit_count(dim):
    n = int(round(np.log2(dim)))
    if 2 ** n != dim:
        raise ValidationError(f"dimension {dim} is not a power of two")
    return n


def embed_single_qubit(op, qubit, n):
    """``op`` acting on ``qubit`` (1-based) of an ``n``-qubit register."""
    op = np.asarray(op)
    if op.shape != (2, 2):
        raise ValidationError("single-qubit operator must be 2x2")
    if not 1 <= qubit <= n:
        raise ValidationError(f"qubit {qubit} out of range 1..{n}")
    eye = np.eye(2, dtype=complex)
    return kron(*[op if k == qubit else eye for k in range(1, n + 1)])


def global_spin(i, n):
    """Collective spin ``S_i = sum_a sigma_i^(a)`` on ``n`` qubits."""
    if i not in (1, 2, 3):
        raise ValidationError(f"spin component must be 1..3, got {i!r}")
    return sum(embed_single_qubit(_PAULI[i], a, n) for a in range(1, n + 1))


def commutator(x, y):
    return x @ y - y @ x


def anticommutator(x, y):
    return x @ y + y @ x


def allclose(x, y, atol=DEFAULT_ATOL):
    """Max-abs entrywise comparison with an explicit absolute tolerance."""
    return float(np.max(np.abs(np.asarray(x) - np.asarray(y)))) <= atol


def max_abs(x):
    return float(np.max(np.abs(x)))


def check_density(rho, herm_tol=1e-12, trace_tol=1e-12, eig_tol=1e-10, name="rho"):
    """Validate a density matrix and return it as a complex array.

    Raises :class:`ValidationError` naming the first violated condition.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValidationError(f"{name} must be a square matrix")
    qubit_count(rho.shape[0])
    herm = max_abs(rho - rho.conj().T)
    if herm > herm_tol:
        raise ValidationError(f"{name} is not Hermitian (deviation {herm:.3e})")
    tr = np.trace(rho)
    if abs(tr - 1) > trace_tol:
        raise ValidationError(f"{name} has trace {tr.real:.15g}, expected 1")
    lo = kernels.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if lo < -eig_tol:
        raise ValidationError(f"{name} is not positive semidefinite (min eigenvalue {lo:.3e})")
    return rho


def partial_trace(rho, keep):
    """Reduced density matrix on the 1-based qubits in ``keep`` (sorted)."""
    rho = np.asarray(rho, dtype=complex)
    n = qubit_count(rho.shape[0])
    keep = sorted(set(keep))
    if not keep:
        raise ValidationError("keep-set must be nonempty")
    if keep[0] < 1 or keep[-1] > n:
        raise ValidationError(f"keep-set {keep} out of range 1..{n}")
    t = rho.reshape([2] * (2 * n))
    m = n
    for q in sorted(set(range(1, n + 1)) - set(keep), reverse=True):
        t = np.trace(t, axis1=q - 1, axis2=q - 1 + m)
        m -= 1
    d = 2 ** len(keep)
    return t.reshape(d, d)


def singlet_projector():
    return np.outer(SINGLET, SINGLET.conj())


def random_density(n, rng, rank=None):
    """Random ``n``-qubit density matrix (Ginibre ensemble)."""
    d = 2 ** n
    k = d if rank is None else rank
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(d, rng):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return 0.5 * (g + g.conj().T)


@dataclass(frozen=True)
class InvariantOperatorSet:
    """The three-qubit operators commuting with every collective spin."""

    s_ab: dict
    s: np.ndarray
    t: np.ndarray
    p_ab: dict
    p: np.ndarray
    q: np.ndarray


PAIRS = ((1, 2), (1, 3), (2, 3))


def _levi_civita(i, j, k):
    return (i - j) * (j - k) * (k - i) / 2


def invariant_operators():
    """Swap-type exchange operators, the chiral triple product and projections."""
    s_ab = {}
    for a, b in PAIRS:
        s_ab[(a, b)] = sum(
            embed_single_qubit(_PAULI[i], a, 3) @ embed_single_qubit(_PAULI[i], b, 3) for i in (1, 2, 3)
        )
    s = np.zeros((8, 8), dtype=complex)
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            for k in (1, 2, 3):
                eps = _levi_civita(i, j, k)
                if eps:
                    s += eps * kron(_PAULI[i], _PAULI[j], _PAULI[k])
    t = sum(s_ab.values())
    eye = np.eye(8, dtype=complex)
    p_ab = {ab: (eye - s_ab[ab]) / 4 for ab in PAIRS}
    p = (2 / 3) * sum(p_ab.values())
    return InvariantOperatorSet(s_ab=s_ab, s=s, t=t, p_ab=p_ab, p=p, q=eye - p)


def commutator_superoperator(g):
    """Matrix of ``x -> [x, g]`` on column-stacked ``vec(x)``."""
    d = g.shape[0]
    eye = np.eye(d)
    # vec(x g) = (g^T kron 1) vec x ; vec(g x) = (1 kron g) vec x
    return np.kron(g.T, eye) - np.kron(eye, g)


def vec(x):
    return np.asarray(x).reshape(-1, order="F")


def unvec(v, d=None):
    v = np.asarray(v)
    if d is None:
        d = int(round(np.sqrt(v.shape[-1])))
    return v.reshape(d, d, order="F")


def brute_force_commutant(generators, sv_tol=COMMUTANT_SV_TOL):
    """Hilbert-Schmidt orthonormal basis of ``{x : [x, g] = 0 for all g}``.

    The commutator maps of all generators are stacked and the common null
    space read off the SVD; singular values below ``sv_tol`` count as zero.
    """
    generators = [np.asarray(g, dtype=complex) for g in generators]
    dims = {g.shape for g in generators}
    if len(dims) != 1:
        raise ValidationError("generators must share one dimension")
    d = generators[0].shape[0]
    stacked = np.vstack([commutator_superoperator(g) for g in generators])
    _, sv, vh = np.linalg.svd(stacked)
    rank = int(np.sum(sv > sv_tol))
    return [unvec(row.conj(), d) for row in vh[rank:]]


def project_onto_basis(x, basis):
    """Orthogonal (Hilbert-Schmidt) projection of ``x`` onto span(basis)."""
    out = np.zeros_like(np.asarray(x, dtype=complex))
    for e in basis:
        out += np.vdot(e, x) * e
    return out

