"""Lindblad generators of qubits coupled to a permutation-symmetric bath.

Dissipator ordering
-------------------
All generators here use

    L[rho] = -i[H, rho] + sum_ij K_ij (F_j rho F_i - 1/2 {F_i F_j, rho})

with Hermitian coupling operators ``F``.  Contracting the coefficient
matrix in this order is what makes ``(1 + (b/a) sigma_3)/2`` the stationary
one-qubit state for the matrix ``A = [[a, ib, 0], [-ib, a, 0], [0, 0, c]]``
with the standard Pauli matrices; the opposite ordering yields Bloch
vector ``-b/a``.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .algebra import embed_single_qubit, global_spin, max_abs, pauli, vec
from .errors import DegenerateParametersError, ValidationError

PSD_TOL = 1e-10


@dataclass(frozen=True)
class EnvironmentParams:
    """Bath rates ``a, b, c`` and qubit frequency ``omega``.

    ``|b| > a`` is rejected (the rate matrix would not be positive).  The
    boundary ``|b| == a`` and ``c == 0`` are accepted but marked
    :attr:`degenerate`; asymptotic computations refuse them.
    """

    a: float
    b: float
    c: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        for name in ("a", "b", "c", "omega"):
            value = getattr(self, name)
            if isinstance(value, complex) or np.iscomplexobj(value):
                raise ValidationError(f"{name} must be real, got {value!r}")
            if not np.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.a <= 0:
            raise ValidationError(f"a must be > 0, got {self.a}")
        if self.c < 0:
            raise ValidationError(f"c must be >= 0, got {self.c}")
        if abs(self.b) > self.a:
            raise ValidationError(f"|b| < a violated: |b|={abs(self.b)} > a={self.a}")

    @classmethod
    def from_r(cls, r, c=1.0, omega=1.0):
        """Parameters with ``a = 1`` and ``b = r``."""
        return cls(a=1.0, b=r, c=c, omega=omega)

    @property
    def r_infinity(self):
        return self.b / self.a

    @property
    def degenerate(self):
        return abs(self.b) >= self.a or self.c == 0

    def require_nondegenerate(self):
        if self.degenerate:
            raise DegenerateParametersError(
                f"degenerate: asymptotics not guaranteed (a={self.a}, b={self.b}, c={self.c}); "
                "need |b| < a and c > 0"
            )
        return self

    def rate_matrix(self):
        a, b, c = self.a, self.b, self.c
        return np.array([[a, 1j * b, 0], [-1j * b, a, 0], [0, 0, c]], dtype=complex)


@dataclass(frozen=True)
class LindbladGenerator:
    """Schroedinger-picture generator in the coupling-operator form above.

    ``left_ops`` are the ``F_i`` and ``right_ops`` the ``F_j``; they coincide
    except for the cross terms produced by :func:`pairwise_decomposition`.
    """

    qubit_count: int
    hamiltonian: np.ndarray
    coefficients: np.ndarray
    left_ops: tuple
    right_ops: tuple
    kraus_ops: tuple = ()
    flags: tuple = field(default=())

    @property
    def dim(self):
        return 2 ** self.qubit_count

    def apply(self, rho):
        rho = np.asarray(rho, dtype=complex)
        h = self.hamiltonian
        out = -1j * (h @ rho - rho @ h)
        k = self.coefficients
        for i, fi in enumerate(self.left_ops):
            for j, gj in enumerate(self.right_ops):
                kij = k[i, j]
                if kij == 0:
                    continue
                fg = fi @ gj
                out += kij * (gj @ rho @ fi - 0.5 * (fg @ rho + rho @ fg))
        return out

    __call__ = apply

    def superoperator_matrix(self):
        """Column-stacked matrix ``M`` with ``vec(L[rho]) = M vec(rho)``."""
        d = self.dim
        eye = np.eye(d)
        h = self.hamiltonian
        m = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
        k = self.coefficients
        for i, fi in enumerate(self.left_ops):
            for j, gj in enumerate(self.right_ops):
                kij = k[i, j]
                if kij == 0:
                    continue
                fg = fi @ gj
                # vec(A X B) = (B^T kron A) vec(X)
                m = m + kij * (np.kron(fi.T, gj) - 0.5 * (np.kron(eye, fg) + np.kron(fg.T, eye)))
        return m


def _psd_min_eigenvalue(k):
    return kernels.eigvalsh(0.5 * (k + k.conj().T))[0]


def symmetric_kossakowski(params):
    """9x9 coefficient matrix with every 3x3 block equal to the rate matrix.

    Returned as a ``(9, 9)`` array indexed by ``(qubit, pauli)`` pairs with
    the qubit index slowest.
    """
    a_mat = params.rate_matrix()
    return np.kron(np.ones((3, 3)), a_mat)


def kossakowski_from_projector(params):
    """Same matrix built as ``3 * (projector onto (1,1,1)/sqrt 3) kron A``."""
    u = np.ones(3) / np.sqrt(3)
    return 3 * np.kron(np.outer(u, u), params.rate_matrix())


def _flags(params):
    return ("degenerate: asymptotics not guaranteed",) if params.degenerate else ()


def build_generator(params, n):
    """Generator of ``n`` qubits coupled through the collective spins."""
    if n not in (1, 2, 3):
        raise ValidationError(f"qubit count must be 1..3, got {n}")
    spins = tuple(global_spin(i, n) for i in (1, 2, 3))
    return LindbladGenerator(
        qubit_count=n,
        hamiltonian=0.5 * params.omega * spins[2],
        coefficients=params.rate_matrix(),
        left_ops=spins,
        right_ops=spins,
        kraus_ops=tuple(kraus_operators(params, n)),
        flags=_flags(params),
    )


def build_general_generator(kossakowski, omegas=(1.0, 1.0, 1.0), psd_tol=PSD_TOL):
    """Three-qubit generator with an arbitrary 9x9 coefficient matrix.

    Row/column index ``3*(a-1) + (i-1)`` couples ``sigma_i`` on qubit ``a``.
    """
    k = np.asarray(kossakowski, dtype=complex)
    if k.shape != (9, 9):
        raise ValidationError(f"coefficient matrix must be 9x9, got {k.shape}")
    herm = max_abs(k - k.conj().T)
    if herm > 1e-12:
        raise ValidationError(f"coefficient matrix not Hermitian (deviation {herm:.3e})")
    lo = _psd_min_eigenvalue(k)
    if lo < -psd_tol:
        raise ValidationError(f"coefficient matrix not positive semidefinite: min eigenvalue {lo:.6g}")
    if len(omegas) != 3:
        raise ValidationError("need one frequency per qubit")
    ops = tuple(embed_single_qubit(pauli(i), a, 3) for a in (1, 2, 3) for i in (1, 2, 3))
    h = sum(0.5 * w * embed_single_qubit(pauli(3), a, 3) for a, w in zip((1, 2, 3), omegas))
    return LindbladGenerator(qubit_count=3, hamiltonian=h, coefficients=k, left_ops=ops, right_ops=ops)


def kraus_operators(params, n):
    """Jump operators of the diagonal form, ``[V1, V2, V3]``.

    ``V1 = sqrt(2(a-b)) (S1 - iS2)/2`` lowers, ``V2 = sqrt(2(a+b)) (S1 + iS2)/2``
    raises and ``V3 = sqrt(c) S3``, entering as ``V rho V^dag``.
    """
    s1, s2, s3 = (global_spin(i, n) for i in (1, 2, 3))
    a, b, c = params.a, params.b, params.c
    v1 = np.sqrt(2 * (a - b)) * (s1 - 1j * s2) / 2
    v2 = np.sqrt(2 * (a + b)) * (s1 + 1j * s2) / 2
    v3 = np.sqrt(c) * s3
    return [v1, v2, v3]


def kraus_dissipator(kraus, rho):
    out = np.zeros_like(np.asarray(rho, dtype=complex))
    for v in kraus:
        vdv = v.conj().T @ v
        out += v @ rho @ v.conj().T - 0.5 * (vdv @ rho + rho @ vdv)
    return out


def dissipator(generator, rho):
    """Generator action with the Hamiltonian part removed."""
    h = generator.hamiltonian
    return generator.apply(rho) + 1j * (h @ rho - rho @ h)


def pairwise_decomposition(params, n=3):
    """Terms ``L_ab`` with ``sum_{a,b} L_ab = L``.

    ``L_ab`` couples ``sigma^(a)`` (left) with ``sigma^(b)`` (right); the
    Hamiltonian of qubit ``a`` sits in ``L_aa``.
    """
    if n not in (1, 2, 3):
        raise ValidationError(f"qubit count must be 1..3, got {n}")
    a_mat = params.rate_matrix()
    terms = {}
    for qa in range(1, n + 1):
        for qb in range(1, n + 1):
            left = tuple(embed_single_qubit(pauli(i), qa, n) for i in (1, 2, 3))
            right = tuple(embed_single_qubit(pauli(i), qb, n) for i in (1, 2, 3))
            h = 0.5 * params.omega * left[2] if qa == qb else np.zeros((2 ** n, 2 ** n), dtype=complex)
            terms[(qa, qb)] = LindbladGenerator(
                qubit_count=n, hamiltonian=h, coefficients=a_mat, left_ops=left, right_ops=right
            )
    return terms


def pair_generator(terms, qa, qb):
    """``L_aa + L_bb + L_ab + L_ba`` as a callable."""
    parts = [terms[(qa, qa)], terms[(qb, qb)], terms[(qa, qb)], terms[(qb, qa)]]
    return lambda rho: sum(t.apply(rho) for t in parts)


def apply_sum(terms, rho):
    return sum(t.apply(rho) for t in terms.values())


def check_trace_and_hermiticity(generator, rho):
    """Return ``(|tr L[rho]|, max|L[rho] - L[rho]^dag|)`` for Hermitian ``rho``."""
    out = generator.apply(rho)
    return abs(np.trace(out)), max_abs(out - out.conj().T)


def vectorized_identity(d):
    return vec(np.eye(d, dtype=complex))
