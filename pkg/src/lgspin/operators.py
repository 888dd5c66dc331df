# Collective angular-momentum operators, projectors and initial states,
# in the (N+1)-dimensional symmetric (Dicke) basis and the full 2^N basis.
#
# Dicke basis ordering is ascending m: index 0 <-> m = -j, index N <-> m = +j.
# Full-space qubit ordering: bit k of the computational index is qubit k,
# bit value 1 = excited. Conventions: Jx = sum_k sigma_x^(k)/2,
# Jz = sum_k sigma_z^(k)/2, Jminus = sum_k sigma_-^(k), so [Jx, Jy] = iJz and
# the Jz eigenvalues are m in {-j, ..., j}.

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np
import scipy.sparse as sp

FULL_SPACE_CAP = 12

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-9
POSITIVITY_TOL = 1e-8


@dataclass(frozen=True)
class DickeSpace:
    """The symmetric subspace of N qubits: a single spin j = N/2."""

    n_qubits: int

    basis = "dicke"

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"need at least one qubit, got N={self.n_qubits}")

    @property
    def j(self):
        return self.n_qubits / 2

    @property
    def dim(self):
        return self.n_qubits + 1

    @property
    def m_values(self):
        return np.arange(self.dim) - self.j


@dataclass(frozen=True)
class FullSpace:
    """The full 2^N computational space of N qubits."""

    n_qubits: int
    cap: int = FULL_SPACE_CAP

    basis = "full"

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"need at least one qubit, got N={self.n_qubits}")
        if self.n_qubits > self.cap:
            est = (2 ** self.n_qubits) ** 2 * 16 / 2 ** 20
            raise ValueError(
                f"N={self.n_qubits} exceeds the full-space cap {self.cap} "
                f"(a dense density matrix alone needs {est:.0f} MiB)"
            )

    @property
    def j(self):
        return self.n_qubits / 2

    @property
    def dim(self):
        return 2 ** self.n_qubits

    @property
    def m_values(self):
        # distinct Jz eigenvalues, ascending (same ladder as the Dicke space)
        return np.arange(self.n_qubits + 1) - self.j

    @property
    def weights(self):
        """Hamming weight of each computational index."""
        idx = np.arange(self.dim)
        return np.array([bin(i).count("1") for i in idx])


def collective_operators(space):
    """Jx, Jy, Jz, Jminus for the Dicke space, as dense complex matrices."""
    j = space.j
    m = space.m_values
    # <m-1| J- |m> = sqrt(j(j+1) - m(m-1)); superdiagonal in ascending-m order
    lower = np.sqrt(j * (j + 1) - m[1:] * (m[1:] - 1))
    jm = np.diag(lower, k=1).astype(complex)
    jp = jm.conj().T
    jx = (jp + jm) / 2
    jy = (jp - jm) / 2j
    jz = np.diag(m).astype(complex)
    return {"jx": jx, "jy": jy, "jz": jz, "jminus": jm}


# single-qubit matrices in the (|ground>, |excited>) ordering
_SIGMA_X = sp.csr_array(np.array([[0, 1], [1, 0]], dtype=complex))
_SIGMA_Z = sp.csr_array(np.array([[-1, 0], [0, 1]], dtype=complex))
_SIGMA_MINUS = sp.csr_array(np.array([[0, 1], [0, 0]], dtype=complex))


def _embed(op, k, n):
    """op acting on qubit k (bit k of the index), identity elsewhere."""
    out = sp.identity(1, format="csr", dtype=complex)
    for bit in range(n - 1, -1, -1):
        factor = op if bit == k else sp.identity(2, format="csr", dtype=complex)
        out = sp.kron(out, factor, format="csr")
    return sp.csr_array(out)


def full_space_operators(space):
    """Collective and per-qubit operators on the 2^N space (sparse)."""
    n = space.n_qubits
    sigma_x = [_embed(_SIGMA_X, k, n) for k in range(n)]
    sigma_z = [_embed(_SIGMA_Z, k, n) for k in range(n)]
    sigma_minus = [_embed(_SIGMA_MINUS, k, n) for k in range(n)]
    jx = sum(sigma_x) / 2
    jz = sum(sigma_z) / 2
    jminus = sum(sigma_minus)
    return {
        "jx": sp.csr_array(jx),
        "jz": sp.csr_array(jz),
        "jminus": sp.csr_array(jminus),
        "sigma_z": sigma_z,
        "sigma_minus": sigma_minus,
    }


def initial_state(space):
    """Density matrix of the fully polarized state (all qubits excited)."""
    rho = np.zeros((space.dim, space.dim), dtype=complex)
    rho[-1, -1] = 1.0  # m = +j is the last Dicke index; |11...1> is index 2^N - 1
    return rho


def weight_index_groups(space):
    """Computational indices grouped by Hamming weight n = m + j."""
    groups = [[] for _ in range(space.n_qubits + 1)]
    for idx, w in enumerate(space.weights):
        groups[w].append(idx)
    return [np.array(g) for g in groups]


def jz_eigenprojectors(space):
    """Map m -> projector onto the Jz eigenspace with eigenvalue m."""
    if space.basis == "dicke":
        out = {}
        for i, m in enumerate(space.m_values):
            p = np.zeros((space.dim, space.dim), dtype=complex)
            p[i, i] = 1.0
            out[m] = p
        return out
    groups = weight_index_groups(space)
    out = {}
    for m, idx in zip(space.m_values, groups):
        diag = np.zeros(space.dim)
        diag[idx] = 1.0
        out[m] = sp.csr_array(sp.diags(diag, dtype=complex))
    return out


@lru_cache(maxsize=32)
def _symmetric_isometry_cached(n_qubits):
    space = FullSpace(n_qubits)
    v = np.zeros((space.dim, n_qubits + 1))
    for w, idx in enumerate(weight_index_groups(space)):
        v[idx, w] = 1.0 / np.sqrt(comb(n_qubits, w))
    return v


def symmetric_isometry(n_qubits):
    """Isometry V: Dicke basis -> full space, V[idx, i_m] over weight classes.

    V^dag A_full V recovers the Dicke-basis matrix of a collective operator A.
    """
    return _symmetric_isometry_cached(n_qubits).copy()


def is_hermitian(a, tol=1e-12):
    a = np.asarray(a)
    return np.max(np.abs(a - a.conj().T)) < tol


def check_density_matrix(rho, trace_tol=TRACE_TOL, herm_tol=HERMITIAN_TOL,
                         pos_tol=POSITIVITY_TOL):
    """Raise if rho is not a physical state within the numerical tolerances."""
    rho = np.asarray(rho)
    tr = np.trace(rho)
    if abs(tr - 1) > trace_tol:
        raise ValueError(f"trace {tr} deviates from 1 beyond {trace_tol}")
    if not is_hermitian(rho, herm_tol):
        raise ValueError("density matrix is not Hermitian")
    w = np.linalg.eigvalsh(rho)
    if w.min() < -pos_tol:
        raise ValueError(f"negative eigenvalue {w.min()} below -{pos_tol}")
