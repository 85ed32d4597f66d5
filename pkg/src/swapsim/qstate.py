"""Time-bin qubit states and linear-algebra primitives.

Qubits live in the two-dimensional early/late temporal basis.  Two-qubit
kets and density matrices use the basis ordering (ee, el, le, ll) where
``e`` is the early bin and ``l`` the late bin.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

HERMITIAN_ATOL = 1e-9
TRACE_ATOL = 1e-9
NORM_ATOL = 1e-9
EIG_FLOOR = -1e-8

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


class BellKind(enum.Enum):
    """The four maximally entangled two-qubit states."""

    PHI_PLUS = "phi_plus"
    PHI_MINUS = "phi_minus"
    PSI_PLUS = "psi_plus"
    PSI_MINUS = "psi_minus"


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=complex)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Ket:
    """Normalized pure state vector.

    Parameters
    ----------
    vector:
        Complex amplitudes; must have unit norm within 1e-9.
    """

    vector: np.ndarray

    def __post_init__(self) -> None:
        v = _readonly(np.asarray(self.vector, dtype=complex).ravel())
        n = np.linalg.norm(v)
        if abs(n - 1.0) > NORM_ATOL:
            raise ValueError(f"ket norm {n!r} differs from 1 by more than {NORM_ATOL}")
        object.__setattr__(self, "vector", v)

    @property
    def dim(self) -> int:
        return self.vector.shape[0]

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.vector, self.vector.conj()))

    def overlap(self, other: "Ket") -> complex:
        return complex(np.vdot(self.vector, other.vector))


@dataclass(frozen=True)
class DensityMatrix:
    """Positive semidefinite, unit-trace operator.

    Construction rejects matrices that are non-Hermitian (beyond 1e-9),
    have trace off unity by more than 1e-9, or have an eigenvalue below
    -1e-8.
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_ATOL:
            raise ValueError("density matrix is not Hermitian within 1e-9")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_ATOL:
            raise ValueError(f"density matrix trace {tr!r} differs from 1 by more than {TRACE_ATOL}")
        lo = float(np.min(np.linalg.eigvalsh((m + m.conj().T) / 2.0)))
        if lo < EIG_FLOOR:
            raise ValueError(f"density matrix has eigenvalue {lo!r} below {EIG_FLOOR}")
        object.__setattr__(self, "matrix", _readonly(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


class ProjectorBasis(enum.Enum):
    Z = "z"
    PHASE = "phase"


@dataclass(frozen=True)
class Projector:
    """Rank-one projector on a single time-bin qubit.

    Z basis picks a temporal bin ("early" or "late").  The phase basis
    projects onto (|e> + exp(i*phase)|l>)/sqrt(2), the state selected by
    a middle-bin detection behind an unbalanced interferometer with the
    given analyzer phase.
    """

    basis: ProjectorBasis
    outcome: str | None = None
    phase: float | None = None
    matrix: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.basis is ProjectorBasis.Z:
            if self.outcome not in ("early", "late"):
                raise ValueError(f"Z projector outcome must be 'early' or 'late', got {self.outcome!r}")
            if self.phase is not None:
                raise ValueError("Z projector does not take a phase")
            v = np.array([1.0, 0.0]) if self.outcome == "early" else np.array([0.0, 1.0])
        else:
            if self.phase is None:
                raise ValueError("phase projector requires a phase")
            if not 0.0 <= self.phase < 2.0 * np.pi:
                raise ValueError(f"analyzer phase {self.phase!r} outside [0, 2*pi)")
            if self.outcome is not None:
                raise ValueError("phase projector outcome is implied by the phase")
            v = np.array([1.0, np.exp(1j * self.phase)]) / np.sqrt(2.0)
        object.__setattr__(self, "matrix", _readonly(np.outer(v, v.conj())))

    def ket(self) -> Ket:
        if self.basis is ProjectorBasis.Z:
            return Ket(np.array([1.0, 0.0]) if self.outcome == "early" else np.array([0.0, 1.0]))
        return Ket(np.array([1.0, np.exp(1j * self.phase)]) / np.sqrt(2.0))


def z_projector(outcome: str) -> Projector:
    return Projector(basis=ProjectorBasis.Z, outcome=outcome)


def phase_projector(phase: float) -> Projector:
    return Projector(basis=ProjectorBasis.PHASE, phase=phase)


_BELL_VECTORS = {
    BellKind.PHI_PLUS: np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0),
    BellKind.PHI_MINUS: np.array([1.0, 0.0, 0.0, -1.0]) / np.sqrt(2.0),
    BellKind.PSI_PLUS: np.array([0.0, 1.0, 1.0, 0.0]) / np.sqrt(2.0),
    BellKind.PSI_MINUS: np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2.0),
}


def bell_state(kind: BellKind) -> Ket:
    """Return one of the four Bell states in the (ee, el, le, ll) basis."""
    return Ket(_BELL_VECTORS[kind])


def tensor(a: Ket | DensityMatrix, b: Ket | DensityMatrix) -> Ket | DensityMatrix:
    """Kronecker product of two kets or two density matrices."""
    if isinstance(a, Ket) and isinstance(b, Ket):
        return Ket(np.kron(a.vector, b.vector))
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(np.kron(a.matrix, b.matrix))
    raise TypeError("tensor requires two Kets or two DensityMatrices")


def partial_trace(rho: DensityMatrix | np.ndarray, dims: tuple[int, ...], keep: tuple[int, ...]) -> DensityMatrix:
    """Trace out all subsystems not listed in ``keep``.

    Parameters
    ----------
    rho:
        Density matrix over the tensor product of subsystems with the
        given ``dims``.
    dims:
        Dimension of each subsystem, in tensor order.
    keep:
        Indices (into ``dims``) of the subsystems to retain, in order.
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    total = int(np.prod(dims))
    if m.shape != (total, total):
        raise ValueError(f"matrix shape {m.shape} incompatible with subsystem dims {dims}")
    keep = tuple(keep)
    if any(k < 0 or k >= len(dims) for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {len(dims)} subsystems")
    if len(set(keep)) != len(keep):
        raise ValueError("keep indices must be distinct")
    n = len(dims)
    t = m.reshape(dims + dims)
    # trace out the complement, highest subsystem first so lower indices stay valid
    drop = [i for i in range(n) if i not in keep]
    for i in sorted(drop, reverse=True):
        t = np.trace(t, axis1=i, axis2=i + t.ndim // 2)
    # axes now follow sorted(keep); permute to the requested order
    k = len(keep)
    perm = list(np.argsort(np.argsort(keep)))
    t = np.transpose(t, perm + [k + p for p in perm])
    d = int(np.prod([dims[i] for i in keep]))
    return DensityMatrix(t.reshape(d, d))


def expectation(rho: DensityMatrix, op: np.ndarray | Projector) -> float:
    """tr(rho * op); the imaginary part must vanish within 1e-9."""
    p = op.matrix if isinstance(op, Projector) else np.asarray(op, dtype=complex)
    val = complex(np.trace(rho.matrix @ p))
    if abs(val.imag) > 1e-9:
        raise ValueError(f"expectation value has imaginary part {val.imag!r}")
    return val.real


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in [-1e-8, 0) are clamped to zero; anything lower raises.
    """
    a = np.asarray(m, dtype=complex)
    if np.max(np.abs(a - a.conj().T)) > HERMITIAN_ATOL:
        raise ValueError("psd_sqrt requires a Hermitian matrix")
    w, v = np.linalg.eigh(a)
    if w.min() < EIG_FLOOR:
        raise ValueError(f"psd_sqrt: eigenvalue {w.min()!r} below {EIG_FLOOR}")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T
