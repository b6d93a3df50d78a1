"""Dense complex linear algebra and quantum primitives shared by every other module."""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .defaults import POLICY
from .exceptions import DimensionMismatchError, EigenDecompositionError, HermiticityError, ParameterRangeError
from .types import Label, Side

logger = logging.getLogger(__name__)

INCONCLUSIVE: Label = '∅'
"""The outcome label of the inconclusive POVM element"""


class HermitianMatrix:
    """An immutable dense complex Hermitian matrix.

    The stored entries are exactly Hermitian: inputs are checked against the
    hermiticity tolerance and then symmetrized.
    """

    __slots__ = ('_entries',)
    # numpy scalars must defer to __rmul__ instead of broadcasting
    __array_ufunc__ = None

    def __init__(self, entries, check: bool = True):
        array = np.array(entries, dtype=complex)
        if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] < 1:
            raise DimensionMismatchError(f'Expected a non-empty square matrix, got shape {array.shape}')
        if check:
            residual = np.max(np.abs(array - array.conj().T))
            if residual > POLICY.hermiticity_tol * max(1.0, float(np.max(np.abs(array)))):
                raise HermiticityError(f'Matrix is not Hermitian (residual {residual:.3e})')
        array = (array + array.conj().T) / 2
        array.setflags(write=False)
        self._entries = array

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._entries
        return self._entries.astype(dtype)

    def __repr__(self) -> str:
        return f'HermitianMatrix(dim={self.dim})'

    def __add__(self, other: 'MatrixLike') -> 'HermitianMatrix':
        return HermitianMatrix(self._entries + as_array(other))

    def __sub__(self, other: 'MatrixLike') -> 'HermitianMatrix':
        return HermitianMatrix(self._entries - as_array(other))

    def __mul__(self, scalar: float) -> 'HermitianMatrix':
        if np.iscomplexobj(scalar) and np.imag(scalar) != 0:
            raise HermiticityError('Hermitian matrices can only be scaled by real numbers')
        return HermitianMatrix(self._entries * float(np.real(scalar)), check=False)

    __rmul__ = __mul__

    def trace(self) -> float:
        return float(np.real(np.trace(self._entries)))

    def allclose(self, other: 'MatrixLike', atol: float = POLICY.trace_tol) -> bool:
        other = as_array(other)
        return other.shape == self._entries.shape and bool(np.allclose(self._entries, other, atol=atol, rtol=0))

    @classmethod
    def identity(cls, dim: int) -> 'HermitianMatrix':
        return cls(np.eye(dim), check=False)


MatrixLike = Union[HermitianMatrix, np.ndarray]


def as_array(m: MatrixLike) -> np.ndarray:
    if isinstance(m, HermitianMatrix):
        return m.entries
    return np.asarray(m, dtype=complex)


def as_hermitian(m: MatrixLike) -> HermitianMatrix:
    if isinstance(m, HermitianMatrix):
        return m
    return HermitianMatrix(m)


@dataclass(frozen=True, eq=False)
class PureState:
    """A normalised pure state on C^dA ⊗ C^dB."""

    amplitudes: np.ndarray
    dA: int
    dB: int = 1

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if self.dA < 1 or self.dB < 1:
            raise ParameterRangeError('Local dimensions must be positive')
        if amplitudes.shape[0] != self.dA * self.dB:
            raise DimensionMismatchError(
                f'{amplitudes.shape[0]} amplitudes do not fit local dimensions ({self.dA}, {self.dB})'
            )
        norm = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm - 1) > POLICY.norm_tol:
            raise ParameterRangeError(f'State is not normalised (squared norm {norm!r})')
        amplitudes.setflags(write=False)
        object.__setattr__(self, 'amplitudes', amplitudes)

    @classmethod
    def from_unnormalized(cls, vector, dA: int, dB: int = 1) -> 'PureState':
        vector = np.asarray(vector, dtype=complex).reshape(-1)
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise ParameterRangeError('Cannot normalise the zero vector')
        return cls(vector / norm, dA, dB)

    @property
    def dim(self) -> int:
        return self.dA * self.dB

    def projector(self) -> HermitianMatrix:
        return HermitianMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), check=False)

    def overlap(self, other: 'PureState') -> complex:
        """Returns ⟨self|other⟩."""
        if other.dim != self.dim:
            raise DimensionMismatchError(f'Cannot overlap states of dimensions {self.dim} and {other.dim}')
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class Povm:
    """A labelled list of measurement operators.

    Construction only checks shapes; positivity and completeness are reported
    by `validate_povm` so that invalid candidates can still be inspected.
    """

    elements: tuple[HermitianMatrix, ...]
    labels: tuple[Label, ...] = field(default=())

    def __post_init__(self):
        elements = tuple(as_hermitian(element) for element in self.elements)
        if not elements:
            raise ParameterRangeError('A POVM needs at least one element')
        dims = {element.dim for element in elements}
        if len(dims) != 1:
            raise DimensionMismatchError(f'POVM elements have different dimensions: {sorted(dims)}')
        labels = tuple(self.labels) if self.labels else tuple(range(len(elements)))
        if len(labels) != len(elements):
            raise ParameterRangeError(f'{len(labels)} labels given for {len(elements)} elements')
        if len(set(labels)) != len(labels):
            raise ParameterRangeError('POVM labels must be unique')
        object.__setattr__(self, 'elements', elements)
        object.__setattr__(self, 'labels', labels)

    @property
    def dim(self) -> int:
        return self.elements[0].dim

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, label: Label) -> HermitianMatrix:
        return self.elements[self.labels.index(label)]


@dataclass(frozen=True)
class PovmReport:
    min_eigenvalues: tuple[float, ...]
    completeness_residual: float
    passed: bool


PAULI_X = HermitianMatrix([[0, 1], [1, 0]])
PAULI_Y = HermitianMatrix([[0, -1j], [1j, 0]])
PAULI_Z = HermitianMatrix([[1, 0], [0, -1]])
IDENTITY_2 = HermitianMatrix.identity(2)


def ket(index: int, dim: int) -> np.ndarray:
    if not 0 <= index < dim:
        raise ParameterRangeError(f'Basis index {index} out of range for dimension {dim}')
    vector = np.zeros(dim, dtype=complex)
    vector[index] = 1
    return vector


def projector(vector) -> HermitianMatrix:
    """The rank-one operator |v⟩⟨v| (no normalisation)."""
    if isinstance(vector, PureState):
        return vector.projector()
    vector = np.asarray(vector, dtype=complex).reshape(-1)
    return HermitianMatrix(np.outer(vector, vector.conj()), check=False)


def bell_states() -> tuple[PureState, PureState, PureState, PureState]:
    """The Bell basis in the order φ⁺, φ⁻, ψ⁺, ψ⁻."""
    s = 1 / np.sqrt(2)
    return (
        PureState([s, 0, 0, s], 2, 2),
        PureState([s, 0, 0, -s], 2, 2),
        PureState([0, s, s, 0], 2, 2),
        PureState([0, s, -s, 0], 2, 2),
    )


def tensor_product(a: MatrixLike, b: MatrixLike) -> HermitianMatrix:
    return HermitianMatrix(np.kron(as_array(a), as_array(b)), check=False)


def partial_trace_array(m: np.ndarray, dA: int, dB: int, side: Side) -> np.ndarray:
    """Partial trace of an arbitrary (not necessarily Hermitian) operator."""
    if side not in ('A', 'B'):
        raise ParameterRangeError(f'Unknown side {side!r}, expected A or B')
    m = np.asarray(m)
    if m.shape != (dA * dB, dA * dB):
        raise DimensionMismatchError(f'Matrix of shape {m.shape} does not act on C^{dA} ⊗ C^{dB}')
    reshaped = m.reshape(dA, dB, dA, dB)
    if side == 'A':
        return np.einsum('ijil->jl', reshaped)
    return np.einsum('ijkj->ik', reshaped)


def partial_trace(m: MatrixLike, dA: int, dB: int, side: Side) -> HermitianMatrix:
    """Traces out subsystem `side`.

    Args:
        m (MatrixLike): Operator on C^dA ⊗ C^dB.
        dA (int): Local dimension of A.
        dB (int): Local dimension of B.
        side (Side): The subsystem traced out; 'A' leaves a dB×dB operator.

    Raises:
        DimensionMismatchError: If m does not act on C^dA ⊗ C^dB.
    """
    return HermitianMatrix(partial_trace_array(as_array(m), dA, dB, side))


def _canonical_basis(vectors: np.ndarray) -> np.ndarray:
    """Gram-Schmidt of the projected standard basis inside span(vectors)."""
    dim, rank = vectors.shape
    projector_ = vectors @ vectors.conj().T
    basis: list[np.ndarray] = []
    for index in range(dim):
        candidate = projector_[:, index].copy()
        for _ in range(2):
            for chosen in basis:
                candidate -= chosen * np.vdot(chosen, candidate)
        norm = np.linalg.norm(candidate)
        if norm > 1e-6:
            basis.append(candidate / norm)
        if len(basis) == rank:
            break
    if len(basis) < rank:
        raise EigenDecompositionError('Could not canonicalise a degenerate eigenspace')
    return np.column_stack(basis)


def eig_hermitian(m: MatrixLike) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic Hermitian eigendecomposition.

    Eigenvalues come sorted in descending order. Inside every group of
    (numerically) degenerate eigenvalues the eigenvectors are replaced by the
    Gram-Schmidt orthonormalisation of the projected standard basis vectors,
    taken in index order, which also fixes the phase of isolated eigenvectors.

    Returns:
        tuple[np.ndarray, np.ndarray]: eigenvalues and a matrix whose columns are eigenvectors
    """
    array = as_array(m)
    try:
        values, vectors = np.linalg.eigh(array)
    except np.linalg.LinAlgError as exc:
        raise EigenDecompositionError(str(exc))
    values = values[::-1].copy()
    vectors = vectors[:, ::-1].copy()

    scale = max(1.0, float(np.max(np.abs(values)))) if values.size else 1.0
    tol = POLICY.degeneracy_tol * scale
    start = 0
    while start < len(values):
        stop = start + 1
        while stop < len(values) and values[stop - 1] - values[stop] <= tol:
            stop += 1
        vectors[:, start:stop] = _canonical_basis(vectors[:, start:stop])
        start = stop
    return values, vectors


def trace_power(m: MatrixLike, k: int) -> float:
    if k not in (1, 2, 3, 4):
        raise ParameterRangeError(f'Trace powers are supported for k in 1..4, got {k}')
    value = complex(np.trace(np.linalg.matrix_power(as_array(m), k)))
    if abs(value.imag) > POLICY.imaginary_tol * max(1.0, abs(value.real)):
        raise HermiticityError(f'Tr[m^{k}] has imaginary part {value.imag:.3e}')
    return value.real


def validate_density(rho: MatrixLike) -> HermitianMatrix:
    """Checks that ρ is Hermitian, positive semidefinite and of unit trace.

    Raises:
        HermiticityError: If ρ is not Hermitian.
        ParameterRangeError: If the trace differs from 1 or an eigenvalue is negative.
    """
    rho = as_hermitian(rho)
    trace = rho.trace()
    if abs(trace - 1) > POLICY.trace_tol:
        raise ParameterRangeError(f'Density matrix has trace {trace!r}')
    smallest = float(np.linalg.eigvalsh(rho.entries)[0])
    if smallest < -POLICY.povm_tol:
        raise ParameterRangeError(f'Density matrix has negative eigenvalue {smallest!r}')
    return rho


def fidelity_with_pure(rho: MatrixLike, phi: PureState) -> float:
    """Returns ⟨φ|ρ|φ⟩ for a density matrix ρ."""
    rho = as_array(rho)
    if rho.shape[0] != phi.dim:
        raise DimensionMismatchError(f'State of dimension {phi.dim} against a {rho.shape[0]}-dimensional matrix')
    rho = validate_density(rho).entries
    return float(np.vdot(phi.amplitudes, rho @ phi.amplitudes).real)


def validate_povm(p: Povm, tol: Optional[float] = None) -> PovmReport:
    tol = POLICY.povm_tol if tol is None else tol
    min_eigenvalues = tuple(float(np.linalg.eigvalsh(element.entries)[0]) for element in p.elements)
    total = sum(element.entries for element in p.elements)
    residual = float(np.max(np.abs(total - np.eye(p.dim))))
    passed = all(value >= -tol for value in min_eigenvalues) and residual <= tol
    return PovmReport(min_eigenvalues=min_eigenvalues, completeness_residual=residual, passed=passed)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """A Haar-random unitary from the QR decomposition of a complex Ginibre matrix."""
    ginibre = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(ginibre)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def complete_basis(vector: np.ndarray) -> np.ndarray:
    """A unitary whose first column is the unit vector `vector`, completed by
    Gram-Schmidt over the standard basis in index order."""
    vector = np.asarray(vector, dtype=complex).reshape(-1)
    dim = vector.shape[0]
    columns: list[np.ndarray] = [vector / np.linalg.norm(vector)]
    for index in range(dim):
        candidate = ket(index, dim)
        for _ in range(2):
            for chosen in columns:
                candidate = candidate - chosen * np.vdot(chosen, candidate)
        norm = np.linalg.norm(candidate)
        if norm > 1e-8:
            columns.append(candidate / norm)
        if len(columns) == dim:
            break
    return np.column_stack(columns)


def density_from(states: Sequence[PureState], priors: Sequence[float]) -> HermitianMatrix:
    total = sum(p * np.outer(s.amplitudes, s.amplitudes.conj()) for p, s in zip(priors, states))
    return HermitianMatrix(total)
