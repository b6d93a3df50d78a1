"""Constructors for the bipartite state families and their reduced states."""

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .defaults import POLICY
from .exceptions import DimensionMismatchError, ParameterRangeError
from .quantum_core import (
    HermitianMatrix,
    PureState,
    as_array,
    bell_states,
    complete_basis,
    density_from,
    partial_trace,
    projector,
)
from .types import Side


def _check_delta(delta: float):
    if not 0 <= delta <= 1:
        raise ParameterRangeError(f'Overlap delta must lie in [0, 1], got {delta!r}')


def _check_n(N: int, upper: int = 0):
    if N < 2 or (upper and N > upper):
        bound = f'2..{upper}' if upper else '>= 2'
        raise ParameterRangeError(f'Number of states N must be {bound}, got {N!r}')


@dataclass(frozen=True, eq=False)
class BipartiteEnsemble:
    """N pure bipartite states with prior probabilities."""

    states: tuple[PureState, ...]
    priors: np.ndarray
    dA: int
    dB: int

    def __post_init__(self):
        states = tuple(self.states)
        priors = np.array(self.priors, dtype=float).reshape(-1)
        if not states:
            raise ParameterRangeError('An ensemble needs at least one state')
        if len(priors) != len(states):
            raise ParameterRangeError(f'{len(priors)} priors given for {len(states)} states')
        if np.any(priors < 0) or abs(priors.sum() - 1) > POLICY.prior_tol:
            raise ParameterRangeError(f'Priors must be nonnegative and sum to 1, got {priors.tolist()}')
        for state in states:
            if (state.dA, state.dB) != (self.dA, self.dB):
                raise DimensionMismatchError(
                    f'State with local dimensions ({state.dA}, {state.dB}) in a ({self.dA}, {self.dB}) ensemble'
                )
        priors.setflags(write=False)
        object.__setattr__(self, 'states', states)
        object.__setattr__(self, 'priors', priors)

    @classmethod
    def equiprobable(cls, states: Sequence[PureState]) -> 'BipartiteEnsemble':
        states = tuple(states)
        return cls(states, np.full(len(states), 1 / len(states)), states[0].dA, states[0].dB)

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def dim(self) -> int:
        return self.dA * self.dB

    def overlap_matrix(self) -> np.ndarray:
        """The Gram matrix G[z, z'] = ⟨ψ_z|ψ_z'⟩."""
        vectors = np.column_stack([state.amplitudes for state in self.states])
        return vectors.conj().T @ vectors

    def density(self) -> HermitianMatrix:
        return ensemble_density(self)


@dataclass(frozen=True, eq=False)
class NoisyEnsemble:
    """White noise of weight 1 − ν mixed into every state of `base`."""

    base: BipartiteEnsemble
    visibility: float

    def __post_init__(self):
        if not 0 <= self.visibility <= 1:
            raise ParameterRangeError(f'Visibility must lie in [0, 1], got {self.visibility!r}')

    def preparations(self) -> list[HermitianMatrix]:
        dim = self.base.dim
        noise = np.eye(dim) / dim
        return [
            HermitianMatrix(self.visibility * state.projector().entries + (1 - self.visibility) * noise)
            for state in self.base.states
        ]


def maximally_entangled_state(d: int) -> PureState:
    return gme_basis(d, 0)


def gme_basis(N: int, n: int) -> PureState:
    """|ξ_n⟩ = N^{-1/2} Σ_j e^{i2πjn/N} |j⟩|j⟩, stored at product index j·N + j."""
    if N < 1:
        raise ParameterRangeError(f'Local dimension must be positive, got {N!r}')
    if not 0 <= n < N:
        raise ParameterRangeError(f'Basis index {n} out of range for N={N}')
    amplitudes = np.zeros(N * N, dtype=complex)
    for j in range(N):
        amplitudes[j * N + j] = np.exp(2j * np.pi * j * n / N) / np.sqrt(N)
    return PureState(amplitudes, N, N)


def _axisymmetric_coefficients(N: int, delta: float, z: int) -> np.ndarray:
    coefficients = np.empty(N, dtype=complex)
    coefficients[0] = np.sqrt((1 + (N - 1) * delta) / N)
    for j in range(1, N):
        coefficients[j] = np.sqrt((1 - delta) / N) * np.exp(2j * np.pi * j * z / N)
    return coefficients


def _normalized(vector: np.ndarray) -> np.ndarray:
    # removes rounding drift of order 1e-16 so that PureState accepts the vector
    return vector / np.linalg.norm(vector)


def two_state_family(delta: float) -> BipartiteEnsemble:
    """ψ_z = √((1+δ)/2) φ⁺ + (−1)^z √((1−δ)/2) φ⁻ with equal priors."""
    _check_delta(delta)
    phi_plus, phi_minus = bell_states()[:2]
    states = [
        PureState(
            _normalized(
                np.sqrt((1 + delta) / 2) * phi_plus.amplitudes
                + (-1) ** z * np.sqrt((1 - delta) / 2) * phi_minus.amplitudes
            ),
            2,
            2,
        )
        for z in range(2)
    ]
    return BipartiteEnsemble.equiprobable(states)


def axisymmetric_family(N: int, delta: float) -> BipartiteEnsemble:
    """N equiprobable states with pairwise overlap δ, all equally close to |ξ_0⟩.

    The states live on C^N ⊗ C^N and are diagonal combinations of the
    generalized maximally entangled basis.
    """
    _check_n(N)
    _check_delta(delta)
    basis = np.column_stack([gme_basis(N, n).amplitudes for n in range(N)])
    states = [PureState(_normalized(basis @ _axisymmetric_coefficients(N, delta, z)), N, N) for z in range(N)]
    return BipartiteEnsemble.equiprobable(states)


def qubit_embedded_family(N: int, delta: float) -> BipartiteEnsemble:
    """The axisymmetric coefficients placed on the two-qubit Bell basis.

    For N ≤ 4 this gives N equiprobable two-qubit states with pairwise overlap
    δ whose ensemble is Bell diagonal. At N=2 it coincides with
    `two_state_family`.
    """
    _check_n(N, upper=4)
    _check_delta(delta)
    basis = np.column_stack([state.amplitudes for state in bell_states()[:N]])
    states = [PureState(_normalized(basis @ _axisymmetric_coefficients(N, delta, z)), 2, 2) for z in range(N)]
    return BipartiteEnsemble.equiprobable(states)


def reduced_state(e: BipartiteEnsemble, z: int, side: Side) -> HermitianMatrix:
    """The local state of party `side` for preparation z.

    `side` names the party whose state is returned, so side 'A' traces out B.
    """
    if not 0 <= z < e.size:
        raise ParameterRangeError(f'State index {z} out of range for an ensemble of {e.size} states')
    if side not in ('A', 'B'):
        raise ParameterRangeError(f'Unknown side {side!r}, expected A or B')
    traced = 'B' if side == 'A' else 'A'
    return partial_trace(e.states[z].projector(), e.dA, e.dB, traced)


def ensemble_density(e: BipartiteEnsemble) -> HermitianMatrix:
    return density_from(e.states, e.priors)


def superposition_state(e: BipartiteEnsemble) -> PureState:
    """The normalised Σ_z |ψ_z⟩, the top eigenvector of equiprobable equidistant ensembles."""
    return PureState.from_unnormalized(sum(state.amplitudes for state in e.states), e.dA, e.dB)


def rotate_to_vacuum(e: BipartiteEnsemble, vac: Union[PureState, np.ndarray]) -> BipartiteEnsemble:
    """Applies a unitary taking the maximally entangled |ξ_0⟩ of e to |vac⟩.

    Both vectors are completed to orthonormal bases by Gram-Schmidt over the
    standard basis, so the rotation is deterministic.

    Raises:
        DimensionMismatchError: If vac does not live on the ensemble's space or dA != dB.
        ParameterRangeError: If vac is not normalised.
    """
    if e.dA != e.dB:
        raise DimensionMismatchError('rotate_to_vacuum needs equal local dimensions')
    if not isinstance(vac, PureState):
        vector = np.asarray(vac, dtype=complex).reshape(-1)
        if vector.shape[0] != e.dim:
            raise DimensionMismatchError(f'Vacuum of dimension {vector.shape[0]} for a {e.dim}-dimensional ensemble')
        vac = PureState(vector, e.dA, e.dB)
    if vac.dim != e.dim:
        raise DimensionMismatchError(f'Vacuum of dimension {vac.dim} for a {e.dim}-dimensional ensemble')

    source = complete_basis(maximally_entangled_state(e.dA).amplitudes)
    target = complete_basis(vac.amplitudes)
    unitary = target @ source.conj().T
    states = [PureState(_normalized(unitary @ state.amplitudes), e.dA, e.dB) for state in e.states]
    return BipartiteEnsemble(states, e.priors, e.dA, e.dB)


def energy_observable(vac: PureState) -> HermitianMatrix:
    """H = 1 − |vac⟩⟨vac|."""
    return HermitianMatrix(np.eye(vac.dim) - projector(vac).entries, check=False)


def global_energy(e: BipartiteEnsemble, vac: PureState) -> float:
    """Tr[ρH] of the ensemble state against the vacuum energy observable."""
    return float(np.real(np.trace(as_array(ensemble_density(e)) @ energy_observable(vac).entries)))


def noisy_family(delta: float, nu: float) -> list[HermitianMatrix]:
    """ν|ψ_z⟩⟨ψ_z| + (1−ν)I/4 on the two-state family."""
    _check_delta(delta)
    return NoisyEnsemble(two_state_family(delta), nu).preparations()
