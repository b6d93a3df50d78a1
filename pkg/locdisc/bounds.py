"""Closed-form bounds relating local distinguishability to global properties.

All functions are total on their stated domains; inputs outside them raise
`ParameterRangeError` instead of being clamped.
"""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import ParameterRangeError
from .quantum_core import IDENTITY_2, PAULI_X, PAULI_Z, HermitianMatrix, Povm

SQRT2 = math.sqrt(2)
_TOL = 1e-12


def _check_delta(delta: float):
    if not 0 <= delta <= 1:
        raise ParameterRangeError(f'Overlap delta must lie in [0, 1], got {delta!r}')


def _check_n(N: int):
    if int(N) != N or N < 2:
        raise ParameterRangeError(f'Number of states N must be an integer >= 2, got {N!r}')


def _check_probability(name: str, value: float, lower: float = 0.0, upper: float = 1.0):
    if not lower - _TOL <= value <= upper + _TOL:
        raise ParameterRangeError(f'{name} must lie in [{lower}, {upper}], got {value!r}')


def _sqrt(value: float) -> float:
    # arguments are nonnegative analytically; rounding can leave -1e-17
    return math.sqrt(max(value, 0.0))


def chsh_pwin_from_beta(beta: float) -> float:
    return (2 + beta / 2) / 4


@dataclass(frozen=True)
class ChshBoundResult:
    p_win_max: float
    beta: float

    def __post_init__(self):
        if not 0 <= self.beta <= 2 * SQRT2 + _TOL:
            raise ParameterRangeError(f'CHSH value {self.beta!r} outside [0, 2√2]')
        if abs(self.p_win_max - chsh_pwin_from_beta(self.beta)) > 1e-14:
            raise ValueError(f'Inconsistent CHSH result: p_win={self.p_win_max!r}, beta={self.beta!r}')

    @classmethod
    def from_beta(cls, beta: float) -> 'ChshBoundResult':
        return cls(p_win_max=chsh_pwin_from_beta(beta), beta=beta)


def helstrom(delta: float) -> float:
    _check_delta(delta)
    return (1 + _sqrt(1 - delta**2)) / 2


def ps_n(N: int, delta: float) -> float:
    """Optimal success probability for N equiprobable equidistant pure states."""
    _check_n(N)
    _check_delta(delta)
    return (_sqrt(1 + (N - 1) * delta) + (N - 1) * _sqrt(1 - delta)) ** 2 / N**2


def pe_n(N: int, delta: float) -> float:
    """Probability of each individual wrong guess, (1 − p_s)/(N − 1).

    This is the off-peak eigenvalue of the reduced states of the axisymmetric
    family, (√(1+(N−1)δ) − √(1−δ))²/N².
    """
    return (1 - ps_n(N, delta)) / (N - 1)


def chsh_bound_overlap(N: int, delta: float) -> ChshBoundResult:
    """Maximal CHSH violation of N equiprobable two-qubit states with pairwise overlap δ."""
    _check_delta(delta)
    if N == 2:
        beta = 2 * _sqrt(1 + delta**2)
    elif N == 3:
        beta = 2 * SQRT2 / 3 * (1 + 2 * delta)
    elif N == 4:
        beta = 2 * SQRT2 * delta
    else:
        raise ParameterRangeError(f'CHSH overlap bounds exist for N in {{2, 3, 4}}, got {N!r}')
    return ChshBoundResult.from_beta(beta)


def chsh_bound_general_priors(priors: Sequence[float], delta: float) -> ChshBoundResult:
    _check_delta(delta)
    if len(priors) != 2:
        raise ParameterRangeError(f'Exactly two priors are supported, got {len(priors)}')
    p0, p1 = (float(p) for p in priors)
    if p0 < 0 or p1 < 0 or abs(p0 + p1 - 1) > _TOL:
        raise ParameterRangeError(f'Priors must be nonnegative and sum to 1, got {list(priors)}')
    product = p0 * p1
    return ChshBoundResult.from_beta(2 * _sqrt(2 - 4 * product * (1 - delta**2)))


def chsh_from_ps(ps_local: float) -> float:
    _check_probability('Local success probability', ps_local, 0.5, 1.0)
    return (2 + _sqrt(2 - (2 * ps_local - 1) ** 2)) / 4


def theta_chsh(delta: float, theta: float) -> float:
    return (2 + math.cos(theta) + delta * math.sin(theta)) / 4


def measurement_pi(theta: float) -> HermitianMatrix:
    """Π(θ) = ½[1 + sinθ σ_x + cosθ σ_z]."""
    return HermitianMatrix(
        (IDENTITY_2.entries + math.sin(theta) * PAULI_X.entries + math.cos(theta) * PAULI_Z.entries) / 2,
        check=False,
    )


def theta_measurements(delta: float) -> tuple[dict[int, Povm], dict[int, Povm]]:
    """The two-qubit strategy reaching the overlap bound for the two-state family.

    Alice measures σ_z for x=0 and σ_x for x=1; Bob measures Π(θ) and Π(−θ)
    with tanθ = δ.

    Returns:
        tuple[dict[int, Povm], dict[int, Povm]]: Alice's and Bob's POVMs keyed by setting
    """
    _check_delta(delta)
    theta = math.atan(delta)
    alice = {0: _binary_povm(measurement_pi(0.0)), 1: _binary_povm(measurement_pi(math.pi / 2))}
    bob = {0: _binary_povm(measurement_pi(theta)), 1: _binary_povm(measurement_pi(-theta))}
    return alice, bob


def _binary_povm(element: HermitianMatrix) -> Povm:
    return Povm((element, HermitianMatrix(np.eye(element.dim) - element.entries, check=False)), (0, 1))


def fidelity_bound_delta(N: int, delta: float) -> float:
    _check_n(N)
    _check_delta(delta)
    return (1 + (N - 1) * delta) / N


def fidelity_bound_ps(N: int, ps_local: float) -> float:
    _check_n(N)
    _check_probability('Local success probability', ps_local, 1 / N, 1.0)
    failure = 1 - ps_local
    return (1 + (N - 2) * failure + 2 * _sqrt((N - 1) * failure * ps_local)) / N


def energy_alpha(N: int, delta: float) -> float:
    _check_n(N)
    _check_delta(delta)
    return (1 - 1 / N) * (1 - delta)


def ps_from_energy(N: int, alpha: float) -> float:
    _check_n(N)
    _check_probability('Energy alpha', alpha, 0.0, 1 - 1 / N)
    return (_sqrt(N * (1 - alpha)) + _sqrt(N * (N - 1) * alpha)) ** 2 / N**2


def lambda_max_bound(trace: float, trace2: float, D: int) -> float:
    """Upper bound on the largest eigenvalue from Tr[ρ] and Tr[ρ²] in dimension D."""
    if D < 1:
        raise ParameterRangeError(f'Dimension must be positive, got {D!r}')
    spread = trace2 - trace**2 / D
    if spread < -_TOL:
        raise ParameterRangeError(f'Infeasible trace pair: Tr={trace!r}, Tr²={trace2!r} in dimension {D}')
    return trace / D + math.sqrt((D - 1) / D) * _sqrt(spread)


def inconclusive_local_ps(delta: float, p_inc: float) -> float:
    """Success of the scaled Helstrom strategy that abstains with probability p_inc."""
    _check_delta(delta)
    _check_probability('Inconclusive rate', p_inc)
    return (1 - p_inc) / 2 * (1 + _sqrt(1 - delta**2))


def critical_visibility(delta: float) -> tuple[float, float]:
    _check_delta(delta)
    nu_c = 1 / math.sqrt(1 + delta**2)
    return nu_c, delta * nu_c


def axisymmetric_spectrum(N: int, delta: float) -> list[float]:
    """Nonzero part of the ensemble spectrum, in descending order."""
    _check_n(N)
    _check_delta(delta)
    return [(1 + (N - 1) * delta) / N] + [(1 - delta) / N] * (N - 1)


def ensemble_spectrum(N: int, delta: float) -> list[float]:
    """Full two-qubit ensemble spectrum for N = 2, 3, 4, in descending order."""
    _check_delta(delta)
    if N == 2:
        values = [0.0, 0.0, (1 - delta) / 2, (1 + delta) / 2]
    elif N == 3:
        values = [0.0, (1 - delta) / 3, (1 - delta) / 3, (1 + 2 * delta) / 3]
    elif N == 4:
        values = [(1 - delta) / 4] * 3 + [(1 + 3 * delta) / 4]
    else:
        raise ParameterRangeError(f'Two-qubit spectra exist for N in {{2, 3, 4}}, got {N!r}')
    return sorted(values, reverse=True)


def reduced_spectrum(N: int, delta: float) -> list[float]:
    return [ps_n(N, delta)] + [pe_n(N, delta)] * (N - 1)


def beta_from_spectrum(eigenvalues: Sequence[float]) -> float:
    """Largest CHSH value over states with the given two-qubit spectrum."""
    if len(eigenvalues) != 4:
        raise ParameterRangeError(f'A two-qubit spectrum has 4 entries, got {len(eigenvalues)}')
    l1, l2, l3, l4 = sorted((float(v) for v in eigenvalues), reverse=True)
    return 2 * SQRT2 * math.sqrt((l1 - l4) ** 2 + (l2 - l3) ** 2)


def equiprobable_trace_powers(N: int, delta: float) -> dict[int, float]:
    """Tr ρ², Tr ρ³ and Tr ρ⁴ of N equiprobable states with real pairwise overlap δ."""
    _check_n(N)
    _check_delta(delta)
    n1 = N * (N - 1)
    n2 = n1 * (N - 2)
    n3 = n2 * (N - 3)
    trace2 = 1 - (1 - delta**2) * n1 / N**2
    trace3 = 1 - ((1 - delta**3) * n2 + 3 * (1 - delta**2) * n1) / N**3
    trace4 = 1 - ((1 - delta**4) * (n3 + 2 * n2 + n1) + (1 - delta**3) * 4 * n2 + (1 - delta**2) * 6 * n1) / N**4
    return {2: trace2, 3: trace3, 4: trace4}


def characteristic_coefficients(trace2: float, trace3: float, trace4: float) -> np.ndarray:
    """Coefficients (highest power first) of the characteristic polynomial of a
    unit-trace 4×4 matrix, from its trace powers."""
    return np.array(
        [
            1.0,
            -1.0,
            (1 - trace2) / 2,
            -(1 + 2 * trace3 - 3 * trace2) / 6,
            (1 - 6 * trace2 + 8 * trace3 + 3 * trace2**2 - 6 * trace4) / 24,
        ]
    )
