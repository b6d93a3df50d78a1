"""See-saw maximization of the CHSH winning probability.

For a fixed ensemble state ρ the winning probability is bilinear in Alice's and
Bob's measurements. Fixing one side makes it linear in the other, and for
two-outcome measurements the optimal response is a spectral projector of a
response operator. Alternating the two responses never decreases the value;
random restarts take care of local maxima.

By default every measurement is balanced: its outcomes are projectors of ranks
⌈d/2⌉ and ⌊d/2⌋, which on a qubit are exactly the traceless ±1 observables.
The `general` class admits every two-outcome POVM, the trivial {I, 0} included.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .defaults import (
    DEFAULT_RESTARTS,
    DEFAULT_SDP_TOL,
    DEFAULT_SEED,
    DEFAULT_SEESAW_MAX_ITERATIONS,
    DEFAULT_SEESAW_TOL,
    POLICY,
)
from .ensembles import BipartiteEnsemble
from .exceptions import DimensionMismatchError, InvalidPovmError, ParameterRangeError, SolverError
from .quantum_core import (
    HermitianMatrix,
    Povm,
    as_array,
    density_from,
    eig_hermitian,
    partial_trace_array,
    random_unitary,
    validate_density,
    validate_povm,
)
from .sdp_core import SdpProblem, block_matrix, hermitian_basis, solve
from .types import Side
from .worker_pool import SweepPool

logger = logging.getLogger(__name__)

SETTINGS = (0, 1)
HALF_STEPS = ('spectral', 'sdp')
MEASUREMENT_CLASSES = ('balanced', 'general')

EnsembleLike = Union[BipartiteEnsemble, Sequence[HermitianMatrix]]


@dataclass(frozen=True, eq=False)
class MeasurementAssignment:
    """Two-outcome measurements for both CHSH settings of both parties."""

    alice: dict[int, Povm]
    bob: dict[int, Povm]

    def __post_init__(self):
        for name, side in (('alice', self.alice), ('bob', self.bob)):
            if set(side) != set(SETTINGS):
                raise ParameterRangeError(f'{name} needs measurements for settings 0 and 1, got {sorted(side)}')
            dims = {povm.dim for povm in side.values()}
            if len(dims) != 1:
                raise DimensionMismatchError(f'{name} measurements act on different dimensions: {sorted(dims)}')
            for setting, povm in side.items():
                if len(povm) != 2:
                    raise ParameterRangeError(f'{name} setting {setting} has {len(povm)} outcomes, expected 2')
                report = validate_povm(povm)
                if not report.passed:
                    raise InvalidPovmError(f'{name} setting {setting} is not a valid POVM', report)

    @property
    def dA(self) -> int:
        return self.alice[0].dim

    @property
    def dB(self) -> int:
        return self.bob[0].dim

    def side(self, side: Side) -> dict[int, Povm]:
        return self.alice if side == 'A' else self.bob


@dataclass(frozen=True)
class SeesawConfig:
    restarts: int = DEFAULT_RESTARTS
    max_iterations: int = DEFAULT_SEESAW_MAX_ITERATIONS
    convergence_tol: float = DEFAULT_SEESAW_TOL
    rng_seed: int = DEFAULT_SEED
    half_step: str = 'spectral'
    workers: int = 1
    measurements: str = 'balanced'

    def __post_init__(self):
        if self.restarts < 1:
            raise ParameterRangeError(f'restarts must be positive, got {self.restarts!r}')
        if self.max_iterations < 1:
            raise ParameterRangeError(f'max_iterations must be positive, got {self.max_iterations!r}')
        if not self.convergence_tol > 0:
            raise ParameterRangeError(f'convergence_tol must be positive, got {self.convergence_tol!r}')
        if not 0 <= self.rng_seed < 2**64:
            raise ParameterRangeError(f'rng_seed must be a 64-bit unsigned integer, got {self.rng_seed!r}')
        if self.half_step not in HALF_STEPS:
            raise ParameterRangeError(f'half_step must be one of {HALF_STEPS}, got {self.half_step!r}')
        if self.workers < 1:
            raise ParameterRangeError(f'workers must be positive, got {self.workers!r}')
        _check_measurements(self.measurements)


@dataclass
class RestartResult:
    index: int
    value: float
    assignment: MeasurementAssignment
    trace: list[float]
    converged: bool


@dataclass
class SeesawResult:
    best_value: float
    best_assignment: MeasurementAssignment
    trace: list[float]
    converged: bool
    restarts: list[RestartResult] = field(default_factory=list)
    seed: int = DEFAULT_SEED


def _state(e: EnsembleLike, priors: Optional[Sequence[float]]) -> np.ndarray:
    if isinstance(e, BipartiteEnsemble):
        return as_array(density_from(e.states, e.priors))
    matrices = [validate_density(m).entries for m in e]
    if not matrices:
        raise ParameterRangeError('An ensemble needs at least one state')
    weights = np.full(len(matrices), 1 / len(matrices)) if priors is None else np.asarray(priors, dtype=float)
    if len(weights) != len(matrices) or np.any(weights < 0) or abs(weights.sum() - 1) > POLICY.prior_tol:
        raise ParameterRangeError(f'Invalid priors {list(weights)} for {len(matrices)} states')
    return sum(w * m for w, m in zip(weights, matrices))


def _check_dims(rho: np.ndarray, dA: int, dB: int):
    if rho.shape != (dA * dB, dA * dB):
        raise DimensionMismatchError(f'State of shape {rho.shape} measured with local dimensions ({dA}, {dB})')


def _wins(a: int, b: int, x: int, y: int) -> bool:
    return (a ^ b) == (x & y)


def chsh_value(e: EnsembleLike, m: MeasurementAssignment, priors: Optional[Sequence[float]] = None) -> float:
    """¼ Σ Tr[ρ (A_{a|x} ⊗ B_{b|y})] over the winning combinations a ⊕ b = x ∧ y."""
    rho = _state(e, priors)
    _check_dims(rho, m.dA, m.dB)
    total = 0.0
    for x in SETTINGS:
        for y in SETTINGS:
            for a in (0, 1):
                for b in (0, 1):
                    if _wins(a, b, x, y):
                        joint = np.kron(m.alice[x].elements[a].entries, m.bob[y].elements[b].entries)
                        total += float(np.real(np.sum(rho.T * joint)))
    return total / 4


def response_operators(rho: np.ndarray, fixed: dict[int, Povm], fixed_side: Side, dA: int, dB: int):
    """The operators W[setting][outcome] on the free side with value Σ Tr[W B] (or Σ Tr[W A])."""
    free_dim = dB if fixed_side == 'A' else dA
    operators = {setting: [np.zeros((free_dim, free_dim), dtype=complex) for _ in (0, 1)] for setting in SETTINGS}
    for fixed_setting in SETTINGS:
        for fixed_outcome in (0, 1):
            element = fixed[fixed_setting].elements[fixed_outcome].entries
            if fixed_side == 'A':
                reduced = partial_trace_array(rho @ np.kron(element, np.eye(dB)), dA, dB, 'A')
            else:
                reduced = partial_trace_array(rho @ np.kron(np.eye(dA), element), dA, dB, 'B')
            for free_setting in SETTINGS:
                for free_outcome in (0, 1):
                    x, y = (fixed_setting, free_setting) if fixed_side == 'A' else (free_setting, fixed_setting)
                    a, b = (fixed_outcome, free_outcome) if fixed_side == 'A' else (free_outcome, fixed_outcome)
                    if _wins(a, b, x, y):
                        operators[free_setting][free_outcome] += reduced / 4
    return {s: [(w + w.conj().T) / 2 for w in ws] for s, ws in operators.items()}


def _check_measurements(measurements: str):
    if measurements not in MEASUREMENT_CLASSES:
        raise ParameterRangeError(f'measurements must be one of {MEASUREMENT_CLASSES}, got {measurements!r}')


def _first_rank(dim: int) -> int:
    return (dim + 1) // 2


def _spectral_response(w0: np.ndarray, w1: np.ndarray, measurements: str = 'balanced') -> Povm:
    values, vectors = eig_hermitian(w0 - w1)
    if measurements == 'balanced':
        # eigenvalues come in descending order
        keep = np.arange(len(values)) < _first_rank(w0.shape[0])
    else:
        # zero eigenvalues go to the first outcome
        keep = values >= -POLICY.zero_tiebreak_tol
    positive = vectors[:, keep] @ vectors[:, keep].conj().T
    first = HermitianMatrix(positive, check=False)
    return Povm((first, HermitianMatrix(np.eye(w0.shape[0]) - positive, check=False)), (0, 1))


def _sdp_response(w0: np.ndarray, w1: np.ndarray, measurements: str = 'balanced') -> Povm:
    dim = w0.shape[0]
    dims = (dim, dim)
    equalities = [
        (block_matrix(dims, {0: basis.entries, 1: basis.entries}), float(np.trace(basis.entries).real))
        for basis, _ in hermitian_basis(dim)
    ]
    if measurements == 'balanced':
        # the extreme points of {0 ≤ M ≤ I, Tr M = k} are the rank-k projectors
        equalities.append((block_matrix(dims, {0: np.eye(dim)}), float(_first_rank(dim))))
    problem = SdpProblem(
        dim=2 * dim,
        objective=block_matrix(dims, {0: w0, 1: w1}),
        equalities=equalities,
        block_dims=dims,
    )
    solution = solve(problem, tol=DEFAULT_SDP_TOL)
    if not solution.is_optimal:
        raise SolverError(f'Measurement half-step ended with status {solution.status.value}', solution)
    # clip interior-point round-off so the pair is exactly a POVM
    values, vectors = np.linalg.eigh(solution.block(0).entries)
    first = (vectors * np.clip(values, 0, 1)) @ vectors.conj().T
    return Povm((HermitianMatrix(first, check=False), HermitianMatrix(np.eye(dim) - first, check=False)), (0, 1))


def best_response(
    e: EnsembleLike,
    fixed_side: Side,
    m: MeasurementAssignment,
    priors: Optional[Sequence[float]] = None,
    half_step: str = 'spectral',
    measurements: str = 'balanced',
) -> MeasurementAssignment:
    """Replaces the measurements of the side opposite to `fixed_side` by their optimum.

    Balanced responses give the first outcome the top ⌈d/2⌉ eigenvectors of
    W₀ − W₁. General responses give it the whole nonnegative eigenspace, so a
    response operator proportional to the identity yields the measurement {I, 0}.
    """
    if fixed_side not in ('A', 'B'):
        raise ParameterRangeError(f'Unknown side {fixed_side!r}, expected A or B')
    if half_step not in HALF_STEPS:
        raise ParameterRangeError(f'half_step must be one of {HALF_STEPS}, got {half_step!r}')
    _check_measurements(measurements)
    rho = _state(e, priors)
    _check_dims(rho, m.dA, m.dB)
    operators = response_operators(rho, m.side(fixed_side), fixed_side, m.dA, m.dB)
    respond = _spectral_response if half_step == 'spectral' else _sdp_response
    free = {setting: respond(*operators[setting], measurements) for setting in SETTINGS}
    if fixed_side == 'A':
        return MeasurementAssignment(alice=m.alice, bob=free)
    return MeasurementAssignment(alice=free, bob=m.bob)


def random_measurement(dim: int, outcomes: int, rng: np.random.Generator) -> Povm:
    """A random projective measurement built from a Haar-random basis.

    Basis vectors are dealt to the outcomes in turn, so for two outcomes the
    first element has rank ⌈dim/2⌉ and the second ⌊dim/2⌋.
    """
    if outcomes < 2:
        raise ParameterRangeError(f'A measurement needs at least two outcomes, got {outcomes!r}')
    if dim < 1:
        raise ParameterRangeError(f'Dimension must be positive, got {dim!r}')
    unitary = random_unitary(dim, rng)
    elements = []
    for outcome in range(outcomes):
        columns = unitary[:, outcome::outcomes]
        elements.append(HermitianMatrix(columns @ columns.conj().T, check=False))
    return Povm(tuple(elements))


def random_assignment(dA: int, dB: int, rng: np.random.Generator) -> MeasurementAssignment:
    return MeasurementAssignment(
        alice={x: random_measurement(dA, 2, rng) for x in SETTINGS},
        bob={y: random_measurement(dB, 2, rng) for y in SETTINGS},
    )


def _local_dims(e: EnsembleLike, dims: Optional[tuple[int, int]]) -> tuple[int, int]:
    if dims is not None:
        return dims
    if isinstance(e, BipartiteEnsemble):
        return e.dA, e.dB
    total = as_array(e[0]).shape[0]
    side = int(round(np.sqrt(total)))
    if side * side != total:
        raise DimensionMismatchError(f'Cannot infer local dimensions of a {total}-dimensional state')
    return side, side


def _run_restart(task) -> RestartResult:
    e, priors, dims, cfg, index, seed = task
    log = logging.getLogger(__name__)
    rng = np.random.default_rng(seed)
    assignment = random_assignment(dims[0], dims[1], rng)
    value = chsh_value(e, assignment, priors)
    trace = [value]
    converged = False
    for _ in range(cfg.max_iterations):
        assignment = best_response(e, 'A', assignment, priors, cfg.half_step, cfg.measurements)
        assignment = best_response(e, 'B', assignment, priors, cfg.half_step, cfg.measurements)
        new_value = chsh_value(e, assignment, priors)
        trace.append(new_value)
        change = abs(new_value - value)
        value = new_value
        if change < cfg.convergence_tol:
            converged = True
            break
    log.debug('Restart %d: value %.12f after %d sweeps (converged=%s)', index, value, len(trace) - 1, converged)
    return RestartResult(index=index, value=value, assignment=assignment, trace=trace, converged=converged)


def seesaw_run(
    e: EnsembleLike,
    cfg: Optional[SeesawConfig] = None,
    priors: Optional[Sequence[float]] = None,
    dims: Optional[tuple[int, int]] = None,
) -> SeesawResult:
    """Best CHSH winning probability over `cfg.restarts` see-saw runs.

    Every restart draws its starting measurements from its own substream of
    `cfg.rng_seed`, so adding restarts leaves the earlier ones unchanged.
    """
    cfg = cfg or SeesawConfig()
    dims = _local_dims(e, dims)
    _check_dims(_state(e, priors), *dims)
    seeds = np.random.SeedSequence(cfg.rng_seed).spawn(cfg.restarts)
    tasks = [(e, priors, dims, cfg, index, seed) for index, seed in enumerate(seeds)]
    results = SweepPool(cfg.workers).map(_run_restart, tasks)

    best = max(results, key=lambda result: result.value)
    logger.info('See-saw best value %.12f from restart %d of %d', best.value, best.index, len(results))
    return SeesawResult(
        best_value=best.value,
        best_assignment=best.assignment,
        trace=best.trace,
        converged=best.converged,
        restarts=results,
        seed=cfg.rng_seed,
    )
