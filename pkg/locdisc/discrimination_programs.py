"""Local versus global discrimination with an inconclusive outcome.

The local program bounds the success probability of product measurements
A ⊗ B on N pure states from above with a Gram-matrix relaxation: the PSD
variable collects the inner products of the vectors ψ_z, (A_a ⊗ 1)ψ_z and
(1 ⊗ B_b)ψ_z. The global program optimizes an unrestricted POVM on explicit
states with the same overlaps and is solved exactly.

Both programs require the joint inconclusive rate to be at least `p_inc`.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .defaults import DEFAULT_SDP_TOL
from .exceptions import InfeasibleProblemError, ParameterRangeError, SolverError
from .quantum_core import INCONCLUSIVE, HermitianMatrix, Povm, PureState, validate_povm
from .sdp_core import (
    GREATER_EQUAL,
    LESS_EQUAL,
    SdpProblem,
    SdpSolution,
    SdpSolver,
    SdpStatus,
    block_matrix,
    block_slices,
    hermitian_basis,
    solve,
)
from .types import Label, Side
from .worker_pool import SweepPool

logger = logging.getLogger(__name__)

EQUAL = '=='
SENSES = (EQUAL, LESS_EQUAL, GREATER_EQUAL)

SolverLike = Optional[Union[SdpSolver, str]]


def _check_n(N: int):
    if int(N) != N or N < 2:
        raise ParameterRangeError(f'Number of states N must be an integer >= 2, got {N!r}')


def _check_unit(name: str, value: float):
    if not 0 <= value <= 1:
        raise ParameterRangeError(f'{name} must lie in [0, 1], got {value!r}')


@dataclass(frozen=True)
class Monomial:
    """ψ_z when `party` is empty, otherwise (party's outcome operator) ψ_z."""

    party: str
    z: int
    outcome: Optional[Label] = None

    def __str__(self) -> str:
        if not self.party:
            return f'ψ{self.z}'
        return f'{self.party}{self.outcome}ψ{self.z}'


class MonomialBasis:
    """The ordered monomial list: every ψ_z, then Alice's and Bob's outcome
    operators applied to every ψ_z."""

    def __init__(self, N: int):
        _check_n(N)
        self.N = N
        self.outcomes: tuple[Label, ...] = tuple(range(N)) + (INCONCLUSIVE,)
        entries = [Monomial('', z) for z in range(N)]
        for party in ('A', 'B'):
            for z in range(N):
                entries.extend(Monomial(party, z, outcome) for outcome in self.outcomes)
        self.entries: tuple[Monomial, ...] = tuple(entries)
        self._index = {monomial: index for index, monomial in enumerate(entries)}
        if len(self._index) != len(entries):
            raise ValueError('Duplicate monomials in basis')

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.entries)

    def __getitem__(self, index: int) -> Monomial:
        return self.entries[index]

    def index(self, monomial: Monomial) -> int:
        return self._index[monomial]

    def state(self, z: int) -> int:
        return self._index[Monomial('', z)]

    def operator(self, party: Side, outcome: Label, z: int) -> int:
        return self._index[Monomial(party, z, outcome)]


Term = tuple[int, int, float]
AuxTerm = tuple[int, int, int, float]


@dataclass(frozen=True)
class GramConstraint:
    """Σ c·G[u, v] + Σ c·S_k[i, j]  (==, <= or >=)  bound."""

    terms: tuple[Term, ...]
    bound: float
    sense: str
    aux_terms: tuple[AuxTerm, ...] = ()
    name: str = ''

    def __post_init__(self):
        if self.sense not in SENSES:
            raise ParameterRangeError(f'Unknown constraint sense {self.sense!r}')

    def evaluate(self, gram: np.ndarray) -> float:
        return float(sum(c * gram[u, v] for u, v, c in self.terms))


@dataclass(eq=False)
class GramModel:
    """A Gram-matrix program over a monomial basis.

    Completeness Σ_a A_a ψ_z = ψ_z is built into `lift`: the variable is the
    Gram matrix H of the monomials without inconclusive outcomes and the full
    Gram matrix is lift · H · liftᵀ, where the row of A_∅ψ_z is ψ_z − Σ_a A_aψ_z.
    Non-projective models carry one N×N auxiliary PSD block per party and
    outcome holding ⟨ψ_z|A − A²|ψ_z'⟩.

    An `identified` model describes N copies of one state: every monomial
    lifts onto those of ψ_0 and the auxiliary blocks are 1×1.
    """

    basis: MonomialBasis
    objective: tuple[Term, ...]
    constraints: list[GramConstraint]
    lift: np.ndarray
    aux_blocks: tuple[tuple[Side, Label], ...]
    projective: bool = False
    identified: bool = False

    def __post_init__(self):
        size = len(self.basis)
        if self.lift.shape[0] != size:
            raise ValueError(f'Lift has {self.lift.shape[0]} rows for {size} monomials')
        for constraint in self.constraints:
            for u, v, _ in constraint.terms:
                if not (0 <= u < size and 0 <= v < size):
                    raise ValueError(f'Constraint {constraint.name!r} references ({u}, {v}) outside the basis')
            for block, i, j, _ in constraint.aux_terms:
                if not (0 <= block < len(self.aux_blocks) and 0 <= i < self.aux_dim and 0 <= j < self.aux_dim):
                    raise ValueError(f'Constraint {constraint.name!r} references a missing auxiliary entry')

    @property
    def aux_dim(self) -> int:
        return 1 if self.identified else self.basis.N

    @property
    def reduced_dim(self) -> int:
        return self.lift.shape[1]

    @property
    def block_dims(self) -> tuple[int, ...]:
        return (self.reduced_dim,) + (self.aux_dim,) * len(self.aux_blocks)

    @property
    def equalities(self) -> list[GramConstraint]:
        return [c for c in self.constraints if c.sense == EQUAL]

    @property
    def inequalities(self) -> list[GramConstraint]:
        return [c for c in self.constraints if c.sense != EQUAL]

    def _matrix(self, terms: Sequence[Term], aux_terms: Sequence[AuxTerm] = ()) -> HermitianMatrix:
        dims = self.block_dims
        slices = block_slices(dims)
        matrix = np.zeros((sum(dims), sum(dims)))
        r = self.reduced_dim
        for u, v, c in terms:
            outer = np.outer(self.lift[u], self.lift[v])
            matrix[:r, :r] += c * (outer + outer.T) / 2
        for block, i, j, c in aux_terms:
            view = matrix[slices[block + 1], slices[block + 1]]
            view[i, j] += c / 2
            view[j, i] += c / 2
        return HermitianMatrix(matrix, check=False)

    def to_sdp_problem(self) -> SdpProblem:
        equalities = []
        inequalities = []
        for constraint in self.constraints:
            matrix = self._matrix(constraint.terms, constraint.aux_terms)
            if constraint.sense == EQUAL:
                equalities.append((matrix, constraint.bound))
            else:
                inequalities.append((matrix, constraint.bound, constraint.sense))
        return SdpProblem(
            dim=sum(self.block_dims),
            objective=self._matrix(self.objective),
            equalities=equalities,
            inequalities=inequalities,
            block_dims=self.block_dims,
        )

    def lift_gram(self, reduced: np.ndarray) -> np.ndarray:
        return self.lift @ np.real(reduced) @ self.lift.T

    def objective_value(self, gram: np.ndarray) -> float:
        return float(sum(c * gram[u, v] for u, v, c in self.objective))


def _lift(basis: MonomialBasis, identified: bool = False) -> np.ndarray:
    reduced = [m for m in basis if m.outcome != INCONCLUSIVE and not (identified and m.z)]
    column = {monomial: index for index, monomial in enumerate(reduced)}
    lift = np.zeros((len(basis), len(reduced)))
    for row, monomial in enumerate(basis):
        z = 0 if identified else monomial.z
        if monomial.outcome != INCONCLUSIVE:
            lift[row, column[Monomial(monomial.party, z, monomial.outcome)]] = 1
            continue
        lift[row, column[Monomial('', z)]] = 1
        for outcome in range(basis.N):
            lift[row, column[Monomial(monomial.party, z, outcome)]] = -1
    return lift


def build_gram_model(N: int, delta: float, p_inc_bound: float, projective: bool = False) -> GramModel:
    """The relaxation for N states with Re⟨ψ_z|ψ_z'⟩ ≥ δ and joint inconclusive rate ≥ p_inc_bound.

    The variable is real: all data are real, so averaging any feasible Gram
    matrix with its complex conjugate keeps it feasible with the same value.

    At δ = 1 all states coincide. The model then keeps ψ_0 alone so that a
    strictly feasible point exists; rows for the other states would repeat it.
    """
    _check_n(N)
    _check_unit('Overlap delta', delta)
    _check_unit('Inconclusive rate', p_inc_bound)
    basis = MonomialBasis(N)
    psi = basis.state
    op = basis.operator
    outcomes = basis.outcomes
    conclusive = tuple(range(N))
    identified = delta >= 1.0
    states = (0,) if identified else tuple(range(N))
    constraints: list[GramConstraint] = []

    for z in states:
        constraints.append(GramConstraint(((psi(z), psi(z), 1.0),), 1.0, EQUAL, name=f'norm ψ{z}'))
    for z in states:
        for w in states[z + 1 :]:
            constraints.append(
                GramConstraint(((psi(z), psi(w), 1.0),), delta, GREATER_EQUAL, name=f'overlap ψ{z}ψ{w}')
            )

    # outcome operators are Hermitian: ⟨ψ_z|A|ψ_w⟩ = ⟨ψ_w|A|ψ_z⟩
    for party in ('A', 'B'):
        for a in conclusive:
            for z in states:
                for w in states[z + 1 :]:
                    constraints.append(
                        GramConstraint(
                            ((psi(z), op(party, a, w), 1.0), (psi(w), op(party, a, z), -1.0)),
                            0.0,
                            EQUAL,
                            name=f'hermitian {party}{a} ψ{z}ψ{w}',
                        )
                    )

    # A_a ⊗ B_b is Hermitian
    for a in conclusive:
        for b in conclusive:
            for z in states:
                for w in states[z + 1 :]:
                    constraints.append(
                        GramConstraint(
                            ((op('A', a, z), op('B', b, w), 1.0), (op('A', a, w), op('B', b, z), -1.0)),
                            0.0,
                            EQUAL,
                            name=f'hermitian A{a}B{b} ψ{z}ψ{w}',
                        )
                    )

    for z in states:
        for a in outcomes:
            for b in outcomes:
                constraints.append(
                    GramConstraint(((op('A', a, z), op('B', b, z), 1.0),), 0.0, GREATER_EQUAL, name=f'p({a},{b}|{z})')
                )

    aux_blocks: list[tuple[Side, Label]] = []
    for party in ('A', 'B'):
        for a in outcomes:
            if projective:
                for z in states:
                    for w in states[z:]:
                        constraints.append(
                            GramConstraint(
                                (
                                    (op(party, a, z), op(party, a, w), 1.0),
                                    (psi(z), op(party, a, w), -0.5),
                                    (psi(w), op(party, a, z), -0.5),
                                ),
                                0.0,
                                EQUAL,
                                name=f'idempotent {party}{a} ψ{z}ψ{w}',
                            )
                        )
                continue
            block = len(aux_blocks)
            aux_blocks.append((party, a))
            for z in states:
                for w in states[z:]:
                    constraints.append(
                        GramConstraint(
                            (
                                (psi(z), op(party, a, w), 0.5),
                                (psi(w), op(party, a, z), 0.5),
                                (op(party, a, z), op(party, a, w), -1.0),
                            ),
                            0.0,
                            EQUAL,
                            aux_terms=((block, z, w, -1.0),),
                            name=f'A-A² {party}{a} ψ{z}ψ{w}',
                        )
                    )

    if projective:
        for party in ('A', 'B'):
            for i, a in enumerate(outcomes):
                for a2 in outcomes[i + 1 :]:
                    for z in states:
                        for w in states:
                            constraints.append(
                                GramConstraint(
                                    ((op(party, a, z), op(party, a2, w), 1.0),),
                                    0.0,
                                    EQUAL,
                                    name=f'orthogonal {party}{a}{party}{a2} ψ{z}ψ{w}',
                                )
                            )

    constraints.append(
        GramConstraint(
            tuple((op('A', INCONCLUSIVE, z), op('B', INCONCLUSIVE, z), 1 / N) for z in range(N)),
            p_inc_bound,
            GREATER_EQUAL,
            name='inconclusive rate',
        )
    )
    objective = tuple((op('A', z, z), op('B', z, z), 1 / N) for z in range(N))
    return GramModel(
        basis=basis,
        objective=objective,
        constraints=constraints,
        lift=_lift(basis, identified),
        aux_blocks=tuple(aux_blocks),
        projective=projective,
        identified=identified,
    )


@dataclass
class LocalBoundResult:
    value: float
    inconclusive: float
    status: SdpStatus
    gram: np.ndarray
    model: GramModel
    solution: SdpSolution


@dataclass
class GlobalBoundResult:
    value: float
    inconclusive: float
    error: float
    status: SdpStatus
    povm: Povm
    states: list[PureState]
    solution: SdpSolution


def _checked(solution: SdpSolution, what: str) -> SdpSolution:
    if solution.status == SdpStatus.INFEASIBLE:
        raise InfeasibleProblemError(f'The {what} program is infeasible', solution)
    if solution.status == SdpStatus.MAX_ITER:
        raise SolverError(
            f'The {what} program did not converge in {solution.iterations} iterations '
            f'(residual {solution.primal_residual:.3e}, gap {solution.dual_gap:.3e})',
            solution,
        )
    return solution


def solve_local_program(
    N: int,
    delta: float,
    p_inc_bound: float,
    tol: float = DEFAULT_SDP_TOL,
    projective: bool = False,
    solver: SolverLike = None,
) -> LocalBoundResult:
    model = build_gram_model(N, delta, p_inc_bound, projective=projective)
    solution = _checked(solve(model.to_sdp_problem(), tol=tol, solver=solver), 'local')
    gram = model.lift_gram(solution.block(0).entries)
    basis = model.basis
    inconclusive = sum(
        gram[basis.operator('A', INCONCLUSIVE, z), basis.operator('B', INCONCLUSIVE, z)] for z in range(N)
    ) / N
    logger.debug(
        'Local bound N=%d delta=%g p_inc=%g: %.10f (%s)', N, delta, p_inc_bound, solution.value, solution.status.value
    )
    return LocalBoundResult(
        value=solution.value,
        inconclusive=float(inconclusive),
        status=solution.status,
        gram=gram,
        model=model,
        solution=solution,
    )


def solve_local_bound(
    N: int, delta: float, p_inc_bound: float, tol: float = DEFAULT_SDP_TOL, solver: SolverLike = None
) -> float:
    """Upper bound on the success probability of local strategies."""
    return solve_local_program(N, delta, p_inc_bound, tol=tol, solver=solver).value


def states_from_gram(N: int, delta: float) -> list[PureState]:
    """N unit vectors in C^N with pairwise inner product δ: the columns of the
    PSD square root of (1 − δ)I + δJ."""
    _check_n(N)
    _check_unit('Overlap delta', delta)
    gram = (1 - delta) * np.eye(N) + delta * np.ones((N, N))
    values, vectors = np.linalg.eigh(gram)
    root = (vectors * np.sqrt(np.clip(values, 0, None))) @ vectors.T
    return [PureState.from_unnormalized(root[:, z], N) for z in range(N)]


def _complete(elements: list[np.ndarray]) -> list[np.ndarray]:
    """Congruence S^{-1/2} M_c S^{-1/2} with S = Σ M_c, removing solver round-off
    from the completeness relation while keeping every element PSD."""
    total = sum(elements)
    values, vectors = np.linalg.eigh(total)
    inverse_root = (vectors / np.sqrt(values)) @ vectors.conj().T
    return [inverse_root @ element @ inverse_root for element in elements]


def solve_global_program(
    N: int, delta: float, p_inc_bound: float, tol: float = DEFAULT_SDP_TOL, solver: SolverLike = None
) -> GlobalBoundResult:
    """Best POVM {M_0..M_{N−1}, M_∅} on `states_from_gram(N, delta)` with inconclusive rate ≥ p_inc_bound."""
    _check_unit('Inconclusive rate', p_inc_bound)
    states = states_from_gram(N, delta)
    labels = tuple(range(N)) + (INCONCLUSIVE,)
    dims = (N,) * len(labels)
    projectors = [state.projector().entries for state in states]

    problem = SdpProblem(
        dim=N * len(labels),
        objective=block_matrix(dims, {z: projectors[z] / N for z in range(N)}),
        equalities=[
            (block_matrix(dims, {c: basis.entries for c in range(len(labels))}), float(np.trace(basis.entries).real))
            for basis, _ in hermitian_basis(N, real=True)
        ],
        inequalities=[(block_matrix(dims, {N: sum(projectors) / N}), p_inc_bound, GREATER_EQUAL)],
        block_dims=dims,
    )
    solution = _checked(solve(problem, tol=tol, solver=solver), 'global')
    elements = _complete([solution.block(c).entries for c in range(len(labels))])
    povm = Povm(tuple(HermitianMatrix(element) for element in elements), labels)
    report = validate_povm(povm)
    if not report.passed:
        logger.warning('Global POVM witness fails validation: %s', report)

    def rate(label: Label, z: int) -> float:
        return float(np.real(np.vdot(states[z].amplitudes, povm[label].entries @ states[z].amplitudes)))

    success = sum(rate(z, z) for z in range(N)) / N
    inconclusive = sum(rate(INCONCLUSIVE, z) for z in range(N)) / N
    logger.debug(
        'Global bound N=%d delta=%g p_inc=%g: %.10f (%s)', N, delta, p_inc_bound, solution.value, solution.status.value
    )
    return GlobalBoundResult(
        value=solution.value,
        inconclusive=inconclusive,
        error=max(0.0, 1 - success - inconclusive),
        status=solution.status,
        povm=povm,
        states=states,
        solution=solution,
    )


def solve_global_bound(
    N: int, delta: float, p_inc_bound: float, tol: float = DEFAULT_SDP_TOL, solver: SolverLike = None
) -> float:
    return solve_global_program(N, delta, p_inc_bound, tol=tol, solver=solver).value


@dataclass(frozen=True)
class RegionRow:
    p_inc: float
    local_bound: float
    global_bound: float
    local_status: SdpStatus
    global_status: SdpStatus

    @property
    def gap(self) -> float:
        return self.local_bound - self.global_bound

    @property
    def solver_status(self) -> str:
        if self.local_status == self.global_status:
            return self.local_status.value
        return f'{self.local_status.value}/{self.global_status.value}'


def _sweep_point(task) -> RegionRow:
    N, delta, p_inc, tol, projective, solver = task
    local = solve_local_program(N, delta, p_inc, tol=tol, projective=projective, solver=solver)
    joint = solve_global_program(N, delta, p_inc, tol=tol, solver=solver)
    return RegionRow(p_inc, local.value, joint.value, local.status, joint.status)


def region_sweep(
    N: int,
    delta: float,
    p_inc_grid: Sequence[float],
    tol: float = DEFAULT_SDP_TOL,
    projective: bool = False,
    solver: SolverLike = None,
    workers: int = 1,
) -> list[RegionRow]:
    """Local and global optimum at every inconclusive rate of `p_inc_grid`."""
    _check_n(N)
    _check_unit('Overlap delta', delta)
    grid = [float(p) for p in p_inc_grid]
    for p in grid:
        if math.isnan(p):
            raise ParameterRangeError('Inconclusive grid contains NaN')
        _check_unit('Inconclusive rate', p)
    tasks = [(N, delta, p, tol, projective, solver) for p in grid]
    return SweepPool(workers).map(_sweep_point, tasks)
