"""Small dense semidefinite programs.

A problem maximizes Tr[CX] over a Hermitian X ⪰ 0 with affine equality and
inequality constraints. X may carry block-diagonal structure: all data
matrices must vanish outside the blocks, so the variable is optimized over
block-diagonal matrices only.

The built-in backend is a primal-dual interior-point method (HKM search
direction with Mehrotra's predictor-corrector) working on real symmetric
data. Complex programs are realified with X ↦ [[Re X, −Im X], [Im X, Re X]];
programs whose data are all real are solved directly over real symmetric X,
which attains the same optimum.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import IO, Optional, Protocol, Sequence, Union, runtime_checkable

import numpy as np
import scipy.linalg

from .defaults import DEFAULT_SDP_MAX_ITERATIONS, DEFAULT_SDP_TOL, POLICY, NumericPolicy
from .exceptions import DimensionMismatchError, ParameterRangeError, SdpFormatError, SolverError
from .quantum_core import HermitianMatrix, MatrixLike, as_hermitian
from .utils import format_float, import_attribute

logger = logging.getLogger(__name__)

LESS_EQUAL = '<='
GREATER_EQUAL = '>='


class SdpStatus(str, Enum):
    OPTIMAL = 'optimal'
    INFEASIBLE = 'infeasible'
    MAX_ITER = 'max_iter'


def block_slices(block_dims: Sequence[int]) -> list[slice]:
    slices = []
    offset = 0
    for size in block_dims:
        slices.append(slice(offset, offset + size))
        offset += size
    return slices


def block_matrix(block_dims: Sequence[int], blocks: dict[int, MatrixLike]) -> HermitianMatrix:
    """Assembles a block-diagonal matrix from {block index: block}."""
    dim = sum(block_dims)
    slices = block_slices(block_dims)
    full = np.zeros((dim, dim), dtype=complex)
    for index, block in blocks.items():
        block = np.asarray(block.entries if isinstance(block, HermitianMatrix) else block, dtype=complex)
        if block.shape != (block_dims[index], block_dims[index]):
            raise DimensionMismatchError(f'Block {index} expects size {block_dims[index]}, got {block.shape}')
        full[slices[index], slices[index]] = block
    return HermitianMatrix(full)


def hermitian_basis(dim: int, real: bool = False) -> list[tuple[HermitianMatrix, tuple[int, int, str]]]:
    """Matrices E whose values Tr[EX] determine a Hermitian X entry by entry.

    The tag (i, j, part) says which entry is read: Re X_ij for 'diag' and 're',
    Im X_ij for 'im'. With `real=True` the imaginary parts are skipped.
    """
    basis = []
    for i in range(dim):
        for j in range(i, dim):
            e = np.zeros((dim, dim), dtype=complex)
            if i == j:
                e[i, i] = 1
                basis.append((HermitianMatrix(e, check=False), (i, j, 'diag')))
                continue
            e[i, j] = e[j, i] = 0.5
            basis.append((HermitianMatrix(e, check=False), (i, j, 're')))
            if not real:
                e = np.zeros((dim, dim), dtype=complex)
                e[i, j] = 0.5j
                e[j, i] = -0.5j
                basis.append((HermitianMatrix(e, check=False), (i, j, 'im')))
    return basis


@dataclass(eq=False)
class SdpProblem:
    """maximize Tr[CX] subject to Tr[A_i X] = b_i, Tr[B_j X] (<= or >=) c_j, X ⪰ 0."""

    dim: int
    objective: HermitianMatrix
    equalities: list[tuple[HermitianMatrix, float]] = field(default_factory=list)
    inequalities: list[tuple[HermitianMatrix, float, str]] = field(default_factory=list)
    block_dims: tuple[int, ...] = ()

    def __post_init__(self):
        if self.dim < 1:
            raise ParameterRangeError(f'Variable dimension must be positive, got {self.dim}')
        self.block_dims = tuple(self.block_dims) if self.block_dims else (self.dim,)
        if sum(self.block_dims) != self.dim or min(self.block_dims) < 1:
            raise DimensionMismatchError(f'Block sizes {self.block_dims} do not add up to {self.dim}')
        self.objective = self._checked(self.objective, 'objective')
        self.equalities = [(self._checked(a, 'equality'), float(b)) for a, b in self.equalities]
        inequalities = []
        for matrix, bound, direction in self.inequalities:
            if direction not in (LESS_EQUAL, GREATER_EQUAL):
                raise ParameterRangeError(f'Unknown inequality direction {direction!r}')
            inequalities.append((self._checked(matrix, 'inequality'), float(bound), direction))
        self.inequalities = inequalities

    def _checked(self, matrix: MatrixLike, what: str) -> HermitianMatrix:
        matrix = as_hermitian(matrix)
        if matrix.dim != self.dim:
            raise DimensionMismatchError(f'{what} matrix of dimension {matrix.dim} for a {self.dim}-dim variable')
        if len(self.block_dims) > 1:
            mask = np.ones((self.dim, self.dim), dtype=bool)
            for sl in block_slices(self.block_dims):
                mask[sl, sl] = False
            if np.any(np.abs(matrix.entries[mask]) > POLICY.hermiticity_tol):
                raise DimensionMismatchError(f'{what} matrix has entries outside the diagonal blocks')
        return matrix

    @property
    def matrices(self) -> list[HermitianMatrix]:
        return [self.objective] + [a for a, _ in self.equalities] + [b for b, _, _ in self.inequalities]

    @property
    def is_real(self) -> bool:
        return all(not np.any(np.abs(m.entries.imag) > 0) for m in self.matrices)

    def residuals(self, x: MatrixLike) -> np.ndarray:
        """Constraint violations of a candidate X: |Tr[A X] − b| and the positive
        part of every inequality violation."""
        x = np.asarray(x.entries if isinstance(x, HermitianMatrix) else x)
        values = []
        for a, b in self.equalities:
            values.append(abs(_inner(a.entries, x) - b))
        for matrix, bound, direction in self.inequalities:
            value = _inner(matrix.entries, x)
            values.append(max(0.0, value - bound) if direction == LESS_EQUAL else max(0.0, bound - value))
        return np.asarray(values)

    def objective_value(self, x: MatrixLike) -> float:
        x = np.asarray(x.entries if isinstance(x, HermitianMatrix) else x)
        return _inner(self.objective.entries, x)


@dataclass
class SdpSolution:
    X: HermitianMatrix
    value: float
    status: SdpStatus
    primal_residual: float
    dual_gap: float
    dual_value: float = math.nan
    dual_residual: float = math.nan
    iterations: int = 0
    block_dims: tuple[int, ...] = ()

    @property
    def is_optimal(self) -> bool:
        return self.status == SdpStatus.OPTIMAL

    def block(self, index: int) -> HermitianMatrix:
        dims = self.block_dims or (self.X.dim,)
        sl = block_slices(dims)[index]
        return HermitianMatrix(self.X.entries[sl, sl], check=False)


def _inner(a: np.ndarray, x: np.ndarray) -> float:
    """Re Tr[a x] for Hermitian a."""
    return float(np.real(np.sum(a.T * x)))


def _realify(m: np.ndarray) -> np.ndarray:
    return np.block([[m.real, -m.imag], [m.imag, m.real]])


def _derealify(y: np.ndarray) -> np.ndarray:
    n = y.shape[0] // 2
    real = (y[:n, :n] + y[n:, n:]) / 2
    imag = (y[n:, :n] - y[:n, n:]) / 2
    return real + 1j * imag


def _sym(m: np.ndarray) -> np.ndarray:
    return (m + m.T) / 2


@dataclass
class _StandardForm:
    """minimize Σ⟨C_k, X_k⟩ s.t. Σ⟨A_ik, X_k⟩ = b_i with real symmetric blocks.

    The first `n_problem_blocks` blocks carry the problem variable, the rest are
    1×1 slack blocks of the inequalities.
    """

    block_dims: list[int]
    C: list[np.ndarray]
    A: list[np.ndarray]
    b: np.ndarray
    realified: bool
    n_problem_blocks: int


def _to_standard_form(problem: SdpProblem) -> _StandardForm:
    realify = not problem.is_real
    slices = block_slices(problem.block_dims)

    def convert(matrix: HermitianMatrix, sl: slice) -> np.ndarray:
        block = matrix.entries[sl, sl]
        return 0.5 * _realify(block) if realify else block.real.copy()

    dims = [(2 * (sl.stop - sl.start) if realify else sl.stop - sl.start) for sl in slices]
    n_slack = len(problem.inequalities)
    block_dims = dims + [1] * n_slack
    m = len(problem.equalities) + n_slack

    C = [-convert(problem.objective, sl) for sl in slices] + [np.zeros((1, 1)) for _ in range(n_slack)]
    A = [np.zeros((m, n, n)) for n in block_dims]
    b = np.zeros(m)
    row = 0
    for matrix, bound in problem.equalities:
        for k, sl in enumerate(slices):
            A[k][row] = convert(matrix, sl)
        b[row] = bound
        row += 1
    for j, (matrix, bound, direction) in enumerate(problem.inequalities):
        for k, sl in enumerate(slices):
            A[k][row] = convert(matrix, sl)
        A[len(slices) + j][row, 0, 0] = 1.0 if direction == LESS_EQUAL else -1.0
        b[row] = bound
        row += 1
    return _StandardForm(block_dims, C, A, b, realify, len(slices))


@runtime_checkable
class SdpSolver(Protocol):
    def solve(self, problem: SdpProblem, tol: float) -> SdpSolution: ...  # pragma: no cover


class InteriorPointSolver:
    """Infeasible-start primal-dual path-following method for small dense SDPs."""

    def __init__(self, max_iterations: int = DEFAULT_SDP_MAX_ITERATIONS, policy: NumericPolicy = POLICY):
        if max_iterations < 1:
            raise ParameterRangeError('max_iterations must be positive')
        self.max_iterations = max_iterations
        self.policy = policy
        self.log = logging.getLogger(__name__)

    def solve(self, problem: SdpProblem, tol: float = DEFAULT_SDP_TOL) -> SdpSolution:
        if tol <= 0:
            raise ParameterRangeError(f'Tolerance must be positive, got {tol!r}')
        form = _to_standard_form(problem)
        if form.b.size == 0:
            raise SolverError('Problem has no constraints')

        kept, consistent = self._independent_rows(form)
        if not consistent:
            self.log.debug('Linearly dependent constraints with conflicting right-hand sides')
            return self._finish(problem, form, None, SdpStatus.INFEASIBLE, 0, math.inf)
        form.A = [a[kept] for a in form.A]
        form.b = form.b[kept]

        norms = np.sqrt(sum(np.sum(a.reshape(a.shape[0], -1) ** 2, axis=1) for a in form.A))
        form.A = [a / norms[:, None, None] for a in form.A]
        form.b = form.b / norms

        state, status, iterations = self._iterate(form, tol)
        return self._finish(problem, form, state, status, iterations, state['dobj'] if state else math.inf)

    def _independent_rows(self, form: _StandardForm) -> tuple[np.ndarray, bool]:
        m = form.b.size
        rows = np.hstack([a.reshape(m, -1) for a in form.A])
        _, r, pivots = scipy.linalg.qr(rows.T, mode='economic', pivoting=True)
        diagonal = np.abs(np.diagonal(r))
        if diagonal.size == 0 or diagonal[0] == 0:
            return np.array([], dtype=int), bool(np.all(np.abs(form.b) <= self.policy.dependency_tol))
        rank = int(np.sum(diagonal > self.policy.dependency_tol * diagonal[0]))
        kept = np.sort(pivots[:rank])
        dropped = np.sort(pivots[rank:])
        if dropped.size == 0:
            return kept, True
        coefficients, *_ = np.linalg.lstsq(rows[kept].T, rows[dropped].T, rcond=None)
        predicted = coefficients.T @ form.b[kept]
        scale = 1 + np.abs(form.b[dropped])
        consistent = bool(np.all(np.abs(predicted - form.b[dropped]) <= 1e-8 * scale))
        self.log.debug('Dropped %d dependent constraints out of %d', dropped.size, m)
        return kept, consistent

    def _iterate(self, form: _StandardForm, tol: float):
        policy = self.policy
        A, b, C = form.A, form.b, form.C
        m = b.size
        n_total = sum(form.block_dims)
        norm_b = np.linalg.norm(b)
        norm_c = math.sqrt(sum(np.sum(c**2) for c in C))

        X, Z = [], []
        for a, c, n in zip(A, C, form.block_dims):
            row_norms = np.sqrt(np.sum(a.reshape(m, -1) ** 2, axis=1))
            xi = max(10.0, math.sqrt(n), n * float(np.max((1 + np.abs(b)) / (1 + row_norms))))
            eta = max(10.0, math.sqrt(n), float(np.max(row_norms)), float(np.linalg.norm(c)))
            X.append(xi * np.eye(n))
            Z.append(eta * np.eye(n))
        y = np.zeros(m)

        best = None
        best_merit = math.inf
        residual_history: list[float] = []
        status = SdpStatus.MAX_ITER
        iteration = 0

        for iteration in range(1, self.max_iterations + 1):
            rp = b - self._apply(A, X)
            # dual residual C − Z − Aᵀy, blockwise
            Rd = [c - z - np.einsum('i,ijk->jk', y, a) for a, c, z in zip(A, C, Z)]
            pobj = sum(float(np.sum(c * x)) for c, x in zip(C, X))
            dobj = float(b @ y)
            xz = sum(float(np.sum(x * z)) for x, z in zip(X, Z))
            pres = float(np.linalg.norm(rp)) / (1 + norm_b)
            dres = math.sqrt(sum(float(np.sum(r**2)) for r in Rd)) / (1 + norm_c)
            gap = max(xz, abs(pobj - dobj))
            residual_history.append(pres)
            self.log.debug(
                'iteration %d: pobj=%.10g dobj=%.10g gap=%.3e pres=%.3e dres=%.3e',
                iteration,
                pobj,
                dobj,
                gap,
                pres,
                dres,
            )

            merit = max(pres, dres, gap / (1 + abs(pobj)))
            if merit < best_merit:
                best_merit = merit
                best = {'X': [x.copy() for x in X], 'y': y.copy(), 'dobj': dobj, 'dres': dres}

            if pres <= policy.sdp_feasibility_tol and dres <= policy.sdp_feasibility_tol and gap <= tol:
                status = SdpStatus.OPTIMAL
                best = {'X': [x.copy() for x in X], 'y': y.copy(), 'dobj': dobj, 'dres': dres}
                break

            if self._farkas_ray(A, b, y) or self._stalled(residual_history):
                status = SdpStatus.INFEASIBLE
                break

            try:
                step = self._step(A, X, Z, rp, Rd, xz / n_total)
            except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
                self.log.debug('Numerical breakdown at iteration %d: %s', iteration, exc)
                if pres > policy.sdp_stall_residual:
                    status = SdpStatus.INFEASIBLE
                break
            dX, dy, dZ, alpha_p, alpha_d = step
            if max(alpha_p, alpha_d) < 1e-12:
                self.log.debug('Step lengths collapsed at iteration %d', iteration)
                break
            X = [_sym(x + alpha_p * d) for x, d in zip(X, dX)]
            Z = [_sym(z + alpha_d * d) for z, d in zip(Z, dZ)]
            y = y + alpha_d * dy

        return best, status, iteration

    @staticmethod
    def _apply(A: list[np.ndarray], blocks: list[np.ndarray]) -> np.ndarray:
        m = A[0].shape[0]
        return sum(a.reshape(m, -1) @ x.reshape(-1) for a, x in zip(A, blocks))

    def _farkas_ray(self, A: list[np.ndarray], b: np.ndarray, y: np.ndarray) -> bool:
        by = float(b @ y)
        if by <= 0:
            return False
        ray = y / by
        largest = max(float(np.linalg.eigvalsh(_sym(np.einsum('i,ijk->jk', ray, a)))[-1]) for a in A)
        return largest <= self.policy.sdp_ray_tol

    def _stalled(self, history: list[float]) -> bool:
        window = self.policy.sdp_stall_iterations
        if len(history) <= window:
            return False
        recent = history[-window:]
        return min(recent) > self.policy.sdp_stall_residual and history[-1] > 0.5 * history[-window - 1]

    def _step(self, A, X, Z, rp, Rd, mu):
        m = rp.size
        Zinv = []
        for z in Z:
            factor = scipy.linalg.cho_factor(z, lower=True)
            Zinv.append(_sym(scipy.linalg.cho_solve(factor, np.eye(z.shape[0]))))

        M = np.zeros((m, m))
        for a, x, zi in zip(A, X, Zinv):
            w = x[None] @ a @ zi[None]
            M += a.reshape(m, -1) @ w.reshape(m, -1).T
        M = _sym(M)
        try:
            schur = scipy.linalg.cho_factor(M, lower=True)

            def solve_schur(rhs):
                return scipy.linalg.cho_solve(schur, rhs)
        except scipy.linalg.LinAlgError:

            def solve_schur(rhs):
                return np.linalg.lstsq(M, rhs, rcond=None)[0]

        x_rd_zinv = [x @ r @ zi for x, r, zi in zip(X, Rd, Zinv)]
        base_rhs = rp + self._apply(A, x_rd_zinv)

        def direction(H):
            dy = solve_schur(base_rhs - self._apply(A, H))
            dZ = [r - np.einsum('i,ijk->jk', dy, a) for r, a in zip(Rd, A)]
            dX = [_sym(h - _sym(x @ dz @ zi)) for h, x, dz, zi in zip(H, X, dZ, Zinv)]
            return dX, dy, dZ

        # predictor
        dXa, dya, dZa = direction([-x for x in X])
        alpha_p = min(1.0, self._max_step(X, dXa))
        alpha_d = min(1.0, self._max_step(Z, dZa))
        n_total = sum(x.shape[0] for x in X)
        mu_aff = sum(float(np.sum((x + alpha_p * dx) * (z + alpha_d * dz))) for x, dx, z, dz in zip(X, dXa, Z, dZa))
        mu_aff /= n_total
        sigma = min(1.0, max(0.0, mu_aff / mu)) ** 3 if mu > 0 else 0.0

        # corrector
        H = [sigma * mu * zi - x - _sym(dxa @ dza @ zi) for zi, x, dxa, dza in zip(Zinv, X, dXa, dZa)]
        dX, dy, dZ = direction(H)
        gamma = self.policy.sdp_step_fraction
        alpha_p = min(1.0, gamma * self._max_step(X, dX))
        alpha_d = min(1.0, gamma * self._max_step(Z, dZ))
        return dX, dy, dZ, alpha_p, alpha_d

    @staticmethod
    def _max_step(V: list[np.ndarray], dV: list[np.ndarray]) -> float:
        """Largest α with V + α dV ⪰ 0 in every block."""
        step = math.inf
        for v, dv in zip(V, dV):
            lower = np.linalg.cholesky(v)
            w = scipy.linalg.solve_triangular(lower, dv, lower=True)
            w = scipy.linalg.solve_triangular(lower, w.T, lower=True).T
            smallest = float(np.linalg.eigvalsh(_sym(w))[0])
            if smallest < 0:
                step = min(step, -1.0 / smallest)
        return step

    def _finish(self, problem, form, state, status, iterations, dobj) -> SdpSolution:
        slices = block_slices(problem.block_dims)
        x_full = np.zeros((problem.dim, problem.dim), dtype=complex)
        if state is not None:
            for k, sl in enumerate(slices):
                block = state['X'][k]
                x_full[sl, sl] = _derealify(block) if form.realified else block
        x = HermitianMatrix(x_full, check=False)
        value = problem.objective_value(x)
        residuals = problem.residuals(x)
        primal_residual = float(np.max(residuals)) if residuals.size else 0.0
        dual_value = -dobj
        solution = SdpSolution(
            X=x,
            value=value,
            status=status,
            primal_residual=primal_residual,
            dual_gap=dual_value - value,
            dual_value=dual_value,
            dual_residual=state['dres'] if state is not None else math.inf,
            iterations=iterations,
            block_dims=problem.block_dims,
        )
        if status == SdpStatus.MAX_ITER:
            self.log.warning(
                'SDP stopped after %d iterations (residual %.3e, gap %.3e)',
                iterations,
                primal_residual,
                solution.dual_gap,
            )
        return solution


class CvxpySolver:
    """Solves the same problems through cvxpy, for cross-validation."""

    def __init__(self, solver_name: Optional[str] = None):
        self.solver_name = solver_name
        self.log = logging.getLogger(__name__)

    def solve(self, problem: SdpProblem, tol: float = DEFAULT_SDP_TOL) -> SdpSolution:
        try:
            import cvxpy as cp
        except ImportError as exc:
            raise SolverError('cvxpy is not installed; install the `cvxpy` extra') from exc

        x = cp.Variable((problem.dim, problem.dim), hermitian=True)
        constraints = [x >> 0]
        slices = block_slices(problem.block_dims)
        for i, row in enumerate(slices):
            for col in slices[i + 1 :]:
                constraints.append(x[row, col] == 0)
        for matrix, bound in problem.equalities:
            constraints.append(cp.real(cp.trace(matrix.entries @ x)) == bound)
        for matrix, bound, direction in problem.inequalities:
            expression = cp.real(cp.trace(matrix.entries @ x))
            constraints.append(expression <= bound if direction == LESS_EQUAL else expression >= bound)
        program = cp.Problem(cp.Maximize(cp.real(cp.trace(problem.objective.entries @ x))), constraints)
        program.solve(solver=self.solver_name)

        if program.status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
            status = SdpStatus.INFEASIBLE
            value = np.zeros((problem.dim, problem.dim))
        else:
            status = SdpStatus.OPTIMAL if program.status == cp.OPTIMAL else SdpStatus.MAX_ITER
            value = x.value
        matrix = HermitianMatrix((value + np.conj(value).T) / 2, check=False)
        residuals = problem.residuals(matrix)
        return SdpSolution(
            X=matrix,
            value=problem.objective_value(matrix),
            status=status,
            primal_residual=float(np.max(residuals)) if residuals.size else 0.0,
            dual_gap=math.nan,
            block_dims=problem.block_dims,
        )


def resolve_solver(solver: Optional[Union[SdpSolver, str]] = None) -> SdpSolver:
    """Returns an SDP backend.

    Args:
        solver (Optional[Union[SdpSolver, str]]): A backend instance, a dotted path to a
            backend class or None for the built-in interior-point solver.

    Returns:
        SdpSolver: An object with a `solve(problem, tol)` method
    """
    if solver is None:
        return InteriorPointSolver()
    if isinstance(solver, str):
        solver = import_attribute(solver)()  # type: ignore[assignment]
    if not isinstance(solver, SdpSolver):
        raise NotImplementedError('SDP solvers should have a solve(problem, tol) method.')
    return solver


def solve(p: SdpProblem, tol: float = DEFAULT_SDP_TOL, solver: Optional[Union[SdpSolver, str]] = None) -> SdpSolution:
    return resolve_solver(solver).solve(p, tol)


def _write_matrix(fh: IO[str], header: str, matrix: HermitianMatrix):
    fh.write(header + '\n')
    entries = matrix.entries
    rows, cols = np.nonzero(np.triu(entries))
    for i, j in zip(rows, cols):
        fh.write(f'{i} {j} {format_float(entries[i, j].real)} {format_float(entries[i, j].imag)}\n')
    fh.write('end\n')


def dump_problem(p: SdpProblem, fh: IO[str]):
    """Writes `p` in the plain-text exchange format.

    The format is line based: a `dim` line, a `blocks` line, then one section
    per matrix opened by `objective`, `equality <b>` or `inequality <c> <dir>`
    and closed by `end`. Each section lists the nonzero upper-triangle entries
    as `i j real imag` triplets.
    """
    fh.write('# locdisc sdp problem\n')
    fh.write(f'dim {p.dim}\n')
    fh.write('blocks ' + ' '.join(str(size) for size in p.block_dims) + '\n')
    _write_matrix(fh, 'objective', p.objective)
    for matrix, bound in p.equalities:
        _write_matrix(fh, f'equality {format_float(bound)}', matrix)
    for matrix, bound, direction in p.inequalities:
        _write_matrix(fh, f'inequality {format_float(bound)} {direction}', matrix)


def load_problem(fh: IO[str]) -> SdpProblem:
    lines = [line.strip() for line in fh if line.strip() and not line.lstrip().startswith('#')]
    try:
        if not lines[0].startswith('dim ') or not lines[1].startswith('blocks '):
            raise SdpFormatError('Expected `dim` and `blocks` header lines')
        dim = int(lines[0].split()[1])
        block_dims = tuple(int(size) for size in lines[1].split()[1:])
        objective = None
        equalities: list[tuple[np.ndarray, float]] = []
        inequalities: list[tuple[np.ndarray, float, str]] = []
        index = 2
        while index < len(lines):
            header = lines[index].split()
            matrix = np.zeros((dim, dim), dtype=complex)
            index += 1
            while lines[index] != 'end':
                i, j, real, imag = lines[index].split()
                value = complex(float(real), float(imag))
                matrix[int(i), int(j)] = value
                matrix[int(j), int(i)] = np.conj(value)
                index += 1
            index += 1
            if header[0] == 'objective':
                objective = matrix
            elif header[0] == 'equality':
                equalities.append((matrix, float(header[1])))
            elif header[0] == 'inequality':
                inequalities.append((matrix, float(header[1]), header[2]))
            else:
                raise SdpFormatError(f'Unknown section {header[0]!r}')
    except (IndexError, ValueError) as exc:
        raise SdpFormatError(f'Malformed problem file: {exc}') from exc
    if objective is None:
        raise SdpFormatError('Problem file has no objective section')
    return SdpProblem(
        dim=dim,
        objective=HermitianMatrix(objective),
        equalities=[(HermitianMatrix(a), b) for a, b in equalities],
        inequalities=[(HermitianMatrix(a), c, d) for a, c, d in inequalities],
        block_dims=block_dims,
    )
