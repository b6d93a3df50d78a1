"""
locdisc command line tool
"""

import click
import numpy as np

from locdisc import __version__ as version
from locdisc.bounds import (
    beta_from_spectrum,
    chsh_bound_overlap,
    chsh_from_ps,
    chsh_pwin_from_beta,
    critical_visibility,
    energy_alpha,
    ensemble_spectrum,
    fidelity_bound_delta,
    fidelity_bound_ps,
    helstrom,
    inconclusive_local_ps,
    ps_from_energy,
    ps_n,
)
from locdisc.cli.helpers import check_gap, emit, pass_cli_config
from locdisc.defaults import DEFAULT_DELTA_GRID, DEFAULT_PO_GRID, DEFAULT_SEESAW_TOL, POLICY
from locdisc.discrimination_programs import region_sweep
from locdisc.ensembles import (
    axisymmetric_family,
    global_energy,
    maximally_entangled_state,
    noisy_family,
    qubit_embedded_family,
)
from locdisc.seesaw import SeesawConfig, seesaw_run
from locdisc.utils import parse_grid

NAN = float('nan')


@click.group()
@click.version_option(version)
def main():
    """Local state discrimination versus global properties."""
    pass


def _seesaw_config(cli_config) -> SeesawConfig:
    return SeesawConfig(
        restarts=cli_config.restarts,
        max_iterations=cli_config.max_iterations,
        convergence_tol=DEFAULT_SEESAW_TOL,
        rng_seed=cli_config.seed,
        workers=cli_config.workers,
    )


@main.command()
@click.option('--n', 'N', type=click.IntRange(2, 4), default=2, show_default=True, help='Number of states')
@click.option('--delta-grid', default=None, help=f'Overlap grid, defaults to {DEFAULT_DELTA_GRID}')
@click.option('--seesaw', 'with_seesaw', is_flag=True, help='Add see-saw lower bounds to every row')
@pass_cli_config
def tradeoff(cli_config, N, delta_grid, with_seesaw, **options):
    """Local distinguishability against the maximal CHSH winning probability."""
    spec = cli_config.grid(delta_grid, 'DELTA_GRID', DEFAULT_DELTA_GRID)
    grid = parse_grid(spec)
    columns = ['delta', 'ps_n', 'chsh_bound', 'chsh_from_ps', 'identity_residual']
    if with_seesaw:
        columns += ['seesaw_value', 'seesaw_gap']

    rows = []
    for delta in grid:
        delta = float(delta)
        ps = ps_n(N, delta)
        bound = chsh_bound_overlap(N, delta).p_win_max
        # the spectral CHSH value of the ensemble reproduces the overlap bound
        residual = chsh_pwin_from_beta(beta_from_spectrum(ensemble_spectrum(N, delta))) - bound
        from_ps = chsh_from_ps(ps) if N == 2 else NAN
        row = [delta, ps, bound, from_ps, residual]
        if with_seesaw:
            result = seesaw_run(qubit_embedded_family(N, delta), _seesaw_config(cli_config))
            row += [result.best_value, bound - result.best_value]
        rows.append(row)

    parameters = {'N': N, 'delta_grid': spec, 'seesaw': with_seesaw}
    if with_seesaw:
        parameters['restarts'] = cli_config.restarts
    gap_columns = ['seesaw_gap'] if with_seesaw else []
    emit(
        cli_config,
        'tradeoff',
        parameters,
        columns,
        rows,
        residual_columns=['identity_residual'],
        gap_columns=gap_columns,
    )


@main.command()
@click.option('--n', 'N', type=click.IntRange(min=2), default=2, show_default=True, help='Number of states')
@click.option('--delta', type=float, default=0.8, show_default=True, help='Pairwise overlap')
@click.option('--po-grid', default=None, help=f'Inconclusive-rate grid, defaults to {DEFAULT_PO_GRID}')
@click.option('--projective', is_flag=True, help='Restrict the local relaxation to projective measurements')
@pass_cli_config
def region(cli_config, N, delta, po_grid, projective, **options):
    """Success probability of local and joint measurements against the inconclusive rate."""
    spec = cli_config.grid(po_grid, 'PO_GRID', DEFAULT_PO_GRID)
    grid = parse_grid(spec)
    sweep = region_sweep(
        N, delta, grid, tol=cli_config.tol, projective=projective, solver=cli_config.solver, workers=cli_config.workers
    )
    chsh_bound = chsh_bound_overlap(N, delta).p_win_max if N <= 4 else NAN
    columns = [
        'N',
        'delta',
        'p_inc',
        'local_bound',
        'global_bound',
        'gap',
        'inconclusive_local_ps',
        'chsh_bound',
        'solver_status',
    ]
    rows = [
        [
            N,
            delta,
            row.p_inc,
            row.local_bound,
            row.global_bound,
            row.gap,
            inconclusive_local_ps(delta, row.p_inc) if N == 2 else NAN,
            chsh_bound,
            row.solver_status,
        ]
        for row in sweep
    ]
    parameters = {'N': N, 'delta': delta, 'po_grid': spec, 'projective': projective}
    emit(cli_config, 'region', parameters, columns, rows)


@main.command()
@click.option('--n', 'N', type=click.IntRange(min=2), default=2, show_default=True, help='Number of states')
@click.option('--delta-grid', default=None, help=f'Overlap grid, defaults to {DEFAULT_DELTA_GRID}')
@pass_cli_config
def fidelity(cli_config, N, delta_grid, **options):
    """Maximally entangled fidelity bounds from the overlap and from local success."""
    spec = cli_config.grid(delta_grid, 'DELTA_GRID', DEFAULT_DELTA_GRID)
    rows = []
    for delta in parse_grid(spec):
        delta = float(delta)
        ps = ps_n(N, delta)
        from_delta = fidelity_bound_delta(N, delta)
        from_ps = fidelity_bound_ps(N, ps)
        rows.append([delta, ps, from_delta, from_ps, from_ps - from_delta])
    columns = ['delta', 'ps_n', 'fidelity_from_delta', 'fidelity_from_ps', 'identity_residual']
    emit(cli_config, 'fidelity', {'N': N, 'delta_grid': spec}, columns, rows, residual_columns=['identity_residual'])


@main.command()
@click.option('--n', 'N', type=click.IntRange(min=2), default=2, show_default=True, help='Number of states')
@click.option('--delta-grid', default=None, help=f'Overlap grid, defaults to {DEFAULT_DELTA_GRID}')
@pass_cli_config
def energy(cli_config, N, delta_grid, **options):
    """Global energy of the axisymmetric family and the success it allows."""
    spec = cli_config.grid(delta_grid, 'DELTA_GRID', DEFAULT_DELTA_GRID)
    vacuum = maximally_entangled_state(N)
    rows = []
    for delta in parse_grid(spec):
        delta = float(delta)
        alpha = energy_alpha(N, delta)
        measured = global_energy(axisymmetric_family(N, delta), vacuum)
        ps = ps_n(N, delta)
        from_energy = ps_from_energy(N, alpha)
        rows.append([delta, alpha, measured, ps, from_energy, from_energy - ps, measured - alpha])
    columns = ['delta', 'alpha', 'ensemble_energy', 'ps_n', 'ps_from_energy', 'identity_residual', 'energy_residual']
    emit(
        cli_config,
        'energy',
        {'N': N, 'delta_grid': spec},
        columns,
        rows,
        residual_columns=['identity_residual', 'energy_residual'],
    )


@main.command()
@click.option('--delta-grid', default=None, help=f'Overlap grid, defaults to {DEFAULT_DELTA_GRID}')
@pass_cli_config
def visibility(cli_config, delta_grid, **options):
    """Critical white-noise visibility of the two-state family."""
    spec = cli_config.grid(delta_grid, 'DELTA_GRID', DEFAULT_DELTA_GRID)
    rows = []
    for delta in parse_grid(spec):
        delta = float(delta)
        nu_c, threshold = critical_visibility(delta)
        mixture = sum(matrix.entries for matrix in noisy_family(delta, nu_c)) / 2
        spectrum = np.linalg.eigvalsh(mixture)
        # at the critical visibility the noisy ensemble sits on the CHSH local bound
        residual = chsh_pwin_from_beta(beta_from_spectrum(spectrum)) - 0.75
        rows.append([delta, nu_c, threshold, helstrom(delta), residual])
    columns = ['delta', 'nu_c', 'threshold', 'helstrom', 'identity_residual']
    emit(cli_config, 'visibility', {'delta_grid': spec}, columns, rows, residual_columns=['identity_residual'])


@main.command()
@click.option('--n', 'N', type=click.IntRange(2, 4), default=2, show_default=True, help='Number of states')
@click.option('--delta', type=float, default=1.0, show_default=True, help='Pairwise overlap')
@pass_cli_config
def seesaw(cli_config, N, delta, **options):
    """Per-restart see-saw traces for one ensemble."""
    result = seesaw_run(qubit_embedded_family(N, delta), _seesaw_config(cli_config))
    columns = ['restart', 'iteration', 'value', 'converged']
    rows = [
        [restart.index, iteration, value, restart.converged]
        for restart in result.restarts
        for iteration, value in enumerate(restart.trace)
    ]
    bound = chsh_bound_overlap(N, delta).p_win_max
    parameters = {
        'N': N,
        'delta': delta,
        'restarts': cli_config.restarts,
        'max_iterations': cli_config.max_iterations,
        'best_value': result.best_value,
        'chsh_bound': bound,
        'gap': bound - result.best_value,
    }
    check_gap(bound - result.best_value, f'See-saw at N={N} delta={delta}', tol=POLICY.bound_tol)
    emit(cli_config, 'seesaw', parameters, columns, rows)
