from dataclasses import dataclass

DEFAULT_SOLVER_CLASS = 'locdisc.sdp_core.InteriorPointSolver'
""" The path for the default SDP backend class to use.
Defaults to the built-in primal-dual interior-point solver within `locdisc.sdp_core`
"""


DEFAULT_SERIALIZER_FORMAT = 'csv'
""" The default output format for emitted tables.
Either `csv` or `json`
"""


DEFAULT_OUTPUT_DIR = '.'
""" The directory emitted tables are written to
when neither `--out` nor `LOCDISC_OUTPUT_DIR` is given
"""


OUTPUT_DIR_ENVVAR = 'LOCDISC_OUTPUT_DIR'
""" Environment variable holding the default output directory
"""


DEFAULT_SEED = 0
""" The master seed for see-saw restarts.
Every restart draws from its own substream spawned from this seed
"""


DEFAULT_RESTARTS = 20
""" Number of independent see-saw restarts
"""


DEFAULT_SEESAW_MAX_ITERATIONS = 500
""" Cap on full Alice+Bob sweeps per see-saw restart
"""


DEFAULT_SEESAW_TOL = 1e-9
""" A restart has converged once one full sweep changes the
winning probability by less than this amount
"""


DEFAULT_SDP_TOL = 1e-8
""" Target duality gap of the SDP solver
"""


DEFAULT_SDP_MAX_ITERATIONS = 100
""" Cap on interior-point iterations per SDP solve
"""


DEFAULT_DELTA_GRID = '0:0.1:1'
""" The overlap grid used by the figure commands, as `start:step:end`
"""


DEFAULT_PO_GRID = '0:0.1:0.9'
""" The inconclusive-rate grid used by the region command, as `start:step:end`
"""


DEFAULT_LOGGING_DATE_FORMAT = '%H:%M:%S'
""" The Date Format to use for locdisc logging.
"""


DEFAULT_LOGGING_FORMAT = '%(asctime)s %(message)s'
""" The default Logging Format to use
Uses Python's default attributes as defined
https://docs.python.org/3/library/logging.html#logrecord-attributes
"""


@dataclass(frozen=True)
class NumericPolicy:
    """Every numeric threshold used by the package, in one place."""

    hermiticity_tol: float = 1e-12
    norm_tol: float = 1e-12
    prior_tol: float = 1e-12
    povm_tol: float = 1e-10
    trace_tol: float = 1e-10
    imaginary_tol: float = 1e-12
    degeneracy_tol: float = 1e-10
    zero_tiebreak_tol: float = 1e-12
    identity_tol: float = 1e-10
    bound_tol: float = 1e-8
    sdp_feasibility_tol: float = 1e-9
    sdp_step_fraction: float = 0.95
    sdp_stall_residual: float = 1e-4
    sdp_stall_iterations: int = 50
    sdp_ray_tol: float = 1e-8
    dependency_tol: float = 1e-9


POLICY = NumericPolicy()
""" The policy shared by library code, solvers and tests
"""
