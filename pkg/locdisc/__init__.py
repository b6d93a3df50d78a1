# ruff: noqa: F401
from .bounds import chsh_bound_overlap, helstrom, ps_n
from .discrimination_programs import region_sweep, solve_global_bound, solve_local_bound
from .ensembles import BipartiteEnsemble, axisymmetric_family, two_state_family
from .quantum_core import HermitianMatrix, Povm, PureState
from .sdp_core import SdpProblem, SdpSolution, solve
from .seesaw import SeesawConfig, seesaw_run
from .version import VERSION

__all__ = [
    'BipartiteEnsemble',
    'HermitianMatrix',
    'Povm',
    'PureState',
    'SdpProblem',
    'SdpSolution',
    'SeesawConfig',
    'axisymmetric_family',
    'chsh_bound_overlap',
    'helstrom',
    'ps_n',
    'region_sweep',
    'seesaw_run',
    'solve',
    'solve_global_bound',
    'solve_local_bound',
    'two_state_family',
]

__version__ = VERSION
