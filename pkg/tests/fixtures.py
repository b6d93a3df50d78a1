"""
This file contains all fixture functions and classes that are used by tests
"""

import math

import numpy as np

from locdisc.quantum_core import HermitianMatrix
from locdisc.sdp_core import SdpProblem, SdpSolution, SdpStatus


class InfeasibleSolver:
    """An SDP backend that declares every problem infeasible."""

    def solve(self, problem: SdpProblem, tol: float) -> SdpSolution:
        return SdpSolution(
            X=HermitianMatrix(np.zeros((problem.dim, problem.dim)), check=False),
            value=0.0,
            status=SdpStatus.INFEASIBLE,
            primal_residual=math.inf,
            dual_gap=math.nan,
            block_dims=problem.block_dims,
        )
