"""Numerical synthesis of trapped-ion circuits (local Rz, global Rx, MS gates)."""

from .ansatz import (Mode, Topology, build_topology, dof_count, instantiate, lower_bound_operator,
                     lower_bound_state)
from .engine import GradientResult, Objective, SynthesisTarget, cost, cost_and_gradient, simulate
from .haar import haar_state, haar_unitary
from .optimize import OptimizationRun, OptimizerConfig, minimize, minimize_with_restarts

__version__ = "0.1.0"

__all__ = [
    "GradientResult", "Mode", "Objective", "OptimizationRun", "OptimizerConfig",
    "SynthesisTarget", "Topology", "build_topology", "cost", "cost_and_gradient", "dof_count",
    "haar_state", "haar_unitary", "instantiate", "lower_bound_operator", "lower_bound_state",
    "minimize", "minimize_with_restarts", "simulate",
]
