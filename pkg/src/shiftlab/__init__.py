"""Dynamics of bilateral weighted backward shifts on sequence spaces."""
from .criteria import (
    Decomposition,
    Verdict,
    chain_recurrence_trivial,
    gh_check,
    koethe_ute_check,
    make_periodic_point,
    periodic_point_exists,
    psp_condition_ii_falsify,
    psp_search,
    psp_triple_check,
    shadowing_criterion,
    ute_classify,
    ute_numeric_check,
)
from .solver import brute_force_shadow, finite_shadow_solve
from .spaces import C0, KoetheMatrix, SeqVector, SpaceNorm, basis, norm
from .trajectories import Pseudotrajectory, validate
from .weights import WeightSpec, rates

__version__ = "0.1.0"
