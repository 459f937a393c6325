from .gauge_norm import GaugeNorm, GaugeResult, gauge_norm
from .lp_solver import (
    Constraint,
    ExactSimplexSolver,
    LinearProgram,
    LPSolution,
    farkas_holds,
    lp_solve,
    ray_holds,
)
from .mazur_approximator import MazurApproximator, MazurResult, cesaro_distance, mazur_approx
from .ptak_game import ConvexMean, GameSolution, PtakChain, PtakGame, SetFamily, ptak_chain_search, ptak_value
from .stability_probe import ProbeReport, StabilityProbe, conv_stability_probe
