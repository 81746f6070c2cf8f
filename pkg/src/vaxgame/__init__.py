"""SIS vaccination games on uncorrelated networks.

Degree-based mean-field epidemics, threshold Nash equilibria under true
and behaviorally weighted probability perception, the socially optimal
vaccination policy, and analytic bounds for power-law networks.
"""

from .bounds import (
    PowerLawBoundContext,
    endemic_odds,
    odds_lower_bound,
    odds_upper_bound,
    ratio_sandwich,
    threshold_upper_bound,
)
from .dbmf import (
    ConsistencyError,
    ConvergenceError,
    EndemicState,
    EpidemicParams,
    IntegrationError,
    SocialState,
    Trajectory,
    batch_endemic_v,
    endemic_state,
    integrate_dbmf,
    nimfa_reduction,
    reproduction,
    settle_dbmf,
)
from .degree import DegreeDistribution, explicit, power_law
from .game import (
    CandidateState,
    EquilibriumResult,
    GameSpec,
    ThresholdLadder,
    compare_candidates,
    compare_true_vs_weighted,
    solve_pne,
    unprotected_cost,
    verify_pne,
)
from .planner import (
    InefficiencyReport,
    SocialCostBreakdown,
    SocialOptimumSolver,
    inefficiency,
    social_cost,
    solve_social_optimum,
)
from .weighting import (
    PERCEPTION_FIXED_POINT,
    WeightingSpec,
    identity,
    prelec,
    verify_inverse_s_shape,
    weight,
    weight_derivative,
    weight_inverse,
)

__version__ = "0.1.0"
