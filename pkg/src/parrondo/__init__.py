"""Exact analysis and simulation of mod-m random walk games and their diffusion analogues.

The package classifies games as fair, winning or losing, computes the
asymptotic gain by two independent exact routes (stationary cofactors and
lattice renewals), analyzes random and deterministic mixtures of games, maps
periodic-drift diffusions to their embedded walks and back, and validates
everything by reproducible Monte Carlo.
"""

from .diffusion import (
    DriftProfile,
    ScaleTable,
    anderson_hit_prob,
    diffusion_p_star,
    diffusion_rho,
    embedded_probs,
    invert_drifts_m3,
    r_func,
    scale_at_integers,
)
from .games import (
    GainReport,
    GameClass,
    InvalidSpecError,
    ParrondoSpec,
    WalkSpec,
    classify,
    fair_family,
    game_from_json,
    make_parrondo,
    mix_random,
    p_star,
    parrondo_from_json,
    parrondo_to_json,
    product_gap,
    rho,
    swap,
    walk_from_json,
    walk_to_json,
)
from .hitting import (
    HittingSystem,
    TauVector,
    expected_interoccurrence,
    gain_report,
    gain_via_renewal,
    hitting_system,
)
from .mixtures import (
    MixtureProblem,
    PatternSchedule,
    QDiagnostics,
    QPolynomial,
    alternation_quotient,
    fairness_odds_check,
    mixture_verdict,
    pattern_gain,
    q_diagnostics,
    q_polynomial,
)
from .montecarlo import (
    ConcordanceReport,
    RandomMixGame,
    ScheduledGame,
    SimConfig,
    SimResult,
    estimate_vs_exact,
    simulate,
    trace_path,
)
from .roots import BracketError
from .stationary import (
    CofactorSet,
    CongruenceMatrix,
    DriftVector,
    StationaryVector,
    asymptotic_gain_cofactor,
    congruence_matrix,
    diag_cofactors_closed,
    diag_cofactors_det,
    drift_vector,
    period2_decompose,
    stationary,
)

__version__ = "0.1.0"
