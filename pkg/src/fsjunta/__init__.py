"""fsjunta: exact Fourier analysis of Boolean functions, spectral-sampling
oracle simulation, junta testing and learning, and a seeded experiment
harness."""

from .boolfn import (
    N_MAX,
    AcceptInstance,
    BudgetExceededError,
    JuntaSpec,
    RejectInstance,
    TruthTable,
    best_junta_on,
    distance,
    distance_to_best_junta_on,
    distance_to_k_junta,
    influence_direct,
    make_addressing,
    make_constant,
    make_junta,
    make_parity,
    mask_from_vars,
    random_junta_spec,
    random_table,
    realize_accept,
    realize_reject,
    sample_accept_instance,
    sample_reject_instance,
    vars_from_mask,
)
from .fourier import (
    Spectrum,
    influence_spectral,
    inverse_wht,
    parseval_check,
    projection_values,
    sign_projection,
    wht,
)
from .learning import (
    Hypothesis,
    LearnerReport,
    find_influential,
    hypothesis_error,
    learn_junta,
)
from .oracles import (
    ExOracle,
    FsFailure,
    FsOracle,
    FsOracleError,
    LabeledExample,
    MqOracle,
    QueryCounter,
    derive_seed,
    fs_draw_accept_analytic,
    fs_draw_reject_analytic,
    make_rng,
)
from .stats import chernoff_halfwidth, chernoff_trials, chi_square_gof
from .testing import (
    ScenarioFunction,
    TesterVerdict,
    collision_distinguisher,
    junta_test,
    sample_scenario,
    scenario_distinguisher,
    transcript_tv_estimate,
)

__version__ = "0.1.0"
