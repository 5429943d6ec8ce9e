"""Trial statistics toolkit: scale scoring, reliability, OLS/ANCOVA,
random-intercept mixed model, t-tests, ingestion, and reporting."""

from .dataset import (
    DatasetError,
    Participant,
    ScaleResponse,
    TrialDataset,
    VasRecord,
    load_trial_dataset,
    write_trial_csvs,
)
from .distributions import (
    normal_cdf,
    normal_two_tailed_p,
    student_t_cdf,
    student_t_two_tailed_p,
)
from .linmod import FitResult, RankDeficient, TooFewRows, ancova, ols_fit
from .lmm import (
    NonConvergence,
    SingularDesign,
    TooFewGroups,
    fit_lmm_random_intercept,
    profile_loglik,
)
from .report import AnalysisReport, analyze_trial, render_markdown
from .scales import (
    CERQ_SUBSCALES,
    DegenerateData,
    GEQ_CORE_KEY,
    INSTRUMENTS,
    OutOfRange,
    WrongItemCount,
    cronbach_alpha,
    score_cerq,
    score_geq,
    score_paesis,
    score_pss10,
    score_sus,
    sus_contributions,
    sus_scores_from_contributions,
)
from .synthetic import (
    make_trial_dataset,
    simulate_pss_arrays,
    simulate_vas_arrays,
    vas_line,
)
from .ttests import TTestResult, paired_t_test, two_sample_t_test

__all__ = [
    "DatasetError",
    "Participant",
    "ScaleResponse",
    "TrialDataset",
    "VasRecord",
    "load_trial_dataset",
    "write_trial_csvs",
    "normal_cdf",
    "normal_two_tailed_p",
    "student_t_cdf",
    "student_t_two_tailed_p",
    "FitResult",
    "RankDeficient",
    "TooFewRows",
    "ancova",
    "ols_fit",
    "NonConvergence",
    "SingularDesign",
    "TooFewGroups",
    "fit_lmm_random_intercept",
    "profile_loglik",
    "AnalysisReport",
    "analyze_trial",
    "render_markdown",
    "CERQ_SUBSCALES",
    "DegenerateData",
    "GEQ_CORE_KEY",
    "INSTRUMENTS",
    "OutOfRange",
    "WrongItemCount",
    "cronbach_alpha",
    "score_cerq",
    "score_geq",
    "score_paesis",
    "score_pss10",
    "score_sus",
    "sus_contributions",
    "sus_scores_from_contributions",
    "make_trial_dataset",
    "simulate_pss_arrays",
    "simulate_vas_arrays",
    "vas_line",
    "TTestResult",
    "paired_t_test",
    "two_sample_t_test",
]
