"""Statistical inference for the h-index.

Empirical h-index, exact finite-sample moments under a known citation law,
a nonparametric variance estimate with confidence sets, a two-scholar test,
and a Monte Carlo harness for coverage studies.
"""

__version__ = "0.1.0"

from ._jit import backend
from .core import (
    CitationSample,
    EmpiricalSurvival,
    as_sample,
    empirical_h,
    empirical_h_integer,
    empirical_survival,
)
from .distributions import (
    DiscreteStable,
    DiscretizedWeibull,
    GeometricLaw,
    TabulatedLaw,
    discrete_stable_pmf,
    discrete_stable_sample,
    discrete_stable_survival,
    discretized_weibull_sample,
    discretized_weibull_survival,
)
from .errors import (
    DegenerateLawWarning,
    DegenerateStatisticError,
    DomainError,
    ParseError,
    SimulationError,
)
from .estimation import (
    HIndexReport,
    HomogeneityResult,
    confidence_set,
    homogeneity_statistic,
    homogeneity_test,
    plug_in_p,
    plug_in_p_vector,
    variance_estimate,
)
from .io import (
    ReportTable,
    ScholarRecord,
    emit_table,
    parse_citation_file,
    render_table,
)
from .moments import (
    IntegerDistribution,
    MomentReport,
    asymptotic_variance,
    condition_diagnostics,
    exact_mean,
    exact_variance,
    moment_report,
    normal_approx_p,
    p_jn,
    p_vector,
    pareto_asymptotic_variance,
    theoretical_h,
    weibull_asymptotic_variance,
)
from .montecarlo import (
    STUDY_LAWS,
    STUDY_SAMPLE_SIZES,
    StudyConfig,
    StudyRow,
    coverage_check,
    run_study,
)
from .special import binomial_pmf, binomial_tail, normal_quantile, normal_sf

__all__ = [
    "CitationSample",
    "DegenerateLawWarning",
    "DegenerateStatisticError",
    "DiscreteStable",
    "DiscretizedWeibull",
    "DomainError",
    "EmpiricalSurvival",
    "GeometricLaw",
    "HIndexReport",
    "HomogeneityResult",
    "IntegerDistribution",
    "MomentReport",
    "ParseError",
    "ReportTable",
    "STUDY_LAWS",
    "STUDY_SAMPLE_SIZES",
    "ScholarRecord",
    "SimulationError",
    "StudyConfig",
    "StudyRow",
    "TabulatedLaw",
    "as_sample",
    "asymptotic_variance",
    "backend",
    "binomial_pmf",
    "binomial_tail",
    "condition_diagnostics",
    "confidence_set",
    "coverage_check",
    "discrete_stable_pmf",
    "discrete_stable_sample",
    "discrete_stable_survival",
    "discretized_weibull_sample",
    "discretized_weibull_survival",
    "emit_table",
    "empirical_h",
    "empirical_h_integer",
    "empirical_survival",
    "exact_mean",
    "exact_variance",
    "homogeneity_statistic",
    "homogeneity_test",
    "moment_report",
    "normal_approx_p",
    "normal_quantile",
    "normal_sf",
    "p_jn",
    "p_vector",
    "pareto_asymptotic_variance",
    "parse_citation_file",
    "plug_in_p",
    "plug_in_p_vector",
    "render_table",
    "run_study",
    "theoretical_h",
    "variance_estimate",
    "weibull_asymptotic_variance",
]
