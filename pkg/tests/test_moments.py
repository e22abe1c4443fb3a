import math
import warnings

import numpy as np
import pytest
from oracles import capped_pmf, enumerate_h_moments

from hirschstat import (
    DegenerateLawWarning,
    DiscreteStable,
    DiscretizedWeibull,
    DomainError,
    GeometricLaw,
    TabulatedLaw,
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
from hirschstat.montecarlo import STUDY_LAWS, STUDY_SAMPLE_SIZES


def test_theoretical_h_examples():
    assert theoretical_h(DiscreteStable(0.25, 1.0, shift=1), 30) == 11
    assert theoretical_h(DiscretizedWeibull(0.40), 150) == 11
    assert theoretical_h(DiscretizedWeibull(0.40), 30) == 4
    # no mass at zero: 1 * S(0) = 1 >= 1
    assert theoretical_h(DiscreteStable(0.5, 1.0, shift=1), 1) == 1


def test_theoretical_h_degenerate_law_warns():
    law = TabulatedLaw((0.99,), tail_ratio=0.5)
    with pytest.warns(DegenerateLawWarning):
        assert theoretical_h(law, 10) == 0
    with pytest.raises(DomainError):
        theoretical_h(law, 0)


def test_theoretical_h_matches_linear_scan_large_n():
    law = DiscretizedWeibull(0.1)
    for n in (7, 64, 65, 1000, 54321):
        j = 0
        while j < n and n * law.survival(j) >= j + 1:
            j += 1
        assert theoretical_h(law, n) == j


def test_p_jn_examples():
    law = TabulatedLaw((0.5, 0.0), tail_ratio=0.5)  # S(0) = S(1) = 0.5
    assert p_jn(law, 2, 2) == pytest.approx(0.25, abs=1e-15)
    shifted = DiscreteStable(0.5, 1.0, shift=5)  # S(j) = 1 for j < 5
    assert p_jn(shifted, 10, 4) == 1.0
    assert p_jn(shifted, 10, 11) == 0.0
    v = p_jn(DiscreteStable(0.25, 1.0, shift=1), 30, 11)
    assert 0.0 < v < 1.0


def test_p_jn_against_simulated_frequency():
    law = DiscreteStable(0.25, 1.0, shift=1)
    rng = np.random.default_rng(2024)
    reps, n, j = 100_000, 30, 11
    x = law.sample(rng, (reps, n))
    freq = np.mean(np.count_nonzero(x > j - 1, axis=1) >= j)
    p = p_jn(law, n, j)
    assert abs(freq - p) <= 3 * math.sqrt(p * (1 - p) / reps)


@pytest.mark.parametrize(
    "law, n, mean, var",
    [
        (DiscreteStable(0.25, 1.0, shift=1), 30, 11.31, 4.73),
        (DiscretizedWeibull(0.10), 100, 25.09, None),
        (DiscretizedWeibull(0.01), 30, None, 6.77),
    ],
)
def test_exact_moment_examples(law, n, mean, var):
    if mean is not None:
        assert exact_mean(law, n) == pytest.approx(mean, abs=0.005)
    if var is not None:
        assert exact_variance(law, n) == pytest.approx(var, abs=0.01)


def test_all_mass_above_n():
    law = DiscreteStable(0.5, 1.0, shift=40)
    for n in (1, 10, 40):
        assert exact_mean(law, n) == pytest.approx(n, abs=1e-12)
        assert exact_variance(law, n) == pytest.approx(0.0, abs=1e-12)


def test_two_point_law_enumeration():
    law = TabulatedLaw((0.6, 0.0, 0.0, 0.4 - 1e-9), tail_ratio=0.5)
    for n in (1, 2, 3):
        mean, var = enumerate_h_moments(capped_pmf(law, n), n)
        assert exact_mean(law, n) == pytest.approx(mean, abs=1e-12)
        assert exact_variance(law, n) == pytest.approx(var, abs=1e-12)


def _double_sum(p):
    total = sum(pj * (1 - pj) for pj in p)
    for l in range(1, len(p)):
        total += 2 * p[l] * sum(1 - p[j] for j in range(l))
    return total


@pytest.mark.parametrize("law", STUDY_LAWS, ids=lambda d: d.label)
def test_variance_double_sum_form(law):
    for n in (30, 200):
        p = p_vector(law, n, full=True).tolist()
        assert exact_variance(law, n) == pytest.approx(_double_sum(p), rel=1e-10)


@pytest.mark.parametrize("law", STUDY_LAWS + (GeometricLaw(0.7),), ids=lambda d: d.label)
def test_early_cutoff_matches_full_sum(law):
    for n in (5, 30, 123, 500):
        full = p_vector(law, n, full=True)
        cut = p_vector(law, n)
        assert np.sum(cut) == pytest.approx(np.sum(full), rel=1e-13, abs=1e-13)
        later = np.cumsum(full[::-1])[::-1] - full
        ref = float(np.sum((full + 2 * later) * (1 - full)))
        assert exact_variance(law, n) == pytest.approx(ref, rel=1e-12, abs=1e-13)


@pytest.mark.parametrize("law", STUDY_LAWS, ids=lambda d: d.label)
def test_consistency_and_divergence(law):
    ratios = [exact_mean(law, n) / theoretical_h(law, n) for n in STUDY_SAMPLE_SIZES]
    assert 0.9 <= ratios[-1] <= 1.1
    assert abs(ratios[-1] - 1) < abs(ratios[0] - 1)
    variances = [exact_variance(law, n) for n in STUDY_SAMPLE_SIZES]
    assert all(b > a for a, b in zip(variances, variances[1:]))


def test_normal_approx_examples():
    law = TabulatedLaw((0.5, 0.0), tail_ratio=0.5)  # S(1) = 0.5
    approx, x, v = normal_approx_p(law, 4, 2)  # j = n S(j - 1) = 2
    assert x == 0.0 and approx == 0.5 and v == pytest.approx(1.0)
    stable = DiscreteStable(0.5, 1.5, shift=1)
    h = theoretical_h(stable, 200)
    for j in range(h - 2, h + 3):
        approx, x, v = normal_approx_p(stable, 200, j)
        # no continuity correction: error is of order phi(x) / (2 v)
        bound = math.exp(-x * x / 2) / math.sqrt(2 * math.pi) / (2 * v)
        assert abs(approx - p_jn(stable, 200, j)) < 1.1 * bound
    far = DiscretizedWeibull(0.4)
    approx, x, _ = normal_approx_p(far, 200, 60)
    assert x >= 8 and approx < 1e-15
    with pytest.raises(DomainError, match="degenerate"):
        normal_approx_p(DiscreteStable(0.5, 1.0, shift=3), 10, 2)


@pytest.mark.xfail(strict=True, reason="uncorrected normal approximation is off by ~0.03 at v ~ 5; see decisions ledger")
def test_normal_approx_within_two_hundredths_near_h():
    stable = DiscreteStable(0.5, 1.5, shift=1)
    h = theoretical_h(stable, 200)
    assert abs(normal_approx_p(stable, 200, h)[0] - p_jn(stable, 200, h)) < 0.02


def test_closed_form_examples():
    assert pareto_asymptotic_variance(11, 0.25) == pytest.approx(7.04, abs=0.005)
    assert pareto_asymptotic_variance(9, 0.50) == pytest.approx(4.00, abs=0.005)
    assert pareto_asymptotic_variance(1, 0.0) == 1.0
    assert weibull_asymptotic_variance(10, 0.01, 30) == pytest.approx(9.78, abs=0.01)
    assert weibull_asymptotic_variance(12, 0.40, 200) == pytest.approx(2.66, abs=0.01)
    assert weibull_asymptotic_variance(50, 0.3, 50) == 50.0
    with pytest.raises(DomainError):
        weibull_asymptotic_variance(0, 0.1, 10)


def test_general_asymptotic_variance():
    law = DiscreteStable(0.25, 1.0, shift=1)
    h = theoretical_h(law, 30)
    expected = h / (1 + 30 * law.pmf(h)) ** 2
    assert asymptotic_variance(law, 30) == pytest.approx(expected, rel=1e-14)
    # psi(h) = 0: the denominator is one
    gap = TabulatedLaw((0.0,) * 5 + (0.0,) * 10, tail_ratio=0.9)
    assert gap.pmf(theoretical_h(gap, 10)) == 0.0
    assert asymptotic_variance(gap, 10) == theoretical_h(gap, 10)


def test_condition_diagnostics():
    bob = condition_diagnostics(DiscretizedWeibull(0.1), 10_000)
    tail = bob.local_ratio[-1000:]
    assert tail[-1] < 0.05 and np.all(np.diff(tail) < 0)
    geo = condition_diagnostics(GeometricLaw(0.5), 100)
    assert geo.local_ratio[-1] == pytest.approx(math.sqrt(100))
    one = condition_diagnostics(DiscretizedWeibull(0.1), 1)
    law = DiscretizedWeibull(0.1)
    assert one.local_ratio.tolist() == pytest.approx([law.pmf(1) / law.survival(1)])


def test_moment_report_flags_degenerate():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        report = moment_report(TabulatedLaw((0.99,)), 10)
    assert report.degenerate and report.h_n == 0
    ok = moment_report(DiscreteStable(0.25, 1.0, shift=1), 30)
    assert ok.h_n == 11 and not ok.degenerate
    assert set(ok.as_dict()) >= {"h_n", "exact_mean", "exact_variance", "closed_form_variance"}
