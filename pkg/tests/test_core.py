import itertools

import numpy as np
import pytest
from oracles import integer_h, sup_h_bruteforce

from hirschstat import (
    CitationSample,
    DomainError,
    empirical_h,
    empirical_h_integer,
    empirical_survival,
)


@pytest.mark.parametrize(
    "counts, expected",
    [([5, 4, 3, 2, 1], 3.0), ([0, 0, 0, 0], 0.0), ([3.7, 3.7, 3.7], 3.0), ([0.4], 0.4), ([10, 10], 2.0)],
)
def test_empirical_h_examples(counts, expected):
    assert empirical_h(counts) == expected


@pytest.mark.parametrize("counts, expected", [([10, 8, 5, 4, 3], 4), ([1], 1), ([0, 7], 1), ([0, 0], 0), ([100] * 7, 7)])
def test_empirical_h_integer_examples(counts, expected):
    assert empirical_h_integer(counts) == expected


@pytest.mark.parametrize(
    "counts, x, closed, expected",
    [([2, 2, 5], 2, True, 1.0), ([2, 2, 5], 2, False, 1 / 3), ([0, 0], 0, False, 0.0), ([0, 0], 0, True, 1.0)],
)
def test_empirical_survival_examples(counts, x, closed, expected):
    assert empirical_survival(counts, x, closed_at_x=closed) == pytest.approx(expected, abs=1e-15)


def test_rejects_bad_samples():
    with pytest.raises(DomainError, match="empty"):
        CitationSample([])
    with pytest.raises(DomainError, match="nonnegative"):
        CitationSample([1, -1])
    with pytest.raises(DomainError, match="finite"):
        CitationSample([1, np.nan])
    with pytest.raises(DomainError, match="non-integer"):
        empirical_h_integer([1.5, 2])


def test_sample_is_immutable():
    s = CitationSample([3, 1, 2])
    with pytest.raises(ValueError):
        s.counts[0] = 9
    assert s.descending.tolist() == [3.0, 2.0, 1.0]


def test_exhaustive_small_samples_match_supremum():
    # every sample of size <= 8 with counts in {0..6}, up to ordering
    for n in range(1, 9):
        for combo in itertools.combinations_with_replacement(range(7), n):
            assert empirical_h(combo) == sup_h_bruteforce(combo, grid_step=0.25)
            assert empirical_h_integer(combo) == integer_h(combo)


def test_random_real_samples_match_supremum():
    rng = np.random.default_rng(11)
    for _ in range(300):
        x = rng.pareto(1.2, size=rng.integers(1, 25)) * 3
        assert empirical_h(x) == pytest.approx(sup_h_bruteforce(x), abs=1e-12)


def test_appending_papers_monotone():
    rng = np.random.default_rng(5)
    for _ in range(500):
        x = rng.integers(0, 30, size=rng.integers(1, 20)).tolist()
        h = empirical_h_integer(x)
        assert empirical_h_integer(x + [h + 1 + int(rng.integers(0, 5))]) >= h
        assert empirical_h_integer(x + [0]) == h
