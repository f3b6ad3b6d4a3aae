"""Bundled demo-problem fixture tests with frozen reference values."""

import numpy as np
import pytest

from ansatz_forge.fixtures import (
    PORTFOLIO_DAYS,
    PORTFOLIO_SEED,
    generate_portfolio_data,
    maxcut_fixture,
    portfolio_fixture,
    tsp_fixture,
)
from ansatz_forge.problems import brute_force_min, portfolio_to_qp


def test_portfolio_fixture_frozen_values():
    spec = portfolio_fixture()
    assert len(spec.expected_returns) == 4
    assert (spec.risk_factor, spec.budget, spec.penalty) == (0.5, 2, 4.0)
    np.testing.assert_allclose(
        spec.expected_returns,
        [0.00136575, 0.00142757, 0.00171161, -6.05e-06], atol=5e-9)
    cov = np.asarray(spec.covariance)
    np.testing.assert_allclose(cov, cov.T, atol=1e-18)
    assert np.all(np.linalg.eigvalsh(cov) > 0)  # positive definite
    # The packaged data must match regeneration from the pinned seed.
    doc = generate_portfolio_data(4, PORTFOLIO_SEED, PORTFOLIO_DAYS)
    np.testing.assert_allclose(doc["expected_returns"], spec.expected_returns,
                               atol=1e-15)
    np.testing.assert_allclose(doc["covariance"], spec.covariance, atol=1e-15)


def test_portfolio_fixture_optimum_frozen():
    value, bits = brute_force_min(portfolio_to_qp(portfolio_fixture()))
    assert value == pytest.approx(-0.002937824581579207, abs=1e-15)
    assert bits == "1010"
    assert bits.count("1") == 2  # respects the budget


def test_maxcut_fixture_is_c5():
    g = maxcut_fixture()
    assert g.n_nodes == 5
    assert sorted(tuple(sorted((a, b))) for a, b, w in g.edges) == [
        (0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]
    assert all(w == 1.0 for _, _, w in g.edges)


def test_tsp_fixture_weights():
    g = tsp_fixture()
    assert g.n_nodes == 3
    assert {(a, b): w for a, b, w in g.edges} == {
        (0, 1): 1.0, (0, 2): 2.0, (1, 2): 3.0}
