"""Bundled benchmark fixtures: portfolio (4 assets), Max-Cut (5-node cycle),
and TSP (3-node complete graph).

The portfolio mu/Sigma come from a fixed-seed synthetic daily-return series;
the exact data ships as data/portfolio4.json and `generate_portfolio_data`
reproduces it bit-for-bit.
"""

from __future__ import annotations

import json
from importlib import resources

import numpy as np

from .problems import GraphSpec, PortfolioSpec

PORTFOLIO_SEED = 20240721
PORTFOLIO_DAYS = 252


def generate_portfolio_data(n_assets: int = 4, seed: int = PORTFOLIO_SEED,
                            days: int = PORTFOLIO_DAYS) -> dict:
    """Synthetic daily returns -> sample mean vector and covariance matrix."""
    rng = np.random.default_rng(seed)
    drift = rng.uniform(0.0002, 0.0015, size=n_assets)
    vol = rng.uniform(0.005, 0.02, size=n_assets)
    series = drift + vol * rng.standard_normal((days, n_assets))
    mu = series.mean(axis=0)
    sigma = np.cov(series, rowvar=False)
    return {
        "expected_returns": mu.tolist(),
        "covariance": sigma.tolist(),
    }


def _load_portfolio_data() -> dict:
    text = resources.files("ansatz_forge.data").joinpath("portfolio4.json").read_text()
    return json.loads(text)


def portfolio_fixture() -> PortfolioSpec:
    """4 assets, risk factor 0.5, budget 2, penalty 4."""
    data = _load_portfolio_data()
    return PortfolioSpec(
        expected_returns=np.asarray(data["expected_returns"]),
        covariance=np.asarray(data["covariance"]),
        risk_factor=0.5,
        budget=2,
        penalty=4.0,
    )


def maxcut_fixture() -> GraphSpec:
    """Unweighted 5-node cycle; maximum cut value 4."""
    edges = tuple((i, (i + 1) % 5, 1.0) for i in range(5))
    return GraphSpec(5, edges)


def tsp_fixture() -> GraphSpec:
    """Complete 3-node graph; every tour has length 6."""
    return GraphSpec(3, ((0, 1, 1.0), (0, 2, 2.0), (1, 2, 3.0)))


def portfolio_problem_doc() -> dict:
    data = _load_portfolio_data()
    return {
        "kind": "portfolio",
        "expected_returns": data["expected_returns"],
        "covariance": data["covariance"],
        "risk_factor": 0.5,
        "budget": 2,
        "penalty": 4.0,
    }


def maxcut_problem_doc() -> dict:
    g = maxcut_fixture()
    return {"kind": "maxcut", "n_nodes": g.n_nodes,
            "edges": [list(e) for e in g.edges]}


def tsp_problem_doc(reduced: bool = False) -> dict:
    g = tsp_fixture()
    return {"kind": "tsp", "n_nodes": g.n_nodes,
            "edges": [list(e) for e in g.edges], "reduced": reduced}


PROBLEM_DOCS = {
    "portfolio": portfolio_problem_doc,
    "maxcut": maxcut_problem_doc,
    "tsp": tsp_problem_doc,
}
