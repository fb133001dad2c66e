import pytest

from bivquant import (
    BivariateModel,
    Exponential,
    FGMCopula,
    IndependenceCopula,
    Pareto,
    Uniform01,
    Weibull,
)


@pytest.fixture
def indep_uniform():
    return BivariateModel(Uniform01(), Uniform01(), IndependenceCopula())


@pytest.fixture
def indep_exp():
    return BivariateModel(Exponential(1.0), Exponential(1.0), IndependenceCopula())


@pytest.fixture
def fgm_uniform():
    return BivariateModel(Uniform01(), Uniform01(), FGMCopula(theta=1.0))


@pytest.fixture
def indep_pareto():
    return BivariateModel(Pareto(1.0, 1.0), Pareto(1.0, 1.0), IndependenceCopula())


@pytest.fixture
def heavy_pareto():
    return BivariateModel(Pareto(1.0, 0.5), Exponential(1.0), IndependenceCopula())


def mixed_models():
    """A spread of dependence/marginal combinations for sweep-style tests."""
    return [
        BivariateModel(Uniform01(), Uniform01(), IndependenceCopula()),
        BivariateModel(Exponential(1.0), Exponential(0.5), IndependenceCopula()),
        BivariateModel(Pareto(1.0, 2.0), Weibull(1.0, 2.0), IndependenceCopula()),
        BivariateModel(Uniform01(), Uniform01(), FGMCopula(1.0)),
        BivariateModel(Exponential(1.0), Uniform01(), FGMCopula(-1.0)),
        BivariateModel(Weibull(1.0, 1.5), Pareto(1.0, 3.0), FGMCopula(0.5)),
    ]
