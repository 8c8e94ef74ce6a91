import numpy as np
import pytest

from seqtik import (
    DiagonalOperator,
    GridSpec,
    RegConfig,
    SpaceParams,
    make_problem,
    oracle_prox,
    oracle_tikhonov,
    random_operator,
    solve,
)
from seqtik.errors import InvalidInputError
from seqtik.experiments.checks import coordinate_oracle_suite, instance_oracle_suite
from seqtik.model import RegProblem


def test_l0_two_candidate_rule():
    assert oracle_prox(2.0, 1.0, 1.0, 0, 2) == 2.0
    assert oracle_prox(0.5, 1.0, 1.0, 0, 2) == 0.0
    assert oracle_prox(-3.0, 1.5, 1.0, 0, 4) == -2.0


def test_soft_threshold_hand_calculus():
    # golden refinement resolves a smooth minimum to about sqrt(machine eps)
    assert oracle_prox(3.0, 1.0, 2.0, 1, 2) == pytest.approx(2.0, abs=1e-6)


@pytest.mark.parametrize("p", [0.0, 0.3, 1.0, 2.0])
def test_zero_data(p):
    assert oracle_prox(0.0, 1.3, 0.7, p, 2) == 0.0


def test_grid_validation():
    with pytest.raises(InvalidInputError):
        GridSpec(1.0, 1.0)
    with pytest.raises(InvalidInputError):
        GridSpec(0.0, 1.0, points=10)


def test_single_coordinate_instance_reduces_to_prox():
    params = SpaceParams(0.5, 1, 1.5, 2, 2)
    prob = RegProblem(DiagonalOperator([1.4], 2), [0.0], [0.0], [0.8], 0.1, 0)
    u, value = oracle_tikhonov(prob, RegConfig(params, 0.2))
    assert u.tolist() == [oracle_prox(0.8, 1.4, 0.2, 0.5, 2)]


def test_zero_data_instance():
    params = SpaceParams(0.5, 1, 2, 4, 4)
    prob = RegProblem(random_operator(5, 4, 0), np.zeros(5), np.zeros(5), np.zeros(5), 0.1, 0)
    u, value = oracle_tikhonov(prob, RegConfig(params, 0.1))
    assert u.tolist() == [0.0] * 5 and value == 0.0


def test_solver_never_worse_on_random_instance():
    params = SpaceParams(0.5, 1, 2, 4, 4)
    rng = np.random.default_rng(11)
    prob = make_problem(random_operator(6, 4, 11), rng.standard_normal(6), 0.1, 11)
    cfg = RegConfig(params, 0.05)
    _, value = oracle_tikhonov(prob, cfg)
    assert value >= solve(prob, cfg).objective * (1 - 1e-6)


def test_size_limit():
    prob = make_problem(random_operator(9, 2, 0), np.ones(9), 0.1, 0)
    with pytest.raises(InvalidInputError):
        oracle_tikhonov(prob, RegConfig(SpaceParams(1, 1, 1, 2, 2), 0.1))


@pytest.mark.parametrize("p", [0.1, 0.9, 1.5, 3.0])
def test_extra_exponents(p):
    result = coordinate_oracle_suite(p, 3.0, cases=200, seed=5)
    assert result.passed, result.summary


def test_instance_suite_small():
    result = instance_oracle_suite(cases=20, seed=3)
    assert result.passed, result.summary
