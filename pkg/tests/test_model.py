import math

import numpy as np
import pytest

from delaypop import equilibrium_bisect, eval_F, make_bobwhite, make_pielou


class TestBobwhite:
    def test_ratio_one_equilibrium(self):
        m = make_bobwhite(0.5, 1, 2)
        assert m.x_bar == pytest.approx(1.0, abs=1e-14)
        assert m.alpha_inf == 0.5
        assert m.c_sup == 1.5

    def test_equilibrium_formula(self):
        m = make_bobwhite(0.25, 1, 1)
        assert m.x_bar == pytest.approx(1 / 3, rel=1e-14)

    def test_domain_violations(self):
        with pytest.raises(ValueError, match="alpha"):
            make_bobwhite(1.2, 1, 1)
        with pytest.raises(ValueError, match="alpha"):
            make_bobwhite(0.0, 2, 1)
        with pytest.raises(ValueError, match="alpha \\+ beta"):
            make_bobwhite(0.5, 0.4, 1)
        with pytest.raises(ValueError, match="r > 0"):
            make_bobwhite(0.5, 1, 0)


class TestPielou:
    def test_equilibria(self):
        assert make_pielou(2, 1).x_bar == pytest.approx(1.0)
        assert make_pielou(3, 1).x_bar == pytest.approx(2.0)

    def test_bounds(self):
        m = make_pielou(3, 1)
        assert m.alpha_inf == 0.0
        assert m.c_sup == 3.0

    def test_domain_violations(self):
        with pytest.raises(ValueError, match="beta"):
            make_pielou(1, 1)
        with pytest.raises(ValueError, match="lambda"):
            make_pielou(2, 0)


class TestEvalF:
    def test_equilibrium_values(self):
        assert eval_F(make_pielou(2, 1), 1.0) == pytest.approx(1.0)
        assert eval_F(make_bobwhite(0.5, 1, 2), 1.0) == pytest.approx(1.0)

    def test_pielou_values(self):
        m = make_pielou(3, 1)
        assert eval_F(m, 2.0) == pytest.approx(1.0)
        assert eval_F(m, 5.0) == pytest.approx(0.5)

    def test_rejects_nonpositive(self):
        m = make_pielou(2, 1)
        with pytest.raises(ValueError):
            eval_F(m, 0.0)
        with pytest.raises(ValueError):
            eval_F(m, -1.0)

    def test_array_input(self):
        m = make_pielou(3, 1)
        out = eval_F(m, np.array([2.0, 5.0]))
        assert out == pytest.approx([1.0, 0.5])


class TestBisection:
    def test_matches_closed_form(self):
        assert equilibrium_bisect(make_bobwhite(0.25, 1, 1)) == pytest.approx(1 / 3, rel=1e-10)
        assert equilibrium_bisect(make_pielou(3, 1)) == pytest.approx(2.0, rel=1e-10)
        assert equilibrium_bisect(make_bobwhite(0.5, 1, 7)) == pytest.approx(1.0, rel=1e-10)


def _random_models(n, seed):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        if rng.integers(2):
            alpha = rng.uniform(0.05, 0.95)
            total = rng.uniform(1.05, 4.0)
            yield make_bobwhite(alpha, total - alpha, rng.uniform(0.2, 4.0))
        else:
            yield make_pielou(rng.uniform(1.05, 5.0), rng.uniform(0.05, 10.0))


def test_equilibrium_residual_and_bisection_random():
    for m in _random_models(1000, seed=31):
        assert abs(eval_F(m, m.x_bar) - 1.0) <= 1e-10
        assert equilibrium_bisect(m) == pytest.approx(m.x_bar, rel=1e-10)


def test_strict_monotonicity_on_log_grid():
    xs = np.logspace(-6, 6, 1000)
    for m in (make_bobwhite(0.5, 1, 2), make_bobwhite(0.3, 1.5, 0.8), make_pielou(3, 1), make_pielou(1.5, 0.3)):
        vals = eval_F(m, xs)
        assert np.all(np.diff(vals) < 0)


def test_bounds_approached_at_grid_ends():
    xs = np.logspace(-6, 6, 1000)
    for m in (make_bobwhite(0.5, 1, 2), make_bobwhite(0.3, 1.5, 1.0), make_pielou(2, 1), make_pielou(3, 1)):
        vals = eval_F(m, xs)
        assert np.all(vals >= m.alpha_inf)
        assert np.all(vals <= m.c_sup)
        assert vals[0] == pytest.approx(m.c_sup, abs=1e-3)
        assert vals[-1] == pytest.approx(m.alpha_inf, abs=1e-3)


def test_models_are_hashable_and_frozen():
    m = make_pielou(2, 1)
    with pytest.raises(Exception):
        m.beta = 5.0
    assert hash(m) == hash(make_pielou(2, 1))
