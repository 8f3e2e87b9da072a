import numpy as np
import pytest

from gyrotrack import control, scenario
from gyrotrack.control import (ErrorState, ecl_rate_bound, ecl_value,
                               gain_derive, gain_feasible, pd_variant,
                               q_matrix, synthesize_gains)
from gyrotrack.errors import KappaOutOfRangeError


def _random_gains(rng):
    mu = rng.uniform(1.2, 8.0)
    kappa = rng.uniform(1.0 / mu, 2.0 / mu)
    # keep strictly inside the open interval
    kappa = np.clip(kappa, 1.001 / mu, 1.999 / mu)
    return gain_derive(kp=rng.uniform(0.1, 60.0),
                       kd=rng.uniform(0.5, 6.0),
                       ki=rng.uniform(0.01, 8.0),
                       kappa=kappa, mu_hess=mu,
                       lambda_sup=rng.uniform(0.3, 3.0))


class TestGainDerive:
    def test_worked_example(self):
        g = gain_derive(kp=1.0, kd=3.0, ki=1.0, kappa=0.6, mu_hess=2.0048,
                        lambda_sup=1.42)
        assert abs(g.beta - 1.0 / 3.0) < 1e-15
        assert abs(g.alpha - 1.0 / 9.0) < 1e-15
        assert abs(g.delta - 1.2) < 1e-15
        assert abs(g.sigma - (2.0 - 2.0048 * 0.6)) < 1e-15
        assert abs(g.sigma - 0.79712) < 1e-12
        assert abs(g.tau - (1.0 * g.beta + g.alpha * 1.0)) < 1e-15

    def test_kappa_open_interval(self):
        mu = 2.0048
        with pytest.raises(KappaOutOfRangeError):
            gain_derive(1.0, 3.0, 1.0, 1.0 / mu, mu)
        with pytest.raises(KappaOutOfRangeError):
            gain_derive(1.0, 3.0, 1.0, 2.0 / mu, mu)
        gain_derive(1.0, 3.0, 1.0, 1.5 / mu, mu)   # interior ok

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            gain_derive(0.0, 3.0, 1.0, 0.6, 2.0048)
        with pytest.raises(ValueError):
            gain_derive(1.0, 3.0, 1.0, 0.6, -2.0)

    def test_benchmark_inputs_accepted(self):
        g = scenario.benchmark_gains()
        assert g.mu_hess == control.BENCHMARK_MU_HESS == 2.0048
        assert g.lambda_sup == control.BENCHMARK_LAMBDA_SUP == 1.42


class TestQMatrix:
    def test_structural_zeros(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            q = q_matrix(_random_gains(rng))
            assert q[0, 1] == q[1, 0] == 0.0
            assert q[1, 2] == q[2, 1] == 0.0
            assert q[0, 2] == q[2, 0]

    def test_entry_formulas(self):
        g = gain_derive(5.0, 2.0, 0.7, 0.5, 2.5, 1.0)
        q = q_matrix(g)
        assert abs(q[0, 0] - (2.0 - 2.5 * 0.7 / 4.0)) < 1e-14
        assert abs(q[1, 1] - (0.7 / 4.0) * (5.0 - 2.0 * 0.5 * 4.0)) < 1e-14
        assert abs(q[2, 2] - 0.49 / 2.0) < 1e-14
        assert abs(q[0, 2] + g.sigma * 0.7) < 1e-14

    def test_minor_test_agrees_with_eigenvalue_oracle(self):
        rng = np.random.default_rng(5)
        disagreements = 0
        for _ in range(1000):
            q = q_matrix(_random_gains(rng))
            minors_pd = (q[0, 0] > 0.0
                         and np.linalg.det(q[:2, :2]) > 0.0
                         and np.linalg.det(q) > 0.0)
            eig_pd = bool(np.linalg.eigvalsh(q).min() > 0.0)
            disagreements += minors_pd != eig_pd
        assert disagreements == 0

    def test_pd_region_matches_printed_inequalities(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            g = _random_gains(rng)
            q = q_matrix(g)
            eig_pd = bool(np.linalg.eigvalsh(q).min() > 0.0)
            ineq = (g.kp > 2.0 * g.kappa * g.kd ** 2
                    and 0.0 < g.ki < (g.kd ** 3 / g.mu_hess)
                    * (1.0 - g.sigma ** 2))
            assert eig_pd == ineq

    def test_boundary_ki_gives_zero_eigenvalue(self):
        mu, kappa, kd = 2.0048, 0.6, 3.0
        sigma = 2.0 - mu * kappa
        ki = (kd ** 3 / mu) * (1.0 - sigma ** 2)
        g = gain_derive(kp=2.5 * kappa * kd ** 2, kd=kd, ki=ki, kappa=kappa,
                        mu_hess=mu)
        assert abs(np.linalg.eigvalsh(q_matrix(g)).min()) < 1e-8


class TestFeasibility:
    def test_benchmark_gains_infeasible(self):
        v = gain_feasible(scenario.benchmark_gains())
        assert not v.feasible
        assert abs(v.kp_floor - 10.8) < 1e-12          # 2 * 0.6 * 9
        assert abs(v.kp_floor_any_kappa - 18.0 / 2.0048) < 1e-12
        # below the floor for every admissible kappa, not just kappa = 0.6
        assert 1.0 < v.kp_floor_any_kappa

    def test_small_integral_gain_feasible(self):
        mu, lam = 2.0048, 1.42
        g = gain_derive(kp=100.0, kd=1.0, ki=0.01, kappa=1.5 / mu,
                        mu_hess=mu, lambda_sup=lam)
        assert gain_feasible(g).feasible

    def test_ki_above_bound_infeasible(self):
        mu, kappa, kd = 2.5, 0.5, 2.0
        sigma = 2.0 - mu * kappa
        ki_bound = (kd ** 3 / mu) * (1.0 - sigma ** 2)
        g = gain_derive(kp=1000.0, kd=kd, ki=1.01 * ki_bound, kappa=kappa,
                        mu_hess=mu)
        assert not gain_feasible(g).feasible

    def test_checks_report_both_sides(self):
        v = gain_feasible(scenario.benchmark_gains())
        lhs, rhs, ok = v.checks["kp_gt_2_kappa_kd2"]
        assert lhs == 1.0 and abs(rhs - 10.8) < 1e-12 and not ok

    def test_synthesize_feasible_by_construction(self):
        rng = np.random.default_rng(11)
        from conftest import random_spd
        for kd in (1.0, 3.0):
            for _ in range(5):
                g = synthesize_gains(random_spd(rng, low=1.0, high=9.0), kd=kd)
                assert gain_feasible(g).feasible

    def test_pd_variant_drops_integral_channel(self):
        g = pd_variant(scenario.benchmark_gains())
        assert g.ki == 0.0 and g.alpha == 0.0 and g.tau == 0.0
        assert not gain_feasible(g).feasible


class TestCertificationInputs:
    def test_lambda_formula_matches_benchmark_value(self):
        lam = control.lambda_sup_formula(scenario.BENCHMARK_PLANT_I)
        assert abs(lam - 1.42) < 2e-3

    def test_mu_formula_exceeds_benchmark_value(self):
        # the eigenvalue expression is >= 4 for any SPD input, so it cannot
        # reproduce the stored 2.0048; both are reported side by side
        from conftest import random_spd
        rng = np.random.default_rng(13)
        for _ in range(20):
            assert control.mu_hess_formula(random_spd(rng)) >= 4.0
        mu = control.mu_hess_formula(scenario.BENCHMARK_PLANT_I)
        assert abs(mu - 6.8494) < 1e-3
        assert mu != control.BENCHMARK_MU_HESS


class TestEnergyFunction:
    def _setup(self):
        i = scenario.BENCHMARK_PLANT_I
        gains = synthesize_gains(i)
        return i, np.eye(3), gains

    def test_zero_at_minimum(self):
        i, p, g = self._setup()
        err = ErrorState(np.eye(3), np.zeros(3), np.zeros(3))
        assert ecl_value(i, p, g, err) == 0.0
        assert ecl_rate_bound(i, p, g, err) == 0.0

    def test_quadratic_scaling_at_identity(self):
        i, p, g = self._setup()
        rng = np.random.default_rng(17)
        eta, xi = rng.normal(size=3), rng.normal(size=3)
        e1 = ecl_value(i, p, g, ErrorState(np.eye(3), eta, xi))
        e2 = ecl_value(i, p, g, ErrorState(np.eye(3), 2 * eta, 2 * xi))
        assert abs(e2 - 4.0 * e1) < 1e-10 * max(1.0, abs(e1))

    def test_rate_bound_unit_error_velocity(self):
        # eta scaled to unit metric norm, no gradient/integral terms
        i, p, g = self._setup()
        eta = np.array([1.0, 0.0, 0.0])
        eta /= np.sqrt(eta @ i @ eta)
        err = ErrorState(np.eye(3), eta, np.zeros(3))
        assert abs(ecl_rate_bound(i, p, g, err) + q_matrix(g)[0, 0]) < 1e-12

    def test_positive_along_certified_run(self, certified_zero_run):
        cfg, traj, metrics = certified_zero_run
        away = metrics.geo_err > 1e-6
        assert (metrics.ecl[away] > 0.0).all()

    def test_monotone_decrease_along_certified_run(self, certified_zero_run):
        _, _, metrics = certified_zero_run
        assert np.diff(metrics.ecl).max() <= 1e-6

    def test_rate_bound_holds_in_certified_region(self, certified_zero_run):
        cfg, traj, metrics = certified_zero_run
        h = cfg.integrator.step
        rate = np.diff(metrics.ecl) / h
        mask = scenario.certified_region_mask(cfg, traj)
        both = mask[:-1] & mask[1:]
        assert both.any()
        assert (rate[both] <= metrics.ecl_bound[:-1][both] + 1e-4).all()

    def test_ecl_value_consistent_with_run_series(self, certified_zero_run):
        cfg, traj, metrics = certified_zero_run
        i = cfg.plant.params.body_inertia
        for k in (0, 777, 20000):
            e = traj.R_d[k] @ traj.R[k].T
            eta = traj.R[k] @ (traj.Omega_d[k] - traj.Omega[k])
            err = ErrorState(e, eta, traj.xi_I[k])
            assert abs(ecl_value(i, cfg.weights, cfg.gains, err)
                       - metrics.ecl[k]) < 1e-10
            assert abs(ecl_rate_bound(i, cfg.weights, cfg.gains, err)
                       - metrics.ecl_bound[k]) < 1e-10
