"""Linearized-flow tests: identities, tracking, tangent convergence."""
from __future__ import annotations

import numpy as np
import pytest

import burgers_hilbert.spectral_core as sc
from burgers_hilbert.linearized import (
    cosimulate,
    linearized_energy,
    linearized_normal_form,
    linearized_rhs,
)
from burgers_hilbert.solver import EvolutionConfig, rhs, simulate
from conftest import random_trig

N = 256


class TestLinearizedRhs:
    def test_zero_background(self, rng):
        w = sc.random_band_limited(N, rng)
        out = linearized_rhs(sc.GridField(n=N, values=np.zeros(N)), w)
        expect = sc.hilbert(w)
        assert np.max(np.abs(out.values - expect.values)) <= 1e-13

    def test_zero_perturbation(self, rng):
        u = sc.random_band_limited(N, rng)
        out = linearized_rhs(u, sc.GridField(n=N, values=np.zeros(N)))
        assert np.max(np.abs(out.values)) == 0.0

    def test_ux_solves_linearization(self, rng):
        # Differentiating the equation in x shows w = u_x is a solution,
        # so the linearized rhs at w = u_x equals d/dx of the full rhs.
        u = sc.random_band_limited(N, rng, amplitude=0.5)
        cfg = EvolutionConfig(n=N, hilbert_term=True)
        lhs = linearized_rhs(u, sc.derivative(u, 1))
        expect = sc.derivative(rhs(u, cfg), 1)
        scale = sc.max_abs(expect)
        assert np.max(np.abs(lhs.values - expect.values)) <= 1e-11 * max(scale, 1.0)


class TestLinearizedNormalForm:
    def test_zero_background(self, rng):
        w = sc.random_band_limited(N, rng)
        out = linearized_normal_form(sc.GridField(n=N, values=np.zeros(N)), w)
        assert np.max(np.abs(out.values - w.values)) <= 1e-14

    def test_matches_full_normal_form_shape(self, rng):
        # With w = u the correction is |d/dx|(Hu . Hu); cross-check against
        # the equivalent form H d/dx (Hu . Hu).
        u = sc.random_band_limited(N, rng)
        q = linearized_normal_form(u, u)
        prod = sc.multiply_dealiased(sc.hilbert(u), sc.hilbert(u), pad=2.0)
        expect = sc.hilbert(sc.derivative(prod, 1))
        assert np.max(np.abs(q.values - u.values - expect.values)) <= 1e-12

    def test_bilinearity(self, rng):
        u = sc.random_band_limited(N, rng)
        w = sc.random_band_limited(N, rng)
        a, b = 0.5, 0.25
        ua = sc.GridField(n=N, values=a * u.values)
        wb = sc.GridField(n=N, values=b * w.values)
        full = linearized_normal_form(u, w).values - w.values
        scaled = linearized_normal_form(ua, wb).values - wb.values
        assert np.max(np.abs(scaled - a * b * full)) <= 1e-12 * np.max(np.abs(full))


class TestLinearizedEnergy:
    def test_zero_background(self, rng):
        w = sc.random_band_limited(N, rng)
        rep = linearized_energy(sc.GridField(n=N, values=np.zeros(N)), w)
        l2 = sc.l2_norm(w) ** 2
        assert rep.form_a == pytest.approx(l2, rel=1e-12)
        assert rep.form_b == pytest.approx(l2, rel=1e-12)

    def test_single_mode_quadrature_value(self):
        # u = a cos x, w = cos 2x: the cross terms integrate to zero and
        # both forms equal pi exactly.
        x = sc.grid(N)
        u = sc.GridField(n=N, values=0.3 * np.cos(x))
        w = sc.GridField(n=N, values=np.cos(2 * x))
        rep = linearized_energy(u, w)
        assert rep.form_a == pytest.approx(np.pi, rel=1e-12)
        assert rep.form_b == pytest.approx(np.pi, rel=1e-12)

    def test_forms_agree_on_random_fields(self, rng):
        for _ in range(10):
            u = sc.random_band_limited(N, rng)
            w = sc.random_band_limited(N, rng)
            rep = linearized_energy(u, w)
            assert abs(rep.form_a - rep.form_b) <= 1e-10 * rep.l2

    def test_oracle_value_two_mode(self, rng):
        # Exact coefficient-algebra oracle for a case with coupling.
        u_tp = random_trig(rng, kmax=4)
        w_tp = random_trig(rng, kmax=4)
        u, w = u_tp.sample(N), w_tp.sample(N)
        rep = linearized_energy(u, w)
        absw = w_tp.derivative().hilbert()
        expect_a = (w_tp * w_tp).integral() \
            + 2.0 * (absw * u_tp.hilbert() * w_tp.hilbert()).integral()
        assert rep.form_a == pytest.approx(expect_a, rel=1e-11)

    def test_linear_interpolation_in_background(self, rng):
        # E_lin is affine in u: the correction doubles when u doubles.
        u = sc.random_band_limited(N, rng)
        w = sc.random_band_limited(N, rng)
        rep1 = linearized_energy(u, w)
        rep2 = linearized_energy(sc.GridField(n=N, values=2.0 * u.values), w)
        corr1 = rep1.form_a - rep1.l2
        corr2 = rep2.form_a - rep2.l2
        assert corr2 == pytest.approx(2.0 * corr1, rel=1e-11)

    def test_equivalence_constant_recorded(self, rng):
        worst = 0.0
        for _ in range(100):
            u = sc.random_band_limited(N, rng)
            w = sc.random_band_limited(N, rng)
            hux = sc.max_abs(sc.hilbert(sc.derivative(u, 1)))
            rep = linearized_energy(u, w)
            if hux > 0 and rep.l2 > 0:
                worst = max(worst, abs(rep.form_a / rep.l2 - 1.0) / hux)
        assert np.isfinite(worst) and worst > 0.0
        # recorded constant is O(1); equivalence would fail if it blew up
        assert worst < 10.0


class TestCosimulate:
    def test_zero_background_rotation(self, rng):
        w0 = sc.random_band_limited(N, rng)
        u0 = sc.GridField(n=N, values=np.zeros(N))
        cfg = EvolutionConfig(n=N, t_max=2 * np.pi, sample_dt=np.pi / 4)
        final, verdict = cosimulate(u0, w0, cfg)
        assert not verdict.broke_down
        assert np.max(np.abs(final.w.values - w0.values)) <= 1e-9

    def test_tracks_derivative_of_background(self):
        # w0 = d/dx u0 stays equal to d/dx u(t); both runs share the fixed
        # step sequence so discretization errors track too.
        eps = 0.1
        n = N
        u0 = sc.GridField(n=n, values=eps * np.sin(sc.grid(n)))
        w0 = sc.derivative(u0, 1)
        cfg = EvolutionConfig(n=n, hilbert_term=True, t_max=1.0,
                              sample_dt=0.25, dt_fixed=0.005)
        final, verdict = cosimulate(u0, w0, cfg)
        assert not verdict.broke_down
        u_run, _ = simulate(u0, cfg)
        expect = sc.derivative(u_run.u, 1)
        err = np.max(np.abs(final.w.values - expect.values))
        assert err <= 1e-6 * max(sc.max_abs(expect), 1e-30)

    def test_tangent_convergence(self):
        # (u_2 - u_1)/delta converges to w at first order in delta.
        eps, n, t_end = 0.1, N, 1.0
        x = sc.grid(n)
        u0 = sc.GridField(n=n, values=eps * np.sin(x))
        w0 = sc.GridField(n=n, values=np.cos(2 * x))
        cfg = EvolutionConfig(n=n, hilbert_term=True, t_max=t_end,
                              sample_dt=0.5, dt_fixed=0.005)
        lin_final, _ = cosimulate(u0, w0, cfg)
        base, _ = simulate(u0, cfg)
        errors = []
        deltas = [1e-2, 1e-3, 1e-4]
        for delta in deltas:
            u0p = sc.GridField(n=n, values=u0.values + delta * w0.values)
            pert, _ = simulate(u0p, cfg)
            diff = (pert.u.values - base.u.values) / delta
            errors.append(float(np.sqrt(np.mean((diff - lin_final.w.values) ** 2))))
        slope = np.polyfit(np.log(deltas), np.log(errors), 1)[0]
        assert slope >= 0.9

    def test_background_breakdown_ends_run(self):
        eps = 0.4
        n = 512
        u0 = sc.GridField(n=n, values=eps * np.sin(sc.grid(n)))
        w0 = sc.GridField(n=n, values=np.cos(sc.grid(n)))
        cfg = EvolutionConfig(n=n, hilbert_term=False, t_max=5.0,
                              sample_dt=0.05)
        _, verdict = cosimulate(u0, w0, cfg)
        assert verdict.broke_down
        assert verdict.t_break < 1.1 / eps

    def test_lin_reports_in_stream(self, rng):
        u0 = sc.GridField(n=64, values=0.05 * np.sin(sc.grid(64)))
        w0 = sc.GridField(n=64, values=np.cos(2 * sc.grid(64)))
        cfg = EvolutionConfig(n=64, t_max=0.5, sample_dt=0.1)
        recs = []
        cosimulate(u0, w0, cfg, recs.append)
        assert len(recs) == 6
        assert all(r.lin is not None for r in recs)
        assert recs[0].lin.l2 == pytest.approx(np.pi, rel=1e-12)
