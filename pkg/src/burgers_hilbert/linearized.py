"""Linearized flow along a background solution and its modified energy.

The perturbation ``w`` obeys ``w_t + w u_x + u w_x = H[w]``.  Its modified
energy

    E_lin(w) = int w^2 + 2 |d/dx| w . Hu . Hw dx
             = int w^2 - |d/dx| u . (Hw)^2 dx      (integration by parts)

is L2-equivalent with gap ``O(||Hu_x||_inf)`` and drifts quadratically in the
background amplitude, which is what controls differences of solutions over
the long lifespan window.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .records import DiagnosticsRecord
from .solver import (
    BreakdownVerdict,
    EvolutionConfig,
    SolverState,
    _diagnostics,
    _Stepper,
    detect_breakdown,
)
from .spectral_core import (
    ConfigurationError,
    GridField,
    _derivative_half,
    _hilbert_half,
    _product_half,
    _raw_field,
    _tail_fraction,
)

_PAD = 2.0


@dataclass(frozen=True)
class LinearizedState:
    t: float
    u: GridField
    w: GridField


@dataclass(frozen=True)
class LinEnergyReport:
    """Both algebraic forms of E_lin plus the plain L2 energy of w."""

    form_a: float
    form_b: float
    l2: float


def _half(f: GridField) -> np.ndarray:
    return np.fft.rfft(f.values)


def linearized_rhs(u: GridField, w: GridField, pad: float = 1.5) -> GridField:
    """Right-hand side ``-dealiased(w u_x) - dealiased(u w_x) + H w``."""
    if u.n != w.n:
        raise ConfigurationError("fields must share the same grid")
    n = u.n
    uhat, what = _half(u), _half(w)
    ux = _derivative_half(uhat, n, 1)
    wx = _derivative_half(what, n, 1)
    out = (-_product_half(what, ux, n, pad)
           - _product_half(uhat, wx, n, pad)
           + _hilbert_half(what))
    return GridField(n=n, values=np.fft.irfft(out, n))


def linearized_normal_form(u: GridField, w: GridField) -> GridField:
    """``q = w + |d/dx| (Hw . Hu)``; bilinear correction in (u, w)."""
    if u.n != w.n:
        raise ConfigurationError("fields must share the same grid")
    n = u.n
    prod = _product_half(_hilbert_half(_half(w)), _hilbert_half(_half(u)), n, _PAD)
    q = _half(w) + _hilbert_half(_derivative_half(prod, n, 1))
    return GridField(n=n, values=np.fft.irfft(q, n))


def _triple_quadrature(a: np.ndarray, b: np.ndarray, c: np.ndarray, n: int) -> float:
    """Exact ``int a b c dx`` for three band-limited rfft arrays (2n grid)."""
    m = 2 * n
    fields = []
    for h in (a, b, c):
        p = np.zeros(m // 2 + 1, dtype=complex)
        p[: n // 2 + 1] = h
        p[n // 2] *= 0.5
        fields.append(np.fft.irfft(p, m) * (m / n))
    return float(2.0 * np.pi / m * np.sum(fields[0] * fields[1] * fields[2]))


def linearized_energy(u: GridField, w: GridField) -> LinEnergyReport:
    """Evaluate both forms of E_lin; they agree to rounding by construction."""
    if u.n != w.n:
        raise ConfigurationError("fields must share the same grid")
    n = u.n
    uhat, what = _half(u), _half(w)
    hw = _hilbert_half(what)
    w_grid = np.fft.irfft(what, n)
    l2 = float(2.0 * np.pi / n * np.sum(w_grid * w_grid))
    abs_w = _hilbert_half(_derivative_half(what, n, 1))
    abs_u = _hilbert_half(_derivative_half(uhat, n, 1))
    hu = _hilbert_half(uhat)
    form_a = l2 + 2.0 * _triple_quadrature(abs_w, hu, hw, n)
    form_b = l2 - _triple_quadrature(abs_u, hw, hw, n)
    if abs(form_a - form_b) > 1e-10 * max(l2, abs(form_a), abs(form_b)):
        raise FloatingPointError(
            f"integration-by-parts identity violated: {form_a} vs {form_b}")
    return LinEnergyReport(form_a=form_a, form_b=form_b, l2=l2)


def cosimulate(u0: GridField, w0: GridField, cfg: EvolutionConfig,
               sink=None) -> tuple[LinearizedState, BreakdownVerdict]:
    """Advance background and perturbation together with one stepper.

    Both equations share the linear part ``H``, so the integrating factor is
    the same phase rotation.  Records carry the background diagnostics plus
    the per-sample ``LinEnergyReport``.  Breakdown of the background (or a
    non-finite perturbation) ends the run with the verdict.
    """
    if u0.n != cfg.n or w0.n != cfg.n:
        raise ConfigurationError("field resolution does not match the config")
    stepper = _Stepper(cfg)
    n = cfg.n
    uhat = np.fft.rfft(u0.values).astype(complex)
    what = np.fft.rfft(w0.values).astype(complex)
    uhat[n // 3 + 1:] = 0.0
    what[n // 3 + 1:] = 0.0
    u0_slope = float(np.max(np.abs(
        np.fft.irfft(_derivative_half(uhat, n, 1), n))))

    def nw(uh: np.ndarray, wh: np.ndarray) -> np.ndarray:
        if not cfg.nonlinear_term:
            return np.zeros_like(wh)
        ux = _derivative_half(uh, n, 1)
        wx = _derivative_half(wh, n, 1)
        return (-_product_half(wh, ux, n, cfg.dealias_pad)
                - _product_half(uh, wx, n, cfg.dealias_pad))

    def joint_step(uh: np.ndarray, wh: np.ndarray, dt: float):
        e1, e2 = stepper._phases(dt)
        k1u = stepper.nonlinear(uh)
        k1w = nw(uh, wh)
        s1u = e1 * (uh + (0.5 * dt) * k1u)
        s1w = e1 * (wh + (0.5 * dt) * k1w)
        k2u = stepper.nonlinear(s1u)
        k2w = nw(s1u, s1w)
        s2u = e1 * uh + (0.5 * dt) * k2u
        s2w = e1 * wh + (0.5 * dt) * k2w
        k3u = stepper.nonlinear(s2u)
        k3w = nw(s2u, s2w)
        s3u = e2 * uh + dt * (e1 * k3u)
        s3w = e2 * wh + dt * (e1 * k3w)
        k4u = stepper.nonlinear(s3u)
        k4w = nw(s3u, s3w)
        uh_next = e2 * uh + (dt / 6.0) * (e2 * k1u + 2.0 * (e1 * (k2u + k3u)) + k4u)
        wh_next = e2 * wh + (dt / 6.0) * (e2 * k1w + 2.0 * (e1 * (k2w + k3w)) + k4w)
        return uh_next, wh_next

    def make_lin_state(t: float) -> LinearizedState:
        return LinearizedState(
            t=t,
            u=GridField(n=n, values=np.fft.irfft(uhat, n)),
            w=GridField(n=n, values=np.fft.irfft(what, n)))

    def emit(t: float, last_dt: float) -> BreakdownVerdict:
        u = GridField(n=n, values=np.fft.irfft(uhat, n))
        w = GridField(n=n, values=np.fft.irfft(what, n))
        state = SolverState(t=t, u=u, last_dt=last_dt,
                            tail_fraction=_tail_fraction(uhat, n))
        if sink is not None:
            rec = _diagnostics(state, uhat, cfg)
            rec = DiagnosticsRecord(
                t=rec.t, l2_norm=rec.l2_norm, hk_norms=rec.hk_norms,
                max_slope=rec.max_slope, energies=rec.energies,
                lin=linearized_energy(u, w), tail_fraction=rec.tail_fraction,
                dt=rec.dt)
            sink(rec)
        return detect_breakdown(state, u0_slope, cfg)

    t = 0.0
    last_dt = 0.0
    i_sample = 0
    while True:
        verdict = emit(t, last_dt)
        if verdict.broke_down:
            return make_lin_state(t), verdict
        if t >= cfg.t_max - 1e-12:
            return make_lin_state(t), BreakdownVerdict(False, None, "none")
        i_sample += 1
        t_target = min(i_sample * cfg.sample_dt, cfg.t_max)
        while t < t_target - 1e-12:
            dt = min(stepper.cfl_dt(uhat), t_target - t)
            uhat, what = joint_step(uhat, what, dt)
            t += dt
            last_dt = dt
            if not (np.all(np.isfinite(uhat)) and np.all(np.isfinite(what))):
                bad = LinearizedState(t=t, u=_raw_field(n, np.full(n, np.nan)),
                                      w=_raw_field(n, np.full(n, np.nan)))
                return bad, BreakdownVerdict(True, t, "nonfinite")
        t = t_target
