"""Shared helpers: analytic trig-polynomial fields used as independent oracles.

Oracle fields are built directly from cos/sin evaluations (never through the
package's FFT path), so comparisons against the spectral operators are
meaningful.
"""
from __future__ import annotations

import numpy as np
import pytest

from burgers_hilbert.spectral_core import GridField, grid


class TrigPoly:
    """A real trig polynomial sum_k a_k cos(kx) + b_k sin(kx), k >= 1.

    Carries its own exact Hilbert transform, derivatives, and products via
    coefficient algebra, independent of any FFT.
    """

    def __init__(self, cos: dict[int, float] | None = None,
                 sin: dict[int, float] | None = None, const: float = 0.0):
        self.cos = {k: v for k, v in (cos or {}).items() if v != 0.0}
        self.sin = {k: v for k, v in (sin or {}).items() if v != 0.0}
        self.const = const

    def sample(self, n: int) -> GridField:
        x = grid(n)
        vals = np.full(n, self.const)
        for k, a in self.cos.items():
            vals = vals + a * np.cos(k * x)
        for k, b in self.sin.items():
            vals = vals + b * np.sin(k * x)
        return GridField(n=n, values=vals)

    def sample_at(self, x: np.ndarray) -> np.ndarray:
        vals = np.full_like(x, self.const)
        for k, a in self.cos.items():
            vals = vals + a * np.cos(k * x)
        for k, b in self.sin.items():
            vals = vals + b * np.sin(k * x)
        return vals

    def hilbert(self) -> "TrigPoly":
        # H cos(kx) = sin(kx), H sin(kx) = -cos(kx), H const = 0.
        return TrigPoly(cos={k: -b for k, b in self.sin.items()},
                        sin={k: a for k, a in self.cos.items()})

    def derivative(self) -> "TrigPoly":
        return TrigPoly(cos={k: k * b for k, b in self.sin.items()},
                        sin={k: -k * a for k, a in self.cos.items()})

    def __mul__(self, other: "TrigPoly") -> "TrigPoly":
        # Convert to complex exponential coefficients, convolve, convert back.
        ca = self._complex()
        cb = other._complex()
        out: dict[int, complex] = {}
        for ka, va in ca.items():
            for kb, vb in cb.items():
                out[ka + kb] = out.get(ka + kb, 0.0) + va * vb
        return TrigPoly._from_complex(out)

    def _complex(self) -> dict[int, complex]:
        c: dict[int, complex] = {}
        if self.const != 0.0:
            c[0] = complex(self.const)
        for k, a in self.cos.items():
            c[k] = c.get(k, 0.0) + a / 2.0
            c[-k] = c.get(-k, 0.0) + a / 2.0
        for k, b in self.sin.items():
            c[k] = c.get(k, 0.0) + b / 2j
            c[-k] = c.get(-k, 0.0) - b / 2j
        return c

    @staticmethod
    def _from_complex(c: dict[int, complex]) -> "TrigPoly":
        cos: dict[int, float] = {}
        sin: dict[int, float] = {}
        const = float(c.get(0, 0.0).real)
        for k, v in c.items():
            if k <= 0:
                continue
            cos[k] = float((v + c.get(-k, 0.0)).real)
            sin[k] = float((v - c.get(-k, 0.0)).imag * -1.0)
        return TrigPoly(cos=cos, sin=sin, const=const)

    def integral(self) -> float:
        """Exact integral over one period."""
        return 2.0 * np.pi * self.const


def random_trig(rng: np.random.Generator, kmax: int = 8,
                amplitude: float = 1.0) -> TrigPoly:
    """Random band-limited trig polynomial with decaying coefficients."""
    cos = {}
    sin = {}
    for k in range(1, kmax + 1):
        scale = amplitude * (1.0 + k * k) ** -1.0
        cos[k] = scale * rng.uniform(-1.0, 1.0)
        sin[k] = scale * rng.uniform(-1.0, 1.0)
    return TrigPoly(cos=cos, sin=sin)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260810)
