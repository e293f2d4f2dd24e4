"""Discrete Fourier fields on the 2pi-periodic torus and their operators.

Conventions used throughout the package:

* Grids are uniform, ``x_j = 2 pi j / n`` with ``n`` a power of two.
* Fourier coefficients follow ``c_k = (1/2pi) int f(x) exp(-i k x) dx``,
  so ``f(x) = sum_k c_k exp(i k x)``.  Discretely ``c_k = rfft(f)[k] / n``.
* ``sobolev_norm`` is coefficient-normalized, ``(sum (1+k^2)^s |c_k|^2)^(1/2)``;
  it differs from the ``int dx`` normalization by a fixed factor ``sqrt(2pi)``.
  Quadrature-normalized inner products are provided by :func:`inner_product`.
* The Nyquist mode ``k = n/2`` is sign-ambiguous on the grid.  Every
  odd-symbol multiplier (``d/dx``, the Hilbert transform) zeroes it, the
  dealiased product drops it, and band-limited initial data excludes it.
* ``sgn(0) = 0`` in the Hilbert symbol, so the mean is annihilated.

All operations are pure functions; field values are marked read-only after
construction and are safe to share across threads.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class ConfigurationError(ValueError):
    """Invalid grid size, option value, or run configuration."""


def _require_power_of_two(n: int) -> None:
    if n < 16 or (n & (n - 1)) != 0:
        raise ConfigurationError(f"grid size must be a power of two >= 16, got {n}")


@dataclass(frozen=True)
class GridField:
    """Real samples of a periodic function on the uniform grid.

    Parameters
    ----------
    n : grid size, power of two, >= 16.
    values : the ``n`` real samples ``f(x_j)``.
    """

    n: int
    values: np.ndarray

    def __post_init__(self) -> None:
        _require_power_of_two(self.n)
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.n,):
            raise ConfigurationError(
                f"expected {self.n} samples, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ConfigurationError("field values must be finite")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class SpectrumField:
    """Complex Fourier coefficients ``c_k`` for ``k = -n/2+1 .. n/2``.

    Stored in standard FFT order (``k = 0, 1, .., n/2, -n/2+1, .., -1``);
    the single ``k = n/2`` slot is the Nyquist coefficient, treated as real.
    """

    n: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        _require_power_of_two(self.n)
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.shape != (self.n,):
            raise ConfigurationError(
                f"expected {self.n} coefficients, got shape {coeffs.shape}")
        coeffs = coeffs.copy()
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    def hermitian_defect(self) -> float:
        """Max deviation from ``c_{-k} = conj(c_k)`` plus Im of c_0, c_{n/2}."""
        c = self.coeffs
        defect = np.max(np.abs(c[1:] - np.conj(c[1:][::-1])))
        return max(defect, abs(c[0].imag), abs(c[self.n // 2].imag))


def grid(n: int) -> np.ndarray:
    """Grid points ``x_j = 2 pi j / n``."""
    _require_power_of_two(n)
    return 2.0 * np.pi * np.arange(n) / n


def _raw_field(n: int, values: np.ndarray) -> GridField:
    """Construct a GridField without validation (non-finite solver states)."""
    f = GridField.__new__(GridField)
    object.__setattr__(f, "n", n)
    object.__setattr__(f, "values", values)
    return f


def field_from_values(values: np.ndarray) -> GridField:
    values = np.asarray(values, dtype=float)
    return GridField(n=values.shape[0], values=values)


# ----------------------------------------------------------------------------
# Half-spectrum (rfft) helpers.  These back both the public operators and the
# solver hot loop; coefficients carry numpy's unnormalized rfft scale.

@lru_cache(maxsize=None)
def _wavenumbers(n: int) -> np.ndarray:
    k = np.arange(n // 2 + 1, dtype=float)
    k.setflags(write=False)
    return k


def _hilbert_half(c: np.ndarray) -> np.ndarray:
    """Apply -i sgn(k); sgn(0) = 0 and the Nyquist slot is zeroed."""
    out = -1j * c
    out[0] = 0.0
    out[-1] = 0.0
    return out


def _derivative_half(c: np.ndarray, n: int, m: int) -> np.ndarray:
    out = (1j * _wavenumbers(n)) ** m * c
    if m % 2 == 1:
        out[-1] = 0.0
    return out


def _product_half(a: np.ndarray, b: np.ndarray, n: int, pad: float) -> np.ndarray:
    """Alias-free pointwise product via zero-padded transforms.

    Returns the product truncated to the ``n``-grid band with the Nyquist
    slot zeroed.  ``pad = 1.5`` is alias-free for Nyquist-free inputs;
    ``pad = 2.0`` is alias-free for any grid fields.
    """
    m = int(round(n * pad))
    half = m // 2 + 1
    pa = np.zeros(half, dtype=complex)
    pb = np.zeros(half, dtype=complex)
    pa[: n // 2 + 1] = a
    pb[: n // 2 + 1] = b
    pa[n // 2] *= 0.5  # a stored Nyquist coefficient splits over +-n/2
    pb[n // 2] *= 0.5
    fa = np.fft.irfft(pa, m) * (m / n)
    fb = np.fft.irfft(pb, m) * (m / n)
    out = np.fft.rfft(fa * fb)[: n // 2 + 1] * (n / m)
    out[-1] = 0.0
    return out


def _tail_fraction(c: np.ndarray, n: int) -> float:
    """Energy fraction carried by the top third of modes, ``|k| >= n/3``."""
    e = np.abs(c) ** 2
    e[1:-1] *= 2.0
    total = float(np.sum(e[1:]))
    if total <= 0.0:
        return 0.0
    return float(np.sum(e[n // 3:]) / total)


# ----------------------------------------------------------------------------
# Public operators.

def to_spectrum(f: GridField) -> SpectrumField:
    """Forward transform under the ``c_k = (1/2pi) int f exp(-ikx) dx`` convention."""
    return SpectrumField(n=f.n, coeffs=np.fft.fft(f.values) / f.n)


def from_spectrum(s: SpectrumField) -> GridField:
    """Inverse transform; exact inverse of :func:`to_spectrum` up to rounding."""
    return GridField(n=s.n, values=np.fft.ifft(s.coeffs * s.n).real)


def hilbert(f: GridField) -> GridField:
    """Hilbert transform, Fourier multiplier ``-i sgn(k)``; output has zero mean."""
    c = np.fft.rfft(f.values)
    return GridField(n=f.n, values=np.fft.irfft(_hilbert_half(c), f.n))


def derivative(f: GridField, m: int = 1) -> GridField:
    """m-th spatial derivative, multiplier ``(ik)^m``; Nyquist zeroed for odd m."""
    if m < 0:
        raise ConfigurationError("derivative order must be nonnegative")
    c = np.fft.rfft(f.values)
    return GridField(n=f.n, values=np.fft.irfft(_derivative_half(c, f.n, m), f.n))


def abs_derivative(f: GridField, s: float) -> GridField:
    """Fractional derivative ``|d/dx|^s``, multiplier ``|k|^s``.

    ``s = 0`` is the identity (mean included).  For ``s > 0`` the Nyquist
    slot is zeroed so that ``|d/dx|^1 = H o d/dx`` holds exactly.
    """
    if s < 0:
        raise ConfigurationError("fractional order must be nonnegative")
    c = np.fft.rfft(f.values)
    if s == 0:
        return GridField(n=f.n, values=f.values.copy())
    out = _wavenumbers(f.n) ** s * c
    out[-1] = 0.0
    return GridField(n=f.n, values=np.fft.irfft(out, f.n))


def multiply_dealiased(f: GridField, g: GridField, pad: float = 1.5) -> GridField:
    """Pointwise product computed alias-free by zero padding.

    The product is formed on a grid of ``round(pad * n)`` points and
    truncated back to the ``n``-grid band (Nyquist dropped).
    """
    if f.n != g.n:
        raise ConfigurationError("fields must share the same grid")
    a = np.fft.rfft(f.values)
    b = np.fft.rfft(g.values)
    return GridField(n=f.n, values=np.fft.irfft(_product_half(a, b, f.n, pad), f.n))


def sobolev_norm(f: GridField, s: float = 0.0) -> float:
    """Coefficient-normalized Sobolev norm ``(sum (1+k^2)^s |c_k|^2)^(1/2)``."""
    if s < 0:
        raise ConfigurationError("Sobolev index must be nonnegative")
    c = np.fft.rfft(f.values) / f.n
    w = np.ones(f.n // 2 + 1)
    w[1:-1] = 2.0
    k = _wavenumbers(f.n)
    return float(np.sqrt(np.sum(w * (1.0 + k * k) ** s * np.abs(c) ** 2)))


def max_abs(f: GridField) -> float:
    """Maximum absolute sample value (discrete L-infinity norm)."""
    return float(np.max(np.abs(f.values)))


def mean(f: GridField) -> float:
    return float(np.mean(f.values))


def inner_product(f: GridField, g: GridField) -> float:
    """Quadrature inner product ``(2pi/n) sum f_j g_j``.

    Exact for products whose true spectrum has no content aliasing onto
    mode zero, which holds for any pair of Nyquist-free grid fields.
    """
    if f.n != g.n:
        raise ConfigurationError("fields must share the same grid")
    return float(2.0 * np.pi / f.n * np.dot(f.values, g.values))


def l2_norm(f: GridField) -> float:
    """Quadrature L2 norm ``(int f^2 dx)^(1/2)``."""
    return float(np.sqrt(max(inner_product(f, f), 0.0)))


def commutator_H(u: GridField, f: GridField, pad: float = 2.0) -> GridField:
    """Commutator ``[H, u] f = H[u f] - u H[f]`` with alias-free products.

    Vanishes identically whenever the spectral support of ``f`` lies
    strictly above that of ``u`` in ``|k|``.
    """
    if u.n != f.n:
        raise ConfigurationError("fields must share the same grid")
    a = np.fft.rfft(u.values)
    b = np.fft.rfft(f.values)
    first = _hilbert_half(_product_half(a, b, u.n, pad))
    second = _product_half(a, _hilbert_half(b), u.n, pad)
    return GridField(n=u.n, values=np.fft.irfft(first - second, u.n))


def truncate_band(f: GridField, kmax: int) -> GridField:
    """Zero every mode with ``|k| > kmax``."""
    c = np.fft.rfft(f.values)
    c[kmax + 1:] = 0.0
    return GridField(n=f.n, values=np.fft.irfft(c, f.n))


def resample(f: GridField, n_new: int) -> GridField:
    """Spectrally exact resampling onto an ``n_new``-point grid.

    Used by the oversampled quadrature oracles; refinement never changes
    the represented trig polynomial.
    """
    _require_power_of_two(n_new)
    c = np.fft.rfft(f.values) / f.n
    half = np.zeros(n_new // 2 + 1, dtype=complex)
    m = min(f.n // 2, n_new // 2)
    half[: m + 1] = c[: m + 1]
    if n_new > f.n:
        half[f.n // 2] *= 0.5  # split the stored Nyquist over +-n/2
    return GridField(n=n_new, values=np.fft.irfft(half * n_new, n_new))


def random_band_limited(n: int, rng: np.random.Generator,
                        kmax: int | None = None,
                        amplitude: float = 1.0) -> GridField:
    """Seeded random test field with modes ``1 .. kmax`` (default ``n/8``).

    Coefficient moduli follow ``|c_k| = amplitude * (1+k^2)^(-1)`` with
    independent uniform phases.
    """
    if kmax is None:
        kmax = n // 8
    kmax = min(kmax, n // 2 - 1)
    half = np.zeros(n // 2 + 1, dtype=complex)
    k = np.arange(1, kmax + 1, dtype=float)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=kmax)
    half[1: kmax + 1] = amplitude * (1.0 + k * k) ** -1.0 * np.exp(1j * phases)
    return GridField(n=n, values=np.fft.irfft(half * n, n))
