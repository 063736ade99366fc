"""Spectral operators on uniform periodic grids."""

from __future__ import annotations

import numpy as np
from scipy.signal import resample as _fft_resample

TWO_PI = 2.0 * np.pi

_NODES: dict[int, np.ndarray] = {}
_NODE_MEAN: dict[int, float] = {}
_MULT: dict[tuple[int, int], np.ndarray] = {}
_DENSE: dict[int, np.ndarray] = {}
# below this size one BLAS matvec beats the FFT round trip
_DENSE_LIMIT = 256


def nodes(m: int) -> np.ndarray:
    """Parameter nodes u_j = 2 pi j / m (cached, treat as read-only)."""
    u = _NODES.get(m)
    if u is None:
        u = TWO_PI * np.arange(m) / m
        u.setflags(write=False)
        _NODES[m] = u
    return u


def node_mean(m: int) -> float:
    """Mean of the parameter nodes (cached)."""
    mean = _NODE_MEAN.get(m)
    if mean is None:
        mean = float(nodes(m).mean())
        _NODE_MEAN[m] = mean
    return mean


def _multiplier(m: int, order: int) -> np.ndarray:
    key = (m, order)
    mult = _MULT.get(key)
    if mult is None:
        k = np.fft.rfftfreq(m, d=1.0 / m)  # integer wavenumbers 0..m/2
        if order == 1:
            mult = 1j * k
            if m % 2 == 0:
                # odd derivative of the unresolved Nyquist mode is dropped
                mult[-1] = 0.0
        elif order == 2:
            mult = -(k * k) + 0.0j
        else:
            raise ValueError("derivative order must be 1 or 2")
        mult.setflags(write=False)
        _MULT[key] = mult
    return mult


def _shape(mult: np.ndarray, ndim: int) -> np.ndarray:
    if ndim > 1:
        return mult.reshape((-1,) + (1,) * (ndim - 1))
    return mult


def _dense_pair(m: int) -> np.ndarray:
    """Stacked (2m, m) matrix applying the order-1 and order-2 FFT
    differentiation pipeline to small grids; built once per size by
    pushing the identity through the transforms, so it is the same
    linear map up to matvec rounding."""
    d = _DENSE.get(m)
    if d is None:
        spec = np.fft.rfft(np.eye(m), axis=0)
        d1 = np.fft.irfft(spec * _multiplier(m, 1)[:, None], n=m, axis=0)
        d2 = np.fft.irfft(spec * _multiplier(m, 2)[:, None], n=m, axis=0)
        d = np.ascontiguousarray(np.vstack([d1, d2]))
        d.setflags(write=False)
        _DENSE[m] = d
    return d


def _centered(values: np.ndarray) -> np.ndarray:
    # removing the mean keeps constants annihilated exactly, matching the
    # FFT route where the k = 0 multiplier is exactly zero
    if values.ndim == 1:
        return values - float(np.add.reduce(values)) / values.shape[0]
    return values - np.add.reduce(values, axis=0) / values.shape[0]


def diff(values: np.ndarray, order: int = 1) -> np.ndarray:
    """Differentiate periodic samples along axis 0 (spectral accuracy)."""
    values = np.asarray(values, dtype=float)
    m = values.shape[0]
    if m <= _DENSE_LIMIT and values.ndim <= 2 and order in (1, 2):
        d = _dense_pair(m)
        block = d[:m] if order == 1 else d[m:]
        return block @ _centered(values)
    spec = np.fft.rfft(values, axis=0)
    spec = spec * _shape(_multiplier(m, order), values.ndim)
    return np.fft.irfft(spec, n=m, axis=0)


def diff12(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """First and second derivative in one pass.

    Small grids go through one stacked matrix product, large grids through
    one forward FFT with a batched inverse; both orders always come from
    the same pipeline as diff, so the pair agrees with separate calls.
    """
    values = np.asarray(values, dtype=float)
    m = values.shape[0]
    if m <= _DENSE_LIMIT and values.ndim <= 2:
        both = _dense_pair(m) @ _centered(values)
        return both[:m], both[m:]
    flat = values.reshape(m, -1)
    cols = flat.shape[1]
    spec = np.fft.rfft(flat, axis=0)
    packed = np.empty((spec.shape[0], 2 * cols), dtype=complex)
    np.multiply(spec, _multiplier(m, 1)[:, None], out=packed[:, :cols])
    np.multiply(spec, _multiplier(m, 2)[:, None], out=packed[:, cols:])
    both = np.fft.irfft(packed, n=m, axis=0)
    d1 = both[:, :cols].reshape(values.shape)
    d2 = both[:, cols:].reshape(values.shape)
    return d1, d2


def resample_periodic(values: np.ndarray, m_new: int) -> np.ndarray:
    """Trigonometric interpolation onto m_new uniform nodes (axis 0).

    Exact for data bandlimited below the coarser grid's Nyquist mode.
    """
    return _fft_resample(np.asarray(values, dtype=float), int(m_new), axis=0)


def centered_dt(y_prev, y_mid, y_next, h_minus: float, h_plus: float):
    """Second-order derivative at the middle of three samples with unequal
    spacings h_minus = t_mid - t_prev and h_plus = t_next - t_mid."""
    if h_minus <= 0.0 or h_plus <= 0.0:
        raise ValueError("time spacings must be positive")
    a = -h_plus / (h_minus * (h_minus + h_plus))
    b = (h_plus - h_minus) / (h_minus * h_plus)
    c = h_minus / (h_plus * (h_minus + h_plus))
    return a * np.asarray(y_prev) + b * np.asarray(y_mid) + c * np.asarray(y_next)
