"""Anti-aliased resampling, length unification, and trim/frame preprocessing.

All operations are pure functions on immutable inputs. Downsampling applies
a linear-phase windowed-sinc low-pass filter before re-timing the signal, so
content above the new Nyquist frequency is removed instead of folding back.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Waveform:
    """A multi-channel time series with an explicit sampling rate.

    ``data`` is (channels, samples), float64. Units are m/s^2 for real
    accelerometer data and unitless for synthetic signals.
    """

    rate_hz: float
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.rate_hz <= 0:
            raise ValueError(f"rate_hz must be positive, got {self.rate_hz}")
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError("waveform data must be (channels, samples)")
        object.__setattr__(self, "data", arr)

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]

    @property
    def duration_s(self) -> float:
        return self.n_samples / self.rate_hz


@dataclass(frozen=True)
class FirFilter:
    """Odd-length symmetric FIR taps with unit DC gain."""

    taps: np.ndarray
    nominal_cutoff_hz: float
    design_rate_hz: float

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=np.float64)
        if taps.ndim != 1 or taps.size % 2 == 0:
            raise ValueError("taps must be a 1-D odd-length sequence")
        if abs(taps.sum() - 1.0) > 1e-9:
            raise ValueError("taps must sum to 1 (unit DC gain)")
        object.__setattr__(self, "taps", taps)


def design_fir_lowpass(cutoff_hz: float, rate_hz: float,
                       n_taps: int = 63) -> FirFilter:
    """Windowed-sinc low-pass design with a Hamming window.

    Coefficients are normalized to unit sum, so constant signals pass
    through exactly.
    """
    if not 0 < cutoff_hz < rate_hz / 2:
        raise ValueError(
            f"cutoff {cutoff_hz} Hz must lie in (0, {rate_hz / 2}) Hz")
    if n_taps < 3 or n_taps % 2 == 0:
        raise ValueError("n_taps must be odd and >= 3")
    m = (n_taps - 1) // 2
    i = np.arange(n_taps)
    fc = cutoff_hz / rate_hz            # cycles per sample
    ideal = 2.0 * fc * np.sinc(2.0 * fc * (i - m))
    window = 0.54 - 0.46 * np.cos(2.0 * np.pi * i / (n_taps - 1))
    taps = ideal * window
    taps /= taps.sum()
    return FirFilter(taps=taps, nominal_cutoff_hz=float(cutoff_hz),
                     design_rate_hz=float(rate_hz))


def apply_fir(wave: Waveform, fir: FirFilter) -> Waveform:
    """Zero-phase filtering: reflect-pad both ends, correlate with the taps.

    Output has the same length and rate as the input.
    """
    if fir.design_rate_hz != wave.rate_hz:
        raise ValueError(
            f"filter designed at {fir.design_rate_hz} Hz cannot be applied "
            f"to a {wave.rate_hz} Hz waveform")
    if wave.n_samples < 1:
        raise ValueError("cannot filter an empty waveform")
    m = (fir.taps.size - 1) // 2
    out = np.empty_like(wave.data)
    for c in range(wave.n_channels):
        padded = np.pad(wave.data[c], m, mode="reflect")
        # symmetric taps: convolution equals correlation, centered
        out[c] = np.convolve(padded, fir.taps, mode="valid")
    return Waveform(rate_hz=wave.rate_hz, data=out)


def resample(wave: Waveform, dst_rate_hz: float,
             anti_alias: bool = True) -> Waveform:
    """Change the sampling rate; low-pass filter first when decimating.

    Downsampling filters at 0.45 * dst_rate before evaluating the signal at
    the target instants via linear interpolation; upsampling (or equal rate)
    interpolates only. Output length is floor((len-1) * dst/src) + 1.

    ``anti_alias=False`` bypasses the filter; it exists only so tests can
    demonstrate the aliasing the filter prevents.
    """
    if dst_rate_hz <= 0:
        raise ValueError("destination rate must be positive")
    if wave.n_samples == 0:
        raise ValueError("cannot resample an empty waveform")
    src = wave.rate_hz
    filtered = wave
    if dst_rate_hz < src and anti_alias:
        fir = design_fir_lowpass(0.45 * dst_rate_hz, src)
        filtered = apply_fir(wave, fir)
    ratio = dst_rate_hz / src
    n_out = int(np.floor((wave.n_samples - 1) * ratio)) + 1
    positions = np.arange(n_out) * (src / dst_rate_hz)
    idx = np.arange(wave.n_samples)
    out = np.empty((wave.n_channels, n_out))
    for c in range(wave.n_channels):
        out[c] = np.interp(positions, idx, filtered.data[c])
    return Waveform(rate_hz=float(dst_rate_hz), data=out)


def interpolate_to_length(wave: Waveform, n: int = 256) -> Waveform:
    """Linearly interpolate each channel onto ``n`` equally spaced positions
    spanning the original index range; endpoints are preserved exactly."""
    if wave.n_samples < 2:
        raise ValueError("need at least 2 samples to interpolate")
    if n < 2:
        raise ValueError("target length must be >= 2")
    if wave.n_samples == n:
        return Waveform(rate_hz=wave.rate_hz, data=wave.data.copy())
    positions = np.linspace(0.0, wave.n_samples - 1, n)
    idx = np.arange(wave.n_samples)
    out = np.empty((wave.n_channels, n))
    for c in range(wave.n_channels):
        out[c] = np.interp(positions, idx, wave.data[c])
    return Waveform(rate_hz=wave.rate_hz, data=out)


def trim_and_frame(wave: Waveform, trim_s: float = 5.0, frame: int = 256,
                   stride: int = 256) -> list[Waveform]:
    """Drop ``trim_s`` seconds from each end, then cut consecutive windows.

    Returns an empty list (not an error) when too little data remains;
    the trailing remainder shorter than ``frame`` is discarded.
    """
    if frame < 1 or stride < 1:
        raise ValueError("frame and stride must be positive")
    n_trim = int(round(trim_s * wave.rate_hz))
    body = wave.data[:, n_trim:wave.n_samples - n_trim] if n_trim else wave.data
    n = body.shape[1]
    if n < frame:
        return []
    count = (n - frame) // stride + 1
    return [Waveform(rate_hz=wave.rate_hz,
                     data=body[:, i * stride:i * stride + frame].copy())
            for i in range(count)]
