"""Waveform <-> compressed complex-STFT conversions.

The diffusion process operates on amplitude-compressed complex spectrograms:
``c_tilde = beta * |c|**alpha * exp(i*angle(c))``. Analysis/synthesis use a
periodic Hann window; the FFT length may be smaller than the window (the
default is a 254-point FFT inside a 256-sample window), in which case the
FFT frame occupies the centered span of the window and the samples outside
it are dropped. Reconstruction divides by the squared effective window
envelope, which makes the analyze/synthesize round trip exact wherever the
envelope is nonzero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.io import wavfile

RAW = "raw"
COMPRESSED = "compressed"

# Positions where the summed squared window falls below this are left as
# silence instead of being divided (mirrors the usual STFT tiny-floor guard).
_ENVELOPE_FLOOR = 1e-11


@dataclass(frozen=True)
class StftConfig:
    """Analysis/synthesis parameters for the compressed STFT front end."""

    n_fft: int = 254
    window_len: int = 256
    hop: int = 64
    frames: int = 256
    alpha: float = 0.5
    beta: float = 0.15

    def __post_init__(self):
        if self.n_fft < 2:
            raise ValueError(f"n_fft must be >= 2, got {self.n_fft}")
        if self.window_len < 2:
            raise ValueError(f"window_len must be >= 2, got {self.window_len}")
        if not 1 <= self.hop <= self.window_len:
            raise ValueError(
                f"hop must be in [1, window_len], got hop={self.hop} "
                f"window_len={self.window_len}"
            )
        if self.frames < 1:
            raise ValueError(f"frames must be >= 1, got {self.frames}")
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError(
                f"alpha and beta must be positive, got alpha={self.alpha} "
                f"beta={self.beta}"
            )

    @property
    def bins(self) -> int:
        """Frequency bins produced by analysis (n_fft // 2 + 1)."""
        return self.n_fft // 2 + 1

    @property
    def window_samples(self) -> int:
        """Time-domain samples covered by one model input window."""
        return self.frames * self.hop


@dataclass(frozen=True, eq=False)
class Waveform:
    """Mono time-domain signal with its sample rate."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError(f"waveform must be 1-D, got shape {samples.shape}")
        if not np.all(np.isfinite(samples)):
            raise ValueError("waveform contains non-finite samples")
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def duration(self) -> float:
        return len(self) / self.sample_rate


@dataclass(frozen=True, eq=False)
class ComplexSpectrogram:
    """Complex time-frequency array of shape (bins, frames).

    ``domain`` tags whether the magnitudes are raw STFT coefficients or
    amplitude-compressed ones. ``orig_length`` remembers the sample count of
    the analyzed waveform so synthesis can trim its padding; it is None for
    spectrograms that were not produced by :func:`analyze`.
    """

    data: np.ndarray
    domain: str
    config: StftConfig
    orig_length: int | None = None

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.complex128)
        if data.ndim != 2:
            raise ValueError(f"spectrogram must be 2-D, got shape {data.shape}")
        if self.domain not in (RAW, COMPRESSED):
            raise ValueError(f"unknown domain tag {self.domain!r}")
        if data.shape[0] != self.config.bins:
            raise ValueError(
                f"expected {self.config.bins} bins for n_fft={self.config.n_fft}, "
                f"got {data.shape[0]}"
            )
        object.__setattr__(self, "data", data)

    @property
    def bins(self) -> int:
        return self.data.shape[0]

    @property
    def frames(self) -> int:
        return self.data.shape[1]

    def with_data(self, data: np.ndarray, domain: str | None = None) -> "ComplexSpectrogram":
        return ComplexSpectrogram(
            data=data,
            domain=self.domain if domain is None else domain,
            config=self.config,
            orig_length=self.orig_length,
        )


def periodic_hann(length: int) -> np.ndarray:
    n = np.arange(length)
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * n / length)


def _effective_window(cfg: StftConfig) -> tuple[np.ndarray, int]:
    """Window actually applied per frame, and the FFT-frame offset within it.

    When n_fft < window_len only the centered n_fft-sample span of the
    windowed frame reaches the FFT; the effective window is zero outside
    that span so that the overlap-add envelope matches what analysis kept.
    """
    window = periodic_hann(cfg.window_len)
    if cfg.n_fft >= cfg.window_len:
        return window, 0
    offset = (cfg.window_len - cfg.n_fft) // 2
    effective = np.zeros_like(window)
    effective[offset : offset + cfg.n_fft] = window[offset : offset + cfg.n_fft]
    return effective, offset


def _frame_layout(n_samples: int, cfg: StftConfig) -> tuple[int, int, int]:
    """Return (n_frames, pad_left, padded_length) for a signal length."""
    n_frames = -(-n_samples // cfg.hop)  # ceil
    pad_left = (cfg.window_len - cfg.hop) // 2
    padded = (n_frames - 1) * cfg.hop + cfg.window_len
    return n_frames, pad_left, padded


def analyze(waveform: Waveform, cfg: StftConfig) -> ComplexSpectrogram:
    """Forward STFT to a raw complex spectrogram of shape (bins, frames).

    Each frame is hop-aligned; the signal is zero-padded symmetrically so
    that ``frames == ceil(len(waveform) / hop)`` (16384 samples with the
    defaults give exactly 256 frames).
    """
    if len(waveform) == 0:
        raise ValueError("cannot analyze an empty waveform")
    window, offset = _effective_window(cfg)
    n_frames, pad_left, padded_len = _frame_layout(len(waveform), cfg)

    x = np.zeros(padded_len, dtype=np.float64)
    x[pad_left : pad_left + len(waveform)] = waveform.samples

    starts = np.arange(n_frames) * cfg.hop
    frames = x[starts[:, None] + np.arange(cfg.window_len)[None, :]] * window
    if cfg.n_fft >= cfg.window_len:
        core = np.zeros((n_frames, cfg.n_fft), dtype=np.float64)
        pad = (cfg.n_fft - cfg.window_len) // 2
        core[:, pad : pad + cfg.window_len] = frames
    else:
        core = frames[:, offset : offset + cfg.n_fft]
    data = np.fft.rfft(core, n=cfg.n_fft, axis=1).T
    return ComplexSpectrogram(
        data=data, domain=RAW, config=cfg, orig_length=len(waveform)
    )


def synthesize(
    spec: ComplexSpectrogram, cfg: StftConfig | None = None, sample_rate: int = 8000
) -> Waveform:
    """Inverse STFT by windowed overlap-add with envelope normalization.

    If the spectrogram came from :func:`analyze`, its padding is trimmed and
    the output has exactly ``orig_length`` samples; otherwise the raw
    overlap-add span of ``(frames - 1) * hop + window_len`` samples is
    returned (a single frame yields ``window_len`` samples).
    """
    cfg = spec.config if cfg is None else cfg
    if spec.domain != RAW:
        raise ValueError("synthesize expects a raw spectrogram; decompress first")

    window, offset = _effective_window(cfg)
    n_frames = spec.frames
    out_len = (n_frames - 1) * cfg.hop + cfg.window_len
    num = np.zeros(out_len, dtype=np.float64)
    den = np.zeros(out_len, dtype=np.float64)

    core = np.fft.irfft(spec.data.T, n=cfg.n_fft, axis=1)
    frames = np.zeros((n_frames, cfg.window_len), dtype=np.float64)
    if cfg.n_fft >= cfg.window_len:
        pad = (cfg.n_fft - cfg.window_len) // 2
        frames[:] = core[:, pad : pad + cfg.window_len]
    else:
        frames[:, offset : offset + cfg.n_fft] = core

    frames *= window
    wsq = window * window
    for i in range(n_frames):
        start = i * cfg.hop
        num[start : start + cfg.window_len] += frames[i]
        den[start : start + cfg.window_len] += wsq

    covered = den > _ENVELOPE_FLOOR
    num[covered] /= den[covered]
    num[~covered] = 0.0

    if spec.orig_length is not None:
        pad_left = (cfg.window_len - cfg.hop) // 2
        num = num[pad_left : pad_left + spec.orig_length]
    return Waveform(samples=num, sample_rate=sample_rate)


def compress(
    spec: ComplexSpectrogram, alpha: float | None = None, beta: float | None = None
) -> ComplexSpectrogram:
    """Amplitude compression ``c -> beta * |c|**alpha * exp(i*angle(c))``.

    Phase is preserved exactly; zero maps to zero (the phase of a zero
    coefficient is taken as zero by convention).
    """
    if spec.domain != RAW:
        raise ValueError("compress expects a raw spectrogram")
    alpha = spec.config.alpha if alpha is None else alpha
    beta = spec.config.beta if beta is None else beta
    if alpha <= 0 or beta <= 0:
        raise ValueError(f"alpha and beta must be positive, got {alpha}, {beta}")
    if not np.all(np.isfinite(spec.data)):
        raise ValueError("compress requires finite input")

    mag = np.abs(spec.data)
    gain = np.zeros_like(mag)
    nonzero = mag > 0
    gain[nonzero] = beta * mag[nonzero] ** alpha / mag[nonzero]
    return spec.with_data(spec.data * gain, domain=COMPRESSED)


def decompress(
    spec: ComplexSpectrogram, alpha: float | None = None, beta: float | None = None
) -> ComplexSpectrogram:
    """Exact inverse of :func:`compress`: ``c = (|c_tilde| / beta)**(1/alpha)``
    with the phase carried over unchanged."""
    if spec.domain != COMPRESSED:
        raise ValueError("decompress expects a compressed spectrogram")
    alpha = spec.config.alpha if alpha is None else alpha
    beta = spec.config.beta if beta is None else beta
    if alpha == 0 or beta == 0:
        raise ValueError("alpha and beta must be nonzero")

    mag = np.abs(spec.data)
    gain = np.zeros_like(mag)
    nonzero = mag > 0
    gain[nonzero] = (mag[nonzero] / beta) ** (1.0 / alpha) / mag[nonzero]
    return spec.with_data(spec.data * gain, domain=RAW)


def peak_normalize(waveform: Waveform, peak: float = 0.9) -> tuple[Waveform, float]:
    """Scale to the given max-abs peak; returns (scaled, gain).

    The same gain must be applied to any reference signals that will be
    compared against the scaled one, and undone after synthesis. An all-zero
    signal is returned unchanged with gain 1.
    """
    max_abs = float(np.max(np.abs(waveform.samples))) if len(waveform) else 0.0
    if max_abs == 0.0:
        return waveform, 1.0
    gain = peak / max_abs
    return Waveform(waveform.samples * gain, waveform.sample_rate), gain


def read_wav(path, expected_rate: int | None = None) -> Waveform:
    """Load a mono PCM16 or float32 WAV file.

    Resampling is out of scope: a sample-rate mismatch with
    ``expected_rate`` is an error, as is multi-channel or other sample
    formats.
    """
    rate, data = wavfile.read(path)
    if data.ndim != 1:
        raise ValueError(f"{path}: expected mono audio, got shape {data.shape}")
    if data.dtype == np.int16:
        samples = data.astype(np.float64) / 32768.0
    elif data.dtype == np.float32 or data.dtype == np.float64:
        samples = data.astype(np.float64)
    else:
        raise ValueError(f"{path}: unsupported sample format {data.dtype}")
    if expected_rate is not None and rate != expected_rate:
        raise ValueError(
            f"{path}: sample rate {rate} does not match configured rate "
            f"{expected_rate} (resampling is not supported)"
        )
    return Waveform(samples=samples, sample_rate=int(rate))


def write_wav(path, waveform: Waveform) -> None:
    """Write a mono float32 WAV file."""
    wavfile.write(path, waveform.sample_rate, waveform.samples.astype(np.float32))
