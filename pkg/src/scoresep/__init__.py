"""Score-based generative target speaker extraction.

A mean-reverting variance-exploding diffusion process runs in a compressed
complex-STFT domain; a conditional score network trained by denoising score
matching drives a predictor-corrector reverse sampler that pulls the target
speaker out of a two-speaker mixture, guided by a fixed-length speaker
embedding.
"""

__version__ = "0.1.0"

from scoresep.sde import SdeParams
from scoresep.stft import ComplexSpectrogram, StftConfig, Waveform

__all__ = [
    "ComplexSpectrogram",
    "SdeParams",
    "StftConfig",
    "Waveform",
    "__version__",
]
