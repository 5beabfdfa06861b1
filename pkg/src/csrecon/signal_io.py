"""Frames, 16-bit PCM WAV I/O and deterministic synthetic test signals."""

import enum
import wave
from dataclasses import dataclass

import numpy as np

from ._rng import SplitMix64, permutation

DEFAULT_SAMPLE_RATE = 8000
PEAK_TARGET = 0.9
VOWEL_NOISE_ENERGY = 0.01


class WavError(Exception):
    """Base class for WAV ingestion failures."""


class WavReadError(WavError):
    """The file could not be opened or is not a RIFF/WAVE container."""


class UnsupportedWavError(WavError):
    """The container is valid but not 16-bit integer PCM."""


class FrameWindowError(WavError, IndexError):
    """The requested frame window does not fit in the file."""


@dataclass(frozen=True, eq=False)
class Frame:
    """A fixed-length real time-domain signal segment."""

    samples: np.ndarray
    sample_rate: int = DEFAULT_SAMPLE_RATE
    origin: str = ""

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.float64)
        if samples.ndim != 1 or samples.shape[0] == 0:
            raise ValueError("a frame needs at least one sample")
        if not np.all(np.isfinite(samples)):
            raise ValueError("frame samples must be finite")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def __len__(self):
        return self.samples.shape[0]


def read_wav_frame(path, start=0, length=3000):
    """Read ``length`` samples starting at ``start`` from a 16-bit PCM WAV.

    Multi-channel files contribute channel 0 only. PCM value ``v`` maps to
    ``v / 32768``.
    """
    if start < 0 or length < 1:
        raise FrameWindowError(f"invalid frame window start={start} length={length}")
    try:
        with wave.open(str(path), "rb") as w:
            width = w.getsampwidth()
            channels = w.getnchannels()
            total = w.getnframes()
            rate = w.getframerate()
            if width != 2:
                raise UnsupportedWavError(f"{path}: {8 * width}-bit samples, need 16-bit")
            if start + length > total:
                raise FrameWindowError(
                    f"{path}: window [{start}, {start + length}) exceeds {total} samples"
                )
            w.setpos(start)
            raw = w.readframes(length)
    except wave.Error as exc:
        msg = str(exc)
        if "unknown format" in msg:
            raise UnsupportedWavError(f"{path}: {msg}") from exc
        raise WavReadError(f"{path}: {msg}") from exc
    except (OSError, EOFError) as exc:
        raise WavReadError(f"{path}: {exc}") from exc
    pcm = np.frombuffer(raw, dtype="<i2").reshape(-1, channels)[:, 0]
    if pcm.shape[0] != length:
        raise WavReadError(f"{path}: data chunk truncated")
    return Frame(pcm / 32768.0, rate, f"{path}@{start}")


def write_wav(path, frame):
    """Write ``frame`` as mono 16-bit PCM, clamped to [-1, 1] and scaled by 32767."""
    if not isinstance(frame, Frame):
        frame = Frame(frame)
    pcm = np.rint(np.clip(frame.samples, -1.0, 1.0) * 32767).astype("<i2")
    with open(path, "wb") as fh, wave.open(fh, "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(int(frame.sample_rate))
        w.writeframes(pcm.tobytes())


class SynthKind(str, enum.Enum):
    SPARSE = "sparse"
    HARMONIC = "harmonic"
    VOWEL_PROXY = "vowel-proxy"


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for a synthetic frame.

    ``sparse`` plants ``k`` random coefficients; ``harmonic`` places a
    decaying harmonic series on bins ``fundamental_index * h``;
    ``vowel-proxy`` adds dense white noise carrying 1% of the harmonic energy.
    """

    kind: SynthKind
    n: int = 3000
    k: int = 10
    fundamental_index: int = 8
    harmonic_count: int = 10
    decay: float = 0.7
    seed: int = 0
    sample_rate: int = DEFAULT_SAMPLE_RATE

    def __post_init__(self):
        object.__setattr__(self, "kind", SynthKind(self.kind))
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.kind is SynthKind.SPARSE:
            if not 1 <= self.k <= self.n:
                raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        else:
            if self.fundamental_index < 1 or self.harmonic_count < 1:
                raise ValueError("fundamental_index and harmonic_count must be >= 1")
            if self.fundamental_index * self.harmonic_count >= self.n:
                raise ValueError("highest harmonic would alias: need fundamental * count < n")
            if not 0 < self.decay <= 1:
                raise ValueError("decay must lie in (0, 1]")


def _basis_kind(basis):
    from .transforms import Basis, SparsityBasis

    return basis.kind if isinstance(basis, SparsityBasis) else Basis(basis)


def planted_coefficients(spec, basis):
    """Coefficient vector underlying a ``sparse`` or ``harmonic`` synth spec.

    For the DFT basis nonzeros come in conjugate pairs ``(k, n-k)`` so that
    the synthesized frame is real. A sparse DFT vector therefore holds
    ``k // 2`` pairs plus, for odd ``k``, one real DC term.
    """
    from .transforms import Basis

    kind = _basis_kind(basis)
    n = spec.n
    rng = SplitMix64(spec.seed)
    if kind is Basis.DCT:
        c = np.zeros(n)
        if spec.kind is SynthKind.SPARSE:
            for pos in permutation(n, rng)[: spec.k]:
                c[pos] = _signed_amplitude(rng)
        else:
            for h in range(1, spec.harmonic_count + 1):
                c[spec.fundamental_index * h] = spec.decay ** (h - 1)
        return c

    c = np.zeros(n, dtype=complex)
    half = (n - 1) // 2  # bins 1..half have a distinct conjugate partner
    if spec.kind is SynthKind.SPARSE:
        pairs = spec.k // 2
        if pairs > half:
            raise ValueError(f"k={spec.k} conjugate-symmetric atoms do not fit in n={n}")
        for j in permutation(half, rng)[:pairs]:
            amp = 0.5 + rng.uniform()
            phase = 2 * np.pi * rng.uniform()
            c[j + 1] = amp * np.exp(1j * phase)
            c[n - j - 1] = np.conj(c[j + 1])
        if spec.k % 2:
            c[0] = _signed_amplitude(rng)
    else:
        if spec.fundamental_index * spec.harmonic_count > half:
            raise ValueError("DFT harmonics need fundamental * count < n / 2")
        for h in range(1, spec.harmonic_count + 1):
            b = spec.fundamental_index * h
            c[b] = c[n - b] = spec.decay ** (h - 1)
    return c


def _signed_amplitude(rng):
    amp = 0.5 + rng.uniform()
    return amp if rng.uniform() < 0.5 else -amp


def synthesize(spec, basis):
    """Build a deterministic frame from ``spec`` in the given basis.

    The result is peak-normalized to ``max|x| = 0.9``.
    """
    from .transforms import synthesize_values

    kind = _basis_kind(basis)
    if spec.kind is SynthKind.VOWEL_PROXY:
        harmonic = SynthSpec(
            SynthKind.HARMONIC, spec.n, spec.k, spec.fundamental_index,
            spec.harmonic_count, spec.decay, spec.seed, spec.sample_rate,
        )
        x = synthesize_values(planted_coefficients(harmonic, kind), kind).real
        # White noise is dense in every orthonormal basis with equal energy.
        rng = SplitMix64(spec.seed ^ 0x5EED)
        noise = np.array([rng.normal() for _ in range(spec.n)])
        noise *= np.sqrt(VOWEL_NOISE_ENERGY * np.sum(x**2) / np.sum(noise**2))
        x = x + noise
    else:
        x = synthesize_values(planted_coefficients(spec, kind), kind).real
    peak = np.max(np.abs(x))
    if peak > 0:
        x = x * (PEAK_TARGET / peak)
    origin = f"synth:{spec.kind.value}:{kind.value}:n={spec.n}:seed={spec.seed}"
    return Frame(x, spec.sample_rate, origin)
