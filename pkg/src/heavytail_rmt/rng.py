"""Counter-based random streams.

Every replicate owns a :class:`Stream` keyed by ``(seed, stream_id)``.  The
underlying bit generator is Philox-4x64, so a stream is reproducible
byte-for-byte from its key alone and streams with different keys never share
state.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_C1 = 0xBF58476D1CE4E5B9
MIX_C2 = 0x94D049BB133111EB


def splitmix64(x: int) -> int:
    """SplitMix64 finalizer; a bijection on 64-bit integers."""
    z = x & MASK64
    z = ((z ^ (z >> 30)) * MIX_C1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_C2) & MASK64
    return z ^ (z >> 31)


def derive_stream_id(master_seed: int, index: int) -> int:
    """Stream id for replicate ``index`` under ``master_seed``.

    ``splitmix64(master_seed + (index + 1) * GOLDEN_GAMMA mod 2**64)``.  For a
    fixed master seed distinct indices below 2**64 map to distinct ids, since
    the odd multiplier and the finalizer are both bijections.
    """
    if index < 0:
        raise ValueError(f"replicate index must be nonnegative, got {index}")
    return splitmix64((master_seed & MASK64) + (index + 1) * GOLDEN_GAMMA)


class Stream:
    """Deterministic source of uniforms, signs and normals.

    The sampling code only calls :meth:`uniforms`, :meth:`signs` and
    :meth:`normals`, so tests can substitute any object with the same methods
    (e.g. a scripted stream replaying fixed values).
    """

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = int(seed) & MASK64
        self.stream_id = int(stream_id) & MASK64
        key = (self.seed << 64) | self.stream_id
        self._gen = np.random.Generator(np.random.Philox(key=key))

    def uniforms(self, size: int) -> np.ndarray:
        """Uniform draws on the half-open interval (0, 1]."""
        return 1.0 - self._gen.random(size)

    def signs(self, size: int) -> np.ndarray:
        """Independent fair +1/-1 signs."""
        return np.where(self._gen.random(size) < 0.5, 1.0, -1.0)

    def normals(self, size: int) -> np.ndarray:
        return self._gen.standard_normal(size)

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def __repr__(self) -> str:
        return f"Stream(seed={self.seed}, stream_id={self.stream_id})"
