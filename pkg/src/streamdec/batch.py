"""Symbol-major frame batches and lockstep decoding.

A batch holds F frames interleaved so that element i of frame s sits at
flat position i * F + s: all F copies of a symbol are adjacent, which is
what lets the kernels stream one edge across every lane.  Lockstep
decoding is bit-identical to decoding each frame alone; with early
termination a converged lane freezes while the rest keep iterating.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .code import ParityCheckCode
from .decoder import DecodeOutcome, DecoderConfig, _decode_lanes

__all__ = ["FrameBatch", "BatchOutcome", "interleave", "deinterleave", "decode_batch"]


@dataclass
class FrameBatch:
    """F frames of length n, flattened symbol-major."""

    f: int
    n: int
    data: np.ndarray

    def __post_init__(self):
        if self.f < 1 or self.n < 1:
            raise ValueError("f and n must be >= 1")
        self.data = np.ascontiguousarray(self.data, dtype=np.float64)
        if self.data.shape != (self.f * self.n,):
            raise ValueError(f"data must be flat with length f*n = {self.f * self.n}")

    def lanes(self) -> np.ndarray:
        """Lane-major (n, f) view of the batch."""
        return self.data.reshape(self.n, self.f)


@dataclass(frozen=True)
class BatchOutcome:
    """Per-frame decode outcomes, in frame order."""

    outcomes: tuple = field(default_factory=tuple)

    def __len__(self):
        return len(self.outcomes)

    def __getitem__(self, idx):
        return self.outcomes[idx]

    def __iter__(self):
        return iter(self.outcomes)


def interleave(frames) -> FrameBatch:
    """Pack F equal-length frames into one symbol-major batch."""
    arr = np.asarray(frames, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError("frames must be a 2-D stack of equal-length rows")
    f, n = arr.shape
    if f < 1 or n < 1:
        raise ValueError("need at least one frame of at least one symbol")
    data = np.ascontiguousarray(arr.T).reshape(-1)
    return FrameBatch(f=f, n=n, data=data)


def deinterleave(batch: FrameBatch) -> np.ndarray:
    """Unpack a batch back to an (F, n) stack of frames."""
    return batch.lanes().T.copy()


def _materialize(bits, iters, ok) -> BatchOutcome:
    nf = bits.shape[1]
    return BatchOutcome(tuple(
        DecodeOutcome(bits=bits[:, s].copy(), iterations_run=int(iters[s]),
                      syndrome_ok=bool(ok[s]))
        for s in range(nf)))


def decode_batch(code: ParityCheckCode, batch: FrameBatch, config: DecoderConfig,
                 backend: str | None = None) -> BatchOutcome:
    """Decode all lanes of a batch in lockstep.

    Every lane follows the same arithmetic order as the single-frame
    decoder, so outcomes match per-frame decoding exactly, including
    iterations_run under early termination.
    """
    if batch.n != code.n:
        raise ValueError(f"batch n ({batch.n}) does not match code n ({code.n})")
    bits, iters, ok, _ = _decode_lanes(code, batch.lanes(), config, backend)
    return _materialize(bits, iters, ok)
