"""Seeded random generation of states, unitaries and probability vectors.

One generator algorithm is fixed repo-wide so reported numbers are
reproducible: every stream is ``numpy.random.Generator(PCG64(SeedSequence(seed,
spawn_key=path)))`` where ``path`` is the tuple of stream ids leading to the
stream. Identical ``(seed, path)`` gives identical draws on every platform
supported by numpy's PCG64 bit-stream guarantee. Complex Gaussian draws take
the real block first, then the imaginary block.
"""

from __future__ import annotations

import numpy as np

from .states import (
    BipartitePureState,
    DensityMatrix,
    ProbabilityVector,
    PureStateVector,
    validate_density_matrix,
)

__all__ = [
    "SeededStream",
    "haar_pure",
    "haar_bipartite",
    "haar_unitary",
    "ginibre_density",
    "random_simplex",
]

GENERATOR_ALGORITHM = "numpy PCG64 via SeedSequence(seed, spawn_key=stream path)"


class SeededStream:
    """Deterministic random stream addressed by a 64-bit seed and a stream-id path.

    Streams are value-like and single-owner: parallel workers derive child
    streams with :meth:`child` instead of sharing one generator.
    """

    def __init__(self, seed: int, stream_id: int = 0, _parent_path: tuple = ()):
        self.seed = int(seed)
        self.path = tuple(int(x) for x in _parent_path) + (int(stream_id),)
        self._rng = None

    @property
    def rng(self) -> np.random.Generator:
        if self._rng is None:
            ss = np.random.SeedSequence(self.seed, spawn_key=self.path)
            self._rng = np.random.Generator(np.random.PCG64(ss))
        return self._rng

    def child(self, stream_id: int) -> "SeededStream":
        return SeededStream(self.seed, stream_id, _parent_path=self.path)

    def __repr__(self):
        return f"SeededStream(seed={self.seed}, path={self.path})"


def _as_stream(stream) -> SeededStream:
    if isinstance(stream, SeededStream):
        return stream
    return SeededStream(int(stream))


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return re + 1j * im


def haar_pure(dim: int, stream) -> PureStateVector:
    """Haar-random pure state: normalized complex Gaussian vector."""
    z = _complex_normal(_as_stream(stream).rng, dim)
    return PureStateVector(z / np.linalg.norm(z))


def haar_bipartite(dim_a: int, dim_b: int, stream) -> BipartitePureState:
    """Haar-random pure state on an A x B product space."""
    z = _complex_normal(_as_stream(stream).rng, dim_a * dim_b)
    return BipartitePureState(dim_a, dim_b, z / np.linalg.norm(z))


def haar_unitary(dim: int, stream) -> np.ndarray:
    """Haar-random unitary: QR of a Ginibre matrix with the R-diagonal phases fixed."""
    z = _complex_normal(_as_stream(stream).rng, (dim, dim)) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def ginibre_density(dim: int, rank: int, stream) -> DensityMatrix:
    """Random density matrix G G^dagger / Tr(G G^dagger) with G of shape dim x rank."""
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must be in [1, {dim}], got {rank}")
    g = _complex_normal(_as_stream(stream).rng, (dim, rank))
    rho = g @ g.conj().T
    rho /= rho.trace().real
    return validate_density_matrix(rho)


def random_simplex(dim: int, stream) -> ProbabilityVector:
    """Uniform (flat Dirichlet) draw from the probability simplex."""
    return ProbabilityVector(_as_stream(stream).rng.dirichlet(np.ones(dim)))
