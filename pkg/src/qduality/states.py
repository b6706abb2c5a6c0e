"""Dense complex linear algebra over quantum states.

Validated state containers (density matrices, pure state vectors, bipartite
pure states, probability vectors) plus the structural operations everything
else is built on: partial trace, purification, Schmidt decomposition, the
positive-semidefinite matrix square root, and majorization.

Conventions fixed repo-wide:
  * all logarithms are base 2 and 0*log(0) := 0,
  * Schmidt coefficients and eigenvalue vectors are sorted descending,
  * amplitude vectors of bipartite states are row-major over (A, B) indices,
    so ``amplitudes.reshape(dim_a, dim_b)`` is the coefficient matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Tolerances",
    "DEFAULT_TOLERANCES",
    "StateValidationError",
    "NotHermitian",
    "NotUnitTrace",
    "NotPositive",
    "LengthMismatch",
    "DensityMatrix",
    "PureStateVector",
    "BipartitePureState",
    "ProbabilityVector",
    "SchmidtDecomposition",
    "validate_density_matrix",
    "partial_trace_B",
    "schmidt_decompose",
    "purify",
    "psd_sqrt",
    "majorizes",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances sized for double-precision spectral accuracy (d <= 64)."""

    hermitian: float = 1e-10
    trace: float = 1e-10
    norm: float = 1e-10
    psd: float = 1e-12
    reconstruction: float = 1e-9
    eigenvalue: float = 1e-9
    orthonormal: float = 1e-9


DEFAULT_TOLERANCES = Tolerances()

# Eigenvalues below this count as zero when deciding numerical rank.
RANK_CUTOFF = 1e-12

# Spectrum entries below this are diagonalization noise on exact zeros; paths
# that take square roots of eigenvalues (where noise is amplified as
# delta/(2 sqrt(lambda))) zero them out first.
SPECTRUM_DUST = 1e-14


class StateValidationError(ValueError):
    """An input failed one of the state invariants."""


class NotHermitian(StateValidationError):
    pass


class NotUnitTrace(StateValidationError):
    pass


class NotPositive(StateValidationError):
    pass


class LengthMismatch(ValueError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


class DensityMatrix:
    """Validated d x d density operator: Hermitian, unit trace, positive semidefinite.

    Construct through :func:`validate_density_matrix`; instances are immutable.
    The spectrum (clamped, descending) is cached on first use so spectrum-only
    functionals never re-diagonalize.
    """

    def __init__(self, matrix, eigenvalues=None, eigenvectors=None, correction=0.0):
        self.matrix = _frozen(np.asarray(matrix, dtype=complex))
        self.dim = self.matrix.shape[0]
        self.correction = float(correction)
        self._eigenvalues = None if eigenvalues is None else _frozen(np.asarray(eigenvalues, dtype=float))
        self._eigenvectors = eigenvectors

    @property
    def eigenvalues(self) -> np.ndarray:
        """Spectrum sorted descending, rounding-level negatives clamped to 0."""
        if self._eigenvalues is None:
            w = np.linalg.eigvalsh(self.matrix)
            self._eigenvalues = _frozen(np.clip(w[::-1], 0.0, None))
        return self._eigenvalues

    @property
    def diagonal_probabilities(self) -> np.ndarray:
        """Real diagonal of the matrix, clipped into [0, 1]."""
        return np.clip(self.matrix.diagonal().real, 0.0, 1.0)

    @property
    def purity(self) -> float:
        return float((np.abs(self.matrix) ** 2).sum())

    def rank(self, cutoff: float = RANK_CUTOFF) -> int:
        return int(np.count_nonzero(self.eigenvalues > cutoff))

    def eigensystem(self):
        """Spectrum (descending) and matching eigenvector columns, cached."""
        if self._eigenvectors is None:
            w, vectors = np.linalg.eigh(self.matrix)
            if self._eigenvalues is None:
                self._eigenvalues = _frozen(np.clip(w[::-1], 0.0, None))
            self._eigenvectors = _frozen(vectors[:, ::-1])
        return self.eigenvalues, self._eigenvectors

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim}, purity={self.purity:.6f})"


def validate_density_matrix(m, tolerances: Tolerances = DEFAULT_TOLERANCES) -> DensityMatrix:
    """Check Hermiticity, unit trace and positivity; clamp rounding-level negatives.

    Eigenvalues in [-psd_tolerance, 0) are clamped to zero with the trace
    renormalized, and the correction magnitude is recorded on the result.
    Anything below -psd_tolerance raises :class:`NotPositive`.
    """
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise StateValidationError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 1:
        raise StateValidationError("empty matrix")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise StateValidationError("matrix contains non-finite entries")

    herm_defect = float(np.abs(a - a.conj().T).max())
    if herm_defect > tolerances.hermitian:
        raise NotHermitian(
            f"max |m - m^dagger| = {herm_defect:.3e} exceeds tolerance {tolerances.hermitian:.1e}"
        )
    a = (a + a.conj().T) / 2.0

    trace = float(a.trace().real)
    if abs(trace - 1.0) > tolerances.trace:
        raise NotUnitTrace(
            f"trace 1 violated by {abs(trace - 1.0):.3e} (tolerance {tolerances.trace:.1e})"
        )

    w, v = np.linalg.eigh(a)
    if w[0] < -tolerances.psd:
        raise NotPositive(
            f"smallest eigenvalue {w[0]:.3e} below -{tolerances.psd:.1e}"
        )

    correction = 0.0
    if w[0] < 0.0:
        correction = float(-w[w < 0].sum())
        w = np.clip(w, 0.0, None)
        a = (v * w) @ v.conj().T
        a = (a + a.conj().T) / 2.0
        s = float(w.sum())
        correction += abs(s - 1.0)
        a /= s
        w = w / s

    return DensityMatrix(a, w[::-1], _frozen(v[:, ::-1]), correction)


def _trusted_density(matrix, eigenvalues=None) -> DensityMatrix:
    """Wrap a matrix known valid by construction (mixtures, conjugations, diagonals).

    Spectrum is filled in lazily when not supplied. Internal use only.
    """
    return DensityMatrix(np.asarray(matrix, dtype=complex), eigenvalues)


@dataclass(frozen=True)
class PureStateVector:
    """Normalized complex state vector."""

    amplitudes: np.ndarray
    tolerances: Tolerances = field(default=DEFAULT_TOLERANCES, repr=False, compare=False)

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if a.size < 1:
            raise StateValidationError("empty state vector")
        if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
            raise StateValidationError("state vector contains non-finite entries")
        norm = float(np.linalg.norm(a))
        if abs(norm - 1.0) > self.tolerances.norm:
            raise StateValidationError(
                f"norm 1 violated by {abs(norm - 1.0):.3e} (tolerance {self.tolerances.norm:.1e})"
            )
        object.__setattr__(self, "amplitudes", _frozen(a))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def projector(self) -> DensityMatrix:
        a = self.amplitudes
        rho = np.outer(a, a.conj())
        lam = np.zeros(self.dim)
        lam[0] = 1.0
        return _trusted_density(rho, lam)


@dataclass(frozen=True)
class BipartitePureState:
    """Normalized pure state of a bipartite system, amplitudes row-major over (A, B)."""

    dim_a: int
    dim_b: int
    amplitudes: np.ndarray
    tolerances: Tolerances = field(default=DEFAULT_TOLERANCES, repr=False, compare=False)

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_b < 1:
            raise StateValidationError("subsystem dimensions must be positive")
        a = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if a.size != self.dim_a * self.dim_b:
            raise StateValidationError(
                f"expected {self.dim_a * self.dim_b} amplitudes, got {a.size}"
            )
        if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
            raise StateValidationError("state vector contains non-finite entries")
        norm = float(np.linalg.norm(a))
        if abs(norm - 1.0) > self.tolerances.norm:
            raise StateValidationError(
                f"norm 1 violated by {abs(norm - 1.0):.3e} (tolerance {self.tolerances.norm:.1e})"
            )
        object.__setattr__(self, "amplitudes", _frozen(a))

    @property
    def coefficient_matrix(self) -> np.ndarray:
        """dim_a x dim_b amplitude matrix M with psi = sum_ij M_ij |i>|j>."""
        return self.amplitudes.reshape(self.dim_a, self.dim_b)

    def projector(self) -> DensityMatrix:
        a = self.amplitudes
        lam = np.zeros(a.size)
        lam[0] = 1.0
        return _trusted_density(np.outer(a, a.conj()), lam)


@dataclass(frozen=True)
class ProbabilityVector:
    """Nonnegative components summing to one."""

    components: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.components, dtype=float).reshape(-1)
        if c.size < 1:
            raise StateValidationError("empty probability vector")
        if not np.all(np.isfinite(c)):
            raise StateValidationError("probability vector contains non-finite entries")
        if c.min() < -DEFAULT_TOLERANCES.psd:
            raise StateValidationError(f"negative component {c.min():.3e}")
        c = np.clip(c, 0.0, None)
        total = float(c.sum())
        if abs(total - 1.0) > DEFAULT_TOLERANCES.trace:
            raise StateValidationError(
                f"components sum to {total!r}, expected 1 within {DEFAULT_TOLERANCES.trace:.1e}"
            )
        if c.max() > 1.0 + DEFAULT_TOLERANCES.trace:
            raise StateValidationError(f"component {c.max()!r} exceeds 1")
        object.__setattr__(self, "components", _frozen(c))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.components, dtype=dtype)

    def __len__(self):
        return self.components.size


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Squared Schmidt coefficients (descending) with the two orthonormal local bases.

    ``basis_a``/``basis_b`` hold the local vectors as columns; the source state
    is ``sum_k sqrt(coefficients[k]) basis_a[:, k] (x) basis_b[:, k]``.
    """

    coefficients: ProbabilityVector
    basis_a: np.ndarray
    basis_b: np.ndarray

    def reconstruct(self) -> BipartitePureState:
        lam = np.asarray(self.coefficients)
        m = (self.basis_a * np.sqrt(lam)) @ self.basis_b.T
        return BipartitePureState(self.basis_a.shape[0], self.basis_b.shape[0], m.reshape(-1))


def partial_trace_B(psi: BipartitePureState) -> DensityMatrix:
    """Reduced state on subsystem A, computed as M M^dagger of the amplitude matrix."""
    m = psi.coefficient_matrix
    rho = m @ m.conj().T
    return validate_density_matrix(rho)


def schmidt_decompose(psi: BipartitePureState) -> SchmidtDecomposition:
    """Singular value decomposition of the amplitude matrix.

    Coefficients are the squared singular values in descending order. For
    degenerate coefficients any orthonormal basis of the degenerate subspace
    may be returned; compare coefficient vectors and reconstructions, never
    the bases themselves.
    """
    u, s, vh = np.linalg.svd(psi.coefficient_matrix, full_matrices=False)
    lam = s * s
    total = float(lam.sum())
    if abs(total - 1.0) > DEFAULT_TOLERANCES.trace:
        lam = lam / total
    return SchmidtDecomposition(
        coefficients=ProbabilityVector(lam),
        basis_a=_frozen(u),
        basis_b=_frozen(vh.T),
    )


def purify(rho: DensityMatrix) -> BipartitePureState:
    """Bipartite pure state whose partial trace over B reproduces ``rho``.

    The ancilla dimension equals the numerical rank of ``rho``; the A-side
    Schmidt vectors are the eigenvectors of ``rho``.
    """
    w, v = rho.eigensystem()
    keep = w > RANK_CUTOFF
    if not keep.any():
        raise StateValidationError("density matrix has numerically zero rank")
    wk = w[keep]
    wk = wk / wk.sum()
    m = v[:, keep] * np.sqrt(wk)
    return BipartitePureState(rho.dim, int(keep.sum()), m.reshape(-1))


def psd_sqrt(rho: DensityMatrix) -> np.ndarray:
    """Hermitian PSD square root via spectral decomposition with a clamp at zero."""
    w, v = rho.eigensystem()
    w = np.where(w > SPECTRUM_DUST, w, 0.0)
    s = (v * np.sqrt(w)) @ v.conj().T
    return (s + s.conj().T) / 2.0


def majorizes(p, q, tolerance: float = 1e-12) -> bool:
    """True iff the sorted-descending prefix sums of ``p`` dominate those of ``q``.

    A small tolerance keeps the relation reflexive under floating-point noise.
    """
    cp = np.asarray(p, dtype=float).reshape(-1)
    cq = np.asarray(q, dtype=float).reshape(-1)
    if cp.size != cq.size:
        raise LengthMismatch(f"length {cp.size} vs {cq.size}")
    sp = np.cumsum(np.sort(cp)[::-1])
    sq = np.cumsum(np.sort(cq)[::-1])
    return bool(np.all(sp >= sq - tolerance))
