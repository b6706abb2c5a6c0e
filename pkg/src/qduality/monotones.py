"""Entanglement monotones induced by complementarity pairs on bipartite pure states.

For a pair with bound alpha, the monotone of a bipartite pure state is
``alpha(d_A) - P(rho_A) - C(rho_A)`` with the wave-particle split taken in the
Schmidt basis of the reduced state (where the visibility of ``rho_A``
vanishes). That is the basis in which the quantity is a function of the
Schmidt coefficients alone, hence invariant under local unitaries; the
closed forms :func:`s_vn`, :func:`s_l`, :func:`w_l1`, :func:`w_wy` evaluate
the same monotones directly on a Schmidt coefficient vector.

The closed forms accept stacked inputs (..., d) and evaluate along the last
axis, which the convex-roof optimizer relies on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measures import MeasurePair
from .states import (
    SPECTRUM_DUST,
    BipartitePureState,
    DensityMatrix,
    ProbabilityVector,
    _trusted_density,
    majorizes,
    partial_trace_B,
)

__all__ = [
    "s_vn",
    "s_l",
    "w_l1",
    "w_wy",
    "MONOTONES",
    "get_monotone",
    "MonotoneValue",
    "monotone_pure",
    "LocalUnitaryReport",
    "check_local_unitary_invariance",
    "SchurConcavityReport",
    "check_schur_concavity",
    "wootters_concurrence",
]

SLACK_TOLERANCE = 1e-9


def _lam(lam) -> np.ndarray:
    return np.asarray(lam, dtype=float)


def s_vn(lam):
    """Entanglement entropy -sum lam log2 lam (bits), along the last axis."""
    x = _lam(lam)
    terms = np.where(x > 0.0, x * np.log2(np.where(x > 0.0, x, 1.0)), 0.0)
    return -np.sum(terms, axis=-1)


def s_l(lam):
    """Linear entropy 1 - sum lam^2."""
    x = _lam(lam)
    return 1.0 - np.sum(x * x, axis=-1)


def w_l1(lam):
    """Pairwise coefficient cross terms: sum over j != k of sqrt(lam_j lam_k).

    Equals (sum_j sqrt(lam_j))^2 - 1 on normalized input, the robustness
    closed form checked in the test suite.
    """
    s = np.sqrt(np.clip(_lam(lam), 0.0, None))
    total = np.einsum("...i,...j->...", s, s)
    return total - np.sum(s * s, axis=-1)


def w_wy(lam):
    """Skew-information monotone sum_j (lam_j - lam_j^2); coincides with s_l on the simplex."""
    x = _lam(lam)
    return np.sum(x - x * x, axis=-1)


MONOTONES = {"s_vn": s_vn, "s_l": s_l, "w_l1": w_l1, "w_wy": w_wy}

# derivatives of the closed forms w.r.t. lam, used by the roof optimizer;
# entries with divergent boundary derivatives are clamped away from 0
def _grad_s_vn(lam):
    x = np.maximum(_lam(lam), 1e-18)
    return -(np.log(x) + 1.0) / np.log(2.0)


def _grad_s_l(lam):
    return -2.0 * _lam(lam)


def _grad_w_l1(lam):
    x = np.maximum(_lam(lam), 1e-18)
    s = np.sqrt(x)
    return np.sum(s, axis=-1)[..., None] / s - 1.0


MONOTONE_GRADIENTS = {
    "s_vn": _grad_s_vn,
    "s_l": _grad_s_l,
    "w_l1": _grad_w_l1,
    "w_wy": _grad_s_l,
}


def get_monotone(name: str):
    try:
        return MONOTONES[name]
    except KeyError:
        raise KeyError(f"unknown monotone {name!r}; known: {sorted(MONOTONES)}") from None


@dataclass(frozen=True)
class MonotoneValue:
    """Monotone evaluation record: clamped value, raw value, normalized value, spectrum used."""

    name: str
    value: float
    raw_value: float
    normalized: float
    schmidt: ProbabilityVector


def monotone_pure(pair: MeasurePair, psi: BipartitePureState) -> MonotoneValue:
    """alpha - P - C of the reduced state, evaluated in its Schmidt basis.

    The reduced state is diagonalized (eigenvalue route, independent of the
    SVD route behind the closed forms) and the pair's functionals are applied
    to the diagonal matrix. Cancellation-level negatives are clamped to 0;
    the raw value is kept in the record.
    """
    rho_a = partial_trace_B(psi)
    lam = np.where(rho_a.eigenvalues > SPECTRUM_DUST, rho_a.eigenvalues, 0.0)
    diag = _trusted_density(np.diag(lam).astype(complex), lam)
    alpha = pair.alpha(psi.dim_a)
    raw = alpha - pair.predictability(diag) - pair.visibility(diag)
    value = 0.0 if -SLACK_TOLERANCE <= raw < 0.0 else raw
    return MonotoneValue(
        name=pair.monotone_name,
        value=value,
        raw_value=raw,
        normalized=value / alpha,
        schmidt=ProbabilityVector(lam),
    )


@dataclass(frozen=True)
class LocalUnitaryReport:
    value_before: float
    value_after: float
    deviation: float
    passed: bool


def check_local_unitary_invariance(
    pair: MeasurePair,
    psi: BipartitePureState,
    u_a: np.ndarray,
    u_b: np.ndarray,
    tolerance: float = SLACK_TOLERANCE,
) -> LocalUnitaryReport:
    """Compare the pair's monotone on psi and on (u_a (x) u_b) psi."""
    before = monotone_pure(pair, psi).value
    rotated = np.kron(np.asarray(u_a), np.asarray(u_b)) @ psi.amplitudes
    after = monotone_pure(pair, BipartitePureState(psi.dim_a, psi.dim_b, rotated)).value
    deviation = abs(after - before)
    return LocalUnitaryReport(before, after, deviation, deviation <= tolerance)


@dataclass(frozen=True)
class SchurConcavityReport:
    """Result of sampling f on majorization-ordered pairs p < q (p more mixed)."""

    name: str
    trials: int
    worst_violation: float
    counterexample: tuple | None
    passed: bool


def _mix_toward_uniform(q: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Apply 1-3 random Robin Hood transfers; the result is majorized by q."""
    p = q.copy()
    for _ in range(int(rng.integers(1, 4))):
        i, j = rng.choice(p.size, size=2, replace=False)
        if p[i] < p[j]:
            i, j = j, i
        gap = p[i] - p[j]
        if gap <= 0.0:
            continue
        eps = 0.5 * gap * rng.uniform(0.0, 1.0)
        p[i] -= eps
        p[j] += eps
    return p


def check_schur_concavity(
    monotone,
    trials: int,
    dim: int,
    seed,
    tolerance: float = 1e-10,
) -> SchurConcavityReport:
    """Verify f(p) >= f(q) on sampled pairs with p majorized by q.

    ``monotone`` may be a registered name or any callable on coefficient
    vectors. Pairs are built by random mass transfers toward uniformity, and
    each constructed ordering is re-checked with :func:`majorizes` before use.
    """
    from .sampling import SeededStream, random_simplex

    fn = get_monotone(monotone) if isinstance(monotone, str) else monotone
    name = monotone if isinstance(monotone, str) else getattr(monotone, "__name__", "<callable>")
    stream = seed if isinstance(seed, SeededStream) else SeededStream(seed)
    draws = stream.child(0)
    rng = stream.child(1).rng
    worst = 0.0
    counterexample = None
    for k in range(trials):
        q = np.asarray(random_simplex(dim, draws))
        p = _mix_toward_uniform(q, rng)
        if not majorizes(q, p):
            continue
        violation = float(fn(q)) - float(fn(p))
        if violation > worst:
            worst = violation
            counterexample = (p.copy(), q.copy())
    passed = worst <= tolerance
    return SchurConcavityReport(name, trials, worst, None if passed else counterexample, passed)


_SIGMA_Y = np.array([[0.0, -1j], [1j, 0.0]])
_YY = np.kron(_SIGMA_Y, _SIGMA_Y)


def wootters_concurrence(rho: DensityMatrix) -> float:
    """Two-qubit concurrence max(0, mu_1 - mu_2 - mu_3 - mu_4).

    The mu_i are the descending square roots of the eigenvalues of
    rho (sigma_y x sigma_y) rho* (sigma_y x sigma_y). Used as an independent
    oracle for convex-roof results.
    """
    if rho.dim != 4:
        raise ValueError(f"concurrence is defined for two qubits (dim 4), got dim {rho.dim}")
    m = rho.matrix
    r = m @ _YY @ m.conj() @ _YY
    mu = np.sqrt(np.clip(np.sort(np.linalg.eigvals(r).real)[::-1], 0.0, None))
    return float(max(0.0, mu[0] - mu[1] - mu[2] - mu[3]))
