"""Closed-form visibility (coherence) and predictability functionals.

All functionals take a validated :class:`~qduality.states.DensityMatrix` and
return a float. The reference basis is always the computational basis of the
stored matrix; callers wanting another basis conjugate explicitly. Entropies
are in bits.

The stable identifiers are the keys of :data:`MEASURES`
("c_l1", "c_hs", "c_wy", "c_re", "p_l1", "p_hs", "p_vn") and the pair names
"vn", "l1", "wy", "hs" returned by :func:`registry`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .states import DensityMatrix, psd_sqrt

__all__ = [
    "shannon_entropy",
    "binary_entropy",
    "c_l1",
    "c_hs",
    "c_wy",
    "c_re",
    "p_vn",
    "p_hs",
    "p_l1",
    "EntropyReport",
    "entropy_report",
    "MeasurePair",
    "MEASURES",
    "registry",
    "get_pair",
    "get_measure",
]


def shannon_entropy(p) -> float:
    """Base-2 entropy of a probability vector; 0*log(0) := 0 by masking, not limits."""
    p = np.asarray(p, dtype=float).reshape(-1)
    nz = p[p > 0.0]
    return float(-(nz * np.log2(nz)).sum())


def binary_entropy(x: float) -> float:
    return shannon_entropy([x, 1.0 - x])


def _offdiag_abs_sum(m: np.ndarray) -> float:
    a = np.abs(m)
    return float(a.sum() - a.diagonal().sum())


def _offdiag_sq_sum(m: np.ndarray) -> float:
    a = np.abs(m) ** 2
    return float(a.sum() - a.diagonal().sum())


def c_l1(rho: DensityMatrix) -> float:
    """l1-norm coherence: sum of |rho_jk| over j != k. Range [0, d-1]."""
    return _offdiag_abs_sum(rho.matrix)


def c_hs(rho: DensityMatrix) -> float:
    """Hilbert-Schmidt coherence: sum of |rho_jk|^2 over j != k. Range [0, (d-1)/d]."""
    return _offdiag_sq_sum(rho.matrix)


def c_wy(rho: DensityMatrix) -> float:
    """Skew-information coherence: sum of |(sqrt(rho))_jk|^2 over j != k.

    Equals :func:`c_hs` on pure states, where sqrt(rho) = rho.
    """
    return _offdiag_sq_sum(psd_sqrt(rho))


def c_re(rho: DensityMatrix) -> float:
    """Relative-entropy coherence: entropy of the dephased state minus entropy of rho."""
    value = shannon_entropy(rho.diagonal_probabilities) - shannon_entropy(rho.eigenvalues)
    return max(0.0, value)


def p_vn(rho: DensityMatrix) -> float:
    """Entropic predictability: log2(d) minus the entropy of the diagonal."""
    return max(0.0, np.log2(rho.dim) - shannon_entropy(rho.diagonal_probabilities))


def p_hs(rho: DensityMatrix) -> float:
    """Linear-entropy predictability: sum of rho_jj^2 minus 1/d."""
    d = rho.diagonal_probabilities
    return max(0.0, float((d * d).sum()) - 1.0 / rho.dim)


def p_l1(rho: DensityMatrix) -> float:
    """l1 predictability: d - 1 - sum over j != k of sqrt(rho_jj rho_kk)."""
    r = np.sqrt(rho.diagonal_probabilities)
    cross = float(np.outer(r, r).sum() - (r * r).sum())
    return max(0.0, rho.dim - 1.0 - cross)


@dataclass(frozen=True)
class EntropyReport:
    """Spectrum and diagonal entropies of a state (bits), with purity."""

    vn: float
    vn_diag: float
    linear: float
    purity: float


def entropy_report(rho: DensityMatrix) -> EntropyReport:
    purity = rho.purity
    return EntropyReport(
        vn=shannon_entropy(rho.eigenvalues),
        vn_diag=shannon_entropy(rho.diagonal_probabilities),
        linear=1.0 - purity,
        purity=purity,
    )


MEASURES: dict[str, Callable[[DensityMatrix], float]] = {
    "c_l1": c_l1,
    "c_hs": c_hs,
    "c_wy": c_wy,
    "c_re": c_re,
    "p_vn": p_vn,
    "p_hs": p_hs,
    "p_l1": p_l1,
}


@dataclass(frozen=True)
class MeasurePair:
    """A named (predictability, visibility, alpha) triple bounded by P + C <= alpha(d).

    ``monotone_name`` identifies the Schmidt-coefficient closed form that
    completes the relation to an equality on bipartite pure states.
    """

    name: str
    predictability: Callable[[DensityMatrix], float]
    visibility: Callable[[DensityMatrix], float]
    alpha: Callable[[int], float]
    predictability_name: str
    visibility_name: str
    monotone_name: str
    reference_basis: str = field(default="computational basis of the stored matrix")

    def __post_init__(self):
        for d in range(2, 9):
            if not self.alpha(d) > 0.0:
                raise ValueError(f"pair {self.name!r}: alpha({d}) = {self.alpha(d)!r} is not positive")


def _alpha_log(d: int) -> float:
    return float(np.log2(d))


def _alpha_linear(d: int) -> float:
    return float(d - 1)


def _alpha_ratio(d: int) -> float:
    return (d - 1.0) / d


_PAIRS = (
    MeasurePair("vn", p_vn, c_re, _alpha_log, "p_vn", "c_re", "s_vn"),
    MeasurePair("l1", p_l1, c_l1, _alpha_linear, "p_l1", "c_l1", "w_l1"),
    MeasurePair("wy", p_hs, c_wy, _alpha_ratio, "p_hs", "c_wy", "w_wy"),
    MeasurePair("hs", p_hs, c_hs, _alpha_ratio, "p_hs", "c_hs", "s_l"),
)


def registry() -> list[MeasurePair]:
    """The four built-in complementarity pairs; callers may extend the returned list."""
    return list(_PAIRS)


def get_pair(name: str) -> MeasurePair:
    for pair in _PAIRS:
        if pair.name == name:
            return pair
    raise KeyError(f"unknown measure pair {name!r}; known: {[p.name for p in _PAIRS]}")


def get_measure(name: str) -> Callable[[DensityMatrix], float]:
    try:
        return MEASURES[name]
    except KeyError:
        raise KeyError(f"unknown measure {name!r}; known: {sorted(MEASURES)}") from None
