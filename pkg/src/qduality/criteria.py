"""Machine checks of the standard reliability criteria for predictability and
visibility measures.

Each check samples states, measures the worst violation of one criterion and
returns a :class:`CriterionReport` carrying a reproducible counterexample when
the check fails:

  C1  continuity (sampled bounded difference ratio, plus a boundary limit probe)
  C2  invariance under permutations of the basis indices
  C3  extremes when some rho_jj = 1 (P maximal, V minimal)
  C4  extremes at uniform populations (P minimal; V maximal on pure states)
  C5  monotonicity under population equalization (P) and coherence shrinkage (V)
  C6  convexity

Deliberately broken measures ship in :data:`TEST_DOUBLES` so the suite can
prove each check has teeth.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .measures import MEASURES, MeasurePair, get_measure
from .sampling import SeededStream, ginibre_density, haar_pure, random_simplex
from .states import DensityMatrix, _trusted_density

__all__ = [
    "CriterionReport",
    "Counterexample",
    "check_c1_continuity",
    "check_c2_permutation",
    "check_c3_c4_extremes",
    "check_c5_transfer",
    "check_c6_convexity",
    "full_audit",
    "audit_passed",
    "TEST_DOUBLES",
    "double_pair",
]

# C1 is a sampled pseudo-Lipschitz bound: |f(rho') - f(rho)| <= K * delta for
# perturbations of Frobenius size delta, on states kept a boundary layer away
# from the simplex edge where entropic derivatives diverge.
LIPSCHITZ_K = 100.0
BOUNDARY_LAYER = 1e-3
C1_DELTAS = (1e-4, 1e-6)
# The boundary limit probe only asserts convergence to the limit value; the
# threshold admits the square-root cusps of the l1 measures (~1e-6 at the
# probe offset) while catching real jump discontinuities.
BOUNDARY_LIMIT_TOL = 1e-4

TOL_C2 = 1e-10
TOL_EXTREME = 1e-9
TOL_TRANSFER = 1e-12
TOL_CONVEX = 1e-9
TRANSFER_EPS = 1e-5


@dataclass(frozen=True)
class Counterexample:
    """States plus scalar context reproducing a criterion violation."""

    states: tuple
    detail: dict


@dataclass(frozen=True)
class CriterionReport:
    criterion: str
    measure: str
    kind: str
    trials: int
    worst_violation: float
    tolerance: float
    counterexample: Counterexample | None
    passed: bool


def _resolve(measure, kind=None):
    if isinstance(measure, str):
        fn = get_measure(measure)
        inferred = "P" if measure.startswith("p_") else "V"
        return measure, fn, kind or inferred
    if kind not in ("P", "V"):
        raise ValueError("callable measures need kind='P' or kind='V'")
    return getattr(measure, "__name__", "<callable>"), measure, kind


def _report(criterion, name, kind, trials, worst, tol, counterexample):
    passed = bool(worst <= tol)
    return CriterionReport(
        criterion=criterion,
        measure=name,
        kind=kind,
        trials=int(trials),
        worst_violation=float(worst),
        tolerance=tol,
        counterexample=None if passed else counterexample,
        passed=passed,
    )


def _interior_state(dim: int, stream) -> DensityMatrix:
    """Full-rank sample mixed toward identity so every eigenvalue >= BOUNDARY_LAYER."""
    rho = ginibre_density(dim, dim, stream)
    eta = min(0.5, 2.0 * dim * BOUNDARY_LAYER)
    m = (1.0 - eta) * rho.matrix + eta * np.eye(dim) / dim
    return _trusted_density(m)


def _traceless_hermitian(dim: int, rng, frobenius: float) -> np.ndarray:
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = (z + z.conj().T) / 2.0
    h -= np.eye(dim) * (h.trace().real / dim)
    return h * (frobenius / np.linalg.norm(h))


def _boundary_probe(fn, kind, dim) -> float:
    """|f(near) - f(limit)| for a pencil of states approaching the boundary."""
    if kind == "P":
        limit = np.zeros(dim)
        limit[0] = 1.0
        near = np.full(dim, 1e-12 / max(1, dim - 1))
        near[0] = 1.0 - 1e-12
        f_limit = fn(_trusted_density(np.diag(limit).astype(complex), limit))
        f_near = fn(_trusted_density(np.diag(near).astype(complex), np.sort(near)[::-1]))
        return abs(f_near - f_limit)
    # V: shrink the off-diagonal block of a coherent state to zero
    psi = np.ones(dim) / np.sqrt(dim)
    rho = np.outer(psi, psi)
    diag = np.diag(np.diagonal(rho)).astype(complex)
    near = (1.0 - 1e-12) * diag + 1e-12 * rho
    f_limit = fn(_trusted_density(diag))
    f_near = fn(_trusted_density(near))
    return abs(f_near - f_limit)


def check_c1_continuity(measure, dim: int, trials: int, seed, kind=None) -> CriterionReport:
    """Sampled difference-ratio bound |f(rho+H) - f(rho)| <= K ||H||_F.

    Interior states only (all eigenvalues above the boundary layer); the
    boundary itself is probed separately with a vanishing-parameter pencil
    whose limit must be attained to 1e-6.
    """
    name, fn, kind = _resolve(measure, kind)
    stream = seed if isinstance(seed, SeededStream) else SeededStream(seed)
    rng = stream.child(1).rng
    worst_ratio = 0.0
    counterexample = None
    for k in range(trials):
        rho = _interior_state(dim, stream.child(2 + k))
        f0 = fn(rho)
        for delta in C1_DELTAS:
            h = _traceless_hermitian(dim, rng, delta)
            perturbed = _trusted_density(rho.matrix + h)
            ratio = abs(fn(perturbed) - f0) / delta
            if ratio > worst_ratio:
                worst_ratio = ratio
                counterexample = Counterexample(
                    states=(rho, perturbed), detail={"delta": delta, "ratio": ratio}
                )
    boundary = _boundary_probe(fn, kind, dim)
    worst = max(worst_ratio / LIPSCHITZ_K, boundary / BOUNDARY_LIMIT_TOL)
    return _report("C1", name, kind, trials, worst, 1.0, counterexample)


def check_c2_permutation(measure, dim: int, seed, trials: int = 10_000, kind=None) -> CriterionReport:
    """Invariance under basis-index permutations.

    All d! permutations are applied for d <= 4, otherwise 100 sampled ones;
    ``trials`` is the total evaluation budget, so the number of sampled states
    is trials // (permutation count).
    """
    name, fn, kind = _resolve(measure, kind)
    stream = seed if isinstance(seed, SeededStream) else SeededStream(seed)
    if dim <= 4:
        perms = list(itertools.permutations(range(dim)))
    else:
        rng = stream.child(0).rng
        perms = [tuple(int(x) for x in rng.permutation(dim)) for _ in range(100)]
    n_states = max(8, trials // len(perms))
    worst = 0.0
    counterexample = None
    for k in range(n_states):
        rho = ginibre_density(dim, 1 + k % dim, stream.child(1 + k))
        f0 = fn(rho)
        for perm in perms:
            p = np.asarray(perm)
            conjugated = _trusted_density(rho.matrix[np.ix_(p, p)], rho.eigenvalues)
            dev = abs(fn(conjugated) - f0)
            if dev > worst:
                worst = dev
                counterexample = Counterexample(states=(rho,), detail={"permutation": perm})
    return _report("C2", name, kind, n_states * len(perms), worst, TOL_C2, counterexample)


def _extreme_candidates(kind: str, dim: int, rng):
    """(maximizers, minimizers) the criterion designates for each kind."""
    peaked = []
    for j in range(dim):
        lam = np.zeros(dim)
        lam[j] = 1.0
        peaked.append(_trusted_density(np.diag(lam).astype(complex), lam))
    uniform_diag = _trusted_density(np.eye(dim, dtype=complex) / dim, np.full(dim, 1.0 / dim))
    lam_pure = np.zeros(dim)
    lam_pure[0] = 1.0
    uniform_pure = []
    for phases in (np.zeros(dim), rng.uniform(0, 2 * np.pi, dim), rng.uniform(0, 2 * np.pi, dim)):
        psi = np.exp(1j * phases) / np.sqrt(dim)
        uniform_pure.append(_trusted_density(np.outer(psi, psi.conj()), lam_pure))
    if kind == "P":
        return peaked, [uniform_diag] + uniform_pure
    return uniform_pure, peaked


def check_c3_c4_extremes(measure, kind, dim: int, trials: int = 10_000, seed=0):
    """C3/C4: the designated configurations attain the sampled global extremes.

    Returns two reports, one for the maximum clause and one for the minimum
    clause (C3 covers peaked populations, C4 uniform ones).
    """
    name, fn, kind = _resolve(measure, kind)
    stream = seed if isinstance(seed, SeededStream) else SeededStream(seed)
    maximizers, minimizers = _extreme_candidates(kind, dim, stream.child(0).rng)
    f_max = max(fn(r) for r in maximizers)
    f_min = min(fn(r) for r in minimizers)

    worst_max = 0.0
    worst_min = 0.0
    ce_max = ce_min = None
    for k in range(trials):
        if k % 2 == 0:
            rho = ginibre_density(dim, 1 + k % dim, stream.child(1 + k))
        else:
            rho = haar_pure(dim, stream.child(1 + k)).projector()
        f = fn(rho)
        if f - f_max > worst_max:
            worst_max = f - f_max
            ce_max = Counterexample(states=(rho,), detail={"value": f, "candidate_max": f_max})
        if f_min - f > worst_min:
            worst_min = f_min - f
            ce_min = Counterexample(states=(rho,), detail={"value": f, "candidate_min": f_min})

    # C3 is the peaked-population clause, C4 the uniform one; which side of the
    # (max, min) split they sit on depends on the kind.
    if kind == "P":
        c3 = _report("C3", name, kind, trials, worst_max, TOL_EXTREME, ce_max)
        c4 = _report("C4", name, kind, trials, worst_min, TOL_EXTREME, ce_min)
    else:
        c3 = _report("C3", name, kind, trials, worst_min, TOL_EXTREME, ce_min)
        c4 = _report("C4", name, kind, trials, worst_max, TOL_EXTREME, ce_max)
    return c3, c4


def check_c5_transfer(measure, kind, dim: int, trials: int = 10_000, seed=0) -> CriterionReport:
    """C5: P cannot grow under an epsilon population transfer toward equality,
    V cannot grow when the off-diagonal block is shrunk by (1 - epsilon)."""
    name, fn, kind = _resolve(measure, kind)
    stream = seed if isinstance(seed, SeededStream) else SeededStream(seed)
    worst = 0.0
    counterexample = None
    for k in range(trials):
        sub = stream.child(1 + k)
        if kind == "P":
            lam = np.asarray(random_simplex(dim, sub))
            rng = sub.child(0).rng
            i, j = rng.choice(dim, size=2, replace=False)
            if lam[i] < lam[j]:
                i, j = j, i
            gap = lam[i] - lam[j]
            if gap <= 0.0:
                continue
            eps = min(TRANSFER_EPS, 0.5 * gap)
            moved = lam.copy()
            moved[i] -= eps
            moved[j] += eps
            before = _trusted_density(np.diag(lam).astype(complex), np.sort(lam)[::-1])
            after = _trusted_density(np.diag(moved).astype(complex), np.sort(moved)[::-1])
            detail = {"epsilon": eps, "from": int(i), "to": int(j)}
        else:
            before = ginibre_density(dim, dim, sub)
            diag = np.diag(np.diagonal(before.matrix)).astype(complex)
            shrunk = (1.0 - TRANSFER_EPS) * before.matrix + TRANSFER_EPS * diag
            after = _trusted_density(shrunk)
            detail = {"epsilon": TRANSFER_EPS}
        increase = fn(after) - fn(before)
        if increase > worst:
            worst = increase
            counterexample = Counterexample(states=(before, after), detail=detail)
    return _report("C5", name, kind, trials, worst, TOL_TRANSFER, counterexample)


def check_c6_convexity(measure, dim: int, trials: int = 10_000, seed=0, kind=None) -> CriterionReport:
    """C6: f(lambda rho1 + (1-lambda) rho2) <= lambda f(rho1) + (1-lambda) f(rho2)."""
    name, fn, kind = _resolve(measure, kind)
    stream = seed if isinstance(seed, SeededStream) else SeededStream(seed)
    grid = np.linspace(0.0, 1.0, 11)
    worst = 0.0
    counterexample = None
    for k in range(trials):
        rho1 = ginibre_density(dim, 1 + k % dim, stream.child(2 * k))
        rho2 = ginibre_density(dim, 1 + (k + 1) % dim, stream.child(2 * k + 1))
        f1, f2 = fn(rho1), fn(rho2)
        for lam in grid:
            mix = _trusted_density(lam * rho1.matrix + (1.0 - lam) * rho2.matrix)
            violation = fn(mix) - (lam * f1 + (1.0 - lam) * f2)
            if violation > worst:
                worst = violation
                counterexample = Counterexample(
                    states=(rho1, rho2, mix), detail={"lambda": float(lam)}
                )
    return _report("C6", name, kind, trials, worst, TOL_CONVEX, counterexample)


def full_audit(pair: MeasurePair, dim: int, seed=0, trials: int = 10_000) -> list[CriterionReport]:
    """Run C1-C6 for both members of a pair; the pair is certified for monotone
    construction only when every report passes."""
    stream = seed if isinstance(seed, SeededStream) else SeededStream(seed)
    reports = []
    members = (
        (pair.predictability_name, pair.predictability, "P"),
        (pair.visibility_name, pair.visibility, "V"),
    )
    for offset, (name, fn, kind) in enumerate(members):
        measure = name if name in MEASURES and MEASURES[name] is fn else fn
        s = stream.child(offset)
        reports.append(check_c1_continuity(measure, dim, trials, s.child(1), kind=kind))
        reports.append(check_c2_permutation(measure, dim, s.child(2), trials, kind=kind))
        reports.extend(check_c3_c4_extremes(measure, kind, dim, trials, s.child(3)))
        reports.append(check_c5_transfer(measure, kind, dim, trials, s.child(4)))
        reports.append(check_c6_convexity(measure, dim, trials, s.child(5), kind=kind))
    return reports


def audit_passed(reports) -> bool:
    return all(r.passed for r in reports)


# --- deliberately broken measures -----------------------------------------
# Each double is designed to fail the criterion named in TEST_DOUBLES while
# remaining a well-defined functional of a density matrix.

def quantized_step_predictability(rho: DensityMatrix) -> float:
    """Discontinuous: rho_00 snapped to a 0.05 grid."""
    return float(np.floor(rho.diagonal_probabilities[0] / 0.05) * 0.05)


def index_weighted_predictability(rho: DensityMatrix) -> float:
    """Permutation covariant: populations weighted by their basis index."""
    d = rho.diagonal_probabilities
    return float((np.arange(rho.dim) * d).sum() / max(1, rho.dim - 1))


def negated_l1_visibility(rho: DensityMatrix) -> float:
    """Order reversed: maximal on incoherent states instead of minimal."""
    from .measures import c_l1

    return rho.dim - 1.0 - c_l1(rho)


def displaced_minimum_predictability(rho: DensityMatrix) -> float:
    """Minimum sits at a lopsided population profile instead of the uniform one."""
    d = rho.diagonal_probabilities
    target = np.full(rho.dim, 0.3 / max(1, rho.dim - 1))
    target[0] = 0.7
    return float(((d - target) ** 2).sum())


def uniformity_reward_predictability(rho: DensityMatrix) -> float:
    """Grows under population equalization (inverted diagonal variance)."""
    d = rho.diagonal_probabilities
    return 1.0 - float((d * d).sum())


def sqrt_l1_visibility(rho: DensityMatrix) -> float:
    """Square root of a coherence measure: strictly concave along rays from
    incoherent states, so convexity fails."""
    from .measures import c_l1

    return float(np.sqrt(c_l1(rho)))


TEST_DOUBLES = {
    "quantized_step_predictability": (quantized_step_predictability, "P", "C1"),
    "index_weighted_predictability": (index_weighted_predictability, "P", "C2"),
    "negated_l1_visibility": (negated_l1_visibility, "V", "C3"),
    "displaced_minimum_predictability": (displaced_minimum_predictability, "P", "C4"),
    "uniformity_reward_predictability": (uniformity_reward_predictability, "P", "C5"),
    "sqrt_l1_visibility": (sqrt_l1_visibility, "V", "C6"),
}


def double_pair() -> MeasurePair:
    """A deliberately broken pair for exercising audit failure paths."""
    return MeasurePair(
        name="broken",
        predictability=uniformity_reward_predictability,
        visibility=sqrt_l1_visibility,
        alpha=lambda d: (d - 1.0) / d,
        predictability_name="uniformity_reward_predictability",
        visibility_name="sqrt_l1_visibility",
        monotone_name="s_l",
    )
