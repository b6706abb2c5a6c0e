"""Acceptance suite.

Each test runs one acceptance criterion at its stated sample counts and
tolerances and prints one pass/fail line (visible with ``pytest -s``; pytest
also shows the captured line when a criterion fails). Expected values come
from independent oracles: closed-form two-qubit concurrence formulas, the
robustness identity, hand-evaluated spectra, and known Haar moments.
"""

import contextlib
import io
import time

import numpy as np
import pytest

from qduality.criteria import (
    TEST_DOUBLES,
    check_c1_continuity,
    check_c2_permutation,
    check_c3_c4_extremes,
    check_c5_transfer,
    check_c6_convexity,
)
from qduality.cli import main
from qduality.measures import MEASURES, registry
from qduality.monotones import check_schur_concavity, w_l1, wootters_concurrence
from qduality.relations import check_complete, check_incomplete
from qduality.roof import RoofConfig, convex_roof_estimate, entanglement_of_formation_oracle
from qduality.sampling import SeededStream, ginibre_density, haar_bipartite, haar_pure, random_simplex
from qduality.states import partial_trace_B, validate_density_matrix

TOL_IDENTITY = 1e-9
TOL_ROOF = 1e-3


def _line(number: int, description: str, detail: str, passed: bool) -> bool:
    status = "PASS" if passed else "FAIL"
    print(f"[acceptance {number:02d}] {description}: {detail} -> {status}")
    return passed


def werner(p):
    bell = np.zeros(4)
    bell[0] = bell[3] = 1 / np.sqrt(2)
    return validate_density_matrix(p * np.outer(bell, bell) + (1 - p) * np.eye(4) / 4)


def test_01_ccr_identity_vn():
    """P_vn + C_re + S_vn equals log2(d_A) on Haar bipartite pure states."""
    pair = registry()[0]
    assert pair.name == "vn"
    start = time.perf_counter()
    worst = 0.0
    for d in (2, 3, 4):
        stream = SeededStream(1000 + d)
        for k in range(10_000):
            psi = haar_bipartite(d, d, stream.child(k))
            worst = max(worst, abs(check_complete(pair, psi).slack))
    elapsed = time.perf_counter() - start
    ok = worst <= TOL_IDENTITY and elapsed <= 60.0
    assert _line(1, "CCR identity (vn)",
                 f"max |slack| = {worst:.3e} over 30000 states, {elapsed:.1f}s", ok)


def test_02_complete_relations_other_pairs():
    """alpha - P - C - E vanishes for the l1, wy and hs pairs on the same sweep."""
    pairs = [p for p in registry() if p.name != "vn"]
    worst = {p.name: 0.0 for p in pairs}
    for d in (2, 3, 4):
        stream = SeededStream(1000 + d)
        for k in range(10_000):
            psi = haar_bipartite(d, d, stream.child(k))
            for pair in pairs:
                worst[pair.name] = max(worst[pair.name], abs(check_complete(pair, psi).slack))
    detail = ", ".join(f"{n}: {v:.3e}" for n, v in worst.items())
    ok = all(v <= TOL_IDENTITY for v in worst.values())
    assert _line(2, "complete relations (l1, wy, hs)", f"max |slack| {detail}", ok)


def test_03_incomplete_slack_nonnegative():
    """Slack of every incomplete relation stays in [0 - tol, alpha] on Ginibre states."""
    pairs = registry()
    min_slack = np.inf
    max_excess = -np.inf
    for d in (2, 3, 4, 5):
        stream = SeededStream(3000 + d)
        for k in range(100_000):
            rho = ginibre_density(d, 1 + k % d, stream.child(k))
            for pair in pairs:
                rep = check_incomplete(pair, rho)
                min_slack = min(min_slack, rep.slack)
                max_excess = max(max_excess, rep.slack - rep.alpha)
    ok = min_slack >= -TOL_IDENTITY and max_excess <= TOL_IDENTITY
    assert _line(3, "incomplete slack bounds",
                 f"min slack = {min_slack:.3e}, max (slack - alpha) = {max_excess:.3e} "
                 f"over 4x100000 states", ok)


def test_04_pure_saturation_and_mixed_gap():
    """Pure states saturate every pair; mixed states keep a strictly positive gap."""
    pairs = registry()
    worst_pure = 0.0
    for d in (2, 3, 4, 5):
        stream = SeededStream(4000 + d)
        for k in range(10_000):
            rho = haar_pure(d, stream.child(k)).projector()
            for pair in pairs:
                worst_pure = max(worst_pure, abs(check_incomplete(pair, rho).slack))
    min_mixed = np.inf
    kept = 0
    for d in (2, 3, 4, 5):
        stream = SeededStream(4500 + d)
        for k in range(10_000):
            rho = ginibre_density(d, 1 + k % d, stream.child(k))
            if rho.purity > 0.99:
                continue
            kept += 1
            for pair in pairs:
                min_mixed = min(min_mixed, check_incomplete(pair, rho).slack)
    ok = worst_pure <= TOL_IDENTITY and min_mixed > 1e-6
    assert _line(4, "pure saturation / mixed gap",
                 f"max pure |slack| = {worst_pure:.3e}; observed min mixed slack = "
                 f"{min_mixed:.3e} over {kept} states with purity <= 0.99", ok)


def test_05_convex_roof_vs_two_qubit_oracles():
    """Roofs of s_l and s_vn match the tangle/2 and formation-entropy closed forms."""
    start = time.perf_counter()
    states = []
    stream = SeededStream(5000)
    for k in range(50):
        states.append((f"random[{k}]", ginibre_density(4, 1 + k % 4, stream.child(k))))
    for p in (0.2, 0.5, 0.9, 1.0):
        states.append((f"werner[{p}]", werner(p)))

    worst_sl = worst_svn = 0.0
    targets_09 = {}
    for idx, (label, rho) in enumerate(states):
        c = wootters_concurrence(rho)
        sl_target = c * c / 2.0
        svn_target = entanglement_of_formation_oracle(rho)
        sl = convex_roof_estimate("s_l", rho, (2, 2), RoofConfig(seed=idx)).value
        svn = convex_roof_estimate("s_vn", rho, (2, 2), RoofConfig(seed=idx)).value
        worst_sl = max(worst_sl, abs(sl - sl_target))
        worst_svn = max(worst_svn, abs(svn - svn_target))
        if label == "werner[0.9]":
            targets_09 = {"s_l": sl, "s_vn": svn}
    elapsed = time.perf_counter() - start

    ok = (
        worst_sl <= TOL_ROOF
        and worst_svn <= TOL_ROOF
        and abs(targets_09["s_l"] - 0.36125) <= TOL_ROOF
        and abs(targets_09["s_vn"] - 0.7893549610277838) <= TOL_ROOF
        and elapsed <= 600.0
    )
    assert _line(5, "convex roof vs two-qubit oracles",
                 f"max |roof - oracle|: s_l {worst_sl:.2e}, s_vn {worst_svn:.2e}; "
                 f"werner(0.9) -> {targets_09['s_l']:.6f}/{targets_09['s_vn']:.6f}; "
                 f"{elapsed:.0f}s (default config)", ok)


def _reproduce_violation(fn, designated, report):
    """Re-evaluate a counterexample and return the reproduced violation size."""
    ce = report.counterexample
    if designated == "C1":
        rho, perturbed = ce.states
        return abs(fn(perturbed) - fn(rho)) / ce.detail["delta"] / 100.0
    if designated == "C2":
        (rho,) = ce.states
        p = np.asarray(ce.detail["permutation"])
        from qduality.states import _trusted_density

        conj = _trusted_density(rho.matrix[np.ix_(p, p)])
        return abs(fn(conj) - fn(rho))
    if designated == "C3":
        (rho,) = ce.states
        return ce.detail["candidate_min"] - fn(rho)
    if designated == "C4":
        (rho,) = ce.states
        return fn(rho) - ce.detail["candidate_min"] if "candidate_min" in ce.detail else 0.0
    if designated == "C5":
        before, after = ce.states
        return fn(after) - fn(before)
    rho1, rho2, mix = ce.states
    lam = ce.detail["lambda"]
    return fn(mix) - (lam * fn(rho1) + (1 - lam) * fn(rho2))


def test_06_criteria_audit():
    """Every built-in measure passes C1-C6 at d in {2,3,4}; every double fails on cue."""
    trials = 10_000
    failures = []
    for name in sorted(MEASURES):
        kind = "P" if name.startswith("p_") else "V"
        for d in (2, 3, 4):
            stream = SeededStream(6000 + d)
            reports = [
                check_c1_continuity(name, d, trials, stream.child(1)),
                check_c2_permutation(name, d, stream.child(2), trials),
                *check_c3_c4_extremes(name, kind, d, trials, stream.child(3)),
                check_c5_transfer(name, kind, d, trials, stream.child(4)),
                check_c6_convexity(name, d, trials, stream.child(5)),
            ]
            failures.extend(
                (name, d, r.criterion, r.worst_violation) for r in reports if not r.passed
            )

    doubles_ok = True
    double_notes = []
    for dname, (fn, kind, designated) in sorted(TEST_DOUBLES.items()):
        d = 3 if designated in ("C2", "C3", "C4", "C5") else 2
        stream = SeededStream(6600)
        if designated == "C1":
            rep = check_c1_continuity(fn, d, trials, stream, kind=kind)
        elif designated == "C2":
            rep = check_c2_permutation(fn, d, stream, trials, kind=kind)
        elif designated in ("C3", "C4"):
            c3, c4 = check_c3_c4_extremes(fn, kind, d, trials, stream)
            rep = c3 if designated == "C3" else c4
        elif designated == "C5":
            rep = check_c5_transfer(fn, kind, d, trials, stream)
        else:
            rep = check_c6_convexity(fn, d, trials, stream, kind=kind)
        reproduced = 0.0
        if not rep.passed and rep.counterexample is not None:
            reproduced = _reproduce_violation(fn, designated, rep)
        if rep.passed or reproduced <= 0.0:
            doubles_ok = False
            double_notes.append(f"{dname} did not fail {designated}")

    ok = not failures and doubles_ok
    detail = (
        f"7 measures x C1-C6 x d in (2,3,4) at {trials} trials; "
        f"{len(TEST_DOUBLES)} doubles each fail their designated criterion with a "
        f"reproducible counterexample"
    )
    if failures:
        detail += f"; built-in failures: {failures[:3]}"
    if double_notes:
        detail += f"; {double_notes}"
    assert _line(6, "criteria audit", detail, ok)


def test_07_robustness_identity():
    """w_l1 equals (sum sqrt(lam))^2 - 1 on the probability simplex."""
    worst = 0.0
    for d in (2, 3, 4, 5, 6):
        stream = SeededStream(7000 + d)
        for _ in range(20_000):
            lam = np.asarray(random_simplex(d, stream))
            expected = float(np.square(np.sqrt(lam).sum()) - 1.0)
            worst = max(worst, abs(float(w_l1(lam)) - expected))
    ok = worst <= 1e-12
    assert _line(7, "robustness identity",
                 f"max |w_l1 - ((sum sqrt)^2 - 1)| = {worst:.3e} over 100000 points", ok)


def test_08_schur_concavity():
    """The four monotones reverse the majorization order on constructed pairs."""
    worst = 0.0
    for name in ("s_vn", "s_l", "w_l1", "w_wy"):
        for d in (2, 3, 4, 5, 6):
            rep = check_schur_concavity(name, trials=10_000, dim=d, seed=8000 + d)
            worst = max(worst, rep.worst_violation)
            if not rep.passed:
                break
    ok = worst <= 1e-10
    assert _line(8, "Schur concavity",
                 f"max violation = {worst:.3e} over 4 monotones x 5 dims x 10000 pairs", ok)


def test_09_haar_moment_sanity():
    """Mean reduced purity of 2x2 Haar pure states matches the known 0.8 average."""
    stream = SeededStream(9000)
    total = 0.0
    n = 100_000
    for _ in range(n):
        total += partial_trace_B(haar_bipartite(2, 2, stream)).purity
    mean = total / n
    ok = abs(mean - 0.8) <= 0.005
    assert _line(9, "Haar moment sanity", f"mean reduced purity = {mean:.5f} (target 0.8 +- 0.005)", ok)


def test_10_determinism(tmp_path):
    """Fixed seeds make sweep and roof outputs byte-identical across runs."""
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for path in paths:
        code = main(["sweep", "--dims", "2x2", "--trials", "50", "--seed", "42",
                     "--out", str(path)])
        assert code == 0
    sweep_same = paths[0].read_bytes() == paths[1].read_bytes()

    outputs = []
    for _ in range(2):
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = main(["roof", "--werner", "0.9", "--monotone", "s_l",
                         "--restarts", "4", "--seed", "42"])
        assert code == 0
        outputs.append(buf.getvalue())
    roof_same = outputs[0] == outputs[1]

    ok = sweep_same and roof_same
    assert _line(10, "determinism", f"sweep bytes identical: {sweep_same}; "
                 f"roof output identical: {roof_same}", ok)
