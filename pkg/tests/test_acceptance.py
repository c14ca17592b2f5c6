"""End-to-end acceptance checks: one test (one pass/fail line) per guarantee.

These exercise the full pipeline at desk scale — the file takes on the order
of an hour on a single core.  Each test pins its own tolerances; nothing here
is shared with the unit suites.
"""

import functools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from mocsim import fits
from mocsim.harness import (
    ExperimentConfig,
    SweepCell,
    depth_sufficiency_check,
    ensemble_mean_series,
    fit_purification_tau,
    run_cell,
    run_ensemble,
    run_sweep,
    time_to_steady_state,
)
from mocsim.sampler import (
    BasisMode,
    RangeDistribution,
    count_crossings_mc,
    expected_crossings,
    resolve_m2,
)
from mocsim.statmech import (
    Permutation,
    build_lattice,
    effective_gate_projection,
    haar_mc_replica,
    partition_function,
    weingarten_table,
    wm_bruteforce,
    wm_weight,
)
from mocsim.verify import oracle_suite


def test_stabilizer_matches_dense_oracle():
    """200 random circuits at N <= 8: every bipartition entropy at every
    checkpoint agrees between the tableau and the dense simulator."""
    t0 = time.time()
    lines = oracle_suite(n_max=8, n_circuits=200, depth=20, seed=0)
    assert all(line.ok for line in lines), [line.detail for line in lines]
    assert time.time() - t0 < 120


def test_wm_weight_matches_bruteforce_exhaustively():
    t0 = time.time()
    for n, count in ((2, 16), (3, 1296)):
        perms = Permutation.all(n)
        for d in (2, 3):
            checked = 0
            for s1 in perms:
                for s2 in perms:
                    for t1 in perms:
                        for t2 in perms:
                            assert wm_weight(s1, s2, t1, t2, d) == \
                                wm_bruteforce(s1, s2, t1, t2, d)
                            checked += 1
            assert checked == count
    # two-replica weights: d^3 when all four spins agree, d^2 otherwise
    ident, swap = Permutation.all(2)
    assert wm_weight(ident, ident, ident, ident, 2) == 8
    assert wm_weight(ident, swap, ident, ident, 2) == 4
    assert time.time() - t0 < 60


def _haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_weingarten_inverts_gram_and_matches_haar_mc():
    t0 = time.time()
    for n in (1, 2, 3):
        for d in (2, 3, 4):
            if d < n:
                with pytest.raises(ValueError, match="singular"):
                    weingarten_table(n, d)
                continue
            assert weingarten_table(n, d).gram_times_wg_is_identity()
    # E|U_00|^4 = sum over S_2 x S_2 of Wg, checked against 1e5 Haar samples
    rng = np.random.default_rng(1)
    samples = 100_000
    for d in (2, 3):
        table = weingarten_table(2, d)
        pred = float(sum(table.wg(s, t) for s in table.perms for t in table.perms))
        draws = np.empty(samples)
        for k in range(samples):
            draws[k] = abs(_haar_unitary(d, rng)[0, 0]) ** 4
        err = draws.std(ddof=1) / math.sqrt(samples)
        assert abs(draws.mean() - pred) < 3 * err
    assert time.time() - t0 < 120


REPLICA_CASES = [
    (2, [[(0, 1)]], [0]),
    (3, [[(0, 1)], [(1, 2)]], [0]),
    (4, [[(0, 1), (2, 3)], [(1, 2)]], [0, 1]),
]


def test_replica_partition_function_matches_dense_mc():
    t0 = time.time()
    rng = np.random.default_rng(3)
    for n_qubits, layers, region in REPLICA_CASES:
        z_a = partition_function(build_lattice(n_qubits, layers, region))
        z_0 = partition_function(build_lattice(n_qubits, layers, None))
        exact = float(Fraction(z_a, z_0))
        est, err = haar_mc_replica(n_qubits, layers, region, 100_000, rng)
        assert abs(est - exact) < 3 * err, (n_qubits, exact, est, err)
    assert time.time() - t0 < 600


def test_effective_gate_decomposition():
    _, c, j, residual = effective_gate_projection()
    assert residual < 1e-10
    assert c == pytest.approx(1 / 3, abs=1e-12)
    assert j == pytest.approx(1 / 6, abs=1e-12)


def test_entanglement_transition_random_basis():
    """Density 0.2: alpha = 0 is volume-law, alpha = 4 is sub-volume."""
    ns = (16, 32, 64, 128)
    rows = run_sweep(
        [SweepCell(0.0, 0.2, BasisMode("random"), ns),
         SweepCell(4.0, 0.2, BasisMode("random"), ns)],
        n_trajectories=100, seed=41, purify=False)
    assert rows[0].entanglement is not None and rows[1].entanglement is not None
    assert rows[0].entanglement.verdict == "volume", rows[0].entanglement
    assert rows[1].entanglement.verdict == "log", rows[1].entanglement


def test_single_basis_transition_shift():
    """Density 0.5, one shared basis per layer: the verdict flips between
    alpha = 1 and alpha = 3 (transition sits lower than in the random-basis
    protocol)."""
    ns = (16, 32, 64, 128)
    rows = run_sweep(
        [SweepCell(1.0, 0.5, BasisMode("single"), ns),
         SweepCell(3.0, 0.5, BasisMode("single"), ns)],
        n_trajectories=32, seed=43, purify=False)
    assert rows[0].entanglement.verdict == "volume", rows[0].entanglement
    assert rows[1].entanglement.verdict == "log", rows[1].entanglement


def _purify_tau(n, alpha, density, basis, trajectories, seed, depth=None):
    cfg = ExperimentConfig(
        n_qubits=n, alpha=alpha, density=density, basis=basis,
        purification=True, depth=depth, n_trajectories=trajectories, seed=seed)
    ens = run_ensemble(cfg)
    return fit_purification_tau(ens[0].layers, ensemble_mean_series(ens, "s_ancilla"))


def test_purification_dichotomy():
    rnd = BasisMode("random")
    # alpha = 0: mixed phase, tau growing faster than linearly in N
    taus0 = []
    for n in (12, 16, 20, 24, 28, 32):
        tau, censored = _purify_tau(n, 0.0, 0.5, rnd, 40, seed=7, depth=3000)
        assert not censored, n
        taus0.append((n, tau))
    rep = fits.classify_purification([p[0] for p in taus0], [p[1] for p in taus0],
                                     sparse=False)
    assert rep.verdict == "mixed", (rep, taus0)

    # alpha = 4, density 0.2: pure phase, tau ~ N
    taus4 = []
    for n in (16, 24, 32, 48, 64):
        tau, _ = _purify_tau(n, 4.0, 0.2, rnd, 100, seed=9)
        taus4.append((n, tau))
    rep = fits.classify_purification([p[0] for p in taus4], [p[1] for p in taus4],
                                     sparse=False)
    assert rep.verdict == "pure", (rep, taus4)
    assert rep.fits["linear"].params[0] > 0  # tau grows with N

    # single basis, density 0.5: tau ~ 1 layer, flat in N
    taus1 = [_purify_tau(n, 2.0, 0.5, BasisMode("single"), 400, seed=11)[0]
             for n in (16, 32, 64)]
    mean = float(np.mean(taus1))
    assert 0.5 < mean < 2.0, taus1
    assert (max(taus1) - min(taus1)) / mean < 0.20, taus1


def test_xxz_criticality():
    nn = float("inf")
    # power-law MI decay at p = 1/3 on the sparse nearest-neighbor circuit
    res = run_cell(ExperimentConfig(
        n_qubits=128, alpha=nn, density=0.0, basis=BasisMode("xxz", 1 / 3),
        n_trajectories=24, seed=21, track_mi_profile=True))
    assert res.kappa is not None
    assert abs(res.kappa - 1.8) < 0.4, (res.kappa, res.kappa_r2)

    # half-cut entropy grows logarithmically with N
    pts = []
    for n in (16, 32, 64, 128):
        r = run_cell(ExperimentConfig(
            n_qubits=n, alpha=nn, density=0.0, basis=BasisMode("xxz", 1 / 3),
            n_trajectories=24, seed=22))
        pts.append((n, r.steady["s_half"].mean))
    rep = fits.classify_entanglement([p[0] for p in pts], [p[1] for p in pts])
    assert rep.verdict == "log", (rep, pts)

    # p = 0.9: long-distance MI is nonzero and distance-independent
    r9 = run_cell(ExperimentConfig(
        n_qubits=64, alpha=nn, density=0.0, basis=BasisMode("xxz", 0.9),
        n_trajectories=24, seed=23, track_mi_profile=True))
    tail = r9.mi_profile_mean[15:]  # r in [16, N/2]
    assert tail.min() > 0.3, tail
    assert (tail.max() - tail.min()) / tail.mean() < 0.5, tail


TSS_GRIDS = {0.5: (32, 64, 128, 256), 0.0: (32, 64, 128)}


@functools.cache
def _tss_ensemble(density, n):
    ens = run_ensemble(ExperimentConfig(
        n_qubits=n, alpha=0.0, density=density, n_trajectories=24, seed=31))
    steady = float(np.mean([np.abs(t.values["tmi"][-20:]).mean() for t in ens]))
    return ens, steady


def test_time_to_steady_state_scaling():
    """Settling time of the tripartite mutual information under the pinned
    sustained-entry rule (trajectory enters and remains within 1% of steady):
    log N when dense, N log N in the sparse limit."""
    for density, sparse in ((0.5, False), (0.0, True)):
        times = []
        for n in TSS_GRIDS[density]:
            ens, steady = _tss_ensemble(density, n)
            per_traj = []
            for traj in ens:
                t, _ = time_to_steady_state(traj.layers, np.abs(traj.values["tmi"]),
                                            steady)
                if t is not None:
                    per_traj.append(t)
            assert per_traj, (
                "sustained-entry settling time undefined at "
                f"density={density} N={n}: integer-valued I3 fluctuates by "
                "1-3 bits while the 1% band is ~0.05, so no trajectory "
                "ever remains in band")
            times.append((n, float(np.mean(per_traj))))
        rep = fits.classify_tss([n for n, _ in times], [t for _, t in times],
                                sparse=sparse)
        assert rep.verdict == ("nlogn" if sparse else "log"), (rep, times)


def test_time_to_steady_fraction_scaling():
    """Companion saturation-time diagnostic: first time |I3| reaches 90% of
    its steady magnitude, which is defined for every trajectory, separates
    the regimes the same way: dense -> log N, sparse -> N log N."""
    for density, sparse in ((0.5, False), (0.0, True)):
        times = []
        for n in TSS_GRIDS[density]:
            ens, steady = _tss_ensemble(density, n)
            per_traj = []
            for traj in ens:
                hit = np.nonzero(np.abs(traj.values["tmi"]) >= 0.9 * steady)[0]
                if hit.size:
                    per_traj.append(float(traj.layers[hit[0]]))
            assert per_traj, (density, n)
            times.append((n, float(np.mean(per_traj))))
        rep = fits.classify_tss([n for n, _ in times], [t for _, t in times],
                                sparse=sparse)
        assert rep.verdict == ("nlogn" if sparse else "log"), (rep, times)


def test_crossing_statistics():
    """9-point (alpha x density) grid at N = 128: sampled layer crossings vs
    the independent-pair closed form, 3-sigma Poisson bounds."""
    t0 = time.time()
    rng = np.random.default_rng(5)
    n, layers = 128, 20_000
    misses = []
    for alpha in (0.0, 2.0, 4.0):
        for density in (0.0, 0.2, 0.5):
            m2 = resolve_m2(n, density)
            expected = expected_crossings(n, alpha, m2)
            counts = count_crossings_mc(n, alpha, m2, BasisMode("random"),
                                        n // 2, layers, rng)
            z = (counts.mean() - expected) / math.sqrt(expected / layers)
            if abs(z) > 3:
                misses.append((alpha, density, round(float(z), 1)))
    assert not misses, (
        "packed layers deviate from the independent-pair estimate at "
        f"(alpha, density, z) = {misses}")
    # alpha = 2: mean pair distance grows like log N
    sizes = [64, 128, 256, 512, 1024, 2048, 4096]
    means = [RangeDistribution(s, 2.0).mean_distance() for s in sizes]
    x = np.log(sizes)
    a, b = np.polyfit(x, means, 1)
    ss_res = float(np.sum((means - (a * x + b)) ** 2))
    ss_tot = float(np.sum((means - np.mean(means)) ** 2))
    assert 1 - ss_res / ss_tot > 0.99
    assert time.time() - t0 < 300


def test_range_marginals():
    assert abs(RangeDistribution(4096, 2.0).probs[0] - 0.61) < 0.02
    assert abs(RangeDistribution(4096, 4.0).probs[0] - 0.92) < 0.02


def test_depth_sufficiency_guard():
    truncated = ExperimentConfig(n_qubits=32, alpha=1.0, density=0.5,
                                 n_trajectories=32, seed=5, depth=12)
    ok, msg = depth_sufficiency_check(truncated)
    assert not ok, msg
    converged = ExperimentConfig(n_qubits=12, alpha=1.0, density=0.5,
                                 n_trajectories=32, seed=5)
    ok, msg = depth_sufficiency_check(converged)
    assert ok, msg
