"""Entropy-derived observables against hand-built states and the dense oracle."""

import numpy as np
import pytest

from mocsim import observables as obs
from mocsim.dense import DenseState
from mocsim.sampler import BasisMode, RangeDistribution, sample_layer
from mocsim.tableau import PauliString, StabilizerTableau


def ghz_tableau(n):
    """GHZ-class state: ZZ parity chain on |+...+>."""
    rng = np.random.default_rng(0)
    tab = StabilizerTableau.plus_state(n)
    for i in range(n - 1):
        out = tab.measure(PauliString.two_site("ZZ", i, i + 1, n), rng)
        assert out in (-1, 1)
    return tab


def bell_pairs_tableau(pairs, n):
    rng = np.random.default_rng(0)
    tab = StabilizerTableau.plus_state(n)
    for (i, j) in pairs:
        tab.measure(PauliString.two_site("ZZ", i, j, n), rng)
    return tab


def test_ghz_tmi_is_plus_one():
    tab = ghz_tableau(8)
    assert obs.standard_tmi(tab) == 1


def test_ghz_mutual_information_profile_flat():
    tab = ghz_tableau(8)
    profile = obs.mi_profile(tab)
    assert np.array_equal(profile, np.ones(4))


def test_product_state_everything_zero():
    tab = StabilizerTableau.plus_state(8)
    assert obs.half_cut_entropy(tab) == 0
    assert obs.antipodal_mutual_information(tab) == 0
    assert obs.standard_tmi(tab) == 0
    assert obs.bell_census(tab) == {}


def test_bell_census_counts_distances():
    # Pairs (0,1) and (4,7): minimal-arc distances 1 and 3 on a ring of 8.
    tab = bell_pairs_tableau([(0, 1), (4, 7)], 8)
    assert obs.bell_census(tab) == {1: 1, 3: 1}


def test_bell_census_requires_decoupling():
    # GHZ qubits have S_i = 1 but S_ij = 1 != 0: no pair qualifies.
    tab = ghz_tableau(6)
    assert obs.bell_census(tab) == {}


def test_mutual_information_disjointness_checked():
    tab = StabilizerTableau.plus_state(4)
    with pytest.raises(ValueError):
        obs.mutual_information(tab, np.array([0, 1]), np.array([1, 2]))
    with pytest.raises(ValueError):
        obs.tripartite_mutual_information(
            tab, np.array([0]), np.array([0]), np.array([2]))


def test_quarter_masks_partition():
    a, b, c, d = obs.quarter_masks(16)
    assert np.array_equal(np.concatenate([a, b, c, d]), np.arange(16))
    assert len(a) == len(b) == len(c) == 4


def test_minimal_arc_distance():
    assert obs.minimal_arc_distance(0, 7, 8) == 1
    assert obs.minimal_arc_distance(2, 6, 8) == 4
    assert obs.minimal_arc_distance(3, 3, 8) == 0


def test_ancilla_excluded_from_system_observables():
    tab = StabilizerTableau.ancilla_seeded(8, seed_site=0)
    # system observables on the first 8 sites only
    assert obs.half_cut_entropy(tab, 8) == tab.entropy(np.arange(4))
    assert obs.ancilla_entropy(tab) == 1


def test_observables_match_dense_oracle():
    rng = np.random.default_rng(5)
    n = 8
    for _ in range(10):
        tab = StabilizerTableau.plus_state(n)
        den = DenseState.plus_state(n)
        dist = RangeDistribution(n, 1.0)
        for _ in range(15):
            layer = sample_layer(n, 1, dist, BasisMode("random"), rng)
            (i, j), basis = layer.pairs[0], layer.bases[0]
            outcome = tab.measure(PauliString.two_site(basis, i, j, n), rng)
            den.project_parity(basis, i, j, outcome)

        def dense_s(region):
            return den.entropy(np.asarray(region))

        a, b, c, _ = obs.quarter_masks(n)
        dense_tmi = (
            dense_s(a) + dense_s(b) + dense_s(c)
            - dense_s(np.concatenate([a, b])) - dense_s(np.concatenate([a, c]))
            - dense_s(np.concatenate([b, c])) + dense_s(np.concatenate([a, b, c]))
        )
        assert obs.standard_tmi(tab) == pytest.approx(dense_tmi, abs=1e-8)
        assert obs.half_cut_entropy(tab) == pytest.approx(
            dense_s(np.arange(n // 2)), abs=1e-8)


def test_mi_profile_symmetric_state():
    # Bell pair at maximal distance: profile nonzero only at r = N/2.
    tab = bell_pairs_tableau([(0, 4)], 8)
    profile = obs.mi_profile(tab)
    assert profile[3] == 2  # r = 4
    assert profile[:3].sum() == 0
