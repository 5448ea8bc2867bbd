"""Tests for ribbon spectra, localization metrics and zero-mode coalescence."""

import numpy as np
import pytest

from nhdeg.model import ModelParams
from nhdeg.ribbon import (bulk_gap_interval, in_gap_indices, localization,
                          obc_defective_check, ribbon_hamiltonian,
                          ribbon_spectrum, skin_metric)

# gapped topological regime with diagonal nonreciprocity switched on
P_TI = ModelParams(t1=0.75, ga=0.5, gb=0.3, gamma=0.5)
P_HERM = ModelParams(t1=0.75, gamma=0.5)
P_G0 = ModelParams(t1=0.75, ga=0.5, gb=0.3, gamma=0.0)


def test_localization_uniform_vector():
    rep = localization(np.ones(60) / np.sqrt(60), 30)
    assert rep.ipr == pytest.approx(1 / 60)
    assert rep.side == "delocalized"
    assert rep.center_of_mass == pytest.approx(14.5)


def test_localization_edge_vector():
    v = np.zeros(60)
    v[0] = 1.0
    rep = localization(v, 30)
    assert rep.side == "left"
    assert rep.ipr == pytest.approx(1.0)
    v2 = np.zeros(60)
    v2[29] = v2[59] = 1 / np.sqrt(2)
    assert localization(v2, 30).side == "right"


def test_localization_errors():
    with pytest.raises(ValueError):
        localization(np.zeros(60), 30)
    with pytest.raises(ValueError):
        localization(np.ones(10), 30)


def test_ribbon_hamiltonian_validation():
    with pytest.raises(ValueError):
        ribbon_hamiltonian(P_TI, "z", 30, 0.0)
    with pytest.raises(ValueError):
        ribbon_hamiltonian(P_TI, "x", 4, 0.0)


def test_ribbon_spectrum_sorted_and_sized():
    bands = ribbon_spectrum(P_TI, "x", 12, k_samples=4)
    assert len(bands) == 4
    for band in bands:
        assert len(band.eigenvalues) == 24
        assert np.all(np.diff(band.eigenvalues.real) > -1e-12)
        assert len(band.edge_flags) == 24


def test_hermitian_ribbon_spectrum_real():
    bands = ribbon_spectrum(P_HERM, "x", 16, k_values=[0.7, 2.1])
    for band in bands:
        assert np.abs(band.eigenvalues.imag).max() < 1e-10


def test_edge_modes_opposite_sides_near_crossing():
    # open y: the in-gap pair just off the crossing momentum sits at small
    # real energy with one state per edge
    k = np.pi / 2 - 0.05
    bands = ribbon_spectrum(P_TI, "y", 30, k_values=[k])
    gap = bulk_gap_interval(P_TI, "y", k)
    ing = in_gap_indices(bands[0], gap)
    assert len(ing) == 2
    sides = {bands[0].edge_flags[i] for i in ing}
    assert sides == {"left", "right"}
    assert all(abs(bands[0].eigenvalues[i].real) < 0.1 for i in ing)


def test_in_gap_modes_have_finite_lifetime_open_x():
    # deep in the gap the open-x chiral branches carry imaginary parts
    bands = ribbon_spectrum(P_TI, "x", 30, k_values=[1.2])
    gap = bulk_gap_interval(P_TI, "x", 1.2)
    ing = in_gap_indices(bands[0], gap)
    assert ing
    assert max(abs(bands[0].eigenvalues[i].imag) for i in ing) > 0.01


def test_in_gap_modes_nearly_real_open_y():
    bands = ribbon_spectrum(P_TI, "y", 30, k_values=[1.2])
    gap = bulk_gap_interval(P_TI, "y", 1.2)
    ing = in_gap_indices(bands[0], gap)
    assert ing
    assert max(abs(bands[0].eigenvalues[i].imag) for i in ing) < 0.01


def test_band_insulator_has_no_in_gap_modes():
    p_bi = P_TI.replace(v=10.0)
    for k in (-2.0, 0.4, 1.8):
        bands = ribbon_spectrum(p_bi, "y", 20, k_values=[k])
        gap = bulk_gap_interval(p_bi, "y", k)
        assert in_gap_indices(bands[0], gap) == []


def test_in_gap_count_zero_or_two_in_ti_phase():
    ks = np.linspace(-np.pi, np.pi, 17, endpoint=False)
    counts = []
    for k in ks:
        bands = ribbon_spectrum(P_TI, "y", 24, k_values=[k])
        gap = bulk_gap_interval(P_TI, "y", k)
        counts.append(len(in_gap_indices(bands[0], gap)))
    assert set(counts) <= {0, 2}
    assert counts.count(2) >= len(ks) // 2


def test_obc_defective_pair_open_x():
    # the skin effect drags both zero modes to one edge where they coalesce
    rep = obc_defective_check(P_G0, "x", 30, np.pi / 2)
    assert not rep.absent
    assert rep.overlap > 1 - 1e-6
    assert max(abs(e) for e in rep.eigenvalues) < 1e-6


def test_obc_independent_pair_open_y():
    rep = obc_defective_check(P_TI, "y", 30, np.pi / 2)
    assert not rep.absent
    assert rep.overlap < 0.5


def test_obc_hermitian_orthogonal_pair():
    rep = obc_defective_check(P_HERM, "y", 30, np.pi / 2)
    assert rep.overlap < 0.1


def test_obc_absent_when_nothing_near_zero():
    rep = obc_defective_check(P_TI.replace(v=10.0), "y", 16, 0.0)
    assert rep.absent


def test_skin_metric_above_baseline():
    skin = skin_metric(P_TI, "y", 30, 0.0)
    base = skin_metric(P_HERM, "y", 30, 0.0)
    assert skin > 3 * base


def test_skin_metric_scaling_with_width():
    # doubling the width halves the delocalized baseline, while the
    # skin-localized value stays of the same order
    base_30 = skin_metric(P_HERM, "y", 30, 0.0)
    base_60 = skin_metric(P_HERM, "y", 60, 0.0)
    assert base_60 < 0.65 * base_30
    skin_30 = skin_metric(P_TI, "y", 30, 0.0)
    skin_60 = skin_metric(P_TI, "y", 60, 0.0)
    assert skin_60 > 0.5 * skin_30


def test_in_gap_modes_converge_with_width():
    vals = {}
    for n in (30, 60):
        bands = ribbon_spectrum(P_TI, "x", n, k_values=[2.0])
        gap = bulk_gap_interval(P_TI, "x", 2.0)
        ing = in_gap_indices(bands[0], gap)
        vals[n] = sorted((bands[0].eigenvalues[i] for i in ing),
                         key=lambda z: z.real)
    assert len(vals[30]) == len(vals[60]) == 2
    for a, b in zip(vals[30], vals[60]):
        assert abs(a - b) < 1e-3