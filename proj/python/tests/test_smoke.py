import math

import pytest

import hannay_vdp as hv


def test_frequency_series():
    assert hv.limit_cycle_frequency(hv.Params(1.0, 0.3)) == pytest.approx(0.9944198242, abs=1e-10)
    assert hv.limit_cycle_frequency(hv.Params(1.0, 0.3), order=2) == pytest.approx(1 - 0.09 / 16)
    with pytest.raises(hv.InvalidArgument):
        hv.limit_cycle_frequency(hv.Params(1.0, 0.3), order=7)


def test_measured_cycle_matches_series():
    p = hv.Params(1.0, 0.1)
    lc = hv.measure(p, 128)
    assert abs(lc.frequency - hv.limit_cycle_frequency(p)) <= 1e-6
    assert len(lc.R_table) == 128
    assert lc.psi(0.0) == pytest.approx(0.0, abs=1e-12)


def test_square_hannay_angle_closed_form():
    loop = hv.ParamLoop.square(0.6, 0.8, 0.1, 0.3)
    exact = (0.3 - 0.1) / 8 * (1 / 0.6 - 1 / 0.8)
    assert hv.hannay_angle(loop) == pytest.approx(exact, abs=1e-10)
    assert hv.hannay_angle_green(loop) == pytest.approx(exact, abs=1e-8)
    assert hv.hannay_angle(loop.reversed()) == pytest.approx(-exact, abs=1e-10)


def test_ellipse_hannay_angle_closed_form():
    loop = hv.ParamLoop.ellipse(0.8, 0.1, 0.2, 0.1)
    assert hv.hannay_angle(loop) == pytest.approx(math.pi * (4 / math.sqrt(15) - 1) / 8, abs=1e-9)


def test_geometric_phase_approaches_hannay_angle():
    loop = hv.ParamLoop.square(0.6, 0.8, 0.1, 0.3)
    grid = hv.frozen_grid(loop, n_s=32, n_theta=256)
    r = grid.sweep(grid.duration_for_cycles(300))
    assert abs(r.geometric_phase - hv.hannay_angle(loop)) < 1e-3
    flipped = grid.sweep(grid.duration_for_cycles(300), sense=hv.PhaseSense.along_flow)
    assert flipped.geometric_phase == pytest.approx(-r.geometric_phase, rel=1e-12)
    with pytest.raises(hv.AdiabaticityError):
        grid.sweep(10.0)


def test_coupled_averaging_error_halves_with_eps():
    dev = []
    for eps in (0.05, 0.025):
        rep = hv.compare(hv.CoupledParams(1.0, 1.0, eps), 1.0 / eps)
        assert rep.energy_drift < 1e-8
        dev.append(rep.alpha_deviation)
    assert 0.3 <= dev[1] / dev[0] <= 0.7
