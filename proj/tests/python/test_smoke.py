import math
import os

import numpy as np
import pytest

wb = pytest.importorskip("wigbound")

CONFIGS = os.path.join(os.path.dirname(__file__), "..", "..", "configs")


def grid(nx=33, np_=65):
    d = wb.Domain(-1.0, 1.0)
    return wb.make_phase_grid(d, nx, np_, wb.default_p_max(d))


def test_well_energies():
    energies = wb.energy_scan(wb.Domain(-1.0, 1.0), 0.1, 12.0, 200)
    assert energies[:2] == pytest.approx([math.pi**2 / 8, math.pi**2 / 2], rel=1e-6)
    assert wb.well_eigenstate(3, 2.0).E_n == pytest.approx(9 * math.pi**2 / 8)


def test_transform_matches_closed_form():
    g = grid()
    s = wb.well_eigenstate(1, 2.0)
    numeric = wb.wigner_transform(s.wavefunction(), g)
    analytic = wb.analytic_well_wigner(1, 2.0, grid=g)
    assert numeric.values.shape == (33, 65)
    assert np.max(np.abs(numeric.values - analytic.values)) < 1e-8
    assert analytic(0.0, 0.0) == pytest.approx(1 / math.pi)
    assert all(c["pass"] for c in wb.check_consistency(analytic, 1e-6))


def test_boundary_star_and_dynamics():
    g = grid(65, 65)
    F = wb.analytic_well_wigner(1, 2.0, grid=g)
    E1 = wb.well_eigenstate(1, 2.0).E_n
    assert wb.stargenvalue_residual(F, E1) < 1e-4
    assert wb.stargenvalue_residual(F, E1, boundary_terms=False) > 0.1
    psi = wb.well_eigenstate(1, 2.0).wavefunction()
    assert wb.delta_prime_star_closed_form(psi, "a", -0.5, 0.0).real == pytest.approx(-0.5)
    rhs = wb.moyal_rhs(F)
    assert np.max(np.abs(rhs.values)) < 1e-4
    assert abs(wb.phase_space_integral(rhs)) < 1e-6


def test_trajectories():
    D = wb.SmoothedDelta(0.25)
    samples, escaped = wb.approx_trajectory(0, D, (0.0, 1.0), (0.0, 20.0))
    assert not escaped
    assert samples.shape[1] == 3
    assert samples[:, 2].min() == pytest.approx(-1.0, abs=1e-3)
    th = wb.escape_threshold(0, D, 0.5, 50.0)
    oracle = math.sqrt(math.sqrt(2) * math.exp(-0.5) / math.sqrt(math.pi)) / D.epsilon_prime
    assert th == pytest.approx(oracle, rel=1e-4)
    F = wb.analytic_well_wigner(1, 2.0, grid=grid(65, 65))
    lines = wb.contours(F, [0.5 * F.values.max()])
    assert lines and all(closed for _, closed, _ in lines)


def test_baker_round_trip_and_mixture():
    g = grid(129, 129)
    s = wb.well_eigenstate(2, 2.0).wavefunction()
    back = wb.reconstruct_wavefunction(wb.wigner_transform(s, g))
    assert abs(wb.overlap(back, s)) == pytest.approx(1.0, abs=1e-6)
    mix = wb.combine([(0.5, wb.analytic_well_wigner(1, 2.0, grid=g)),
                      (0.5, wb.analytic_well_wigner(2, 2.0, grid=g))])
    with pytest.raises(wb.NotPureState):
        wb.reconstruct_wavefunction(mix)


def test_errors_and_cli_runner(tmp_path):
    with pytest.raises(ValueError):
        wb.Domain(1.0, 0.0)
    with pytest.raises(wb.ConfigError):
        wb.run("transform", str(tmp_path / "missing.yaml"))
    code, _ = wb.run("spectrum", os.path.join(CONFIGS, "spectrum.yaml"), str(tmp_path))
    assert code == 0
    assert (tmp_path / "spectrum.csv").read_text().startswith("index,E\n")
