import numpy as np
import pytest

from circulant_qft.circulant import CirculantSpec, circulant_eigenvalues
from circulant_qft.errors import DegenerateSpectrumError
from circulant_qft.models import build_four_level
from circulant_qft.schedule import (
    FORWARD,
    INVERSE,
    Schedule,
    SechMaskedPair,
    TanhPair,
    adiabaticity_report,
    eigen_trajectories,
    evaluate_pulses,
)


class TestPulses:
    def test_tanh_midpoint(self):
        f, g = evaluate_pulses(TanhPair(T=2.0), 0.0)
        assert f == 0.5 and g == 0.5

    def test_tanh_sums_to_one(self):
        pair = TanhPair(T=0.7)
        t = np.linspace(-10, 10, 101)
        f, g = pair.values(t)
        assert np.all(f + g == 1.0)

    def test_sech_masked_midpoint(self):
        f, g = evaluate_pulses(SechMaskedPair(T=3.0, tau=0.5), 0.0)
        assert f == 1.0 and g == 1.0

    def test_ratio_at_three_crossing_times(self):
        # (1 + tanh 3) / (1 - tanh 3) = e^6
        T = 1.4
        f, g = TanhPair(T=T).values(3 * T)
        assert np.isclose(g / f, np.e**6, rtol=1e-12)

    @pytest.mark.parametrize("pair", [TanhPair(T=1.2), SechMaskedPair(T=1.2, tau=0.8)])
    def test_ratio_is_exponential_and_monotone(self, pair):
        t = np.linspace(-4, 4, 81)
        f, g = pair.values(t)
        ratio = g / f
        assert np.allclose(ratio, np.exp(2 * t / 1.2), rtol=1e-10)
        assert np.all(np.diff(ratio) > 0)

    def test_nonpositive_parameters_rejected(self):
        with pytest.raises(ValueError):
            TanhPair(T=0.0)
        with pytest.raises(ValueError):
            SechMaskedPair(T=1.0, tau=-1.0)


class TestSchedule:
    def test_degenerate_h0_rejected(self, paper_model):
        _, h1 = paper_model
        h0 = np.diag(np.array([1.0, 1.0, 2.0, 3.0], dtype=complex))
        with pytest.raises(DegenerateSpectrumError):
            Schedule(pulses=TanhPair(T=1.0), h0=h0, h1=h1)

    def test_non_diagonal_h0_rejected(self, paper_model):
        h0, h1 = paper_model
        bad = h0.copy()
        bad[0, 1] = 0.1
        with pytest.raises(ValueError):
            Schedule(pulses=TanhPair(T=1.0), h0=bad, h1=h1)

    def test_non_circulant_h1_rejected(self, paper_model):
        h0, h1 = paper_model
        bad = h1.copy()
        bad[0, 1] *= 2
        bad[1, 0] = np.conj(bad[0, 1])
        with pytest.raises(ValueError):
            Schedule(pulses=TanhPair(T=1.0), h0=h0, h1=bad)

    def test_default_window_scales_with_crossing_time(self, paper_model):
        h0, h1 = paper_model
        s = Schedule(pulses=TanhPair(T=2.5), h0=h0, h1=h1)
        assert s.window == (-15.0, 15.0)

    def test_forward_asymptotics(self, paper_schedule):
        s = paper_schedule
        t = s.window[0]
        f, g = s.pulses.values(t)
        h = s.hamiltonian_at(t)
        assert np.abs(h - f * s.h0).max() <= 1e-4 * np.abs(f * s.h0).max()
        t = s.window[1]
        f, g = s.pulses.values(t)
        h = s.hamiltonian_at(t)
        assert np.abs(h - g * s.h1).max() <= 1e-4 * np.abs(g * s.h1).max()

    def test_inverse_midpoint_is_average(self, paper_model):
        h0, h1 = paper_model
        s = Schedule(pulses=TanhPair(T=1.0), h0=h0, h1=h1, direction=INVERSE)
        assert np.allclose(s.hamiltonian_at(0.0), (h0 + h1) / 2, atol=0)

    def test_forward_inverse_mirror_exactly(self, paper_model):
        # tanh is odd, so f(-t) = g(t) makes the mirror identity exact
        h0, h1 = paper_model
        fwd = Schedule(pulses=TanhPair(T=1.3), h0=h0, h1=h1, direction=FORWARD)
        inv = Schedule(pulses=TanhPair(T=1.3), h0=h0, h1=h1, direction=INVERSE)
        for t in np.linspace(-5, 5, 41):
            assert np.array_equal(fwd.hamiltonian_at(t), inv.hamiltonian_at(-t))


class TestTrajectories:
    def test_asymptotic_values_at_four_crossing_times(self, paper_schedule):
        s = paper_schedule
        grid = np.linspace(-4.0, 4.0, 1601)
        traj = eigen_trajectories(s, grid)
        f, _ = s.pulses.values(-4.0)
        expected = np.sort(f * np.diag(s.h0).real)
        assert np.abs(traj.energies[0] / expected - 1).max() <= 0.01
        _, g = s.pulses.values(4.0)
        lam = np.sort(circulant_eigenvalues(CirculantSpec(s.h1[:, 0].copy())).real)
        expected = np.sort(g * lam)
        assert np.abs(traj.energies[-1] / expected - 1).max() <= 0.01

    def test_min_gap_positive_in_window(self, paper_schedule):
        traj = eigen_trajectories(paper_schedule, np.linspace(-4, 4, 1601))
        assert traj.min_gap > 0

    def test_no_coupling_gives_scaled_diagonal(self, paper_model):
        h0, _ = paper_model
        h1 = np.zeros_like(h0)
        s = Schedule(pulses=TanhPair(T=1.0), h0=h0, h1=h1)
        grid = np.linspace(-3, 3, 7)
        traj = eigen_trajectories(s, grid)
        f, _ = s.pulses.values(grid)
        expected = np.sort(f[:, None] * np.diag(h0).real[None, :], axis=1)
        assert np.allclose(traj.energies, expected, atol=1e-12)

    def test_continuity_improves_with_grid_refinement(self, paper_schedule):
        jumps = []
        for m in (200, 400):
            traj = eigen_trajectories(paper_schedule, np.linspace(-6, 6, m + 1))
            jumps.append(np.abs(np.diff(traj.energies, axis=0)).max())
        assert jumps[1] <= 0.6 * jumps[0]


class TestAdiabaticity:
    def test_no_coupling_means_no_mixing(self, paper_model):
        h0, _ = paper_model
        s = Schedule(pulses=SechMaskedPair(T=1.0, tau=1.0), h0=h0,
                     h1=np.zeros_like(h0))
        report = adiabaticity_report(s, np.linspace(-6, 6, 401))
        assert report.max_coupling == 0.0
        assert report.margin == np.inf

    def test_operating_point_is_adiabatic(self, paper_schedule):
        report = adiabaticity_report(paper_schedule, np.linspace(-6, 6, 2001))
        assert report.margin > 10
        assert report.rate_scale == 1.0

    def test_weak_system_is_diabatic(self):
        h0, h1 = build_four_level(0.1, 0.1 * (1 + 1j / 3))
        s = Schedule(pulses=SechMaskedPair(T=1.0, tau=1.0), h0=h0, h1=h1)
        report = adiabaticity_report(s, np.linspace(-6, 6, 2001))
        assert report.margin < 1

    def test_degenerate_cluster_reports_timestamps(self):
        # two H0 levels split by 1e-12 stay below the cluster threshold
        # when nothing couples them; couplings within the pair are undefined
        h0 = np.diag(np.array([-1.0, -1.0 + 1e-12, 1 / 3, 1.0], dtype=complex))
        s = Schedule(pulses=TanhPair(T=1.0), h0=h0, h1=np.zeros_like(h0))
        report = adiabaticity_report(s, np.linspace(-6, 6, 801))
        assert report.degeneracy_warnings
        t_stamp, message = report.degeneracy_warnings[0]
        assert s.window[0] <= t_stamp <= s.window[1]
        assert "degenerate" in message
