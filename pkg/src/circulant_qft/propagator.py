"""Time-dependent propagator integration and phased-DFT factorization.

The propagator solves i dU/dt = H(t) U with U(t_min) = I by exponential
midpoint stepping: each step applies exp(-i H(t + dt/2) dt) computed
through an exact eigendecomposition, so unitarity is preserved per step
up to solver roundoff and the global error is second order in the step.

In the adiabatic regime the final forward propagator is a DFT up to a
basis renumbering sigma and per-column phases alpha; factor_phased_dft
extracts (sigma, alpha) and the Frobenius residual of that description,
predict_permutation derives sigma from eigenvalue rank matching alone,
and dynamical_phase_prediction integrates the quasienergies to predict
alpha.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import _kernels
from .circulant import CirculantSpec, circulant_eigenvalues, dft_matrix
from .errors import (
    AmbiguousPermutationError,
    BranchTrackingError,
    DegenerateSpectrumError,
    IntegrationError,
)
from .linalg import CLUSTER_GAP_RTOL, dagger, frobenius, unitarity_defect
from .schedule import FORWARD, INVERSE

# Accepted runs must keep ||U'U - I||_F below this.
UNITARITY_TOL = 1e-8
# Two column overlaps closer than this make the renumbering ambiguous.
OVERLAP_AMBIGUITY = 1e-3


@dataclass(frozen=True)
class EvolutionResult:
    """Propagator samples and integration diagnostics.

    times[k] is the grid time of u_samples[k]; u_final is the propagator
    at the window end; unitarity_drift the worst ||U'U - I||_F seen along
    the way; convergence_estimate the Frobenius distance between the
    final propagators at the requested and doubled step counts.
    """

    times: np.ndarray
    u_samples: np.ndarray
    u_final: np.ndarray
    unitarity_drift: float
    convergence_estimate: float

    @property
    def dim(self):
        return self.u_final.shape[0]


def _integrate(s, steps, sample_idx):
    t_min, t_max = s.window
    dt = (t_max - t_min) / steps
    t_mid = t_min + dt * (np.arange(steps) + 0.5)
    a, b = s.coefficients(t_mid)
    samples, u_final, drift = _kernels.propagate(
        s.h0, s.h1, a, b, dt, np.asarray(sample_idx, dtype=np.int64)
    )
    if not np.all(np.isfinite(u_final)):
        raise IntegrationError("propagator contains non-finite entries")
    if drift > UNITARITY_TOL:
        raise IntegrationError(
            f"unitarity drift {drift:.3e} exceeds {UNITARITY_TOL:.1e}"
        )
    return samples, u_final, drift


def evolve(s, sample_stride=None, convergence_check=True):
    """Integrate the schedule's propagator over its window.

    sample_stride controls how densely intermediate propagators are
    recorded (default about 200 samples); the first and final grid
    points are always included.  When convergence_check is set, the
    integration is repeated at double resolution and the difference of
    the final propagators is reported (the extra run is discarded).
    """
    steps = s.steps
    if sample_stride is None:
        sample_stride = max(1, steps // 200)
    sample_idx = np.arange(0, steps + 1, int(sample_stride))
    if sample_idx[-1] != steps:
        sample_idx = np.append(sample_idx, steps)

    samples, u_final, drift = _integrate(s, steps, sample_idx)
    convergence = np.nan
    if convergence_check:
        _, u_fine, _ = _integrate(s, 2 * steps, np.empty(0, dtype=np.int64))
        convergence = frobenius(u_final - u_fine)

    t_min, t_max = s.window
    times = t_min + (t_max - t_min) * sample_idx / steps
    return EvolutionResult(
        times=times,
        u_samples=samples,
        u_final=u_final,
        unitarity_drift=float(drift),
        convergence_estimate=float(convergence),
    )


@dataclass(frozen=True)
class PhasedDftFactorization:
    """Renumbering sigma, phases alpha and the residual of the fit.

    Forward: column n of the fitted matrix is exp(i alpha_n) times DFT
    column sigma(n).  Inverse: the fitted matrix maps DFT column n to
    exp(-i alpha_n) times basis state sigma(n).  alpha is reported in
    (-pi, pi]; the residual is ||U - fit||_F and is never hidden.
    """

    sigma: np.ndarray
    alpha: np.ndarray
    residual: float

    @property
    def sigma_inverse(self):
        inv = np.empty_like(self.sigma)
        inv[self.sigma] = np.arange(len(self.sigma))
        return inv


def _assign_columns(weights):
    """Bijection maximizing total |overlap|, with per-column ambiguity check."""
    n = weights.shape[0]
    for col in range(n):
        top = np.sort(weights[:, col])[-2:]
        if len(top) == 2 and top[1] - top[0] < OVERLAP_AMBIGUITY:
            rows = np.argsort(weights[:, col])[-2:]
            raise AmbiguousPermutationError(
                f"column {col}: overlaps with rows {rows[1]} and {rows[0]} "
                f"differ by {top[1] - top[0]:.2e} (< {OVERLAP_AMBIGUITY})"
            )
    rows, cols = linear_sum_assignment(-weights)
    sigma = np.empty(n, dtype=np.intp)
    sigma[cols] = rows
    return sigma


def factor_phased_dft(u, direction=FORWARD):
    """Fit U as a phased, renumbered DFT (or inverse DFT).

    The renumbering is chosen by maximal column overlap, the phase of
    each dominant overlap gives alpha, and the Frobenius distance to the
    fitted matrix is reported as the residual.
    """
    u = np.asarray(u, dtype=np.complex128)
    defect = unitarity_defect(u)
    if defect > UNITARITY_TOL:
        raise IntegrationError(
            f"matrix to factor is not unitary: defect {defect:.3e}"
        )
    n = u.shape[0]
    f = dft_matrix(n)
    if direction == FORWARD:
        overlaps = dagger(f) @ u  # overlaps[m, n] = <F_m | U e_n>
        sigma = _assign_columns(np.abs(overlaps))
        alpha = np.angle(overlaps[sigma, np.arange(n)])
        fit = np.exp(1j * alpha)[None, :] * f[:, sigma]
    elif direction == INVERSE:
        images = u @ f  # images[:, n] = U applied to DFT column n
        sigma = _assign_columns(np.abs(images))
        alpha = -np.angle(images[sigma, np.arange(n)])
        fit = np.zeros_like(u)
        fit[sigma, :] = np.exp(-1j * alpha)[:, None] * np.conj(f).T
    else:
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    residual = frobenius(u - fit)
    return PhasedDftFactorization(sigma=sigma, alpha=alpha, residual=float(residual))


def _ranks(values):
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.intp)
    ranks[order] = np.arange(len(values))
    return ranks


def predict_permutation(h0, h1):
    """Renumbering sigma from adiabatic rank matching.

    With no level crossings, the state starting in basis state j (the
    eigenvector of H0 with eigenvalue rank r) ends in the circulant
    eigenvector whose eigenvalue has the same rank; sigma[j] is the DFT
    column index of that eigenvector.
    """
    h0 = np.asarray(h0)
    energies = np.diag(h0).real
    lam = circulant_eigenvalues(CirculantSpec(np.asarray(h1)[:, 0].copy()))
    if np.abs(lam.imag).max() > 1e-10 * max(1.0, np.abs(lam).max()):
        raise ValueError("H1 spectrum is not real; H1 must be Hermitian circulant")
    lam = lam.real

    for name, vals in (("H0", energies), ("H1", lam)):
        gaps = np.diff(np.sort(vals))
        scale = max(np.abs(vals).max(), np.finfo(float).tiny)
        if gaps.min() <= CLUSTER_GAP_RTOL * scale:
            raise DegenerateSpectrumError(
                f"{name} spectrum is degenerate; rank matching is undefined"
            )

    lam_order = np.argsort(lam, kind="stable")
    return lam_order[_ranks(energies)]


def dynamical_phase_prediction(s, grid=None):
    """Predicted factorization phases from quasienergy integrals.

    Tracks each eigenvalue branch by rank across the grid (valid while
    there are no crossings) and integrates it with the trapezoidal rule.
    For a forward schedule the branch for basis state j carries the
    dynamical phase -int eps_j dt, which is the predicted alpha_j of the
    forward factorization.  For an inverse schedule the branch starts at
    DFT column n; the inverse factorization reports alpha with the
    opposite sign convention (the exp(-i alpha) form), so the prediction
    there is +int eps_n dt.  Values are wrapped to (-pi, pi].
    """
    t = s.grid() if grid is None else np.asarray(grid, dtype=float)
    a, b = s.coefficients(t)
    w, _ = _kernels.eigh_grid(s.h0, s.h1, a, b)

    scale = float(np.abs(w).max())
    if scale == 0.0:
        return np.zeros(s.dim)
    gaps = np.diff(w, axis=1).min(axis=1)
    bad = gaps <= CLUSTER_GAP_RTOL * scale
    if bad.any():
        k = int(np.argmax(bad))
        raise BranchTrackingError(
            f"eigenvalue branches collide at t = {t[k]:.6g} "
            f"(gap {gaps[k]:.3e}); rank tracking is invalid",
            t=float(t[k]),
        )

    if s.direction == FORWARD:
        start_ranks = _ranks(np.diag(s.h0).real)
        sign = -1.0
    else:
        lam = circulant_eigenvalues(s.h1_spec).real
        start_ranks = _ranks(lam)
        sign = 1.0

    integrals = np.trapezoid(w, t, axis=0)
    alpha = sign * integrals[start_ranks]
    return np.angle(np.exp(1j * alpha))
