"""Phase estimation on top of the adiabatically synthesized transform.

The controlled-power stage of textbook phase estimation only serves to
put the first register into 2^{-r/2} sum_k exp(2 pi i k phi) |k>; that
state is synthesized directly here.  Applying the inverse transform then
concentrates the amplitude on the binary expansion of phi, up to a
global phase that drops out of measured probabilities.  The simulated
inverse transform carries a basis renumbering, which is undone
classically from the predicted permutation.
"""

from dataclasses import dataclass

import numpy as np

from .circulant import dft_matrix
from .errors import ConfigError
from .linalg import dagger
from .propagator import evolve, predict_permutation
from .schedule import INVERSE, Schedule


def binary_fraction(bits):
    """phi = 0.b1 b2 ... br as a float in [0, 1)."""
    phi = 0.0
    for j, bit in enumerate(bits, start=1):
        if bit not in (0, 1):
            raise ValueError(f"bits must be 0 or 1, got {bit!r}")
        phi += bit * 2.0 ** (-j)
    return phi


def to_bits(phi, r):
    """Nearest r-bit expansion of a phase, cyclically.

    Returns (bits, exact): the exact expansion when phi * 2^r is an
    integer, otherwise the nearest r-bit value under the cyclic metric
    (phases identify 1 with 0) and exact=False.
    """
    if not 0 <= phi < 1:
        raise ValueError(f"phi must lie in [0, 1), got {phi}")
    if r < 1:
        raise ValueError(f"register size r must be >= 1, got {r}")
    scaled = phi * 2**r
    k = int(round(scaled)) % 2**r
    exact = scaled == round(scaled)
    bits = tuple((k >> (r - 1 - j)) & 1 for j in range(r))
    return bits, exact


@dataclass(frozen=True)
class PhaseValue:
    """A phase in [0, 1) targeted by an r-qubit register."""

    phi: float
    r: int

    def __post_init__(self):
        to_bits(self.phi, self.r)  # validates ranges

    @property
    def n_states(self):
        return 2**self.r

    @property
    def exact(self):
        return to_bits(self.phi, self.r)[1]

    @property
    def nearest_bits(self):
        return to_bits(self.phi, self.r)[0]


def prepare_register_state(phi, r):
    """First-register state 2^{-r/2} sum_k exp(2 pi i k phi) |k>.

    For phi with an exact r-bit expansion m / 2^r this is exactly DFT
    column m, which the inverse transform maps to one basis state.
    """
    value = PhaseValue(phi, r)
    k = np.arange(value.n_states)
    return np.exp(2j * np.pi * k * phi) / np.sqrt(value.n_states)


def ideal_phased_inverse_qft(alpha, sigma, n):
    """Exact inverse transform with per-state phases and renumbering.

    Maps DFT column m to exp(-i alpha_m) |sigma(m)>; with sigma the
    identity and alpha zero this is the plain inverse DFT matrix.  Serves
    as the brute-force oracle for run_qpe.
    """
    alpha = np.asarray(alpha, dtype=float)
    sigma = np.asarray(sigma, dtype=np.intp)
    if alpha.shape != (n,):
        raise ValueError(f"alpha must have length {n}")
    if sorted(sigma.tolist()) != list(range(n)):
        raise ValueError(f"sigma must be a permutation of 0..{n - 1}")
    f = dft_matrix(n)
    u = np.zeros((n, n), dtype=np.complex128)
    u[sigma, :] = np.exp(-1j * alpha)[:, None] * dagger(f)
    return u


@dataclass(frozen=True)
class QpeResult:
    """Outcome of one phase-estimation run.

    distribution holds raw probabilities over the physical basis;
    relabeled_distribution is the same data with the renumbering undone
    (index = register value); top_bits is the bit string of its maximum.
    fidelity_times/fidelity_trace sample |<target|psi(t)>|^2 against the
    renumbered target basis state during the evolution.  counts is None
    unless a sampled measurement was requested.
    """

    phi: float
    r: int
    distribution: np.ndarray
    relabeled_distribution: np.ndarray
    sigma: np.ndarray
    top_bits: tuple
    target_bits: tuple
    exact_expansion: bool
    fidelity_times: np.ndarray
    fidelity_trace: np.ndarray
    final_fidelity: float
    final_state: np.ndarray
    counts: np.ndarray | None = None


def run_qpe(phi, r, h0, h1, pulses, window=None, steps=None,
            sample_stride=None, shots=None, seed=None):
    """Estimate phi by evolving the register state under the inverse schedule.

    The register dimension 2^r must match the model dimension.  The
    returned distribution is read directly from amplitudes (no shot
    noise); pass shots (with a seed) for an additional sampled histogram,
    which exists for demonstration only.
    """
    value = PhaseValue(phi, r)
    n = value.n_states
    h0 = np.asarray(h0, dtype=np.complex128)
    if h0.shape[0] != n:
        raise ConfigError(
            f"register of {r} qubits needs a model of dimension {n}, "
            f"got {h0.shape[0]}"
        )
    kwargs = {}
    if steps is not None:
        kwargs["steps"] = steps
    sched = Schedule(pulses=pulses, h0=h0, h1=h1, direction=INVERSE,
                     window=window, **kwargs)

    sigma = predict_permutation(h0, h1)
    sigma_inv = np.empty_like(sigma)
    sigma_inv[sigma] = np.arange(n)

    target_bits = value.nearest_bits
    target_value = int("".join(str(b) for b in target_bits), 2)
    target_index = int(sigma_inv[target_value])

    psi0 = prepare_register_state(phi, r)
    result = evolve(sched, sample_stride=sample_stride)
    states = result.u_samples @ psi0
    trace = np.abs(states[:, target_index]) ** 2

    psi_final = result.u_final @ psi0
    distribution = np.abs(psi_final) ** 2
    relabeled = np.empty_like(distribution)
    relabeled[sigma] = distribution
    top = int(np.argmax(relabeled))
    top_bits = tuple((top >> (r - 1 - j)) & 1 for j in range(r))

    counts = None
    if shots:
        rng = np.random.default_rng(seed)
        counts = rng.multinomial(int(shots), relabeled / relabeled.sum())

    return QpeResult(
        phi=float(phi),
        r=int(r),
        distribution=distribution,
        relabeled_distribution=relabeled,
        sigma=sigma,
        top_bits=top_bits,
        target_bits=target_bits,
        exact_expansion=value.exact,
        fidelity_times=result.times,
        fidelity_trace=trace,
        final_fidelity=float(distribution[target_index]),
        final_state=psi_final,
        counts=counts,
    )


def ideal_distribution(phi, r, sigma=None, alpha=None):
    """Outcome distribution of the exact phased inverse transform.

    The relabeled distribution is returned (renumbering undone), which
    is independent of alpha: phases only multiply amplitudes whose
    moduli are measured.
    """
    value = PhaseValue(phi, r)
    n = value.n_states
    if sigma is None:
        sigma = np.arange(n)
    if alpha is None:
        alpha = np.zeros(n)
    u = ideal_phased_inverse_qft(alpha, sigma, n)
    psi = u @ prepare_register_state(phi, r)
    p = np.abs(psi) ** 2
    # oracle sends DFT column m to basis state sigma[m], so the register
    # value m is read out at physical index sigma[m]
    return p[np.asarray(sigma, dtype=np.intp)]
