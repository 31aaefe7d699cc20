"""Chain Hamiltonians, exact propagation, observables, and a brute-force oracle.

Each parity chain is a real symmetric tridiagonal matrix

    H[n, n]   = sign * (-1)^n * omega0/2 + n * omega
    H[n, n+1] = kappa_n = g * sqrt(n + 1)

(sign = +1 for the C chain, -1 for F).  The matrix is constant, so states
are propagated exactly through the spectral decomposition

    psi(t) = V exp(-i Lambda t) V^T psi(0)

with no step error; the requested time grid is purely an output-sampling
grid.  A dense diagonalization of the untransformed two-branch Hamiltonian
(:func:`full_rabi_reference`) serves as an independent cross-check and is
used only in tests and the validation suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh, eigh_tridiagonal

from .model import (
    ChainState,
    FullState,
    ParityChain,
    RabiParams,
    coupling_ladder,
    decompose,
    recompose,
)

DECOMPOSITION_TOL = 1e-10     # residual / orthogonality bound on the eigensolve
TRUNCATION_OCCUPANCY = 1e-8   # top-two-site occupancy that flags a trajectory
FULL_RABI_MAX_TRUNC = 256     # the dense oracle is O((2 n_trunc)^3)


class EigendecompositionError(RuntimeError):
    """Eigensolver output failed its residual or orthogonality bound."""


class DimensionMismatchError(ValueError):
    """State and Hamiltonian truncation sizes disagree."""


@dataclass(frozen=True)
class ChainHamiltonian:
    """One parity chain with its cached spectral decomposition.

    eigenvalues are ascending; column k of ``eigenvectors`` is the k-th
    eigenvector.  Instances are immutable and safe to share across threads.
    """

    chain: ParityChain
    diag: np.ndarray
    offdiag: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n_trunc(self) -> int:
        return self.diag.shape[0]

    def matrix(self) -> np.ndarray:
        """Dense copy of the tridiagonal matrix (small sizes only)."""
        return (
            np.diag(self.diag)
            + np.diag(self.offdiag, 1)
            + np.diag(self.offdiag, -1)
        )

    def apply(self, amp: np.ndarray) -> np.ndarray:
        """Tridiagonal matrix-vector product H @ amp."""
        out = self.diag * amp
        out[:-1] += self.offdiag * amp[1:]
        out[1:] += self.offdiag * amp[:-1]
        return out

    def energy(self, amp: np.ndarray) -> float:
        """Expectation value <amp|H|amp> (real for any complex amp)."""
        return float(np.real(np.vdot(amp, self.apply(np.asarray(amp, dtype=complex)))))


def build_chain(params: RabiParams, chain: ParityChain) -> ChainHamiltonian:
    """Build one parity-chain Hamiltonian and cache its eigendecomposition.

    The two chains are related by omega0 -> -omega0:
    ``build_chain(params(omega0), F)`` equals ``build_chain(params(-omega0), C)``
    entry by entry.
    """
    n = params.n_trunc
    sites = np.arange(n, dtype=float)
    diag = chain.sign * ((-1.0) ** sites) * params.omega0 / 2.0 + sites * params.omega
    offdiag = coupling_ladder(params)

    try:
        evals, evecs = eigh_tridiagonal(diag, offdiag)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - solver failure
        raise EigendecompositionError(
            f"eigensolver failed on {chain.name}-chain: {exc}\n"
            f"diag={diag!r}\noffdiag={offdiag!r}"
        ) from exc

    scale = max(np.abs(diag).max(), np.abs(offdiag).max(), 1.0)
    h = np.diag(diag) + np.diag(offdiag, 1) + np.diag(offdiag, -1)
    residual = np.abs(h @ evecs - evecs * evals).max()
    ortho = np.abs(evecs.T @ evecs - np.eye(n)).max()
    if residual > DECOMPOSITION_TOL * scale or ortho > DECOMPOSITION_TOL:
        raise EigendecompositionError(
            f"eigendecomposition of {chain.name}-chain out of tolerance: "
            f"residual={residual:.3e} (scale {scale:.3e}), orthogonality={ortho:.3e}\n"
            f"diag={diag!r}\noffdiag={offdiag!r}"
        )

    for arr in (diag, offdiag, evals, evecs):
        arr.setflags(write=False)
    return ChainHamiltonian(chain, diag, offdiag, evals, evecs)


def _evolve_grid(h: ChainHamiltonian, amp0: np.ndarray, t_grid: np.ndarray) -> np.ndarray:
    """Amplitudes at every grid time, shape (n_trunc, len(t_grid))."""
    coeffs = h.eigenvectors.T @ amp0
    phases = np.exp(-1j * np.outer(h.eigenvalues, t_grid))
    return h.eigenvectors @ (phases * coeffs[:, None])


def propagate(h: ChainHamiltonian, psi0: ChainState, t: float) -> ChainState:
    """Evolve a chain state by a propagation distance t >= 0 (mm)."""
    if psi0.n_trunc != h.n_trunc:
        raise DimensionMismatchError(
            f"state has {psi0.n_trunc} sites, Hamiltonian has {h.n_trunc}"
        )
    if psi0.chain is not h.chain:
        raise ValueError(f"state lives on {psi0.chain.name}, Hamiltonian is {h.chain.name}")
    if t < 0:
        raise ValueError(f"propagation distance must be >= 0, got {t}")
    amp = _evolve_grid(h, psi0.amp, np.array([t]))[:, 0]
    # unitary evolution: the declared weight is unchanged
    return ChainState(amp, psi0.chain, psi0.weight)


@dataclass
class Trajectory:
    """Time-gridded record of a propagated state and its observables.

    pnt[k, n] is the photon-number distribution P(n, t_k); p_e, p_r and
    mean_n are per-grid-point scalars.  ``truncation_flagged`` is set when
    the occupancy of the two topmost sites exceeds 1e-8 anywhere on the
    grid (run is reported, not aborted: finite arrays are a physical
    feature of the 15-guide device).
    """

    t_grid: np.ndarray
    states: list[FullState]
    pnt: np.ndarray
    p_e: np.ndarray
    p_r: np.ndarray
    mean_n: np.ndarray
    truncation_flagged: bool
    top_site_occupancy: float

    @property
    def p_g(self) -> np.ndarray:
        return 1.0 - self.p_e


def run_trajectory(
    params: RabiParams, initial: FullState, t_max: float, dt: float
) -> Trajectory:
    """Propagate on the grid {0, dt, 2 dt, ..., t_max} and record observables.

    Each non-empty parity chain is evolved independently with its cached
    spectral decomposition; observables are always computed on the
    recomposed full state.
    """
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    if t_max < dt:
        raise ValueError(f"t_max must be >= dt, got t_max={t_max}, dt={dt}")
    if initial.n_trunc != params.n_trunc:
        raise DimensionMismatchError(
            f"initial state has {initial.n_trunc} sites, params.n_trunc={params.n_trunc}"
        )

    n_steps = int(np.floor(t_max / dt + 1e-9))
    t_grid = np.arange(n_steps + 1) * dt

    c0, f0 = decompose(initial)
    n = params.n_trunc
    nt = t_grid.shape[0]
    amps = {}
    for chain_state in (c0, f0):
        if chain_state.weight == 0.0:
            amps[chain_state.chain] = np.zeros((n, nt), dtype=complex)
        else:
            h = build_chain(params, chain_state.chain)
            amps[chain_state.chain] = _evolve_grid(h, chain_state.amp, t_grid)

    even = np.arange(n) % 2 == 0
    amp_e = np.where(even[:, None], amps[ParityChain.C], amps[ParityChain.F])
    amp_g = np.where(even[:, None], amps[ParityChain.F], amps[ParityChain.C])

    pnt = (np.abs(amp_e) ** 2 + np.abs(amp_g) ** 2).T
    p_e = np.sum(np.abs(amp_e) ** 2, axis=0)
    overlap = np.conj(amp_e).T @ initial.amp_e + np.conj(amp_g).T @ initial.amp_g
    p_r = np.abs(overlap) ** 2
    mean_n = pnt @ np.arange(n, dtype=float)

    states = [
        FullState(amp_e[:, k], amp_g[:, k], norm_tol=1e-9) for k in range(nt)
    ]
    top = float(pnt[:, -2:].max()) if n >= 2 else 0.0
    return Trajectory(
        t_grid=t_grid,
        states=states,
        pnt=pnt,
        p_e=p_e,
        p_r=p_r,
        mean_n=mean_n,
        truncation_flagged=top > TRUNCATION_OCCUPANCY,
        top_site_occupancy=top,
    )


# ---------------------------------------------------------------------------
# Observables on a single state
# ---------------------------------------------------------------------------

def photon_distribution(state: FullState) -> np.ndarray:
    """P(n) = |a_n|^2 + |b_n|^2."""
    return np.abs(state.amp_e) ** 2 + np.abs(state.amp_g) ** 2


def population_excited(state: FullState) -> float:
    """P_e = sum_n |a_n|^2."""
    return float(np.sum(np.abs(state.amp_e) ** 2))


def population_ground(state: FullState) -> float:
    """P_g = sum_n |b_n|^2 = 1 - P_e for a normalized state."""
    return float(np.sum(np.abs(state.amp_g) ** 2))


def revival_probability(state: FullState, initial: FullState) -> float:
    """Squared overlap |<initial|state>|^2 (global-phase free)."""
    if state.n_trunc != initial.n_trunc:
        raise DimensionMismatchError(
            f"states have different sizes: {state.n_trunc} vs {initial.n_trunc}"
        )
    overlap = np.vdot(initial.amp_e, state.amp_e) + np.vdot(initial.amp_g, state.amp_g)
    return float(np.abs(overlap) ** 2)


def mean_photon_number(state: FullState) -> float:
    """<n> = sum_n n (|a_n|^2 + |b_n|^2)."""
    n = np.arange(state.n_trunc, dtype=float)
    return float(np.sum(n * photon_distribution(state)))


# ---------------------------------------------------------------------------
# Brute-force oracle: dense two-branch Hamiltonian, no chain decomposition
# ---------------------------------------------------------------------------

def full_rabi_matrix(params: RabiParams) -> np.ndarray:
    """Dense 2*n_trunc Hamiltonian on the ordered basis |g,0>, |e,0>, |g,1>, ...

    Diagonal: -/+ omega0/2 + m*omega on the g/e branch; the qubit-flipping
    coupling links |e,m> <-> |g,m+1> and |g,m> <-> |e,m+1> with g*sqrt(m+1).
    """
    n = params.n_trunc
    dim = 2 * n
    h = np.zeros((dim, dim))
    m = np.arange(n, dtype=float)
    h[2 * np.arange(n), 2 * np.arange(n)] = -params.omega0 / 2.0 + m * params.omega
    h[2 * np.arange(n) + 1, 2 * np.arange(n) + 1] = params.omega0 / 2.0 + m * params.omega
    for k in range(n - 1):
        amp = params.g * np.sqrt(k + 1.0)
        h[2 * k + 1, 2 * (k + 1)] = amp      # <e,k|H|g,k+1>
        h[2 * (k + 1), 2 * k + 1] = amp
        h[2 * k, 2 * (k + 1) + 1] = amp      # <g,k|H|e,k+1>
        h[2 * (k + 1) + 1, 2 * k] = amp
    return h


def full_rabi_reference(params: RabiParams, initial: FullState, t: float) -> FullState:
    """Evolve by dense eigendecomposition of the untransformed Hamiltonian.

    Deliberately ignorant of the parity structure; intended as the
    independent oracle for tests.  Refuses n_trunc > 256.
    """
    if params.n_trunc > FULL_RABI_MAX_TRUNC:
        raise ValueError(
            f"full_rabi_reference supports n_trunc <= {FULL_RABI_MAX_TRUNC} "
            f"(got {params.n_trunc}); the dense solve is O((2 n_trunc)^3)"
        )
    if initial.n_trunc != params.n_trunc:
        raise DimensionMismatchError(
            f"initial state has {initial.n_trunc} sites, params.n_trunc={params.n_trunc}"
        )
    psi0 = np.empty(2 * params.n_trunc, dtype=complex)
    psi0[0::2] = initial.amp_g
    psi0[1::2] = initial.amp_e
    evals, evecs = eigh(full_rabi_matrix(params))
    psi_t = evecs @ (np.exp(-1j * evals * t) * (evecs.T @ psi0))
    return FullState(psi_t[1::2], psi_t[0::2], norm_tol=1e-9)


def chain_reference_state(params: RabiParams, initial: FullState, t: float) -> FullState:
    """Single-time parity-chain evolution (the production path, one point)."""
    c0, f0 = decompose(initial)
    evolved = []
    for chain_state in (c0, f0):
        if chain_state.weight == 0.0:
            evolved.append(chain_state)
        else:
            evolved.append(propagate(build_chain(params, chain_state.chain), chain_state, t))
    return recompose(*evolved)
