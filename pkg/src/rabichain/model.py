"""Model parameters, basis states, and the parity-chain relabeling.

A two-level system (levels ``|g>``, ``|e>``) coupled to a single bosonic
mode is expanded on the product basis ``{|e>|n>, |g>|n>}`` with complex
amplitudes ``a_n`` (excited) and ``b_n`` (ground).  Because the coupling
changes the photon number by exactly one while flipping the qubit, the
dynamics splits into two decoupled tridiagonal ladders ("parity chains").
The relabeling is a pure permutation of the amplitudes:

    c_n = a_n (n even),  c_n = b_n (n odd)     -> C chain
    f_n = b_n (n even),  f_n = a_n (n odd)     -> F chain

Everything here is an immutable value type; operations are pure functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

NORM_TOL = 1e-12          # construction-time normalization tolerance
RECOMPOSE_WEIGHT_TOL = 1e-9


class ParityChain(Enum):
    """Which of the two decoupled chains an amplitude vector lives on.

    The two chains differ only by the sign of the qubit-splitting term on
    the diagonal: C carries +(-1)^n * omega0/2, F carries -(-1)^n * omega0/2.
    """

    C = "c"
    F = "f"

    @property
    def sign(self) -> float:
        """Sign of the alternating diagonal term: +1 for C, -1 for F."""
        return 1.0 if self is ParityChain.C else -1.0


def _readonly_complex(values, name: str, n_trunc: int | None = None) -> np.ndarray:
    arr = np.asarray(values, dtype=complex).copy()
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a 1-d amplitude vector, got shape {arr.shape}")
    if n_trunc is not None and arr.shape[0] != n_trunc:
        raise ValueError(f"{name} has length {arr.shape[0]}, expected {n_trunc}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class RabiParams:
    """Physical parameters of the model plus the truncation size.

    All frequencies are in mm^-1 (the propagation-distance analog of time).

    omega0  : qubit transition frequency; may be negative or zero
    omega   : mode frequency, strictly positive
    g       : coupling strength, non-negative
    n_trunc : number of Fock states / chain sites kept (hard-wall truncation)
    """

    omega0: float
    omega: float
    g: float
    n_trunc: int

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")
        if self.g < 0:
            raise ValueError(f"g must be >= 0, got {self.g}")
        if self.n_trunc < 2:
            raise ValueError(f"n_trunc must be >= 2, got {self.n_trunc}")
        if not (math.isfinite(self.g / self.omega) and math.isfinite(self.omega0 / self.omega)):
            raise ValueError("g/omega and omega0/omega must be finite")


@dataclass(frozen=True)
class FullState:
    """Normalized state on the full basis: amp_e[n] = a_n, amp_g[n] = b_n.

    Construction rejects vectors whose total norm deviates from 1 by more
    than ``norm_tol`` (default 1e-12); nothing is renormalized silently.
    """

    amp_e: np.ndarray
    amp_g: np.ndarray

    def __init__(self, amp_e, amp_g, *, norm_tol: float = NORM_TOL):
        amp_e = _readonly_complex(amp_e, "amp_e")
        amp_g = _readonly_complex(amp_g, "amp_g", n_trunc=amp_e.shape[0])
        norm_sq = float(np.sum(np.abs(amp_e) ** 2) + np.sum(np.abs(amp_g) ** 2))
        if abs(norm_sq - 1.0) > norm_tol:
            raise ValueError(
                f"state not normalized: sum |a_n|^2 + |b_n|^2 = {norm_sq!r} "
                f"(tolerance {norm_tol})"
            )
        object.__setattr__(self, "amp_e", amp_e)
        object.__setattr__(self, "amp_g", amp_g)

    @property
    def n_trunc(self) -> int:
        return self.amp_e.shape[0]

    @classmethod
    def basis_state(cls, branch: str, m: int, n_trunc: int) -> "FullState":
        """Product state |branch>|m> with branch in {'e', 'g'}."""
        if branch not in ("e", "g"):
            raise ValueError(f"branch must be 'e' or 'g', got {branch!r}")
        if not 0 <= m < n_trunc:
            raise ValueError(f"Fock index {m} outside [0, {n_trunc})")
        amp_e = np.zeros(n_trunc, dtype=complex)
        amp_g = np.zeros(n_trunc, dtype=complex)
        (amp_e if branch == "e" else amp_g)[m] = 1.0
        return cls(amp_e, amp_g)


@dataclass(frozen=True)
class ChainState:
    """Amplitude vector over the sites of one parity chain.

    ``weight`` is the fraction of total norm carried by this chain; the
    squared amplitudes must sum to it within 1e-12.
    """

    amp: np.ndarray
    chain: ParityChain
    weight: float

    def __init__(self, amp, chain: ParityChain, weight: float):
        amp = _readonly_complex(amp, "amp")
        if not 0.0 <= weight <= 1.0 + NORM_TOL:
            raise ValueError(f"weight must lie in [0, 1], got {weight!r}")
        got = float(np.sum(np.abs(amp) ** 2))
        if abs(got - weight) > NORM_TOL:
            raise ValueError(
                f"chain amplitudes carry norm {got!r}, declared weight {weight!r} "
                f"(tolerance {NORM_TOL})"
            )
        object.__setattr__(self, "amp", amp)
        object.__setattr__(self, "chain", chain)
        object.__setattr__(self, "weight", weight)

    @property
    def n_trunc(self) -> int:
        return self.amp.shape[0]


def coupling(n: int, g: float) -> float:
    """Hopping amplitude between chain sites n and n+1: g * sqrt(n + 1)."""
    if n < 0:
        raise ValueError(f"site index must be >= 0, got {n}")
    if g < 0:
        raise ValueError(f"coupling strength must be >= 0, got {g}")
    return g * math.sqrt(n + 1.0)


def coupling_ladder(params: RabiParams) -> np.ndarray:
    """All off-diagonal couplings kappa_0 .. kappa_{n_trunc-2} as an array."""
    return params.g * np.sqrt(np.arange(1, params.n_trunc, dtype=float))


def decompose(state: FullState) -> tuple[ChainState, ChainState]:
    """Split a full state into its (C, F) chain components.

    Even sites of C take a_n, odd sites take b_n; F is the mirror image.
    The two weights sum to the total norm (= 1) exactly up to rounding.
    """
    n = state.n_trunc
    even = np.arange(n) % 2 == 0
    c_amp = np.where(even, state.amp_e, state.amp_g)
    f_amp = np.where(even, state.amp_g, state.amp_e)
    c_w = float(np.sum(np.abs(c_amp) ** 2))
    f_w = float(np.sum(np.abs(f_amp) ** 2))
    return (
        ChainState(c_amp, ParityChain.C, c_w),
        ChainState(f_amp, ParityChain.F, f_w),
    )


def recompose(c: ChainState, f: ChainState) -> FullState:
    """Invert :func:`decompose`; exact (bit-for-bit) on the amplitudes.

    Requires one C and one F component of equal length whose weights sum
    to 1 within 1e-9.
    """
    if {c.chain, f.chain} != {ParityChain.C, ParityChain.F}:
        raise ValueError("recompose needs one C-chain and one F-chain state")
    if c.chain is ParityChain.F:
        c, f = f, c
    if c.n_trunc != f.n_trunc:
        raise ValueError(
            f"chain lengths differ: C has {c.n_trunc} sites, F has {f.n_trunc}"
        )
    total = c.weight + f.weight
    if abs(total - 1.0) > RECOMPOSE_WEIGHT_TOL:
        raise ValueError(
            f"chain weights sum to {total!r}, expected 1 within {RECOMPOSE_WEIGHT_TOL}"
        )
    even = np.arange(c.n_trunc) % 2 == 0
    amp_e = np.where(even, c.amp, f.amp)
    amp_g = np.where(even, f.amp, c.amp)
    return FullState(amp_e, amp_g, norm_tol=RECOMPOSE_WEIGHT_TOL)
