"""Deterministic invariant suite behind the `validate` CLI command.

Each property runs at fixed seeds and parameters and reports one
pass/fail line with the measured figure of merit.  The suite covers the
dynamics invariants (unitarity, energy conservation, oracle equivalence,
parity/sign symmetry, truncation convergence, periodicity) and the
analytic ones (closed-form agreement with numerics, weak-coupling limit).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analytic
from .dynamics import (
    build_chain,
    chain_reference_state,
    full_rabi_reference,
    run_trajectory,
)
from .model import FullState, ParityChain, RabiParams, decompose, recompose

DSC_PARAMS = RabiParams(omega0=0.0, omega=0.23, g=0.15, n_trunc=64)


@dataclass
class PropertyResult:
    name: str
    passed: bool
    detail: str


@dataclass
class ValidationReport:
    results: list[PropertyResult]

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_text(self) -> str:
        width = max(len(r.name) for r in self.results)
        lines = ["validation report"]
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"  [{status}] {r.name:<{width}}  {r.detail}")
        lines.append(f"overall: {'PASS' if self.all_passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _random_state(rng: np.random.Generator, n_trunc: int) -> FullState:
    vec = rng.normal(size=4 * n_trunc).view(np.complex128)
    vec = vec / np.linalg.norm(vec)
    return FullState(vec[:n_trunc], vec[n_trunc:])


def check_roundtrip(seed: int = 11, draws: int = 25) -> PropertyResult:
    """decompose/recompose must invert each other bit-for-bit."""
    rng = np.random.default_rng(seed)
    exact = True
    for _ in range(draws):
        state = _random_state(rng, int(rng.integers(2, 48)))
        back = recompose(*decompose(state))
        exact &= bool(
            np.array_equal(back.amp_e, state.amp_e)
            and np.array_equal(back.amp_g, state.amp_g)
        )
    return PropertyResult(
        "decompose/recompose round-trip", exact,
        f"{draws} random states, bit-for-bit: {'yes' if exact else 'no'}",
    )


def check_unitarity(tol: float = 1e-10) -> PropertyResult:
    """Norm preserved along trajectories out to 300 mm."""
    worst = 0.0
    for params in (
        DSC_PARAMS,
        RabiParams(omega0=0.08, omega=0.23, g=0.15, n_trunc=64),
        RabiParams(omega0=-0.2, omega=0.4, g=0.3, n_trunc=48),
    ):
        traj = run_trajectory(params, FullState.basis_state("e", 0, params.n_trunc), 300.0, 0.5)
        norms = traj.pnt.sum(axis=1)
        worst = max(worst, float(np.abs(norms - 1.0).max()))
    return PropertyResult("unitarity (t <= 300 mm)", worst < tol, f"max |norm-1| = {worst:.3e}")


def check_energy_conservation(tol: float = 1e-9) -> PropertyResult:
    """<H> constant along trajectories, relative to the spectral scale."""
    rng = np.random.default_rng(23)
    worst = 0.0
    for params in (
        DSC_PARAMS,
        RabiParams(omega0=0.1, omega=0.3, g=0.2, n_trunc=32),
    ):
        state = _random_state(rng, params.n_trunc)
        chains = {h.chain: h for h in (build_chain(params, ParityChain.C), build_chain(params, ParityChain.F))}
        scale = max(float(np.abs(h.eigenvalues).max()) for h in chains.values())
        energies = []
        for t in np.linspace(0.0, 120.0, 25):
            evolved = chain_reference_state(params, state, float(t))
            c, f = decompose(evolved)
            energies.append(chains[ParityChain.C].energy(c.amp) + chains[ParityChain.F].energy(f.amp))
        energies = np.array(energies)
        worst = max(worst, float(np.abs(energies - energies[0]).max() / scale))
    return PropertyResult("energy conservation", worst < tol, f"max relative drift = {worst:.3e}")


def check_oracle_equivalence(draws: int = 50, seed: int = 5, tol: float = 1e-8) -> PropertyResult:
    """Parity-chain evolution equals the dense brute-force propagator."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(draws):
        params = RabiParams(
            omega0=float(rng.uniform(-0.3, 0.3)),
            omega=float(rng.uniform(0.1, 0.5)),
            g=float(rng.uniform(0.0, 0.3)),
            n_trunc=32,
        )
        state = _random_state(rng, 32)
        t = float(rng.uniform(0.0, 60.0))
        via_chain = chain_reference_state(params, state, t)
        via_full = full_rabi_reference(params, state, t)
        diff = max(
            float(np.abs(via_chain.amp_e - via_full.amp_e).max()),
            float(np.abs(via_chain.amp_g - via_full.amp_g).max()),
        )
        worst = max(worst, diff)
    return PropertyResult(
        f"chain vs brute-force oracle ({draws} draws)", worst < tol,
        f"max amplitude diff = {worst:.3e}",
    )


def check_sign_symmetry() -> PropertyResult:
    """build_chain(omega0, F) equals build_chain(-omega0, C) entrywise."""
    ok = True
    for omega0 in (0.0, 0.04, -0.08, 0.3):
        p_pos = RabiParams(omega0=omega0, omega=0.23, g=0.15, n_trunc=32)
        p_neg = RabiParams(omega0=-omega0, omega=0.23, g=0.15, n_trunc=32)
        hf = build_chain(p_pos, ParityChain.F)
        hc = build_chain(p_neg, ParityChain.C)
        ok &= bool(np.array_equal(hf.diag, hc.diag) and np.array_equal(hf.offdiag, hc.offdiag))
    return PropertyResult("parity/sign symmetry F(w0) = C(-w0)", ok, "entrywise equality: " + ("yes" if ok else "no"))


def check_truncation_convergence(tol: float = 1e-6) -> PropertyResult:
    """Doubling n_trunc 32 -> 64 leaves observables unchanged at the reference parameters."""
    t_max = 2.0 * 2.0 * math.pi / DSC_PARAMS.omega
    devs = []
    trajs = []
    for n in (32, 64):
        params = RabiParams(omega0=0.0, omega=0.23, g=0.15, n_trunc=n)
        trajs.append(run_trajectory(params, FullState.basis_state("e", 0, n), t_max, 0.05))
    for attr in ("p_e", "p_r", "mean_n"):
        devs.append(float(np.abs(getattr(trajs[0], attr) - getattr(trajs[1], attr)).max()))
    worst = max(devs)
    return PropertyResult("truncation convergence 32 -> 64", worst < tol, f"sup-norm change = {worst:.3e}")


def check_lf_agreement(tol: float = 1e-6) -> PropertyResult:
    """Closed forms match numerics over [0, 2T] and at 20 random times."""
    period = analytic.lf_period(DSC_PARAMS)
    traj = run_trajectory(DSC_PARAMS, FullState.basis_state("e", 0, 64), 2.0 * period, 0.05)
    dev_grid = max(
        float(np.abs(traj.p_r - analytic.lf_revival(DSC_PARAMS, traj.t_grid)).max()),
        float(np.abs(traj.mean_n - analytic.lf_mean_photon(DSC_PARAMS, traj.t_grid)).max()),
    )
    # derivation gate: closed forms vs the brute-force oracle at random times
    rng = np.random.default_rng(17)
    initial = FullState.basis_state("e", 0, 64)
    dev_oracle = 0.0
    for t in rng.uniform(0.0, 2.0 * period, 20):
        ref = full_rabi_reference(DSC_PARAMS, initial, float(t))
        pr_ref = float(np.abs(ref.amp_e[0]) ** 2)
        n_ref = float(np.sum(np.arange(64) * (np.abs(ref.amp_e) ** 2 + np.abs(ref.amp_g) ** 2)))
        dev_oracle = max(
            dev_oracle,
            abs(pr_ref - float(analytic.lf_revival(DSC_PARAMS, float(t)))),
            abs(n_ref - float(analytic.lf_mean_photon(DSC_PARAMS, float(t)))),
        )
    worst = max(dev_grid, dev_oracle)
    return PropertyResult(
        "closed forms vs numerics (omega0 = 0)", worst < tol,
        f"grid dev = {dev_grid:.3e}, oracle dev = {dev_oracle:.3e}",
    )


def check_periodicity(tol: float = 0.99) -> PropertyResult:
    """Full revivals at t = T, 2T, 3T for the degenerate-qubit case."""
    params = RabiParams(omega0=0.0, omega=0.23, g=0.15, n_trunc=48)
    period = analytic.lf_period(params)
    initial = FullState.basis_state("e", 0, 48)
    values = []
    for k in (1, 2, 3):
        evolved = chain_reference_state(params, initial, k * period)
        values.append(float(np.abs(evolved.amp_e[0]) ** 2))
    ok = all(v > tol for v in values)
    return PropertyResult(
        "periodicity P_r(kT) > 0.99, k = 1..3", ok,
        "P_r = " + ", ".join(f"{v:.6f}" for v in values),
    )


def check_jc_limit(tol: float = 1e-4) -> PropertyResult:
    """Weak resonant coupling reproduces vacuum Rabi flopping."""
    g = 0.001
    params = RabiParams(omega0=1.0, omega=1.0, g=g, n_trunc=32)
    t_max = math.pi / g
    traj = run_trajectory(params, FullState.basis_state("e", 0, 32), t_max, t_max / 2000.0)
    dev = float(np.abs(traj.p_e - analytic.jc_population(g, traj.t_grid)).max())
    return PropertyResult("weak-coupling (RWA) limit", dev < tol, f"sup |P_e - cos^2(gt)| = {dev:.3e}")


def run_validation() -> ValidationReport:
    return ValidationReport(
        results=[
            check_roundtrip(),
            check_unitarity(),
            check_energy_conservation(),
            check_oracle_equivalence(),
            check_sign_symmetry(),
            check_truncation_convergence(),
            check_lf_agreement(),
            check_periodicity(),
            check_jc_limit(),
        ]
    )
