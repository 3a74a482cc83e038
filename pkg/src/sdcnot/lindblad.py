"""Lindblad dynamics with T1 relaxation and process (chi) tomography.

Relaxation acts on the 0-1 and 1-2 transitions of both qubits with no
pure dephasing (T2 = 2T1).  Collapse operators are defined in the bare
single-qubit eigenbases, embedded into the product space, and rotated to
the dressed basis; at the working detunings the neglected dressed-basis
corrections to the dissipators are second order in J_C over the detuning.

The integrator interleaves the exact unitary Strang steps of
:mod:`sdcnot.dynamics` with dissipator applications (symmetric placement,
half step on each side).  Relaxation rates are ~1e-5 per ns, so the
dissipator application per 2 ps step is accurate to machine precision at
first order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isinf

import numpy as np

from .coupled import CoupledSystem
from .dynamics import (
    CNOT,
    PulseSpec,
    _steps,
    apply_virtual_z,
    project_computational,
    propagate,
)
from .errors import ConvergenceError, ParameterError

__all__ = [
    "DissipationSpec",
    "ChiMatrix",
    "collapse_operators",
    "propagate_master",
    "process_tomography",
    "chi_cnot_ideal",
    "process_fidelity",
    "average_gate_fidelity",
    "gate_error",
]

DEFAULT_MASTER_DT = 0.002  # ns
MASTER_CONVERGENCE_TOL = 1e-7
MAX_HALVINGS = 5

RHO_TOL = 1e-8

US_TO_NS = 1000.0


@dataclass(frozen=True)
class DissipationSpec:
    """Relaxation times in microseconds, shared by both qubits.

    ``t1_01`` acts on the 0-1 transitions, ``t1_12`` on the 1-2
    transitions; either may be ``math.inf`` to disable the channel.
    """

    t1_01: float
    t1_12: float = float("inf")

    def __post_init__(self):
        if not (self.t1_01 > 0):
            raise ParameterError(f"t1_01 must be positive, got {self.t1_01}")
        if not (self.t1_12 > 0):
            raise ParameterError(f"t1_12 must be positive, got {self.t1_12}")


@dataclass
class ChiMatrix:
    """Process matrix over the computational subspace.

    ``chi`` is the 16x16 Hermitian matrix in the two-qubit Pauli basis
    (IX ordering I, X, Y, Z per qubit, control first);
    ``trace_deficit`` is the leakage-induced loss of trace, 1 - Tr(chi).
    """

    chi: np.ndarray = field(repr=False)
    trace_deficit: float


def _pauli_basis():
    s = [
        np.eye(2, dtype=complex),
        np.array([[0, 1], [1, 0]], dtype=complex),
        np.array([[0, -1j], [1j, 0]], dtype=complex),
        np.array([[1, 0], [0, -1]], dtype=complex),
    ]
    return [np.kron(p, q) for p in s for q in s]


PAULI2 = _pauli_basis()


def collapse_operators(sys: CoupledSystem, diss: DissipationSpec) -> list:
    """Rate/operator pairs [(gamma_per_ns, L_dressed), ...]."""
    K = sys.levels_per_qubit
    V = sys.dressed_vectors
    ops = []
    for t1_us, (lo, hi) in ((diss.t1_01, (0, 1)), (diss.t1_12, (1, 2))):
        if isinf(t1_us):
            continue
        gamma = 1.0 / (t1_us * US_TO_NS)
        single = np.zeros((K, K))
        single[lo, hi] = 1.0
        for embed in (np.kron(single, np.eye(K)), np.kron(np.eye(K), single)):
            ops.append((gamma, V.T @ embed @ V))
    return ops


def _dissipator_apply(rhos: np.ndarray, ops: list) -> np.ndarray:
    """Sum_k gamma_k (L rho L^dag - {L^dag L, rho}/2) for a batch of rho."""
    out = np.zeros_like(rhos)
    for gamma, L in ops:
        Ld = L.conj().T
        LdL = Ld @ L
        out += gamma * (
            np.matmul(np.matmul(L, rhos), Ld)
            - 0.5 * (np.matmul(LdL, rhos) + np.matmul(rhos, LdL))
        )
    return out


def _evolve_density(
    sys: CoupledSystem,
    pulse: PulseSpec,
    diss: DissipationSpec,
    rhos: np.ndarray,
    dt: float,
) -> np.ndarray:
    """Evolve a batch of (possibly non-Hermitian) matrices under Lindblad."""
    ops = collapse_operators(sys, diss)
    rhos = np.array(rhos, dtype=complex, copy=True)
    half = 0.5 * dt
    for batch in _steps(sys, pulse, dt):
        for step in batch:
            if ops:
                rhos += half * _dissipator_apply(rhos, ops)
            rhos = np.matmul(np.matmul(step, rhos), step.conj().T)
            if ops:
                rhos += half * _dissipator_apply(rhos, ops)
    return rhos


def propagate_master(
    sys: CoupledSystem,
    pulse: PulseSpec,
    diss: DissipationSpec,
    rho0: np.ndarray,
    dt: float = DEFAULT_MASTER_DT,
) -> np.ndarray:
    """Solve the master equation for one initial density matrix.

    ``rho0`` must be Hermitian, unit-trace, and positive semidefinite in
    the dressed basis (full K^2 x K^2).  Returns the final density matrix;
    the trace is preserved to better than 1e-8.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (sys.dim, sys.dim):
        raise ParameterError(
            f"rho0 must be {sys.dim}x{sys.dim}, got {rho0.shape}"
        )
    if np.abs(rho0 - rho0.conj().T).max() > RHO_TOL:
        raise ParameterError("rho0 is not Hermitian")
    if abs(np.trace(rho0).real - 1.0) > RHO_TOL:
        raise ParameterError("rho0 does not have unit trace")
    if np.linalg.eigvalsh(rho0).min() < -RHO_TOL:
        raise ParameterError("rho0 is not positive semidefinite")
    return _evolve_density(sys, pulse, diss, rho0[None, :, :], dt)[0]


def _chi_from_map(outputs: np.ndarray) -> np.ndarray:
    """Chi matrix from the 16 projected outputs of the basis |a><b|.

    ``outputs[4a+b]`` holds E(|a><b|) as a 4x4 block; the chi matrix in
    the Pauli basis is recovered from the row-major superoperator.
    """
    M = np.zeros((16, 16), dtype=complex)
    for a in range(4):
        for b in range(4):
            M[:, 4 * a + b] = outputs[4 * a + b].reshape(16)
    chi = np.zeros((16, 16), dtype=complex)
    for m in range(16):
        for n in range(16):
            G = np.kron(PAULI2[m], PAULI2[n].T)
            chi[m, n] = np.vdot(G, M) / 16.0
    return chi


def chi_cnot_ideal() -> np.ndarray:
    """Rank-1 chi matrix of the ideal CNOT."""
    a = np.array([np.trace(p.conj().T @ CNOT) / 4.0 for p in PAULI2])
    return np.outer(a, a.conj())


def process_fidelity(chi: ChiMatrix, chi_ideal: np.ndarray = None) -> float:
    """Process fidelity Tr(chi_ideal chi)."""
    if chi_ideal is None:
        chi_ideal = chi_cnot_ideal()
    return float(np.trace(chi_ideal @ chi.chi).real)


def average_gate_fidelity(chi: ChiMatrix) -> float:
    """Average gate fidelity (4 F_pro + 1)/5 on the computational subspace."""
    return (4.0 * process_fidelity(chi) + 1.0) / 5.0


def gate_error(chi: ChiMatrix) -> float:
    """Gate error 1 - average_gate_fidelity."""
    return 1.0 - average_gate_fidelity(chi)


def _tomography_once(sys, pulse, diss, dt):
    idx = sys.computational_indices()
    basis = np.zeros((16, sys.dim, sys.dim), dtype=complex)
    for a in range(4):
        for b in range(4):
            basis[4 * a + b, idx[a], idx[b]] = 1.0
    finals = _evolve_density(sys, pulse, diss, basis, dt)
    # virtual-Z correction of the map, phases taken from the unitary run
    u_proj = project_computational(sys, propagate(sys, pulse, dt=pulse.dt))
    u_corr, phases = apply_virtual_z(u_proj)
    after = np.exp(-1j * phases.phi_00) * np.exp(
        1j
        * np.array([0.0, phases.phi_1, phases.phi_2, phases.phi_1 + phases.phi_2])
    )
    before = np.exp(1j * np.array([0.0, phases.phi_3, 0.0, phases.phi_3]))
    outputs = np.zeros((16, 4, 4), dtype=complex)
    for a in range(4):
        for b in range(4):
            block = finals[4 * a + b][np.ix_(idx, idx)]
            block = (after[:, None] * block * after.conj()[None, :])
            outputs[4 * a + b] = before[a] * before[b].conjugate() * block
    return _chi_from_map(outputs)


def process_tomography(
    sys: CoupledSystem,
    pulse: PulseSpec,
    diss: DissipationSpec,
    dt: float = DEFAULT_MASTER_DT,
    auto_dt: bool = True,
) -> ChiMatrix:
    """Reconstruct the 16x16 chi matrix of the dissipative gate.

    The 16 basis matrices |i><j| of the dressed computational subspace are
    propagated through the master equation, projected back, corrected by
    the virtual-Z phases of the corresponding unitary run, and converted
    to the Pauli basis.  With ``auto_dt`` the step is halved until the
    resulting average gate fidelity changes by less than 1e-7.
    """
    chi = _tomography_once(sys, pulse, diss, dt)
    if auto_dt:
        f = (4.0 * float(np.trace(chi_cnot_ideal() @ chi).real) + 1.0) / 5.0
        for _ in range(MAX_HALVINGS):
            dt /= 2.0
            chi_next = _tomography_once(sys, pulse, diss, dt)
            f_next = (
                4.0 * float(np.trace(chi_cnot_ideal() @ chi_next).real) + 1.0
            ) / 5.0
            if abs(f_next - f) < MASTER_CONVERGENCE_TOL:
                chi = chi_next
                break
            chi, f = chi_next, f_next
        else:
            raise ConvergenceError(
                f"tomography fidelity not converged to {MASTER_CONVERGENCE_TOL}"
            )
    chi = 0.5 * (chi + chi.conj().T)
    return ChiMatrix(chi=chi, trace_deficit=float(1.0 - np.trace(chi).real))
