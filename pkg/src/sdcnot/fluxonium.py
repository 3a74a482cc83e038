"""Single fluxonium qubit: Hamiltonian construction and diagonalization.

All energies are stored as ordinary frequencies E/h in GHz; time is in ns.
Angular frequencies (2*pi*nu) appear only inside dynamics kernels.

The working basis is the harmonic-oscillator eigenbasis of the quadratic
part 4*E_C*n^2 + E_L*phi^2/2, with

    phi = phi_zpf * (a + a^dag),   phi_zpf = (2 E_C / E_L)**(1/4),
    n   = i * n_zpf * (a^dag - a), n_zpf   = (E_L / (32 E_C))**(1/4).

With this quadrature convention the Hamiltonian matrix is real symmetric
for every external flux (both cos(phi) and sin(phi) are real symmetric),
eigenvectors are real, and every charge matrix element <k|n|l> is purely
imaginary.  The reported values n_kl = -i<k|n|l> are therefore real.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, TruncationError

__all__ = [
    "FluxoniumSpec",
    "QubitSpectrum",
    "build_hamiltonian",
    "diagonalize",
    "charge_operator",
]

DEFAULT_BASIS_SIZE = 100


@dataclass(frozen=True)
class FluxoniumSpec:
    """Circuit energies (GHz) and external flux of one fluxonium qubit.

    Parameters
    ----------
    e_c, e_l, e_j : float
        Charging, inductive, and Josephson energies divided by h, in GHz.
    phi_ext : float
        Dimensionless external flux in radians; pi is the sweet spot.
    basis_size : int
        Harmonic-oscillator basis truncation (at least 20).
    """

    e_c: float
    e_l: float
    e_j: float
    phi_ext: float = np.pi
    basis_size: int = DEFAULT_BASIS_SIZE

    def __post_init__(self):
        if self.e_c <= 0:
            raise ParameterError(f"e_c must be positive, got {self.e_c}")
        if self.e_l <= 0:
            raise ParameterError(f"e_l must be positive, got {self.e_l}")
        if self.e_j < 0:
            raise ParameterError(f"e_j must be non-negative, got {self.e_j}")
        if self.basis_size < 20:
            raise ParameterError(
                f"basis_size must be at least 20, got {self.basis_size}"
            )

    @property
    def n_zpf(self) -> float:
        """Zero-point charge fluctuation of the quadratic part."""
        return (self.e_l / (32.0 * self.e_c)) ** 0.25

    @property
    def phi_zpf(self) -> float:
        """Zero-point flux fluctuation of the quadratic part."""
        return (2.0 * self.e_c / self.e_l) ** 0.25

    @property
    def plasma_freq(self) -> float:
        """Level splitting sqrt(8 E_L E_C) of the quadratic part, GHz."""
        return np.sqrt(8.0 * self.e_l * self.e_c)


@dataclass
class QubitSpectrum:
    """Eigenenergies and charge matrix elements of one qubit.

    Attributes
    ----------
    energies : ndarray, shape (level_count,)
        Eigenenergies in GHz, ascending, ground state shifted to zero.
    n_elements : ndarray, shape (level_count, level_count)
        Real antisymmetric matrix n_kl = -i<k|n|l>.
    level_count : int
        Number of retained eigenstates.
    """

    energies: np.ndarray
    n_elements: np.ndarray
    level_count: int
    spec: FluxoniumSpec = field(repr=False, default=None)

    def transition(self, k: int, l: int) -> float:
        """Transition frequency E_l - E_k in GHz (positive for k < l)."""
        return self.energies[l] - self.energies[k]


def _ladder(n: int) -> np.ndarray:
    """Annihilation operator in the n-dimensional oscillator basis."""
    return np.diag(np.sqrt(np.arange(1, n)), 1)


def build_hamiltonian(spec: FluxoniumSpec) -> np.ndarray:
    """Fluxonium Hamiltonian 4E_C n^2 + E_L phi^2/2 - E_J cos(phi - phi_ext).

    Returns the real symmetric matrix of the Hamiltonian (in GHz) in the
    harmonic-oscillator eigenbasis of its quadratic part.  cos(phi - phi_ext)
    is expanded as cos(phi_ext) cos(phi) + sin(phi_ext) sin(phi); both matrix
    functions are evaluated exactly through the eigendecomposition of phi,
    so the result is valid at any external flux.
    """
    n = spec.basis_size
    a = _ladder(n)
    phi = spec.phi_zpf * (a + a.T)
    lam, q = np.linalg.eigh(phi)
    cos_shifted = (q * np.cos(lam - spec.phi_ext)) @ q.T
    h = np.diag(spec.plasma_freq * np.arange(n)) - spec.e_j * cos_shifted
    return 0.5 * (h + h.T)


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude component of each column positive."""
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def diagonalize(spec: FluxoniumSpec, keep: int = 6) -> QubitSpectrum:
    """Diagonalize a fluxonium and return its lowest ``keep`` levels.

    Eigenvectors are real with a deterministic sign (largest-magnitude
    component positive), which fixes the signs of the reported charge
    matrix elements n_kl = -i<k|n|l> across runs.

    Raises
    ------
    TruncationError
        If ``keep`` exceeds half the working basis size.
    """
    if keep < 1:
        raise ParameterError(f"keep must be positive, got {keep}")
    if keep > spec.basis_size // 2:
        raise TruncationError(
            f"keep={keep} exceeds basis_size/2={spec.basis_size // 2}; "
            "increase basis_size"
        )
    h = build_hamiltonian(spec)
    evals, evecs = np.linalg.eigh(h)
    evecs = _fix_signs(evecs[:, :keep])
    energies = evals[:keep] - evals[0]
    a = _ladder(spec.basis_size)
    # n_kl = -i <k| i n_zpf (a^dag - a) |l> = n_zpf v_k^T (a^dag - a) v_l
    n_elements = spec.n_zpf * (evecs.T @ (a.T - a) @ evecs)
    return QubitSpectrum(
        energies=energies,
        n_elements=n_elements,
        level_count=keep,
        spec=spec,
    )


def charge_operator(spectrum: QubitSpectrum) -> np.ndarray:
    """Charge operator <k|n|l> = i*n_kl in the qubit eigenbasis (complex)."""
    return 1j * spectrum.n_elements
