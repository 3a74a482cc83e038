"""Two capacitively coupled fluxoniums: dressed states and matrix elements.

The coupled Hamiltonian H_A x 1 + 1 x H_B + J_C n_A x n_B is assembled
from the single-qubit eigen-decompositions (energies plus charge matrix
elements), truncated to ``levels_per_qubit`` levels per qubit.  With the
real-eigenvector convention of :mod:`sdcnot.fluxonium` the interaction
term -J_C N_A x N_B is real symmetric, so dressed eigenvectors are real
and inherit the same deterministic sign fixing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import LabelLookupError, LabelingError, ParameterError
from .fluxonium import FluxoniumSpec, QubitSpectrum, diagonalize

__all__ = ["CoupledSystem", "assemble", "matrix_element", "zz_rate"]

MIN_LABEL_OVERLAP = 0.5


@dataclass
class CoupledSystem:
    """Dressed description of two coupled fluxonium qubits.

    Attributes
    ----------
    spectrum_a, spectrum_b : QubitSpectrum
        Bare single-qubit spectra (``levels_per_qubit`` levels each).
    j_c : float
        Coupling strength J_C/h in GHz.
    levels_per_qubit : int
        Per-qubit truncation K; the coupled space has dimension K**2.
    dressed_energies : ndarray, shape (K**2,)
        Dressed eigenenergies in GHz indexed by eigenindex, shifted so the
        state labeled (0, 0) sits at zero.
    dressed_vectors : ndarray, shape (K**2, K**2)
        Real orthogonal eigenvector matrix; column m is dressed state m in
        the bare product basis (row index = K*k + l for |k_A l_B>).
    label_map : dict[tuple[int, int], int]
        Bijection from bare labels (k, l) to dressed eigenindices.
    n_a_full, n_b_full : ndarray, shape (K**2, K**2)
        Charge operators n_A x 1 and 1 x n_B in the dressed basis
        (complex Hermitian, purely imaginary entries).
    """

    spectrum_a: QubitSpectrum
    spectrum_b: QubitSpectrum
    j_c: float
    levels_per_qubit: int
    dressed_energies: np.ndarray
    dressed_vectors: np.ndarray
    label_map: dict = field(repr=False)
    n_a_full: np.ndarray = field(repr=False)
    n_b_full: np.ndarray = field(repr=False)

    def index(self, label: tuple) -> int:
        """Dressed eigenindex of bare label (k, l)."""
        try:
            return self.label_map[tuple(label)]
        except KeyError:
            raise LabelLookupError(
                f"label {tuple(label)} not in the label map (K="
                f"{self.levels_per_qubit})"
            ) from None

    def energy(self, k: int, l: int) -> float:
        """Dressed energy of the state labeled (k, l), GHz."""
        return self.dressed_energies[self.index((k, l))]

    def transition(self, frm: tuple, to: tuple) -> float:
        """Dressed transition frequency E(to) - E(frm) in GHz."""
        return self.dressed_energies[self.index(to)] - self.dressed_energies[
            self.index(frm)
        ]

    @property
    def dim(self) -> int:
        return self.levels_per_qubit ** 2

    def computational_indices(self) -> list:
        """Dressed indices of (0,0), (0,1), (1,0), (1,1), in that order."""
        return [self.index(p) for p in ((0, 0), (0, 1), (1, 0), (1, 1))]


def _sign_fix(vectors: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def assemble(
    spec_a: FluxoniumSpec,
    spec_b: FluxoniumSpec,
    j_c: float,
    levels_per_qubit: int = 5,
) -> CoupledSystem:
    """Build and diagonalize the coupled two-qubit Hamiltonian.

    Each dressed state is labeled by the bare product state of maximum
    overlap; the assignment must be unambiguous (overlap squared at least
    0.5 and a proper bijection), otherwise a :class:`LabelingError` names
    the offending eigenindex.

    Raises
    ------
    ParameterError
        For negative coupling or fewer than 4 levels per qubit.
    LabelingError
        If any dressed state cannot be labeled unambiguously.
    """
    if j_c < 0:
        raise ParameterError(f"j_c must be non-negative, got {j_c}")
    if levels_per_qubit < 4:
        raise ParameterError(
            f"levels_per_qubit must be at least 4, got {levels_per_qubit}"
        )
    K = levels_per_qubit
    spectrum_a = diagonalize(spec_a, keep=K)
    spectrum_b = diagonalize(spec_b, keep=K)

    eye = np.eye(K)
    # (i N_A) x (i N_B) = -(N_A x N_B): the coupled matrix stays real.
    h = (
        np.kron(np.diag(spectrum_a.energies), eye)
        + np.kron(eye, np.diag(spectrum_b.energies))
        - j_c * np.kron(spectrum_a.n_elements, spectrum_b.n_elements)
    )
    evals, evecs = np.linalg.eigh(h)
    evecs = _sign_fix(evecs)

    label_map = {}
    for m in range(K * K):
        b = int(np.argmax(np.abs(evecs[:, m])))
        overlap = evecs[b, m] ** 2
        if overlap < MIN_LABEL_OVERLAP:
            raise LabelingError(
                f"dressed state {m}: maximum bare overlap {overlap:.3f} < "
                f"{MIN_LABEL_OVERLAP}"
            )
        label = (b // K, b % K)
        if label in label_map:
            raise LabelingError(
                f"dressed states {label_map[label]} and {m} both claim bare "
                f"label {label}"
            )
        label_map[label] = m

    energies = evals - evals[label_map[(0, 0)]]
    n_a_full = evecs.T @ np.kron(1j * spectrum_a.n_elements, eye) @ evecs
    n_b_full = evecs.T @ np.kron(eye, 1j * spectrum_b.n_elements) @ evecs
    return CoupledSystem(
        spectrum_a=spectrum_a,
        spectrum_b=spectrum_b,
        j_c=j_c,
        levels_per_qubit=K,
        dressed_energies=energies,
        dressed_vectors=evecs,
        label_map=label_map,
        n_a_full=n_a_full,
        n_b_full=n_b_full,
    )


def matrix_element(
    sys: CoupledSystem, operator: str, frm: tuple, to: tuple
) -> complex:
    """Charge matrix element <frm|n_op|to> between dressed states.

    ``operator`` selects qubit A or B ('A'/'B', case-insensitive).  The
    phase convention is inherited from the deterministic eigenvector sign
    fixing; with real eigenvectors the value is purely imaginary.
    """
    op = operator.upper()
    if op == "A":
        full = sys.n_a_full
    elif op == "B":
        full = sys.n_b_full
    else:
        raise ParameterError(f"operator must be 'A' or 'B', got {operator!r}")
    return complex(full[sys.index(frm), sys.index(to)])


def zz_rate(sys: CoupledSystem) -> float:
    """Static ZZ rate [E(1,1) - E(1,0)] - [E(0,1) - E(0,0)] in GHz."""
    return (sys.energy(1, 1) - sys.energy(1, 0)) - (
        sys.energy(0, 1) - sys.energy(0, 0)
    )
