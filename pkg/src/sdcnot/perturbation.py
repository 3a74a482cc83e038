"""First-order perturbative cross matrix elements.

Closed-form approximations for the four interaction-induced (cross)
charge matrix elements, keeping only hybridization within the
computational subspace and with states where one qubit occupies its
second or third excited level.  Each element is linear in the coupling
by construction; the exact-diagonalization route in
:mod:`sdcnot.coupled` supersedes these numerically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneracyError, ParameterError
from .fluxonium import QubitSpectrum

__all__ = [
    "PerturbativeElements",
    "cross_elements_perturbative",
    "hybridization_contributions",
]

DEGENERACY_THRESHOLD = 1e-3  # GHz; formulas diverge at resonant denominators

CROSS_ELEMENT_KEYS = ("a_00_01", "a_10_11", "b_00_10", "b_01_11")


@dataclass
class PerturbativeElements:
    """First-order interaction elements and cross matrix elements.

    ``v`` maps (k, l, k', l') to the interaction element
    V_{kl,k'l'} = J_C * n^A_kl * n^B_k'l' in GHz.  The four cross elements
    are purely imaginary under the real-n_kl convention.
    """

    v: dict = field(repr=False)
    cross_a_00_01: complex
    cross_a_10_11: complex
    cross_b_00_10: complex
    cross_b_01_11: complex

    def cross(self, key: str) -> complex:
        """Cross element by key, one of %s.""" % (CROSS_ELEMENT_KEYS,)
        if key not in CROSS_ELEMENT_KEYS:
            raise ParameterError(f"unknown cross element {key!r}")
        return getattr(self, "cross_" + key)


def _frequencies(spectrum: QubitSpectrum) -> tuple:
    w01 = spectrum.transition(0, 1)
    w12 = spectrum.transition(1, 2)
    w03 = spectrum.transition(0, 3)
    return w01, w12, w03


def _check_denominators(wa, wb) -> None:
    wa01, wa12, wa03 = wa
    wb01, wb12, wb03 = wb
    pairs = {
        "omega_A_01 - omega_B_01": wa01 - wb01,
        "omega_A_01 + omega_B_01": wa01 + wb01,
        "omega_A_03 - omega_B_01": wa03 - wb01,
        "omega_A_03 + omega_B_01": wa03 + wb01,
        "omega_A_12 - omega_B_01": wa12 - wb01,
        "omega_A_12 + omega_B_01": wa12 + wb01,
        "omega_A_01 - omega_B_03": wa01 - wb03,
        "omega_A_01 + omega_B_03": wa01 + wb03,
        "omega_A_01 - omega_B_12": wa01 - wb12,
        "omega_A_01 + omega_B_12": wa01 + wb12,
    }
    for name, delta in pairs.items():
        if abs(delta) < DEGENERACY_THRESHOLD:
            raise DegeneracyError(
                f"near-degenerate denominator {name} = {delta:.6f} GHz; "
                "use exact diagonalization instead"
            )


def cross_elements_perturbative(
    spectrum_a: QubitSpectrum, spectrum_b: QubitSpectrum, j_c: float
) -> PerturbativeElements:
    """Evaluate the four closed-form cross matrix elements.

    Requires at least four levels per spectrum and all participating
    transition-frequency denominators away from resonance (1 MHz guard).
    """
    if spectrum_a.level_count < 4 or spectrum_b.level_count < 4:
        raise ParameterError("spectra must contain at least 4 levels")
    wa = _frequencies(spectrum_a)
    wb = _frequencies(spectrum_b)
    _check_denominators(wa, wb)
    wa01, wa12, wa03 = wa
    wb01, wb12, wb03 = wb
    na, nb = spectrum_a.n_elements, spectrum_b.n_elements
    na01, na12, na03 = na[0, 1], na[1, 2], na[0, 3]
    nb01, nb12, nb03 = nb[0, 1], nb[1, 2], nb[0, 3]

    cross_a_00_01 = -2j * j_c * nb01 * (
        na01**2 * wa01 / (wa01**2 - wb01**2)
        + na03**2 * wa03 / (wa03**2 - wb01**2)
    )
    cross_a_10_11 = 2j * j_c * nb01 * (
        na01**2 * wa01 / (wa01**2 - wb01**2)
        - na12**2 * wa12 / (wa12**2 - wb01**2)
    )
    cross_b_00_10 = 2j * j_c * na01 * (
        nb01**2 * wb01 / (wa01**2 - wb01**2)
        + nb03**2 * wb03 / (wa01**2 - wb03**2)
    )
    cross_b_01_11 = -2j * j_c * na01 * (
        nb01**2 * wb01 / (wa01**2 - wb01**2)
        - nb12**2 * wb12 / (wa01**2 - wb12**2)
    )

    v = {}
    for k in range(4):
        for l in range(4):
            for kp in range(4):
                for lp in range(4):
                    v[(k, l, kp, lp)] = j_c * na[k, l] * nb[kp, lp]

    return PerturbativeElements(
        v=v,
        cross_a_00_01=complex(cross_a_00_01),
        cross_a_10_11=complex(cross_a_10_11),
        cross_b_00_10=complex(cross_b_00_10),
        cross_b_01_11=complex(cross_b_01_11),
    )


def hybridization_contributions(
    spectrum_a: QubitSpectrum,
    spectrum_b: QubitSpectrum,
    j_c: float,
    element: str = "a_10_11",
) -> list:
    """Split one cross element into its two bracketed interference terms.

    Returns ``[(label, contribution), ...]`` where the contributions are
    the purely imaginary summands of the closed-form element (their sum
    equals the full element).  The first term collects hybridization
    within the computational subspace; the second collects the pairs
    through the relevant second- or third-excited level.
    """
    if element not in CROSS_ELEMENT_KEYS:
        raise ParameterError(
            f"element must be one of {CROSS_ELEMENT_KEYS}, got {element!r}"
        )
    if spectrum_a.level_count < 4 or spectrum_b.level_count < 4:
        raise ParameterError("spectra must contain at least 4 levels")
    wa = _frequencies(spectrum_a)
    wb = _frequencies(spectrum_b)
    _check_denominators(wa, wb)
    wa01, wa12, wa03 = wa
    wb01, wb12, wb03 = wb
    na, nb = spectrum_a.n_elements, spectrum_b.n_elements
    na01, na12, na03 = na[0, 1], na[1, 2], na[0, 3]
    nb01, nb12, nb03 = nb[0, 1], nb[1, 2], nb[0, 3]

    if element == "a_00_01":
        pref = -2j * j_c * nb01
        terms = [
            ("A 0-1 (computational)", na01**2 * wa01 / (wa01**2 - wb01**2)),
            ("A 0-3", na03**2 * wa03 / (wa03**2 - wb01**2)),
        ]
    elif element == "a_10_11":
        pref = 2j * j_c * nb01
        terms = [
            ("A 0-1 (computational)", na01**2 * wa01 / (wa01**2 - wb01**2)),
            ("A 1-2", -(na12**2) * wa12 / (wa12**2 - wb01**2)),
        ]
    elif element == "b_00_10":
        pref = 2j * j_c * na01
        terms = [
            ("B 0-1 (computational)", nb01**2 * wb01 / (wa01**2 - wb01**2)),
            ("B 0-3", nb03**2 * wb03 / (wa01**2 - wb03**2)),
        ]
    else:  # b_01_11
        pref = -2j * j_c * na01
        terms = [
            ("B 0-1 (computational)", nb01**2 * wb01 / (wa01**2 - wb01**2)),
            ("B 1-2", -(nb12**2) * wb12 / (wa01**2 - wb12**2)),
        ]
    return [(label, complex(pref * t)) for label, t in terms]
