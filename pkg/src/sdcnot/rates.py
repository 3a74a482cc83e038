"""Drive parameters and effective-Hamiltonian rates for the SD gate.

Unit convention: every Rabi-type rate is stored as an ordinary frequency
(Omega/2pi) in GHz, matching the drive amplitude ``f`` used throughout,
so a resonant pi pulse on a transition with rate Omega takes
t = 1/(2*Omega) ns.  The dimensionless amplitudes lambda and lambda_12
and the rate ratios are unit-free.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coupled import CoupledSystem, matrix_element, zz_rate
from .errors import DegeneracyError

__all__ = [
    "EffectiveRates",
    "eta_sd",
    "rabi_rate_sd",
    "rabi_rate_linear",
    "rabi_rate_swapped",
    "pi_pulse_duration",
    "effective_hamiltonian_rates",
    "lambda_drive",
    "lambda_12",
    "speed_limit",
]

ETA_DENOMINATOR_FLOOR = 1e-8


@dataclass
class EffectiveRates:
    """Effective interaction rates and drive figures at one amplitude.

    xi_zx, xi_ix, xi_zz are in GHz (multiply by 2*pi for angular rates);
    eta, lambda_, lambda_12 are dimensionless; omega_rabi_10_11 is the
    bright-transition Rabi rate in GHz; t_fsl is the speed-limit duration
    in ns.
    """

    xi_zx: float
    xi_ix: float
    xi_zz: float
    eta: float
    omega_rabi_10_11: float
    lambda_: float
    lambda_12: float
    t_fsl: float


def _im(sys: CoupledSystem, op: str, frm: tuple, to: tuple) -> float:
    """Real representative -i<frm|n_op|to> of a purely imaginary element."""
    return matrix_element(sys, op, frm, to).imag


def eta_sd(sys: CoupledSystem) -> float:
    """Drive ratio eta = -<00|n_A|01> / <00|n_B|01> darkening 00-01.

    Real under the deterministic phase convention.  Raises
    :class:`DegeneracyError` when the direct element in the denominator
    vanishes.
    """
    num = _im(sys, "A", (0, 0), (0, 1))
    den = _im(sys, "B", (0, 0), (0, 1))
    if abs(den) < ETA_DENOMINATOR_FLOOR:
        raise DegeneracyError(
            "direct element <00|n_B|01> vanishes; SD drive ratio undefined"
        )
    return -num / den


def rabi_rate_sd(sys: CoupledSystem, f: float) -> float:
    """Resonant Rabi rate of the 10-11 transition under the SD drive, GHz.

    Exact matrix-element combination for a constant drive envelope of
    amplitude ``f``:

        Omega = 2 f |<10|n_A|11> - <00|n_A|01> <10|n_B|11> / <00|n_B|01>|
    """
    den = _im(sys, "B", (0, 0), (0, 1))
    if abs(den) < ETA_DENOMINATOR_FLOOR:
        raise DegeneracyError(
            "direct element <00|n_B|01> vanishes; SD drive ratio undefined"
        )
    combo = _im(sys, "A", (1, 0), (1, 1)) - _im(sys, "A", (0, 0), (0, 1)) * (
        _im(sys, "B", (1, 0), (1, 1)) / den
    )
    return 2.0 * f * abs(combo)


def rabi_rate_linear(sys: CoupledSystem, f: float) -> float:
    """Linear-in-J_C form 2f|<10|n_A|11> - <00|n_A|01>| of the Rabi rate."""
    return 2.0 * f * abs(
        _im(sys, "A", (1, 0), (1, 1)) - _im(sys, "A", (0, 0), (0, 1))
    )


def rabi_rate_swapped(sys: CoupledSystem, f: float) -> float:
    """Rabi rate 2f|<01|n_B|11> - <00|n_B|10>| with roles interchanged."""
    return 2.0 * f * abs(
        _im(sys, "B", (0, 1), (1, 1)) - _im(sys, "B", (0, 0), (1, 0))
    )


def pi_pulse_duration(omega: float) -> float:
    """Half Rabi period 1/(2*Omega) in ns for a rate Omega in GHz."""
    return 1.0 / (2.0 * omega)


def lambda_drive(sys: CoupledSystem, f: float) -> float:
    """Dimensionless control-qubit drive amplitude 2 f n01_A / Delta_AB."""
    delta = sys.spectrum_b.transition(0, 1) - sys.spectrum_a.transition(0, 1)
    if delta == 0:
        raise DegeneracyError("qubit frequencies are degenerate")
    return 2.0 * f * abs(sys.spectrum_a.n_elements[0, 1]) / delta


def lambda_12(sys: CoupledSystem, f: float) -> float:
    """Dimensionless amplitude of the control 1-2 transition drive."""
    delta = sys.spectrum_a.transition(1, 2) - sys.spectrum_b.transition(0, 1)
    if delta == 0:
        raise DegeneracyError("control 1-2 transition resonant with drive")
    return 2.0 * f * abs(sys.spectrum_a.n_elements[1, 2]) / delta


def effective_hamiltonian_rates(
    sys: CoupledSystem, f: float, eta: float
) -> EffectiveRates:
    """Linear-order ZX/IX rates plus the static ZZ rate and drive figures.

    The ZX and IX rates are exactly linear in ``f`` at fixed ``eta``; the
    ZZ rate is the zero-drive value.  Choosing ``eta`` from :func:`eta_sd`
    balances the rates, xi_ix + xi_zx = 0.
    """
    ma_00_01 = _im(sys, "A", (0, 0), (0, 1))
    ma_10_11 = _im(sys, "A", (1, 0), (1, 1))
    mb_00_01 = _im(sys, "B", (0, 0), (0, 1))
    mb_10_11 = _im(sys, "B", (1, 0), (1, 1))
    xi_zx = f * (ma_00_01 - ma_10_11 + eta * (mb_00_01 - mb_10_11))
    xi_ix = f * (ma_00_01 + ma_10_11 + eta * (mb_00_01 + mb_10_11))
    return EffectiveRates(
        xi_zx=xi_zx,
        xi_ix=xi_ix,
        xi_zz=zz_rate(sys),
        eta=eta,
        omega_rabi_10_11=rabi_rate_sd(sys, f),
        lambda_=lambda_drive(sys, f),
        lambda_12=lambda_12(sys, f),
        t_fsl=speed_limit(sys),
    )


def speed_limit(sys: CoupledSystem) -> float:
    """Fundamental speed-limit duration in ns.

    Obtained by pushing the control-qubit drive to lambda ~ 1:

        t_fsl = n01_A / (2 |<10|n_A|11> - <00|n_A|01>|) / Delta_AB

    with Delta_AB the bare qubit detuning in GHz.
    """
    delta = sys.spectrum_b.transition(0, 1) - sys.spectrum_a.transition(0, 1)
    if delta == 0:
        raise DegeneracyError("qubit frequencies are degenerate")
    dn = _im(sys, "A", (1, 0), (1, 1)) - _im(sys, "A", (0, 0), (0, 1))
    if dn == 0:
        raise DegeneracyError("vanishing cross-element difference")
    return abs(sys.spectrum_a.n_elements[0, 1]) / (2.0 * abs(dn)) / abs(delta)
