"""Three-parameter pulse calibration at fixed gate duration and coupling.

The drive frequency, peak amplitude, and drive ratio eta are tuned with a
Nelder-Mead simplex to minimize the coherent gate error.  The starting
point puts the drive on the dressed 10-11 transition, takes eta from the
static darkening condition, and sets the amplitude from the linear Rabi
formula for a pi rotation, rescaled by the envelope area.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy import integrate
from scipy.optimize import minimize

from .coupled import CoupledSystem
from .dynamics import PulseSpec, envelope, simulate_gate
from .errors import ParameterError, PhaseExtractionError
from .rates import eta_sd, pi_pulse_duration, rabi_rate_linear

__all__ = [
    "OptimizationResult",
    "envelope_area_rescale",
    "initial_guess",
    "optimize",
    "sweep_gate_duration",
]

DEFAULT_MAX_EVALS = 500
DEFAULT_F_TOL = 1e-8

# initial simplex displacements: 1 MHz in drive frequency, 5% in
# amplitude, 10% in eta
SIMPLEX_DOMEGA = 1e-3
SIMPLEX_AMP_FACTOR = 1.05
SIMPLEX_ETA_FRACTION = 0.1
SIMPLEX_ETA_FLOOR = 1e-3

FAILED_EVAL_ERROR = 1.0


@dataclass
class OptimizationResult:
    """Outcome of one pulse calibration.

    ``trace`` lists every objective evaluation as ((omega_d, f_peak, eta),
    error) in call order; ``best_error`` re-evaluates to the same value
    for ``best_pulse`` because the pipeline is deterministic.
    """

    best_pulse: PulseSpec
    best_error: float
    evaluations: int
    trace: list = field(repr=False)
    converged: bool


def envelope_area_rescale(pulse: PulseSpec) -> float:
    """Constant-envelope rescaling R = t_gate / integral of f(t)/f_peak.

    An envelope of peak amplitude R*f0 deposits the same pulse area as a
    constant drive of amplitude f0 over the full gate duration.
    """
    unit = replace(pulse, f_peak=1.0)
    area, _ = integrate.quad(
        lambda t: envelope(unit, t), 0.0, pulse.t_gate, limit=200
    )
    return pulse.t_gate / area


def initial_guess(
    sys: CoupledSystem,
    t_gate: float,
    dt: float = 0.001,
    envelope_kind: str = "gaussian",
) -> PulseSpec:
    """Starting pulse for the calibration at a given duration.

    Drive frequency on the dressed 10-11 transition, eta from the static
    darkening ratio, and the peak amplitude solving the linear Rabi
    formula for a pi rotation over t_gate, boosted by the envelope-area
    rescaling factor.
    """
    omega_d = sys.transition((1, 0), (1, 1))
    eta = eta_sd(sys)
    # constant-envelope amplitude: Omega(f) * t_gate = 1/2 Rabi period
    omega_target = 1.0 / (2.0 * t_gate)
    f_const = omega_target / rabi_rate_linear(sys, 1.0)
    shape = PulseSpec(
        omega_d=omega_d,
        f_peak=1.0,
        eta=eta,
        t_gate=t_gate,
        envelope_kind=envelope_kind,
        dt=dt,
    )
    f_peak = f_const * envelope_area_rescale(shape)
    return replace(shape, f_peak=f_peak)


def _objective_factory(sys, template, trace):
    def objective(x):
        omega_d, log_f, eta = x
        pulse = replace(
            template, omega_d=float(omega_d), f_peak=float(np.exp(log_f)),
            eta=float(eta),
        )
        try:
            report = simulate_gate(sys, pulse)
            err = 1.0 - report.f_coherent
        except PhaseExtractionError:
            err = FAILED_EVAL_ERROR
        trace.append(((pulse.omega_d, pulse.f_peak, pulse.eta), float(err)))
        return err

    return objective


def optimize(
    sys: CoupledSystem,
    t_gate: float,
    objective: str = "coherent_error",
    x0: PulseSpec = None,
    max_evals: int = DEFAULT_MAX_EVALS,
    f_tol: float = DEFAULT_F_TOL,
    dt: float = 0.001,
    envelope_kind: str = "gaussian",
) -> OptimizationResult:
    """Calibrate (omega_d, f_peak, eta) to minimize coherent gate error.

    Nelder-Mead over (omega_d, log f_peak, eta) starting from ``x0`` (or
    :func:`initial_guess`), stopping when the objective improves by less
    than ``f_tol`` over an iteration or after ``max_evals`` evaluations;
    in the latter case ``converged`` is False and the best point found is
    still returned.  Deterministic for identical inputs.
    """
    if objective != "coherent_error":
        raise ParameterError(
            f"unsupported objective {objective!r}; only 'coherent_error'"
        )
    if x0 is None:
        x0 = initial_guess(sys, t_gate, dt=dt, envelope_kind=envelope_kind)
    else:
        x0 = replace(x0, t_gate=t_gate, dt=dt)

    trace = []
    fun = _objective_factory(sys, x0, trace)
    start = np.array([x0.omega_d, np.log(x0.f_peak), x0.eta])
    d_eta = max(SIMPLEX_ETA_FRACTION * abs(x0.eta), SIMPLEX_ETA_FLOOR)
    simplex = np.array(
        [
            start,
            start + [SIMPLEX_DOMEGA, 0.0, 0.0],
            start + [0.0, np.log(SIMPLEX_AMP_FACTOR), 0.0],
            start + [0.0, 0.0, d_eta],
        ]
    )
    res = minimize(
        fun,
        start,
        method="Nelder-Mead",
        options=dict(
            initial_simplex=simplex,
            fatol=f_tol,
            xatol=1e-10,
            maxfev=max_evals,
            disp=False,
        ),
    )
    # never return a point worse than anything already evaluated
    params, errors = zip(*trace)
    best = int(np.argmin(errors))
    best_pulse = replace(
        x0, omega_d=params[best][0], f_peak=params[best][1], eta=params[best][2]
    )
    return OptimizationResult(
        best_pulse=best_pulse,
        best_error=float(errors[best]),
        evaluations=len(trace),
        trace=trace,
        converged=bool(res.success),
    )


def sweep_gate_duration(
    sys: CoupledSystem,
    t_gates,
    max_evals: int = DEFAULT_MAX_EVALS,
    dt: float = 0.001,
    warm_start: bool = True,
) -> list:
    """Optimize each duration in ``t_gates``, optionally warm-starting.

    Warm starts seed each point with the previous optimum (amplitude
    rescaled to keep the pulse area fixed), which is faster but may stay
    in one local basin; cold starts re-derive the initial guess per point.
    Returns one :class:`OptimizationResult` per duration, in input order.
    """
    results = []
    previous = None
    for t_gate in t_gates:
        x0 = None
        if warm_start and previous is not None:
            scale = previous.t_gate / t_gate
            x0 = replace(previous, f_peak=previous.f_peak * scale)
        res = optimize(sys, t_gate, x0=x0, max_evals=max_evals, dt=dt)
        results.append(res)
        previous = res.best_pulse
    return results
