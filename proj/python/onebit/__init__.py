"""1-bit feedback scheduling over fading broadcast channels."""

from ._core import (
    ConvergenceError,
    DomainError,
    RangeError,
    bessel_i0,
    dmt_analytic,
    full_csi_rate,
    marcum_q1,
    optimal_threshold,
    outage,
    outage_longterm_closed,
    rate_bounds,
    rho_from_jakes,
    run_cli,
    simulate_ergodic_rate,
    simulate_outage,
    sum_rate,
    unconditional_rate,
    wideband_metrics,
)

__all__ = [
    "ConvergenceError",
    "DomainError",
    "RangeError",
    "bessel_i0",
    "dmt_analytic",
    "full_csi_rate",
    "marcum_q1",
    "optimal_threshold",
    "outage",
    "outage_longterm_closed",
    "rate_bounds",
    "rho_from_jakes",
    "run_cli",
    "simulate_ergodic_rate",
    "simulate_outage",
    "sum_rate",
    "unconditional_rate",
    "wideband_metrics",
]
