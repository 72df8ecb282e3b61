"""GDOF of the symmetric two-user interference channel with a signal cognitive relay.

The package combines a closed-form region table for the generalized degrees
of freedom, finite-SNR achievable rates of five transmission schemes,
optimized sum-rate upper bounds, a regression-based GDOF estimator and a
command-line front end that emits figure data and verification reports.
"""

from .channel import (
    ChannelParams,
    DivisionGuardError,
    EffectiveGains,
    GdofPoint,
    RelayCoefficients,
    effective_gains,
    exponents_from_gains,
    gains_from_exponents,
)
from .gdof import (
    Discrepancy,
    GdofBoundSet,
    Region,
    classify,
    consistency_report,
    gdof_upper_bounds,
    gdof_value,
    theorem1_minmax,
)
from .optimize import Domain, OptimizerSettings, Optimum, maximize
from .bounds import (
    BoundReport,
    InapplicableRegimeError,
    capacity_c,
    mac_bound_mixed,
    mac_bound_strong,
    single_user_bound,
    sum_rate_upper_bound,
    weak_interference_bound,
    z_bound,
)
from .schemes import (
    SchemeId,
    SchemeResult,
    all_schemes,
    best_achievable,
    hk_optimize,
    hk_rate,
    mac_scheme,
    scheme_gdof,
    vsi_rate,
    zf_relay_cancels,
    zf_source_scaled,
)
from .estimator import SlopeReport, estimate_gdof, verify_point

__version__ = "0.1.0"
