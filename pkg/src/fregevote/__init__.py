"""Frege's temporal voting method, its modified variant and apportionment methods."""

from .apportionment import (
    METHODS,
    ApportionmentProblem,
    Divisor,
    compare_all,
    divisor_method,
    frege_apportionment,
    is_d_admissible,
    largest_remainder,
    quota_method,
)
from .core import InvariantError, Profile, ProfileError, ceil, floor, normalize, rat
from .modified import ModifiedState, audit_variable_quota, harmonic_profile, run_modified, step_modified
from .original import (
    OriginalState,
    closed_form_check,
    cost_stabilization_time,
    detect_cycle,
    run_original,
    step_original,
)
from .trace import Trace

__version__ = "0.1.0"
