"""High-precision Ramanujan summation, Borel-Laplace resummation and identity checks."""

from __future__ import annotations

from .borel import (
    BorelSeries,
    ClosedForm,
    LaplaceConfig,
    PadeDiagonal,
    TailModel,
    borel_sum,
    laplace_transform,
    pade_continuation,
)
from .catalog import (
    ExpHarmonic,
    ExpHarmonicJ,
    ExpLog,
    ExpOverN,
    ExpTerm,
    LogOverPower,
    MonomialTimesHarmonic,
    PowerTerm,
)
from .engine import (
    EulerMaclaurinConfig,
    RamanujanResult,
    Strategy,
    catalog_R_function,
    catalog_sum,
    euler_sum_h,
    ramanujan_sum,
    sum_via_cgt,
    sum_via_euler_maclaurin,
    sum_via_taylor_coefficients,
    translate_shift,
)
from .errors import *  # noqa: F401,F403
from .expr import classify_growth, derivatives, differentiate, evaluate, parse, to_text
from .formal import FormalSeries, corollary_rational, formal_series
from .identities import IdentityReport, run_all, run_check
from .numeric import BigReal, PrecisionContext, compare_within, evaluate_elementary, format_decimal

__version__ = "0.1.0"
