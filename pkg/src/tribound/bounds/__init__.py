"""Exact arithmetic and comparison for astronomically large bound expressions."""
from .compare import EQ, GE, GT, LE, LT, Undecided, compare, leq, verdict
from .exact import DEFAULT_DIGIT_LIMIT, ObligationError, decimal_digits, eval_exact
from .expr import (
    Add,
    Binomial,
    C,
    CentralBinomialMax,
    Const,
    Expr,
    Max,
    Mul,
    Pow,
    PowerDiff,
    SchurJ,
    Sub,
    Surd,
    pretty,
)
from .formulas import (
    E_HIGH,
    E_LOW,
    ChainStep,
    bound_D,
    bound_d1,
    bound_d2,
    bound_d3,
    bound_dbar,
    comparison_report,
    degree_bound,
    dstar_nstar,
    feng_bounds,
    format_steps,
    schur_J,
    tower,
    verify_chain,
)
from .magnitude import LogProfile, log_profile, magnitude
from .normalize import norm
