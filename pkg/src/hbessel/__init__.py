"""Numerical verification of Bessel-series identities attached to Hecke functional equations."""

from .engine import (IDENTITY_IDS, IdentityCase, IdentityParams, eval_first_theorem_general, eval_identity,
                     eval_modular_relation, eval_riesz_identity, eval_second_theorem_general, run_suite)
from .hecke import SYSTEM_IDS, catalog
from .report import VerificationReport
from .specfun import AccuracyError, DomainError, RangeError, ValueWithError

__version__ = "0.1.0"

__all__ = [
    "IDENTITY_IDS", "SYSTEM_IDS", "IdentityCase", "IdentityParams", "VerificationReport", "ValueWithError",
    "AccuracyError", "DomainError", "RangeError", "catalog", "eval_identity", "eval_modular_relation",
    "eval_riesz_identity", "eval_first_theorem_general", "eval_second_theorem_general", "run_suite",
]
