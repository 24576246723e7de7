"""Verification report shared by the quadrature oracles and the engine."""

import math
from dataclasses import dataclass, field

from .specfun import ValueWithError


def _num(v):
    if isinstance(v, int) and not isinstance(v, bool):
        return v
    if isinstance(v, complex):
        if v.imag == 0.0:
            return _num(v.real)
        return [_num(v.real), _num(v.imag)]
    v = float(v)
    return v if math.isfinite(v) else None


@dataclass
class VerificationReport:
    """Both sides of one identity instance and whether they agree.

    ``passed`` holds exactly when |lhs - rhs| <= tol + lhs.abs_error + rhs.abs_error.
    """

    identity_id: str
    params: dict
    lhs: ValueWithError
    rhs: ValueWithError
    tol: float
    lhs_terms: int = 0
    rhs_terms: int = 0
    lhs_tail: float = 0.0
    rhs_tail: float = 0.0
    quadrature_error: float = 0.0
    ms: float = None
    notes: str = ""
    abs_diff: float = field(init=False)
    rel_diff: float = field(init=False)
    passed: bool = field(init=False)

    def __post_init__(self):
        self.abs_diff = abs(self.lhs.value - self.rhs.value)
        scale = max(abs(self.lhs.value), abs(self.rhs.value))
        self.rel_diff = self.abs_diff / scale if scale > 0 else 0.0
        bound = self.tol + self.lhs.abs_error + self.rhs.abs_error
        self.passed = bool(math.isfinite(self.abs_diff) and self.abs_diff <= bound)

    @property
    def tail_bounds(self):
        return (self.lhs_tail, self.rhs_tail)

    def to_dict(self, timing=False):
        return {
            "id": self.identity_id,
            "params": {k: _num(v) if isinstance(v, (int, float, complex)) and not isinstance(v, bool) else v
                       for k, v in self.params.items()},
            "lhs": _num(self.lhs.value),
            "rhs": _num(self.rhs.value),
            "abs_diff": _num(self.abs_diff),
            "rel_diff": _num(self.rel_diff),
            "lhs_tail": _num(self.lhs_tail),
            "rhs_tail": _num(self.rhs_tail),
            "quad_err": _num(self.quadrature_error),
            "terms": {"lhs": int(self.lhs_terms), "rhs": int(self.rhs_terms)},
            "pass": self.passed,
            "ms": round(self.ms, 3) if (timing and self.ms is not None) else None,
        }
