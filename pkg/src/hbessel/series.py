"""Truncated series with analytic tail bounds.

A series side supplies its terms and a bound on what is left after n terms.
Summation stops when the bound is below tol/4 and the last three terms are
each below tol/8.  Tail bounds come in three shapes:

* envelope: a smooth majorant h(t) of |term(t)| is matched to
  C t^p exp(-kappa t^e) on [N, 4N] (C fitted with a safety factor of 4)
  and the majorant is integrated from N to infinity in closed form;
* abel: for sum chi(n) f(n) with f positive and decreasing, the remainder
  after N is at most 2 M f(N + 1), M the largest partial sum of chi;
* explicit: any callable N -> bound.
"""

import math
from dataclasses import dataclass

from . import specfun as sf
from .quad import upper_gamma_bound
from .specfun import AccuracyError

SAFETY = 4.0


@dataclass(frozen=True)
class SeriesResult:
    value: object
    tail: float
    terms: int
    abs_sum: float

    @property
    def error(self):
        # truncation only; rounding is covered by keeping tol well above unit round-off
        return self.tail

    def as_vwe(self, scale=1.0):
        return sf.ValueWithError(self.value * scale, self.error * abs(scale))


def power_exp_tail(C, p, kappa, e, N):
    """int_N^inf C t^p exp(-kappa t^e) dt (inf when the majorant still grows at N)."""
    if kappa == 0.0:
        if p >= -1.0:
            return math.inf
        return C * N ** (p + 1.0) / (-p - 1.0)
    if p > 0 and kappa * e * N ** e <= p:
        return math.inf
    s = (p + 1.0) / e
    x = kappa * N ** e
    g = upper_gamma_bound(s, x)
    if not math.isfinite(g):
        return math.inf
    return C / e * kappa ** (-s) * g


def envelope_tail(h, N, p, kappa=0.0, e=1.0, safety=SAFETY):
    """Tail bound for sum_{n > N} h(n) using a fitted power-exponential majorant."""
    if N < 1:
        return math.inf
    ratio = 0.0
    for j in range(16):
        t = N * 4.0 ** (j / 15)
        base = t ** p * math.exp(-kappa * t ** e)
        if base == 0.0:
            continue
        v = abs(h(t))
        if not math.isfinite(v):
            return math.inf
        ratio = max(ratio, v / base)
    if ratio == 0.0:
        return 0.0
    return power_exp_tail(safety * ratio, p, kappa, e, N)


def abel_tail(f, N, M):
    """Remainder bound for sum_{n > N} chi(n) f(n), f positive decreasing, |partial sums| <= M."""
    f1 = f(N + 1)
    f2 = f(N + 2)
    if not (f1 >= f2 >= 0):
        return math.inf
    return 2.0 * M * f1


def sum_series(term, start, tail, tol, max_terms=10 ** 7, min_terms=3):
    """Sum term(n) for n = start, start + 1, ... until tail(n) < tol/4.

    ``tail(n)`` bounds the remainder after the term with index n.
    Raises AccuracyError if max_terms pass without the tail dropping below tol.
    """
    acc = sf.Neumaier()
    abs_acc = 0.0
    small = 0
    n = start
    next_check = start + min_terms
    count = 0
    while True:
        v = term(n)
        acc.add(v)
        av = abs(v)
        abs_acc += av
        small = small + 1 if av < tol / 8 else 0
        count += 1
        if n >= next_check and small >= 3:
            t = tail(n)
            if t < tol / 4:
                return SeriesResult(acc.value, t, count, abs_acc)
            next_check = n + max(1, (n - start) // 8)
        if count >= max_terms:
            t = tail(n)
            if t <= tol:
                return SeriesResult(acc.value, t, count, abs_acc)
            raise AccuracyError(f"series tail {t:.3g} still above {tol:.3g} after {count} terms", acc.value)
        n += 1
