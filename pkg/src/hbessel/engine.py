"""Two-sided evaluation of the Bessel-series identities.

Every identity is evaluated as two independent sums (plus closed-form and
quadrature pieces) and returned as a :class:`VerificationReport`.  Each
series is truncated by :func:`hbessel.series.sum_series`, so the reported
errors are the tail bounds plus the quadrature error bounds.

Notation shared by the second family:
    A = pi (sqrt(alpha) - sqrt(beta)),  B = pi (sqrt(alpha) + sqrt(beta)),
    rat = (sqrt(alpha) - sqrt(beta)) / (sqrt(alpha) + sqrt(beta)),
    p_n = sqrt(4 mu_n + alpha),  m_n = sqrt(4 mu_n + beta),
    w_n = (p_n - m_n) / (p_n + m_n) = (alpha - beta) / (p_n + m_n)^2.
"""

import fnmatch
import math
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from . import arith, hecke, quad
from . import specfun as sf
from .hecke import UnsupportedIdentityError
from .report import VerificationReport
from .series import SeriesResult, abel_tail, envelope_tail, sum_series
from .specfun import EULER_GAMMA, AccuracyError, DomainError, ValueWithError

PI = math.pi
TWO_PI = 2.0 * math.pi
MARGIN = 0.25


@dataclass(frozen=True)
class IdentityParams:
    """Free parameters of one identity instance; each identity reads a subset."""

    nu: float = None
    c: float = None
    r: float = None
    alpha: float = None
    beta: float = None
    rho: float = None
    s: float = None
    x: float = None
    z: float = None

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self) if getattr(self, f.name) is not None}


@dataclass(frozen=True)
class IdentityCase:
    identity_id: str
    system: object
    params: IdentityParams
    tol: float
    variant: dict = field(default_factory=dict)


def _need(cond, text):
    if not cond:
        raise DomainError(f"hypothesis violated: {text}")


def _check_tol(tol):
    if not (tol > 0 and math.isfinite(tol)):
        raise DomainError("tol must be a positive finite number")


def _check_ab(alpha, beta):
    _need(beta is not None and alpha is not None, "alpha and beta given")
    _need(beta > 0, "sqrt(beta) > 0")
    _need(alpha > beta, "sqrt(alpha) > sqrt(beta)")


class _Side:
    """Running value and error budget of one side of an identity."""

    def __init__(self):
        self.value = 0.0
        self.error = 0.0
        self.tail = 0.0
        self.terms = 0
        self.quad = 0.0

    def series(self, res, scale=1.0):
        self.value += res.value * scale
        self.error += res.error * abs(scale)
        self.tail += res.tail * abs(scale)
        self.terms += res.terms
        return self

    def integral(self, res, scale=1.0):
        if res is None:
            return self
        self.value += res.value * scale
        self.error += res.abs_error * abs(scale)
        self.quad += res.abs_error * abs(scale)
        return self

    def const(self, v, err=0.0):
        self.value += v
        self.error += err
        return self

    def vwe(self):
        return ValueWithError(self.value, self.error)


def _report(identity_id, params, lhs, rhs, tol, notes=""):
    return VerificationReport(identity_id, params, lhs.vwe(), rhs.vwe(), tol,
                              lhs_terms=lhs.terms, rhs_terms=rhs.terms,
                              lhs_tail=lhs.tail, rhs_tail=rhs.tail,
                              quadrature_error=lhs.quad + rhs.quad, notes=notes)


class _Tables:
    """Growable view of a system's coefficient tables."""

    def __init__(self, sys):
        self.sys = sys

    def _grow(self, n):
        if n > self.sys.N:
            self.sys = self.sys.ensure(2 * n)

    def a(self, n):
        self._grow(n)
        return self.sys.a_values[n]

    def b(self, n):
        self._grow(n)
        return self.sys.b_values[n]


def _gamma_ratio(x, y):
    """Gamma(x) / Gamma(y) in log space."""
    return sf.gamma_sign(x) * sf.gamma_sign(y) * math.exp(sf.loggamma(x) - sf.loggamma(y))


# ------------------------------------------------------------------ kernels

def _k_kernel(X, Y, order, e1):
    """lam -> (X^2 + lam)^(-e1) K_order(4 pi Y sqrt(X^2 + lam))."""
    def kern(lam):
        s = X * X + lam
        return s ** (-e1) * sf.bessel_k(order, 4 * PI * Y * math.sqrt(s)).value
    return kern


def _f21_kernel(nu, d, alpha, beta):
    """mu -> w^(nu+1) (1/p + 1/m)^(2d - 2) 2F1(nu - d + 2, 1 - d; nu + 2; w^2) / (p m)."""
    def kern(mu):
        p = math.sqrt(4 * mu + alpha)
        m = math.sqrt(4 * mu + beta)
        w = (alpha - beta) / (p + m) ** 2
        f = sf.hyp2f1(nu - d + 2, 1 - d, nu + 2, w * w).value
        return w ** (nu + 1) * (1 / p + 1 / m) ** (2 * d - 2) * f / (p * m)
    return kern


def _coef_series(sys, which, start, kern, tol, kappa, p_lam, max_terms=10 ** 7):
    """sum_{n >= start} coef(n) kern(lambda_n) for coef in {a, b} of a system.

    ``kern`` must decay like lam^p_lam exp(-kappa sqrt(lam)) (kappa = 0 for
    algebraic decay).  Character families with algebraic decay use the Abel
    bound; everything else a fitted envelope in n.
    """
    tab = _Tables(sys)
    get = tab.a if which == "a" else tab.b
    lam = sys.lam

    def term(n):
        c = get(n)
        if c == 0:
            return 0.0
        return c * kern(lam(n))

    P = sys.lam_power
    dens = sys.density
    if sys.abel_bound is not None and kappa == 0.0:
        weight = sys.density_exponent
        pref = abs(sys.b_prefactor) if which == "b" else 1.0

        def tail(n):
            return abel_tail(lambda t: pref * t ** weight * abs(kern(lam(t))), n, sys.abel_bound)
    else:
        p = sys.density_exponent + P * p_lam + MARGIN
        kap = kappa * math.sqrt(sys.lam_scale)

        def tail(n):
            return envelope_tail(lambda t: dens(t) * abs(kern(lam(t))), n, p, kap, P / 2.0)

    return sum_series(term, start, tail, tol, max_terms=max_terms)


def _residual_integral(Q, kernel, kappa, p_kernel, tol, endpoint_kernel=0.0):
    """int_0^inf Q(x) kernel(x) dx, or None when Q vanishes."""
    if Q.is_zero:
        return None

    def f(x):
        return Q.eval(x) * kernel(x)

    return quad.integrate_function(f, 0.0, kappa, Q.max_power() + p_kernel, tol,
                                   endpoint_power=Q.min_power() + endpoint_kernel)


# --------------------------------------------------------- modular relation

def eval_modular_relation(sys, x, tol=1e-12):
    """sum a e^{-lambda x} against (2 pi / x)^delta sum b e^{-4 pi^2 mu / x} + P(x)."""
    _check_tol(tol)
    _need(x > 0, "x > 0")
    if sys.residual is None:
        raise UnsupportedIdentityError(f"{sys.id} has no closed-form residual")
    lhs = _Side().series(_exp_series(sys, "a", x, tol / 2))
    scale = (TWO_PI / x) ** sys.delta
    rhs = _Side().series(_exp_series(sys, "b", 4 * PI * PI / x, tol / (4 * scale)), scale)
    rhs.const(sys.modular_residual(x))
    params = dict(sys.params, x=x)
    return _report("MODULAR/" + sys.id, params, lhs, rhs, tol)


def _exp_series(sys, which, t, tol):
    tab = _Tables(sys)
    get = tab.a if which == "a" else tab.b
    lam = sys.lam

    def term(n):
        c = get(n)
        return c * math.exp(-t * lam(n)) if c != 0 else 0.0

    P = sys.lam_power
    p = sys.density_exponent + MARGIN

    def tail(n):
        return envelope_tail(lambda u: sys.density(u) * math.exp(-t * lam(u)), n, p,
                             t * sys.lam_scale, float(P))

    return sum_series(term, 1, tail, tol)


# ------------------------------------------------------------- Riesz sums

def riesz_sum(sys, x, rho):
    """(1 / Gamma(rho + 1)) sum' a(n) (x - lambda_n)^rho; a term at lambda_n = x counts half."""
    _need(x > 0, "x > 0")
    _need(rho >= 0, "rho >= 0")
    nmax = sys.index_for(x)
    sys = sys.ensure(nmax + 1)
    acc = sf.Neumaier()
    for n in range(1, nmax + 1):
        c = sys.a_values[n]
        if c == 0:
            continue
        lam = sys.lam(n)
        d = x - lam
        if d == 0.0:
            v = 0.5 * c if rho == 0 else 0.0
        else:
            v = c * d ** rho
        acc.add(v)
    # math.gamma is exact at the integers, so rho = 0 returns the plain count
    g = 1.0 / math.gamma(rho + 1)
    return ValueWithError(float(acc.value * g), 0.0), nmax


def eval_riesz_identity(sys, x, rho, tol=1e-4, max_terms=10 ** 7, chunk=8192, on_cap="raise"):
    """Riesz sum of order rho against its J-Bessel series plus Q_rho(x).

    The J-series tail bound is an absolute majorant and decays only
    algebraically.  If it is still above tol after max_terms, the default is
    to raise AccuracyError; with on_cap="report" the report is returned with
    the full bound in the RHS error and a note saying so.
    """
    _check_tol(tol)
    _need(x > 0, "x > 0")
    bound = 2 * sys.sigma_a_star - sys.delta - 0.5
    _need(rho > bound, f"rho > 2 sigma_a* - delta - 1/2 = {bound:g}")
    if sys.id not in ("RK", "TAU"):
        raise UnsupportedIdentityError("Riesz identity is available for RK and TAU only")
    Q = sys.residual_rho(rho)
    lhs_v, lhs_n = riesz_sum(sys, x, rho)
    lhs = _Side()
    lhs.value = lhs_v.value
    lhs.error = lhs_v.abs_error
    lhs.terms = lhs_n

    order = sys.delta + rho
    _need(order >= 0.5, "delta + rho >= 1/2")
    half = order / 2
    s = sys.lam_scale
    g = sys.density_exponent
    # |J_v(z)| <= sqrt(2 / (pi sqrt(z^2 - v^2))) for v >= 1/2, z > v
    q = g - half - 0.25
    if q >= -1:
        raise UnsupportedIdentityError("J-series is not absolutely convergent for these parameters")
    cdens = sys.density(1.0)

    def tail(n):
        zn = 4 * PI * math.sqrt(s * n * x)
        if zn <= 1.01 * order:
            return math.inf
        shrink = (1 - (order / zn) ** 2) ** -0.25
        C = 2 * cdens * (x / s) ** half * math.sqrt(2 / (PI * 4 * PI * math.sqrt(s * x))) * shrink
        # majorant C t^(g - half - 1/4)
        return C * n ** (q + 1) / (-q - 1)

    scale = TWO_PI ** -rho
    tab = _Tables(sys)
    acc = sf.Neumaier()
    err = 0.0
    n0 = 1
    small = 0
    t = math.inf
    while True:
        n1 = min(n0 + chunk, max_terms + 1)
        tab._grow(n1)
        ns = np.arange(n0, n1)
        b = np.asarray(tab.sys.b_values[n0:n1], dtype=float)
        mu = s * ns.astype(float)
        zz = 4 * PI * np.sqrt(mu * x)
        jv, je = sf.bessel_j_array(order, zz)
        fac = (x / mu) ** half
        terms = b * fac * jv
        for v in terms:
            acc.add(float(v))
        err += float(np.sum(np.abs(b) * fac * je))
        last = np.abs(terms[-3:])
        small = 3 if np.all(last * scale < tol / 8) else 0
        t = tail(n1 - 1)
        count = n1 - 1
        if small >= 3 and t * scale < tol / 4:
            break
        if count >= max_terms:
            if t * scale <= tol or on_cap == "report":
                break
            raise AccuracyError(f"Riesz J-series tail {t * scale:.3g} above {tol:.3g} after {count} terms",
                                acc.value * scale)
        n0 = n1
    rhs = _Side()
    rhs.value = acc.value * scale
    rhs.error = (t + err) * scale
    rhs.tail = t * scale
    rhs.terms = count
    rhs.const(Q.eval(x))
    notes = f"tail bound {t * scale:.3g} above tol at term cap" if t * scale > tol else ""
    return _report("RIESZ/" + sys.id, dict(sys.params, x=x, rho=rho), lhs, rhs, tol, notes)


# ----------------------------------------------------- first family (K sums)

def _t1(sys, nu, c, r, tol):
    _need(nu > -1, "nu > -1")
    _need(c > 0 and r > 0, "c > 0 and r > 0")
    d = sys.delta
    lscale = 1 / (TWO_PI * r)
    L = _coef_series(sys, "a", 1, _k_kernel(c, r, nu - 1, (nu - 1) / 2), tol / (4 * lscale),
                     4 * PI * r, -(nu - 1) / 2 - 0.25)
    lhs = _Side().series(L, lscale)
    rscale = 1 / (TWO_PI * r ** nu * c ** (nu - d - 1))
    R = _coef_series(sys, "b", 1, _k_kernel(r, c, d + 1 - nu, (d - nu + 1) / 2), tol / (4 * rscale),
                     4 * PI * c, -(d - nu + 1) / 2 - 0.25)
    rhs = _Side().series(R, rscale)
    kern = _k_kernel(c, r, nu, nu / 2)
    rhs.integral(_residual_integral(sys.residual, kern, 4 * PI * r, -nu / 2 - 0.25, tol / 4))
    return lhs, rhs


def _inner_bound_factory(g, kappa, pg, rho):
    """Bound on int_lam^inf (x - lam)^rho g(x) dx from a fitted envelope of g."""
    env = quad.decaying(g, 0.0, kappa, pg)
    from .series import power_exp_tail

    def bound(lam):
        if lam < env.T0:
            return math.inf
        if rho >= 0:
            return power_exp_tail(env.C, pg + rho, kappa, 0.5, lam)
        return abs(g(lam)) / (rho + 1) + power_exp_tail(env.C, pg, kappa, 0.5, lam + 1)

    return bound


def _weighted_integral_series(sys, rho, g, kappa, pg, tol, monotone_from=None):
    """sum_n a(n) / Gamma(rho + 1) int_{lambda_n}^inf (x - lambda_n)^rho g(x) dx."""
    grho = math.exp(-sf.loggamma(rho + 1))
    bound = _inner_bound_factory(g, kappa, pg, rho)
    lam_cut = ((math.log(1 / tol) + 30) / kappa) ** 2
    ncap = sys.index_for(lam_cut) + 1
    tab = _Tables(sys)
    qerr = [0.0]

    def term(n):
        a = tab.a(n)
        if a == 0:
            return 0.0
        lam = sys.lam(n)
        tn = tol / (8 * ncap * max(abs(a), 1.0) * grho)
        res = quad.integrate_function(lambda x: (x - lam) ** rho * g(x) if x > lam else 0.0,
                                      lam, kappa, pg + rho, tn, endpoint_power=rho)
        qerr[0] += abs(a) * res.abs_error * grho
        return a * res.value * grho

    P = sys.lam_power
    p = sys.density_exponent + P * (pg + rho + 0.5) + MARGIN

    def tail(n):
        return envelope_tail(lambda t: sys.density(t) * bound(sys.lam(t)) * grho, n, p,
                             kappa * math.sqrt(sys.lam_scale), P / 2.0)

    res = sum_series(term, 1, tail, tol / 2)
    return res, qerr[0]


def eval_first_theorem_general(sys, nu, c, r, rho, tol=1e-7):
    """Riesz-weighted K-integral sum against the K-series with residual integral."""
    _check_tol(tol)
    _need(nu > -1, "nu > -1")
    _need(c > 0 and r > 0, "c > 0 and r > 0")
    _need(rho > -1, "rho > -1")
    Q = sys.residual_rho(rho)
    d = sys.delta
    kappa = 4 * PI * r

    def g(x):
        s = c * c + x
        return s ** (-nu / 2) * sf.bessel_k(nu, 4 * PI * r * math.sqrt(s)).value

    L, qerr = _weighted_integral_series(sys, rho, g, kappa, -nu / 2 - 0.25, tol / 2)
    lhs = _Side().series(L)
    lhs.error += qerr
    lhs.quad += qerr
    rscale = 1 / (TWO_PI ** (rho + 1) * r ** nu * c ** (nu - d - rho - 1))
    R = _coef_series(sys, "b", 1, _k_kernel(r, c, d + rho + 1 - nu, (d + rho - nu + 1) / 2),
                     tol / (4 * rscale), 4 * PI * c, -(d + rho - nu + 1) / 2 - 0.25)
    rhs = _Side().series(R, rscale)
    rhs.integral(_residual_integral(Q, g, kappa, -nu / 2 - 0.25, tol / 4))
    params = dict(sys.params, nu=nu, c=c, r=r, rho=rho)
    return _report("THM-FIRST/" + sys.id, params, lhs, rhs, tol)


def _k_identity(sys, nu, c, r, tol, start, extra=0.0):
    """sum a (c^2+lam)^(-nu/2) K_nu(...) = extra + r^-nu c^(delta-nu) sum b (r^2+mu)^(-(delta-nu)/2) K_(delta-nu)(...)."""
    _need(c > 0 and r > 0, "c > 0 and r > 0")
    d = sys.delta
    L = _coef_series(sys, "a", start, _k_kernel(c, r, nu, nu / 2), tol / 2, 4 * PI * r, -nu / 2 - 0.25)
    lhs = _Side().series(L)
    scale = r ** -nu * c ** (d - nu)
    R = _coef_series(sys, "b", start, _k_kernel(r, c, d - nu, (d - nu) / 2), tol / (4 * scale),
                     4 * PI * c, -(d - nu) / 2 - 0.25)
    rhs = _Side().series(R, scale)
    if extra:
        rhs.const(extra)
    return lhs, rhs


def _sigma_k_extra(sys, nu, c, r):
    if sys.params["k"] != 1:
        return 0.0
    return -sf.bessel_k(nu - 1, 4 * PI * r * c).value / (4 * PI * r * c ** (nu - 1))


def _guinand(s, alpha, tol):
    _need(s >= 0, "s >= 0")
    _need(s != 1, "s != 1")
    _need(alpha > 0, "alpha > 0")
    beta = PI * PI / alpha
    nmax = 64
    sig = [arith.divisor_power_sum(s, nmax)]

    def side(x):
        def term(n):
            if n > len(sig[0]) - 1:
                sig[0] = arith.divisor_power_sum(s, 2 * n)
            return sig[0][n] * n ** (s / 2) * sf.bessel_k(s / 2, 2 * n * x).value

        def tail(n):
            return envelope_tail(lambda t: 2 * math.sqrt(t) * t ** (s / 2) * sf.bessel_k(s / 2, 2 * t * x).value,
                                 n, 0.5 + s / 2 - 0.5 + MARGIN, 2 * x, 1.0)

        return sum_series(term, 1, tail, tol / 4)

    lhs = _Side().series(side(alpha), math.sqrt(alpha)).series(side(beta), -math.sqrt(beta))
    rhs = _Side()
    if s == 0:
        v = ((math.sqrt(beta) * math.log(beta) - math.sqrt(alpha) * math.log(alpha))
             + 2 * (EULER_GAMMA / 2 - math.log(TWO_PI)) * (math.sqrt(beta) - math.sqrt(alpha))) / 4
    else:
        v = (sf.gamma(s / 2).value * sf.zeta(s).value * (beta ** ((1 - s) / 2) - alpha ** ((1 - s) / 2)) / 4
             + PI ** (-s - 0.5) * sf.gamma((1 + s) / 2).value * sf.zeta(1 + s).value
             * (beta ** ((1 + s) / 2) - alpha ** ((1 + s) / 2)) / 4)
    rhs.const(v)
    return lhs, rhs


# --------------------------------------------------- second family (I K sums)

def _ab(alpha, beta):
    sa = math.sqrt(alpha)
    sb = math.sqrt(beta)
    return PI * (sa - sb), PI * (sa + sb), (sa - sb) / (sa + sb)


def _ik_lhs(sys, order, A, B, tol, start=1, lam=None):
    lam = lam or sys.lam

    def kern(l):
        rt = math.sqrt(l)
        return sf.ik_product(order, A * rt, B * rt).value

    tab = _Tables(sys)
    P = sys.lam_power

    def term(n):
        a = tab.a(n)
        return a * kern(lam(n)) if a != 0 else 0.0

    p = sys.density_exponent - P / 2 + MARGIN
    kap = (B - A) * math.sqrt(sys.lam_scale)

    def tail(n):
        return envelope_tail(lambda t: sys.density(t) * abs(kern(lam(t))), n, p, kap, P / 2.0)

    return sum_series(term, start, tail, tol)


def _t2(sys, nu, alpha, beta, tol):
    _need(nu > -1, "nu > -1")
    _check_ab(alpha, beta)
    d = sys.delta
    _need(d + nu + 1 > sys.sigma_a_star > 0, "delta + nu + 1 > sigma_a* > 0")
    A, B, rat = _ab(alpha, beta)
    lhs = _Side().series(_ik_lhs(sys, nu + 1, A, B, tol / 2))
    scale = 2 * TWO_PI ** -d * _gamma_ratio(nu + d + 1, nu + 2)
    R = _coef_series(sys, "b", 1, _f21_kernel(nu, d, alpha, beta), tol / (4 * scale), 0.0, -(nu + d + 1))
    rhs = _Side().series(R, scale)
    q0 = sys.residual.constant
    if q0:
        rhs.const(q0 / (2 * (nu + 1)) * rat ** (nu + 1))
    Qp = sys.residual.derivative()
    rhs.integral(_residual_integral(Qp, lambda x: sf.ik_product(nu + 1, A * math.sqrt(x), B * math.sqrt(x)).value,
                                    B - A, -0.5, tol / 4))
    return lhs, rhs


def eval_second_theorem_general(sys, nu, alpha, beta, rho, tol=1e-7):
    """Riesz-weighted integrals of d/dt[I K] against the 2F1 series and residual terms."""
    _check_tol(tol)
    _need(nu > -1, "nu > -1")
    _need(rho > -1, "rho > -1")
    _check_ab(alpha, beta)
    d = sys.delta
    _need(d + rho + nu + 1 > sys.sigma_a_star > 0, "delta + rho + nu + 1 > sigma_a* > 0")
    Q = sys.residual_rho(rho)
    A, B, rat = _ab(alpha, beta)

    def g(t):
        return sf.ik_product_dt(nu, A, B, t).value

    L, qerr = _weighted_integral_series(sys, rho, g, B - A, -1.0, tol / 2)
    lhs = _Side().series(L)
    lhs.error += qerr
    lhs.quad += qerr
    scale = -2 / TWO_PI ** (d + 2 * rho) * _gamma_ratio(nu + d + rho + 1, nu + 2)
    R = _coef_series(sys, "b", 1, _f21_kernel(nu, d + rho, alpha, beta), tol / (4 * abs(scale)), 0.0,
                     -(nu + d + rho + 1))
    rhs = _Side().series(R, scale)
    q0 = Q.constant
    if q0:
        rhs.const(-q0 / (2 * (nu + 1)) * rat ** (nu + 1))
    Qp = Q.derivative()
    rhs.integral(_residual_integral(Qp, lambda x: sf.ik_product(nu + 1, A * math.sqrt(x), B * math.sqrt(x)).value,
                                    B - A, -0.5, tol / 4), -1.0)
    params = dict(sys.params, nu=nu, alpha=alpha, beta=beta, rho=rho)
    return _report("THM-SECOND/" + sys.id, params, lhs, rhs, tol)


def _cor_k(sys, nu, s, tol):
    _need(nu > -1, "nu > -1")
    _need(s > 0, "s > 0")
    d = sys.delta
    _need(d + nu + 1 > sys.sigma_a_star > 0, "delta + nu + 1 > sigma_a* > 0")

    def lk(lam):
        return lam ** ((nu + 1) / 2) * sf.bessel_k(nu + 1, s * math.sqrt(lam)).value

    L = _coef_series(sys, "a", 1, lk, tol * s / 8, s, (nu + 1) / 2 - 0.25)
    lhs = _Side().series(L, 2 / s)
    logc = (3 * d + nu + 1) * math.log(2) + d * math.log(PI) + nu * math.log(s) + sf.loggamma(nu + d + 1)
    scale = math.exp(logc)
    e = d + nu + 1
    R = _coef_series(sys, "b", 1, lambda mu: (16 * PI * PI * mu + s * s) ** -e, tol / (4 * scale), 0.0, -e)
    rhs = _Side().series(R, scale)

    def kern(x):
        return x ** (nu / 2) * sf.bessel_k(nu, s * math.sqrt(x)).value

    rhs.integral(_residual_integral(sys.residual, kern, s, nu / 2 - 0.25, tol / 4, min(0.0, nu)))
    return lhs, rhs


def _rk_2f1(k, nu, alpha, beta, tol, N=4096):
    _need(nu > 0, "nu > 0")
    _check_ab(alpha, beta)
    sys = hecke.catalog("RK", N=N, k=k)
    A, B, rat = _ab(alpha, beta)
    lhs = _Side().series(_ik_lhs(sys, nu, A, B, tol / 2, lam=lambda n: float(n) if np.isscalar(n) else n))
    h = k / 2

    def kern(n):
        p = math.sqrt(n + alpha)
        m = math.sqrt(n + beta)
        w = (alpha - beta) / (p + m) ** 2
        f = sf.hyp2f1(1 - h + nu, 1 - h, nu + 1, w * w).value
        return w ** nu * (1 / p + 1 / m) ** (k - 2) * f / (p * m)

    tab = _Tables(sys)
    scale = _gamma_ratio(h + nu, nu + 1) / (PI ** h * 2 ** (k - 1))

    def term(n):
        c = tab.a(n) if n > 0 else 1.0
        return c * kern(n) if c != 0 else 0.0

    p = sys.density_exponent - 1 - nu - (k - 2) / 2 + MARGIN

    def tail(n):
        return envelope_tail(lambda t: sys.density(t) * kern(t), n, p)

    rhs = _Side().series(sum_series(term, 0, tail, tol / (4 * scale)), scale)
    rhs.const(-rat ** nu / (2 * nu))
    return lhs, rhs


def _tau_2f1(sys, nu, alpha, beta, tol):
    _need(nu > -1, "nu > -1")
    _check_ab(alpha, beta)
    A, B, rat = _ab(alpha, beta)
    lhs = _Side().series(_ik_lhs(sys, nu + 1, A, B, tol / 2))
    tab = _Tables(sys)

    def kern(n):
        p = math.sqrt(4 * n + alpha)
        m = math.sqrt(4 * n + beta)
        w = (alpha - beta) / (p + m) ** 2
        f = sf.hyp2f1(nu - 10, -11, nu + 2, w * w).value
        return w ** (nu + 1) * (1 / p + 1 / m) ** 22 * f / (p * m)

    def term(n):
        t = tab.b(n)
        return t * kern(n) if t != 0 else 0.0

    def tail(n):
        return envelope_tail(lambda t: 2 * t ** 6 * abs(kern(t)), n, 6 - (nu + 13) + MARGIN)

    scale = 2 * TWO_PI ** -12 * _gamma_ratio(nu + 13, nu + 2)
    rhs = _Side().series(sum_series(term, 1, tail, tol / (4 * scale)), scale)
    return lhs, rhs


def _exp_sinh(x, y):
    """e^{-x} sinh(y) for x > y >= 0 without overflow."""
    return 0.5 * (math.exp(y - x) - math.exp(-y - x))


_DOUBLE_FACT_21 = math.prod(range(3, 22, 2))


def _tau_sinh(sys, alpha, beta, tol):
    _check_ab(alpha, beta)
    sa, sb = math.sqrt(alpha), math.sqrt(beta)
    tab = _Tables(sys)

    def lterm(n):
        t = tab.a(n)
        rn = math.sqrt(n)
        return t / rn * _exp_sinh(PI * rn * (sa + sb), PI * rn * (sa - sb))

    def ltail(n):
        return envelope_tail(lambda t: 2 * t ** 6 / math.sqrt(t) * _exp_sinh(PI * math.sqrt(t) * (sa + sb),
                                                                           PI * math.sqrt(t) * (sa - sb)),
                             n, 5.5 + MARGIN, 2 * PI * sb, 0.5)

    lhs = _Side().series(sum_series(lterm, 1, ltail, tol / 2))

    def rk(n):
        return (4 * n + beta) ** -11.5 - (4 * n + alpha) ** -11.5

    def rterm(n):
        t = tab.b(n)
        return t * rk(n)

    def rtail(n):
        return envelope_tail(lambda t: 2 * t ** 6 * rk(t), n, 6 - 12.5 + MARGIN)

    scale = _DOUBLE_FACT_21 / PI ** 11
    rhs = _Side().series(sum_series(rterm, 1, rtail, tol / (4 * scale)), scale)
    return lhs, rhs


def _tau_exp(sys, s, tol):
    _need(s > 0, "s > 0")
    tab = _Tables(sys)

    def lterm(n):
        return tab.a(n) * math.exp(-s * math.sqrt(n))

    def ltail(n):
        return envelope_tail(lambda t: 2 * t ** 6 * math.exp(-s * math.sqrt(t)), n, 6 + MARGIN, s, 0.5)

    lhs = _Side().series(sum_series(lterm, 1, ltail, tol / 2))
    logc = 36 * math.log(2) + 11.5 * math.log(PI) + sf.loggamma(12.5) + math.log(s)
    scale = math.exp(logc)

    def rk(n):
        return (s * s + 16 * PI * PI * n) ** -12.5

    def rterm(n):
        return tab.b(n) * rk(n)

    def rtail(n):
        return envelope_tail(lambda t: 2 * t ** 6 * rk(t), n, 6 - 12.5 + MARGIN)

    rhs = _Side().series(sum_series(rterm, 1, rtail, tol / (4 * scale)), scale)
    return lhs, rhs


def _chi_parts(sys):
    chi = sys.character
    return chi, chi.conjugate(), arith.gauss_sum(chi), chi.modulus


def _chi_sum(f, chi, start, tol, weight_fn, M):
    """sum chi(n) weight_fn(n) with f(t) >= |weight_fn(t)| positive decreasing (Abel tail)."""

    def term(n):
        c = chi(n)
        return c * weight_fn(n) if c != 0 else 0.0

    return sum_series(term, start, lambda n: abel_tail(f, n, M), tol)


def _chi_odd_2f1(sys, nu, alpha, beta, tol):
    _need(nu > -1, "nu > -1")
    _check_ab(alpha, beta)
    chi, chib, g, q = _chi_parts(sys)
    sa, sb = math.sqrt(alpha), math.sqrt(beta)
    cq = PI / math.sqrt(2 * q)

    def lw(n):
        x = cq * n
        return n * sf.ik_product(nu + 1, x * (sa - sb), x * (sa + sb)).value

    def ltail(n):
        return envelope_tail(lambda t: abs(lw(t)), n, 0.5 + MARGIN, cq * 2 * sb, 1.0)

    L = sum_series(lambda n: chi(n) * lw(n) if chi(n) != 0 else 0.0, 1, ltail, tol / 2)
    lhs = _Side().series(L)

    def rw(n):
        u = 2 * n * n / q
        p = math.sqrt(u + alpha)
        m = math.sqrt(u + beta)
        w = (alpha - beta) / (p + m) ** 2
        return n / (p * m) * w ** (nu + 1) * (1 / p + 1 / m) * sf.hyp2f1(nu + 0.5, -0.5, nu + 2, w * w).value

    scale = -1j * PI ** -1.5 * _gamma_ratio(nu + 2.5, nu + 2) / math.sqrt(2 * q) * g
    R = _chi_sum(rw, chib, 1, tol / (4 * abs(scale)), rw, hecke._abel_bound(chib))
    rhs = _Side().series(R, scale)
    return lhs, rhs


def _chi_odd_sinh(sys, alpha, beta, tol):
    _check_ab(alpha, beta)
    chi, chib, g, q = _chi_parts(sys)
    sa, sb = math.sqrt(alpha), math.sqrt(beta)
    cq = PI / math.sqrt(2 * q)

    def lw(n):
        x = cq * n
        return _exp_sinh(x * (sa + sb), x * (sa - sb))

    def ltail(n):
        return envelope_tail(lw, n, MARGIN, cq * 2 * sb, 1.0)

    L = sum_series(lambda n: chi(n) * lw(n) if chi(n) != 0 else 0.0, 1, ltail, tol / 2)
    lhs = _Side().series(L)

    def rw(n):
        return n / ((2 * n * n + alpha * q) * (2 * n * n + beta * q))

    scale = -1j * q * g * (alpha - beta) / PI
    R = _chi_sum(rw, chib, 1, tol / (4 * abs(scale)), rw, hecke._abel_bound(chib))
    rhs = _Side().series(R, scale)
    return lhs, rhs


def _chi_even_2f1(sys, nu, alpha, beta, tol):
    _need(nu > -1, "nu > -1")
    _check_ab(alpha, beta)
    chi, chib, g, q = _chi_parts(sys)
    sa, sb = math.sqrt(alpha), math.sqrt(beta)
    cq = PI / math.sqrt(2 * q)

    def lw(n):
        x = cq * n
        return sf.ik_product(nu + 1, x * (sa - sb), x * (sa + sb)).value

    def ltail(n):
        return envelope_tail(lambda t: abs(lw(t)), n, -0.5 + MARGIN, cq * 2 * sb, 1.0)

    L = sum_series(lambda n: chi(n) * lw(n) if chi(n) != 0 else 0.0, 1, ltail, tol / 2)
    lhs = _Side().series(L)

    def rw(n):
        u = 2 * n * n / q
        p = math.sqrt(u + alpha)
        m = math.sqrt(u + beta)
        w = (alpha - beta) / (p + m) ** 2
        return w ** (nu + 1) / (p + m) * sf.hyp2f1(nu + 1.5, 0.5, nu + 2, w * w).value

    scale = math.sqrt(2) * _gamma_ratio(nu + 1.5, nu + 2) / math.sqrt(PI * q) * g
    R = _chi_sum(rw, chib, 1, tol / (4 * abs(scale)), rw, hecke._abel_bound(chib))
    rhs = _Side().series(R, scale)
    return lhs, rhs


def _chi_even_log(sys, alpha, beta, tol):
    _check_ab(alpha, beta)
    chi, chib, g, q = _chi_parts(sys)
    sa, sb = math.sqrt(alpha), math.sqrt(beta)
    cq = PI / math.sqrt(2 * q)

    def lw(n):
        x = cq * n
        return _exp_sinh(x * (sa + sb), x * (sa - sb)) / n

    def ltail(n):
        return envelope_tail(lw, n, -1 + MARGIN, cq * 2 * sb, 1.0)

    L = sum_series(lambda n: chi(n) * lw(n) if chi(n) != 0 else 0.0, 1, ltail, tol / 2)
    lhs = _Side().series(L)

    def rw(n):
        return math.log1p((alpha - beta) * q / (2 * n * n + beta * q))

    scale = g / (2 * q)
    R = _chi_sum(rw, chib, 1, tol / (4 * abs(scale)), rw, hecke._abel_bound(chib))
    rhs = _Side().series(R, scale)
    return lhs, rhs


def _zeta_2f1(nu, alpha, beta, tol):
    _need(nu > -1, "nu > -1")
    _check_ab(alpha, beta)
    A, B, rat = _ab(alpha, beta)
    sa, sb = math.sqrt(alpha), math.sqrt(beta)

    def lk(n):
        return sf.ik_product(nu + 1, n * (A / PI) * PI, n * B).value

    def ltail(n):
        return envelope_tail(lambda t: abs(lk(t)), n, -1 + MARGIN, B - A, 1.0)

    lhs = _Side().series(sum_series(lk, 1, ltail, tol / 2))
    lhs.const(rat ** (nu + 1) / (4 * (nu + 1)))
    gr = _gamma_ratio(nu + 1.5, nu + 2) / math.sqrt(PI)

    def rk(n):
        p = math.sqrt(n * n + alpha)
        m = math.sqrt(n * n + beta)
        w = (alpha - beta) / (p + m) ** 2
        return w ** (nu + 1) / (p + m) * sf.hyp2f1(nu + 1.5, 0.5, nu + 2, w * w).value

    def rtail(n):
        return envelope_tail(rk, n, -2 * nu - 3 + MARGIN)

    rhs = _Side().series(sum_series(rk, 1, rtail, tol / (4 * gr)), gr)
    first = gr / 2 * (sa - sb) ** (nu + 1) / (sa + sb) ** (nu + 2) * sf.hyp2f1(nu + 1.5, 0.5, nu + 2, rat * rat).value
    rhs.const(first)
    return lhs, rhs


def _watson_eq4(nu, z, tol):
    _need(nu > 0, "nu > 0")
    _need(z > 0, "z > 0")

    def lk(n):
        return (n * z / 2) ** nu * sf.bessel_k(nu, n * z).value

    def ltail(n):
        return envelope_tail(lk, n, nu - 0.5 + MARGIN, z, 1.0)

    lhs = _Side().series(sum_series(lk, 1, ltail, tol / 4), 2.0)
    lhs.const(sf.gamma(nu).value / 2)

    def rk(n):
        return (z * z + 4 * n * n * PI * PI) ** (-nu - 0.5)

    def rtail(n):
        return envelope_tail(rk, n, -2 * nu - 1 + MARGIN)

    scale = math.sqrt(PI) * sf.gamma(nu + 0.5).value * z ** (2 * nu)
    rhs = _Side().series(sum_series(rk, 1, rtail, tol / (8 * scale)), 2 * scale)
    rhs.const(scale * z ** (-2 * nu - 1))
    return lhs, rhs


def _elliptic_rhs(alpha, beta, tol):
    sa, sb = math.sqrt(alpha), math.sqrt(beta)
    rat = (sa - sb) / (sa + sb)

    def rk(n):
        p = math.sqrt(n * n + alpha)
        m = math.sqrt(n * n + beta)
        w = (alpha - beta) / (p + m) ** 2
        return 2 * sf.elliptic_k(w).value / (PI * (p + m)) - 1 / (2 * n)

    def rtail(n):
        return envelope_tail(rk, n, -3 + MARGIN)

    rhs = _Side().series(sum_series(rk, 1, rtail, tol))
    rhs.const(sf.elliptic_k(rat).value / (PI * (sa + sb)))
    rhs.const((EULER_GAMMA + math.log(sa + sb) - math.log(4)) / 2)
    return rhs


def _elliptic(alpha, beta, tol):
    _check_ab(alpha, beta)
    A, B, rat = _ab(alpha, beta)

    def lk(n):
        return sf.ik_product(0, n * A, n * B).value

    def ltail(n):
        return envelope_tail(lk, n, -1 + MARGIN, B - A, 1.0)

    lhs = _Side().series(sum_series(lk, 1, ltail, tol / 2))
    return lhs, _elliptic_rhs(alpha, beta, tol / 4)


def _watson_k0_rhs(beta, tol):
    def rk(n):
        root = math.sqrt(beta * beta + 4 * PI * PI * n * n)
        # 1/root - 1/(2 pi n) without cancellation
        return -beta * beta / (root * 2 * PI * n * (root + 2 * PI * n))

    def rtail(n):
        return envelope_tail(rk, n, -3 + MARGIN)

    rhs = _Side().series(sum_series(rk, 1, rtail, tol / (8 * PI)), 2 * PI)
    rhs.const(PI / beta)
    rhs.const(EULER_GAMMA + math.log(beta / 2) - math.log(TWO_PI))
    return rhs


def _watson_k0(beta, tol):
    _need(beta > 0, "beta > 0")

    def lk(n):
        return sf.bessel_k(0, n * beta).value

    def ltail(n):
        return envelope_tail(lk, n, -0.5 + MARGIN, beta, 1.0)

    lhs = _Side().series(sum_series(lk, 1, ltail, tol / 4), 2.0)
    return lhs, _watson_k0_rhs(beta, tol / 2)


def _log_ratio_tail(a, b, N):
    """Euler-Maclaurin value of sum_{n > N} log((2n^2 + a)/(2n^2 + b)) and an error bound."""
    ra, rb = math.sqrt(a / 2), math.sqrt(b / 2)
    # int_N^inf log((2x^2+a)/(2x^2+b)) dx
    integral = 2 * ra * math.atan(ra / N) - 2 * rb * math.atan(rb / N) - N * math.log1p((a - b) / (2 * N * N + b))
    f = math.log1p((a - b) / (2 * N * N + b))
    fp = 4 * N / (2 * N * N + a) - 4 * N / (2 * N * N + b)
    value = integral - f / 2 - fp / 12
    err = 2 * 24 * (a - b) / 2 / N ** 5 / 720
    return value, err


def _zeta_log(alpha, beta, tol):
    _check_ab(alpha, beta)
    sa, sb = math.sqrt(alpha), math.sqrt(beta)
    c = PI / math.sqrt(2)

    def lk(n):
        return _exp_sinh(c * n * (sa + sb), c * n * (sa - sb)) / n

    def ltail(n):
        return envelope_tail(lk, n, -1 + MARGIN, 2 * c * sb, 1.0)

    lhs = _Side().series(sum_series(lk, 1, ltail, tol / 4), math.sqrt(2))
    lhs.const(PI / 2 * (sa - sb))

    def rk(n):
        return math.log1p((alpha - beta) / (2 * n * n + beta))

    def rtail(n):
        return _log_ratio_tail(alpha, beta, n)[1]

    R = sum_series(rk, 1, rtail, tol / 4 * math.sqrt(2))
    tv, terr = _log_ratio_tail(alpha, beta, R.terms)
    R = SeriesResult(R.value + tv, terr, R.terms, R.abs_sum)
    rhs = _Side().series(R, 1 / math.sqrt(2))
    rhs.const(math.log(alpha / beta) / (2 * math.sqrt(2)))
    return lhs, rhs


# ------------------------------------------------------------ catalog

@dataclass(frozen=True)
class CatalogEntry:
    id: str
    title: str
    variants: tuple
    sampler: object = field(repr=False)
    evaluator: object = field(repr=False)
    system: str = None


def _u(rng, lo, hi):
    return rng.uniform(lo, hi)


def _sample_kc(rng, v):
    return IdentityParams(nu=_u(rng, -0.9, 3), c=_u(rng, 0.3, 2), r=_u(rng, 0.3, 2))


def _sample_ab(rng):
    beta = _u(rng, 0.5, 2)
    alpha = _u(rng, beta + 0.5, 6)
    return alpha, beta


_NU_T2 = {"RK": (1.5, 3), "SIGMA": (1.5, 3), "IDEAL": (1.5, 3), "CHI-EVEN": (0, 3), "ZETA": (0.5, 3),
          "TAU": (-0.9, 3), "CHI-ODD": (-0.9, 3)}


def _sample_t2(rng, v):
    lo, hi = _NU_T2[v["system"]]
    nu = _u(rng, lo, hi)
    alpha, beta = _sample_ab(rng)
    return IdentityParams(nu=nu, alpha=alpha, beta=beta)


def _sample_cor(rng, v):
    lo, hi = _NU_T2[v["system"]]
    return IdentityParams(nu=_u(rng, lo, hi), s=_u(rng, 2, 6))


def _sample_nu_ab(lo, hi):
    def f(rng, v):
        nu = _u(rng, lo, hi)
        alpha, beta = _sample_ab(rng)
        return IdentityParams(nu=nu, alpha=alpha, beta=beta)
    return f


def _sample_ab_only(rng, v):
    alpha, beta = _sample_ab(rng)
    return IdentityParams(alpha=alpha, beta=beta)


def _sys_case(fn):
    def ev(case):
        p = case.params
        return fn(case.system, p, case.tol, case.variant)
    return ev


_SEVEN = (
    {"system": "RK", "k": 2}, {"system": "SIGMA", "k": 1}, {"system": "TAU"},
    {"system": "CHI-ODD", "q": 4}, {"system": "CHI-EVEN", "q": 5}, {"system": "IDEAL", "D": 4},
    {"system": "ZETA"},
)


def _variant_label(v):
    return ",".join(f"{k}={v[k]}" for k in sorted(v))


def _sys_params(v):
    return {k: val for k, val in v.items() if k != "system"}


_CATALOG = (
    CatalogEntry("T1", "K-Bessel series transform with residual integral (first theorem, rho = 0)", _SEVEN,
                 _sample_kc, _sys_case(lambda s, p, t, v: _t1(s, p.nu, p.c, p.r, t))),
    CatalogEntry("RK-K", "sums of squares K-series reciprocity", ({"system": "RK", "k": 2}, {"system": "RK", "k": 4}),
                 _sample_kc, _sys_case(lambda s, p, t, v: _k_identity(s, p.nu, p.c, p.r, t, 0))),
    CatalogEntry("SIGMA-K", "divisor-sum K-series reciprocity", ({"system": "SIGMA", "k": 1}, {"system": "SIGMA", "k": 3}),
                 _sample_kc, _sys_case(lambda s, p, t, v: _k_identity(s, p.nu, p.c, p.r, t, 0,
                                                                        _sigma_k_extra(s, p.nu, p.c, p.r)))),
    CatalogEntry("TAU-K", "Ramanujan tau K-series reciprocity", ({"system": "TAU"},),
                 _sample_kc, _sys_case(lambda s, p, t, v: _k_identity(s, p.nu, p.c, p.r, t, 1))),
    CatalogEntry("CHI-ODD-K", "odd character K-series reciprocity",
                 ({"system": "CHI-ODD", "q": 4}, {"system": "CHI-ODD", "q": 5}),
                 _sample_kc, _sys_case(lambda s, p, t, v: _k_identity(s, p.nu, p.c, p.r, t, 1))),
    CatalogEntry("CHI-EVEN-K", "even character K-series reciprocity",
                 ({"system": "CHI-EVEN", "q": 5}, {"system": "CHI-EVEN", "q": 8}),
                 _sample_kc, _sys_case(lambda s, p, t, v: _k_identity(s, p.nu, p.c, p.r, t, 1))),
    CatalogEntry("IDEAL-K", "imaginary quadratic ideal-count K-series reciprocity",
                 ({"system": "IDEAL", "D": 3}, {"system": "IDEAL", "D": 4}, {"system": "IDEAL", "D": 23}),
                 _sample_kc, _sys_case(lambda s, p, t, v: _k_identity(s, p.nu, p.c, p.r, t, 0))),
    CatalogEntry("GUINAND", "divisor-power K-series with alpha beta = pi^2",
                 ({"s": 0.0}, {"s": 0.5}, {"s": 2.0}),
                 lambda rng, v: IdentityParams(s=v["s"], alpha=_u(rng, 1, PI * PI)),
                 lambda case: _guinand(case.params.s, case.params.alpha, case.tol)),
    CatalogEntry("T2", "I-K product series against 2F1 series (second theorem, rho = 0)", _SEVEN,
                 _sample_t2, _sys_case(lambda s, p, t, v: _t2(s, p.nu, p.alpha, p.beta, t))),
    CatalogEntry("COR-K-TRANSFORM", "K-series against rational series (alpha -> beta limit of the I-K form)", _SEVEN,
                 _sample_cor, _sys_case(lambda s, p, t, v: _cor_k(s, p.nu, p.s, t))),
    CatalogEntry("RK-2F1", "sums of squares I-K series against 2F1 series", ({"k": 2}, {"k": 4}),
                 _sample_nu_ab(2.5, 4),
                 lambda case: _rk_2f1(case.variant["k"], case.params.nu, case.params.alpha, case.params.beta,
                                      case.tol)),
    CatalogEntry("TAU-2F1", "tau I-K series against terminating 2F1 series", ({"system": "TAU"},),
                 _sample_nu_ab(-0.9, 3), _sys_case(lambda s, p, t, v: _tau_2f1(s, p.nu, p.alpha, p.beta, t))),
    CatalogEntry("TAU-SINH", "tau exponential-sinh series (order -1/2)", ({"system": "TAU"},),
                 _sample_ab_only, _sys_case(lambda s, p, t, v: _tau_sinh(s, p.alpha, p.beta, t))),
    CatalogEntry("TAU-EXP", "tau exp(-s sqrt n) series against rational series", ({"system": "TAU"},),
                 lambda rng, v: IdentityParams(s=_u(rng, 3, 8)),
                 _sys_case(lambda s, p, t, v: _tau_exp(s, p.s, t))),
    CatalogEntry("CHI-ODD-2F1", "odd character I-K series against 2F1 series",
                 ({"system": "CHI-ODD", "q": 4}, {"system": "CHI-ODD", "q": 5}),
                 _sample_nu_ab(-0.9, 3), _sys_case(lambda s, p, t, v: _chi_odd_2f1(s, p.nu, p.alpha, p.beta, t))),
    CatalogEntry("CHI-ODD-SINH", "odd character exponential-sinh series against rational series",
                 ({"system": "CHI-ODD", "q": 4}, {"system": "CHI-ODD", "q": 5}),
                 _sample_ab_only, _sys_case(lambda s, p, t, v: _chi_odd_sinh(s, p.alpha, p.beta, t))),
    CatalogEntry("CHI-EVEN-2F1", "even character I-K series against 2F1 series",
                 ({"system": "CHI-EVEN", "q": 5}, {"system": "CHI-EVEN", "q": 8}),
                 _sample_nu_ab(0, 3), _sys_case(lambda s, p, t, v: _chi_even_2f1(s, p.nu, p.alpha, p.beta, t))),
    CatalogEntry("CHI-EVEN-LOG", "even character exponential-sinh series against logarithm series",
                 ({"system": "CHI-EVEN", "q": 5}, {"system": "CHI-EVEN", "q": 8}),
                 _sample_ab_only, _sys_case(lambda s, p, t, v: _chi_even_log(s, p.alpha, p.beta, t))),
    CatalogEntry("ZETA-2F1", "integer-lattice I-K series against 2F1 series", ({},),
                 _sample_nu_ab(0.5, 3),
                 lambda case: _zeta_2f1(case.params.nu, case.params.alpha, case.params.beta, case.tol)),
    CatalogEntry("WATSON-EQ4", "K_nu lattice sum against (z^2 + 4 pi^2 n^2) series", ({},),
                 lambda rng, v: IdentityParams(nu=_u(rng, 1, 3), z=_u(rng, 0.5, 3)),
                 lambda case: _watson_eq4(case.params.nu, case.params.z, case.tol)),
    CatalogEntry("ELLIPTIC", "I_0 K_0 series against complete elliptic integrals", ({},),
                 lambda rng, v: _sample_ab_only(rng, v),
                 lambda case: _elliptic(case.params.alpha, case.params.beta, case.tol)),
    CatalogEntry("WATSON-K0", "K_0 lattice sum against regularised reciprocal-root series", ({},),
                 lambda rng, v: IdentityParams(beta=_u(rng, 0.5, 3)),
                 lambda case: _watson_k0(case.params.beta, case.tol)),
    CatalogEntry("ZETA-LOG", "exponential-sinh series against logarithm series", ({},),
                 _sample_ab_only, lambda case: _zeta_log(case.params.alpha, case.params.beta, case.tol)),
)

IDENTITY_IDS = tuple(e.id for e in _CATALOG)
_BY_ID = {e.id: e for e in _CATALOG}


def catalog_entries():
    return _CATALOG


def catalog_entry(identity_id):
    if identity_id not in _BY_ID:
        raise DomainError(f"unknown identity {identity_id!r}")
    return _BY_ID[identity_id]


def _case_params_dict(case):
    d = {k: v for k, v in case.variant.items() if k != "system"}
    d.update(case.params.as_dict())
    return d


def eval_identity(case):
    """Evaluate one catalog case and return its report (exceptions propagate)."""
    _check_tol(case.tol)
    entry = catalog_entry(case.identity_id)
    if "system" in case.variant and case.system is None:
        raise DomainError(f"{case.identity_id} needs a system")
    lhs, rhs = entry.evaluator(case)
    tol = case.tol
    notes = ""
    if case.identity_id == "TAU-EXP":
        # both sides are of size e^{-s}; compared relatively
        tol = max(tol, 1e-6 * abs(lhs.value))
        notes = "relative tolerance 1e-6"
    return _report(case.identity_id, _case_params_dict(case), lhs, rhs, tol, notes)


def _failed_report(case, exc):
    nan = ValueWithError(math.nan, math.inf)
    return VerificationReport(case.identity_id, _case_params_dict(case), nan, nan, case.tol,
                              notes=f"{type(exc).__name__}: {exc}")


def _draw_seed(seed, identity_id, variant, i):
    return f"{seed}:{identity_id}:{_variant_label(variant)}:{i}"


def build_cases(filter="*", draws=1, seed=0, tol=1e-7, N=4096):
    """The ordered list of cases run_suite evaluates."""
    if draws < 1:
        raise DomainError("draws must be >= 1")
    systems = {}
    cases = []
    for entry in _CATALOG:
        if not fnmatch.fnmatchcase(entry.id, filter):
            continue
        for v in entry.variants:
            sys = None
            if "system" in v:
                key = (v["system"], tuple(sorted(_sys_params(v).items())))
                if key not in systems:
                    systems[key] = hecke.catalog(v["system"], N=N, **_sys_params(v))
                sys = systems[key]
            for i in range(draws):
                rng = random.Random(_draw_seed(seed, entry.id, v, i))
                params = entry.sampler(rng, v)
                cases.append(IdentityCase(entry.id, sys, params, tol, dict(v)))
    return cases


def _run_one(case):
    t0 = time.perf_counter()
    try:
        rep = eval_identity(case)
    except (DomainError, AccuracyError, ArithmeticError, ValueError) as exc:
        rep = _failed_report(case, exc)
    rep.ms = 1000 * (time.perf_counter() - t0)
    return rep


def default_threads():
    env = os.environ.get("HB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(8, os.cpu_count() or 1)


def run_suite(filter="*", draws=1, seed=0, tol=1e-7, N=4096, threads=None):
    """Evaluate every matching identity at ``draws`` seeded parameter samples per variant.

    Reports come back in catalog order, then variant, then draw index, for
    any thread count.
    """
    cases = build_cases(filter, draws, seed, tol, N)
    if not cases:
        return []
    threads = threads or default_threads()
    if threads <= 1:
        return [_run_one(c) for c in cases]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_run_one, cases))


# ----------------------------------------------------------- limit chains
#
# The alpha -> beta limits are taken along sqrt(alpha) = t + g/2,
# sqrt(beta) = t - g/2, so B stays fixed and every quantity is even in g.

def _richardson(values, ratio):
    """Observed order and extrapolated limit of a sequence at gaps h, h/ratio, h/ratio^2."""
    v1, v2, v3 = values
    d1 = v1 - v2
    d2 = v2 - v3
    if d2 == 0 or d1 == 0:
        return math.inf, v3
    order = math.log(abs(d1 / d2)) / math.log(ratio)
    p = min(max(order, 1.0), 4.0)
    return order, v3 + (v3 - v2) / (ratio ** p - 1)


def _pair(t, g):
    return (t + g / 2) ** 2, (t - g / 2) ** 2


def t2_limit_check(system="TAU", nu=0.5, t=1.0, gap=0.04, tol=1e-12, N=4096, **sys_params):
    """T2 left side over (sqrt(alpha) - sqrt(beta))^(nu+1) as the gap closes, against its K-series limit."""
    sys = hecke.catalog(system, N=N, **sys_params)
    vals = []
    for j in range(3):
        g = gap / 2 ** j
        A, B, _ = _ab(*_pair(t, g))
        vals.append(_ik_lhs(sys, nu + 1, A, B, tol).value / g ** (nu + 1))
    s = TWO_PI * t

    def lk(lam):
        return lam ** ((nu + 1) / 2) * sf.bessel_k(nu + 1, s * math.sqrt(lam)).value

    series = _coef_series(sys, "a", 1, lk, tol, s, (nu + 1) / 2 - 0.25).value
    target = (PI / 2) ** (nu + 1) / sf.gamma(nu + 2).value * series
    order, extrap = _richardson(vals, 2.0)
    return {"values": vals, "order": order, "extrapolant": extrap, "target": target}


def limitnu_bracket(nu, alpha, beta):
    S = math.sqrt(alpha) + math.sqrt(beta)
    return (_gamma_ratio(nu + 1.5, nu + 2) / math.sqrt(PI) * S ** (nu + 1) / 2 ** (2 * nu + 3) * sf.zeta(2 * nu + 3).value
            - 1 / (4 * (nu + 1) * S ** (nu + 1)))


def limitnu_check(alpha=3.0, beta=1.0):
    """Symmetric means of the bracket at nu = -1 +- 10^-k, k = 2..4, against its nu -> -1 limit."""
    vals = [(limitnu_bracket(-1 + 10.0 ** -k, alpha, beta) + limitnu_bracket(-1 - 10.0 ** -k, alpha, beta)) / 2
            for k in (2, 3, 4)]
    S = math.sqrt(alpha) + math.sqrt(beta)
    target = EULER_GAMMA / 2 + 0.5 * math.log(S) - math.log(2)
    order, extrap = _richardson(vals, 10.0)
    return {"values": vals, "order": order, "extrapolant": extrap, "target": target}


def elliptic_limit_check(t=1.0, gap=0.04, tol=1e-12):
    """Elliptic-integral side as the gap closes, against half the K_0 lattice identity at 2 pi t."""
    vals = [_elliptic_rhs(*_pair(t, gap / 2 ** j), tol).value for j in range(3)]
    target = _watson_k0_rhs(TWO_PI * t, tol).value / 2
    order, extrap = _richardson(vals, 2.0)
    return {"values": vals, "order": order, "extrapolant": extrap, "target": target}
