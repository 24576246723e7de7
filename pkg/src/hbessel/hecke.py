"""Catalog of Dirichlet-series pairs with a Hecke functional equation.

A system is a(n), lambda_n, b(n), mu_n and delta such that
(2 pi)^-s Gamma(s) sum a(n) lambda_n^-s = (2 pi)^(s - delta) Gamma(delta - s) sum b(n) mu_n^(s - delta),
together with the closed form of its residual term Q_0.  Every residual
here is a finite sum c_p x^p whose powers are exactly the poles of
Gamma(s) phi(s), so Q_rho and the exponential-kernel residual P follow from
the same monomials:

    Q_rho(x) = sum c_p Gamma(p + 1) x^(p + rho) / Gamma(p + rho + 1)
    P(x)     = sum c_p Gamma(p + 1) x^(-p)
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import arith
from . import specfun as sf
from .specfun import DomainError

SYSTEM_IDS = ("RK", "SIGMA", "TAU", "CHI-ODD", "CHI-EVEN", "IDEAL", "ZETA")


class UnsupportedIdentityError(DomainError):
    """The requested evaluation needs data the catalog does not provide."""


@dataclass(frozen=True)
class ResidualTerm:
    """Q(x) = sum c_i x^(p_i) as a tuple of (coefficient, power) pairs."""

    monomials: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "monomials", tuple((float(c), float(p)) for c, p in self.monomials if c != 0))

    def eval(self, x):
        if x < 0:
            raise DomainError("residual term needs x >= 0")
        total = 0.0
        for c, p in self.monomials:
            if p == 0:
                total += c
            elif x > 0:
                total += c * x ** p
            elif p < 0:
                return math.inf
        return total

    __call__ = eval

    @property
    def constant(self):
        return sum(c for c, p in self.monomials if p == 0)

    @property
    def is_zero(self):
        return not self.monomials

    def derivative(self):
        return ResidualTerm(tuple((c * p, p - 1) for c, p in self.monomials if p != 0))

    def min_power(self):
        return min((p for _, p in self.monomials), default=0.0)

    def max_power(self):
        return max((p for _, p in self.monomials), default=0.0)


def residual_eval(r, x):
    return r.eval(x)


def _rk_density(k):
    vk = math.pi ** (k / 2) / math.gamma(k / 2 + 1)
    return lambda t: k * vk * t ** (k / 2 - 1)


def _sigma_density(k):
    if k == 1:
        return lambda t: t * (1.0 + math.log(max(t, 1.0)))
    zk = sf.zeta(k).value
    return lambda t: zk * t ** k


@dataclass(frozen=True)
class HeckeSystem:
    """One catalog entry with coefficient tables for n = 0..N.

    ``a_values`` and ``b_values`` hold a(n), b(n) as float or complex arrays,
    including any scalar prefactor of b; index 0 is the value the K-series
    identities use for n = 0 (zero when the family has none).  lambda_n and
    mu_n are ``scale * n^power``.  ``density(t)`` bounds |a(t)| and |b(t)|
    for tail estimates (twice the mean order for r_k, pointwise otherwise)
    and ``abel_bound`` is max |sum_{n<=x} chi(n)| for the character
    families, used for Abel-summation tails.
    """

    id: str
    params: dict
    N: int
    a_values: np.ndarray = field(repr=False)
    b_values: np.ndarray = field(repr=False)
    lam_scale: float
    lam_power: int
    delta: float
    sigma_a_star: float
    residual: ResidualTerm
    density: object = field(repr=False)
    density_exponent: float = 0.0
    b_prefactor: complex = 1.0
    abel_bound: float = None
    character: object = field(default=None, repr=False)
    general_rho: bool = False
    notes: str = ""

    def lam(self, n):
        return self.lam_scale * np.asarray(n, dtype=float) ** self.lam_power if not np.isscalar(n) \
            else self.lam_scale * float(n) ** self.lam_power

    mu = lam

    def index_for(self, value):
        """Largest n with lambda_n <= value."""
        if value <= 0:
            return 0
        n = int(math.floor((value / self.lam_scale) ** (1.0 / self.lam_power) + 1e-9))
        while self.lam(n + 1) <= value:
            n += 1
        while n > 0 and self.lam(n) > value:
            n -= 1
        return n

    def a(self, n):
        return self.a_values[n]

    def b(self, n):
        return self.b_values[n]

    def ensure(self, N):
        """This system with tables covering at least 0..N."""
        if N <= self.N:
            return self
        size = max(int(N), 2 * self.N)
        return catalog(self.id, N=size, **self.params)

    def residual_rho(self, rho):
        """Q_rho as a ResidualTerm; only where the catalog allows general rho."""
        if rho == 0:
            return self.residual
        if not self.general_rho:
            raise UnsupportedIdentityError(f"Q_rho for rho != 0 is not available for {self.id}")
        mons = []
        for c, p in self.residual.monomials:
            coef = c * math.exp(sf.loggamma(p + 1) - sf.loggamma(p + rho + 1))
            mons.append((coef, p + rho))
        return ResidualTerm(tuple(mons))

    def modular_residual(self, x):
        """P(x) in sum a e^{-lambda x} = (2 pi / x)^delta sum b e^{-4 pi^2 mu / x} + P(x)."""
        if not x > 0:
            raise DomainError("x must be > 0")
        total = 0.0
        for c, p in self.residual.monomials:
            total += c * math.gamma(p + 1) * x ** (-p)
        return total


def _check_int(name, v, lo=None):
    if isinstance(v, bool) or int(v) != v:
        raise DomainError(f"{name} must be an integer, got {v!r}")
    v = int(v)
    if lo is not None and v < lo:
        raise DomainError(f"{name} must be >= {lo}, got {v}")
    return v


def _rk(N, k=2):
    k = _check_int("k", k, 1)
    tab = arith.r_k(k, N)
    vals = tab.as_float()
    res = ResidualTerm(((-1.0, 0.0), ((2 * math.pi) ** (k / 2) / math.gamma(1 + k / 2), k / 2)))
    return HeckeSystem("RK", {"k": k}, N, _frozen(vals), _frozen(vals), 0.5, 1, k / 2, k / 2, res,
                       _rk_density(k), k / 2 - 1, general_rho=True, notes=f"r_{k}(n), lambda_n = n/2")


def _sigma(N, k=1):
    k = _check_int("k", k, 1)
    if k % 2 == 0:
        raise DomainError(f"SIGMA needs odd k, got k={k}")
    tab = arith.sigma_k(k, N)
    a = tab.as_float()
    sign = (-1) ** ((k + 1) // 2)
    b = sign * a
    B = float(arith.bernoulli(k + 1))
    mons = [(B / (2 * (k + 1)), 0.0),
            ((2 * math.pi) ** (k + 1) * (-1) ** ((k - 1) // 2) * B / (2 * (k + 1) * math.gamma(k + 2)), k + 1.0)]
    if k == 1:
        mons.append((-0.5, 1.0))
    return HeckeSystem("SIGMA", {"k": k}, N, _frozen(a), _frozen(b), 1.0, 1, k + 1.0, k + 1.0,
                       ResidualTerm(tuple(mons)), _sigma_density(k), k + (0.1 if k == 1 else 0.0), b_prefactor=float(sign),
                       notes=f"sigma_{k}(n), b = {sign:+d} sigma_{k}(n)")


def _tau(N):
    vals = arith.tau(N).as_float()
    return HeckeSystem("TAU", {}, N, _frozen(vals), _frozen(vals), 1.0, 1, 12.0, 6.5, ResidualTerm(),
                       lambda t: 2.0 * t ** 6, 6.0, general_rho=True, notes="Ramanujan tau(n)")


def _abel_bound(chi):
    s = 0j
    best = 0.0
    for n in range(1, chi.modulus + 1):
        s += chi(n)
        best = max(best, abs(s))
    return best


def _chi(N, parity, q, index=0):
    q = _check_int("q", q, 3)
    index = _check_int("index", index, 0)
    chi = arith.character(q, parity, index)
    g = arith.gauss_sum(chi)
    weight = 1 if parity == "odd" else 0
    a = chi.table(N, weight)
    conj = chi.conjugate().table(N, weight)
    pref = (-1j * g if parity == "odd" else g) / math.sqrt(q)
    pref = complex(round(pref.real, 15), round(pref.imag, 15))
    if chi.is_real and pref.imag == 0:
        a = a.real.copy()
        b = (pref.real * conj).real.copy()
        pref = pref.real
    else:
        b = pref * conj
    ident = "CHI-ODD" if parity == "odd" else "CHI-EVEN"
    delta = 1.5 if parity == "odd" else 0.5
    star = 1.0 if parity == "odd" else 0.5
    dens = (lambda t: t) if parity == "odd" else (lambda t: 1.0)
    return HeckeSystem(ident, {"q": q, "index": index}, N, _frozen(np.asarray(a)), _frozen(np.asarray(b)),
                       1.0 / (2 * q), 2, delta, star, ResidualTerm(), dens, float(weight), b_prefactor=pref,
                       abel_bound=_abel_bound(chi), character=chi, general_rho=True,
                       notes=f"primitive {parity} character mod {q}, label {chi.label}")


def _ideal(N, D=4):
    D = _check_int("D", D, 3)
    fc = arith.field_constants(D)
    tab = arith.ideal_count(D, N)
    vals = tab.as_float()
    hRw = fc.h * fc.R / fc.w
    res = ResidualTerm(((-hRw, 0.0), (2 * math.pi * hRw, 1.0)))
    return HeckeSystem("IDEAL", {"D": D}, N, _frozen(vals), _frozen(vals), 1.0 / math.sqrt(D), 1, 1.0, 1.0, res,
                       lambda t: 2.0 * math.sqrt(t), 0.5, notes=f"ideal counts of Q(sqrt(-{D})), h={fc.h}, w={fc.w}")


def _zeta(N):
    vals = np.ones(N + 1)
    vals[0] = 0.0
    res = ResidualTerm(((-0.5, 0.0), (math.sqrt(2.0), 0.5)))
    return HeckeSystem("ZETA", {}, N, _frozen(vals), _frozen(vals.copy()), 0.5, 2, 0.5, 0.5, res,
                       lambda t: 1.0, 0.0, notes="a(n) = b(n) = 1, lambda_n = n^2/2")


def _frozen(arr):
    arr = np.array(arr)
    arr.setflags(write=False)
    return arr


_BUILDERS = {
    "RK": (_rk, ("k",)),
    "SIGMA": (_sigma, ("k",)),
    "TAU": (_tau, ()),
    "CHI-ODD": (lambda N, q=4, index=0: _chi(N, "odd", q, index), ("q", "index")),
    "CHI-EVEN": (lambda N, q=5, index=0: _chi(N, "even", q, index), ("q", "index")),
    "IDEAL": (_ideal, ("D",)),
    "ZETA": (_zeta, ()),
}


def catalog(id, N=4096, **params):
    """Build the named system with coefficient tables for n = 0..N."""
    if id not in _BUILDERS:
        raise DomainError(f"unknown system {id!r}; known: {', '.join(SYSTEM_IDS)}")
    N = _check_int("N", N, 1)
    builder, names = _BUILDERS[id]
    extra = set(params) - set(names)
    if extra:
        raise DomainError(f"{id} does not take parameters {sorted(extra)}")
    return builder(N, **params)


def system_fingerprint(sys):
    """Hashable identity of a system (kind and parameters), ignoring table size."""
    return (sys.id, tuple(sorted(sys.params.items())))


__all__ = ["SYSTEM_IDS", "ResidualTerm", "HeckeSystem", "UnsupportedIdentityError", "catalog",
           "residual_eval"]
