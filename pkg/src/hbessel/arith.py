"""Exact generators for the arithmetical functions used by the catalog.

Sums of squares, divisor power sums, Ramanujan's tau, ideal counts of
imaginary quadratic fields, Dirichlet characters and Bernoulli numbers.
Tables are cached and read-only, so they can be shared between threads.
"""

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .specfun import CheckResult, DomainError

INT64_SAFE = 2 ** 62


@dataclass(frozen=True)
class CoefficientTable:
    """Values f(0..N) of an arithmetical function.

    ``values[n]`` for n >= 1 are exact integers held in a read-only numpy
    array (int64 when every entry fits, Python ints otherwise).  The n = 0
    slot is the exact rational ``zero``; the array keeps 0 there.
    """

    kind: str
    params: tuple
    values: np.ndarray = field(repr=False)
    zero: Fraction = Fraction(0)

    @property
    def N(self):
        return len(self.values) - 1

    def __getitem__(self, n):
        if n == 0:
            return self.zero
        return int(self.values[n])

    def __len__(self):
        return len(self.values)

    def as_float(self):
        """float64 copy of the table with the n = 0 slot filled in."""
        out = np.array([float(v) for v in self.values], dtype=float) \
            if self.values.dtype == object else self.values.astype(float)
        out[0] = float(self.zero)
        return out


def _frozen(arr):
    arr.setflags(write=False)
    return arr


# ------------------------------------------------------------ sums of squares

@lru_cache(maxsize=32)
def r_k(k, N):
    """r_k(0..N), the number of representations as a sum of k squares.

    k-fold convolution of the indicator of {m^2 : m in Z}; r_k(0) = 1.
    """
    k = int(k)
    N = int(N)
    if k < 2:
        raise DomainError(f"r_k needs k >= 2, got k={k}")
    if N < 0:
        raise DomainError("table size N must be >= 0")
    root = math.isqrt(N)
    dtype = np.int64 if (2 * root + 1) ** k < INT64_SAFE else object
    cur = np.zeros(N + 1, dtype=dtype)
    cur[0] = 1
    for _ in range(k):
        nxt = cur.copy()
        for m in range(1, root + 1):
            s = m * m
            nxt[s:] += 2 * cur[: N + 1 - s]
        cur = nxt
    zero = Fraction(int(cur[0]))
    cur[0] = 0
    return CoefficientTable(f"RK({k})", (k,), _frozen(cur), zero)


# --------------------------------------------------------------- divisor sums

def _bernoulli_table(n):
    b = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        for j in range(m):
            acc += math.comb(m + 1, j) * b[j]
        b.append(-acc / (m + 1))
    return b


@lru_cache(maxsize=64)
def bernoulli(n):
    """Bernoulli number B_n for even n >= 2 (B_1 = -1/2 convention)."""
    n = int(n)
    if n < 2 or n % 2:
        raise DomainError(f"bernoulli is provided for even n >= 2 only, got n={n}")
    return _bernoulli_table(n)[n]


@lru_cache(maxsize=32)
def sigma_k(k, N):
    """sigma_k(0..N) for odd k >= 1; sigma_k(0) = -B_{k+1}/(2(k+1))."""
    k = int(k)
    N = int(N)
    if k < 1 or k % 2 == 0:
        raise DomainError(f"sigma_k needs an odd positive k, got k={k}")
    if N < 0:
        raise DomainError("table size N must be >= 0")
    # sigma_k(n) <= zeta(k) n^k <= 2 n^k
    dtype = np.int64 if 2 * max(N, 1) ** k * (1 + math.log(max(N, 2))) < INT64_SAFE else object
    vals = np.zeros(N + 1, dtype=dtype)
    for d in range(1, N + 1):
        vals[d::d] += d ** k
    zero = -bernoulli(k + 1) / (2 * (k + 1))
    return CoefficientTable(f"SIGMA({k})", (k,), _frozen(vals), zero)


@lru_cache(maxsize=16)
def divisor_power_sum(s, N):
    """Float array of sum_{d | n} d^-s for n = 0..N (real s, entry 0 is 0)."""
    N = int(N)
    if N < 0:
        raise DomainError("table size N must be >= 0")
    s = float(s)
    vals = np.zeros(N + 1)
    for d in range(1, N + 1):
        vals[d::d] += d ** -s
    vals[0] = 0.0
    return _frozen(vals)


# ------------------------------------------------------------------------ tau

@lru_cache(maxsize=8)
def tau(N):
    """Ramanujan's tau(1..N) from q * prod (1 - q^m)^24.

    Jacobi's identity gives the cube of the Euler product as the sparse
    series sum (-1)^j (2j+1) q^{j(j+1)/2}; eight sparse-by-dense products
    then give the 24th power.  Python integers throughout.
    """
    N = int(N)
    if N < 1:
        raise DomainError("tau needs N >= 1")
    M = N - 1
    cube = []
    j = 0
    while j * (j + 1) // 2 <= M:
        cube.append((j * (j + 1) // 2, (-1) ** j * (2 * j + 1)))
        j += 1
    cur = np.zeros(M + 1, dtype=object)
    cur[:] = 0
    cur[0] = 1
    for _ in range(8):
        nxt = np.zeros(M + 1, dtype=object)
        nxt[:] = 0
        for s, c in cube:
            nxt[s:] += c * cur[: M + 1 - s]
        cur = nxt
    vals = np.zeros(N + 1, dtype=object)
    vals[:] = 0
    vals[1:] = cur
    if max(abs(int(v)) for v in vals) < INT64_SAFE:
        vals = vals.astype(np.int64)
    return CoefficientTable("TAU", (), _frozen(vals), Fraction(0))


# ------------------------------------------------------------------ Kronecker

def kronecker(m, n):
    """Kronecker symbol (m/n) for n >= 1."""
    m = int(m)
    n = int(n)
    if n < 1:
        raise DomainError("kronecker needs n >= 1")
    if n == 1:
        return 1
    if m % 2 == 0 and n % 2 == 0:
        return 0
    # strip powers of two from n
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    k = 1
    if v % 2 and (m % 8) in (3, 5):
        k = -k
    a = m % n if n > 1 else 0
    b = n
    # Jacobi symbol (a/b) for odd b
    while a:
        while a % 2 == 0:
            a //= 2
            if b % 8 in (3, 5):
                k = -k
        a, b = b, a
        if a % 4 == 3 and b % 4 == 3:
            k = -k
        a %= b
    return k if b == 1 else 0


def _squarefree(n):
    n = abs(n)
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


def is_fundamental(d):
    """True when d is a fundamental discriminant."""
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return _squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def _check_D(D):
    D = int(D)
    if D < 3 or not is_fundamental(-D):
        raise DomainError(f"-{D} is not a negative fundamental discriminant")
    return D


@dataclass(frozen=True)
class FieldConstants:
    """Invariants of the imaginary quadratic field of discriminant -D."""

    D: int
    h: int
    w: int
    R: int = 1


def reduced_forms(D):
    """Reduced primitive positive definite forms (a, b, c) of discriminant -D."""
    D = _check_D(D)
    out = []
    a = 1
    while 3 * a * a <= D:
        for b in range(-a + 1, a + 1):
            if (b * b + D) % (4 * a):
                continue
            c = (b * b + D) // (4 * a)
            if c < a:
                continue
            if c == a and b < 0:
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            out.append((a, b, c))
        a += 1
    return out


@lru_cache(maxsize=64)
def field_constants(D):
    D = _check_D(D)
    h = len(reduced_forms(D))
    w = 6 if D == 3 else 4 if D == 4 else 2
    return FieldConstants(D, h, w, 1)


@lru_cache(maxsize=32)
def ideal_count(D, N):
    """F(0..N): ideals of norm n, F(n) = sum_{d | n} (-D/d); F(0) = hR/w."""
    D = _check_D(D)
    N = int(N)
    chi = np.array([0] + [kronecker(-D, d) for d in range(1, N + 1)], dtype=np.int64)
    vals = np.zeros(N + 1, dtype=np.int64)
    for d in range(1, N + 1):
        if chi[d]:
            vals[d::d] += chi[d]
    fc = field_constants(D)
    return CoefficientTable(f"IDEAL({D})", (D,), _frozen(vals), Fraction(fc.h * fc.R, fc.w))


# ----------------------------------------------------------------- characters

def _factor(n):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def _primitive_root(p):
    phi = p - 1
    primes = [f for f, _ in _factor(phi)]
    for g in range(2, p):
        if all(pow(g, phi // f, p) != 1 for f in primes):
            return g
    return 1


def _discrete_log(g, x, m, order):
    acc = 1
    for k in range(order):
        if acc == x % m:
            return k
        acc = acc * g % m
    raise ValueError("element not in the cyclic group")


def _local_generators(p, e):
    """Cyclic decomposition of (Z/p^e)*: list of (generator, order) pairs."""
    m = p ** e
    if p == 2:
        if e == 1:
            return m, []
        if e == 2:
            return m, [(m - 1, 2)]
        return m, [(m - 1, 2), (5, 2 ** (e - 2))]
    g = _primitive_root(p)
    # lift to a generator mod p^e
    if e > 1 and pow(g, p - 1, p * p) == 1:
        g += p
    return m, [(g, (p - 1) * p ** (e - 1))]


def _local_logs(m, gens, x):
    """Exponents of x in terms of the local generators."""
    if not gens:
        return []
    if len(gens) == 1:
        g, order = gens[0]
        return [_discrete_log(g, x, m, order)]
    # 2^e with e >= 3: x = (-1)^a 5^b
    a = 0 if x % 4 == 1 else 1
    y = x if a == 0 else (-x) % m
    b = _discrete_log(5, y, m, gens[1][1])
    return [a, b]


@dataclass(frozen=True)
class DirichletCharacter:
    """A Dirichlet character modulo q.

    ``exponents[n]`` is None when gcd(n, q) > 1, otherwise the Fraction e
    with chi(n) = exp(2 pi i e).  ``values`` holds the complex numbers.
    """

    modulus: int
    label: tuple
    exponents: tuple = field(repr=False)
    values: tuple = field(repr=False)
    primitive: bool
    parity: str

    def __call__(self, n):
        return self.values[n % self.modulus]

    def conjugate(self):
        exps = tuple(None if e is None else (-e) % 1 for e in self.exponents)
        return _make_character(self.modulus, self.label + ("conj",), exps)

    @property
    def is_real(self):
        return all(e is None or e.denominator <= 2 for e in self.exponents)

    def table(self, N, weight=0):
        """Complex array of n^weight chi(n) for n = 0..N."""
        n = np.arange(N + 1)
        vals = np.array(self.values, dtype=complex)[n % self.modulus]
        if weight:
            vals = vals * n.astype(float) ** weight
        return vals


def _root_of_unity(e):
    if e is None:
        return 0j
    e = Fraction(e) % 1
    exact = {Fraction(0): 1 + 0j, Fraction(1, 2): -1 + 0j,
             Fraction(1, 4): 1j, Fraction(3, 4): -1j}
    if e in exact:
        return exact[e]
    return cmath.exp(2j * math.pi * float(e))


def _make_character(q, label, exps):
    values = tuple(_root_of_unity(e) for e in exps)
    primitive = _is_primitive(q, exps)
    e_last = exps[q - 1]
    parity = "even" if e_last == 0 else "odd"
    return DirichletCharacter(q, label, exps, values, primitive, parity)


def _is_primitive(q, exps):
    # chi is induced from modulus d | q iff chi(n) = 1 whenever n = 1 mod d
    for p, _ in _factor(q):
        d = q // p
        induced = True
        for n in range(1, q, d) if d > 0 else ():
            if exps[n] is not None and exps[n] != 0:
                induced = False
                break
        if induced:
            return False
    return True


@lru_cache(maxsize=128)
def all_characters(q):
    """Every Dirichlet character mod q, in a fixed order."""
    q = int(q)
    if q < 1:
        raise DomainError("modulus must be positive")
    locs = []
    for p, e in _factor(q):
        m, gens = _local_generators(p, e)
        locs.append((m, gens))
    units = [n for n in range(q) if math.gcd(n, q) == 1]
    logs = {}
    for n in units:
        logs[n] = [tuple(_local_logs(m, gens, n % m)) for m, gens in locs]
    # character labels: one index per cyclic factor
    orders = [order for _, gens in locs for _, order in gens]
    labels = [()]
    for o in orders:
        labels = [lab + (j,) for lab in labels for j in range(o)]
    out = []
    for lab in labels:
        exps = [None] * q
        for n in units:
            flat = [x for part in logs[n] for x in part]
            e = Fraction(0)
            for j, x, o in zip(lab, flat, orders):
                e += Fraction(j * x, o)
            exps[n] = e % 1
        out.append(_make_character(q, lab, tuple(exps)))
    return tuple(out)


def primitive_characters(q):
    """All primitive characters modulo q, 3 <= q <= 100."""
    q = int(q)
    if q < 3 or q > 100:
        raise DomainError(f"primitive_characters supports 3 <= q <= 100, got q={q}")
    return [c for c in all_characters(q) if c.primitive]


def character(q, parity, index=0):
    """The index-th primitive character mod q of the given parity."""
    chars = [c for c in primitive_characters(q) if c.parity == parity]
    if not chars:
        raise DomainError(f"no primitive {parity} character modulo {q}")
    if not 0 <= index < len(chars):
        raise DomainError(f"character index {index} out of range for q={q} ({len(chars)} available)")
    return chars[index]


def gauss_sum(chi):
    """tau(chi) = sum_{n=1}^{q} chi(n) e^{2 pi i n / q} for primitive chi."""
    if not chi.primitive:
        raise DomainError("gauss_sum needs a primitive character")
    q = chi.modulus
    re = []
    im = []
    for n in range(1, q + 1):
        e = chi.exponents[n % q]
        if e is None:
            continue
        z = _root_of_unity(e + Fraction(n, q))
        re.append(z.real)
        im.append(z.imag)
    return complex(math.fsum(re), math.fsum(im))


# ------------------------------------------------------------ brute force

def r_k_bruteforce(k, N):
    """r_k(0..N) by direct enumeration of lattice points."""
    root = math.isqrt(N)
    counts = [0] * (N + 1)

    def rec(depth, total):
        if depth == k:
            counts[total] += 1
            return
        for m in range(-root, root + 1):
            t = total + m * m
            if t <= N:
                rec(depth + 1, t)

    rec(0, 0)
    return counts


def sigma_bruteforce(k, n):
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def tau_bruteforce(N):
    """tau(1..N) by multiplying out (1 - q^m) twenty-four times per m."""
    poly = [0] * N
    poly[0] = 1
    for m in range(1, N):
        for _ in range(24):
            for i in range(N - 1, m - 1, -1):
                poly[i] -= poly[i - m]
    return [0] + poly


def ideal_count_bruteforce(D, n):
    """Number of ideals of norm n via representation numbers of reduced forms.

    Every ideal class contains ideals represented by its reduced form, and
    sum over classes of r_Q(n) = w F(n).
    """
    fc = field_constants(D)
    total = 0
    for a, b, c in reduced_forms(D):
        # 4 a n = (2 a x + b y)^2 + D y^2
        ymax = math.isqrt(4 * a * n // D) + 1
        for y in range(-ymax, ymax + 1):
            xmax = (math.isqrt(4 * a * n) + abs(b * y)) // (2 * a) + 1
            for x in range(-xmax, xmax + 1):
                if a * x * x + b * x * y + c * y * y == n:
                    total += 1
    if total % fc.w:
        raise AssertionError("representation count not divisible by w")
    return total // fc.w


# --------------------------------------------------------- oracle battery

def r8_jacobi(n):
    """r_8(n) = 16 sum_{d | n} (-1)^(n + d) d^3 for n >= 1."""
    return 16 * sum((-1) ** (n + d) * d ** 3 for d in range(1, n + 1) if n % d == 0)


def _tau_hecke_ok(t, N):
    for m in range(1, N + 1):
        for n in range(1, N // m + 1):
            if math.gcd(m, n) == 1 and t[m * n] != t[m] * t[n]:
                return False
    for p in range(2, N + 1):
        if all(p % d for d in range(2, math.isqrt(p) + 1)):
            pk = p
            while pk * p <= N:
                if t[pk * p] != t[p] * t[pk] - p ** 11 * t[pk // p]:
                    return False
                pk *= p
    return True


def oracle_battery(N=200, tau_N=100, gauss_q=50):
    """Fast coefficient generators against brute-force and closed-form oracles."""

    out = []
    for k in (2, 3, 4):
        fast = [int(v) for v in r_k(k, N).values]
        slow = r_k_bruteforce(k, N)
        bad = sum(fast[n] != slow[n] for n in range(1, N + 1)) + (r_k(k, N).zero != slow[0])
        out.append(CheckResult(f"r_{k} enumeration", bad == 0, float(bad), 0.0, N + 1))
    fast8 = r_k(8, N).values
    bad = sum(int(fast8[n]) != r8_jacobi(n) for n in range(1, N + 1))
    out.append(CheckResult("r_8 Jacobi formula", bad == 0, float(bad), 0.0, N))
    t = [int(v) for v in tau(tau_N).values]
    slow = tau_bruteforce(tau_N)
    bad = sum(t[n] != slow[n] for n in range(1, tau_N + 1))
    out.append(CheckResult("tau product expansion", bad == 0, float(bad), 0.0, tau_N))
    ok = _tau_hecke_ok(t, tau_N)
    out.append(CheckResult("tau multiplicativity", ok, 0.0 if ok else 1.0, 0.0, tau_N))
    s1 = sigma_k(1, N).values
    s3 = sigma_k(3, N).values
    bad = sum(int(s1[n]) != sigma_bruteforce(1, n) or int(s3[n]) != sigma_bruteforce(3, n) for n in range(1, N + 1))
    out.append(CheckResult("sigma divisor sums", bad == 0, float(bad), 0.0, 2 * N))
    worst = 0.0
    count = 0
    for q in range(3, gauss_q + 1):
        for chi in primitive_characters(q):
            worst = max(worst, abs(abs(gauss_sum(chi)) ** 2 - q))
            count += 1
    out.append(CheckResult("|gauss sum|^2 = q", worst <= 1e-9, worst, 1e-9, count))
    F = ideal_count(4, N).values
    r2 = r_k(2, N).values
    bad = sum(4 * int(F[n]) != int(r2[n]) for n in range(1, N + 1))
    out.append(CheckResult("4 F(n) = r_2(n) for D=4", bad == 0, float(bad), 0.0, N))
    bad = 0
    for D in (3, 4, 23):
        F = ideal_count(D, 60).values
        bad += sum(int(F[n]) != ideal_count_bruteforce(D, n) for n in range(1, 61))
    out.append(CheckResult("ideal counts from reduced forms", bad == 0, float(bad), 0.0, 180))
    return out
