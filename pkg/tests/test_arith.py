import cmath
import math
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hbessel import arith
from hbessel.specfun import DomainError

PRIMES = [p for p in range(2, 500) if all(p % d for d in range(2, math.isqrt(p) + 1))]


# ------------------------------------------------------------- sums of squares

def test_r_k_examples():
    t = arith.r_k(2, 10)
    assert t[1] == 4
    assert t[3] == 0
    for k in (2, 3, 4, 8):
        assert arith.r_k(k, 5)[0] == 1


@pytest.mark.parametrize("k", [2, 3, 4, 8])
def test_r_k_generating_function(k):
    N = 200
    base = [0] * (N + 1)
    for m in range(-math.isqrt(N), math.isqrt(N) + 1):
        base[m * m] += 1
    poly = [1] + [0] * N
    for _ in range(k):
        poly = [sum(poly[i] * base[n - i] for i in range(n + 1)) for n in range(N + 1)]
    t = arith.r_k(k, N)
    assert [t[n] for n in range(N + 1)] == poly


def test_r_k_nonnegative_and_enumeration():
    t = arith.r_k(3, 120)
    slow = arith.r_k_bruteforce(3, 120)
    assert all(t[n] >= 0 for n in range(121))
    assert [t[n] for n in range(121)] == slow


def test_r_k_jacobi_four_squares():
    t = arith.r_k(4, 300)
    for n in range(1, 301):
        assert t[n] == 8 * sum(d for d in range(1, n + 1) if n % d == 0 and d % 4)


# -------------------------------------------------------------- divisor sums

def test_sigma_examples():
    assert arith.sigma_k(1, 10)[6] == 12
    for k in (1, 3, 5, 11):
        assert arith.sigma_k(k, 3)[1] == 1
    assert arith.sigma_k(1, 3)[0] == Fraction(-1, 24)
    assert arith.sigma_k(3, 3)[0] == Fraction(1, 240)


def test_sigma_even_k_rejected():
    with pytest.raises(DomainError):
        arith.sigma_k(2, 10)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 500), st.integers(1, 500), st.sampled_from([1, 3, 5]))
def test_sigma_multiplicative(m, n, k):
    if math.gcd(m, n) != 1 or m * n > 500:
        return
    t = arith.sigma_k(k, 500)
    assert t[m * n] == t[m] * t[n]


def test_sigma_large_k_exact():
    t = arith.sigma_k(11, 60)
    assert t[60] == arith.sigma_bruteforce(11, 60)


# ------------------------------------------------------------------------ tau

def test_tau_examples():
    t = arith.tau(20)
    assert t[1] == 1
    assert t[2] == -24
    assert t[3] == 252
    assert t[6] == t[2] * t[3]


def test_tau_against_direct_expansion():
    t = arith.tau(100)
    slow = arith.tau_bruteforce(100)
    assert [t[n] for n in range(1, 101)] == slow[1:]


def test_tau_against_mpmath_eta_power():
    # q prod (1 - q^m)^24 through mpmath's power series of the Euler function
    N = 40
    coeffs = mp.taylor(lambda q: q * mp.qp(q) ** 24, 0, N)
    t = arith.tau(N)
    assert [t[n] for n in range(1, N + 1)] == [int(mp.nint(c)) for c in coeffs[1:]]


def test_tau_hecke_relations():
    t = arith.tau(100)
    for m in range(1, 101):
        for n in range(1, 100 // m + 1):
            if math.gcd(m, n) == 1:
                assert t[m * n] == t[m] * t[n]
    for p in (2, 3, 5, 7):
        assert t[p * p] == t[p] ** 2 - p ** 11


def test_tau_ramanujan_bound():
    t = arith.tau(200)
    for p in PRIMES:
        if p > 200:
            break
        assert abs(t[p]) <= 2 * p ** 5.5


# ---------------------------------------------------------------- Bernoulli

def test_bernoulli_examples():
    assert arith.bernoulli(2) == Fraction(1, 6)
    assert arith.bernoulli(12) == Fraction(-691, 2730)
    z2 = (2 * math.pi) ** 2 * float(arith.bernoulli(2)) / (2 * 2)
    assert z2 == pytest.approx(math.pi ** 2 / 6, rel=1e-15)


@pytest.mark.parametrize("n", range(2, 42, 2))
def test_bernoulli_against_mpmath(n):
    num, den = mp.bernfrac(n)
    assert arith.bernoulli(n) == Fraction(int(num), int(den))


def test_bernoulli_odd_rejected():
    with pytest.raises(DomainError):
        arith.bernoulli(3)


# ---------------------------------------------------------------- Kronecker

def test_kronecker_examples():
    assert arith.kronecker(-4, 5) == 1
    assert arith.kronecker(-4, 2) == 0
    for m in (-23, -4, 0, 7, 12):
        assert arith.kronecker(m, 1) == 1


@settings(max_examples=300, deadline=None)
@given(st.integers(-200, 200), st.integers(1, 400).filter(lambda n: n % 2 == 1))
def test_kronecker_odd_n_is_jacobi(m, n):
    # Jacobi symbol as the product of Legendre symbols via Euler's criterion
    want = 1
    r = n
    p = 3
    while r > 1:
        while r % p == 0:
            a = m % p
            if a == 0:
                want = 0
            else:
                want *= 1 if pow(a, (p - 1) // 2, p) == 1 else -1
            r //= p
        p += 2
    assert arith.kronecker(m, n) == want


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([3, 4, 7, 8, 11, 15, 20, 23, 24]), st.integers(1, 300), st.integers(1, 300))
def test_kronecker_completely_multiplicative_in_n(D, a, b):
    assert arith.kronecker(-D, a * b) == arith.kronecker(-D, a) * arith.kronecker(-D, b)


# -------------------------------------------------------------- ideal counts

@pytest.mark.parametrize("D,h,w", [(4, 1, 4), (3, 1, 6), (23, 3, 2), (20, 2, 2), (7, 1, 2), (47, 5, 2)])
def test_field_constants(D, h, w):
    fc = arith.field_constants(D)
    assert (fc.h, fc.w, fc.R) == (h, w, 1)


def test_ideal_count_examples():
    F = arith.ideal_count(4, 60)
    r2 = arith.r_k(2, 60)
    assert F[1] == 1
    assert F[0] == Fraction(1, 4)
    for n in range(1, 51):
        assert 4 * F[n] == r2[n]
    assert arith.ideal_count(23, 5)[0] == Fraction(3, 2)


def test_ideal_count_non_fundamental():
    for D in (1, 2, 5, 12, 16):
        with pytest.raises(DomainError):
            arith.ideal_count(D, 10)


@pytest.mark.parametrize("D", [3, 4, 7, 8, 15, 23])
def test_ideal_count_at_primes(D):
    F = arith.ideal_count(D, 500)
    for p in PRIMES:
        if D % p:
            assert F[p] == 1 + arith.kronecker(-D, p)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([3, 4, 7, 23]), st.integers(1, 500), st.integers(1, 500))
def test_ideal_count_multiplicative(D, m, n):
    if math.gcd(m, n) != 1 or m * n > 500:
        return
    F = arith.ideal_count(D, 500)
    assert F[m * n] == F[m] * F[n]


def test_ideal_count_reduced_forms_oracle():
    for D in (3, 4, 20, 23):
        F = arith.ideal_count(D, 40)
        assert [F[n] for n in range(1, 41)] == [arith.ideal_count_bruteforce(D, n) for n in range(1, 41)]


# ---------------------------------------------------------------- characters

def test_q4_character():
    chars = arith.primitive_characters(4)
    assert len(chars) == 1
    chi = chars[0]
    assert chi(1) == 1 and chi(3) == -1 and chi(2) == 0
    assert chi.parity == "odd"


def test_q5_characters():
    # (Z/5Z)* is cyclic of order 4: the principal character is induced from
    # modulus 1, the other three are primitive (one quadratic even, two quartic odd)
    assert len(arith.all_characters(5)) == 4
    prim = arith.primitive_characters(5)
    assert len(prim) == 3
    assert sorted(c.parity for c in prim) == ["even", "odd", "odd"]


def test_character_range():
    with pytest.raises(DomainError):
        arith.primitive_characters(2)
    with pytest.raises(DomainError):
        arith.primitive_characters(101)


def test_gauss_sum_examples():
    chi4 = arith.character(4, "odd")
    assert abs(arith.gauss_sum(chi4) - 2j) < 1e-15
    chi3 = arith.character(3, "odd")
    assert abs(arith.gauss_sum(chi3) - 1j * math.sqrt(3)) < 1e-14


def test_gauss_sum_needs_primitive():
    principal = arith.all_characters(5)[0]
    assert not principal.primitive
    with pytest.raises(DomainError):
        arith.gauss_sum(principal)


def test_gauss_sum_modulus_all_q():
    for q in range(3, 101):
        for chi in arith.primitive_characters(q):
            assert abs(abs(arith.gauss_sum(chi)) - math.sqrt(q)) < 1e-10


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 12, 13, 15, 16, 21, 24, 36, 60])
def test_character_invariants(q):
    for chi in arith.primitive_characters(q):
        assert chi(1) == 1
        assert abs(sum(chi(n) for n in range(1, q + 1))) < 1e-12
        for n in range(q):
            assert (chi(n) == 0) == (math.gcd(n, q) > 1)
        for m in range(1, q):
            for n in range(1, q):
                assert abs(chi(m * n) - chi(m) * chi(n)) < 1e-12
        assert chi(q - 1) == (1 if chi.parity == "even" else -1)


def test_primitive_count_matches_jordan_formula():
    # number of primitive characters mod q is the Dirichlet convolution mu * phi
    def mobius(n):
        out = 1
        p = 2
        while p * p <= n:
            if n % p == 0:
                n //= p
                if n % p == 0:
                    return 0
                out = -out
            p += 1
        return -out if n > 1 else out

    def phi(n):
        return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)

    for q in range(3, 101):
        want = sum(mobius(d) * phi(q // d) for d in range(1, q + 1) if q % d == 0)
        assert len(arith.primitive_characters(q)) == want


def test_gauss_sum_against_mpmath():
    for q in (7, 11, 13):
        for chi in arith.primitive_characters(q):
            want = mp.fsum(mp.mpc(chi(n)) * mp.expjpi(2 * mp.mpf(n) / q) for n in range(1, q + 1))
            assert abs(complex(want) - arith.gauss_sum(chi)) < 1e-13


def test_conjugate_character():
    chi = arith.character(5, "odd")
    bar = chi.conjugate()
    for n in range(5):
        assert abs(bar(n) - chi(n).conjugate()) < 1e-15
    assert cmath.isclose(chi(2) * bar(2), 1)


# ------------------------------------------------------------- oracle battery

def test_oracle_battery_passes():
    results = arith.oracle_battery(N=200, tau_N=100)
    assert [r.name for r in results if not r.passed] == []
    assert len(results) == 10


def test_tables_are_read_only():
    t = arith.tau(10)
    with pytest.raises(ValueError):
        t.values[1] = 5
