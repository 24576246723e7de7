import dataclasses
import json
import math

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hbessel import arith, engine, hecke
from hbessel.engine import IdentityCase, IdentityParams
from hbessel.hecke import ResidualTerm, UnsupportedIdentityError
from hbessel.specfun import AccuracyError, DomainError

mp.mp.dps = 30
PI = math.pi


def case(identity_id, params, tol=1e-7, **variant):
    sys = None
    if "system" in variant:
        extra = {k: v for k, v in variant.items() if k != "system"}
        sys = hecke.catalog(variant["system"], **extra)
    return IdentityCase(identity_id, sys, IdentityParams(**params), tol, variant)


@pytest.fixture(scope="module")
def rk2():
    return hecke.catalog("RK", k=2)


@pytest.fixture(scope="module")
def tau_sys():
    return hecke.catalog("TAU")


# ------------------------------------------------------------ modular relation

def test_modular_self_dual_point(rk2):
    rep = engine.eval_modular_relation(rk2, 2 * PI)
    assert rep.abs_diff < 1e-12
    assert rep.passed


@pytest.mark.parametrize("sid,params,x", [("RK", {"k": 4}, 3.0), ("TAU", {}, 1.0)])
def test_modular_examples(sid, params, x):
    rep = engine.eval_modular_relation(hecke.catalog(sid, **params), x)
    assert rep.abs_diff < 1e-10
    assert rep.passed


def test_modular_rk4_is_theta_transformation():
    # sum r_4(n) e^{-n x / 2} = theta(e^{-x/2})^4 - 1
    x = 3.0
    rep = engine.eval_modular_relation(hecke.catalog("RK", k=4), x)
    theta = mp.jtheta(3, 0, mp.exp(-mp.mpf(x) / 2))
    assert abs(rep.lhs.value - float(theta ** 4 - 1)) < 1e-13


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([("RK", {"k": 2}), ("RK", {"k": 3}), ("TAU", {}), ("ZETA", {}), ("IDEAL", {"D": 23}),
                        ("SIGMA", {"k": 3}), ("CHI-ODD", {"q": 5}), ("CHI-EVEN", {"q": 8})]),
       st.floats(0.5, 12))
def test_modular_relation_property(system, x):
    sid, params = system
    s = hecke.catalog(sid, **params)
    rep = engine.eval_modular_relation(s, x)
    # errors model truncation only; allow round-off relative to the term magnitudes
    mag = math.fsum(abs(complex(s.a(n))) * math.exp(-float(s.lam(n)) * x) for n in range(1, 3000))
    assert rep.abs_diff <= rep.tol + rep.lhs.abs_error + rep.rhs.abs_error + 64 * 2.0 ** -52 * mag


def test_modular_bad_x(rk2):
    with pytest.raises(DomainError, match="x > 0"):
        engine.eval_modular_relation(rk2, 0.0)


# ------------------------------------------------------------------ Riesz sums

def test_riesz_half_weight(rk2):
    # r_2(1..5) = 4, 4, 0, 4, 8; lambda_5 = 5/2 counts half at x = 5/2
    assert engine.riesz_sum(rk2, 2.5, 0)[0].value == 16
    assert engine.riesz_sum(rk2, 2.5000001, 0)[0].value == 20


@pytest.mark.parametrize("x", [5.5, 10.5])
def test_riesz_rk2_rho2(rk2, x):
    rep = engine.eval_riesz_identity(rk2, x, 2, tol=1e-4, max_terms=10 ** 6, on_cap="report")
    assert rep.abs_diff < 1e-4
    assert rep.rhs_terms <= 10 ** 6


def test_riesz_below_first_exponent(rk2):
    rep = engine.eval_riesz_identity(rk2, 0.3, 2, tol=1e-4)
    assert rep.lhs.value == 0.0
    Q = rk2.residual_rho(2)
    assert abs((rep.rhs.value - Q.eval(0.3)) + Q.eval(0.3)) < 1e-4
    assert rep.passed


def test_riesz_lhs_against_direct_sum(rk2):
    x, rho = 7.25, 2.0
    r2 = arith.r_k(2, 20)
    want = sum(r2[n] * (x - n / 2) ** rho for n in range(1, 15)) / math.gamma(rho + 1)
    assert engine.riesz_sum(rk2, x, rho)[0].value == pytest.approx(want, rel=1e-14)


def test_riesz_cap_raises(rk2):
    with pytest.raises(AccuracyError, match="tail"):
        engine.eval_riesz_identity(rk2, 10.5, 2, tol=1e-4, max_terms=10 ** 5)


def test_riesz_cap_report_has_note(rk2):
    rep = engine.eval_riesz_identity(rk2, 10.5, 2, tol=1e-4, max_terms=10 ** 5, on_cap="report")
    assert "tail bound" in rep.notes
    assert rep.rhs.abs_error > 1e-4


def test_riesz_hypotheses(rk2):
    with pytest.raises(DomainError, match="rho >"):
        engine.eval_riesz_identity(rk2, 5.5, 0.2)
    with pytest.raises(UnsupportedIdentityError):
        engine.eval_riesz_identity(hecke.catalog("SIGMA", k=1), 5.5, 5)


# ---------------------------------------------------------- general theorems

def test_first_general_rho0_matches_t1(rk2):
    gen = engine.eval_first_theorem_general(rk2, 0.6, 1.0, 0.8, 0.0, tol=1e-10)
    t1 = engine.eval_identity(case("T1", dict(nu=0.6, c=1.0, r=0.8), 1e-10, system="RK", k=2))
    assert abs(gen.lhs.value - t1.lhs.value) < 1e-9
    assert abs(gen.rhs.value - t1.rhs.value) < 1e-9


def test_first_general_tau(tau_sys):
    rep = engine.eval_first_theorem_general(tau_sys, 0.5, 1.0, 1.0, 0.5)
    assert rep.abs_diff < 1e-7


def test_first_general_rk_rho1(rk2):
    rep = engine.eval_first_theorem_general(rk2, 0.0, 0.7, 0.9, 1.0)
    assert rep.abs_diff < 1e-7


def test_second_general_rho0_matches_t2(tau_sys):
    gen = engine.eval_second_theorem_general(tau_sys, 0.0, 4.0, 1.0, 0.0, tol=1e-10)
    t2 = engine.eval_identity(case("T2", dict(nu=0.0, alpha=4.0, beta=1.0), 1e-10, system="TAU"))
    # the integrated form carries the opposite overall sign
    assert abs(gen.lhs.value + t2.lhs.value) < 1e-8
    assert abs(gen.rhs.value + t2.rhs.value) < 1e-8


def test_second_general_chi_odd():
    rep = engine.eval_second_theorem_general(hecke.catalog("CHI-ODD", q=4), 0.3, 3.0, 1.0, 0.5)
    assert rep.abs_diff < 1e-6


def test_second_general_residual_sign(rk2):
    # the 2F1 series decays like n^-1.3 here; the flip moves the difference by ~0.14
    good = engine.eval_second_theorem_general(rk2, 0.3, 3.0, 1.0, 0.0, tol=1e-5)
    assert good.passed
    flipped_q = ResidualTerm(tuple((-c if p == 0 else c, p) for c, p in rk2.residual.monomials))
    flipped = dataclasses.replace(rk2, residual=flipped_q)
    bad = engine.eval_second_theorem_general(flipped, 0.3, 3.0, 1.0, 0.0, tol=1e-5)
    assert bad.lhs.value == good.lhs.value
    rat = (math.sqrt(3) - 1) / (math.sqrt(3) + 1)
    assert abs(bad.abs_diff - 2 * rat ** 1.3 / (2 * 1.3)) < 1e-4
    assert not bad.passed


def test_general_theorems_unsupported_residual():
    with pytest.raises(UnsupportedIdentityError):
        engine.eval_first_theorem_general(hecke.catalog("SIGMA", k=1), 0.5, 1, 1, 0.5)
    with pytest.raises(UnsupportedIdentityError):
        engine.eval_second_theorem_general(hecke.catalog("IDEAL", D=4), 1.8, 3, 1, 1.0)


def test_general_theorem_hypotheses(rk2):
    with pytest.raises(DomainError, match="nu > -1"):
        engine.eval_first_theorem_general(rk2, -1.5, 1, 1, 0.5)
    with pytest.raises(DomainError, match="sqrt\\(alpha\\) > sqrt\\(beta\\)"):
        engine.eval_second_theorem_general(rk2, 0.3, 1.0, 3.0, 0.5)
    with pytest.raises(DomainError, match="rho > -1"):
        engine.eval_second_theorem_general(rk2, 0.3, 3.0, 1.0, -2.0)


# -------------------------------------------------------------- catalog cases

def test_rk_k_self_dual():
    rep = engine.eval_identity(case("RK-K", dict(nu=0.5, c=1.0, r=1.0), 1e-12, system="RK", k=2))
    assert rep.abs_diff < 1e-13


def test_guinand_symmetric_point():
    rep = engine.eval_identity(case("GUINAND", dict(s=0.0, alpha=PI), 1e-12, s=0.0))
    assert rep.abs_diff < 1e-12


def test_watson_k0_unit():
    rep = engine.eval_identity(case("WATSON-K0", dict(beta=1.0), 1e-11))
    assert rep.abs_diff < 1e-10
    lhs = 2 * mp.nsum(lambda n: mp.besselk(0, n), [1, mp.inf])
    rhs = (mp.pi * (1 + 2 * mp.nsum(lambda n: 1 / mp.sqrt(1 + 4 * mp.pi ** 2 * n ** 2) - 1 / (2 * n * mp.pi),
                                    [1, mp.inf]))
           + mp.euler + mp.log(mp.mpf(1) / 2) - mp.log(2 * mp.pi))
    assert abs(rep.lhs.value - float(lhs)) < 1e-11
    assert abs(rep.rhs.value - float(rhs)) < 1e-11


def test_tau_sinh_both_sides_with_mpmath():
    # e^{-x} sinh(y) series against the rational series with constant 21!! / pi^11
    alpha, beta = 3.0, 1.0
    sa, sb = mp.sqrt(alpha), mp.sqrt(beta)
    t = arith.tau(400)
    lhs = mp.fsum(t[n] / mp.sqrt(n) * mp.exp(-mp.pi * mp.sqrt(n) * (sa + sb)) * mp.sinh(mp.pi * mp.sqrt(n) * (sa - sb))
                  for n in range(1, 400))
    rhs = mp.fsum(t[n] * ((4 * n + beta) ** mp.mpf(-11.5) - (4 * n + alpha) ** mp.mpf(-11.5)) for n in range(1, 400))
    rhs *= mp.fprod(range(3, 22, 2)) / mp.pi ** 11
    rep = engine.eval_identity(case("TAU-SINH", dict(alpha=alpha, beta=beta), 1e-12, system="TAU"))
    assert abs(rep.lhs.value - float(lhs)) < 1e-12
    # the rational side converges like n^-5.5: bound the omitted part by an integral
    assert abs(rep.rhs.value - float(rhs)) < 1e-9
    assert abs(float(lhs - rhs)) < 1e-9


def test_guinand_with_mpmath():
    s, alpha = 0.5, 2.0
    beta = PI * PI / alpha

    def side(x):
        return mp.fsum(mp.fsum(mp.mpf(d) ** -s for d in range(1, n + 1) if n % d == 0)
                       * mp.mpf(n) ** (s / 2) * mp.besselk(s / 2, 2 * n * x) for n in range(1, 60))

    lhs = mp.sqrt(alpha) * side(alpha) - mp.sqrt(beta) * side(beta)
    rhs = (mp.gamma(s / 2) * mp.zeta(s) * (beta ** ((1 - s) / 2) - alpha ** ((1 - s) / 2)) / 4
           + mp.pi ** (-s - 0.5) * mp.gamma((1 + s) / 2) * mp.zeta(1 + s) * (beta ** ((1 + s) / 2) - alpha ** ((1 + s) / 2)) / 4)
    rep = engine.eval_identity(case("GUINAND", dict(s=s, alpha=alpha), 1e-11, s=s))
    assert abs(rep.lhs.value - float(lhs)) < 1e-11
    assert abs(rep.rhs.value - float(rhs)) < 1e-12


def test_zeta_log_with_mpmath():
    alpha, beta = 4.0, 1.5
    sa, sb = mp.sqrt(alpha), mp.sqrt(beta)
    c = mp.pi / mp.sqrt(2)
    lhs = mp.sqrt(2) * mp.nsum(lambda n: mp.exp(-c * n * (sa + sb)) * mp.sinh(c * n * (sa - sb)) / n, [1, mp.inf])
    lhs += mp.pi / 2 * (sa - sb)
    rhs = (mp.nsum(lambda n: mp.log((2 * n * n + alpha) / (2 * n * n + beta)), [1, mp.inf]) / mp.sqrt(2)
           + mp.log(alpha / beta) / (2 * mp.sqrt(2)))
    rep = engine.eval_identity(case("ZETA-LOG", dict(alpha=alpha, beta=beta), 1e-10))
    assert abs(rep.lhs.value - float(lhs)) < 1e-10
    assert abs(rep.rhs.value - float(rhs)) < 1e-10


def test_watson_eq4_with_mpmath():
    nu, z = 1.7, 1.3
    lhs = mp.gamma(nu) / 2 + 2 * mp.nsum(lambda n: (n * z / 2) ** nu * mp.besselk(nu, n * z), [1, mp.inf])
    scale = mp.sqrt(mp.pi) * mp.gamma(nu + 0.5) * mp.mpf(z) ** (2 * nu)
    rhs = scale * (mp.mpf(z) ** (-2 * nu - 1)
                   + 2 * mp.nsum(lambda n: (z * z + 4 * n * n * mp.pi ** 2) ** (-nu - 0.5), [1, mp.inf]))
    assert abs(float(lhs - rhs)) < 1e-12
    rep = engine.eval_identity(case("WATSON-EQ4", dict(nu=nu, z=z), 1e-10))
    assert abs(rep.lhs.value - float(lhs)) < 1e-10
    assert abs(rep.rhs.value - float(rhs)) < 1e-10


def test_tau_exp_relative_tolerance():
    rep = engine.eval_identity(case("TAU-EXP", dict(s=5.0), 1e-7, system="TAU"))
    assert rep.passed
    assert rep.notes == "relative tolerance 1e-6"
    assert rep.abs_diff <= 1e-6 * abs(rep.lhs.value) + rep.lhs.abs_error + rep.rhs.abs_error


def test_identity_hypothesis_violations():
    with pytest.raises(DomainError, match="nu > -1"):
        engine.eval_identity(case("T1", dict(nu=-1.2, c=1.0, r=1.0), system="TAU"))
    with pytest.raises(DomainError, match="sqrt\\(beta\\) > 0"):
        engine.eval_identity(case("ELLIPTIC", dict(alpha=2.0, beta=-1.0)))
    with pytest.raises(DomainError, match="c > 0 and r > 0"):
        engine.eval_identity(case("RK-K", dict(nu=0.5, c=0.0, r=1.0), system="RK", k=2))
    with pytest.raises(DomainError, match="s >= 0"):
        engine.eval_identity(case("GUINAND", dict(s=-1.0, alpha=2.0), s=-1.0))
    with pytest.raises(DomainError, match="unknown identity"):
        engine.eval_identity(case("NOPE", {}))
    with pytest.raises(DomainError, match="tol"):
        engine.eval_identity(case("WATSON-K0", dict(beta=1.0), tol=0.0))


def test_catalog_listing():
    ids = engine.IDENTITY_IDS
    assert len(ids) == 23
    assert len(set(ids)) == 23
    for want in ("T1", "RK-K", "GUINAND", "T2", "COR-K-TRANSFORM", "TAU-EXP", "ZETA-LOG", "WATSON-K0"):
        assert want in ids


# ----------------------------------------------------------------- run_suite

def test_run_suite_all_pass():
    reports = engine.run_suite("*", 1, seed=0, tol=1e-7)
    assert len(reports) == sum(len(e.variants) for e in engine.catalog_entries())
    assert [(r.identity_id, r.params, r.notes) for r in reports if not r.passed] == []


def test_run_suite_tau_glob():
    reports = engine.run_suite("TAU-*", 5, seed=1, tol=1e-8)
    # four tau identities: TAU-K, TAU-2F1, TAU-SINH, TAU-EXP
    assert len(reports) == 20
    assert {r.identity_id for r in reports} == {"TAU-K", "TAU-2F1", "TAU-SINH", "TAU-EXP"}
    assert all(r.passed for r in reports)


def test_run_suite_no_match():
    assert engine.run_suite("NOPE", 3) == []


def test_run_suite_deterministic_across_threads():
    a = engine.run_suite("*", 1, seed=3, tol=1e-7, threads=1)
    b = engine.run_suite("*", 1, seed=3, tol=1e-7, threads=4)
    dump = lambda reps: "\n".join(json.dumps(r.to_dict(False), sort_keys=True) for r in reps)
    assert dump(a) == dump(b)


def test_run_suite_order_is_catalog_then_draw():
    reports = engine.run_suite("RK-K", 2, seed=5)
    assert [r.params["k"] for r in reports] == [2, 2, 4, 4]


def test_failures_are_reported_not_thrown():
    reports = engine.run_suite("RK-K", 1, seed=0, tol=1e-30)
    assert reports and not any(r.passed for r in reports)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["RK-K", "TAU-K", "IDEAL-K", "CHI-ODD-K", "WATSON-K0", "ZETA-2F1", "CHI-EVEN-LOG",
                        "TAU-2F1", "ELLIPTIC", "GUINAND"]),
       st.integers(0, 10 ** 6))
def test_dual_side_agreement_property(identity_id, seed):
    reports = engine.run_suite(identity_id, 1, seed=seed, tol=1e-7, threads=1)
    assert all(r.passed for r in reports), [(r.params, r.abs_diff, r.notes) for r in reports if not r.passed]


# ------------------------------------------------------ independence audit

@pytest.mark.parametrize("identity_id,params,variant", [
    ("RK-K", dict(nu=0.7, c=0.8, r=1.1), dict(system="RK", k=2)),
    ("T2", dict(nu=0.5, alpha=3.0, beta=1.0), dict(system="TAU")),
    ("T1", dict(nu=0.4, c=0.9, r=0.7), dict(system="IDEAL", D=4)),
])
def test_sides_are_independent(monkeypatch, identity_id, params, variant):
    base = engine.eval_identity(case(identity_id, params, 1e-8, **variant))
    real = engine.sum_series
    calls = []

    def tightened_first(term, start, tail, tol, **kw):
        calls.append(tol)
        if len(calls) == 1:
            tol = tol / 1000
        return real(term, start, tail, tol, **kw)

    monkeypatch.setattr(engine, "sum_series", tightened_first)
    pert = engine.eval_identity(case(identity_id, params, 1e-8, **variant))
    assert len(calls) >= 2
    assert pert.lhs.value != base.lhs.value or pert.lhs_terms != base.lhs_terms
    assert pert.rhs.value == base.rhs.value
    assert pert.rhs_terms == base.rhs_terms


# ------------------------------------------------------- monotone refinement

@pytest.mark.parametrize("identity_id,params,variant", [
    ("RK-K", dict(nu=1.3, c=0.5, r=0.6), dict(system="RK", k=4)),
    ("T2", dict(nu=1.8, alpha=2.5, beta=1.0), dict(system="IDEAL", D=4)),
    ("CHI-EVEN-2F1", dict(nu=0.4, alpha=4.0, beta=1.2), dict(system="CHI-EVEN", q=5)),
    ("WATSON-EQ4", dict(nu=1.2, z=0.7), {}),
])
def test_monotone_refinement(identity_id, params, variant):
    prev = engine.eval_identity(case(identity_id, params, 1e-4, **variant))
    for tol in (1e-6, 1e-8, 1e-10):
        cur = engine.eval_identity(case(identity_id, params, tol, **variant))
        assert cur.lhs_terms >= prev.lhs_terms and cur.rhs_terms >= prev.rhs_terms
        assert cur.abs_diff <= prev.abs_diff + prev.lhs_tail + prev.rhs_tail + 1e-13
        prev = cur


# --------------------------------------------------------------- limit chains

@pytest.mark.parametrize("system,params,nu", [("TAU", {}, 0.5), ("CHI-ODD", {"q": 4}, 0.2), ("RK", {"k": 2}, 1.8)])
def test_t2_limit(system, params, nu):
    out = engine.t2_limit_check(system, nu=nu, **params)
    assert out["order"] >= 1
    assert abs(out["extrapolant"] - out["target"]) < 1e-6


def test_limitnu():
    out = engine.limitnu_check(3.0, 1.0)
    assert out["order"] >= 1
    assert abs(out["extrapolant"] - out["target"]) < 1e-9


def test_limitnu_target_with_mpmath():
    S = mp.sqrt(3) + 1
    f = lambda nu: (mp.gamma(nu + 1.5) / (mp.sqrt(mp.pi) * mp.gamma(nu + 2)) * S ** (nu + 1) / 2 ** (2 * nu + 3)
                    * mp.zeta(2 * nu + 3) - 1 / (4 * (nu + 1) * S ** (nu + 1)))
    lim = mp.limit(f, -1)
    assert abs(float(lim) - engine.limitnu_check(3.0, 1.0)["target"]) < 1e-12


def test_elliptic_to_watson_k0():
    out = engine.elliptic_limit_check()
    assert out["order"] >= 1
    assert abs(out["extrapolant"] - out["target"]) < 1e-8


def test_richardson_on_known_sequence():
    vals = [1 + 0.3 * h ** 2 for h in (0.1, 0.05, 0.025)]
    order, extrap = engine._richardson(vals, 2.0)
    assert order == pytest.approx(2.0, abs=1e-6)
    assert extrap == pytest.approx(1.0, abs=1e-12)
