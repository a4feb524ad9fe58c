import csv
import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from d4fields.analytic import (
    AnalyticConfig,
    ClassGroupRecord,
    delta_of,
    ev_split_count,
    ingest_class_groups,
    thresholds,
    torsion_exponent,
)
from d4fields.arith import fundamental_discriminant, is_squarefree
from d4fields.errors import DomainError, IngestError
from d4fields.frobenius import scan_primes, write_frobenius_csv
from d4fields.normcond import phi
from d4fields.quartic import BiquadraticContext, build_field

HEADER = "a,b,g,h,disc_exact,invariant_factors,provenance\n"


def mp_reference(eps0, C0, C1, C5, q_max):
    """Same formulas evaluated in 50-digit arithmetic, kappa1 directly rather than via logs."""
    with mpmath.workdps(50):
        eps0, C0, C1, C5 = map(mpmath.mpf, (eps0, C0, C1, C5))
        d = eps0 / (42 + 4 * eps0)
        C6 = 21760 / C5
        k1 = 40 * C6 ** (1 / d) * d ** (-2 / d)
        k2 = max(4 / d, 8 / (C0 * d)) + 4
        k3 = (480 * C1) ** (mpmath.mpf(1) / 5) * max(2 * q_max, C6 ** (mpmath.mpf(1) / 4) / mpmath.sqrt(d))
        T0 = mpmath.exp(C0 / d) / q_max - 3
        return {"delta": d, "log_kappa1": mpmath.log(k1), "kappa2": k2, "kappa3": k3, "T0": T0, "C6": C6}


def close12(x, ref):
    return abs(mpmath.mpf(x) - ref) <= 1e-12 * abs(ref)


def test_delta_example():
    assert delta_of(0.1) == pytest.approx(0.1 / 42.4)
    assert round(delta_of(0.1), 7) == 0.0023585


def test_default_config_passes_beta_rule():
    cfg = AnalyticConfig()
    assert cfg.delta < 1 - cfg.beta_max


def test_thresholds_match_reference_random_configs():
    rng = random.Random(11)
    pairs = [(a, b) for a in range(-15, 16) for b in range(-15, 16)
             if a != b and a not in (0, 1) and b not in (0, 1) and is_squarefree(a) and is_squarefree(b)]
    for _ in range(100):
        eps0 = rng.uniform(0.005, 0.2499)
        C0, C1, C5 = (10 ** rng.uniform(-1, 1) for _ in range(3))
        ctx = BiquadraticContext(*rng.choice(pairs))
        rep = thresholds(AnalyticConfig(eps0, C0, C1, C5), ctx)
        ref = mp_reference(eps0, C0, C1, C5, ctx.q_max)
        for key in ("delta", "log_kappa1", "kappa2", "kappa3", "C6"):
            assert close12(getattr(rep, key), ref[key]), key
        if math.isfinite(rep.T0):
            assert close12(rep.T0, ref["T0"])
        else:
            assert ref["T0"] > 1e308


def test_q_max_cross_module():
    rng = random.Random(5)
    sqf = [c for c in range(-200, 201) if c not in (0, 1) and is_squarefree(c)]
    for _ in range(100):
        a, b = rng.sample(sqf, 2)
        ctx = BiquadraticContext(a, b)
        expected = max(abs(fundamental_discriminant(c)) for c in (a, b, ctx.c3))
        assert thresholds(AnalyticConfig(), ctx).q_max == expected


def test_example_report_two_seven():
    rep = thresholds(AnalyticConfig(), BiquadraticContext(2, 7))
    assert rep.q_max == 56
    assert rep.kappa1 == math.inf  # reported through log_kappa1
    assert rep.log_kappa1 == pytest.approx(9368.702218702, rel=1e-11)
    assert rep.kappa2 == pytest.approx(3396.0)


@pytest.mark.parametrize(
    "kwargs",
    [dict(eps0=0.0), dict(eps0=0.25), dict(eps0=-0.1), dict(C0=0.0), dict(C5=-1.0), dict(beta_max=1.0),
     dict(eps0=0.2, beta_max=0.996)],
)
def test_invalid_configs_rejected(kwargs):
    with pytest.raises(DomainError):
        AnalyticConfig(**kwargs)


@given(st.floats(0.001, 0.2499), st.floats(0.5, 0.999))
def test_beta_rule(eps0, beta_max):
    if delta_of(eps0) >= 1 - beta_max:
        with pytest.raises(DomainError):
            AnalyticConfig(eps0=eps0, beta_max=beta_max)
    else:
        AnalyticConfig(eps0=eps0, beta_max=beta_max)


def test_x_threshold_and_region():
    rep = thresholds(AnalyticConfig(), BiquadraticContext(2, 7))
    D = 10**20
    expected = rep.log_kappa1 + rep.kappa2 * math.log(rep.kappa3 * math.log(D)) ** 2
    assert rep.log_x_threshold(D) == pytest.approx(expected)
    assert rep.zero_free_boundary(0) == max(1 - 1 / math.log(56 * 3), 1 - rep.delta)
    ts = [0, 1, 10, 1e3, 1e9]
    sigmas = [rep.zero_free_boundary(t) for t in ts]
    assert sigmas == sorted(sigmas)
    with pytest.raises(DomainError):
        rep.log_x_threshold(1)


def test_torsion_targets():
    assert [torsion_exponent(l) for l in range(1, 6)] == [
        Fraction(1, 3), Fraction(5, 12), Fraction(4, 9), Fraction(11, 24), Fraction(7, 15)
    ]


def _csv_recount(path, cutoff):
    with open(path, newline="") as fh:
        return sum(
            1 for row in csv.DictReader(fh)
            if row["admissible"] == "1" and row["class"] == "ID" and int(row["p"]) <= cutoff
        )


def _ev_fields():
    fields = []
    for a, b in ((2, 7), (3, 11), (-1, 5), (2, -1)):
        ctx = BiquadraticContext(a, b)
        triple = phi(a, b)
        ms = [m for m in range(100001, 200000, 2) if is_squarefree(m) and math.gcd(m, a * b) == 1]
        fields += [build_field(ctx, triple, m) for m in ms[:5]]
    return fields


def test_ev_matches_csv_recount(tmp_path):
    fields = _ev_fields()
    assert len(fields) == 20
    for i, K in enumerate(fields):
        rep = ev_split_count(K, 1, 0.16)
        path = tmp_path / f"f{i}.csv"
        write_frobenius_csv(scan_primes(K, rep.cutoff), path)
        assert rep.M == _csv_recount(path, rep.cutoff)
        assert rep.target_exponent == Fraction(1, 3)


def test_ev_small_field_zero():
    K = build_field(BiquadraticContext(2, 7), phi(2, 7), 1)
    rep = ev_split_count(K, 1, 0.1666)
    assert rep.cutoff == pytest.approx(7168**0.1666)
    assert rep.M == 0 and rep.implied_exponent is None


def test_ev_monotone_in_eta():
    K = build_field(BiquadraticContext(2, 7), phi(2, 7), 1000003)
    Ms = [ev_split_count(K, 1, eta).M for eta in (0.05, 0.08, 0.11, 0.14, 0.166)]
    assert Ms == sorted(Ms)


def test_ev_exponent_formula():
    K = build_field(BiquadraticContext(2, 7), phi(2, 7), 1000003)
    rep = ev_split_count(K, 1, 0.166)
    assert rep.M > 0
    D = K.disc_bound
    assert rep.implied_exponent == pytest.approx(math.log(math.sqrt(D) / rep.M) / math.log(D))


@pytest.mark.parametrize("ell, eta", [(1, 1 / 6), (2, 0.09), (1, 0.0), (0, 0.01)])
def test_ev_eta_range(ell, eta):
    K = build_field(BiquadraticContext(2, 7), phi(2, 7), 1)
    with pytest.raises(DomainError):
        ev_split_count(K, ell, eta)


def test_torsion_from_invariant_factors():
    rec = ClassGroupRecord(2, 7, 3, 1, 100, (2, 4), "test")
    assert rec.torsion(2) == 4 and rec.torsion(1) == 1 and rec.torsion(4) == 8
    assert rec.class_number == 8


def test_ingest_report(tmp_path):
    path = tmp_path / "cl.csv"
    path.write_text(HEADER + "2,7,9,3,50000,2;4,external tool 2026-01-01\n2,7,3,1,1792,,external\n")
    report = ingest_class_groups(path)
    assert [r["m"] for r in report] == [3, 1]
    first = report[0]
    assert first["class_number"] == 8
    t2 = next(t for t in first["torsion"] if t["ell"] == 2)
    assert t2["torsion"] == 4 and t2["ratio"] == pytest.approx(math.log(4) / math.log(50000))
    assert t2["target_exponent"] == "5/12"
    assert report[1]["torsion"][0]["torsion"] == 1
    assert report[0]["flags"] == []


def test_ingest_empty(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    assert ingest_class_groups(path) == []
    path.write_text(HEADER)
    assert ingest_class_groups(path) == []


@pytest.mark.parametrize(
    "body",
    [
        "a,b,g,h\n2,7,3,1\n",
        HEADER + "2,7,3,1,1792,4;2,x\n",
        HEADER + "2,7,3,1,1792,2,\n",
        HEADER + "2,7,3,one,1792,2,x\n",
        HEADER + "2,7,3,1,0,2,x\n",
        HEADER + "2,7,4,1,1792,2,x\n",
        HEADER + "2,5,3,1,1792,2,x\n",
        HEADER + "2,7,6,2,1792,2,x\n",
    ],
)
def test_ingest_errors(tmp_path, body):
    path = tmp_path / "bad.csv"
    path.write_text(body)
    with pytest.raises(IngestError):
        ingest_class_groups(path)
