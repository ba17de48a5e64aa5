import itertools
import json
import math

import pytest

import oracles
from artin_indep.dseries import (DomainError, e_series, euler_expand, evaluate,
                                 finite_difference_check, series_derivative, series_equal,
                                 series_from_json, series_product, series_to_json, tail_bound,
                                 zeta_series)
from artin_indep.exactnum import CycNum, LogPoly
from artin_indep.galois import builtin_context, virtual_sum

# Catalan's constant, frozen from the alternating-sum oracle with 10^7 terms
CATALAN = 0.915965594177219


def rat(level, x):
    return LogPoly.constant(CycNum.rational(level, x))


def lseries(name, i, N, mode="exact"):
    ctx = builtin_context(name)
    return euler_expand(ctx, ctx.irreducible(i), N, mode)


def test_catalan_oracle_frozen():
    s, err = oracles.catalan_partial(10**5)
    assert abs(s - CATALAN) <= err + 1e-15


def test_trivial_character_gives_zeta():
    for name in ("cyclotomic:5", "quadratic:-3", "s3_x3_minus_2"):
        ctx = builtin_context(name)
        s = euler_expand(ctx, ctx.irreducible(0), 100)
        assert all(v == rat(ctx.level, 1) for v in s.coeffs.values)


def test_regular_character_examples():
    c4 = builtin_context("cyclotomic:4")
    s = euler_expand(c4, virtual_sum(c4, [1, 1]), 50)
    assert s[5] == rat(c4.level, 2)
    s3 = builtin_context("s3_x3_minus_2")
    r = euler_expand(s3, virtual_sum(s3, [1, 1, 2]), 100)
    assert r[31] == rat(s3.level, 6)
    for p in oracles.primes(100):
        if p > 3:
            want = 6 if oracles.cubic_root_count(p) == 3 else 0
            assert r[p] == rat(s3.level, want)


def test_product_examples():
    z = zeta_series(50)
    assert series_product(z, z)[6] == rat(2, 4)
    c4 = lseries("cyclotomic:4", 1, 50)
    assert series_product(c4, c4)[9] == rat(c4[1].level, 3)
    assert series_product(c4, e_series(50, level=c4[1].level)).coeffs.values == c4.coeffs.values


def test_product_rejects_mismatch():
    with pytest.raises(ValueError):
        series_product(zeta_series(10), zeta_series(20))
    with pytest.raises(ValueError):
        series_product(zeta_series(10), zeta_series(10, "float"))
    with pytest.raises(ValueError):
        series_product(series_derivative(zeta_series(10), 1), zeta_series(10))


def test_derivative_examples():
    z = zeta_series(10)
    assert series_derivative(z, 1)[2] == -LogPoly.symbol(2, 2)
    assert series_derivative(z, 0) is z
    c3 = lseries("cyclotomic:3", 1, 10)
    L2 = LogPoly.symbol(2, c3[1].level)
    assert series_derivative(c3, 2)[2] == -(L2 * L2)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_derivative_growth_certificate_holds(k):
    s = series_derivative(lseries("s3_x3_minus_2", 2, 500), k)
    assert s.growth_holds()
    assert s.derivative_order == k


def test_evaluate_examples():
    ev = evaluate(zeta_series(100), 2)
    assert ev.tail_bound == pytest.approx(0.01)
    e = evaluate(e_series(100), 3)
    assert e.value == 1 and e.tail_bound == 0
    with pytest.raises(DomainError):
        evaluate(zeta_series(100), 1.0)
    with pytest.raises(DomainError):
        evaluate(lseries("s3_x3_minus_2", 2, 100), 1.05)


def test_catalan_within_tail_bound():
    ev = evaluate(lseries("cyclotomic:4", 1, 10**5, "float"), 2)
    assert abs(ev.value.real - CATALAN) <= ev.tail_bound + 1e-10


def test_zeta2_within_tail_bound():
    ev = evaluate(zeta_series(10**4, "float"), 2)
    assert abs(ev.value.real - math.pi**2 / 6) <= ev.tail_bound


def test_tail_bound_formula():
    assert tail_bound(2.0, 0.5, 100, 3.0) == pytest.approx(2 * 100**-1.5 / 1.5)


@pytest.mark.parametrize("name,i", [("cyclotomic:4", 1), ("cyclotomic:5", 2),
                                    ("s3_x3_minus_2", 2), ("quadratic:-3", 1)])
def test_interval_consistency_under_doubling(name, i):
    for sigma in (2, 3):
        a = evaluate(lseries(name, i, 2000, "float"), sigma)
        b = evaluate(lseries(name, i, 4000, "float"), sigma)
        assert abs(a.value - b.value) <= a.tail_bound + b.tail_bound


def test_finite_difference_examples():
    for s, sigma in ((zeta_series(2000, "float"), 3.0), (lseries("cyclotomic:4", 1, 2000, "float"),
                                                           2.5)):
        rep = finite_difference_check(s, sigma, 1e-4)
        assert rep.discrepancy < 1e-6
        assert rep.within_bound
    assert finite_difference_check(e_series(100, "float"), 3.0, 1e-4).discrepancy == 0


def test_formalism_products_small():
    for name in ("cyclotomic:3", "cyclotomic:4", "quadratic:-4"):
        ctx = builtin_context(name)
        irr = [euler_expand(ctx, ctx.irreducible(i), 200) for i in range(ctx.h)]
        for vec in itertools.product(range(3), repeat=ctx.h):
            if not 1 <= sum(vec) <= 2:
                continue
            prod = None
            for i, n in enumerate(vec):
                for _ in range(n):
                    prod = irr[i] if prod is None else series_product(prod, irr[i])
            direct = euler_expand(ctx, virtual_sum(ctx, vec), 200)
            assert prod.coeffs.values == direct.coeffs.values


@pytest.mark.parametrize("d", [-4, -3, 5, -7, 8, 12])
def test_quadratic_dedekind_zeta(d):
    ctx = builtin_context(f"quadratic:{d}")
    dz = series_product(euler_expand(ctx, ctx.irreducible(0), 500),
                        euler_expand(ctx, ctx.irreducible(1), 500))
    for n in range(1, 501):
        want = oracles.convolve(lambda m: 1, lambda m: oracles.quadratic_character(d, m), n)
        assert dz[n] == rat(ctx.level, want)


def test_gaussian_dedekind_zeta_against_lattice_points():
    ctx = builtin_context("cyclotomic:4")
    s = euler_expand(ctx, virtual_sum(ctx, [1, 1]), 500)
    for n in range(1, 501):
        assert s[n] == rat(ctx.level, oracles.gaussian_ideal_count(n))


def test_growth_scope():
    assert lseries("cyclotomic:5", 1, 50).growth_scope == "all-n"
    s = lseries("s3_x3_minus_2", 2, 50)
    assert s.growth_scope == "scanned" and s.epsilon > 0
    assert s.growth_holds()


@pytest.mark.parametrize("mode", ["exact", "float"])
def test_series_json_roundtrip(mode):
    s = series_derivative(lseries("cyclotomic:5", 1, 60, mode), 2)
    text = json.dumps(series_to_json(s))
    back = series_from_json(json.loads(text))
    assert series_equal(s, back)
    assert json.dumps(series_to_json(back)) == text


def test_float_serialization_uses_17_digits():
    doc = series_to_json(lseries("cyclotomic:5", 1, 10, "float"))
    re, _ = doc["coefficients"][1]
    assert re == format(float(re), ".17g")
