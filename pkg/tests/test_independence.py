import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from artin_indep import config
from artin_indep.dseries import (DomainError, TruncatedSeries, euler_expand, evaluate,
                                 zeta_series)
from artin_indep.exactnum import CycNum, LogPoly, euler_phi
from artin_indep.galois import builtin_context, virtual_sum
from artin_indep.independence import (INDEPENDENT, UNDETERMINED, DerivativeMatrix,
                                      DuplicateCharacterError, build_matrix, decay_probe,
                                      exact_rank, float_rank, minor_float_determinant,
                                      monomial_exponents, residual_probe, resolve_rows,
                                      symbolic_determinant, verify_algebraic_independence,
                                      verify_formalism, verify_theorem7)


def c(x, level=2):
    return LogPoly.constant(CycNum.rational(level, x))


def L(p, level=2):
    return LogPoly.symbol(p, level)


def lseries(name, i, N, mode="exact"):
    ctx = builtin_context(name)
    return euler_expand(ctx, ctx.irreducible(i), N, mode)


GRID = [2 + 48 * i / 23 for i in range(24)]


# ---------------------------------------------------------------------------
# matrices

def test_build_matrix_examples():
    M = build_matrix([zeta_series(10)], 1, [1, 2])
    assert M.entries == [[c(1), LogPoly()], [c(1), -L(2)]]
    assert M.columns == [(1, 0), (1, 1)]
    chi3 = lseries("cyclotomic:3", 1, 10)
    lvl = chi3[1].level
    z = euler_expand(builtin_context("cyclotomic:3"),
                     builtin_context("cyclotomic:3").irreducible(0), 10)
    M = build_matrix([z, chi3], 0, "list:1,2")
    assert M.entries == [[c(1, lvl), c(1, lvl)], [c(1, lvl), c(-1, lvl)]]
    M = build_matrix([lseries("cyclotomic:4", 1, 10)], 0, [1])
    assert M.shape == (1, 1)


def test_build_matrix_errors():
    with pytest.raises(ValueError):
        build_matrix([], 0)
    with pytest.raises(ValueError):
        build_matrix([zeta_series(10), zeta_series(20)], 0)
    with pytest.raises(ValueError):
        resolve_rows("list:0,3", 10)
    with pytest.raises(ValueError):
        resolve_rows("odd", 10)


def test_row_policies():
    assert resolve_rows("prime-powers", 10) == [1, 2, 3, 4, 5, 7, 8, 9]
    assert resolve_rows("all", 4) == [1, 2, 3, 4]
    assert resolve_rows([3, 1, 3], 4) == [1, 3]


def test_matrix_entries_recomputable():
    s = lseries("s3_x3_minus_2", 2, 100)
    M = build_matrix([s], 2, "all")
    for n in (1, 6, 25, 49, 97):
        for k in range(3):
            want = s[n].evaluate() * (-math.log(n)) ** k
            assert abs(M.entry(n, (1, k)).evaluate() - want) < 1e-9


# ---------------------------------------------------------------------------
# rank

def test_exact_rank_examples():
    cert = exact_rank(DerivativeMatrix.from_rows([[c(1), c(1)], [c(1), c(-1)]]))
    assert cert.rank == 2 and cert.witness_rows == [1, 2]
    assert cert.specialized_determinant == CycNum.rational(2, -2)
    cert = exact_rank(DerivativeMatrix.from_rows([[c(1), LogPoly()], [c(1), -L(2)]]))
    assert cert.rank == 2 and cert.determinant == -L(2)
    dup = DerivativeMatrix.from_rows([[c(1), L(3), L(3)], [c(2), L(2), L(2)],
                                      [c(5), L(5), L(5)]])
    assert exact_rank(dup).rank <= 2


def test_symbolic_determinant_matches_cofactor_expansion():
    A = [[c(1), L(2), L(3)], [c(2), L(2) * L(3), c(1)], [L(5), c(3), L(2) + L(3)]]

    def det3(m):
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))

    det, _ = symbolic_determinant(A)
    assert det == det3(A)


def test_float_rank_examples():
    assert float_rank(DerivativeMatrix.from_rows([[1, 1], [1, -1]], mode="float")) == 2
    assert float_rank(DerivativeMatrix.from_rows([[1, 0], [1, -math.log(2)]], mode="float")) == 2
    rng = np.random.default_rng(7)
    A = rng.standard_normal((10, 2))
    A = np.column_stack([A, A[:, 0] + A[:, 1]])
    assert float_rank(DerivativeMatrix.from_rows(A.tolist(), mode="float")) == 2
    with pytest.raises(ValueError):
        float_rank(DerivativeMatrix.from_rows([[1]], mode="float"), 0)


def test_exact_rank_rejects_float():
    with pytest.raises(ValueError):
        exact_rank(DerivativeMatrix.from_rows([[1.0]], mode="float"))


@pytest.mark.parametrize("name", ["cyclotomic:3", "cyclotomic:4", "cyclotomic:5", "quadratic:-4",
                                  "quadratic:-3", "cyclotomic:8", "s3_x3_minus_2"])
@pytest.mark.parametrize("m", [0, 1, 2])
def test_exact_and_float_rank_agree(name, m):
    ctx = builtin_context(name)
    if ctx.h * (m + 1) > 12:
        pytest.skip("outside the r(m+1) <= 12 range")
    series = [euler_expand(ctx, chi, 200) for chi in ctx.irreducibles()]
    M = build_matrix(series, m)
    cert = exact_rank(M)
    assert cert.rank == float_rank(M, 1e-8) == ctx.h * (m + 1)
    assert minor_float_determinant(M, cert.witness_rows) > config.WITNESS_FLOAT_FLOOR


# ---------------------------------------------------------------------------
# rank-certificate verifier

def test_theorem7_examples():
    r = verify_theorem7(builtin_context("cyclotomic:3"), None, 2, 200)
    assert r.verdict == INDEPENDENT and r.certified_rank == 6 and r.float_rank == 6
    r = verify_theorem7(builtin_context("cyclotomic:4"), None, 0, 50)
    assert r.verdict == INDEPENDENT and r.certified_rank == 2 and len(r.witness_rows) == 2
    r = verify_theorem7(builtin_context("s3_x3_minus_2"), None, 1, 200)
    assert r.verdict == INDEPENDENT and r.certified_rank == 6 and r.float_rank == 6


def test_theorem7_float_mode():
    r = verify_theorem7(builtin_context("cyclotomic:5"), None, 1, 200, mode="float")
    assert r.verdict == INDEPENDENT and r.certified_rank == 8


def test_theorem7_insufficient_data():
    r = verify_theorem7(builtin_context("cyclotomic:4"), None, 0, 1)
    assert r.verdict == UNDETERMINED and r.certified_rank == 1


def test_theorem7_report_fields():
    doc = verify_theorem7(builtin_context("quadratic:-4"), None, 1, 100).to_json()
    for key in ("scenario", "verdict", "expected_rank", "certified_rank", "witness_rows",
                "equivalence_witnesses", "mode", "bounds", "timing_ms"):
        assert key in doc
    assert "symbol_independence_note" in doc
    assert all(set(w) == {"pair", "p", "j"} for w in doc["equivalence_witnesses"])
    doc0 = verify_theorem7(builtin_context("quadratic:-4"), None, 0, 100).to_json()
    assert "symbol_independence_note" not in doc0
    json.dumps(doc)


def test_witnesses_avoid_ramified_primes():
    for name in ("cyclotomic:12", "s3_x3_minus_2"):
        ctx = builtin_context(name)
        r = verify_theorem7(ctx, None, 0, 200)
        assert not r.missing_witnesses
        assert all(w["p"] not in ctx.ramified for w in r.equivalence_witnesses)
        assert len(r.equivalence_witnesses) == (ctx.h + 1) * ctx.h // 2


def test_duplicate_characters_rejected():
    ctx = builtin_context("cyclotomic:5")
    with pytest.raises(DuplicateCharacterError, match="distinct characters"):
        verify_theorem7(ctx, [ctx.irreducible(1), ctx.irreducible(1)], 0, 50)
    with pytest.raises(ValueError):
        verify_theorem7(ctx, [virtual_sum(ctx, [0, 0, 0, 0])], 0, 50)


@given(st.lists(st.integers(0, 2), min_size=3, max_size=3),
       st.lists(st.integers(0, 2), min_size=3, max_size=3))
def test_duplicate_rejection_exactly_when_values_equal(a, b):
    ctx = builtin_context("s3_x3_minus_2")
    if not any(a) or not any(b):
        return
    x, y = virtual_sum(ctx, a), virtual_sum(ctx, b)
    if x.values == y.values:
        with pytest.raises(DuplicateCharacterError):
            verify_theorem7(ctx, [x, y], 0, 30)
    else:
        verify_theorem7(ctx, [x, y], 0, 30)


@pytest.mark.parametrize("name", ["cyclotomic:3", "quadratic:-4", "s3_x3_minus_2"])
def test_row_policy_invariance(name):
    ctx = builtin_context(name)
    a = verify_theorem7(ctx, None, 1, 60, row_policy="prime-powers")
    b = verify_theorem7(ctx, None, 1, 60, row_policy="all")
    assert a.verdict == INDEPENDENT and b.verdict == INDEPENDENT
    assert b.certified_rank >= a.certified_rank


def scaled(s: TruncatedSeries, k) -> TruncatedSeries:
    return TruncatedSeries(s.coeffs.scale(k), s.epsilon, s.C * abs(k.to_complex()), s.label)


@given(st.sampled_from(["cyclotomic:5", "quadratic:-4", "s3_x3_minus_2"]),
       st.integers(0, 1), st.data())
def test_scaling_invariance(name, m, data):
    ctx = builtin_context(name)
    series = [euler_expand(ctx, chi, 60) for chi in ctx.irreducibles()]
    j = data.draw(st.integers(0, len(series) - 1))
    d = euler_phi(ctx.level)
    coords = data.draw(st.lists(st.integers(-3, 3), min_size=d, max_size=d)
                       .filter(lambda xs: any(xs)))
    k = CycNum(ctx.level, coords)
    base = exact_rank(build_matrix(series, m)).rank
    series[j] = scaled(series[j], k)
    assert exact_rank(build_matrix(series, m)).rank == base


def test_algebraic_examples():
    r = verify_algebraic_independence(builtin_context("quadratic:-4"), 2, 0, 200)
    assert r.verdict == INDEPENDENT and r.certified_rank == r.expected_rank == 5
    assert len(monomial_exponents(2, 2)) == 5
    assert len(monomial_exponents(2, 3)) == 9


def test_algebraic_degree_one_is_theorem7():
    ctx = builtin_context("cyclotomic:5")
    a = verify_algebraic_independence(ctx, 1, 1, 100).to_json(timing=False)
    b = verify_theorem7(ctx, None, 1, 100).to_json(timing=False)
    assert json.dumps(a) == json.dumps(b)


def test_algebraic_guard():
    with pytest.raises(ValueError, match="monomials"):
        verify_algebraic_independence(builtin_context("cyclotomic:7"), 3, 0, 50)
    with pytest.raises(ValueError):
        verify_algebraic_independence(builtin_context("cyclotomic:3"), 0)


def test_monomial_order():
    assert monomial_exponents(2, 2) == [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


# ---------------------------------------------------------------------------
# formalism, residual, decay

def test_formalism_reports():
    r = verify_formalism(builtin_context("cyclotomic:4"), [(1, 1), (2, 1)], 300)
    assert r.verdict == "identical" and r.restricted_to_coprime == []
    r = verify_formalism(builtin_context("s3_x3_minus_2"), [(1, 0, 1)], 300)
    assert r.verdict == "identical" and r.restricted_to_coprime == [2, 3]
    with pytest.raises(ValueError):
        verify_formalism(builtin_context("cyclotomic:4"), [(1, -1)], 10)
    with pytest.raises(ValueError):
        verify_formalism(builtin_context("cyclotomic:4"), [(0, 0)], 10)


def test_residual_examples():
    ctx = builtin_context("cyclotomic:4")
    r = residual_probe(ctx, None, 0, [[[0]], [[0]]], [2.0, 3.0])
    assert r.verdict == "zero" and all(p["abs"] <= p["bound"] for p in r.points)
    r = residual_probe(ctx, None, 0, [[[1]], [[-1]]], [2.0])
    assert r.verdict == "nonzero-exhibited" and r.witness_sigma == 2.0
    assert r.points[0]["abs"] - r.points[0]["bound"] > 0.5
    r = residual_probe(ctx, None, 0, [[["-2", "1"]], [[0]]], [2.0])
    assert r.verdict == "zero-on-grid-nonzero-by-certificate"
    with pytest.raises(DomainError):
        residual_probe(ctx, None, 0, [[[1]], [[0]]], [1.0])
    with pytest.raises(ValueError):
        residual_probe(ctx, None, 1, [[[1]], [[0]]], [2.0])


def test_decay_examples():
    r = decay_probe(lambda s: s**3, GRID)
    assert r.classification == "consistent-with-B_eps" and not r.in_V
    assert math.isclose(math.exp(-20) * 20**3, 1.65e-5, rel_tol=0.01)
    assert decay_probe(lambda s: math.exp(-2 * s), GRID).classification == "consistent-with-V_eps"
    z = zeta_series(1000, "float")
    vals = [evaluate(z, s).value.real for s in GRID]
    assert decay_probe(vals, GRID).classification == "consistent-with-B_eps"


def test_decay_inconclusive_for_exponential_growth():
    assert decay_probe(lambda s: math.exp(3 * s), GRID).classification == "inconclusive"


def test_decay_errors():
    with pytest.raises(ValueError):
        decay_probe(lambda s: 1.0, GRID[:7])
    with pytest.raises(ValueError):
        decay_probe(lambda s: 1.0, list(reversed(GRID)))
    with pytest.raises(ValueError):
        decay_probe(lambda s: 1.0, [2 + i for i in range(10)])
    with pytest.raises(ValueError):
        decay_probe([1.0] * 3, GRID)
