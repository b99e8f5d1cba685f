import itertools

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from gldl.errors import EllEqualsP, TruncationTooSmall
from gldl.presentations import (
    PoincareSeries,
    RecurrenceTrace,
    all_prime_pairs,
    closed_form_series,
    dickson_rank_check,
    inductive_series,
    motivic_presentation,
    poincare_series,
    presentation,
    quillen_presentation,
    root_identity_check,
    sl_presentation,
)

t = sympy.symbols("t")


def _sympy_series(expr, D):
    poly = sympy.series(expr, t, 0, D + 1).removeO()
    return tuple(int(poly.coeff(t, k)) for k in range(D + 1))


def _gens(pres):
    return [(g.name, g.degree, g.kind) for g in pres.generators]


def test_quillen_examples():
    p = quillen_presentation(2, 2, 3)
    assert p.r == 2 and _gens(p) == [("c_2", 4, "poly"), ("e_2", 3, "ext")]
    assert quillen_presentation(1, 2, 7).generators == ()
    p = quillen_presentation(3, 4, 3)
    assert p.r == 1
    assert sorted((g.degree, g.kind) for g in p.generators) == [
        (1, "ext"), (2, "poly"), (3, "ext"), (4, "poly"), (5, "ext"), (6, "poly")]


def test_sl_examples():
    assert _gens(sl_presentation(2, 2, 3)) == _gens(quillen_presentation(2, 2, 3))
    assert _gens(sl_presentation(2, 4, 3)) == [("c_2", 4, "poly"), ("e_2", 3, "ext")]
    assert sl_presentation(1, 4, 3).generators == ()


@pytest.mark.parametrize("q,ell", all_prime_pairs(9, 13))
def test_sl_equals_gl_when_r_at_least_two(q, ell):
    for n in range(1, 6):
        gl, sl = quillen_presentation(n, q, ell), sl_presentation(n, q, ell)
        if gl.r >= 2:
            assert _gens(gl) == _gens(sl)


def test_motivic_example():
    p = motivic_presentation(2, 2, 3)
    assert [(g.name, g.degree, g.weight) for g in p.generators] == [("tau", 0, 1), ("c_2", 4, 2), ("e_2", 3, 2)]
    for g in motivic_presentation(5, 4, 3).generators:
        if g.name.startswith("c_"):
            assert 2 * g.weight == g.degree
    assert _gens(p.forget_weights()) == _gens(quillen_presentation(2, 2, 3))


def test_ell_dividing_q_rejected():
    with pytest.raises(EllEqualsP):
        quillen_presentation(2, 9, 3)


def test_ell_two_is_flagged():
    assert presentation(2, 3, 2).convention_dependent
    assert not presentation(2, 3, 5).convention_dependent


def test_rank_examples():
    assert dickson_rank_check(2, 2).computed == 6
    assert dickson_rank_check(2, 3).computed == 24
    assert dickson_rank_check(3, 2).computed == 168


@pytest.mark.parametrize("n,q", [(n, q) for n in range(1, 6) for q in (2, 3, 4)])
def test_rank_ledger(n, q):
    r = dickson_rank_check(n, q)
    assert r.passed
    assert len(r.polynomial) - 1 == sum(q**n - q**i - 1 for i in range(1, n)) + sum(q**i for i in range(1, n))


def test_rank_polynomial_against_sympy():
    q, n = 2, 3
    expr = sympy.prod([sum(t**k for k in range(q**n - q**i)) for i in range(1, n)])
    expr *= sum(t**k for k in range(1 + sum(q**i for i in range(1, n))))
    coeffs = sympy.Poly(sympy.expand(expr), t).all_coeffs()[::-1]
    assert list(dickson_rank_check(n, q).polynomial) == [int(c) for c in coeffs]


def test_inductive_series_examples():
    assert inductive_series(1, 2, 3, 10).coeffs == (1,) + (0,) * 10
    assert inductive_series(2, 2, 3, 40).coeffs == _sympy_series((1 + t**3) / (1 - t**4), 40)
    want = _sympy_series(sympy.prod([(1 + t ** (2 * j - 1)) / (1 - t ** (2 * j)) for j in (1, 2, 3)]), 40)
    assert inductive_series(3, 4, 3, 40).coeffs == want


@pytest.mark.parametrize("q,ell", [(2, 3), (2, 7), (4, 3), (3, 13), (5, 3), (7, 2), (3, 2)])
def test_recurrence_matches_closed_form(q, ell):
    for n in range(1, 7):
        rec = inductive_series(n, q, ell, 40)
        assert rec == closed_form_series(n, q, ell, 40)
        assert rec == poincare_series(quillen_presentation(n, q, ell), 40)
        assert all(a >= 0 for a in rec.coeffs)


def test_recurrence_trace_shapes():
    trace = RecurrenceTrace()
    inductive_series(4, 2, 3, 40, trace)
    assert len(trace.strata) == 5 and len(trace.groups) == 5
    # H(BG_1) is trivial for r = 2
    assert trace.groups[1] == PoincareSeries.one(40)


def test_truncation_too_small():
    with pytest.raises(TruncationTooSmall):
        inductive_series(6, 2, 3, 5)


def test_root_identity_examples():
    rep = root_identity_check(2, 3)
    assert rep.r == 2 and rep.product == {"X^2": 1, "t^2": 2}
    assert root_identity_check(4, 3).r == 1
    rep = root_identity_check(2, 7)
    assert rep.product == {"X^3": 1, "t^3": 6}


@pytest.mark.parametrize("q,ell", all_prime_pairs(9, 13))
def test_root_identity_all_pairs(q, ell):
    assert root_identity_check(q, ell).to_json()["pass"]


def test_root_identity_against_sympy():
    X, T = sympy.symbols("X T")
    for q, ell in [(2, 7), (3, 13), (5, 3)]:
        r = sympy.n_order(q, ell)
        expr = sympy.expand(sympy.prod([X - q**i * T for i in range(r)]))
        diff = sympy.Poly(expr - (X**r - T**r), X, T, modulus=ell)
        assert diff.is_zero


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=8), st.lists(st.integers(-5, 5), min_size=1, max_size=8))
def test_series_division_inverts_multiplication(a, b):
    D = 12
    A = PoincareSeries.from_poly(D, dict(enumerate(a)))
    B = PoincareSeries.from_poly(D, {0: 1, **{k + 1: v for k, v in enumerate(b)}})
    assert (A * B) / B == A


def test_all_prime_pairs_excludes_characteristic():
    pairs = all_prime_pairs(9, 13)
    assert (2, 3) in pairs and (4, 2) not in pairs and (9, 3) not in pairs and (6, 5) not in pairs
    assert all(q % ell for q, ell in pairs)
    assert len({q for q, _ in pairs}) == len([q for q in range(2, 10) if len(sympy.factorint(q)) == 1])


def test_generators_are_nonnegative_degree():
    for n, (q, ell) in itertools.product(range(1, 5), all_prime_pairs(5, 7)):
        assert all(g.degree > 0 for g in quillen_presentation(n, q, ell).generators)
