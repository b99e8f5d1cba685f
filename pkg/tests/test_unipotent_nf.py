import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from gldl.dickson import dickson_product_poly, moore_det
from gldl.dl_variety import VarietySpec, enumerate_variety
from gldl.errors import MembershipViolation, NotUnitriangular
from gldl.ff_tower import FieldSpec, make_field
from gldl.linalg_fq import MatFq, coxeter_matrix, enumerate_gl
from gldl.unipotent_nf import (
    RootElt,
    ad_w_inverse,
    companion_invariant,
    companion_matrix,
    composition_law,
    dl_companion,
    in_InU,
    in_u_star,
    normal_form,
    orbit_bijection,
    orbit_equiv,
    ordered_decompose,
    random_InU,
    random_u_star,
    reconstruct,
    rho,
    root_element,
    root_relation_failures,
)

SMALL_FIELDS = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (2, 6)]


def test_memberships(f4):
    I = MatFq.identity(f4, 3)
    assert in_u_star(I) and in_InU(I)
    x12 = root_element(f4, 3, 1, 2, 2)
    assert in_u_star(x12) and not in_InU(x12)
    x23 = root_element(f4, 3, 2, 3, 3)
    assert in_u_star(x23) and in_InU(x23)


def test_not_unitriangular(f4):
    with pytest.raises(NotUnitriangular):
        in_u_star(MatFq.from_rows(f4, [[1, 0], [1, 1]]))
    with pytest.raises(NotUnitriangular):
        in_InU(MatFq.from_rows(f4, [[2, 0], [0, 1]]))


def test_rho_identity_and_membership(f4):
    rng = random.Random(0)
    v = random_u_star(f4, 3, rng)
    assert rho(MatFq.identity(f4, 3), v) == v
    with pytest.raises(MembershipViolation):
        rho(root_element(f4, 3, 1, 2, 1), v)


def test_conjugation_by_coxeter_matches_matrix_product():
    F = make_field(FieldSpec(3, 1, 2))
    rng = random.Random(5)
    for n in (2, 3, 4):
        w = coxeter_matrix(F, n)
        winv = w.transpose()
        assert (w @ winv).is_identity()
        for _ in range(10):
            u = random_InU(F, n, rng)
            assert ad_w_inverse(u) == winv @ u @ w


@pytest.mark.parametrize("n", [3, 4])
def test_rho_on_root_elements(n):
    F = make_field(FieldSpec(2, 1, 3))
    rng = random.Random(n)
    for (i, j), (k, l) in itertools.product(itertools.combinations(range(1, n + 1), 2), repeat=2):
        if i == 1:
            continue
        a, b = rng.randrange(1, F.size), rng.randrange(F.size)
        got = rho(root_element(F, n, i, j, a), root_element(F, n, k, l, b))
        want = (root_element(F, n, i - 1, j - 1, a) @ root_element(F, n, k, l, b)
                @ root_element(F, n, i, j, F.neg(F.frob(a))))
        assert got == want


def test_rho_preserves_u_star():
    rng = random.Random(11)
    for t in range(1000):
        p, m = SMALL_FIELDS[t % len(SMALL_FIELDS)]
        F = make_field(FieldSpec(p, 1, m))
        n = 2 + t % 3
        out = rho(random_InU(F, n, rng), random_u_star(F, n, rng))
        assert in_u_star(out)


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (3, 2), (2, 3)])
def test_root_relations(p, m):
    F = make_field(FieldSpec(p, 1, m))
    rng = random.Random(p + m)
    for n in (2, 3, 4):
        assert root_relation_failures(F, n, rng) == []


def test_ordered_decompose_examples(f4):
    I = MatFq.identity(f4, 4)
    assert ordered_decompose(I) == []
    x = root_element(f4, 4, 2, 4, 3)
    assert ordered_decompose(x) == [RootElt(2, 4, 3)]
    a, b = root_element(f4, 4, 1, 2, 2), root_element(f4, 4, 3, 4, 3)
    assert ordered_decompose(a @ b) == ordered_decompose(b @ a) == [RootElt(1, 2, 2), RootElt(3, 4, 3)]


def test_ordered_decompose_round_trip():
    rng = random.Random(3)
    for t in range(1000):
        p, m = SMALL_FIELDS[t % len(SMALL_FIELDS)]
        F = make_field(FieldSpec(p, 1, m))
        n = 2 + t % 4
        v = random_u_star(F, n, rng)
        roots = ordered_decompose(v)
        assert reconstruct(F, n, roots) == v
        order = [(r.i, r.j) for r in roots]
        assert order == sorted(order)


def test_normal_form_trivial_cases(f4):
    I = MatFq.identity(f4, 3)
    res = normal_form(I)
    assert res.d == (0, 0) and res.steps == 0 and res.transform.is_identity()
    last = MatFq.from_rows(f4, [[1, 0, 2], [0, 1, 3], [0, 0, 1]])
    res = normal_form(last)
    assert res.steps == 0 and res.d == (2, 3) and res.matrix == last


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_normal_form_properties(n):
    rng = random.Random(100 + n)
    for t in range(250):
        p, m = SMALL_FIELDS[t % len(SMALL_FIELDS)]
        F = make_field(FieldSpec(p, 1, m))
        v = random_u_star(F, n, rng)
        u = random_InU(F, n, rng)
        res = normal_form(v)
        assert res.steps <= n * n
        assert all(res.matrix.rows[i][j] == int(i == j) for i in range(n) for j in range(n - 1))
        assert in_InU(res.transform)
        assert rho(res.transform, v) == res.matrix
        assert normal_form(res.matrix).steps == 0
        assert normal_form(rho(u, v)).d == res.d
        assert orbit_equiv(v, rho(u, v))


def test_distinct_last_columns_inequivalent():
    F = make_field(FieldSpec(2, 1, 2))
    reps = []
    for d in itertools.product(range(F.size), repeat=2):
        reps.append(MatFq.from_rows(F, [[1, 0, d[0]], [0, 1, d[1]], [0, 0, 1]]))
    for a, b in itertools.combinations(reps, 2):
        assert not orbit_equiv(a, b)


@pytest.mark.parametrize("p,m,n", [(2, 2, 3), (3, 1, 3), (2, 1, 4)])
def test_composition_is_a_left_action(p, m, n):
    F = make_field(FieldSpec(p, 1, m))
    rep = composition_law(F, n, 60, random.Random(9))
    assert rep.left_action == rep.trials
    assert rep.law == "rho(u1) rho(u2) = rho(u1 u2)"


def test_companion_example(f4):
    x = (1, f4.generator)
    assert companion_matrix(f4, x).rows == ((0, 1), (1, 0))
    f, dv = dl_companion(f4, x)
    assert dv.c == (1, 0)
    assert dv.c == dickson_product_poly(f4, x).coeffs[:2]
    assert in_u_star(f)


def test_companion_slot_on_q():
    F = make_field(FieldSpec(2, 1, 3))
    for x in enumerate_variety(VarietySpec("Q", 3, FieldSpec(2)), 3):
        _, dv = dl_companion(F, x)
        assert dv.c[0] == 1


@pytest.mark.parametrize("p,m,n", [(2, 2, 2), (2, 3, 2), (3, 2, 2), (2, 2, 3), (3, 1, 3), (3, 2, 3)])
def test_companion_extraction_matches_oracle(p, m, n):
    F = make_field(FieldSpec(p, 1, m))
    for x in itertools.product(range(F.size), repeat=n):
        if moore_det(F, x):
            _, dv = dl_companion(F, x)
            assert dv.c == dickson_product_poly(F, x).coeffs[:n]


def test_companion_is_gl_invariant_on_qprime(f4):
    group = list(enumerate_gl(2, f4))
    for x in enumerate_variety(VarietySpec("Qprime", 2, FieldSpec(2)), 2):
        assert companion_invariant(f4, x, group)


def test_f_lands_in_u_star_exactly_on_the_signed_hypersurface():
    # q = 3, n = 2: (-1)^(n-1) e^(q-1) = 1 is the condition for unitriangularity
    F = make_field(FieldSpec(3, 1, 2))
    signed = VarietySpec("Qprime", 2, FieldSpec(3), sign_variant=True)
    for x in itertools.product(range(F.size), repeat=2):
        e = moore_det(F, x)
        if not e:
            continue
        f, _ = dl_companion(F, x)
        try:
            in_u_star(f)
            unip = True
        except NotUnitriangular:
            unip = False
        assert unip == signed.contains_e(F, e)


@pytest.mark.parametrize("p,m,n,sv", [(2, 2, 2, False), (2, 3, 3, False), (3, 2, 2, True), (3, 4, 2, True)])
def test_orbits_match_normal_form_classes(p, m, n, sv):
    F = make_field(FieldSpec(p, 1, m))
    pts = enumerate_variety(VarietySpec("Qprime", n, FieldSpec(p), sv), m)
    rep = orbit_bijection(F, pts, list(enumerate_gl(n, F)))
    assert rep.passed and rep.points == len(pts)


def test_orbit_bijection_with_several_orbits():
    F = make_field(FieldSpec(2, 1, 6))
    pts = enumerate_variety(VarietySpec("Qprime", 2, FieldSpec(2)), 6)
    rep = orbit_bijection(F, pts, list(enumerate_gl(2, F)))
    assert rep.passed and rep.orbits == 13


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([3, 4]), st.sampled_from(SMALL_FIELDS))
def test_normal_form_is_idempotent(seed, n, field):
    F = make_field(FieldSpec(field[0], 1, field[1]))
    v = random_u_star(F, n, random.Random(seed))
    res = normal_form(v)
    assert normal_form(res.matrix).matrix == res.matrix
