import itertools

import numpy as np
import pytest

from gldl.dickson import dickson_product_poly, moore_det
from gldl.dl_variety import (
    VarietySpec,
    all_points,
    check_action,
    enumerate_variety,
    fiber_census,
    fiber_points,
    quotient_map,
    scaling_cover,
    sign_variants_coincide,
    torsor_check,
)
from gldl.errors import ConfigError, DegreeOverflow, LadderExhausted, NotOnVariety
from gldl.ff_tower import FieldSpec, make_field
from gldl.linalg_fq import enumerate_gl, gl_order

F2 = FieldSpec(2)
F3 = FieldSpec(3)


def test_q_has_no_f2_points():
    assert enumerate_variety(VarietySpec("Q", 2, F2), 1) == []


def test_q_over_f4_contains_one_omega(f4):
    assert (1, f4.generator) in enumerate_variety(VarietySpec("Q", 2, F2), 2)


def test_x1_over_f4_has_six_points():
    assert len(enumerate_variety(VarietySpec("X1", 2, F2), 2)) == 6


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (3, 2), (3, 3), (2, 5), (4, 2)])
def test_no_base_field_points(n, q):
    for kind in ("Q", "Qprime"):
        assert enumerate_variety(VarietySpec(kind, n, FieldSpec(q)), 1) == []


@pytest.mark.parametrize("n,q,m", [(2, 2, 2), (2, 2, 3), (2, 3, 2), (3, 2, 2), (2, 2, 4)])
def test_containments(n, q, m):
    qs = set(enumerate_variety(VarietySpec("Q", n, FieldSpec(q)), m))
    qp = set(enumerate_variety(VarietySpec("Qprime", n, FieldSpec(q)), m))
    x1 = set(enumerate_variety(VarietySpec("X1", n, FieldSpec(q)), m))
    assert qs <= qp <= x1
    assert len(x1) == np.prod([q**m - q**j for j in range(n)])


def test_enumeration_matches_scalar_filter():
    spec = VarietySpec("Qprime", 2, F3, sign_variant=True)
    F = spec.field(2)
    want = [x for x in itertools.product(range(F.size), repeat=2) if spec.contains_e(F, moore_det(F, x))]
    assert enumerate_variety(spec, 2) == want


def test_enumeration_bound():
    with pytest.raises(DegreeOverflow):
        all_points(make_field(FieldSpec(2, 1, 4)), 3, bound=1000)


def test_bad_kind():
    with pytest.raises(ConfigError):
        VarietySpec("P", 2, F2)


def test_sl_acts_freely_on_q_over_f4():
    rep = check_action(VarietySpec("Q", 2, F2), 2, "SL")
    assert rep.closed and not rep.violations and rep.free_claimed
    assert rep.scalars_commute
    assert all(gl_order(2, 2) % s == 0 for s in rep.orbit_sizes)


@pytest.mark.parametrize("n,q,m", [(2, 2, 3), (2, 2, 4), (3, 2, 2), (2, 3, 2)])
def test_gl_acts_freely_on_qprime(n, q, m):
    rep = check_action(VarietySpec("Qprime", n, FieldSpec(q)), m, "GL")
    assert rep.closed and not rep.violations
    assert set(rep.orbit_sizes) <= {gl_order(n, q)}


def test_x1_orbits_reported_without_freeness_claim():
    rep = check_action(VarietySpec("X1", 2, F3), 2, "GL")
    assert rep.closed and not rep.free_claimed
    assert sum(rep.orbit_sizes) == rep.count
    assert all(48 % s == 0 for s in rep.orbit_sizes)
    out = rep.to_json()
    assert {"kind", "n", "q", "m", "count", "orbit_sizes", "violations"} <= set(out)


def test_q_not_closed_under_gl_in_odd_characteristic():
    rep = check_action(VarietySpec("Q", 2, F3), 3, "GL", strict=False)
    assert rep.count == 24 and not rep.closed
    sl = check_action(VarietySpec("Q", 2, F3), 3, "SL")
    assert sl.closed and sl.orbit_sizes == [24]


def test_quotient_map_is_gl_invariant(f4):
    pts = enumerate_variety(VarietySpec("Qprime", 2, F2), 2)
    for x in pts:
        for g in enumerate_gl(2, f4):
            assert quotient_map(f4, g.apply(x)) == quotient_map(f4, x)
    assert quotient_map(f4, (1, f4.generator)) == (0,)


def test_quotient_map_rejects_points_off_qprime(f4):
    with pytest.raises(NotOnVariety):
        quotient_map(f4, (1, 0))


def test_fiber_over_zero_has_six_points():
    fc = fiber_census(F2, 2, 1, [0], ladder=8)
    assert fc.stabilized_count == 6 and fc.passed


def test_fiber_over_one_is_nonempty():
    fc = fiber_census(F2, 2, 1, [1], ladder=8)
    assert fc.split_degree is not None and fc.stabilized_count == 6


@pytest.mark.parametrize("target", [0, 1, 2, 3])
def test_fibers_over_f4_targets(target):
    fc = fiber_census(F2, 2, 2, [target], ladder=6)
    assert fc.passed
    # counts vanish off multiples of the splitting degree
    assert all((v != 0) == (k % fc.split_degree == 0) for k, v in fc.counts.items())


def test_fiber_points_are_on_qprime_and_agree_with_brute_force():
    pts = fiber_points(F2, 2, 1, 2, [0])
    F = make_field(FieldSpec(2, 1, 2))
    assert len(pts) == 6
    # over F_2, Q' is just e != 0
    brute = [x for x in itertools.product(range(F.size), repeat=2)
             if moore_det(F, x) and dickson_product_poly(F, x).coeffs[1] == 0]
    assert sorted(pts) == sorted(brute)
    for x in pts:
        assert F.pow(moore_det(F, x), F.q - 1) == 1


def test_fiber_census_q3_with_sign_variant():
    fc = fiber_census(F3, 2, 1, [0], ladder=6, sign_variant=True)
    assert fc.stabilized_count == 48


def test_fiber_ladder_too_short():
    with pytest.raises(LadderExhausted):
        fiber_census(F2, 2, 1, [1], ladder=2)


def test_scaling_cover_n2_q2_m2():
    rep = scaling_cover(VarietySpec("Q", 2, F2), 2, ladder=8)
    assert rep.covered and rep.fibers_ok
    assert len(rep.points) == 6
    for p in rep.points:
        assert p["fiber_size"] == 3
    # y already on Q is covered on the first rung
    F = make_field(FieldSpec(2, 1, 2))
    on_q = {tuple(F.from_coeffs(c) for c in p["y"]) for p in rep.points if p["first_ext"] == 1}
    assert set(enumerate_variety(VarietySpec("Q", 2, F2), 2)) <= on_q


def test_scaling_cover_odd_characteristic():
    rep = scaling_cover(VarietySpec("Q", 2, F3), 2, ladder=8)
    assert rep.covered and rep.fibers_ok
    assert all(p["fiber_size"] == 4 for p in rep.points)


def test_torsor_check_small():
    rep = torsor_check(F2, 2, 2)
    assert rep.passed
    rep = torsor_check(F3, 2, 2, sign_variant=True)
    assert rep.passed


def test_sign_variants():
    # the factor (-1)^(n-1) is invisible in characteristic 2 and for odd n
    assert sign_variants_coincide(F2, 2, 2)
    assert sign_variants_coincide(F3, 3, 1)
    assert not sign_variants_coincide(F3, 2, 2)
