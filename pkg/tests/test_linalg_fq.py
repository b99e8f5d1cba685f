import itertools
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from gldl.errors import OrderOverflow, Singular
from gldl.ff_tower import FieldSpec, make_field
from gldl.linalg_fq import (
    MatFq,
    PermWord,
    coxeter_matrix,
    det,
    det_code,
    enumerate_gl,
    enumerate_sl,
    gl_order,
    inverse,
    lang_map,
    parabolic_order,
    sl_order,
    torus_fixed,
)


def test_det_examples(f4):
    w = f4.generator
    assert det(MatFq.identity(f4, 3)).code == 1
    M = MatFq.from_rows(f4, [[1, 1], [w, f4.mul(w, w)]])
    assert det(M).code == 1


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_cycle_permutation_det(n):
    F = make_field(FieldSpec(5))
    assert det_code(F, coxeter_matrix(F, n).rows) == (1 if n % 2 else F.neg(1))


def test_inverse_examples(f4):
    w = f4.generator
    w2 = f4.mul(w, w)
    M = MatFq.from_rows(f4, [[1, 1], [w, w2]])
    assert inverse(M).rows == ((w2, 1), (w, 1))
    assert (M @ inverse(M)).is_identity()
    assert inverse(MatFq.identity(f4, 3)).is_identity()
    D = MatFq.diagonal(f4, [w, w2])
    assert inverse(D) == MatFq.diagonal(f4, [f4.inv(w), f4.inv(w2)])


def test_singular_inverse_raises(f4):
    with pytest.raises(Singular):
        inverse(MatFq.from_rows(f4, [[1, 1], [1, 1]]))


@pytest.mark.parametrize("p,n", [(2, 3), (3, 3), (5, 4), (7, 2)])
def test_det_matches_sympy_over_prime_fields(p, n):
    F = make_field(FieldSpec(p))
    rng = random.Random(p * 10 + n)
    for _ in range(50):
        rows = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
        assert det_code(F, rows) == int(sympy.Matrix(rows).det()) % p


@pytest.mark.parametrize("spec,n", [((2, 1, 3), 3), ((3, 1, 2), 3), ((2, 2, 1), 4), ((5, 1, 1), 4)])
def test_inverse_routes_agree(spec, n):
    F = make_field(FieldSpec(*spec))
    rng = random.Random(7)
    done = 0
    while done < 40:
        M = MatFq.from_rows(F, [[rng.randrange(F.size) for _ in range(n)] for _ in range(n)])
        if not det_code(F, M.rows):
            continue
        inv = inverse(M, method="both")
        assert (M @ inv).is_identity() and (inv @ M).is_identity()
        done += 1


def test_group_orders():
    assert (gl_order(2, 2), sl_order(2, 2)) == (6, 6)
    assert (gl_order(1, 7), sl_order(1, 7)) == (6, 1)
    assert (gl_order(2, 3), sl_order(2, 3)) == (48, 24)


@pytest.mark.parametrize("n,q,count", [(2, 2, 6), (1, 3, 2), (2, 4, 180), (2, 3, 48), (3, 2, 168)])
def test_enumerate_gl_counts(n, q, count):
    p, s = sympy.factorint(q).popitem()
    F = make_field(FieldSpec(p, s))
    mats = list(enumerate_gl(n, F))
    assert len(mats) == count == gl_order(n, q)
    assert len({m.rows for m in mats}) == count
    assert all(det_code(F, m.rows) for m in mats)


def test_enumerate_sl_count():
    F = make_field(FieldSpec(3))
    assert len(list(enumerate_sl(2, F))) == 24


def test_enumerate_gl_overflow():
    with pytest.raises(OrderOverflow):
        list(enumerate_gl(3, make_field(FieldSpec(3)), bound=1000))


def test_parabolic_index_is_gaussian_binomial():
    # [G_3 : P_{1,2}] over F_2 is the number of lines in F_2^3
    assert gl_order(3, 2) // parabolic_order(1, 3, 2) == 7


def test_lang_map_examples(f4):
    w = f4.generator
    assert lang_map(MatFq.identity(f4, 2)).is_identity()
    g = MatFq.diagonal(f4, [w, 1])
    assert lang_map(g) == MatFq.diagonal(f4, [f4.mul(f4.inv(w), f4.frob(w)), 1])
    assert lang_map(g) == MatFq.diagonal(f4, [w, 1])
    for gamma in enumerate_gl(2, f4):
        assert lang_map(gamma).is_identity()
        assert lang_map(gamma @ g) == lang_map(g)


def test_coxeter_matrices(f2):
    assert coxeter_matrix(f2, 2).rows == ((0, 1), (1, 0))
    assert coxeter_matrix(f2, 3).rows == ((0, 0, 1), (1, 0, 0), (0, 1, 0))


def test_permword_parse_and_image():
    w = PermWord.parse(4, "(1,3)(2)")
    assert w.image(1) == 3 and w.image(3) == 1 and w.image(4) == 4
    assert sorted(w.cycle_lengths()) == [1, 1, 2]
    assert PermWord.coxeter(3).cycle_lengths() == [3]


def test_torus_examples():
    assert torus_fixed(PermWord(2, ()), 2).order == 1
    gl = torus_fixed(PermWord.parse(2, "(1,2)"), 2)
    assert gl.order == 3 and gl.consistent and len(gl.generators) == 1
    sl = torus_fixed(PermWord.parse(2, "(1,2)"), 2, "SL")
    assert sl.order == 3 and sl.consistent


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)])
def test_torus_orders_all_cycle_types(n, q):
    seen = set()
    for perm in itertools.permutations(range(1, n + 1)):
        cycles = []
        done: set[int] = set()
        for i in range(1, n + 1):
            if i in done:
                continue
            cyc, j = [i], perm[i - 1]
            done.add(i)
            while j != i:
                cyc.append(j)
                done.add(j)
                j = perm[j - 1]
            cycles.append(tuple(cyc))
        w = PermWord(n, tuple(c for c in cycles if len(c) > 1))
        key = tuple(sorted(w.cycle_lengths()))
        if key in seen:
            continue
        seen.add(key)
        for variant in ("GL", "SL"):
            rep = torus_fixed(w, q, variant)
            assert rep.consistent, rep.to_json()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 8), min_size=9, max_size=9), st.lists(st.integers(0, 8), min_size=9, max_size=9))
def test_det_is_multiplicative(a, b):
    F = make_field(FieldSpec(3, 1, 2))
    A = MatFq.from_rows(F, [a[0:3], a[3:6], a[6:9]])
    B = MatFq.from_rows(F, [b[0:3], b[3:6], b[6:9]])
    assert det_code(F, (A @ B).rows) == F.mul(det_code(F, A.rows), det_code(F, B.rows))
    assert det_code(F, A.frobenius().rows) == F.frob(det_code(F, A.rows))
