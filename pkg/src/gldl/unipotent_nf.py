"""Upper unitriangular matrices, the twisted action rho, and last-column normal forms.

Indices in the public API are 1-based, as in ``x_{i,j}(a) = 1 + a e_{i,j}``.
``U*`` is the full upper unitriangular group and ``InU*`` the subgroup whose
first row is trivial. The Coxeter lift ``w`` sends ``e_j`` to ``e_{j+1}``
(cyclically), so ``w^{-1} x_{i,j}(a) w = x_{i-1,j-1}(a)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .dickson import DicksonVector, dickson_cofactor, moore_matrix
from .errors import (
    CompanionMismatch,
    MembershipViolation,
    NonTermination,
    NotUnitriangular,
)
from .ff_tower import FieldCtx
from .linalg_fq import MatFq, coxeter_matrix, inverse


@dataclass(frozen=True)
class RootElt:
    i: int
    j: int
    a: int

    def matrix(self, ctx: FieldCtx, n: int) -> MatFq:
        return root_element(ctx, n, self.i, self.j, self.a)

    def to_json(self, ctx: FieldCtx) -> dict:
        return {"i": self.i, "j": self.j, "a": ctx.coeffs(self.a)}


def root_order(n: int) -> list[tuple[int, int]]:
    """All roots ``(i, j)``, ``i < j``, sorted by ``i`` then ``j``."""
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def root_element(ctx: FieldCtx, n: int, i: int, j: int, a: int) -> MatFq:
    if not 1 <= i < j <= n:
        raise ValueError(f"({i}, {j}) is not a positive root for n = {n}")
    rows = [[int(r == c) for c in range(n)] for r in range(n)]
    rows[i - 1][j - 1] = a
    return MatFq.from_rows(ctx, rows)


def _require_unitriangular(M: MatFq) -> None:
    for r, row in enumerate(M.rows):
        for c, a in enumerate(row):
            if (c < r and a) or (c == r and a != 1):
                raise NotUnitriangular(f"entry ({r + 1}, {c + 1}) breaks unitriangularity")


def in_u_star(M: MatFq) -> bool:
    _require_unitriangular(M)
    return True


def in_InU(M: MatFq) -> bool:
    _require_unitriangular(M)
    return not any(M.rows[0][1:])


def _is_unitriangular(M: MatFq) -> bool:
    try:
        _require_unitriangular(M)
    except NotUnitriangular:
        return False
    return True


def ad_w_inverse(u: MatFq) -> MatFq:
    """``w^{-1} u w``: entry ``(i, j)`` is ``u_{i+1, j+1}`` with indices read mod n."""
    n = u.n
    return MatFq(u.ctx, tuple(tuple(u.rows[(i + 1) % n][(j + 1) % n] for j in range(n)) for i in range(n)))


def rho(u: MatFq, v: MatFq) -> MatFq:
    """``rho(u) v = (w^{-1} u w) v F(u)^{-1}`` for ``u`` in InU* and ``v`` in U*."""
    if not (_is_unitriangular(u) and in_InU(u)):
        raise MembershipViolation("rho needs u in InU*")
    if not _is_unitriangular(v):
        raise MembershipViolation("rho needs v in U*")
    return ad_w_inverse(u) @ v @ inverse(u.frobenius(), method="elimination")


def ordered_decompose(v: MatFq) -> list[RootElt]:
    """Coefficients ``b_{i,j}`` with ``v = prod x_{i,j}(b_{i,j})`` in root order (zeros omitted).

    The leftmost factor is peeled off by the row operation ``row_i -= b row_j``.
    """
    _require_unitriangular(v)
    ctx = v.ctx
    w = [list(r) for r in v.rows]
    out = []
    for i, j in root_order(v.n):
        b = w[i - 1][j - 1]
        if not b:
            continue
        out.append(RootElt(i, j, b))
        nb = ctx.neg(b)
        ri, rj = w[i - 1], w[j - 1]
        for c in range(j - 1, v.n):
            if rj[c]:
                ri[c] = ctx.add(ri[c], ctx.mul(nb, rj[c]))
    return out


def reconstruct(ctx: FieldCtx, n: int, roots: Iterable[RootElt]) -> MatFq:
    M = MatFq.identity(ctx, n)
    for r in roots:
        M = M @ r.matrix(ctx, n)
    return M


@dataclass(frozen=True)
class NormalFormResult:
    d: tuple[int, ...]
    transform: MatFq
    steps: int
    matrix: MatFq

    def to_json(self) -> dict:
        ctx = self.matrix.ctx
        return {
            "d": [ctx.coeffs(a) for a in self.d],
            "steps": self.steps,
            "transform": self.transform.to_json(),
            "matrix": self.matrix.to_json(),
        }


def normal_form(v: MatFq) -> NormalFormResult:
    """Push ``v`` along its rho-orbit until only the last column is nontrivial.

    Each step takes the first root ``(i0, j0)`` in root order with ``j0 < n``
    and a nonzero coefficient ``b`` and applies ``rho(x_{i0+1, j0+1}(-b))``.
    """
    _require_unitriangular(v)
    ctx, n = v.ctx, v.n
    total = MatFq.identity(ctx, n)
    cur = v
    steps = 0
    while True:
        bad = next((r for r in ordered_decompose(cur) if r.j < n), None)
        if bad is None:
            break
        if steps >= n * n:
            raise NonTermination(f"normal form exceeded {n * n} steps")
        # j0 < n and i0 < j0 give i0 + 1 < n
        assert bad.i + 1 < n, f"boundary root ({bad.i}, {bad.j}) reached"
        u = root_element(ctx, n, bad.i + 1, bad.j + 1, ctx.neg(bad.a))
        cur = rho(u, cur)
        total = u @ total
        steps += 1
    d = tuple(cur.rows[i][n - 1] for i in range(n - 1))
    return NormalFormResult(d, total, steps, cur)


def orbit_equiv(v1: MatFq, v2: MatFq) -> bool:
    return normal_form(v1).d == normal_form(v2).d


# -- the map f(x) = w^{-1} x^{-1} F(x) ------------------------------------------------


def companion_matrix(ctx: FieldCtx, x: Sequence[int]) -> MatFq:
    """``M^{-1} F(M)`` for the Moore matrix ``M`` of ``x``."""
    M = moore_matrix(ctx, x)
    return inverse(M, method="elimination") @ M.frobenius()


def expected_companion(dv: DicksonVector) -> MatFq:
    """Subdiagonal ones and last column ``(-c_{n,0}, ..., -c_{n,n-1})``."""
    ctx, n = dv.ctx, dv.n
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = 1
    for i in range(n):
        rows[i][n - 1] = ctx.neg(dv.c[i])
    return MatFq.from_rows(ctx, rows)


def dl_companion(ctx: FieldCtx, x: Sequence[int]) -> tuple[MatFq, DicksonVector]:
    """Return ``f(x) = w^{-1} M^{-1} F(M)`` and the Dickson values read off the companion matrix.

    The companion matrix is compared entrywise against the one built from the
    Moore-minor Dickson values; any difference raises :class:`CompanionMismatch`.
    """
    dv = dickson_cofactor(ctx, x)
    C = companion_matrix(ctx, x)
    E = expected_companion(dv)
    if C != E:
        raise CompanionMismatch("companion matrix disagrees with Dickson values", E, C)
    n = len(x)
    extracted = DicksonVector(n, ctx, dv.e, tuple(ctx.neg(C.rows[i][n - 1]) for i in range(n)))
    f = inverse(coxeter_matrix(ctx, n), method="elimination") @ C
    return f, extracted


def companion_invariant(ctx: FieldCtx, x: Sequence[int], group: Iterable[MatFq]) -> bool:
    """``f(g x) = f(x)`` for every ``g`` in ``group``."""
    f, _ = dl_companion(ctx, x)
    return all(dl_companion(ctx, g.apply(x))[0] == f for g in group)


# -- sampling and empirical checks ---------------------------------------------------------


def random_u_star(ctx: FieldCtx, n: int, rng: random.Random) -> MatFq:
    rows = [[int(r == c) if c <= r else rng.randrange(ctx.size) for c in range(n)] for r in range(n)]
    return MatFq.from_rows(ctx, rows)


def random_InU(ctx: FieldCtx, n: int, rng: random.Random) -> MatFq:
    rows = [[int(r == c) if c <= r or r == 0 else rng.randrange(ctx.size) for c in range(n)] for r in range(n)]
    return MatFq.from_rows(ctx, rows)


def commutator(a: MatFq, b: MatFq) -> MatFq:
    ai = inverse(a, method="elimination")
    bi = inverse(b, method="elimination")
    return a @ b @ ai @ bi


def root_relation_failures(ctx: FieldCtx, n: int, rng: random.Random, samples: int = 3) -> list[dict]:
    """Check additivity and the commutator rule over all index pairs; return failures."""
    failures = []
    nonzero = range(1, ctx.size)
    roots = root_order(n)
    for (i, j) in roots:
        for _ in range(samples):
            a, b = rng.choice(nonzero), rng.choice(nonzero)
            lhs = root_element(ctx, n, i, j, a) @ root_element(ctx, n, i, j, b)
            if lhs != root_element(ctx, n, i, j, ctx.add(a, b)):
                failures.append({"relation": "additive", "root": [i, j]})
        for (k, l) in roots:
            if (i, j) == (k, l):
                continue
            for _ in range(samples):
                a, b = rng.choice(nonzero), rng.choice(nonzero)
                got = commutator(root_element(ctx, n, i, j, a), root_element(ctx, n, k, l, b))
                if j == k:
                    want = root_element(ctx, n, i, l, ctx.mul(a, b))
                elif l == i:
                    want = root_element(ctx, n, k, j, ctx.neg(ctx.mul(a, b)))
                else:
                    want = MatFq.identity(ctx, n)
                if got != want:
                    failures.append({"relation": "commutator", "roots": [[i, j], [k, l]]})
    return failures


@dataclass
class CompositionReport:
    trials: int
    left_action: int
    right_twisted: int

    @property
    def law(self) -> str:
        if self.left_action == self.trials:
            return "rho(u1) rho(u2) = rho(u1 u2)"
        if self.right_twisted == self.trials:
            return "rho(u1) rho(u2) = rho(u2 u1)"
        return "undetermined"

    def to_json(self) -> dict:
        return {"trials": self.trials, "left_action": self.left_action,
                "right_twisted": self.right_twisted, "law": self.law}


def composition_law(ctx: FieldCtx, n: int, trials: int, rng: random.Random) -> CompositionReport:
    """Count how often ``rho(u1)(rho(u2) v)`` equals ``rho(u1 u2) v`` and ``rho(u2 u1) v``."""
    left = right = 0
    for _ in range(trials):
        u1, u2 = random_InU(ctx, n, rng), random_InU(ctx, n, rng)
        v = random_u_star(ctx, n, rng)
        lhs = rho(u1, rho(u2, v))
        left += lhs == rho(u1 @ u2, v)
        right += lhs == rho(u2 @ u1, v)
    return CompositionReport(trials, left, right)


@dataclass
class BijectionReport:
    n: int
    q: int
    m: int
    points: int
    orbits: int
    classes: int
    mismatches: int
    outside_u_star: int

    @property
    def passed(self) -> bool:
        return self.mismatches == 0 and self.outside_u_star == 0 and self.orbits == self.classes

    def to_json(self) -> dict:
        return {"n": self.n, "q": self.q, "m": self.m, "points": self.points, "orbits": self.orbits,
                "classes": self.classes, "mismatches": self.mismatches,
                "outside_u_star": self.outside_u_star, "pass": self.passed}


def orbit_bijection(ctx: FieldCtx, points: Sequence[Sequence[int]], group: Sequence[MatFq]) -> BijectionReport:
    """Compare G-orbits of ``points`` with the normal-form classes of ``f(points)``.

    ``points`` must be closed under ``group``; two points must share an orbit
    exactly when their images under ``f`` share a normal form.
    """
    pts = [tuple(p) for p in points]
    index = {p: k for k, p in enumerate(pts)}
    orbit_of = [-1] * len(pts)
    norb = 0
    for k, p in enumerate(pts):
        if orbit_of[k] >= 0:
            continue
        for g in group:
            orbit_of[index[g.apply(p)]] = norb
        norb += 1
    outside = 0
    classes: dict[tuple[int, ...], set[int]] = {}
    for k, p in enumerate(pts):
        f, _ = dl_companion(ctx, p)
        if not _is_unitriangular(f):
            outside += 1
            continue
        classes.setdefault(normal_form(f).d, set()).add(orbit_of[k])
    mismatches = sum(len(s) - 1 for s in classes.values())
    orbit_classes = len(classes)
    q = len(ctx.base_codes)
    return BijectionReport(len(pts[0]) if pts else 0, q, ctx.m, len(pts), norb, orbit_classes, mismatches, outside)

