"""The hypersurfaces Q (e_n = 1), Q' (e_n^(q-1) = 1) and X(1) (e_n != 0) over finite fields.

"Over the algebraic closure" is approximated by extension ladders
``F_{q^m} < F_{q^{2m}} < ...``: a question is asked in ``F_{q^{m k}}`` for
``k = 1..M`` and the answers are compared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dickson import (
    batch_act,
    batch_dickson_cofactor,
    batch_moore_det,
    c0_sign,
    dickson_cofactor,
    moore_det,
)
from .errors import (
    ConfigError,
    DegreeOverflow,
    FiberSizeMismatch,
    LadderExhausted,
    NotOnVariety,
    StabilizerViolation,
)
from .ff_tower import DEFAULT_BOUND, FieldCtx, FieldSpec, embedding, make_field
from .linalg_fq import enumerate_gl, enumerate_sl, gl_order, sl_order

KINDS = ("Q", "Qprime", "X1")
DEFAULT_LADDER = 8
BRUTE_FORCE_LIMIT = 1 << 16

Point = tuple[int, ...]


@dataclass(frozen=True)
class VarietySpec:
    kind: str
    n: int
    base: FieldSpec
    sign_variant: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"kind must be one of {KINDS}, not {self.kind!r}")
        if self.n < 1:
            raise ConfigError("n must be positive")
        if self.base.m != 1:
            object.__setattr__(self, "base", self.base.base())

    @property
    def q(self) -> int:
        return self.base.q

    def field(self, m: int) -> FieldCtx:
        return make_field(self.base.extend(m))

    def contains_e(self, ctx: FieldCtx, e: int) -> bool:
        """Membership as a function of the Moore determinant."""
        if self.kind == "X1":
            return e != 0
        if self.kind == "Q":
            return e == 1
        v = ctx.pow(e, ctx.q - 1) if e else 0
        if self.sign_variant and (self.n - 1) % 2:
            v = ctx.neg(v)
        return v == 1

    def mask(self, ctx: FieldCtx, e: np.ndarray) -> np.ndarray:
        if self.kind == "X1":
            return e != 0
        if self.kind == "Q":
            return e == 1
        v = ctx.vpow(e, ctx.q - 1)
        if self.sign_variant and (self.n - 1) % 2:
            v = ctx.vneg(v)
        return (v == 1) & (e != 0)


def all_points(ctx: FieldCtx, n: int, bound: int = DEFAULT_BOUND) -> np.ndarray:
    """All of ``F^n`` as an ``(n, N^n)`` code array, first coordinate varying slowest."""
    total = ctx.size**n
    if total > bound:
        raise DegreeOverflow(f"{ctx.size}^{n} points exceed bound {bound}")
    idx = np.arange(total, dtype=np.int64)
    return np.stack(np.unravel_index(idx, (ctx.size,) * n)).astype(np.int64)


def _moore_dets(ctx: FieldCtx, X: np.ndarray) -> np.ndarray:
    if ctx.has_tables:
        return batch_moore_det(ctx, X)
    return np.array([moore_det(ctx, tuple(col)) for col in X.T], dtype=np.int64)


def variety_array(spec: VarietySpec, m: int, bound: int = DEFAULT_BOUND) -> tuple[FieldCtx, np.ndarray]:
    ctx = spec.field(m)
    X = all_points(ctx, spec.n, bound)
    e = _moore_dets(ctx, X)
    if ctx.has_tables:
        keep = spec.mask(ctx, e)
    else:
        keep = np.array([spec.contains_e(ctx, int(v)) for v in e], dtype=bool)
    return ctx, X[:, keep]


def enumerate_variety(spec: VarietySpec, m: int, bound: int = DEFAULT_BOUND) -> list[Point]:
    """All ``F_{q^m}``-points, in the enumeration order of :func:`all_points`."""
    _, X = variety_array(spec, m, bound)
    return [tuple(int(a) for a in col) for col in X.T]


# -- group actions ---------------------------------------------------------------


@dataclass
class PointOrbitReport:
    kind: str
    n: int
    q: int
    m: int
    group: str
    group_order: int
    count: int
    orbit_sizes: list[int]
    closed: bool
    scalars_commute: bool
    free_claimed: bool
    violations: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        hist: dict[int, int] = {}
        for s in self.orbit_sizes:
            hist[s] = hist.get(s, 0) + 1
        return {
            "kind": self.kind,
            "n": self.n,
            "q": self.q,
            "m": self.m,
            "group": self.group,
            "group_order": self.group_order,
            "count": self.count,
            "orbit_sizes": [[s, c] for s, c in sorted(hist.items())],
            "closed": self.closed,
            "scalars_commute": self.scalars_commute,
            "free_claimed": self.free_claimed,
            "violations": self.violations,
        }


def _point_keys(ctx: FieldCtx, X: np.ndarray) -> np.ndarray:
    keys = np.zeros(X.shape[1], dtype=np.int64)
    for row in X:
        keys = keys * ctx.size + row
    return keys


def scalar_group(spec: VarietySpec, ctx: FieldCtx) -> list[int]:
    """Roots of unity acting by scalars: mu_{q(n)} on Q, mu_{q^n-1} on Q', all units on X(1)."""
    q, n = spec.q, spec.n
    order = {"Q": (q**n - 1) // (q - 1), "Qprime": q**n - 1, "X1": ctx.size - 1}[spec.kind]
    return [a for a in range(1, ctx.size) if ctx.pow(a, order) == 1]


def check_action(spec: VarietySpec, m: int, group: str = "GL", strict: bool = True,
                 bound: int = DEFAULT_BOUND) -> PointOrbitReport:
    """Closure, orbit sizes and (where claimed) freeness of the GL_n(F_q) or SL_n(F_q) action.

    Freeness is claimed for ``(Q, SL)`` and ``(Qprime, GL)``; with ``strict`` a
    nontrivial stabilizer raises :class:`StabilizerViolation`.
    """
    if group not in ("GL", "SL"):
        raise ConfigError(f"group must be GL or SL, not {group!r}")
    ctx, X = variety_array(spec, m, bound)
    n, q = spec.n, spec.q
    elements = list(enumerate_gl(n, ctx) if group == "GL" else enumerate_sl(n, ctx))
    free_claimed = (spec.kind, group) in (("Q", "SL"), ("Qprime", "GL"))
    B = X.shape[1]
    keys = _point_keys(ctx, X)
    order = np.argsort(keys)
    sorted_keys = keys[order]

    parent = np.arange(B)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    closed = True
    violations: list[dict] = []
    for g in elements:
        if B == 0:
            break
        Y = batch_act(ctx, g, X)
        ykeys = _point_keys(ctx, Y)
        pos = np.searchsorted(sorted_keys, ykeys)
        pos = np.minimum(pos, B - 1)
        hit = sorted_keys[pos] == ykeys
        if not hit.all():
            closed = False
            continue
        img = order[pos]
        if not g.is_identity():
            fixed = np.nonzero(img == np.arange(B))[0]
            for i in fixed[:5]:
                violations.append({"g": g.to_json(), "x": [ctx.coeffs(int(a)) for a in X[:, i]]})
        for i, j in enumerate(img):
            ri, rj = find(i), find(int(j))
            if ri != rj:
                parent[ri] = rj
    roots = np.array([find(i) for i in range(B)], dtype=np.int64)
    _, sizes = np.unique(roots, return_counts=True)

    commute = True
    for mu in scalar_group(spec, ctx):
        Xmu = ctx.vmul(X, mu)
        if not np.array_equal(np.sort(_point_keys(ctx, Xmu)), sorted_keys):
            commute = False  # scalar action does not preserve the variety
            break
        for g in elements[: min(len(elements), 8)]:
            if not np.array_equal(batch_act(ctx, g, Xmu), ctx.vmul(batch_act(ctx, g, X), mu)):
                commute = False
    report = PointOrbitReport(
        spec.kind, n, q, m, group,
        gl_order(n, q) if group == "GL" else sl_order(n, q),
        B, sorted(int(s) for s in sizes), closed, commute, free_claimed, violations,
    )
    if strict and free_claimed and violations:
        first = violations[0]
        raise StabilizerViolation(f"nontrivial stabilizer on {spec.kind}", (first["g"], first["x"]))
    return report


# -- quotient map and fibers -------------------------------------------------------


def quotient_map(ctx: FieldCtx, x: Sequence[int], sign_variant: bool = False) -> tuple[int, ...]:
    """``(c_{n,1}(x), ..., c_{n,n-1}(x))`` for ``x`` on Q'."""
    x = tuple(x)
    spec = VarietySpec("Qprime", len(x), ctx.spec.base(), sign_variant)
    e = moore_det(ctx, x)
    if not spec.contains_e(ctx, e):
        raise NotOnVariety(f"{x} is not on Q'")
    return dickson_cofactor(ctx, x).c[1:]


def _qprime_c0(n: int, sign_variant: bool) -> int:
    """``c_{n,0}`` on Q' as an integer sign: (-1)^n, or -1 on the sign-variant hypersurface."""
    return -1 if sign_variant else c0_sign(n)


def _independent_tuples(ctx: FieldCtx, space: list[int], n: int) -> list[Point]:
    """Ordered F_q-bases of the F_q-space ``space`` (given as its element codes)."""
    scalars = ctx.base_codes
    out: list[Point] = []

    def span_of(vecs):
        acc = {0}
        for v in vecs:
            acc = {ctx.add(a, ctx.mul(l, v)) for a in acc for l in scalars}
        return acc

    def extend(prefix):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        sp = span_of(prefix)
        for v in space:
            if v not in sp:
                extend(prefix + [v])

    extend([])
    return out


@dataclass
class FiberCensus:
    n: int
    q: int
    m: int
    target: list[list[int]]
    ladder: int
    counts: dict[int, int]
    brute_force_counts: dict[int, int]
    split_degree: int | None
    stabilized_count: int | None
    expected: int

    @property
    def passed(self) -> bool:
        return self.stabilized_count == self.expected

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "m": self.m,
            "target": self.target,
            "ladder": self.ladder,
            "counts": {str(k): v for k, v in self.counts.items()},
            "brute_force_counts": {str(k): v for k, v in self.brute_force_counts.items()},
            "split_degree": self.split_degree,
            "stabilized_count": self.stabilized_count,
            "expected": self.expected,
            "pass": self.passed,
        }


def fiber_points(base: FieldSpec, n: int, m: int, k: int, target: Sequence[int],
                 sign_variant: bool = False) -> list[Point]:
    """Points of Q'(F_{q^{m k}}) whose Dickson tuple equals ``target`` (codes in F_{q^m}).

    Candidates are the ordered bases of the root space of the additive
    polynomial fixed by the target; each one is then checked through
    :func:`quotient_map`.
    """
    small = make_field(base.extend(m))
    big = make_field(base.extend(m * k))
    emb = embedding(small, big)
    tgt = [emb[a] for a in target]
    c0 = 1 if _qprime_c0(n, sign_variant) > 0 else big.neg(1)
    coeffs = [c0] + tgt + [1]
    roots = []
    for z in range(big.size):
        acc = 0
        for i, c in enumerate(coeffs):
            if c:
                acc = big.add(acc, big.mul(c, big.frob(z, i)))
        if acc == 0:
            roots.append(z)
    if len(roots) < big.q**n:
        return []
    pts = []
    for x in _independent_tuples(big, roots, n):
        if quotient_map(big, x, sign_variant) == tuple(tgt):
            pts.append(x)
    return pts


def _brute_fiber_count(base: FieldSpec, n: int, m: int, k: int, target: Sequence[int],
                       sign_variant: bool) -> int:
    small = make_field(base.extend(m))
    big = make_field(base.extend(m * k))
    emb = embedding(small, big)
    tgt = np.array([emb[a] for a in target], dtype=np.int64).reshape(-1, 1)
    spec = VarietySpec("Qprime", n, base, sign_variant)
    X = all_points(big, n)
    e, c, ok = batch_dickson_cofactor(big, X)
    on = spec.mask(big, e) & ok
    match = np.all(c[1:] == tgt, axis=0) if n > 1 else np.ones_like(on)
    return int(np.count_nonzero(on & match))


def fiber_census(base: FieldSpec, n: int, m: int, target: Sequence[int], ladder: int = DEFAULT_LADDER,
                 sign_variant: bool = False, strict: bool = True) -> FiberCensus:
    """Size of one fiber of the quotient map Q' -> A^{n-1}, read off an extension ladder.

    Frobenius permutes a fiber as a single G_n-torsor, so the count over
    ``F_{q^{m k}}`` is either 0 or the full fiber, the latter exactly when the
    splitting degree ``d`` divides ``k``. The count is declared stable once it
    agrees at ``k = d`` and ``k = 2d``; every other rung is checked against the
    divisibility pattern.
    """
    base = base.base()
    q = base.q
    if len(target) != n - 1:
        raise ConfigError(f"target must have {n - 1} coordinates")
    expected = gl_order(n, q)
    counts: dict[int, int] = {}
    brute: dict[int, int] = {}
    split = None
    stable = None
    for k in range(1, ladder + 1):
        counts[k] = len(fiber_points(base, n, m, k, target, sign_variant))
        if (q ** (m * k)) ** n <= BRUTE_FORCE_LIMIT:
            brute[k] = _brute_fiber_count(base, n, m, k, target, sign_variant)
            if brute[k] != counts[k]:
                raise FiberSizeMismatch(f"brute force found {brute[k]} points at rung {k}, roots gave {counts[k]}")
        if split is None and counts[k]:
            split = k
        if split is not None and k == 2 * split:
            stable = counts[k] if counts[k] == counts[split] else None
            break
    census = FiberCensus(n, q, m, [make_field(base.extend(m)).coeffs(a) for a in target], ladder,
                         counts, brute, split, stable, expected)
    if split is None or 2 * split > ladder:
        raise LadderExhausted(f"fiber did not stabilize within ladder {ladder}; raise the ladder cap")
    pattern_ok = all((v != 0) == (k % split == 0) for k, v in counts.items())
    if strict and (not pattern_ok or stable != expected):
        raise FiberSizeMismatch(f"fiber counts {counts} do not stabilize at |GL_{n}(F_{q})| = {expected}")
    return census


# -- scaling covers --------------------------------------------------------------------


def _solve_power(ctx: FieldCtx, k: int, target: int) -> list[int]:
    """All ``t`` with ``t^k = target`` (target nonzero)."""
    n1 = ctx.size - 1
    g = math.gcd(k, n1)
    lt = ctx.log(target)
    if lt % g:
        return []
    # t = gen^j with j*k = lt (mod n1)
    k1, n1g = k // g, n1 // g
    j0 = (lt // g) * pow(k1, -1, n1g) % n1g if n1g > 1 else 0
    gen = ctx.generator
    return sorted(ctx.pow(gen, j0 + i * n1g) for i in range(g))


@dataclass
class CoverReport:
    kind: str
    n: int
    q: int
    m: int
    degree: int
    ladder: int
    points: list[dict]

    @property
    def covered(self) -> bool:
        return all(p["first_ext"] is not None for p in self.points)

    @property
    def fibers_ok(self) -> bool:
        return all(p["fiber_ok"] for p in self.points)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "q": self.q,
            "m": self.m,
            "scalar_degree": self.degree,
            "ladder": self.ladder,
            "covered": self.covered,
            "fibers_ok": self.fibers_ok,
            "points": self.points,
        }


def scaling_cover(spec: VarietySpec, m: int, ladder: int = DEFAULT_LADDER) -> CoverReport:
    """Cover X(1)(F_{q^m}) by scalings ``t x`` of points ``x`` of Q (or Q').

    For each ``y`` the smallest rung with a ``t`` satisfying ``e(t^{-1} y) = 1``
    (resp. ``e(t^{-1} y)^{q-1} = 1``) is reported, together with the rung on
    which the full fiber of ``k`` pairs appears; on that rung every pair is
    checked to be a ``mu_k``-translate of the first one, with
    ``k = q(n)`` for Q and ``k = q^n - 1`` for Q'.
    """
    if spec.kind not in ("Q", "Qprime"):
        raise ConfigError("scaling covers start from Q or Qprime")
    n, q = spec.n, spec.q
    k = (q**n - 1) // (q - 1) if spec.kind == "Q" else q**n - 1
    y_spec = VarietySpec("X1", n, spec.base)
    small = spec.field(m)
    out = []
    for y in enumerate_variety(y_spec, m):
        e = moore_det(small, y)
        entry = {"y": [small.coeffs(a) for a in y], "first_ext": None, "split_ext": None,
                 "fiber_size": 0, "fiber_ok": False}
        for r in range(1, ladder + 1):
            big = spec.field(m * r)
            emb = embedding(small, big)
            yb = tuple(emb[a] for a in y)
            eb = emb[e]
            tgt = eb if spec.kind == "Q" else big.pow(eb, q - 1)
            if spec.kind == "Qprime" and spec.sign_variant and (n - 1) % 2:
                tgt = big.neg(tgt)
            sols = _solve_power(big, k, tgt)
            ok = True
            for t in sols:
                if big.pow(t, k) != tgt:
                    ok = False
                x = tuple(big.mul(big.inv(t), a) for a in yb)
                if not spec.contains_e(big, moore_det(big, x)):
                    ok = False
            if sols and entry["first_ext"] is None:
                entry["first_ext"] = r
            if len(sols) == k:
                t0 = sols[0]
                mu = [big.div(t, t0) for t in sols]
                ok = ok and all(big.pow(s, k) == 1 for s in mu) and len(set(mu)) == k
                entry.update(split_ext=r, fiber_size=len(sols), fiber_ok=ok)
                break
        if entry["first_ext"] is None:
            raise LadderExhausted(f"no scaling reaches {y} within ladder {ladder}")
        out.append(entry)
    return CoverReport(spec.kind, n, q, m, k, ladder, out)


@dataclass
class TorsorReport:
    n: int
    q: int
    m: int
    stable: bool
    cover: CoverReport

    @property
    def passed(self) -> bool:
        return self.stable and self.cover.covered and self.cover.fibers_ok

    def to_json(self) -> dict:
        return {"n": self.n, "q": self.q, "m": self.m, "scalar_stable": self.stable,
                "cover": self.cover.to_json(), "pass": self.passed}


def torsor_check(base: FieldSpec, n: int, m: int, ladder: int = DEFAULT_LADDER,
                 sign_variant: bool = False) -> TorsorReport:
    """Q' is stable under mu_{q^n-1} and its scalings by units cover X(1)."""
    spec = VarietySpec("Qprime", n, base, sign_variant)
    ctx, X = variety_array(spec, m)
    keys = np.sort(_point_keys(ctx, X))
    stable = True
    for mu in scalar_group(spec, ctx):
        if not np.array_equal(np.sort(_point_keys(ctx, ctx.vmul(X, mu))), keys):
            stable = False
    return TorsorReport(n, spec.q, m, stable, scaling_cover(spec, m, ladder))


def sign_variants_coincide(base: FieldSpec, n: int, m: int) -> bool:
    """Whether ``e^(q-1) = 1`` and ``(-1)^(n-1) e^(q-1) = 1`` cut out the same F_{q^m}-points."""
    a = enumerate_variety(VarietySpec("Qprime", n, base, False), m)
    b = enumerate_variety(VarietySpec("Qprime", n, base, True), m)
    return a == b
