"""Moore determinants and Dickson invariants, by two independent routes.

The product route expands ``prod_{lambda in F_q^n} (X + lambda . x)`` as an
ordinary polynomial and reads off the coefficients at ``X^{q^i}``. It is slow
and always defined, and serves as the oracle. The cofactor route divides a
Moore minor by the Moore determinant and needs ``e_n(x) != 0``.

Sign conventions, fixed by agreement with the product route:

* ``c_{n,s} = minor_sign(n, s) * det(Moore matrix with column q^s removed and
  column q^n appended) / e_n`` with ``minor_sign(n, s) = (-1)^(n-s)``;
* ``c_{n,0} = (-1)^n * e_n^(q-1)``.

Both signs are invisible in characteristic 2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, NonAdditiveExpansion, SingularMoore
from .ff_tower import FieldCtx
from .linalg_fq import MatFq, det_code

DEFAULT_PRODUCT_BOUND = 1 << 12

Point = tuple[int, ...]


def minor_sign(n: int, s: int) -> int:
    return -1 if (n - s) % 2 else 1


def c0_sign(n: int) -> int:
    return -1 if n % 2 else 1


@dataclass(frozen=True)
class QPolynomial:
    """``sum_i c_i X^{q^i}`` together with its ordinary expansion."""

    ctx: FieldCtx
    coeffs: tuple[int, ...]
    expansion: tuple[int, ...]

    def evaluate(self, x: int) -> int:
        ctx = self.ctx
        acc = 0
        for i, c in enumerate(self.coeffs):
            if c:
                acc = ctx.add(acc, ctx.mul(c, ctx.frob(x, i)))
        return acc


@dataclass(frozen=True)
class DicksonVector:
    n: int
    ctx: FieldCtx
    e: int
    c: tuple[int, ...]

    def to_json(self) -> dict:
        co = self.ctx.coeffs
        return {
            "n": self.n,
            "q": self.ctx.q,
            "m": self.ctx.m,
            "field": str(self.ctx.spec),
            "e": co(self.e),
            "c": [co(a) for a in self.c],
        }


def _check_point(ctx: FieldCtx, x: Sequence[int]) -> Point:
    x = tuple(int(a) for a in x)
    if not x:
        raise ConfigError("empty point")
    if any(not 0 <= a < ctx.size for a in x):
        raise ConfigError(f"coordinates {x} are not codes of {ctx.spec}")
    return x


def moore_rows(ctx: FieldCtx, x: Sequence[int], exponents: Sequence[int]) -> list[list[int]]:
    """Rows ``(x_i^{q^k} for k in exponents)``."""
    return [[ctx.frob(a, k) for k in exponents] for a in x]


def moore_matrix(ctx: FieldCtx, x: Sequence[int]) -> MatFq:
    """Entry ``(i, j)`` is ``x_i^{q^{j-1}}`` (1-based)."""
    x = _check_point(ctx, x)
    return MatFq.from_rows(ctx, moore_rows(ctx, x, range(len(x))))


def moore_det(ctx: FieldCtx, x: Sequence[int]) -> int:
    x = _check_point(ctx, x)
    return det_code(ctx, moore_rows(ctx, x, range(len(x))))


def act(ctx: FieldCtx, g: MatFq, x: Sequence[int]) -> Point:
    """Linear action on coordinates, ``x -> g x``."""
    return g.apply(x)


def span_values(ctx: FieldCtx, x: Sequence[int]) -> list[int]:
    """All ``lambda . x`` for ``lambda`` in F_q^n, with multiplicity."""
    scalars = ctx.base_codes
    out = []
    mul, add = ctx.mul, ctx.add
    for lam in itertools.product(scalars, repeat=len(x)):
        acc = 0
        for l, a in zip(lam, x):
            if l and a:
                acc = add(acc, mul(l, a))
        out.append(acc)
    return out


def dickson_product_poly(ctx: FieldCtx, x: Sequence[int], bound: int = DEFAULT_PRODUCT_BOUND) -> QPolynomial:
    """Oracle route: expand the product over the F_q-span and read q-power coefficients."""
    x = _check_point(ctx, x)
    n, q = len(x), ctx.q
    if q**n > bound:
        raise ConfigError(f"q^n = {q ** n} exceeds product bound {bound}")
    mul, add = ctx.mul, ctx.add
    poly = [1]
    for v in span_values(ctx, x):
        new = [0] + poly
        if v:
            for i, c in enumerate(poly):
                if c:
                    new[i] = add(new[i], mul(c, v))
        poly = new
    qpows = {q**i: i for i in range(n + 1)}
    coeffs = [0] * (n + 1)
    for k, c in enumerate(poly):
        if not c:
            continue
        if k not in qpows:
            raise NonAdditiveExpansion(f"monomial X^{k} survived in the expansion at {x}")
        coeffs[qpows[k]] = c
    if coeffs[n] != 1:
        raise NonAdditiveExpansion("leading coefficient is not 1")
    return QPolynomial(ctx, tuple(coeffs), tuple(poly))


def dickson_from_product(ctx: FieldCtx, x: Sequence[int]) -> DicksonVector:
    """DicksonVector via the oracle route; defined everywhere."""
    x = _check_point(ctx, x)
    poly = dickson_product_poly(ctx, x)
    return DicksonVector(len(x), ctx, moore_det(ctx, x), poly.coeffs[: len(x)])


def hatted_minor(ctx: FieldCtx, x: Sequence[int], s: int) -> int:
    """``det`` of the Moore matrix with column ``q^s`` removed and ``q^n`` appended."""
    n = len(x)
    exps = [k for k in range(n + 1) if k != s]
    return det_code(ctx, moore_rows(ctx, x, exps))


def dickson_cofactor(ctx: FieldCtx, x: Sequence[int]) -> DicksonVector:
    """Fast route: Moore-minor ratios. Raises :class:`SingularMoore` when ``e_n(x) = 0``."""
    x = _check_point(ctx, x)
    n = len(x)
    e = moore_det(ctx, x)
    if not e:
        raise SingularMoore(f"Moore determinant vanishes at {x}")
    einv = ctx.inv(e)
    c = []
    for s in range(n):
        val = ctx.mul(hatted_minor(ctx, x, s), einv)
        if minor_sign(n, s) < 0:
            val = ctx.neg(val)
        c.append(val)
    return DicksonVector(n, ctx, e, tuple(c))


def dickson_vector(ctx: FieldCtx, x: Sequence[int]) -> DicksonVector:
    """Cofactor route when defined, product route otherwise."""
    try:
        return dickson_cofactor(ctx, x)
    except SingularMoore:
        return dickson_from_product(ctx, x)


def calibrate_minor_signs(ctx: FieldCtx, points: Sequence[Sequence[int]]) -> dict[int, int]:
    """Recover the sign of each hatted minor by comparison with the product route.

    Returns ``{s: +1 | -1}``; raises if some point admits neither sign or two
    points disagree.
    """
    signs: dict[int, int] = {}
    for x in points:
        x = tuple(x)
        e = moore_det(ctx, x)
        if not e:
            continue
        oracle = dickson_product_poly(ctx, x).coeffs
        for s in range(len(x)):
            raw = ctx.div(hatted_minor(ctx, x, s), e)
            if raw == oracle[s] and ctx.neg(raw) == oracle[s]:
                continue
            if raw == oracle[s]:
                sign = 1
            elif ctx.neg(raw) == oracle[s]:
                sign = -1
            else:
                raise AssertionError(f"minor {s} matches the oracle with neither sign at {x}")
            if signs.setdefault(s, sign) != sign:
                raise AssertionError(f"inconsistent sign for minor {s}")
    return signs


# -- batch kernels (numpy, table-backed fields) ------------------------------------


def batch_act(ctx: FieldCtx, g: MatFq, X: np.ndarray) -> np.ndarray:
    """Apply ``g`` to every column of the ``(n, B)`` code array ``X``."""
    out = []
    for row in g.rows:
        acc = np.zeros(X.shape[1], dtype=np.int64)
        for a, xs in zip(row, X):
            if a:
                acc = ctx.vadd(acc, ctx.vmul(a, xs))
        out.append(acc)
    return np.stack(out)


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def batch_det(ctx: FieldCtx, rows: Sequence[Sequence[np.ndarray]]) -> np.ndarray:
    """Leibniz determinant of a matrix whose entries are code arrays."""
    n = len(rows)
    shape = np.shape(rows[0][0])
    pos = np.zeros(shape, dtype=np.int64)
    neg = np.zeros(shape, dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        term = rows[0][perm[0]]
        for i in range(1, n):
            term = ctx.vmul(term, rows[i][perm[i]])
        if _perm_sign(perm) > 0:
            pos = ctx.vadd(pos, term)
        else:
            neg = ctx.vadd(neg, term)
    return ctx.vsub(pos, neg)


def batch_frob_powers(ctx: FieldCtx, X: np.ndarray, top: int) -> list[np.ndarray]:
    """``[X, X^q, ..., X^{q^top}]``."""
    out = [np.asarray(X, dtype=np.int64)]
    for _ in range(top):
        out.append(ctx.vfrob(out[-1]))
    return out


def batch_moore_det(ctx: FieldCtx, X: np.ndarray) -> np.ndarray:
    n = X.shape[0]
    pw = batch_frob_powers(ctx, X, n - 1)
    return batch_det(ctx, [[pw[j][i] for j in range(n)] for i in range(n)])


def batch_dickson_cofactor(ctx: FieldCtx, X: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Returns ``(e, c, ok)``; ``c`` has shape ``(n, B)`` and is meaningful where ``ok``."""
    n = X.shape[0]
    pw = batch_frob_powers(ctx, X, n)
    e = batch_det(ctx, [[pw[j][i] for j in range(n)] for i in range(n)])
    ok = e != 0
    einv = ctx.vinv(np.where(ok, e, 1))
    cs = []
    for s in range(n):
        exps = [k for k in range(n + 1) if k != s]
        minor = batch_det(ctx, [[pw[k][i] for k in exps] for i in range(n)])
        val = ctx.vmul(minor, einv)
        if minor_sign(n, s) < 0:
            val = ctx.vneg(val)
        cs.append(np.where(ok, val, 0))
    return e, np.stack(cs), ok


def batch_dickson_product(ctx: FieldCtx, X: np.ndarray) -> np.ndarray:
    """Oracle route on a batch; returns the ``(n, B)`` array of ``c_{n,0..n-1}``."""
    n, B = X.shape
    q = ctx.q
    scalars = ctx.base_codes
    poly = [np.ones(B, dtype=np.int64)]
    for lam in itertools.product(scalars, repeat=n):
        v = np.zeros(B, dtype=np.int64)
        for l, xs in zip(lam, X):
            if l:
                v = ctx.vadd(v, ctx.vmul(l, xs))
        new = [np.zeros(B, dtype=np.int64)] + poly
        for i, c in enumerate(poly):
            new[i] = ctx.vadd(new[i], ctx.vmul(c, v))
        poly = new
    qpows = {q**i for i in range(n + 1)}
    for k, c in enumerate(poly):
        if k not in qpows and np.any(c):
            raise NonAdditiveExpansion(f"monomial X^{k} survived in a batch expansion")
    if np.any(poly[q**n] != 1):
        raise NonAdditiveExpansion("leading coefficient is not 1")
    return np.stack([poly[q**i] for i in range(n)])
