"""Coranks of points of A^n with respect to F_q-linear forms, and the resulting census.

A point ``x`` lies in ``F(i)`` when ``corank(x) >= i``; ``X(i)`` is the
complement of ``F(i)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .dl_variety import all_points
from .errors import ConfigError
from .ff_tower import DEFAULT_BOUND, FieldCtx, FieldSpec, make_field
from .linalg_fq import gl_order


def gauss_binomial(n: int, i: int, q: int) -> int:
    """Number of ``i``-dimensional (equivalently codimension-``i``) subspaces of ``F_q^n``."""
    if not 0 <= i <= n:
        raise ConfigError(f"need 0 <= i <= n, got i={i}, n={n}")
    num = gl_order(n, q)
    den = gl_order(i, q) * gl_order(n - i, q) * q ** (i * (n - i))
    return num // den


def predicted_count(n: int, i: int, q: int, m: int) -> int:
    return gauss_binomial(n, i, q) * math.prod(q**m - q**j for j in range(n - i))


def corank_brute(ctx: FieldCtx, x: Sequence[int]) -> int:
    """``log_q`` of the number of ``lambda`` in F_q^n with ``lambda . x = 0``."""
    scalars = ctx.base_codes
    zeros = 0
    for lam in itertools.product(scalars, repeat=len(x)):
        acc = 0
        for l, a in zip(lam, x):
            if l and a:
                acc = ctx.add(acc, ctx.mul(l, a))
        zeros += acc == 0
    return round(math.log(zeros, len(scalars)))


@lru_cache(maxsize=None)
def _coordinates(ctx: FieldCtx) -> dict[int, tuple[int, ...]]:
    """Coordinates of every element of F_{q^m} in a fixed F_q-basis."""
    scalars = ctx.base_codes
    basis: list[int] = []
    span = {0}
    a = 1
    while len(basis) < ctx.m:
        if a not in span:
            basis.append(a)
            span = {ctx.add(s, ctx.mul(l, a)) for s in span for l in scalars}
        a = ctx.mul(a, ctx.generator) if ctx.generator else a + 1
    table = {}
    for lam in itertools.product(scalars, repeat=ctx.m):
        acc = 0
        for l, b in zip(lam, basis):
            acc = ctx.add(acc, ctx.mul(l, b))
        table[acc] = lam
    return table


def _rank(ctx: FieldCtx, rows: list[list[int]]) -> int:
    rows = [r[:] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = ctx.inv(rows[rank][c])
        rows[rank] = [ctx.mul(inv, a) for a in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                f = rows[r][c]
                rows[r] = [ctx.sub(a, ctx.mul(f, b)) for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def corank_linear(ctx: FieldCtx, x: Sequence[int]) -> int:
    """``n`` minus the F_q-dimension of the span of the coordinates of ``x``."""
    coords = _coordinates(ctx)
    return len(x) - _rank(ctx, [list(coords[a]) for a in x])


def corank(ctx: FieldCtx, x: Sequence[int], method: str = "both") -> int:
    if method == "brute":
        return corank_brute(ctx, x)
    if method == "linear":
        return corank_linear(ctx, x)
    a, b = corank_brute(ctx, x), corank_linear(ctx, x)
    if a != b:
        raise AssertionError(f"corank routes disagree at {tuple(x)}: {a} vs {b}")
    return a


def batch_corank(ctx: FieldCtx, X: np.ndarray) -> np.ndarray:
    """Brute-force corank for every column of ``X``."""
    q = ctx.q
    zeros = np.zeros(X.shape[1], dtype=np.int64)
    for lam in itertools.product(ctx.base_codes, repeat=X.shape[0]):
        acc = np.zeros(X.shape[1], dtype=np.int64)
        for l, xs in zip(lam, X):
            if l:
                acc = ctx.vadd(acc, ctx.vmul(l, xs))
        zeros += acc == 0
    return np.rint(np.log(zeros) / np.log(q)).astype(np.int64)


@dataclass
class StrataCensus:
    n: int
    q: int
    m: int
    counts: list[int]
    predictions: list[int]
    routes_agree: bool
    bookkeeping_ok: bool

    @property
    def passed(self) -> bool:
        return (self.counts == self.predictions and self.routes_agree and self.bookkeeping_ok
                and sum(self.counts) == self.q ** (self.m * self.n))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "m": self.m,
            "counts": self.counts,
            "predictions": self.predictions,
            "routes_agree": self.routes_agree,
            "bookkeeping_ok": self.bookkeeping_ok,
            "pass": self.passed,
        }


def census(n: int, base: FieldSpec, m: int, bound: int = DEFAULT_BOUND, cross_check: bool = True) -> StrataCensus:
    """Exhaustive corank histogram of ``F_{q^m}^n`` with closed-form predictions."""
    ctx = make_field(base.base().extend(m))
    q = ctx.q
    X = all_points(ctx, n, bound)
    cr = batch_corank(ctx, X)
    counts = [int(np.count_nonzero(cr == i)) for i in range(n + 1)]
    agree = True
    if cross_check:
        agree = all(corank_linear(ctx, tuple(int(a) for a in col)) == int(c) for col, c in zip(X.T, cr))
    # X(i+1) - X(i) and F(i) - F(i+1) as index sets
    book = True
    for i in range(n):
        x_diff = set(np.nonzero((cr < i + 1) & ~(cr < i))[0].tolist())
        f_diff = set(np.nonzero((cr >= i) & ~(cr >= i + 1))[0].tolist())
        book = book and x_diff == f_diff
    preds = [predicted_count(n, i, q, m) for i in range(n + 1)]
    return StrataCensus(n, q, m, counts, preds, agree, book)
