"""Matrices over a :class:`FieldCtx`, GL_n/SL_n enumeration, the Lang map and twisted tori."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import ConfigError, OrderOverflow, Singular
from .ff_tower import FieldCtx, FieldElem, FieldSpec, make_field, prime_power

DEFAULT_GROUP_BOUND = 10**6


@dataclass(frozen=True)
class MatFq:
    """Square matrix of element codes over one field."""

    ctx: FieldCtx
    rows: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def from_rows(cls, ctx: FieldCtx, rows: Sequence[Sequence[int]]) -> MatFq:
        rows = tuple(tuple(r) for r in rows)
        if any(len(r) != len(rows) for r in rows):
            raise ConfigError("matrix must be square")
        return cls(ctx, rows)

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> MatFq:
        return cls(ctx, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, ctx: FieldCtx, diag: Sequence[int]) -> MatFq:
        n = len(diag)
        return cls(ctx, tuple(tuple(diag[i] if i == j else 0 for j in range(n)) for i in range(n)))

    def entry(self, i: int, j: int) -> FieldElem:
        return FieldElem(self.ctx, self.rows[i][j])

    def __matmul__(self, other: MatFq) -> MatFq:
        ctx = self.ctx
        mul, add = ctx.mul, ctx.add
        cols = list(zip(*other.rows))
        out = []
        for row in self.rows:
            out_row = []
            for col in cols:
                acc = 0
                for a, b in zip(row, col):
                    if a and b:
                        acc = add(acc, mul(a, b))
                out_row.append(acc)
            out.append(tuple(out_row))
        return MatFq(ctx, tuple(out))

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Matrix times column vector."""
        mul, add = self.ctx.mul, self.ctx.add
        out = []
        for row in self.rows:
            acc = 0
            for a, b in zip(row, vec):
                if a and b:
                    acc = add(acc, mul(a, b))
            out.append(acc)
        return tuple(out)

    def frobenius(self) -> MatFq:
        frob = self.ctx.frob
        return MatFq(self.ctx, tuple(tuple(frob(a) for a in row) for row in self.rows))

    def transpose(self) -> MatFq:
        return MatFq(self.ctx, tuple(zip(*self.rows)))

    def is_identity(self) -> bool:
        return all(a == int(i == j) for i, row in enumerate(self.rows) for j, a in enumerate(row))

    def to_json(self) -> list:
        return [[self.ctx.coeffs(a) for a in row] for row in self.rows]


@dataclass(frozen=True)
class PermWord:
    """A permutation of ``{1..n}`` given by disjoint cycles (1-based, as printed)."""

    n: int
    cycles: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        seen: set[int] = set()
        for cyc in self.cycles:
            for i in cyc:
                if not 1 <= i <= self.n or i in seen:
                    raise ConfigError(f"cycles {self.cycles} are not disjoint cycles on 1..{self.n}")
                seen.add(i)

    @classmethod
    def coxeter(cls, n: int) -> PermWord:
        return cls(n, (tuple(range(1, n + 1)),))

    @classmethod
    def blocks(cls, n: int, r: int) -> PermWord:
        """Product of ``n // r`` consecutive ``r``-cycles; leftover points stay fixed."""
        k = n // r
        return cls(n, tuple(tuple(range(j * r + 1, (j + 1) * r + 1)) for j in range(k)))

    @classmethod
    def parse(cls, n: int, text: str) -> PermWord:
        """Parse cycle notation such as ``"(1,2)(3)"``; ``""`` or ``"()"`` is the identity."""
        cycles = []
        for body in text.replace(" ", "").split(")"):
            body = body.lstrip("(")
            if body:
                cycles.append(tuple(int(t) for t in body.split(",")))
        return cls(n, tuple(cycles))

    def image(self, i: int) -> int:
        for cyc in self.cycles:
            if i in cyc:
                return cyc[(cyc.index(i) + 1) % len(cyc)]
        return i

    def full_cycles(self) -> list[tuple[int, ...]]:
        """All cycles including fixed points as 1-cycles."""
        covered = {i for c in self.cycles for i in c}
        out = [c for c in self.cycles if c]
        out += [(i,) for i in range(1, self.n + 1) if i not in covered]
        return out

    def cycle_lengths(self) -> list[int]:
        return [len(c) for c in self.full_cycles()]

    def matrix(self, ctx: FieldCtx) -> MatFq:
        """Permutation matrix sending ``e_j`` to ``e_{w(j)}``."""
        rows = [[0] * self.n for _ in range(self.n)]
        for j in range(1, self.n + 1):
            rows[self.image(j) - 1][j - 1] = 1
        return MatFq.from_rows(ctx, rows)

    def to_json(self) -> list[list[int]]:
        return [list(c) for c in self.cycles]


# -- determinants and inverses ------------------------------------------------


def det(M: MatFq) -> FieldElem:
    return FieldElem(M.ctx, det_code(M.ctx, M.rows))


def det_code(ctx: FieldCtx, rows: Sequence[Sequence[int]]) -> int:
    """Determinant by Gaussian elimination on codes."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    mul, add, neg = ctx.mul, ctx.add, ctx.neg
    if n == 2:
        (a, b), (c, d) = rows
        return add(mul(a, d), neg(mul(b, c)))
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        pos = add(add(mul(a, mul(e, i)), mul(b, mul(f, g))), mul(c, mul(d, h)))
        negs = add(add(mul(c, mul(e, g)), mul(a, mul(f, h))), mul(b, mul(d, i)))
        return add(pos, neg(negs))
    a = [list(r) for r in rows]
    result = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            result = neg(result)
        pv = a[col][col]
        result = mul(result, pv)
        inv_pv = ctx.inv(pv)
        for r in range(col + 1, n):
            if a[r][col]:
                f = mul(a[r][col], inv_pv)
                row_r, row_c = a[r], a[col]
                for k in range(col, n):
                    if row_c[k]:
                        row_r[k] = add(row_r[k], neg(mul(f, row_c[k])))
    return result


def _minor(rows, i: int, j: int):
    return [r[:j] + r[j + 1 :] for k, r in enumerate(rows) if k != i]


def inverse_cofactor(M: MatFq) -> MatFq:
    """Adjugate divided by the determinant."""
    ctx, rows, n = M.ctx, [list(r) for r in M.rows], M.n
    d = det_code(ctx, rows)
    if not d:
        raise Singular("matrix is singular")
    if n == 1:
        return MatFq(ctx, ((ctx.inv(d),),))
    dinv = ctx.inv(d)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            cof = det_code(ctx, _minor(rows, i, j))
            if (i + j) % 2:
                cof = ctx.neg(cof)
            out[j][i] = ctx.mul(cof, dinv)
    return MatFq.from_rows(ctx, out)


def inverse_elimination(M: MatFq) -> MatFq:
    """Gauss-Jordan on ``[M | I]``."""
    ctx, n = M.ctx, M.n
    mul, add, neg = ctx.mul, ctx.add, ctx.neg
    a = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(M.rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise Singular("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv_pv = ctx.inv(a[col][col])
        a[col] = [mul(x, inv_pv) for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [add(x, neg(mul(f, y))) for x, y in zip(a[r], a[col])]
    return MatFq.from_rows(ctx, [row[n:] for row in a])


def inverse(M: MatFq, method: str = "both") -> MatFq:
    """Inverse by cofactors, by elimination, or by both with equality asserted."""
    if method == "cofactor":
        return inverse_cofactor(M)
    if method == "elimination":
        return inverse_elimination(M)
    if method != "both":
        raise ConfigError(f"unknown inverse method {method!r}")
    a = inverse_cofactor(M)
    b = inverse_elimination(M)
    if a != b:
        raise AssertionError("cofactor and elimination inverses disagree")
    return a


# -- group orders and enumeration -----------------------------------------------


def gl_order(n: int, q: int) -> int:
    return math.prod(q**n - q**i for i in range(n))


def sl_order(n: int, q: int) -> int:
    return gl_order(n, q) // (q - 1)


def parabolic_order(i: int, n: int, q: int) -> int:
    """Order of the block upper-triangular subgroup with diagonal blocks of sizes i, n-i."""
    return gl_order(i, q) * gl_order(n - i, q) * q ** (i * (n - i))


def _span(ctx: FieldCtx, vectors: list[tuple[int, ...]], scalars: Sequence[int]) -> set[tuple[int, ...]]:
    n = len(vectors[0]) if vectors else 0
    out = set()
    mul, add = ctx.mul, ctx.add
    for coeffs in itertools.product(scalars, repeat=len(vectors)):
        acc = [0] * n
        for c, v in zip(coeffs, vectors):
            if c:
                acc = [add(a, mul(c, b)) for a, b in zip(acc, v)]
        out.add(tuple(acc))
    return out


def enumerate_gl(n: int, ctx: FieldCtx, bound: int = DEFAULT_GROUP_BOUND) -> Iterator[MatFq]:
    """Every element of GL_n(F_q), with F_q the fixed field of Frobenius inside ``ctx``.

    Rows are chosen one at a time, skipping rows in the span of the earlier
    ones; the order is deterministic.
    """
    q = ctx.q
    if gl_order(n, q) > bound:
        raise OrderOverflow(f"|GL_{n}(F_{q})| = {gl_order(n, q)} exceeds bound {bound}")
    scalars = ctx.base_codes
    all_rows = list(itertools.product(scalars, repeat=n))

    def extend(prefix: list[tuple[int, ...]]):
        if len(prefix) == n:
            yield MatFq(ctx, tuple(prefix))
            return
        span = _span(ctx, prefix, scalars) if prefix else {(0,) * n}
        for row in all_rows:
            if row not in span:
                yield from extend(prefix + [row])

    return extend([])


def enumerate_sl(n: int, ctx: FieldCtx, bound: int = DEFAULT_GROUP_BOUND) -> Iterator[MatFq]:
    return (g for g in enumerate_gl(n, ctx, bound) if det_code(ctx, g.rows) == 1)


def lang_map(g: MatFq) -> MatFq:
    """``g^{-1} F(g)``."""
    return inverse(g, method="elimination") @ g.frobenius()


def coxeter_matrix(ctx: FieldCtx, n: int) -> MatFq:
    """Permutation matrix of the n-cycle (1, ..., n): ones on the subdiagonal and at (1, n)."""
    if n < 2:
        raise ConfigError("the Coxeter element needs n >= 2")
    return PermWord.coxeter(n).matrix(ctx)


# -- twisted tori -----------------------------------------------------------------


@dataclass
class TorusFixedReport:
    cycle_lengths: list[int]
    order: int
    formula_order: int
    brute_force_order: int | None
    generators: list[tuple[int, ...]]
    field: FieldSpec
    variant: str

    @property
    def consistent(self) -> bool:
        return self.order == self.formula_order and self.brute_force_order in (None, self.order)

    def to_json(self) -> dict:
        ctx = make_field(self.field)
        return {
            "cycle_lengths": self.cycle_lengths,
            "order": self.order,
            "formula_order": self.formula_order,
            "brute_force_order": self.brute_force_order,
            "field": str(self.field),
            "variant": self.variant,
            "generators": [[ctx.coeffs(a) for a in t] for t in self.generators],
        }


def _torus_condition(ctx: FieldCtx, w: PermWord, t: Sequence[int]) -> bool:
    # ad(w)F(t) = t on the diagonal: t_{w(i)} = t_i^q
    return all(t[w.image(i + 1) - 1] == ctx.frob(t[i]) for i in range(w.n))


def _closure(ctx: FieldCtx, gens: list[tuple[int, ...]]) -> set[tuple[int, ...]]:
    one = (1,) * (len(gens[0]) if gens else 0)
    group = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = tuple(ctx.mul(x, y) for x, y in zip(a, g))
                if b not in group:
                    group.add(b)
                    nxt.append(b)
        frontier = nxt
    return group


def torus_fixed(w: PermWord, q: int, variant: str = "GL", brute_force: bool | None = None) -> TorusFixedReport:
    """Fixed points of ``ad(w) F`` on the diagonal torus of GL_n (or SL_n).

    Elements are enumerated inside ``F_{q^L}``, ``L`` the lcm of the cycle
    lengths, once by parametrising each r-cycle by a free coordinate in
    ``F_{q^r}^*`` and (for small cases) once by brute force over all diagonal
    tuples; both counts are compared with the product formula.
    """
    if variant not in ("GL", "SL"):
        raise ConfigError(f"variant must be GL or SL, not {variant!r}")
    p, s = prime_power(q)
    cycles = w.full_cycles()
    lengths = [len(c) for c in cycles]
    L = math.lcm(*lengths)
    spec = FieldSpec(p, s, L)
    ctx = make_field(spec)
    n = w.n

    formula = math.prod(q**r - 1 for r in lengths)
    if variant == "SL":
        formula //= q - 1

    # parametrised enumeration
    per_cycle = []
    for cyc in cycles:
        r = len(cyc)
        free = [a for a in range(1, ctx.size) if ctx.frob(a, r) == a]
        per_cycle.append((cyc, free))
    elements = set()
    for choice in itertools.product(*(free for _, free in per_cycle)):
        t = [0] * n
        for (cyc, _), a in zip(per_cycle, choice):
            for k, idx in enumerate(cyc):
                t[idx - 1] = ctx.frob(a, k)
        t = tuple(t)
        if variant == "SL" and _prod(ctx, t) != 1:
            continue
        elements.add(t)
    assert all(_torus_condition(ctx, w, t) for t in elements)

    if brute_force is None:
        brute_force = (ctx.size - 1) ** n <= 200_000
    brute = None
    if brute_force:
        brute = 0
        for t in itertools.product(range(1, ctx.size), repeat=n):
            if _torus_condition(ctx, w, t) and (variant == "GL" or _prod(ctx, t) == 1):
                brute += 1

    gens: list[tuple[int, ...]] = []
    span: set[tuple[int, ...]] = {(1,) * n}
    for t in sorted(elements):
        if t not in span:
            gens.append(t)
            span = _closure(ctx, gens)
            if len(span) == len(elements):
                break
    return TorusFixedReport(lengths, len(elements), formula, brute, gens, spec, variant)


def _prod(ctx: FieldCtx, t: Sequence[int]) -> int:
    acc = 1
    for a in t:
        acc = ctx.mul(acc, a)
    return acc
