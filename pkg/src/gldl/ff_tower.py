"""Finite field towers F_p < F_q < F_{q^m}.

An element of F_{p^d} = F_p[x]/(f) is stored as an ``int`` code: the residue
``a_0 + a_1 x + ... + a_{d-1} x^{d-1}`` maps to ``a_0 + a_1 p + ... ``. Codes
below ``p`` are therefore the prime field, ``0`` is zero and ``1`` is one.

Fields with at most ``TABLE_LIMIT`` elements get exp/log tables (and Zech
logarithms when ``p`` is odd) so that every operation is a couple of list
lookups; larger fields fall back to schoolbook polynomial arithmetic.
"""

from __future__ import annotations

import functools
import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from sympy import factorint, isprime

from .errors import (
    ConfigError,
    DegreeOverflow,
    EllEqualsP,
    NonPrime,
    NotCoprime,
    ZeroElement,
)

DEFAULT_BOUND = 1 << 24
TABLE_LIMIT = 1 << 16

_SPEC_RE = re.compile(r"^\s*(\d+)(?:\^(\d+))?(?::(\d+))?\s*$")


@dataclass(frozen=True)
class FieldSpec:
    """``F_{q^m}`` with ``q = p**s``, viewed as a degree ``s*m`` extension of F_p."""

    p: int
    s: int = 1
    m: int = 1

    def __post_init__(self):
        if self.s < 1 or self.m < 1:
            raise ConfigError(f"field degrees must be positive, got s={self.s}, m={self.m}")

    @property
    def q(self) -> int:
        return self.p**self.s

    @property
    def degree(self) -> int:
        return self.s * self.m

    @property
    def order(self) -> int:
        return self.p**self.degree

    def extend(self, k: int) -> FieldSpec:
        return FieldSpec(self.p, self.s, self.m * k)

    def base(self) -> FieldSpec:
        return FieldSpec(self.p, self.s, 1)

    @classmethod
    def parse(cls, text: str, m: int | None = None) -> FieldSpec:
        """Parse ``"p^s:m"``, ``"p^s"`` or ``"p"``; an explicit ``m`` overrides ``:m``."""
        match = _SPEC_RE.match(text)
        if not match:
            raise ConfigError(f"bad field spec {text!r}; expected p^s:m")
        p = int(match.group(1))
        s = int(match.group(2) or 1)
        mm = int(match.group(3) or 1)
        if m is not None:
            mm = m
        return cls(p, s, mm)

    def __str__(self) -> str:
        return f"{self.p}^{self.s}:{self.m}"


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, s)`` with ``q == p**s``."""
    if q < 2:
        raise ConfigError(f"{q} is not a prime power")
    factors = factorint(q)
    if len(factors) != 1:
        raise ConfigError(f"{q} is not a prime power")
    ((p, s),) = factors.items()
    return int(p), int(s)


# -- polynomials over F_p as coefficient lists, constant term first ----------


def _poly_rem(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    r = list(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], -1, p)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k] * inv_lead % p
        if c:
            off = k - db
            for i, bi in enumerate(b):
                r[off + i] = (r[off + i] - c * bi) % p
    r = r[:db] if db > 0 else []
    while r and r[-1] == 0:
        r.pop()
    return r


def _is_irreducible(f: Sequence[int], p: int) -> bool:
    d = len(f) - 1
    if d <= 1:
        return d == 1
    for k in range(1, d // 2 + 1):
        for low in itertools.product(range(p), repeat=k):
            if not _poly_rem(f, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, d: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree ``d`` over F_p.

    Coefficients are compared constant term first.
    """
    for low in itertools.product(range(p), repeat=d):
        f = list(low) + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class FieldCtx:
    """Arithmetic context for one field ``F_{p^{s m}}``; immutable after construction."""

    def __init__(self, spec: FieldSpec, bound: int = DEFAULT_BOUND):
        if not isprime(spec.p):
            raise NonPrime(f"{spec.p} is not prime")
        if spec.order > bound:
            raise DegreeOverflow(f"|F| = {spec.p}^{spec.degree} exceeds bound {bound}")
        self.spec = spec
        self.p = spec.p
        self.s = spec.s
        self.m = spec.m
        self.q = spec.q
        self.degree = spec.degree
        self.size = spec.order
        self.bound = bound
        self.modulus = smallest_irreducible(self.p, self.degree)
        self._pw = [self.p**i for i in range(self.degree + 1)]
        self._modint = sum(1 << i for i, c in enumerate(self.modulus) if c) if self.p == 2 else 0
        self.has_tables = self.size <= TABLE_LIMIT
        self.generator: int | None = None
        if self.has_tables:
            self._build_tables()
        self._np = None

    # -- construction ---------------------------------------------------

    def _build_tables(self) -> None:
        n1 = self.size - 1
        gen = 1
        if n1 > 1:
            primes = list(factorint(n1))
            for cand in range(2, self.size):
                if all(self._gpow(cand, n1 // r) != 1 for r in primes):
                    gen = cand
                    break
        exp = [0] * (2 * n1)
        log = [0] * self.size
        e = 1
        for i in range(n1):
            exp[i] = e
            log[e] = i
            e = self._gmul(e, gen)
        exp[n1:] = exp[:n1]
        self.generator = gen
        self._exp = exp
        self._log = log
        self._n1 = n1
        if self.p != 2:
            p = self.p
            zech = [-1] * n1
            for k in range(n1):
                v = exp[k]
                a0 = v % p
                w = v - a0 + (a0 + 1) % p
                zech[k] = log[w] if w else -1
            self._zech = zech
            self._half = n1 // 2

    # -- generic (table-free) arithmetic ----------------------------------

    def _digits(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.degree):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def _undigits(self, ds: Iterable[int]) -> int:
        return sum(d * w for d, w in zip(ds, self._pw))

    def _gadd(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        p = self.p
        return self._undigits((x + y) % p for x, y in zip(self._digits(a), self._digits(b)))

    def _gneg(self, a: int) -> int:
        if self.p == 2:
            return a
        p = self.p
        return self._undigits((-x) % p for x in self._digits(a))

    def _gmul(self, a: int, b: int) -> int:
        d = self.degree
        if self.p == 2:
            r = 0
            top = 1 << d
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
                if a & top:
                    a ^= self._modint
            return r
        p = self.p
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        prod = [c % p for c in prod]
        mod = self.modulus
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c:
                off = k - d
                for i in range(d + 1):
                    prod[off + i] = (prod[off + i] - c * mod[i]) % p
        return self._undigits(prod[:d])

    def _gpow(self, a: int, k: int) -> int:
        r = 1
        while k:
            if k & 1:
                r = self._gmul(r, a)
            a = self._gmul(a, a)
            k >>= 1
        return r

    # -- public code-level arithmetic --------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if not self.has_tables:
            return self._gadd(a, b)
        if not a:
            return b
        if not b:
            return a
        la = self._log[a]
        k = self._log[b] - la
        if k < 0:
            k += self._n1
        z = self._zech[k]
        if z < 0:
            return 0
        return self._exp[la + z]

    def neg(self, a: int) -> int:
        if self.p == 2 or not a:
            return a
        if not self.has_tables:
            return self._gneg(a)
        return self._exp[self._log[a] + self._half]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        if not self.has_tables:
            return self._gmul(a, b)
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if not a:
            raise ZeroElement("zero has no inverse")
        if not self.has_tables:
            return self._gpow(a, self.size - 2)
        return self._exp[(self._n1 - self._log[a]) % self._n1]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if not a:
            if k < 0:
                raise ZeroElement("zero to a negative power")
            return 0 if k else 1
        if not self.has_tables:
            return self._gpow(a, k % (self.size - 1))
        return self._exp[(self._log[a] * k) % self._n1]

    def frob(self, a: int, times: int = 1) -> int:
        """``a ** (q ** times)``."""
        if not a:
            return 0
        return self.pow(a, pow(self.q, times, self.size - 1))

    def from_int(self, k: int) -> int:
        """Image of the integer ``k`` in the prime field."""
        return k % self.p

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.degree:
            raise ConfigError(f"{len(coeffs)} coefficients for a degree {self.degree} field")
        return self._undigits(c % self.p for c in coeffs)

    def coeffs(self, a: int) -> list[int]:
        return self._digits(a)

    def log(self, a: int) -> int:
        if not self.has_tables:
            raise NotImplementedError("discrete logs need table-backed fields")
        if not a:
            raise ZeroElement("log of zero")
        return self._log[a]

    def elem(self, code: int) -> FieldElem:
        return FieldElem(self, code)

    __call__ = elem

    def elements(self) -> range:
        return range(self.size)

    @functools.cached_property
    def base_codes(self) -> tuple[int, ...]:
        """Codes of the embedded F_q, i.e. the fixed points of ``x -> x^q``."""
        if self.m == 1:
            return tuple(range(self.size))
        if self.s == 1:
            return tuple(range(self.p))  # constant polynomials
        # F_q^* is generated by a^((N-1)/(q-1)) for a suitable a
        k = (self.size - 1) // (self.q - 1)
        for a in range(2, self.size):
            b = self.pow(a, k)
            if mult_order(b, self) == self.q - 1:
                units, acc = [], 1
                for _ in range(self.q - 1):
                    units.append(acc)
                    acc = self.mul(acc, b)
                return tuple(sorted([0, *units]))
        raise AssertionError("no generator of F_q^* found")  # pragma: no cover

    def modulus_str(self) -> str:
        return ",".join(str(c) for c in self.modulus)

    # -- numpy batch arithmetic (table-backed fields only) -----------------

    def _tables(self):
        if self._np is None:
            if not self.has_tables:
                raise NotImplementedError("batch arithmetic needs table-backed fields")
            exp = np.asarray(self._exp, dtype=np.int64)
            log = np.asarray(self._log, dtype=np.int64)
            zech = np.asarray(self._zech, dtype=np.int64) if self.p != 2 else None
            self._np = (exp, log, zech)
        return self._np

    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        exp, log, zech = self._tables()
        a, b = np.broadcast_arrays(a, b)
        la = log[a]
        k = (log[b] - la) % self._n1
        z = zech[k]
        out = np.where(z < 0, 0, exp[la + np.maximum(z, 0)])
        out = np.where(a == 0, b, out)
        return np.where(b == 0, a, out)

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a
        exp, log, _ = self._tables()
        return np.where(a == 0, 0, exp[log[a] + self._half])

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        exp, log, _ = self._tables()
        return np.where((a == 0) | (b == 0), 0, exp[log[a] + log[b]])

    def vpow(self, a, k: int):
        a = np.asarray(a, dtype=np.int64)
        exp, log, _ = self._tables()
        zero = 0 if k else 1
        return np.where(a == 0, zero, exp[(log[a] * k) % self._n1])

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroElement("zero has no inverse")
        exp, log, _ = self._tables()
        return exp[(self._n1 - log[a]) % self._n1]

    def vfrob(self, a):
        return self.vpow(a, self.q)

    # -- identity ------------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self.spec == other.spec and self.modulus == other.modulus

    def __hash__(self):
        return hash((self.spec, self.modulus))

    def __repr__(self):
        return f"FieldCtx({self.spec}, modulus=[{self.modulus_str()}])"


@dataclass(frozen=True)
class FieldElem:
    """A value in a :class:`FieldCtx`; supports the usual operators."""

    ctx: FieldCtx
    code: int

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.ctx != self.ctx:
                raise ValueError("elements from different fields")
            return other.code
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return NotImplemented

    def __add__(self, other):
        return FieldElem(self.ctx, self.ctx.add(self.code, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.ctx, self.ctx.sub(self.code, self._coerce(other)))

    def __rsub__(self, other):
        return FieldElem(self.ctx, self.ctx.sub(self._coerce(other), self.code))

    def __mul__(self, other):
        return FieldElem(self.ctx, self.ctx.mul(self.code, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.ctx, self.ctx.div(self.code, self._coerce(other)))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.code))

    def __pow__(self, k: int):
        return FieldElem(self.ctx, self.ctx.pow(self.code, k))

    def __bool__(self):
        return self.code != 0

    def coeffs(self) -> list[int]:
        return self.ctx.coeffs(self.code)

    def __repr__(self):
        return f"<{self.ctx.spec} {self.coeffs()}>"


@functools.lru_cache(maxsize=None)
def make_field(spec: FieldSpec, bound: int = DEFAULT_BOUND) -> FieldCtx:
    """Build (or fetch the cached) context for ``spec``; deterministic across runs."""
    return FieldCtx(spec, bound)


def frobenius_q(a: FieldElem) -> FieldElem:
    return FieldElem(a.ctx, a.ctx.frob(a.code))


def mult_order(a: FieldElem | int, ctx: FieldCtx | None = None) -> int:
    """Multiplicative order of a nonzero element."""
    if isinstance(a, FieldElem):
        ctx, code = a.ctx, a.code
    else:
        code = a
    if not code:
        raise ZeroElement("zero has no multiplicative order")
    n1 = ctx.size - 1
    if ctx.has_tables:
        return n1 // math.gcd(ctx.log(code), n1)
    order = n1
    for r in factorint(n1):
        while order % r == 0 and ctx.pow(code, order // r) == 1:
            order //= r
    return order


def ord_mod(q: int, ell: int) -> int:
    """Smallest ``r >= 1`` with ``q**r == 1 (mod ell)``."""
    if not isprime(ell):
        raise NonPrime(f"ell = {ell} is not prime")
    if q % ell == 0:
        raise EllEqualsP(f"ell = {ell} divides q = {q}")
    if math.gcd(q, ell) != 1:  # pragma: no cover - ell prime makes this the case above
        raise NotCoprime(f"gcd({q}, {ell}) != 1")
    r, acc = 1, q % ell
    while acc != 1:
        acc = acc * q % ell
        r += 1
    return r


def enumerate_field(ctx: FieldCtx) -> list[FieldElem]:
    """All elements, ordered by integer code (zero first)."""
    if ctx.size > ctx.bound:
        raise DegreeOverflow(f"field of size {ctx.size} exceeds bound {ctx.bound}")
    return [FieldElem(ctx, a) for a in range(ctx.size)]


@functools.lru_cache(maxsize=None)
def embedding(small: FieldCtx, big: FieldCtx) -> tuple[int, ...]:
    """Code table for an embedding ``small -> big`` of fields over the same F_p.

    The generator ``x`` of ``small`` goes to the first root (by code) of its
    defining polynomial in ``big``; the resulting map is a field homomorphism.
    """
    if small.p != big.p or big.degree % small.degree:
        raise ConfigError(f"cannot embed {small.spec} into {big.spec}")
    if small.degree == 1:
        return tuple(range(small.size))
    mod = small.modulus

    def ev(z: int) -> int:
        acc = 0
        for c in reversed(mod):
            acc = big.add(big.mul(acc, z), big.from_int(c))
        return acc

    root = next(z for z in range(big.size) if ev(z) == 0)
    powers = [1]
    for _ in range(small.degree - 1):
        powers.append(big.mul(powers[-1], root))
    table = []
    for a in range(small.size):
        acc = 0
        for c, pw in zip(small.coeffs(a), powers):
            if c:
                acc = big.add(acc, big.mul(big.from_int(c), pw))
        table.append(acc)
    return tuple(table)
