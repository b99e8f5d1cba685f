"""Graded presentations of mod-ell cohomology rings and truncated Poincare series.

The rings are presentation data. What is checked is internal consistency:
the stratification recurrence reproduces the closed form, the Dickson degree
ledger reproduces ``|SL_n(F_q)|``, and the root identity behind the choice of
``r = ord_ell(q)`` holds symbolically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .errors import ConfigError, IdentityFailure, TruncationTooSmall
from .ff_tower import ord_mod, prime_power
from .linalg_fq import sl_order

MAX_SERIES_DEGREE = 10_000
VARIANTS = ("gl", "sl", "motivic")


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    kind: str  # "poly" or "ext"
    weight: int | None = None

    def to_json(self) -> dict:
        out = {"name": self.name, "degree": self.degree, "kind": self.kind}
        if self.weight is not None:
            out["weight"] = self.weight
        return out


@dataclass(frozen=True)
class GradedPresentation:
    n: int
    q: int
    ell: int
    r: int
    variant: str
    generators: tuple[Generator, ...]

    @property
    def polynomial(self) -> list[Generator]:
        return [g for g in self.generators if g.kind == "poly"]

    @property
    def exterior(self) -> list[Generator]:
        return [g for g in self.generators if g.kind == "ext"]

    @property
    def convention_dependent(self) -> bool:
        """At ell = 2 the exterior factor could also be read with e^2 nonzero."""
        return self.ell == 2

    def forget_weights(self) -> GradedPresentation:
        gens = tuple(Generator(g.name, g.degree, g.kind) for g in self.generators if g.name != "tau")
        return GradedPresentation(self.n, self.q, self.ell, self.r, "gl", gens)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "ell": self.ell,
            "r": self.r,
            "variant": self.variant,
            "generators": [g.to_json() for g in self.generators],
            "convention_dependent": self.convention_dependent,
        }


def _check_ell(q: int, ell: int) -> int:
    prime_power(q)
    return ord_mod(q, ell)


def quillen_presentation(n: int, q: int, ell: int) -> GradedPresentation:
    """``Z/ell[c_r, ..., c_{r[n/r]}] (x) Delta(e_r, ..., e_{r[n/r]})`` with ``|c_k| = 2k``, ``|e_k| = 2k - 1``."""
    if n < 1:
        raise ConfigError("n must be positive")
    r = _check_ell(q, ell)
    ks = [r * j for j in range(1, n // r + 1)]
    gens = [Generator(f"c_{k}", 2 * k, "poly") for k in ks] + [Generator(f"e_{k}", 2 * k - 1, "ext") for k in ks]
    return GradedPresentation(n, q, ell, r, "gl", tuple(gens))


def sl_presentation(n: int, q: int, ell: int) -> GradedPresentation:
    """Same as the GL ring when ``r >= 2``; for ``r = 1`` the generators ``c_1, e_1`` drop out."""
    gl = quillen_presentation(n, q, ell)
    gens = gl.generators
    if gl.r == 1:
        gens = tuple(g for g in gens if g.name not in ("c_1", "e_1"))
    return GradedPresentation(n, q, ell, gl.r, "sl", gens)


def motivic_presentation(n: int, q: int, ell: int) -> GradedPresentation:
    """GL generators with weights ``k`` on ``c_k, e_k`` plus ``tau`` of bidegree ``(0, 1)``."""
    gl = quillen_presentation(n, q, ell)
    gens = [Generator("tau", 0, "poly", 1)]
    for g in gl.generators:
        k = int(g.name.split("_")[1])
        gens.append(Generator(g.name, g.degree, g.kind, k))
    return GradedPresentation(n, q, ell, gl.r, "motivic", tuple(gens))


def presentation(n: int, q: int, ell: int, variant: str = "gl") -> GradedPresentation:
    if variant not in VARIANTS:
        raise ConfigError(f"variant must be one of {VARIANTS}")
    return {"gl": quillen_presentation, "sl": sl_presentation, "motivic": motivic_presentation}[variant](n, q, ell)


# -- truncated series ---------------------------------------------------------------------


@dataclass(frozen=True)
class PoincareSeries:
    """Integer power series ``a_0 + a_1 t + ... + a_D t^D`` (higher terms dropped)."""

    D: int
    coeffs: tuple[int, ...]

    @classmethod
    def one(cls, D: int) -> PoincareSeries:
        return cls.from_poly(D, {0: 1})

    @classmethod
    def from_poly(cls, D: int, terms: dict[int, int]) -> PoincareSeries:
        if not 0 <= D <= MAX_SERIES_DEGREE:
            raise ConfigError(f"series degree must lie in [0, {MAX_SERIES_DEGREE}]")
        a = [0] * (D + 1)
        for k, c in terms.items():
            if k <= D:
                a[k] += c
        return cls(D, tuple(a))

    def __mul__(self, other: PoincareSeries) -> PoincareSeries:
        D = min(self.D, other.D)
        out = [0] * (D + 1)
        for i, a in enumerate(self.coeffs[: D + 1]):
            if a:
                for j, b in enumerate(other.coeffs[: D + 1 - i]):
                    out[i + j] += a * b
        return PoincareSeries(D, tuple(out))

    def __truediv__(self, other: PoincareSeries) -> PoincareSeries:
        if other.coeffs[0] != 1:
            raise ConfigError("can only divide by a series with constant term 1")
        D = min(self.D, other.D)
        out = list(self.coeffs[: D + 1])
        for k in range(D + 1):
            c = out[k]
            if c:
                for j in range(1, D + 1 - k):
                    if other.coeffs[j]:
                        out[k + j] -= c * other.coeffs[j]
        return PoincareSeries(D, tuple(out))

    def __add__(self, other: PoincareSeries) -> PoincareSeries:
        D = min(self.D, other.D)
        return PoincareSeries(D, tuple(a + b for a, b in zip(self.coeffs[: D + 1], other.coeffs[: D + 1])))

    def to_json(self) -> list[int]:
        return list(self.coeffs)


def _binom(D: int, k: int, sign: int) -> PoincareSeries:
    """``1 + sign * t^k``."""
    return PoincareSeries.from_poly(D, {0: 1, k: sign} if k else {0: 1 + sign})


def poincare_series(pres: GradedPresentation, D: int) -> PoincareSeries:
    """Product of ``1/(1 - t^|c|)`` and ``1 + t^|e|`` over generators; ``tau`` is left out."""
    s = PoincareSeries.one(D)
    for g in pres.generators:
        if g.name == "tau":
            continue
        if g.kind == "poly":
            s = s / _binom(D, g.degree, -1)
        else:
            s = s * _binom(D, g.degree, 1)
    return s


def closed_form_series(n: int, q: int, ell: int, D: int) -> PoincareSeries:
    """``prod_{j <= n/r} (1 + t^{2rj-1}) / (1 - t^{2rj})`` expanded directly."""
    r = _check_ell(q, ell)
    s = PoincareSeries.one(D)
    for j in range(1, n // r + 1):
        s = s * _binom(D, 2 * r * j - 1, 1) / _binom(D, 2 * r * j, -1)
    return s


@dataclass
class RecurrenceTrace:
    """Series of ``H_G(X(i))`` for ``i = 1..n+1`` and of ``H(BG_i)`` for ``i = 0..n``."""

    strata: list[PoincareSeries] = field(default_factory=list)
    groups: list[PoincareSeries] = field(default_factory=list)


def inductive_series(n: int, q: int, ell: int, D: int, trace: RecurrenceTrace | None = None) -> PoincareSeries:
    """Build the Poincare series of ``H^*(BG_n)`` by climbing the stratification ``X(1) < ... < X(n+1)``.

    With ``B_i`` the series of ``H^*(BG_i)`` and ``S_i`` that of ``H_{G_n}(X(i)) = H_{G_{i-1}} (x) Lambda(e_i)``:

    * ``S_1 = 1 + t``;
    * if ``r | i``: ``S_{i+1} = S_i (1 + t^{2i}(1 + t)/(1 - t^{2i}))`` and
      ``B_i = B_{i-1} (1 + t^{2i-1})/(1 - t^{2i})``;
    * otherwise ``e_i`` is killed: ``S_{i+1} = S_i (1 + t^{2i+1})/(1 + t^{2i-1})`` and ``B_i = B_{i-1}``.

    ``X(n+1)`` differs from ``A^n`` by the point ``F(n) = {0}``, so ``S_{n+1} = B_n (1 + t^{2n+1})``
    and the answer is ``B_n``; both readings are computed and must agree.
    """
    if n < 1:
        raise ConfigError("n must be positive")
    if D < 2 * n + 1:
        raise TruncationTooSmall(f"degree {D} cannot resolve the top stratum; need at least {2 * n + 1}")
    r = _check_ell(q, ell)
    B = PoincareSeries.one(D)
    S = _binom(D, 1, 1)
    if trace is not None:
        trace.groups.append(B)
        trace.strata.append(S)
    for i in range(1, n + 1):
        if i % r == 0:
            new = PoincareSeries.from_poly(D, {2 * i: 1, 2 * i + 1: 1}) / _binom(D, 2 * i, -1)
            bump = PoincareSeries.one(D) + new
            S = S * bump
            B = B * _binom(D, 2 * i - 1, 1) / _binom(D, 2 * i, -1)
        else:
            S = S * _binom(D, 2 * i + 1, 1) / _binom(D, 2 * i - 1, 1)
        if trace is not None:
            trace.groups.append(B)
            trace.strata.append(S)
    top = S / _binom(D, 2 * n + 1, 1)
    if top != B:
        raise IdentityFailure("top stratum series and group series disagree")
    return B


# -- the Dickson degree ledger ------------------------------------------------------------


def _times_geometric(poly: list[int], length: int) -> list[int]:
    """Multiply by ``1 + t + ... + t^{length-1}`` via a sliding window sum."""
    out = [0] * (len(poly) + length - 1)
    window = 0
    for k in range(len(out)):
        if k < len(poly):
            window += poly[k]
        if k - length >= 0:
            window -= poly[k - length]
        out[k] = window
    return out


@dataclass(frozen=True)
class RankLedger:
    n: int
    q: int
    computed: int
    expected: int
    polynomial: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return self.computed == self.expected

    def to_json(self, include_polynomial: bool = False) -> dict:
        out = {"n": self.n, "q": self.q, "computed": self.computed, "expected": self.expected,
               "degree": len(self.polynomial) - 1, "pass": self.passed}
        if include_polynomial:
            out["polynomial"] = list(self.polynomial)
        return out


def dickson_rank_check(n: int, q: int) -> RankLedger:
    """``prod_{i<n} [q^n - q^i]_t * [q(n)]_t`` at ``t = 1`` against ``|SL_n(F_q)|``.

    ``[k]_t`` is ``1 + t + ... + t^{k-1}``; the last factor runs up to ``t^{q + ... + q^{n-1}}``.
    """
    prime_power(q)
    poly = [1]
    for i in range(1, n):
        poly = _times_geometric(poly, q**n - q**i)
    poly = _times_geometric(poly, sum(q**i for i in range(1, n)) + 1)
    return RankLedger(n, q, sum(poly), sl_order(n, q), tuple(poly))


# -- the root identity ------------------------------------------------------------------


Poly = dict[tuple[int, ...], int]


def _pmul(a: Poly, b: Poly, ell: int) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = (out.get(e, 0) + ca * cb) % ell
    return {e: c for e, c in out.items() if c}


@dataclass
class RootIdentityReport:
    q: int
    ell: int
    r: int
    product: dict[str, int]
    passed: bool
    multi_passed: bool

    def to_json(self) -> dict:
        return {"q": self.q, "ell": self.ell, "r": self.r, "product": self.product,
                "pass": self.passed and self.multi_passed}


def _fmt(e: tuple[int, ...]) -> str:
    names = ["X"] + [f"t{j}" for j in range(1, len(e))] if len(e) > 2 else ["X", "t"]
    return "*".join(f"{v}^{k}" for v, k in zip(names, e) if k) or "1"


def root_identity_check(q: int, ell: int, k_max: int = 3) -> RootIdentityReport:
    """``prod_{i<r} (X - q^i t) = X^r - t^r`` over ``Z/ell``, and its k-fold version for ``k <= k_max``.

    Raises :class:`IdentityFailure` with the offending expansion when either fails.
    """
    r = _check_ell(q, ell)
    prod: Poly = {(0, 0): 1}
    for i in range(r):
        prod = _pmul(prod, {(1, 0): 1, (0, 1): (-pow(q, i, ell)) % ell}, ell)
    want = {e: c for e, c in {(r, 0): 1, (0, r): (-1) % ell}.items() if c}
    ok = prod == want
    multi_ok = True
    for k in range(1, k_max + 1):
        lhs: Poly = {(0,) * (k + 1): 1}
        rhs: Poly = {(0,) * (k + 1): 1}
        for j in range(1, k + 1):
            tj = tuple(int(v == j) for v in range(k + 1))
            x = tuple(int(v == 0) for v in range(k + 1))
            for i in range(r):
                lhs = _pmul(lhs, {x: 1, tj: (-pow(q, i, ell)) % ell}, ell)
            xr = tuple(r * a for a in x)
            tr = tuple(r * a for a in tj)
            rhs = _pmul(rhs, {xr: 1, tr: (-1) % ell}, ell)
        if lhs != rhs or any(any(a % r for a in e) for e in lhs):
            multi_ok = False
    report = RootIdentityReport(q, ell, r, {_fmt(e): c for e, c in sorted(prod.items(), reverse=True)}, ok, multi_ok)
    if not (ok and multi_ok):
        raise IdentityFailure(f"root identity fails for q={q}, ell={ell}: {report.product}")
    return report


def all_prime_pairs(q_max: int, ell_max: int) -> list[tuple[int, int]]:
    """Prime powers ``q <= q_max`` and primes ``ell <= ell_max`` prime to ``q``."""
    from sympy import isprime

    qs = [q for q in range(2, q_max + 1) if _is_prime_power(q)]
    ells = [e for e in range(2, ell_max + 1) if isprime(e)]
    return [(q, e) for q, e in product(qs, ells) if q % e]


def _is_prime_power(q: int) -> bool:
    try:
        prime_power(q)
    except ConfigError:
        return False
    return True

