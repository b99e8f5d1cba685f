"""Named verification checks. Each one reproduces a single checkable statement at desk scale."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .dickson import batch_act, batch_dickson_product, batch_moore_det, dickson_product_poly, moore_det
from .dl_variety import VarietySpec, check_action, enumerate_variety, fiber_census
from .errors import GldlError
from .ff_tower import FieldSpec, make_field
from .linalg_fq import MatFq, PermWord, det_code, enumerate_gl, lang_map, torus_fixed
from .presentations import (
    all_prime_pairs,
    closed_form_series,
    dickson_rank_check,
    inductive_series,
    poincare_series,
    quillen_presentation,
    root_identity_check,
)
from .strata import census
from .unipotent_nf import dl_companion, normal_form, random_InU, random_u_star, rho


@dataclass
class CheckReport:
    check_id: str
    statement: str
    params: dict
    passed: bool
    witness: object = None
    wall_time: float | None = None
    time_limit: float | None = None
    details: dict = field(default_factory=dict)

    @property
    def within_time(self) -> bool:
        return self.time_limit is None or self.wall_time is None or self.wall_time < self.time_limit

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "check": self.check_id,
            "statement": self.statement,
            "params": self.params,
            "pass": self.passed,
            "witness": self.witness,
            "details": self.details,
        }
        if timings:
            out["wall_time"] = round(self.wall_time or 0.0, 4)
            out["time_limit"] = self.time_limit
        return out


@dataclass(frozen=True)
class Check:
    check_id: str
    statement: str
    time_limit: float
    fn: Callable[[int], tuple[bool, object, dict]]
    params: dict


def _q_no_rational_points(seed: int):
    cases = [(2, 2), (2, 3), (3, 2), (3, 3)]
    counts = {}
    for n, q in cases:
        counts[f"n={n},q={q}"] = len(enumerate_variety(VarietySpec("Q", n, FieldSpec(q)), 1))
    bad = {k: v for k, v in counts.items() if v}
    return not bad, bad or None, {"counts": counts}


def _companion_identity(seed: int):
    cases = [(2, 2, m) for m in range(1, 5)] + [(3, 2, 1), (3, 2, 2), (2, 3, 1), (2, 3, 2)]
    checked = {}
    for n, q, m in cases:
        ctx = make_field(FieldSpec(q, 1, m))
        k = 0
        for x in itertools.product(range(ctx.size), repeat=n):
            if not moore_det(ctx, x):
                continue
            try:
                _, dv = dl_companion(ctx, x)
            except GldlError as exc:
                return False, {"case": [n, q, m], "x": list(x), "error": str(exc)}, {"checked": checked}
            if dv.c != dickson_product_poly(ctx, x).coeffs[:n]:
                return False, {"case": [n, q, m], "x": list(x)}, {"checked": checked}
            k += 1
        checked[f"n={n},q={q},m={m}"] = k
    return True, None, {"checked": checked}


def _dickson_invariance(seed: int):
    cases = [(2, 2, 5), (2, 3, 3), (3, 2, 4)]
    samples = 1000
    rng = np.random.default_rng(seed)
    details = {}
    for n, q, m in cases:
        ctx = make_field(FieldSpec(q, 1, m))
        X = rng.integers(0, ctx.size, size=(n, samples), dtype=np.int64)
        c = batch_dickson_product(ctx, X)
        e = batch_moore_det(ctx, X)
        ng = 0
        for g in enumerate_gl(n, ctx):
            Y = batch_act(ctx, g, X)
            if not np.array_equal(batch_dickson_product(ctx, Y), c):
                return False, {"case": [n, q, m], "g": g.to_json(), "invariant": "c"}, details
            d = det_code(ctx, g.rows)
            if not np.array_equal(batch_moore_det(ctx, Y), ctx.vmul(e, d)):
                return False, {"case": [n, q, m], "g": g.to_json(), "invariant": "e"}, details
            ng += 1
        details[f"n={n},q={q},m={m}"] = {"group_elements": ng, "points": samples}
    return True, None, details


def _strata_census(seed: int):
    details = {}
    for n, q, m in itertools.product((1, 2, 3), (2, 3), (1, 2, 3)):
        if q ** (m * n) > 1 << 20:
            continue
        c = census(n, FieldSpec(q), m)
        details[f"n={n},q={q},m={m}"] = c.counts
        if not c.passed:
            return False, c.to_json(), details
    return True, None, details


def _rank_ledger(seed: int):
    details = {}
    for n, q in itertools.product(range(1, 6), (2, 3, 4)):
        r = dickson_rank_check(n, q)
        details[f"n={n},q={q}"] = r.computed
        if not r.passed:
            return False, r.to_json(), details
    return True, None, details


def _series_recurrence(seed: int):
    D = 40
    for q, ell in [(2, 3), (2, 7), (4, 3), (3, 13)]:
        for n in range(1, 7):
            rec = inductive_series(n, q, ell, D)
            closed = closed_form_series(n, q, ell, D)
            pres = poincare_series(quillen_presentation(n, q, ell), D)
            if not rec == closed == pres:
                return False, {"q": q, "ell": ell, "n": n, "recurrence": rec.to_json(),
                               "closed": closed.to_json()}, {}
    return True, None, {"degree": D}


def _root_identity(seed: int):
    pairs = all_prime_pairs(9, 13)
    for q, ell in pairs:
        root_identity_check(q, ell)
    return True, None, {"pairs": len(pairs)}


def _free_action_fibers(seed: int):
    details: dict = {"actions": {}, "fibers": {}}
    base = FieldSpec(2)
    for n, m in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2)]:
        for kind, group in (("Q", "SL"), ("Qprime", "GL")):
            rep = check_action(VarietySpec(kind, n, base), m, group, strict=False)
            details["actions"][f"{kind},{group},n={n},m={m}"] = rep.count
            if rep.violations or not rep.closed:
                return False, rep.to_json(), details
    for m in (1, 2):
        for t in range(2**m):
            fc = fiber_census(base, 2, m, [t], ladder=6, strict=False)
            details["fibers"][f"m={m},target={t}"] = fc.stabilized_count
            if not fc.passed:
                return False, fc.to_json(), details
    return True, None, details


NF_FIELDS = [(2, 1), (2, 2), (2, 3), (2, 6), (3, 1), (3, 2), (5, 1), (7, 1)]


def _normal_form(seed: int):
    rng = random.Random(seed)
    trials = 1000
    for n in (3, 4):
        for t in range(trials):
            p, m = NF_FIELDS[t % len(NF_FIELDS)]
            ctx = make_field(FieldSpec(p, 1, m))
            v = random_u_star(ctx, n, rng)
            u = random_InU(ctx, n, rng)
            a = normal_form(v)
            shape = all(a.matrix.rows[i][j] == int(i == j) for i in range(n) for j in range(n - 1))
            again = normal_form(a.matrix)
            moved = normal_form(rho(u, v))
            if not (shape and again.steps == 0 and again.d == a.d and moved.d == a.d
                    and rho(a.transform, v) == a.matrix):
                return False, {"n": n, "field": f"{p}^{m}", "v": v.to_json(), "u": u.to_json()}, {}
    return True, None, {"trials_per_n": trials, "fields": [f"{p}^{m}" for p, m in NF_FIELDS]}


def _torus_orders(seed: int):
    details = {}
    for n in (1, 2, 3):
        for q in (2, 3):
            seen = set()
            for perm in itertools.permutations(range(1, n + 1)):
                w = _perm_word(perm)
                key = tuple(sorted(w.cycle_lengths()))
                if key in seen:
                    continue
                seen.add(key)
                rep = torus_fixed(w, q, "GL", brute_force=True)
                details[f"GL,n={n},q={q},type={list(key)}"] = rep.order
                if not rep.consistent:
                    return False, rep.to_json(), details
            sl = torus_fixed(PermWord.coxeter(n) if n > 1 else PermWord(1, ()), q, "SL", brute_force=True)
            details[f"SL,n={n},q={q}"] = sl.order
            if not sl.consistent or sl.order != (q**n - 1) // (q - 1):
                return False, sl.to_json(), details
    return True, None, details


def _perm_word(perm: tuple[int, ...]) -> PermWord:
    n = len(perm)
    seen: set[int] = set()
    cycles = []
    for i in range(1, n + 1):
        if i in seen:
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i - 1]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = perm[j - 1]
        if len(cyc) > 1:
            cycles.append(tuple(cyc))
    return PermWord(n, tuple(cycles))


def _lang_kernel(seed: int):
    ctx = make_field(FieldSpec(2, 1, 2))
    small = {g.rows for g in enumerate_gl(2, ctx)}
    everything = list(_all_gl2(ctx))
    kernel = {g.rows for g in everything if lang_map(g).is_identity()}
    if len(everything) != 180 or kernel != small or len(small) != 6:
        return False, {"gl_size": len(everything), "kernel": len(kernel), "small": len(small)}, {}
    for g in everything:
        L = lang_map(g)
        for rows in small:
            if lang_map(MatFq(ctx, rows) @ g) != L:
                return False, {"g": g.to_json(), "gamma": [list(r) for r in rows]}, {}
    return True, None, {"gl_size": 180, "kernel": 6}


def _all_gl2(ctx):
    for a, b, c, d in itertools.product(range(ctx.size), repeat=4):
        if ctx.sub(ctx.mul(a, d), ctx.mul(b, c)):
            yield MatFq(ctx, ((a, b), (c, d)))


CHECKS: list[Check] = [
    Check("q-no-rational-points", "The hypersurface e_n^{q-1} = 1 has no F_q-points.", 1.0,
          _q_no_rational_points, {"cases": [[2, 2], [2, 3], [3, 2], [3, 3]]}),
    Check("companion-identity",
          "x^{-1}F(x) is the companion matrix of the Dickson polynomial of x whenever e(x) != 0.", 30.0,
          _companion_identity, {"cases": "(2,2,m<=4), (3,2,m<=2), (2,3,m<=2)"}),
    Check("dickson-invariance", "c_{n,i}(gx) = c_{n,i}(x) and e(gx) = det(g) e(x) for g in GL_n(F_q).", 60.0,
          _dickson_invariance, {"cases": [[2, 2], [2, 3], [3, 2]], "samples": 1000}),
    Check("strata-census",
          "The corank-i stratum of F_{q^m}^n has gauss(n,i,q) prod_{j<n-i}(q^m - q^j) points.", 60.0,
          _strata_census, {"n": "<=3", "q": [2, 3], "m": "<=3"}),
    Check("rank-ledger", "The Dickson degree product times q(n) equals |SL_n(F_q)|.", 1.0,
          _rank_ledger, {"n": "<=5", "q": [2, 3, 4]}),
    Check("series-recurrence",
          "The stratification recurrence reproduces the Poincare series of the GL_n(F_q) cohomology ring.", 1.0,
          _series_recurrence, {"pairs": [[2, 3], [2, 7], [4, 3], [3, 13]], "n": "<=6", "degree": 40}),
    Check("root-identity", "prod_{i<r}(X - q^i t) = X^r - t^r mod ell with r = ord_ell(q).", 1.0,
          _root_identity, {"q": "<=9", "ell": "primes <=13"}),
    Check("free-action-fibers",
          "GL_n(F_q) acts freely on Q' and SL_n(F_q) on Q; fibers of Q' -> A^{n-1} have |GL_n(F_q)| points.",
          120.0, _free_action_fibers, {"actions": "(2,2,m<=4), (3,2,2)", "fibers": "n=2, q=2, ladder 6"}),
    Check("normal-form",
          "Every rho-orbit in U* has a unique last-column representative, reached by root elimination.", 30.0,
          _normal_form, {"n": [3, 4], "trials": 1000}),
    Check("torus-orders",
          "|T(w)^F| = prod(q^{r_j} - 1); the SL n-cycle torus has order (q^n - 1)/(q - 1).", 10.0,
          _torus_orders, {"n": "<=3", "q": [2, 3]}),
    Check("lang-kernel", "The Lang map on GL_2(F_4) has fiber GL_2(F_2) over 1 and is left GL_2(F_2)-invariant.",
          5.0, _lang_kernel, {"field": "4"}),
]

CHECK_IDS = [c.check_id for c in CHECKS]


def run_check(check: Check, seed: int = 0) -> CheckReport:
    start = time.perf_counter()
    try:
        passed, witness, details = check.fn(seed)
    except (GldlError, AssertionError) as exc:
        passed, witness, details = False, {"error": type(exc).__name__, "message": str(exc)}, {}
    elapsed = time.perf_counter() - start
    return CheckReport(check.check_id, check.statement, check.params, passed, witness, elapsed,
                       check.time_limit, details)


def run_all(seed: int = 0, only: list[str] | None = None) -> list[CheckReport]:
    chosen = [c for c in CHECKS if only is None or c.check_id in only]
    return sorted((run_check(c, seed) for c in chosen), key=lambda r: CHECK_IDS.index(r.check_id))

