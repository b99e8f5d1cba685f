"""Command-line front end: ``gldl <command> [options]``.

Every command produces a list of reports; JSON output is canonical and CSV is
a flat projection of it. Wall times are only emitted with ``--timings`` so
that equal configurations give byte-identical reports.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from dataclasses import asdict, dataclass, fields
from typing import Callable

from . import __version__
from .checks import CHECK_IDS, CheckReport, run_all
from .dickson import dickson_cofactor, dickson_from_product, moore_det
from .dl_variety import KINDS, VarietySpec, check_action, fiber_census, scaling_cover, torsor_check
from .errors import ConfigError, GldlError
from .ff_tower import DEFAULT_BOUND, FieldSpec, make_field, mult_order
from .presentations import VARIANTS, inductive_series, poincare_series, presentation
from .strata import census
from .unipotent_nf import normal_form, random_u_star

SCHEMA = 1
PROFILES = ("desk",)


@dataclass
class RunConfig:
    command: str
    action: str | None = None
    field: str = "2"
    n: int = 2
    ext: int = 1
    ladder: int = 6
    ell: int = 3
    seed: int = 0
    trials: int = 10
    format: str = "json"
    bound: int = DEFAULT_BOUND
    kind: str = "Q"
    group: str = "GL"
    sign_variant: bool = False
    target: str | None = None
    point: str | None = None
    variant: str = "gl"
    series_degree: int = 40
    profile: str = "desk"
    only: str | None = None

    @property
    def field_spec(self) -> FieldSpec:
        return FieldSpec.parse(self.field, m=self.ext)

    def to_json(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def _codes(text: str | None, size: int, what: str) -> list[int]:
    if text is None:
        raise ConfigError(f"--{what} is required")
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ConfigError(f"--{what} takes comma-separated element codes") from exc
    if any(not 0 <= v < size for v in vals):
        raise ConfigError(f"--{what} codes must lie in [0, {size})")
    return vals


def _report(check_id: str, cfg: RunConfig, passed: bool, details: dict, start: float) -> CheckReport:
    return CheckReport(check_id, "", {"field": cfg.field, "n": cfg.n, "ext": cfg.ext}, passed, None,
                       time.perf_counter() - start, None, details)


def _cmd_field(cfg: RunConfig) -> list[CheckReport]:
    start = time.perf_counter()
    ctx = make_field(cfg.field_spec, cfg.bound)
    gen = ctx.generator
    details = {
        "field": str(ctx.spec),
        "p": ctx.p,
        "q": ctx.q,
        "size": ctx.size,
        "modulus": list(ctx.modulus),
        "generator": ctx.coeffs(gen) if gen is not None else None,
        "generator_order": mult_order(gen, ctx) if gen is not None else None,
        "base_field_codes": list(ctx.base_codes),
    }
    ok = gen is None or details["generator_order"] == ctx.size - 1
    return [_report("field", cfg, ok, details, start)]


def _cmd_variety(cfg: RunConfig) -> list[CheckReport]:
    start = time.perf_counter()
    base = FieldSpec.parse(cfg.field).base()
    if cfg.action == "census":
        spec = VarietySpec(cfg.kind, cfg.n, base, cfg.sign_variant)
        rep = check_action(spec, cfg.ext, cfg.group, strict=False, bound=cfg.bound)
        return [_report("variety-census", cfg, rep.closed and not (rep.free_claimed and rep.violations),
                        rep.to_json(), start)]
    if cfg.action == "fiber":
        small = make_field(base.extend(cfg.ext))
        target = _codes(cfg.target, small.size, "target")
        fc = fiber_census(base, cfg.n, cfg.ext, target, cfg.ladder, cfg.sign_variant, strict=False)
        return [_report("variety-fiber", cfg, fc.passed, fc.to_json(), start)]
    if cfg.action == "cover":
        if cfg.kind == "Qprime":
            tr = torsor_check(base, cfg.n, cfg.ext, cfg.ladder, cfg.sign_variant)
            return [_report("variety-torsor", cfg, tr.passed, tr.to_json(), start)]
        cov = scaling_cover(VarietySpec(cfg.kind, cfg.n, base), cfg.ext, cfg.ladder)
        return [_report("variety-cover", cfg, cov.covered and cov.fibers_ok, cov.to_json(), start)]
    raise ConfigError("variety needs an action: census, fiber or cover")


def _cmd_invariants(cfg: RunConfig) -> list[CheckReport]:
    ctx = make_field(cfg.field_spec, cfg.bound)
    if cfg.point is not None:
        points = [tuple(_codes(cfg.point, ctx.size, "point"))]
    else:
        rng = random.Random(cfg.seed)
        points = [tuple(rng.randrange(ctx.size) for _ in range(cfg.n)) for _ in range(cfg.trials)]
    out = []
    for x in points:
        start = time.perf_counter()
        oracle = dickson_from_product(ctx, x)
        details = {"x": [ctx.coeffs(a) for a in x], **oracle.to_json()}
        agree = True
        if moore_det(ctx, x):
            agree = dickson_cofactor(ctx, x).c == oracle.c
        details["routes_agree"] = agree
        out.append(_report("invariants", cfg, agree, details, start))
    return out


def _cmd_normal_form(cfg: RunConfig) -> list[CheckReport]:
    ctx = make_field(cfg.field_spec, cfg.bound)
    rng = random.Random(cfg.seed)
    out = []
    for _ in range(cfg.trials):
        start = time.perf_counter()
        v = random_u_star(ctx, cfg.n, rng)
        res = normal_form(v)
        details = {"input": v.to_json(), **res.to_json()}
        out.append(_report("normal-form", cfg, normal_form(res.matrix).steps == 0, details, start))
    return out


def _cmd_strata(cfg: RunConfig) -> list[CheckReport]:
    if cfg.action != "census":
        raise ConfigError("strata needs the action census")
    start = time.perf_counter()
    c = census(cfg.n, FieldSpec.parse(cfg.field), cfg.ext, cfg.bound)
    return [_report("strata-census", cfg, c.passed, c.to_json(), start)]


def _cmd_presentation(cfg: RunConfig) -> list[CheckReport]:
    start = time.perf_counter()
    q = FieldSpec.parse(cfg.field).q
    pres = presentation(cfg.n, q, cfg.ell, cfg.variant)
    series = poincare_series(pres, cfg.series_degree)
    details = {**pres.to_json(), "series": series.to_json()}
    ok = all(a >= 0 for a in series.coeffs)
    if cfg.variant == "gl" and cfg.series_degree >= 2 * cfg.n + 1:
        ok = ok and inductive_series(cfg.n, q, cfg.ell, cfg.series_degree) == series
    rep = _report("presentation", cfg, ok, details, start)
    rep.params = {"field": cfg.field, "n": cfg.n, "ell": cfg.ell, "variant": cfg.variant}
    return [rep]


def _cmd_verify_all(cfg: RunConfig) -> list[CheckReport]:
    if cfg.profile not in PROFILES:
        raise ConfigError(f"unknown profile {cfg.profile!r}; choose from {PROFILES}")
    only = None
    if cfg.only:
        only = [s.strip() for s in cfg.only.split(",")]
        unknown = set(only) - set(CHECK_IDS)
        if unknown:
            raise ConfigError(f"unknown check ids: {sorted(unknown)}")
    return run_all(cfg.seed, only)


COMMANDS: dict[str, Callable[[RunConfig], list[CheckReport]]] = {
    "field": _cmd_field,
    "variety": _cmd_variety,
    "invariants": _cmd_invariants,
    "normal-form": _cmd_normal_form,
    "strata": _cmd_strata,
    "presentation": _cmd_presentation,
    "verify-all": _cmd_verify_all,
}


def run(cfg: RunConfig) -> list[CheckReport]:
    """Dispatch one command. Module errors become failed reports; bad configuration raises."""
    if cfg.command not in COMMANDS:
        raise ConfigError(f"unknown command {cfg.command!r}")
    if cfg.format not in ("json", "csv"):
        raise ConfigError("--format must be json or csv")
    start = time.perf_counter()
    try:
        return COMMANDS[cfg.command](cfg)
    except ConfigError:
        raise
    except GldlError as exc:
        rep = _report(cfg.command, cfg, False, {}, start)
        rep.witness = {"error": type(exc).__name__, "message": str(exc)}
        return [rep]


# -- output -----------------------------------------------------------------------------


def render_json(cfg: RunConfig, reports: list[CheckReport], timings: bool) -> str:
    doc = {
        "schema": SCHEMA,
        "version": __version__,
        "config": cfg.to_json(),
        "pass": all(r.passed for r in reports),
        "reports": [r.to_json(timings) for r in reports],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _flatten(prefix: str, value, out: dict) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(value, list):
        out[prefix] = json.dumps(value, separators=(",", ":"))
    else:
        out[prefix] = value


def render_csv(reports: list[CheckReport], timings: bool) -> str:
    rows = []
    for r in reports:
        flat: dict = {}
        _flatten("", r.to_json(timings), flat)
        rows.append(flat)
    columns = sorted({k for row in rows for k in row})
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


# -- argument parsing --------------------------------------------------------------------


def read_config_file(path: str) -> dict[str, str]:
    """``key=value`` lines; blank lines and ``#`` comments are skipped."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            k, v = line.split("=", 1)
            out[k.strip().replace("-", "_")] = v.strip()
    return out


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--bound", type=int, default=None, help="enumeration bound on field/point counts")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--config", default=None, help="file of key=value lines; flags take precedence")
    p.add_argument("--output", default=None, help="write the report here instead of stdout")
    p.add_argument("--timings", action="store_true", help="include wall times (breaks byte-identity)")


def _add_field(p: argparse.ArgumentParser, ext: bool = True) -> None:
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--field", default=None, help="base field as p^s")
    if ext:
        p.add_argument("--ext", type=int, default=None, help="extension degree m over F_q")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gldl", description="Exact checks for Dickson invariants, "
                                     "Deligne-Lusztig hypersurfaces and related ledgers over finite fields.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", help="construct F_{q^m} and print its modulus")
    _add_field(p)
    _add_common(p)

    p = sub.add_parser("variety", help="points, orbits, fibers and covers of Q, Q', X(1)")
    p.add_argument("action", choices=("census", "fiber", "cover"))
    _add_field(p)
    p.add_argument("--kind", choices=KINDS, default=None)
    p.add_argument("--group", choices=("GL", "SL"), default=None)
    p.add_argument("--sign-variant", action="store_true", default=None)
    p.add_argument("--target", default=None, help="comma-separated codes of c_{n,1..n-1} in F_{q^m}")
    p.add_argument("--ladder", type=int, default=None, help="extension ladder cap M")
    _add_common(p)

    p = sub.add_parser("invariants", help="Dickson values by both routes")
    _add_field(p)
    p.add_argument("--point", default=None, help="comma-separated element codes")
    _add_common(p)

    p = sub.add_parser("normal-form", help="last-column normal forms of random elements of U*")
    _add_field(p)
    _add_common(p)

    p = sub.add_parser("strata", help="corank census")
    p.add_argument("action", choices=("census",))
    _add_field(p)
    _add_common(p)

    p = sub.add_parser("presentation", help="graded presentation and Poincare series")
    _add_field(p, ext=False)
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--variant", choices=VARIANTS, default=None)
    p.add_argument("--series-degree", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("verify-all", help="run every acceptance check")
    p.add_argument("--profile", choices=PROFILES, default=None)
    p.add_argument("--only", default=None, help="comma-separated check ids")
    _add_common(p)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if ns.config:
        values.update(read_config_file(ns.config))
    for k, v in vars(ns).items():
        if v is not None and k not in ("config", "output", "timings"):
            values[k] = v
    known = {f.name: f for f in fields(RunConfig)}
    unknown = set(values) - set(known)
    if unknown:
        raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
    cfg = RunConfig(command=values.pop("command"))
    for k, v in values.items():
        default = getattr(cfg, k)
        if isinstance(v, str) and isinstance(default, bool):
            v = v.lower() in ("1", "true", "yes")
        elif isinstance(v, str) and isinstance(default, int):
            try:
                v = int(v)
            except ValueError as exc:
                raise ConfigError(f"{k} must be an integer") from exc
        setattr(cfg, k, v)
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        reports = run(cfg)
    except ConfigError as exc:
        print(f"gldl: error: {exc}", file=sys.stderr)
        return 2
    text = render_json(cfg, reports, ns.timings) if cfg.format == "json" else render_csv(reports, ns.timings)
    if ns.output:
        with open(ns.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
