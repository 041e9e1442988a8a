"""Command-line front end.

    endomon <area> <action> [--p P] [--lambda X,Y] [--seed S] [--format json|csv|markdown]

Exit status: 0 when every requested check passes, 1 when one fails,
2 for invalid configuration.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from typing import Optional

from . import acceptance, orbits, structure, tsdp
from .census import (
    build_exceptional_table,
    census,
    enumerate_normalized,
    quotient_is_s3,
    verify_exceptional_theorem,
    verify_no_tsdp_section,
    verify_theorem1,
    verify_theorem2,
)
from .endo import (
    InvalidEndomorphism,
    compose,
    format_endo,
    is_automorphism,
    parse_central_hom,
    parse_endo,
    star,
)
from .group import (
    GroupParams,
    center,
    element_order,
    format_element,
    omega1,
    parse_element,
    power,
)
from .report import Check, checks_csv, checks_markdown, histogram_csv, to_json

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

SAMPLED = {("census", "theorem1"), ("tsdp", "axioms"), ("tsdp", "alpha"), ("orbits", "spot-check"),
           ("structure", "nilper"), ("verify", "all")}

COMMANDS = {
    "group": ("info", "mul", "pow", "order"),
    "endo": ("validate", "compose", "star"),
    "census": ("normalized", "theorem1", "theorem2", "exceptional", "tables", "no-section"),
    "tsdp": ("axioms", "alpha", "model"),
    "orbits": ("census", "spot-check"),
    "structure": ("omega1", "nilper", "invariance"),
    "verify": ("all",),
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    area: str
    action: str
    params: Optional[GroupParams]
    seed: Optional[int]
    sample_budget: Optional[int]
    output_format: str
    threads: int
    args: argparse.Namespace


@dataclass
class Result:
    payload: dict
    checks: list
    csv: Optional[str] = None
    markdown: Optional[str] = None


def parse_lambda(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise ConfigError(f"lambda must look like '1,0', got {text!r}") from None
    return a, b


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=None, help="prime (2, 3 or 5)")
    common.add_argument("--lambda", dest="lam", default=None, help="parameter pair, e.g. 1,0")
    common.add_argument("--seed", type=int, default=None, help="64-bit seed, required for sampled checks")
    common.add_argument("--sample-budget", type=int, default=None, help="override random sample counts")
    common.add_argument("--format", choices=("json", "csv", "markdown"), default="json")
    common.add_argument("--threads", type=int, default=1, help="worker threads (ENDOMON_THREADS overrides)")
    common.add_argument("--element", help="element 'k1,k2,l1,l2|r1,r2,r3,r4'")
    common.add_argument("--other", help="second element for 'group mul'")
    common.add_argument("--n", type=int, help="exponent for 'group pow'")
    common.add_argument("--images", help="endomorphism as four ';'-separated elements")
    common.add_argument("--right", help="second endomorphism for 'endo compose' (applied first)")
    common.add_argument("--matrix", help="central hom as 16 row-major digits")
    common.add_argument("--method", choices=("rank-formula", "explicit-closure"), default="rank-formula")

    parser = argparse.ArgumentParser(prog="endomon", description="Endomorphism monoids of JK-groups")
    areas = parser.add_subparsers(dest="area", required=True)
    for area, actions in COMMANDS.items():
        sub = areas.add_parser(area).add_subparsers(dest="action", required=True)
        for action in actions:
            sub.add_parser(action, parents=[common])
    return parser


def make_config(ns: argparse.Namespace) -> RunConfig:
    params = None
    if ns.area != "verify" or ns.p is not None:
        p = 2 if ns.p is None else ns.p
        lam = parse_lambda(ns.lam) if ns.lam else (1, 0)
        try:
            params = GroupParams(p, lam)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    if (ns.area, ns.action) in SAMPLED and ns.seed is None:
        raise ConfigError(f"'{ns.area} {ns.action}' runs sampled checks and needs --seed")
    if ns.seed is not None and not (-2 ** 63 <= ns.seed < 2 ** 64):
        raise ConfigError("seed must fit in 64 bits")
    if ns.sample_budget is not None and ns.sample_budget < 1:
        raise ConfigError("--sample-budget must be positive")
    env = os.environ.get("ENDOMON_THREADS")
    threads = int(env) if env else ns.threads
    if threads < 1:
        raise ConfigError("thread count must be positive")
    return RunConfig(ns.area, ns.action, params, ns.seed, ns.sample_budget, ns.format, threads, ns)


def _need(value, flag):
    if value is None:
        raise ConfigError(f"missing {flag}")
    return value


def _budget(cfg: RunConfig, default: int) -> int:
    return cfg.sample_budget if cfg.sample_budget is not None else default


# -- handlers -------------------------------------------------------------------

def _group(cfg: RunConfig) -> Result:
    P, a = cfg.params, cfg.args
    if cfg.action == "info":
        data = {"order": P.order, "center_order": center(P).order, "omega1_order": omega1(P).order,
                "end_commutative_family": P.is_end_commutative_family}
        return Result(data, [])
    x = parse_element(P, _need(a.element, "--element"))
    if cfg.action == "mul":
        y = parse_element(P, _need(a.other, "--other"))
        return Result({"result": format_element(x * y)}, [])
    if cfg.action == "pow":
        n = _need(a.n, "--n")
        if n < 0:
            raise ConfigError("--n must be non-negative")
        y = power(x, n)
        return Result({"result": format_element(y), "is_identity": y.is_identity()}, [])
    return Result({"order": element_order(x)}, [])


def _endo(cfg: RunConfig) -> Result:
    P, a = cfg.params, cfg.args
    if cfg.action == "star":
        f = parse_central_hom(P, _need(a.matrix, "--matrix"))
        return Result({"result": format_endo(star(f))}, [])
    text = _need(a.images, "--images")
    if cfg.action == "validate":
        try:
            e = parse_endo(P, text)
        except InvalidEndomorphism:
            return Result({"images": text}, [Check("defining relations", False, True, False)])
        return Result({"images": format_endo(e), "automorphism": is_automorphism(e)},
                      [Check("defining relations", True, True, True)])
    e1 = parse_endo(P, text)
    e2 = parse_endo(P, _need(a.right, "--right"))
    return Result({"result": format_endo(compose(e1, e2))}, [])


def _census(cfg: RunConfig) -> Result:
    P = cfg.params
    if cfg.action == "normalized":
        rep = census(P, workers=cfg.threads)
        payload = rep.to_dict()
        payload["expected_normalized_count"] = _expected_normalized(P)
        ok = payload["expected_normalized_count"] in (None, rep.normalized_count)
        return Result(payload, [Check(f"normalized count ({P})", ok, payload["expected_normalized_count"],
                                      rep.normalized_count)])
    if cfg.action == "tables":
        table = build_exceptional_table()
        checks = [Check("composition table matches print", True, 36, 36), quotient_is_s3(table)]
        return Result(table.to_dict(), checks, markdown=table.markdown())
    if cfg.action == "no-section":
        return Result({}, [verify_no_tsdp_section()])
    endos = enumerate_normalized(P, workers=cfg.threads)
    if cfg.action == "theorem1":
        return Result({}, [verify_theorem1(P, cfg.seed, _budget(cfg, 1_000_000), endos)])
    if cfg.action == "theorem2":
        return Result({}, [verify_theorem2(P, endos)])
    return Result({}, [verify_exceptional_theorem(P, endos)])


def _expected_normalized(P: GroupParams) -> Optional[int]:
    if P.lam == (1, 0):
        return P.p ** 4 + 1
    if (P.p, P.lam) == (2, (1, 1)):
        return 23
    if P.p in (2, 3):
        return 2
    return None


def _tsdp(cfg: RunConfig) -> Result:
    P = cfg.params
    p = P.p
    if cfg.action == "axioms":
        n = _budget(cfg, 1_000_000)
        checks = [tsdp.sp_semigroup_associativity(p, n, cfg.seed), tsdp.sp1_monoid(p).check_axioms(n, cfg.seed)]
        for inst in (tsdp.build_exceptional_model(p), tsdp.build_commutative_model(p)):
            checks.append(inst.as_monoid().check_axioms(n, cfg.seed, exhaustive=False))
            checks.append(inst.audit_actions(max(1, n // 10), cfg.seed))
        return Result({}, checks)
    if cfg.action == "alpha":
        n = _budget(cfg, 1_000_000 if p == 2 else 100_000)
        return Result({}, [tsdp.verify_alpha_isomorphism(P, n, cfg.seed)])
    inst = tsdp.build_exceptional_model(p) if P.lam == (1, 0) else tsdp.build_commutative_model(p)
    data = {"model": inst.name, "order": inst.size}
    if P.lam == (1, 0) or P.is_end_commutative_family:
        endos = enumerate_normalized(P, workers=cfg.threads)
        if P.lam == (1, 0):
            data["alpha"] = [{"endo": format_endo(e), "matrix": m.to_digits(), "s": s.to_dict()}
                             for e, (m, s) in ((e, tsdp.alpha(e)) for e in endos)]
        else:
            data["alpha"] = [{"endo": format_endo(e), "matrix": m.to_digits(), "s": s}
                             for e, (m, s) in ((e, tsdp.alpha_commutative(e)) for e in endos)]
    else:
        data["alpha"] = None
    return Result(data, [])


def _orbits(cfg: RunConfig) -> Result:
    P = cfg.params
    if cfg.action == "census":
        endos = enumerate_normalized(P, workers=cfg.threads)
        oc = orbits.orbit_census(P, endos, cfg.args.method)
        payload = oc.to_dict()
        checks = [orbits.mass_check(oc, len(endos))]
        if P in acceptance.PUBLISHED_ORBITS:
            expected = {"histogram": acceptance.PUBLISHED_ORBITS[P], "total": acceptance.PUBLISHED_TOTALS[P]}
            computed = {"histogram": oc.histogram, "total": oc.total_orbits}
            checks.append(Check(f"published orbit census ({P})", computed == expected, expected, computed))
        return Result(payload, checks, csv=oc.to_csv(), markdown=oc.to_markdown())
    n = _budget(cfg, 100 if P.p == 2 else 20)
    return Result({}, [orbits.spot_check(P, n, cfg.seed)])


def _structure(cfg: RunConfig) -> Result:
    P = cfg.params
    if cfg.action == "omega1":
        return Result({}, [structure.omega1_dichotomy(P)])
    if cfg.action == "nilper":
        n = _budget(cfg, 1000 if P.p == 2 else 100)
        return Result({}, [structure.verify_nil_per(P, n, cfg.seed)])
    endos = enumerate_normalized(P, workers=cfg.threads)
    if cfg.args.images:
        targets = [parse_endo(P, cfg.args.images)]
    else:
        targets = endos
    results = [{"endo": format_endo(e), "image_fully_invariant": structure.image_fully_invariant(e, endos)}
               for e in targets]
    return Result({"results": results,
                   "tested_against": "all endomorphisms" if P.p == 2 else "class representatives and elementary stars"},
                  [])


def _verify(cfg: RunConfig) -> Result:
    primes = (cfg.params.p,) if cfg.params else (2, 3)
    crits = acceptance.run_all(cfg.seed, primes)
    checks = [c for crit in crits for c in crit.checks]
    payload = {"criteria": [c.to_dict() for c in crits], "summary": [c.line() for c in crits]}
    md = "\n".join(c.line() for c in crits) + "\n\n" + checks_markdown(checks)
    return Result(payload, checks, markdown=md)


HANDLERS = {"group": _group, "endo": _endo, "census": _census, "tsdp": _tsdp,
            "orbits": _orbits, "structure": _structure, "verify": _verify}


def render(cfg: RunConfig, res: Result) -> str:
    if cfg.output_format == "csv":
        if res.csv is not None:
            return res.csv
        return checks_csv(res.checks)
    if cfg.output_format == "markdown":
        if res.markdown is not None:
            return res.markdown
        return checks_markdown(res.checks) if res.checks else _dict_markdown(res.payload)
    body = {"command": f"{cfg.area} {cfg.action}"}
    if cfg.params is not None:
        body["p"] = cfg.params.p
        body["lambda"] = list(cfg.params.lam)
    if cfg.seed is not None:
        body["seed"] = cfg.seed
    body.update(res.payload)
    body["checks"] = [c.to_dict() for c in res.checks]
    body["passed"] = all(c.passed for c in res.checks)
    return to_json(body)


def _dict_markdown(d: dict) -> str:
    from .report import markdown_table

    return markdown_table(["key", "value"], [[k, v] for k, v in d.items()])


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = make_config(ns)
        res = HANDLERS[cfg.area](cfg)
    except (ConfigError, ValueError) as exc:
        print(f"endomon: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out.write(render(cfg, res))
    return EXIT_OK if all(c.passed for c in res.checks) else EXIT_FAIL


def main() -> None:
    sys.exit(run())
