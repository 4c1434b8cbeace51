"""Command-line interface: ``quivercrep <command> --config FILE``.

Exit codes: 0 success, 1 failed check (golden mismatch or verification
failure), 2 configuration error, 3 infeasible input, 4 integrality failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from importlib import resources
from pathlib import Path

import jsonschema

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import bundles as bx
from . import oracle
from .core import (
    CaseTag,
    OrbitInvariants,
    Quiver,
    decomposition_to_invariants,
    degeneration_leq,
    enumerate_family,
    enumerate_orbits,
    invariant_keys,
    invariants_to_decomposition,
    orbit_codim,
    canonical_representative,
    positive_roots,
)
from .errors import (
    ConfigError,
    DimensionMismatch,
    ExpectedDimensionNegative,
    Infeasible,
    InfeasibleMonomial,
    NoResolutionRule,
    NonIntegerResult,
    NotCrepant,
    PartialInvariants,
    PointNotInOrbit,
    QuiverError,
    UnsupportedCase,
    UnsupportedType,
)
from .odl import ODLConfig, odl_invariants
from .resolutions import (
    Monomial,
    ResType,
    canonical_base,
    citation,
    closed_form_crepant,
    contraction_advisory,
    det_w,
    is_crepant,
    monomial_bundle,
    resolution_for_orbit,
    total_space_dim,
)

QUANTITY_NAMES = ["chi_O", "chi_omega1", "chi_omega2", "chi_omega3", "chi_omega4", "chi_minus_K", "minus_K_top"]

_INT = {"type": "integer"}
_NAT = {"type": "integer", "minimum": 0}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "quiver": {
            "type": "object",
            "additionalProperties": False,
            "required": ["case"],
            "properties": {
                "case": {"enum": [t.value for t in CaseTag if t is not CaseTag.Other]},
                "n": {"type": "integer", "minimum": 2},
                "d": {"type": "array", "items": _NAT},
            },
        },
        "orbit": {"type": "object", "additionalProperties": _NAT},
        "resolution": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "type": {"enum": [t.value for t in ResType if t not in (ResType.monomial, ResType.single)] + ["single"]},
                "s_vec": {"type": "array", "items": _NAT},
                "a_vec": {"type": "array", "items": _NAT},
            },
        },
        "variety": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "base": {
                    "oneOf": [
                        {"const": "point"},
                        {"type": "array", "items": _NAT, "minItems": 2, "maxItems": 2},
                    ]
                },
                "cuts": {"type": "array", "items": {"type": "string"}},
            },
        },
        "bundles": {
            "type": "object",
            "additionalProperties": False,
            "patternProperties": {"^E[1-9][0-9]*$": {"type": "string"}},
        },
        "compute": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "quantities": {"type": "array", "items": {"enum": QUANTITY_NAMES}},
                "seed": _INT,
                "threads": {"type": "integer", "minimum": 1},
            },
        },
        "expected": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                **{q: _INT for q in QUANTITY_NAMES},
                "canonical_trivial": {"type": "boolean"},
                "codim": _NAT,
                "dim": _INT,
            },
        },
        "verify": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "checks": {
                    "type": "array",
                    "items": {"enum": ["propositions", "codimensions", "birationality", "closure", "degenerations"]},
                },
                "dmax": _NAT,
                "dmax_long": _NAT,
                "n_max": {"type": "integer", "minimum": 2},
                "trials": _NAT,
            },
        },
    },
}


# ---------------------------------------------------------------- config


def bundled_configs() -> list[str]:
    root = resources.files("quivercrep") / "configs"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".toml"))


def _read(path: str) -> tuple[str, str]:
    p = Path(path)
    if p.exists():
        return p.read_text(), p.suffix
    cand = resources.files("quivercrep") / "configs" / f"{path}.toml"
    if cand.is_file():
        return cand.read_text(), ".toml"
    raise ConfigError(f"no config file {path!r}; bundled configs: {', '.join(bundled_configs())}")


def load_config(path: str | None) -> dict:
    """Read and validate a TOML or JSON config (or the name of a bundled one)."""
    if path is None:
        return {}
    text, suffix = _read(path)
    try:
        cfg = json.loads(text) if suffix == ".json" else tomllib.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as e:
        raise ConfigError(f"{path}: {e}") from None
    validate(cfg, path)
    return cfg


def validate(cfg: dict, where: str = "config"):
    errors = sorted(jsonschema.Draft202012Validator(SCHEMA).iter_errors(cfg), key=lambda e: list(e.path))
    if errors:
        e = errors[0]
        field = ".".join(str(x) for x in e.path) or "<top level>"
        raise ConfigError(f"{where}: at {field}: {e.message}")


def _need(cfg: dict, *keys):
    cur = cfg
    for k in keys:
        if not isinstance(cur, dict) or k not in cur:
            raise ConfigError(f"missing field {'.'.join(keys)}")
        cur = cur[k]
    return cur


def quiver_of(cfg: dict) -> Quiver:
    qb = _need(cfg, "quiver")
    try:
        return Quiver.from_case(qb["case"], qb.get("n"))
    except (UnsupportedCase, UnsupportedType) as e:
        raise ConfigError(f"at quiver: {e}") from None


def dims_of(cfg: dict, q: Quiver) -> tuple[int, ...]:
    d = tuple(_need(cfg, "quiver", "d"))
    if len(d) != q.n:
        raise ConfigError(f"at quiver.d: {len(d)} entries for {q.n} vertices")
    return d


def invariants_of(cfg: dict, q: Quiver) -> OrbitInvariants:
    vals = _need(cfg, "orbit")
    keys = invariant_keys(q)
    unknown = sorted(set(vals) - set(keys))
    missing = [k for k in keys if k not in vals]
    if unknown:
        raise ConfigError(f"at orbit: unknown invariants {unknown}; expected {keys}")
    if missing:
        raise ConfigError(f"at orbit: missing invariants {missing}")
    return OrbitInvariants.of(q.case_tag, **{k: vals[k] for k in keys})


def res_type_of(cfg: dict):
    t = cfg.get("resolution", {}).get("type")
    return None if t is None else ResType(t)


def odl_config_of(cfg: dict) -> ODLConfig:
    q = quiver_of(cfg)
    d = dims_of(cfg, q)
    inv = invariants_of(cfg, q)
    var = cfg.get("variety", {})
    base = var.get("base", "point")
    base = None if base == "point" else tuple(base)
    if base is not None and not 0 <= base[0] <= base[1]:
        raise ConfigError("at variety.base: need 0 <= k <= n")
    names = [f"E{v}" for v in q.vertices]
    given = cfg.get("bundles", {})
    extra = sorted(set(given) - set(names))
    if extra:
        raise ConfigError(f"at bundles: no vertex for {extra}")
    bundles = []
    for nm in names:
        if nm not in given:
            raise ConfigError(f"at bundles: missing {nm}")
        bundles.append((nm, bx.parse(given[nm], label=nm)))
    cuts = tuple(bx.parse(c, label=f"cut{i}") for i, c in enumerate(var.get("cuts", [])))
    return ODLConfig(q, d, inv, tuple(bundles), base, cuts, res_type_of(cfg), cfg.get("name", ""))


# ---------------------------------------------------------------- commands


def cmd_roots(cfg, args):
    q = quiver_of(cfg)
    roots = positive_roots(q)
    rows = [{"root": list(r), "height": sum(r)} for r in roots]
    table = "\n".join(f"{str(list(r)):<16} height {sum(r)}" for r in roots)
    return {"case": q.case_tag.value, "n": q.n, "count": len(rows), "roots": rows}, f"{table}\n{len(rows)} positive roots"


def _inv_or_none(q, dec):
    try:
        return decomposition_to_invariants(q, dec).as_dict()
    except (PartialInvariants, UnsupportedCase):
        return None


def cmd_orbits(cfg, args):
    q = quiver_of(cfg)
    d = dims_of(cfg, q)
    decs = enumerate_orbits(q, d)
    rows = []
    for dec in sorted(decs, key=lambda x: orbit_codim(q, d, x)):
        rows.append({"decomposition": str(dec), "codim": orbit_codim(q, d, dec), "invariants": _inv_or_none(q, dec)})
    lines = [f"{r['codim']:>4}  {r['decomposition']}  {r['invariants'] or ''}" for r in rows]
    return {"d": list(d), "count": len(rows), "orbits": rows}, "codim  orbit\n" + "\n".join(lines) + f"\n{len(rows)} orbits"


def cmd_orbit_info(cfg, args):
    q = quiver_of(cfg)
    d = dims_of(cfg, q)
    inv = invariants_of(cfg, q)
    dec = invariants_to_decomposition(q, d, inv)
    codim = orbit_codim(q, d, dec)
    numeric = q.rep_dim(d) - oracle.orbit_dim_numeric(q, canonical_representative(q, dec), d)
    fam = enumerate_family(q, d)
    below = [i.as_dict() for x, i in fam if x != dec and degeneration_leq(q, x, dec)]
    above = [i.as_dict() for x, i in fam if x != dec and degeneration_leq(q, dec, x)]
    out = {
        "d": list(d),
        "invariants": inv.as_dict(),
        "decomposition": str(dec),
        "codim": codim,
        "codim_numeric": numeric,
        "dim": q.rep_dim(d) - codim,
        "orbits_in_closure": below,
        "orbits_containing_it": above,
    }
    table = "\n".join(
        [
            f"orbit            {inv}",
            f"decomposition    {dec}",
            f"codim            {codim} (tangent map: {numeric})",
            f"orbits below     {len(below)}",
            f"orbits above     {len(above)}",
        ]
    )
    return out, table


def cmd_resolve(cfg, args):
    q = quiver_of(cfg)
    d = dims_of(cfg, q)
    rb = cfg.get("resolution", {})
    if "s_vec" in rb or "a_vec" in rb:
        spec = monomial_bundle(q, d, Monomial(tuple(rb.get("s_vec", [])), tuple(rb.get("a_vec", []))))
        cf, cite = None, "monomial resolution"
    else:
        inv = invariants_of(cfg, q)
        spec = resolution_for_orbit(q, d, inv, res_type_of(cfg))
        try:
            cf = closed_form_crepant(q, d, inv, spec.res_type)
        except UnsupportedCase:
            cf = None
        cite = citation(q, spec.res_type)
    scene = spec.scene()
    out = {
        **spec.describe(),
        "total_space_dim": total_space_dim(spec),
        "det_W": det_w(spec).as_dict(),
        "K_F": canonical_base(spec.factors, scene).as_dict(),
        "crepant": is_crepant(spec),
        "crepant_geometric": is_crepant(spec, geometric=True),
        "closed_form_crepant": cf,
        "citation": cite,
        "contraction": contraction_advisory(spec),
    }
    keys = ["type", "base", "W", "rank_W", "total_space_dim", "dim_R", "det_W", "K_F", "crepant", "citation"]
    width = max(map(len, keys))
    table = "\n".join(f"{k.ljust(width)}  {out[k]}" for k in keys)
    return out, table


def _golden(cfg, report):
    exp = cfg.get("expected", {})
    # quantities not requested on this run are skipped, not failed
    exp = {k: v for k, v in exp.items() if k not in QUANTITY_NAMES or k in report.numeric}
    bad = []
    for k, v in exp.items():
        if k in QUANTITY_NAMES:
            got = report.numeric.get(k)
        elif k == "canonical_trivial":
            got = report.canonical_total_trivial
        elif k == "codim":
            got = report.codim_x
        else:
            got = report.dim_d
        if got != v:
            bad.append({"field": k, "expected": v, "got": got})
    return {"checked": len(exp), "mismatches": bad}


def cmd_odl(cfg, args):
    oc = odl_config_of(cfg)
    comp = cfg.get("compute", {})
    quantities = args.quantities or comp.get("quantities", [])
    seed = args.seed if args.seed is not None else comp.get("seed", 0)
    threads = args.threads or comp.get("threads", 1)
    total = oc.variety().fixed_point_count() if quantities else 0
    last = [0.0]

    def progress(count):
        now = time.monotonic()
        if not args.quiet and (now - last[0] > 1.0 or count == total):
            last[0] = now
            print(f"fixed points processed: {count}/{total}", file=sys.stderr, flush=True)

    report = odl_invariants(oc, quantities, seed=seed, threads=threads, progress=progress)
    out = report.to_json()
    out["records"] = [
        {"quantity": k, "value": v, "fixed_point_count": report.fixed_point_count, "wall_time": report.wall_time}
        for k, v in report.numeric.items()
    ]
    golden = _golden(cfg, report)
    out["golden"] = golden
    table = report.to_table()
    if golden["checked"]:
        verdict = "all match" if not golden["mismatches"] else f"MISMATCH {golden['mismatches']}"
        table += f"\nexpected values: {golden['checked']} checked, {verdict}"
    return out, table, 1 if golden["mismatches"] else 0


def cmd_verify(cfg, args):
    v = cfg.get("verify", {})
    checks = v.get("checks", ["propositions", "codimensions", "birationality", "closure", "degenerations"])
    sizes = dict(dmax_small=v.get("dmax", 3), n_max=v.get("n_max", 5), dmax_long=v.get("dmax_long", 2))
    seed = args.seed or 0
    runners = {
        "propositions": lambda: oracle.sweep_propositions(**sizes),
        "codimensions": lambda: oracle.sweep_codimensions(**sizes),
        "birationality": lambda: oracle.sweep_birationality(fiber_seed=seed, **sizes),
        "closure": lambda: oracle.sweep_closure_order(min(sizes["dmax_small"], 3)),
        "degenerations": lambda: oracle.sweep_degenerations(trials=v.get("trials", 100), seed=seed),
    }
    results = [runners[c]() for c in checks]
    out = {
        "results": [
            {"check": r.name, "checked": r.checked, "ok": r.ok, "counterexamples": [list(map(str, m)) for m in r.mismatches[:10]]}
            for r in results
        ]
    }
    lines = []
    for r in results:
        lines.append(r.line())
        lines += [f"    counterexample: {m}" for m in r.mismatches[:10]]
    return out, "\n".join(lines), 0 if all(r.ok for r in results) else 1


COMMANDS = {
    "roots": cmd_roots,
    "orbits": cmd_orbits,
    "orbit-info": cmd_orbit_info,
    "resolve": cmd_resolve,
    "odl": cmd_odl,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quivercrep", description=__doc__.splitlines()[0])
    p.add_argument("command", nargs="?", choices=list(COMMANDS))
    p.add_argument("--config", help="TOML/JSON file, or the name of a bundled config")
    p.add_argument("--format", choices=["json", "table"], default="table")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument(
        "--quantities",
        type=lambda s: [x.strip() for x in s.split(",") if x.strip()],
        help=f"comma-separated subset of {','.join(QUANTITY_NAMES)}",
    )
    p.add_argument("--quiet", action="store_true", help="no progress lines on stderr")
    p.add_argument("--list-configs", action="store_true", help="print the bundled config names and exit")
    return p


_INFEASIBLE = (
    Infeasible,
    InfeasibleMonomial,
    NoResolutionRule,
    NotCrepant,
    UnsupportedCase,
    UnsupportedType,
    PartialInvariants,
    DimensionMismatch,
    PointNotInOrbit,
    ExpectedDimensionNegative,
)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.list_configs:
        print("\n".join(bundled_configs()))
        return 0
    if args.command is None:
        parser.error("a command is required")
    try:
        if args.quantities:
            bad = [x for x in args.quantities if x not in QUANTITY_NAMES]
            if bad:
                raise ConfigError(f"unknown quantities {bad}")
        cfg = load_config(args.config)
        if args.command != "verify" and not cfg:
            raise ConfigError(f"{args.command} needs --config")
        res = COMMANDS[args.command](cfg, args)
        out, table, code = res if len(res) == 3 else (*res, 0)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except NonIntegerResult as e:
        print(f"integrality failure: {e}", file=sys.stderr)
        return 4
    except _INFEASIBLE as e:
        print(f"infeasible input ({type(e).__name__}): {e}", file=sys.stderr)
        return 3
    except QuiverError as e:
        print(f"error ({type(e).__name__}): {e}", file=sys.stderr)
        return 3
    if args.format == "json":
        print(json.dumps(out, indent=2, default=str))
    else:
        print(table)
    return code


if __name__ == "__main__":
    sys.exit(main())
