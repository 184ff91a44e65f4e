"""Command-line front end: JSON job configs in, JSON reports out.

Exit status: 0 pass, 1 a check failed, 2 the config could not be parsed or
validated, 3 a carrier or precondition violation during the run.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from importlib import resources
from typing import Any, Callable, Dict, List, Optional, Tuple

import jsonschema

from .affine import (AffineModuleSpec, closed_form_check, flow_check, hw_identify,
                     sl2_relation_check, top_level_check, top_level_vector)
from .amodule import ModuleSpec, a_relation_check
from .certify import (generation_check, irreducibility_certificate, proof_constant_check,
                      replay_witness, wakimoto_certificate)
from .characters import character_check, parse_target
from .exact import LaurentData, as_scalar
from .fock import clifford_relation_check
from .lattice import LatticeMonomial
from .report import CarrierError, CheckReport, vector_from_json
from .weyl import intertwiner_check, wakimoto_relation_check, weyl_relation_check

SCHEMA_VERSION = 1
COMMANDS = ("relations", "certify", "character", "identify", "flow-check",
            "wakimoto-check", "generation-check")
EXIT_PASS, EXIT_FAIL, EXIT_PARSE, EXIT_PRECONDITION = 0, 1, 2, 3


class ConfigError(ValueError):
    """The config is malformed or inconsistent."""


def load_schema(name: str) -> Dict[str, Any]:
    text = resources.files("critical_fock").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


# --- config parsing --------------------------------------------------------------

def _scalar(x, what: str) -> Fraction:
    try:
        return as_scalar(x)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError(f"{what}: {exc}") from None


def _chi_map(obj, what: str) -> LaurentData:
    return LaurentData({int(k): _scalar(v, f"{what}[{k}]") for k, v in (obj or {}).items()})


_MODULE_FIELDS = {
    "Full": {"chi_plus", "chi_minus", "lambda", "mu"},
    "Tilde": {"chi", "chi_minus"},
    "Bar": {"m", "n"},
    "Vacuum": set(),
}


def parse_module(obj: Dict[str, Any]) -> ModuleSpec:
    kind = obj["kind"]
    extra = set(obj) - {"kind"} - _MODULE_FIELDS[kind]
    if extra:
        raise ConfigError(f"{kind} does not take {sorted(extra)}")
    if kind == "Full":
        if ("lambda" in obj or "mu" in obj) and ("chi_plus" in obj or "chi_minus" in obj):
            raise ConfigError("give either lambda/mu or chi_plus/chi_minus")
        if "lambda" in obj or "mu" in obj:
            return ModuleSpec.full({0: _scalar(obj.get("lambda", 0), "lambda")},
                                   {0: _scalar(obj.get("mu", 0), "mu")})
        return ModuleSpec.full(_chi_map(obj.get("chi_plus"), "chi_plus"),
                               _chi_map(obj.get("chi_minus"), "chi_minus"))
    if kind == "Tilde":
        if "chi" in obj and "chi_minus" in obj:
            raise ConfigError("give either chi or chi_minus")
        return ModuleSpec.tilde(_chi_map(obj.get("chi", obj.get("chi_minus")), "chi"))
    if kind == "Bar":
        return ModuleSpec.bar(obj.get("m", 0), obj.get("n", 0))
    return ModuleSpec.vacuum()


_REQUIRED = {
    "relations": ("suite",),
    "certify": ("module",),
    "character": ("target",),
    "identify": ("module", "vector"),
    "flow-check": ("module",),
    "wakimoto-check": ("chi",),
    "generation-check": (),
}

_SUITE_NEEDS = {
    "clifford": (), "A": ("module",), "sl2": ("module",), "sl2-closed": ("family", "param"),
    "weyl": (), "weyl-realized": (), "wakimoto": ("chi",),
}


def validate_config(config: Any) -> Dict[str, Any]:
    """Schema validation plus the cross-field rules the schema cannot express."""
    try:
        jsonschema.validate(config, load_schema("config"))
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{path}: {exc.message}") from None
    command = config["command"]
    needed = list(_REQUIRED[command])
    if command == "relations":
        needed += _SUITE_NEEDS[config["suite"]]
    missing = [k for k in needed if k not in config]
    if missing:
        raise ConfigError(f"{command} needs {missing}")
    if "module" in config:
        parse_module(config["module"])
    if "chi" in config:
        _chi_map(config["chi"], "chi")
    for name, value in config.get("bounds", {}).items():
        if name in ("mode_bound", "weight_bound", "degree_bound", "certificate_degree") \
                and _scalar(value, name) < 1:
            raise ConfigError(f"{name} must be >= 1")
    if "param" in config:
        params = config["param"] if isinstance(config["param"], list) else [config["param"]]
        for p in params:
            _scalar(p, "param")
        if "family" in config and (len(params) == 2) != (config["family"] == "full"):
            raise ConfigError("param is a pair (lambda, mu) exactly for the 'full' family")
    if "target" in config:
        try:
            parse_target(config["target"])
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"target: {exc}") from None
    for c in config.get("constants", []):
        _chi_map(c["chi"], "constants.chi")
    return config


def _bound(config, name, default):
    return config.get("bounds", {}).get(name, default)


def _int_bound(config, name, default) -> int:
    value = _scalar(_bound(config, name, default), name)
    if value.denominator != 1:
        raise ConfigError(f"{name} must be an integer")
    return int(value)


def _affine(config) -> AffineModuleSpec:
    return AffineModuleSpec(parse_module(config["module"]), config.get("flow", 0))


# --- commands --------------------------------------------------------------------

Job = Tuple[List[Dict[str, Any]], Any]


def _suite_report(config, basis=None) -> CheckReport:
    suite = config["suite"]
    mb = _bound(config, "mode_bound", 3)
    cb = _bound(config, "charge_bound", 2)
    if suite == "clifford":
        return clifford_relation_check(mb, _scalar(_bound(config, "weight_bound", 5), "weight_bound"),
                                       basis=basis)
    if suite == "A":
        return a_relation_check(parse_module(config["module"]), _scalar(mb, "mode_bound"),
                                _scalar(_bound(config, "weight_bound", 5), "weight_bound"), basis=basis)
    if suite == "sl2":
        return sl2_relation_check(_affine(config), _int_bound(config, "mode_bound", 3),
                                  _bound(config, "degree_bound", 3), cb,
                                  sector=config.get("sector", 0), basis=basis)
    if suite == "sl2-closed":
        param = config["param"]
        param = tuple(_scalar(p, "param") for p in param) if isinstance(param, list) \
            else _scalar(param, "param")
        return closed_form_check(config["family"], param, _int_bound(config, "mode_bound", 3),
                                 _bound(config, "degree_bound", 3), cb,
                                 sector=config.get("sector", 0), basis=basis)
    if suite in ("weyl", "weyl-realized"):
        return weyl_relation_check(_int_bound(config, "mode_bound", 3),
                                   _bound(config, "degree_bound", 3), cb,
                                   realized=suite == "weyl-realized", basis=basis)
    return wakimoto_relation_check(_chi_map(config["chi"], "chi"), _int_bound(config, "mode_bound", 3),
                                   _bound(config, "degree_bound", 3), cb, basis=basis)


def run_relations(config) -> Job:
    return [_suite_report(config).to_json()], None


def run_certify(config) -> Job:
    spec = parse_module(config["module"])
    wb = _scalar(_bound(config, "weight_bound", 4), "weight_bound")
    checks = [irreducibility_certificate(spec, wb).to_json()]
    for c in config.get("constants", []):
        data = {k: ([int(x) for x in v] if isinstance(v, list) else _scalar(v, k))
                for k, v in c["data"].items()}
        checks.append(proof_constant_check(c["kind"], _chi_map(c["chi"], "chi"), data).to_json())
    return checks, None


def run_character(config) -> Job:
    report = character_check(config["target"], _int_bound(config, "degree_bound", 6),
                             _bound(config, "charge_bound", 2))
    return [report.to_json()], None


def identify_vector(config) -> Dict:
    vec = config["vector"]
    s = config.get("s", 0)
    if vec == "vacuum":
        base = parse_module(config["module"])
        (u, c), = base.vacuum_vector().items()
        return {(u, LatticeMonomial(-s, ())): c}
    if "top_level" in vec:
        return top_level_vector(s, vec["top_level"]["j"])
    try:
        return vector_from_json(vec["terms"])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"vector: {exc}") from None


def run_identify(config) -> Job:
    spec = _affine(config)
    v = identify_vector(config)
    s = config.get("s", 0)
    depth = _bound(config, "depth", 4)
    hw = hw_identify(spec, v, s, depth)
    expect = config.get("expect")
    ok = hw.found if expect is None else (
        hw.found == expect.get("found", True)
        and ("label" not in expect or hw.label == expect["label"]))
    check = {"name": f"highest weight identification on {spec.describe()}, s = {s}, depth {depth}",
             "pass": ok, "checked": 1, "violations": [] if ok else [hw.to_json()],
             "details": hw.to_json()}
    return [check], hw.to_json()


def run_flow_check(config) -> Job:
    spec = _affine(config)
    flow = flow_check(spec, _bound(config, "flow_bound", 2), _int_bound(config, "mode_bound", 3))
    top = top_level_check(spec, _bound(config, "flow_bound", 2), _bound(config, "j_bound", 3),
                          _bound(config, "depth", 2))
    return [flow.to_json(), top.to_json()], None


def run_wakimoto_check(config) -> Job:
    chi = _chi_map(config["chi"], "chi")
    mb = _int_bound(config, "mode_bound", 3)
    db = _bound(config, "degree_bound", 3)
    cb = _bound(config, "charge_bound", 2)
    checks = [
        weyl_relation_check(mb, db, cb).to_json(),
        weyl_relation_check(mb, db, cb, realized=True).to_json(),
        wakimoto_relation_check(chi, mb, db, cb).to_json(),
        intertwiner_check(chi, db, cb, mode_bound=mb).to_json(),
        wakimoto_certificate(chi, _bound(config, "certificate_degree", min(db, 3)), cb).to_json(),
    ]
    return checks, None


def run_generation_check(config) -> Job:
    return [generation_check(_bound(config, "degree_bound", 3)).to_json()], None


RUNNERS: Dict[str, Callable[[Dict[str, Any]], Job]] = {
    "relations": run_relations,
    "certify": run_certify,
    "character": run_character,
    "identify": run_identify,
    "flow-check": run_flow_check,
    "wakimoto-check": run_wakimoto_check,
    "generation-check": run_generation_check,
}


def run_job(config: Dict[str, Any], timing: bool = False) -> Dict[str, Any]:
    """Validate ``config``, run it and return the report as a JSON-ready dict."""
    config = validate_config(config)
    start = time.perf_counter()
    checks, result = RUNNERS[config["command"]](config)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": config["command"],
        "config": config,
        "pass": all(c["pass"] for c in checks),
        "checks": checks,
    }
    if result is not None:
        report["result"] = result
    if timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 3)}
    return report


# --- replay ----------------------------------------------------------------------

def _violation_keys(check) -> List:
    from .report import key_from_json

    keys = []
    for v in check.get("violations", []):
        if isinstance(v.get("vector"), dict) and "type" in v["vector"]:
            key = key_from_json(v["vector"])
            if key not in keys:
                keys.append(key)
    return keys


def replay_report(report: Dict[str, Any]) -> Dict[str, Any]:
    """Re-verify every failure witness of a report in isolation."""
    try:
        jsonschema.validate(report, load_schema("report"))
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"not a report: {exc.message}") from None
    config = validate_config(report["config"])
    command = config["command"]
    outcomes = []
    for check in report["checks"]:
        if check["pass"]:
            continue
        witness = check.get("submodule_witness")
        if command == "certify" and witness:
            spec = parse_module(config["module"])
            wb = _scalar(_bound(config, "weight_bound", 4), "weight_bound")
            decoded = {"family": witness["family"],
                       "generator": vector_from_json(witness["generator"]["vector"]),
                       "excluded": vector_from_json(witness["excluded"]["vector"])}
            ok = replay_witness(spec, wb, decoded)
        elif command == "relations" and _violation_keys(check):
            ok = not _suite_report(config, basis=_violation_keys(check)).passed
        else:
            # no isolated witness: rerun the job and look for the same failing check
            checks, _ = RUNNERS[command](config)
            ok = any(c["name"] == check["name"] and not c["pass"] for c in checks)
        outcomes.append({"check": check["name"], "reproduced": bool(ok)})
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "replay",
        "config": config,
        "pass": bool(outcomes) and all(o["reproduced"] for o in outcomes),
        "checks": [],
        "replay": outcomes,
    }


# --- entry point -----------------------------------------------------------------

def _read_config(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise ConfigError(str(exc)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from None


def dump_report(report: Dict[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _summary(report: Dict[str, Any]) -> List[str]:
    lines = []
    for check in report["checks"]:
        status = "PASS" if check["pass"] else "FAIL"
        lines.append(f"[{status}] {check['name']} ({check['checked']} checks)")
    for o in report.get("replay", []):
        lines.append(f"[{'REPRODUCED' if o['reproduced'] else 'NOT REPRODUCED'}] {o['check']}")
    lines.append(f"{report['command']}: {'PASS' if report['pass'] else 'FAIL'}")
    return lines


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="critical-fock",
        description="Exact verification jobs for critical-level sl2 modules on Fock spaces.")
    parser.add_argument("command", choices=COMMANDS + ("replay",))
    parser.add_argument("--config", required=True,
                        help="job config (JSON); '-' reads stdin. For replay, a report file.")
    parser.add_argument("--out", help="write the JSON report here instead of stdout")
    parser.add_argument("--quiet", action="store_true", help="no summary lines on stderr")
    parser.add_argument("--timing", action="store_true",
                        help="add wall-clock timing (makes reports non-reproducible)")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_PASS
    try:
        config = _read_config(args.config)
        if args.command == "replay":
            report = replay_report(config)
        else:
            if isinstance(config, dict) and config.get("command", args.command) != args.command:
                raise ConfigError(f"config is for {config.get('command')!r}, not {args.command!r}")
            if isinstance(config, dict):
                config = {"command": args.command, **config}
            report = run_job(config, timing=args.timing)
    except ConfigError as exc:
        print(f"critical-fock: config error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (CarrierError, ValueError) as exc:
        print(f"critical-fock: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    text = dump_report(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not args.quiet:
        for line in _summary(report):
            print(line, file=sys.stderr)
    return EXIT_PASS if report["pass"] else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
