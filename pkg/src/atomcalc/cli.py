"""Command line interface.

Exit codes: 0 all checks passed, 1 a check failed, 2 bad input,
3 a budget or degree bound prevented a verdict.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .atoms import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    aspec,
    atomic_object,
    enumerate_submodules,
    is_monoform,
    residue_field,
)
from .constructions import triangular
from .core.iso import find_isomorphism
from .core.modules import RightModule
from .core.structure import is_simple, socle, structure
from .homology import (
    TruncatedError,
    bass_table,
    minimal_injective_resolution,
    minimal_projective_resolution,
    resolution_problems,
    verify_main_theorem,
)
from .linalg import Matrix
from .modelfile import Model, ModelError, load, scalar_json
from .noeth import verify_final_example
from .supports import associated_atoms, small_atom_support, verify_classification, verify_closure

OK, VIOLATION, INPUT_ERROR, INCOMPLETE = 0, 1, 2, 3


class InputError(ValueError):
    pass


# -- helpers -------------------------------------------------------------------


def atom_names(model: Model) -> list[str]:
    """Name each atom after the first simple model module representing it."""
    st = structure(model.algebra)
    names = [f"S{i}" for i in range(len(st.simples))]
    taken = set()
    for name, m in model.modules.items():
        if m.dim and is_simple(m):
            i = st.simple_index(m)
            if i not in taken:
                names[i] = name
                taken.add(i)
    return names


def find_atom(model: Model, name: str) -> int:
    names = atom_names(model)
    if name in names:
        return names.index(name)
    if name.startswith("S") and name[1:].isdigit() and int(name[1:]) < len(names):
        return int(name[1:])
    raise InputError(f"unknown atom {name!r}; atoms are {names}")


def get_module(model: Model, name: str | None, base: bool = False) -> RightModule:
    pool = model.base_modules if base else model.modules
    if name is None:
        raise InputError("--module is required")
    if name not in pool:
        raise InputError(f"unknown module {name!r}; available: {sorted(pool)}")
    return pool[name]


def selected_modules(model: Model, name: str | None) -> dict[str, RightModule]:
    if name is None:
        return dict(model.modules)
    return {name: get_module(model, name)}


def matrix_json(m: Matrix):
    return [[scalar_json(m.field, x) for x in r] for r in m.a]


def module_json(m: RightModule) -> dict:
    return {"dim": m.dim, "action": [matrix_json(a) for a in m.action]}


def iso_matches(model: Model, m: RightModule) -> list[str]:
    return [n for n, x in model.modules.items() if x.dim == m.dim and find_isomorphism(m, x) is not None]


def by_atom(names: list[str], row) -> dict:
    return {names[s]: v for s, v in enumerate(row)}


# -- commands ------------------------------------------------------------------


def cmd_aspec(model: Model, args) -> tuple[int, dict]:
    names = atom_names(model)
    atoms = []
    for a in aspec(model.algebra):
        atoms.append({"name": names[a.simple_index], "index": a.simple_index,
                      "simple_dim": a.simple.dim, "residue_field": a.residue_field.describe()})
    return OK, {"atoms": atoms}


def cmd_atomic_object(model: Model, args) -> tuple[int, dict]:
    if not args.atom:
        raise InputError("--atom is required")
    idx = find_atom(model, args.atom)
    alpha = aspec(model.algebra)[idx]
    ao = atomic_object(alpha)
    k = residue_field(alpha)
    cert = is_monoform(ao.module)
    out = {
        "atom": atom_names(model)[idx],
        "dim": ao.dim,
        "envelope_dim": ao.envelope.dim,
        "basis_in_envelope": matrix_json(ao.submodule.space.basis),
        "module": module_json(ao.module),
        "isomorphic_to": iso_matches(model, ao.module),
        "monoform": cert.verdict,
        "residue_field": k.describe(),
    }
    return (OK if cert.is_monoform else VIOLATION), out


def _resolution_json(res, names) -> dict:
    return {
        "kind": res.kind,
        "term_dims": [t.dim for t in res.terms],
        "multiplicities": [{names[s]: c for s, c in m.items()} for m in res.multiplicities],
        "completion": res.completion.describe(),
        "problems": resolution_problems(res),
    }


def cmd_resolve(model: Model, args) -> tuple[int, dict]:
    m = get_module(model, args.module)
    names = atom_names(model)
    fn = minimal_projective_resolution if args.projective else minimal_injective_resolution
    res = fn(m, args.max_degree)
    out = _resolution_json(res, names)
    return (VIOLATION if out["problems"] else OK), out


def cmd_bass(model: Model, args) -> tuple[int, dict]:
    m = get_module(model, args.module)
    names = atom_names(model)
    if m.dim == 0:
        rows = [[0] * len(names)] * (args.max_degree + 1)
        return OK, {"mu": [by_atom(names, r) for r in rows], "completion": {"kind": "exact_zero_tail", "zero_from": 0}}
    t = bass_table(m, args.max_degree)
    return OK, {"mu": [by_atom(names, r) for r in t.entries], "completion": t.completion.describe()}


def cmd_asupp(model: Model, args) -> tuple[int, dict]:
    m = get_module(model, args.module)
    names = atom_names(model)
    s = small_atom_support(m, args.max_degree)
    aa = associated_atoms(m)
    out = {"asupp": [names[i] for i in sorted(s.members)], "completeness": s.completeness,
           "aass": [names[i] for i in sorted(aa.members)]}
    return (OK if s.complete else INCOMPLETE), out


def cmd_monoform(model: Model, args) -> tuple[int, dict]:
    m = get_module(model, args.module)
    if m.dim == 0:
        raise InputError("the zero module is not monoform")
    methods = ["socle_criterion", "exhaustive"] if args.method == "both" else [args.method]
    out = {}
    code = OK
    verdicts = set()
    for meth in methods:
        cert = is_monoform(m, meth, args.budget)
        d = {"verdict": cert.verdict, "verified": cert.verify()}
        if cert.witness is not None:
            d["witness_dim"] = cert.witness.dim
            d["common_dim"] = cert.common.dim
        if cert.is_monoform:
            d["atom"] = atom_names(model)[structure(m.algebra).simple_index(socle(m).module)]
        verdicts.add(cert.is_monoform)
        if not d["verified"]:
            code = VIOLATION
        out[meth] = d
    if len(verdicts) > 1:
        code = VIOLATION
    return code, out


def verify_main(model: Model, args) -> tuple[int, dict]:
    names = atom_names(model)
    out = {}
    code = OK
    for name, m in selected_modules(model, args.module).items():
        rep = verify_main_theorem(m, args.max_degree)
        out[name] = {
            "mu": [by_atom(names, r) for r in rep.bass.entries],
            "ext": [by_atom(names, r) for r in rep.ext],
            "completion": rep.bass.completion.describe(),
            "failures": rep.failures,
        }
        if not rep.ok:
            code = VIOLATION
    return code, {"modules": out}


def verify_classif(model: Model, args) -> tuple[int, dict]:
    rep = verify_classification(model.algebra, args.max_degree, list(model.modules.values()))
    code = VIOLATION if rep.failures else (INCOMPLETE if rep.unknown else OK)
    return code, {"subsets": rep.subsets_checked, "sum_pairs": rep.sum_pairs_checked,
                  "unknown": rep.unknown, "failures": rep.failures}


def verify_clos(model: Model, args) -> tuple[int, dict]:
    names = atom_names(model)
    out = {}
    code = OK
    for name, m in selected_modules(model, args.module).items():
        counts = {"ok": 0, "violated": 0, "unknown": 0}
        failures = []
        for sub in enumerate_submodules(m, args.budget):
            rep = verify_closure(sub, args.max_degree)
            counts[rep.status] += 1
            failures.extend(rep.failures)
        out[name] = {"sequences": counts, "failures": failures}
        if counts["violated"]:
            code = VIOLATION
        elif counts["unknown"] and code == OK:
            code = INCOMPLETE
    return code, {"modules": out, "atoms": names}


def verify_final(model: Model, args) -> tuple[int, dict]:
    if not model.base_factors:
        raise InputError("model has no base_ring section")
    if len(model.base_factors) != 1:
        raise InputError("the row module example needs a local base ring")
    r = model.base_ring
    v = get_module(model, args.module, base=True)
    lam = triangular(r)
    if lam.constants().tolist() != model.algebra.constants().tolist():
        raise InputError("algebra is not the lower triangular algebra over the base ring")
    rep = verify_final_example(r, v, args.max_degree)
    return (OK if rep.ok else VIOLATION), {
        "tuple": list(rep.tuple_),
        "classical": {"mu0": rep.classical[0], "mu1": rep.classical[1]},
        "equations": [{"equation": e, "lhs": a, "rhs": b} for e, a, b in rep.equations()],
        "localized": {f"mu_{i}({p})": {"lambda": x, "localization": y} for (p, i), (x, y) in rep.localized.items()},
        "failures": rep.failures,
    }


VERIFIERS = {
    "main-theorem": verify_main,
    "classification": verify_classif,
    "closure": verify_clos,
    "noeth-final-example": verify_final,
}

COMMANDS = {
    "aspec": cmd_aspec,
    "atomic-object": cmd_atomic_object,
    "resolve": cmd_resolve,
    "bass": cmd_bass,
    "asupp": cmd_asupp,
    "monoform": cmd_monoform,
}


# -- output --------------------------------------------------------------------


def render_human(report: dict) -> str:
    lines = [f"{report['command']}: {report['status']}  (model {report['model_sha256'][:12]}, "
             f"max degree {report['degree_bound']}, seed {report['seed']})"]

    def walk(obj, indent):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k, v in obj.items():
                if isinstance(v, (dict, list)) and v and not _flat(v):
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {_short(v)}")
        elif isinstance(obj, list):
            for i, v in enumerate(obj):
                if isinstance(v, (dict, list)) and v and not _flat(v):
                    lines.append(f"{pad}[{i}]")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}[{i}] {_short(v)}")

    walk(report["result"], 1)
    if report.get("error"):
        lines.append(f"  error: {report['error']}")
    return "\n".join(lines)


def _flat(v) -> bool:
    if isinstance(v, dict):
        return all(not isinstance(x, (dict, list)) for x in v.values())
    return all(not isinstance(x, dict) for x in v) and len(json.dumps(v)) < 80


def _short(v) -> str:
    if isinstance(v, dict):
        return ", ".join(f"{k}={x}" for k, x in v.items()) or "{}"
    return json.dumps(v) if isinstance(v, list) else str(v)


STATUS = {OK: "ok", VIOLATION: "violation", INPUT_ERROR: "input-error", INCOMPLETE: "incomplete"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-degree", type=int, default=4)
    common.add_argument("--format", choices=("human", "json"), default="human")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=None, help="enumeration cap (vectors)")
    common.add_argument("--module")

    p = argparse.ArgumentParser(prog="atomcalc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("aspec", "bass", "asupp"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("model")
    s = sub.add_parser("atomic-object", parents=[common])
    s.add_argument("--atom")
    s.add_argument("model")
    s = sub.add_parser("resolve", parents=[common])
    s.add_argument("--projective", action="store_true")
    s.add_argument("model")
    s = sub.add_parser("monoform", parents=[common])
    s.add_argument("--method", choices=("socle_criterion", "exhaustive", "both"), default="socle_criterion")
    s.add_argument("model")
    s = sub.add_parser("verify", parents=[common])
    s.add_argument("what", choices=sorted(VERIFIERS))
    s.add_argument("model")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else OK
    if args.budget is None:
        env = os.environ.get("ATOMCALC_BUDGET")
        try:
            args.budget = int(env) if env else DEFAULT_BUDGET
        except ValueError:
            print(f"atomcalc: bad ATOMCALC_BUDGET {env!r}", file=sys.stderr)
            return INPUT_ERROR
    command = args.command if args.command != "verify" else f"verify {args.what}"
    report = {"command": command, "degree_bound": args.max_degree, "seed": args.seed, "budget": args.budget}
    try:
        if args.max_degree < 0:
            raise InputError("--max-degree must be nonnegative")
        model = load(args.model, seed=args.seed)
        report["model_sha256"] = model.sha256
        fn = VERIFIERS[args.what] if args.command == "verify" else COMMANDS[args.command]
        code, result = fn(model, args)
    except (ModelError, InputError) as e:
        print(f"atomcalc: {e}", file=sys.stderr)
        return INPUT_ERROR
    except (BudgetExceeded, TruncatedError) as e:
        code, result = INCOMPLETE, {}
        report["error"] = str(e)
    report["status"] = STATUS[code]
    report["result"] = result
    if args.format == "json":
        print(json.dumps(report, sort_keys=True, indent=1))
    else:
        print(render_human(report))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
