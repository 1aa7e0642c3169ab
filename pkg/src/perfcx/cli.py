"""Command-line interface: ``perfcx COMMAND --input bundle.json``.

Reports go to standard output as JSON; diagnostics go to standard error.
Exit codes: 0 success, 1 internal error (or a failing witness for
``dk-verify``), 2 negative domain result, 3 invalid input.
"""

from __future__ import annotations

import argparse
import sys
from typing import Any, Callable

from . import complexes as cx
from . import derived, simplicial
from .deformation import DeformedComplex, lift, obstruction
from .errors import (
    InternalError,
    NoPointFound,
    NotQisoInput,
    ParseError,
    PerfcxError,
    ValidationError,
)
from .hilbert90 import descend
from .serialization import (
    Bundle,
    complex_to_json,
    dims_to_json,
    dumps,
    map_to_json,
    parse_bundle,
    pointer,
    ring_to_json,
)

EXIT_OK, EXIT_INTERNAL, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2, 3
NEGATIVE = (NoPointFound, NotQisoInput)

COMMANDS = ("cohomology", "is-qiso", "ext", "tor-amplitude", "cone", "truncate",
            "dk-verify", "obstruct", "lift", "descend")


class Flags(dict):
    """Command flags with attribute access and defaults."""

    def __getattr__(self, name):
        return self.get(name)


def _args(bundle: Bundle, required: tuple[str, ...], optional: tuple[str, ...] = ()) -> dict:
    args = bundle.args
    if args is None:
        raise ValidationError("/args", "this command needs an args object")
    for k in required:
        if k not in args:
            raise ValidationError(pointer("args", k), "required field missing")
    for k in args:
        if k not in required and k not in optional:
            raise ValidationError(pointer("args", k), "unknown field")
    return args


def _complex_ref(bundle: Bundle, args: dict, key: str):
    name = args[key]
    if not isinstance(name, str) or name not in bundle.complexes:
        raise ValidationError(pointer("args", key), "expected the name of a complex")
    return name, bundle.complexes[name]


def _map_ref(bundle: Bundle, args: dict, key: str):
    name = args[key]
    if not isinstance(name, str) or name not in bundle.maps:
        raise ValidationError(pointer("args", key), "expected the name of a map")
    return name, bundle.maps[name]


def _cmd_cohomology(bundle: Bundle, flags: Flags) -> tuple[dict, int]:
    args = _args(bundle, ("complex",))
    _, c = _complex_ref(bundle, args, "complex")
    return {"cohomology": dims_to_json(cx.cohomology_dims(c))}, EXIT_OK


def _cmd_is_qiso(bundle: Bundle, flags: Flags):
    args = _args(bundle, ("map",))
    _, entry = _map_ref(bundle, args, "map")
    f = entry.map
    if f.degree != 0:
        raise ValidationError(pointer("args", "map"), "a degree 0 map is required")
    cx.check_chain_map(f)
    dims = cx.cohomology_dims(cx.cone(f).complex)
    return {"is_qiso": all(v == 0 for v in dims.values()), "cone_cohomology": dims_to_json(dims)}, EXIT_OK


def _cmd_ext(bundle: Bundle, flags: Flags):
    if flags.compare:
        args = _args(bundle, ("classes",))
        pair = args["classes"]
        if not isinstance(pair, list) or len(pair) != 2:
            raise ValidationError("/args/classes", "expected two map names")
        cls = []
        for i, name in enumerate(pair):
            if not isinstance(name, str) or name not in bundle.maps:
                raise ValidationError(pointer("args", "classes", i), "expected the name of a map")
            try:
                cls.append(derived.ExtClass.of(bundle.maps[name].map))
            except PerfcxError as e:
                raise ValidationError(pointer("args", "classes", i), str(e)) from None
        a, b = cls
        if (a.source, a.target, a.degree) != (b.source, b.target, b.degree):
            raise ValidationError("/args/classes", "classes live in different Ext groups")
        return {"degree": a.degree, "equal": derived.ext_equal(a, b)}, EXIT_OK
    args = _args(bundle, ("source", "target"))
    _, P = _complex_ref(bundle, args, "source")
    _, Q = _complex_ref(bundle, args, "target")
    return {"ext": dims_to_json(derived.ext_dims(P, Q))}, EXIT_OK


def _cmd_tor_amplitude(bundle: Bundle, flags: Flags):
    args = _args(bundle, ("complex",))
    _, c = _complex_ref(bundle, args, "complex")
    amp = derived.tor_amplitude(c)
    return {"tor_amplitude": "EMPTY" if amp is None else list(amp)}, EXIT_OK


def _cmd_cone(bundle: Bundle, flags: Flags):
    args = _args(bundle, ("map",))
    _, entry = _map_ref(bundle, args, "map")
    c = cx.cone(entry.map).complex
    out: dict[str, Any] = {"ring": ring_to_json(c.ring), "cone": complex_to_json(c)}
    if c.ring.is_field:
        out["cohomology"] = dims_to_json(cx.cohomology_dims(c))
    return out, EXIT_OK


def _cmd_truncate(bundle: Bundle, flags: Flags):
    args = _args(bundle, ("complex", "side", "degree"))
    _, c = _complex_ref(bundle, args, "complex")
    side, n = args["side"], args["degree"]
    if side not in ("le", "ge"):
        raise ValidationError("/args/side", "expected \"le\" or \"ge\"")
    if isinstance(n, bool) or not isinstance(n, int) or abs(n) > 10**6:
        raise ValidationError("/args/degree", "expected an integer")
    t = derived.truncate_le(c, n) if side == "le" else derived.truncate_ge(c, n)
    return {"truncation": complex_to_json(t), "cohomology": dims_to_json(cx.cohomology_dims(t))}, EXIT_OK


def _cmd_dk_verify(bundle: Bundle, flags: Flags):
    w = bundle.witness
    if w is None:
        raise ValidationError("/witness", "this command needs a witness object")
    kind = w["kind"]
    if kind not in simplicial.WITNESS_COMPONENTS:
        raise ValidationError("/witness/kind", f"unknown witness kind {kind!r}")
    if w["complex"] not in bundle.complexes:
        raise ValidationError("/witness/complex", "unknown complex")
    E = bundle.complexes[w["complex"]]
    expected = simplicial.WITNESS_COMPONENTS[kind]
    comps = {}
    for key in expected:
        if key not in w["components"]:
            raise ValidationError(pointer("witness", "components", key), "required component missing")
    for key, name in w["components"].items():
        path = pointer("witness", "components", key)
        if key not in expected:
            raise ValidationError(path, "unknown component")
        if name not in bundle.maps:
            raise ValidationError(path, "unknown map")
        f = bundle.maps[name].map
        if f.source != E or f.target != E or f.degree != expected[key]:
            raise ValidationError(path, f"expected a degree {expected[key]} map from and to {w['complex']}")
        comps[key] = f
    if not E.ring.is_field:
        raise ValidationError("/witness/complex", "witnesses are checked over a field")
    fail = simplicial.check_witness(simplicial.AutWitness(kind, E, comps))
    report = {"kind": kind, "valid": fail is None,
              "failed_equation": None if fail is None else fail.equation,
              "degree": None if fail is None else fail.degree}
    return report, EXIT_OK if fail is None else EXIT_INTERNAL


def _deformation_inputs(bundle: Bundle):
    args = _args(bundle, ("E", "F", "phi0"))
    names, deformed = [], []
    for key in ("E", "F"):
        name, c = _complex_ref(bundle, args, key)
        try:
            deformed.append(DeformedComplex(c))
        except PerfcxError as e:
            raise ValidationError(pointer("args", key), str(e)) from None
        names.append(name)
    _, entry = _map_ref(bundle, args, "phi0")
    E, F = deformed
    phi0 = entry.map
    if phi0.source != E.reduction or phi0.target != F.reduction:
        raise ValidationError("/args/phi0", "phi0 must map the reduction of E to the reduction of F")
    return names, E, F, phi0


def _class_json(o, names, base) -> Any:
    if o.is_zero():
        return "zero"
    return {"cocycle": map_to_json(o.cocycle, names[0], names[1], base)}


def _cmd_obstruct(bundle: Bundle, flags: Flags):
    names, E, F, phi0 = _deformation_inputs(bundle)
    o = obstruction(E, F, phi0)
    return {"class": _class_json(o, names, phi0.ring)}, EXIT_OK


def _cmd_lift(bundle: Bundle, flags: Flags):
    names, E, F, phi0 = _deformation_inputs(bundle)
    o = obstruction(E, F, phi0)
    Phi = lift(E, F, phi0)
    out = {"class": _class_json(o, names, phi0.ring),
           "lift": None if Phi is None else map_to_json(Phi, names[0], names[1])}
    return out, EXIT_OK if Phi is not None else EXIT_NEGATIVE


def _cmd_descend(bundle: Bundle, flags: Flags):
    args = _args(bundle, ("P", "Q", "f"))
    pn, P = _complex_ref(bundle, args, "P")
    qn, Q = _complex_ref(bundle, args, "Q")
    _, entry = _map_ref(bundle, args, "f")
    rep = descend(P, Q, entry.map, seed=flags.seed, sample_bound=flags.sample_bound,
                  max_trials=flags.max_trials, certify_generic=bool(flags.certify_generic),
                  assert_qiso=bool(flags.assert_qiso))
    k = P.ring
    g = rep.generic
    return {
        "point": {v: k.render(x) for v, x in rep.point},
        "specialized_map": map_to_json(rep.specialized_map, pn, qn),
        "certificate": dims_to_json(rep.certificate),
        "trials": rep.trials,
        "seed": rep.seed,
        "sample_bound": rep.sample_bound,
        "generic_certified": rep.generic_certified,
        "coefficient_maps": {v: map_to_json(f, pn, qn) for v, f in zip(g.variables, g.coefficient_maps)},
    }, EXIT_OK


HANDLERS: dict[str, Callable[[Bundle, Flags], tuple[dict, int]]] = {
    "cohomology": _cmd_cohomology,
    "is-qiso": _cmd_is_qiso,
    "ext": _cmd_ext,
    "tor-amplitude": _cmd_tor_amplitude,
    "cone": _cmd_cone,
    "truncate": _cmd_truncate,
    "dk-verify": _cmd_dk_verify,
    "obstruct": _cmd_obstruct,
    "lift": _cmd_lift,
    "descend": _cmd_descend,
}


def _error_report(e: PerfcxError, default_path: str) -> dict:
    path = getattr(e, "path", None)
    return {"error": e.code, "path": default_path if path is None else path, "message": str(e)}


def run(command: str, bundle: Bundle, flags: Flags | dict | None = None) -> tuple[dict, int]:
    """Dispatch one command; errors become a report and an exit code."""
    flags = Flags({"seed": 0, "sample_bound": 100, "max_trials": 20, **(flags or {})})
    if command not in HANDLERS:
        raise ValueError(f"unknown command {command!r}")
    try:
        return HANDLERS[command](bundle, flags)
    except NEGATIVE as e:
        return _error_report(e, "/args"), EXIT_NEGATIVE
    except InternalError as e:
        return _error_report(e, ""), EXIT_INTERNAL
    except PerfcxError as e:
        return _error_report(e, "/args"), EXIT_INPUT


def run_text(command: str, text: str | bytes, flags: dict | None = None) -> tuple[dict, int]:
    try:
        bundle = parse_bundle(text)
    except (ParseError, ValidationError) as e:
        return _error_report(e, ""), EXIT_INPUT
    except PerfcxError as e:
        return _error_report(e, ""), EXIT_INPUT
    return run(command, bundle, flags)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_INPUT)


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="perfcx", description="Exact computations with perfect complexes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--input", "-i", required=True, help="bundle JSON file, or - for stdin")
        if name == "ext":
            s.add_argument("--compare", action="store_true",
                           help="decide equality of the two classes named in args.classes")
        if name == "descend":
            s.add_argument("--seed", type=int, default=0)
            s.add_argument("--sample-bound", type=_positive, default=100)
            s.add_argument("--max-trials", type=_positive, default=20)
            s.add_argument("--certify-generic", action="store_true",
                           help="decide the generic point by rank over rational functions first")
            s.add_argument("--assert-qiso", action="store_true",
                           help="fail with NOT_QISO_INPUT if f is not a quasi-isomorphism generically")
    return p


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        if ns.input == "-":
            text = sys.stdin.buffer.read()
        else:
            with open(ns.input, "rb") as fh:
                text = fh.read()
    except OSError as e:
        report, code = {"error": "PARSE_ERROR", "path": "", "message": f"cannot read input: {e.strerror}"}, EXIT_INPUT
    else:
        flags = {k: v for k, v in vars(ns).items() if k not in ("command", "input")}
        try:
            report, code = run_text(ns.command, text, flags)
        except Exception as e:  # a bug, not an input problem
            report, code = {"error": "INTERNAL", "path": "", "message": f"{type(e).__name__}: {e}"}, EXIT_INTERNAL
    if "error" in report:
        sys.stderr.write(f"perfcx: {report['error']} at {report['path'] or '/'}: {report['message']}\n")
    sys.stdout.write(dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
