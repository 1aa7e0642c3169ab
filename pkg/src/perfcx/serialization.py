"""Strict JSON bundles.

A bundle is an object with keys ``ring``, ``complexes``, ``maps`` and the
optional ``args`` and ``witness``::

    {"ring": {"kind": "RATIONALS"},
     "complexes": {"P": {"ranks": {"-1": 1, "0": 2}, "differentials": {"-1": [["1"], ["0"]]}}},
     "maps": {"f": {"source": "P", "target": "P", "degree": 0,
                    "components": {"0": [["1", "0"], ["0", "1"]]}}}}

Scalars are strings in the ring's text grammar; degrees are string keys.  A
complex or map may carry its own ``ring``.  A map whose ring differs from its
endpoints' ring uses the base change (or, from dual numbers to their base
field, the reduction) of those complexes.  Every error names a JSON pointer.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any

from .complexes import Complex, GradedMap, chain_map_defect, validate
from .derived import base_change, embedding
from .deformation import reduce
from .errors import NotAComplex, ParseError, PerfcxError, ValidationError
from .linalg import Matrix
from .rings import (
    DualNumbers,
    PolynomialRing,
    PrimeField,
    RationalFunctionField,
    Rationals,
    Ring,
)

MAX_TEXT = 5_000_000
MAX_RANK = 256
MAX_WINDOW = 64
MAX_OBJECTS = 64
MAX_PRIME = 2**61 - 1
MAX_VARS = 16

_DEGREE = re.compile(r"-?(0|[1-9][0-9]{0,5})\Z")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]{0,63}\Z")


def pointer(*parts) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in parts)


@dataclass
class MapEntry:
    map: GradedMap
    source: str
    target: str
    ring: Ring | None = None
    assert_chain_map: bool = False


@dataclass
class Bundle:
    ring: Ring
    complexes: dict[str, Complex] = field(default_factory=dict)
    complex_rings: dict[str, Ring] = field(default_factory=dict)
    maps: dict[str, MapEntry] = field(default_factory=dict)
    args: dict[str, Any] | None = None
    witness: dict[str, Any] | None = None

    def complex(self, name: str) -> Complex:
        return self.complexes[name]

    def map(self, name: str) -> GradedMap:
        return self.maps[name].map


# ---------------------------------------------------------------------------
# low-level JSON checks


def _pairs(items):
    out = {}
    for k, v in items:
        if k in out:
            raise ValueError(f"duplicate key {k!r}")
        out[k] = v
    return out


def _reject_constant(name):
    raise ValueError(f"non-finite number {name}")


def load_json(text: str | bytes) -> Any:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError("", f"not UTF-8: {e}") from None
    if len(text) > MAX_TEXT:
        raise ParseError("", "input too large")
    try:
        return json.loads(text, object_pairs_hook=_pairs, parse_constant=_reject_constant)
    except RecursionError:
        raise ParseError("", "nesting too deep") from None
    except ValueError as e:
        raise ParseError("", str(e)) from None


def _obj(x, path: str, required=(), optional=()) -> dict:
    if not isinstance(x, dict):
        raise ValidationError(path, "expected an object")
    for k in required:
        if k not in x:
            raise ValidationError(pointer_join(path, k), "required field missing")
    allowed = set(required) | set(optional)
    for k in x:
        if k not in allowed:
            raise ValidationError(pointer_join(path, k), "unknown field")
    return x


def pointer_join(path: str, *parts) -> str:
    return path + pointer(*parts)


def _int(x, path: str, lo: int | None = None, hi: int | None = None) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ValidationError(path, "expected an integer")
    if (lo is not None and x < lo) or (hi is not None and x > hi):
        raise ValidationError(path, f"integer out of range [{lo}, {hi}]")
    return x


def _str(x, path: str) -> str:
    if not isinstance(x, str):
        raise ValidationError(path, "expected a string")
    return x


def _name(x, path: str) -> str:
    if not isinstance(x, str) or not _NAME.match(x):
        raise ValidationError(path, "expected an identifier")
    return x


def _degree_key(k: str, path: str) -> int:
    if not _DEGREE.match(k) or k == "-0":
        raise ValidationError(path, "degree keys must be canonical integers")
    return int(k)


def _named_map(x, path: str) -> dict:
    if not isinstance(x, dict):
        raise ValidationError(path, "expected an object")
    if len(x) > MAX_OBJECTS:
        raise ValidationError(path, f"more than {MAX_OBJECTS} entries")
    for k in x:
        _name(k, pointer_join(path, k))
    return x


# ---------------------------------------------------------------------------
# rings and matrices


def ring_from_json(x, path: str = "/ring") -> Ring:
    x = _obj(x, path, required=("kind",), optional=("p", "base", "vars"))
    kind = x["kind"]
    try:
        if kind == "RATIONALS":
            _obj(x, path, required=("kind",))
            return Rationals()
        if kind == "PRIME_FIELD":
            _obj(x, path, required=("kind", "p"))
            return PrimeField(_int(x["p"], pointer_join(path, "p"), 2, MAX_PRIME))
        if kind in ("POLYNOMIAL", "RATIONAL_FUNCTIONS"):
            _obj(x, path, required=("kind", "base", "vars"))
            base = ring_from_json(x["base"], pointer_join(path, "base"))
            vs = x["vars"]
            if not isinstance(vs, list) or not 1 <= len(vs) <= MAX_VARS:
                raise ValidationError(pointer_join(path, "vars"), f"expected 1..{MAX_VARS} names")
            names = tuple(_name(v, pointer_join(path, "vars", i)) for i, v in enumerate(vs))
            cls = PolynomialRing if kind == "POLYNOMIAL" else RationalFunctionField
            return cls(base, names)
        if kind == "DUAL_NUMBERS":
            _obj(x, path, required=("kind", "base"))
            return DualNumbers(ring_from_json(x["base"], pointer_join(path, "base")))
    except ValidationError:
        raise
    except PerfcxError as e:
        raise ValidationError(path, str(e)) from None
    raise ValidationError(pointer_join(path, "kind"), f"unknown ring kind {kind!r}")


def ring_to_json(r: Ring) -> dict:
    return r.to_json()


def matrix_from_json(x, ring: Ring, rows: int, cols: int, path: str) -> Matrix:
    if not isinstance(x, list) or len(x) != rows:
        raise ValidationError(path, f"expected a list of {rows} rows")
    out = []
    for i, row in enumerate(x):
        rp = pointer_join(path, i)
        if not isinstance(row, list) or len(row) != cols:
            raise ValidationError(rp, f"expected a row of {cols} entries")
        vals = []
        for j, s in enumerate(row):
            sp = pointer_join(rp, j)
            _str(s, sp)
            try:
                vals.append(ring.parse(s))
            except PerfcxError as e:
                raise ValidationError(sp, str(e)) from None
        out.append(tuple(vals))
    return Matrix(ring, rows, cols, tuple(out))


def matrix_to_json(m: Matrix) -> list:
    return [[m.ring.render(x) for x in row] for row in m.entries]


def _degree_table(x, path: str) -> dict[int, Any]:
    if not isinstance(x, dict):
        raise ValidationError(path, "expected an object keyed by degree")
    return {_degree_key(k, pointer_join(path, k)): v for k, v in x.items()}


# ---------------------------------------------------------------------------
# complexes and maps


def complex_from_json(x, ring: Ring, path: str) -> Complex:
    x = _obj(x, path, required=("ranks",), optional=("differentials", "ring"))
    ranks_raw = _degree_table(x["ranks"], pointer_join(path, "ranks"))
    if not ranks_raw:
        raise ValidationError(pointer_join(path, "ranks"), "at least one degree is required")
    ranks = {n: _int(v, pointer_join(path, "ranks", str(n)), 0, MAX_RANK) for n, v in ranks_raw.items()}
    lo, hi = min(ranks), max(ranks)
    if hi - lo + 1 > MAX_WINDOW:
        raise ValidationError(pointer_join(path, "ranks"), f"window wider than {MAX_WINDOW}")
    for n in range(lo, hi + 1):
        if n not in ranks:
            raise ValidationError(pointer_join(path, "ranks", str(n)), "every degree in the window must be listed")
    diffs = {}
    dpath = pointer_join(path, "differentials")
    for n, m in _degree_table(x.get("differentials", {}), dpath).items():
        if not lo <= n < hi:
            raise ValidationError(pointer_join(dpath, str(n)), "differential outside the window")
        diffs[n] = matrix_from_json(m, ring, ranks[n + 1], ranks[n], pointer_join(dpath, str(n)))
    c = Complex.build(ring, ranks, diffs, lo=lo, hi=hi)
    try:
        validate(c)
    except NotAComplex as e:
        raise ValidationError(pointer_join(dpath, str(e.degree)), e.reason) from None
    except PerfcxError as e:
        raise ValidationError(path, str(e)) from None
    return c


def complex_to_json(c: Complex, ring_override: Ring | None = None) -> dict:
    out: dict[str, Any] = {}
    if ring_override is not None:
        out["ring"] = ring_to_json(ring_override)
    out["ranks"] = {str(n): c.rank(n) for n in c.degrees}
    diffs = {str(n): matrix_to_json(c.d(n)) for n in c.degrees if n < c.hi and not c.d(n).is_zero()}
    if diffs:
        out["differentials"] = diffs
    return out


def _complex_over(c: Complex, ring: Ring, path: str) -> Complex:
    if c.ring == ring:
        return c
    if isinstance(c.ring, DualNumbers) and c.ring.base == ring:
        return reduce(c)
    try:
        embedding(c.ring, ring)
    except PerfcxError as e:
        raise ValidationError(path, str(e)) from None
    return base_change(c, ring)


def map_from_json(x, bundle: Bundle, path: str) -> MapEntry:
    x = _obj(x, path, required=("source", "target", "degree"),
             optional=("components", "ring", "assert_chain_map"))
    names = {}
    for key in ("source", "target"):
        nm = _name(x[key], pointer_join(path, key))
        if nm not in bundle.complexes:
            raise ValidationError(pointer_join(path, key), f"unknown complex {nm!r}")
        names[key] = nm
    degree = _int(x["degree"], pointer_join(path, "degree"), -MAX_WINDOW, MAX_WINDOW)
    override = None
    if "ring" in x:
        override = ring_from_json(x["ring"], pointer_join(path, "ring"))
    src, tgt = bundle.complexes[names["source"]], bundle.complexes[names["target"]]
    ring = override or src.ring
    src = _complex_over(src, ring, pointer_join(path, "source"))
    tgt = _complex_over(tgt, ring, pointer_join(path, "target"))
    cpath = pointer_join(path, "components")
    comps = {}
    for n, m in _degree_table(x.get("components", {}), cpath).items():
        if not src.lo <= n <= src.hi:
            raise ValidationError(pointer_join(cpath, str(n)), "component outside the source window")
        comps[n] = matrix_from_json(m, ring, tgt.rank(n + degree), src.rank(n), pointer_join(cpath, str(n)))
    f = GradedMap.build(src, tgt, degree, comps)
    flag = x.get("assert_chain_map", False)
    if not isinstance(flag, bool):
        raise ValidationError(pointer_join(path, "assert_chain_map"), "expected a boolean")
    if flag:
        bad = chain_map_defect(f)
        if bad is not None:
            raise ValidationError(pointer_join(cpath, str(bad)), "chain-map equation fails")
    return MapEntry(f, names["source"], names["target"], override, flag)


def map_to_json(f: GradedMap, source: str, target: str, ring_override: Ring | None = None,
                assert_chain_map: bool = False) -> dict:
    out: dict[str, Any] = {"source": source, "target": target, "degree": f.degree}
    comps = {str(n): matrix_to_json(f.component(n)) for n in f.source.degrees if not f.component(n).is_zero()}
    if comps:
        out["components"] = comps
    if ring_override is not None:
        out["ring"] = ring_to_json(ring_override)
    if assert_chain_map:
        out["assert_chain_map"] = True
    return out


# ---------------------------------------------------------------------------
# bundles


def _check_plain_json(x, path: str, depth: int = 0) -> None:
    if depth > 8:
        raise ValidationError(path, "nesting too deep")
    if isinstance(x, dict):
        for k, v in x.items():
            _check_plain_json(v, pointer_join(path, k), depth + 1)
    elif isinstance(x, list):
        for i, v in enumerate(x):
            _check_plain_json(v, pointer_join(path, i), depth + 1)
    elif isinstance(x, float):
        raise ValidationError(path, "floating point values are not accepted")


def bundle_from_json(data) -> Bundle:
    data = _obj(data, "", required=("ring",), optional=("complexes", "maps", "args", "witness"))
    bundle = Bundle(ring_from_json(data["ring"], "/ring"))
    for name, entry in _named_map(data.get("complexes", {}), "/complexes").items():
        path = pointer("complexes", name)
        ring = bundle.ring
        if isinstance(entry, dict) and "ring" in entry:
            ring = ring_from_json(entry["ring"], pointer_join(path, "ring"))
            bundle.complex_rings[name] = ring
        bundle.complexes[name] = complex_from_json(entry, ring, path)
    for name, entry in _named_map(data.get("maps", {}), "/maps").items():
        if name in bundle.complexes:
            raise ValidationError(pointer("maps", name), "name already used by a complex")
        bundle.maps[name] = map_from_json(entry, bundle, pointer("maps", name))
    if "args" in data:
        if not isinstance(data["args"], dict):
            raise ValidationError("/args", "expected an object")
        _check_plain_json(data["args"], "/args")
        bundle.args = data["args"]
    if "witness" in data:
        w = _obj(data["witness"], "/witness", required=("kind", "complex", "components"))
        _str(w["kind"], "/witness/kind")
        _name(w["complex"], "/witness/complex")
        comps = w["components"]
        if not isinstance(comps, dict):
            raise ValidationError("/witness/components", "expected an object")
        for k, v in comps.items():
            _name(k, pointer("witness", "components", k))
            _name(v, pointer("witness", "components", k))
        bundle.witness = w
    return bundle


def parse_bundle(text: str | bytes) -> Bundle:
    data = load_json(text)
    try:
        return bundle_from_json(data)
    except (ValidationError, ParseError):
        raise
    except PerfcxError as e:
        raise ValidationError("", str(e)) from None
    except RecursionError:
        raise ParseError("", "nesting too deep") from None


def bundle_to_json(b: Bundle) -> dict:
    out: dict[str, Any] = {"ring": ring_to_json(b.ring)}
    if b.complexes:
        out["complexes"] = {n: complex_to_json(c, b.complex_rings.get(n)) for n, c in b.complexes.items()}
    if b.maps:
        out["maps"] = {n: map_to_json(e.map, e.source, e.target, e.ring, e.assert_chain_map)
                       for n, e in b.maps.items()}
    if b.args is not None:
        out["args"] = b.args
    if b.witness is not None:
        out["witness"] = b.witness
    return out


def _encode(x, indent: int) -> str:
    pad = "  " * (indent + 1)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{pad}{json.dumps(k, ensure_ascii=False)}: {_encode(v, indent + 1)}" for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(x, list):
        if all(not isinstance(v, (dict, list)) for v in x):
            return "[" + ", ".join(json.dumps(v, ensure_ascii=False) for v in x) + "]"
        items = [pad + _encode(v, indent + 1) for v in x]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    return json.dumps(x, ensure_ascii=False)


def dumps(obj) -> str:
    """Deterministic JSON text, rows of scalars on one line, trailing newline."""
    return _encode(obj, 0) + "\n"


def render_bundle(b: Bundle) -> str:
    return dumps(bundle_to_json(b))


def dims_to_json(d: dict[int, int]) -> dict[str, int]:
    return {str(n): d[n] for n in sorted(d)}
