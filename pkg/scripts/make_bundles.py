"""Write the documented example bundles under bundles/ in canonical form."""

from __future__ import annotations

import json
from pathlib import Path

from perfcx.serialization import parse_bundle, render_bundle

ROOT = Path(__file__).resolve().parent.parent / "bundles"

QQ = {"kind": "RATIONALS"}
DUAL = {"kind": "DUAL_NUMBERS", "base": QQ}
POLY_U = {"kind": "POLYNOMIAL", "base": QQ, "vars": ["u"]}


def two_term(d):
    return {"ranks": {"0": 1, "1": 1}, "differentials": {"0": [[d]]}}


BUNDLES = {
    "cohomology_two_term": {
        "ring": QQ,
        "complexes": {"C": two_term("0")},
        "args": {"complex": "C"},
    },
    "is_qiso_identity": {
        "ring": QQ,
        "complexes": {"C": two_term("0")},
        "maps": {"id": {"source": "C", "target": "C", "degree": 0,
                        "components": {"0": [["1"]], "1": [["1"]]}, "assert_chain_map": True}},
        "args": {"map": "id"},
    },
    "ext_two_term": {
        "ring": QQ,
        "complexes": {"C": two_term("0")},
        "args": {"source": "C", "target": "C"},
    },
    "ext_compare": {
        "ring": QQ,
        "complexes": {"C": two_term("1")},
        "maps": {
            "id": {"source": "C", "target": "C", "degree": 0, "components": {"0": [["1"]], "1": [["1"]]}},
            "zero": {"source": "C", "target": "C", "degree": 0},
        },
        "args": {"classes": ["id", "zero"]},
    },
    "tor_amplitude_dual": {
        "ring": DUAL,
        "complexes": {"E": {"ranks": {"-1": 1, "0": 1}, "differentials": {"-1": [["eps"]]}}},
        "args": {"complex": "E"},
    },
    "cone_projection": {
        "ring": QQ,
        "complexes": {"P": {"ranks": {"0": 2}}},
        "maps": {"f": {"source": "P", "target": "P", "degree": 0, "components": {"0": [["1", "0"], ["0", "0"]]}}},
        "args": {"map": "f"},
    },
    "truncate_ge": {
        "ring": QQ,
        "complexes": {"C": {"ranks": {"-1": 1, "0": 1}}},
        "args": {"complex": "C", "side": "ge", "degree": 0},
    },
    "dk_verify_g1_edge": {
        "ring": QQ,
        "complexes": {"E": two_term("0")},
        "maps": {
            "id": {"source": "E", "target": "E", "degree": 0, "components": {"0": [["1"]], "1": [["1"]]}},
            "H": {"source": "E", "target": "E", "degree": -1, "components": {"1": [["5"]]}},
        },
        "witness": {"kind": "G1_EDGE", "complex": "E", "components": {"phi": "id", "psi": "id", "H": "H"}},
    },
    "dk_verify_bad_homotopy": {
        "ring": QQ,
        "complexes": {"E": two_term("1")},
        "maps": {
            "id": {"source": "E", "target": "E", "degree": 0, "components": {"0": [["1"]], "1": [["1"]]}},
            "H": {"source": "E", "target": "E", "degree": -1, "components": {"1": [["1"]]}},
        },
        "witness": {"kind": "G1_EDGE", "complex": "E", "components": {"phi": "id", "psi": "id", "H": "H"}},
    },
    "obstruct_nonzero": {
        "ring": DUAL,
        "complexes": {"E": two_term("0"), "F": two_term("eps")},
        "maps": {"phi0": {"source": "E", "target": "F", "degree": 0,
                          "components": {"0": [["1"]], "1": [["1"]]}, "ring": QQ}},
        "args": {"E": "E", "F": "F", "phi0": "phi0"},
    },
    "lift_identity": {
        "ring": DUAL,
        "complexes": {"F": two_term("eps")},
        "maps": {"phi0": {"source": "F", "target": "F", "degree": 0,
                          "components": {"0": [["1"]], "1": [["1"]]}, "ring": QQ}},
        "args": {"E": "F", "F": "F", "phi0": "phi0"},
    },
    "lift_obstructed": {
        "ring": DUAL,
        "complexes": {"E": two_term("0"), "F": two_term("eps")},
        "maps": {"phi0": {"source": "E", "target": "F", "degree": 0,
                          "components": {"0": [["1"]], "1": [["1"]]}, "ring": QQ}},
        "args": {"E": "E", "F": "F", "phi0": "phi0"},
    },
    "descend_gl2": {
        "ring": QQ,
        "complexes": {"P": {"ranks": {"0": 2}}},
        "maps": {"f": {"source": "P", "target": "P", "degree": 0,
                       "components": {"0": [["1", "u"], ["0", "1"]]}, "ring": POLY_U, "assert_chain_map": True}},
        "args": {"P": "P", "Q": "P", "f": "f"},
    },
    "descend_no_point": {
        "ring": QQ,
        "complexes": {"P": {"ranks": {"0": 2}}},
        "maps": {"f": {"source": "P", "target": "P", "degree": 0,
                       "components": {"0": [["0", "1 + u"], ["0", "0"]]}, "ring": POLY_U}},
        "args": {"P": "P", "Q": "P", "f": "f"},
    },
}

# (bundle, command, flags, expected exit code)
CASES = {
    "cohomology_two_term": ("cohomology_two_term", "cohomology", [], 0),
    "is_qiso_identity": ("is_qiso_identity", "is-qiso", [], 0),
    "ext_two_term": ("ext_two_term", "ext", [], 0),
    "ext_compare": ("ext_compare", "ext", ["--compare"], 0),
    "tor_amplitude_dual": ("tor_amplitude_dual", "tor-amplitude", [], 0),
    "cone_projection": ("cone_projection", "cone", [], 0),
    "truncate_ge": ("truncate_ge", "truncate", [], 0),
    "dk_verify_g1_edge": ("dk_verify_g1_edge", "dk-verify", [], 0),
    "dk_verify_bad_homotopy": ("dk_verify_bad_homotopy", "dk-verify", [], 1),
    "obstruct_nonzero": ("obstruct_nonzero", "obstruct", [], 0),
    "lift_identity": ("lift_identity", "lift", [], 0),
    "lift_obstructed": ("lift_obstructed", "lift", [], 2),
    "descend_gl2_seed42": ("descend_gl2", "descend", ["--seed", "42"], 0),
    "descend_gl2_certified": ("descend_gl2", "descend", ["--seed", "7", "--certify-generic"], 0),
    "descend_no_point": ("descend_no_point", "descend", ["--seed", "1", "--max-trials", "5"], 2),
}


def main():
    ROOT.mkdir(exist_ok=True)
    for name, data in BUNDLES.items():
        text = render_bundle(parse_bundle(json.dumps(data)))
        (ROOT / f"{name}.json").write_text(text)
    cases = {k: {"bundle": f"bundles/{b}.json", "command": c, "flags": f, "exit": e}
             for k, (b, c, f, e) in CASES.items()}
    (ROOT / "cases.json").write_text(json.dumps(cases, indent=2) + "\n")


if __name__ == "__main__":
    main()
