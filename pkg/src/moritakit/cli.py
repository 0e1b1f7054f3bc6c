"""Command-line entry point.

Exit status: 0 when the check passes or the transformation succeeds, 1 when
a check fails or is inconclusive, 2 on unreadable or malformed input.
Reports are JSON by default (``--text`` for a plain rendering) and always
echo the bounds they were computed with.  Default bounds can be set with
``MORITAKIT_BOUNDS="radius=2,depth=6,index_bound=4,word_bound=4"``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .desing import (
    DesingSemigroup,
    DesingSpace,
    desing_from_json,
    verify_all_regular,
    verify_conditions,
)
from .errors import CapacityError, InvalidInputError, MoritaKitError, PreconditionError
from .gba import gba_from_json, gba_to_json
from .graph_alg import (
    GraphSemigroup,
    check_graph_morita,
    classify_dag,
    classify_functional,
    graph_from_json,
    is_hereditary,
    saturated_hereditary_closure,
)
from .groups import FiniteGroup, group_from_json
from .inv_semigroup import (
    Grading,
    brandt,
    brandt_grading,
    brandt_over_group,
    chain,
    finite_from_json,
    trivial_grading,
)
from .labelled_space import LabelledSemigroup, space_from_json, validate_space
from .morita import check_boolean, check_enlargement, check_graph_pair, check_semigroup
from .partial_action import SubactionMap, action_from_json, validate_axioms
from .semilattice import semilattice_from_json

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

DEFAULT_BOUNDS = {"radius": 2, "depth": 6, "index_bound": 4, "word_bound": 4, "filter_bound": 20}
ENV_BOUNDS = "MORITAKIT_BOUNDS"


class InputError(Exception):
    def __init__(self, message, **info):
        super().__init__(message)
        self.info = info


def env_bounds() -> dict:
    out = dict(DEFAULT_BOUNDS)
    raw = os.environ.get(ENV_BOUNDS, "").strip()
    if not raw:
        return out
    for item in raw.split(","):
        key, _, val = item.partition("=")
        key = key.strip().replace("-", "_")
        if key not in out:
            raise InputError(f"{ENV_BOUNDS}: unknown bound {key!r}")
        try:
            out[key] = int(val)
        except ValueError:
            raise InputError(f"{ENV_BOUNDS}: bound {key!r} must be an integer") from None
        if out[key] < 1:
            raise InputError(f"{ENV_BOUNDS}: bound {key!r} must be positive")
    return out


def read_json(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}", path=path) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc.msg}", path=path, line=exc.lineno,
                         column=exc.colno, position=exc.pos) from None


def detect_kind(data) -> str:
    if not isinstance(data, dict):
        raise InputError("top-level JSON value must be an object")
    if data.get("kind") == "desingularized":
        return "desingularized"
    if "labels" in data:
        return "space"
    if "group" in data:
        return "action"
    if data.get("kind") in ("table", "brandt", "brandt-over-cyclic", "chain"):
        return "semigroup"
    if "meet" in data:
        return "semilattice"
    if "universe" in data:
        return "gba"
    if "vertices" in data:
        return "graph"
    raise InputError("cannot tell what kind of object this file describes")


def load_semigroup(data: dict):
    """Finite semigroup with an optional grading.

    Accepts a table (``elements``/``table``/``zero`` and optionally
    ``grading: {"group": ..., "degrees": {name: word}}``) or a named family:
    ``{"kind": "brandt", "n": 3}``, ``{"kind": "brandt-over-cyclic", "n": 2,
    "order": 2}``, ``{"kind": "chain", "length": 3}``.
    """
    kind = data.get("kind", "table")
    if kind == "brandt":
        n = int(data.get("n", 2))
        T = brandt(n)
        return T, brandt_grading(T, n)
    if kind == "brandt-over-cyclic":
        n, order = int(data.get("n", 2)), int(data.get("order", 2))
        G = FiniteGroup.cyclic(order)
        T = brandt_over_group(G, n)
        return T, brandt_grading(T, n, G)
    if kind == "chain":
        T = chain(int(data.get("length", 2)))
        return T, trivial_grading(T)
    T = finite_from_json(data)
    grading = None
    if "grading" in data:
        try:
            G = group_from_json(data["grading"]["group"])
            degrees = {str(k): G.parse(str(v)) for k, v in data["grading"]["degrees"].items()}
        except (KeyError, TypeError, AttributeError) as exc:
            raise InvalidInputError(f"malformed grading: {exc}") from None
        missing = [x for x in T.names if x != T.zero and x not in degrees]
        if missing:
            raise InvalidInputError(f"grading has no degree for {missing[0]!r}")
        grading = Grading(G, degrees.__getitem__)
    return T, grading


def _report(result: dict, ok: bool) -> tuple:
    result = dict(result)
    result.setdefault("status", "pass" if ok else "fail")
    return result, EXIT_OK if ok else EXIT_FAIL


# subcommands ---------------------------------------------------------------

def cmd_validate(args, bounds):
    data = read_json(args.file)
    kind = args.kind or detect_kind(data)
    if kind == "space":
        L = space_from_json(data)
        rep = validate_space(L)
        return _report({"kind": "space", **rep.to_json(L)}, rep.ok)
    if kind == "action":
        act = action_from_json(data)
        rep = validate_axioms(act)
        return _report({"kind": "action", **rep.to_json(act.group.format)}, rep.ok)
    if kind == "gba":
        g = gba_from_json(data)
        return _report({"kind": "gba", "ok": True, "blocks": gba_to_json(g)["generators"],
                        "members": 2 ** len(g.block_masks)}, True)
    if kind == "desingularized":
        D = desing_from_json(data)
        rep = verify_all_regular(D, D.depth)
        return _report({"kind": "desingularized", **rep.to_json()}, rep.ok)
    if kind == "semilattice":
        P = semilattice_from_json(data)
        P._validate()
        return _report({"kind": "semilattice", "ok": True, "elements": len(P.elements)}, True)
    if kind == "semigroup":
        T, _ = load_semigroup(data)
        return _report({"kind": "semigroup", "ok": True, "elements": len(T.names)}, True)
    if kind == "graph":
        G = graph_from_json(data)
        return _report({"kind": "graph", "ok": True, "vertices": len(G.vertices), "edges": len(G.edges)}, True)
    raise InputError(f"unknown kind {kind!r}")


def cmd_desingularize(args, bounds):
    data = read_json(args.file)
    depth = args.depth or bounds["depth"]
    L = space_from_json(data)
    D = DesingSpace(L, depth)
    out = D.to_json()
    regular = verify_all_regular(D, depth)
    result = {"desingularized": out, "regularity": regular.to_json(), "bounds": {"depth": depth}}
    ok = regular.ok
    if args.verify:
        radius = args.radius or bounds["radius"]
        index_bound = args.index_bound or bounds["index_bound"]
        cond = verify_conditions(D, radius, index_bound)
        result["conditions"] = cond.to_json()
        ok = ok and cond.ok
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(out, fh, indent=2)
        result["written"] = args.out
        del result["desingularized"]
    return _report(result, ok)


def _split(text: str | None) -> list:
    if not text:
        return []
    return [p.strip() for p in text.split(",") if p.strip()]


def cmd_check_morita(args, bounds):
    radius = args.radius or bounds["radius"]
    level = args.level
    if level == "graph":
        if not args.graph:
            raise InputError("--graph is required at the graph level")
        G = graph_from_json(read_json(args.graph))
        H = _split(args.H) or sorted(G.sinks)
        if args.semigroup_level:
            rep = check_graph_pair(H, G, radius)
        else:
            v = check_graph_morita(H, G)
            return _report({"level": "graph", **v.to_json(), "bounds": {"exact": True}}, v.equivalent)
        return _report(rep.to_json(), rep.ok)
    if level == "boolean":
        if not args.action or not args.sub:
            raise InputError("--action and --sub are required at the boolean level")
        act = action_from_json(read_json(args.action))
        b1 = gba_from_json(read_json(args.sub))
        if b1.universe != act.base.universe:
            raise InvalidInputError("the subalgebra must live on the universe of the action")
        s = SubactionMap.inclusion(b1, act)
        rep = check_boolean(s)
        return _report(rep.to_json(), rep.ok)
    if level == "semigroup":
        if not args.s2:
            raise InputError("--s2 is required at the semigroup level")
        d2 = read_json(args.s2)
        kind2 = detect_kind(d2)
        index_bound = args.index_bound or bounds["index_bound"]
        if kind2 in ("desingularized", "space"):
            D = desing_from_json(d2) if kind2 == "desingularized" else DesingSpace(
                space_from_json(d2), bounds["depth"])
            if args.s1:
                L1 = space_from_json(read_json(args.s1))
                if L1.to_json() != D.base.to_json():
                    raise InvalidInputError("--s1 is not the base space of --s2")
            rep = check_semigroup(LabelledSemigroup(D.base), DesingSemigroup(D), radius=radius,
                                  index_bound=index_bound)
            return _report(rep.to_json(), rep.ok)
        if kind2 == "graph":
            G = graph_from_json(d2)
            if args.s1:
                H = graph_from_json(read_json(args.s1)).vertices
            else:
                H = _split(args.H)
            rep = check_graph_pair(H, G, radius)
            return _report(rep.to_json(), rep.ok)
        T, grading = load_semigroup(d2)
        if args.s1:
            d1 = read_json(args.s1)
            elems = d1.get("elements") if isinstance(d1, dict) else d1
            S = T.subsemigroup([str(x) for x in elems])
        else:
            S = T
        rep = check_semigroup(S, T, grading, radius=None)
        return _report(rep.to_json(), rep.ok)
    if level == "enlargement":
        if not args.t:
            raise InputError("--t is required at the enlargement level")
        T, grading = load_semigroup(read_json(args.t))
        if args.corner:
            e = args.corner
            if e not in T.names or not T.is_idempotent(e):
                raise InvalidInputError(f"{e!r} is not a nonzero idempotent")
            S = [x for x in T.names if x != T.zero and T.multiply(T.multiply(e, x), e) == x]
        else:
            S = _split(args.s)
            if not S:
                raise InputError("give --corner or --s")
        rep = check_enlargement(S, T, grading)
        return _report(rep.to_json(), rep.ok)
    raise InputError(f"unknown level {level!r}")


def cmd_saturated_closure(args, bounds):
    G = graph_from_json(read_json(args.file))
    H = _split(args.H)
    her = is_hereditary(H, G)
    if not her:
        return _report({"hereditary": False, "witness": her.witness.id}, False)
    closure = saturated_hereditary_closure(H, G)
    full = closure == frozenset(G.vertices)
    return _report({"hereditary": True, "closure": sorted(closure), "everything": full}, True)


def cmd_classify(args, bounds):
    G = graph_from_json(read_json(args.file))
    res = classify_functional(G) if args.functional else classify_dag(G)
    return _report({"mode": "functional" if args.functional else "dag", **res.to_json()}, res.ok)


def cmd_tight_filters(args, bounds):
    P = semilattice_from_json(read_json(args.file))
    bound = args.bound or bounds["filter_bound"]
    filters = P.tight_filters(bound)
    return _report({
        "tight_filters": [sorted(str(x) for x in f) for f in filters],
        "generators": [str(p) for p in P.tight_generators()],
        "bounds": {"filter_bound": bound},
    }, True)


def cmd_semigroup_ball(args, bounds):
    data = read_json(args.file)
    radius = args.radius or bounds["radius"]
    kind = detect_kind(data)
    if kind == "graph":
        S = GraphSemigroup(graph_from_json(data))
        elems = S.ball(radius)
    elif kind == "space":
        S = LabelledSemigroup(space_from_json(data))
        elems = S.ball(radius)
    elif kind == "desingularized":
        D = desing_from_json(data)
        S = DesingSemigroup(D)
        elems = S.ball(radius, args.index_bound or bounds["index_bound"])
    elif kind == "semigroup":
        S, _ = load_semigroup(data)
        elems = S.ball()
    else:
        raise InputError(f"no semigroup for a {kind} file")
    return _report({"count": len(elems), "elements": [S.format(x) for x in elems],
                    "bounds": {"radius": radius}}, True)


# plumbing ------------------------------------------------------------------

def render_text(result: dict, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for key, val in result.items():
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.append(render_text(val, indent + 1))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{pad}{key}:")
            for item in val:
                lines.append(render_text(item, indent + 1))
                lines.append(f"{pad}  -")
        else:
            lines.append(f"{pad}{key}: {val}")
    return "\n".join(x for x in lines if x)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json", help="JSON output (default)")
    fmt.add_argument("--text", dest="format", action="store_const", const="text", help="plain text output")
    common.add_argument("--radius", type=int, help="ball radius")
    common.add_argument("--index-bound", type=int, help="largest b-index explored")

    p = argparse.ArgumentParser(prog="moritakit", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", parents=[common], help="validate a Gba, labelled space or action")
    v.add_argument("file")
    v.add_argument("--kind", choices=["gba", "space", "action", "desingularized", "semilattice",
                                      "semigroup", "graph"])
    v.set_defaults(func=cmd_validate)

    d = sub.add_parser("desingularize", parents=[common], help="build the desingularized space")
    d.add_argument("file")
    d.add_argument("--depth", type=int)
    d.add_argument("--out")
    d.add_argument("--verify", action="store_true", help="also run the four-condition check")
    d.set_defaults(func=cmd_desingularize)

    m = sub.add_parser("check-morita", parents=[common], help="check sufficient conditions")
    m.add_argument("--level", required=True, choices=["boolean", "semigroup", "graph", "enlargement"])
    m.add_argument("--s1")
    m.add_argument("--s2")
    m.add_argument("--graph")
    m.add_argument("--H", help="comma-separated vertex list")
    m.add_argument("--semigroup-level", action="store_true",
                   help="at the graph level, also run the semigroup clauses")
    m.add_argument("--action")
    m.add_argument("--sub")
    m.add_argument("--t")
    m.add_argument("--s", help="comma-separated elements of the subsemigroup")
    m.add_argument("--corner", help="idempotent e for S = eTe")
    m.set_defaults(func=cmd_check_morita)

    c = sub.add_parser("saturated-closure", parents=[common], help="hereditary saturated closure")
    c.add_argument("file")
    c.add_argument("--H", required=True)
    c.set_defaults(func=cmd_saturated_closure)

    k = sub.add_parser("classify", parents=[common], help="Morita type of a DAG or functional graph")
    mode = k.add_mutually_exclusive_group(required=True)
    mode.add_argument("--dag", action="store_true")
    mode.add_argument("--functional", action="store_true")
    k.add_argument("file")
    k.set_defaults(func=cmd_classify)

    t = sub.add_parser("tight-filters", parents=[common], help="tight filters of a finite semilattice")
    t.add_argument("file")
    t.add_argument("--bound", type=int)
    t.set_defaults(func=cmd_tight_filters)

    b = sub.add_parser("semigroup-ball", parents=[common], help="enumerate a semigroup ball")
    b.add_argument("file")
    b.set_defaults(func=cmd_semigroup_ball)
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.format or "json"
    try:
        bounds = env_bounds()
        for name in ("radius", "index_bound"):
            val = getattr(args, name, None)
            if val is not None and val < 1:
                raise InputError(f"--{name.replace('_', '-')} must be positive")
        result, code = args.func(args, bounds)
        result.setdefault("bounds", {})
        result["bounds"] = {**{k: v for k, v in bounds.items()}, **result["bounds"]}
    except InputError as exc:
        result, code = {"status": "input-error", "error": str(exc), **exc.info}, EXIT_INPUT
    except (InvalidInputError, PreconditionError) as exc:
        result, code = {"status": "input-error", "error": str(exc)}, EXIT_INPUT
    except CapacityError as exc:
        result, code = {"status": "capacity", "error": str(exc), "bound": exc.bound}, EXIT_FAIL
    except MoritaKitError as exc:
        result, code = {"status": "fail", "error": str(exc)}, EXIT_FAIL
    result["command"] = args.command
    if fmt == "text":
        print(render_text(result), file=out)
    else:
        print(json.dumps(result, indent=2, default=str), file=out)
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
