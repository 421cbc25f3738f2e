"""Command-line front end.

Commands: ``analyze``, ``certify``, ``flex``, ``lift``, ``crosscheck``.
Input is a JSON document (schema 1) describing the group, its point
representation (rational generator matrices, rationals as "p/q" strings),
the quotient gain graph, the model (body-bar or body-hinge), and an
optional explicit bar configuration.  Machine output is a single sorted
JSON document on stdout; pass ``--format text`` for a human summary.

Exit codes: 0 rigid, 1 flexible, 2 input error, 3 consistency failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Any, Sequence

from .algebra import SquareMatrix
from .errors import ConsistencyError, InputError
from .gaingraph import GainGraph, make_gain_graph
from .genframe import (
    BarConfiguration,
    bar_from_points,
    lift_bars,
    loop_bar_from_point,
    random_generic_bars,
)
from .hinge import analyze_hinge
from .matroid import check_counting_condition, combinatorial_verdict, labeled_signed_graphs
from .rigidity import (
    analyze,
    analyze_generic,
    crosscheck_block_ranks,
    extract_flex,
    flex_residuals,
    orbit_matrix,
)
from .symmetry import AbelianGroup, Element, PointRepresentation

SCHEMA_VERSION = 1

EXIT_RIGID = 0
EXIT_FLEXIBLE = 1
EXIT_INPUT = 2
EXIT_INCONSISTENT = 3


# ---------------------------------------------------------------------------
# input parsing


def parse_rational(x: Any) -> Fraction:
    if isinstance(x, bool):
        raise InputError(f"expected a rational, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad rational literal {x!r}: {exc}")
    raise InputError(f"expected an int or 'p/q' string, got {x!r}")


def _require(doc: dict, key: str, where: str) -> Any:
    if key not in doc:
        raise InputError(f"missing field {key!r} in {where}")
    return doc[key]


def parse_framework(doc: dict) -> dict:
    """Parse a schema-1 framework document into model objects."""
    if not isinstance(doc, dict):
        raise InputError("top-level JSON value must be an object")
    schema = doc.get("schema", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        raise InputError(f"unsupported schema {schema!r}, expected {SCHEMA_VERSION}")
    model = doc.get("model", "body-bar")
    if model not in ("body-bar", "body-hinge"):
        raise InputError(f"unknown model {model!r}")

    group_doc = _require(doc, "group", "document")
    orders = tuple(_require(group_doc, "orders", "group"))
    if not all(isinstance(k, int) for k in orders):
        raise InputError("group orders must be integers")
    group = AbelianGroup(orders)

    rep_doc = _require(doc, "representation", "document")
    d = _require(rep_doc, "d", "representation")
    gens_doc = rep_doc.get("generators", [])
    gens = []
    for rows in gens_doc:
        if len(rows) != d or any(len(r) != d for r in rows):
            raise InputError(f"generator matrices must be {d}x{d}")
        gens.append(SquareMatrix.from_rows([[parse_rational(x) for x in r] for r in rows]))
    rep = PointRepresentation.from_generators(group, d, gens)

    gg_doc = _require(doc, "gain_graph", "document")
    vertices = list(_require(gg_doc, "vertices", "gain_graph"))
    edges = []
    loops_l = []
    for e_doc in _require(gg_doc, "edges", "gain_graph"):
        eid = _require(e_doc, "id", "edge")
        gain = tuple(_require(e_doc, "gain", f"edge {eid}"))
        edges.append((eid, _require(e_doc, "tail", f"edge {eid}"),
                      _require(e_doc, "head", f"edge {eid}"), gain))
        if e_doc.get("inL", False):
            loops_l.append(eid)
    h = make_gain_graph(vertices, edges, loops_l, group=group)

    config = None
    if "configuration" in doc and doc["configuration"] is not None:
        if model == "body-hinge":
            config = parse_hinge_configuration(doc["configuration"], h, rep)
        else:
            config = parse_configuration(doc["configuration"], h, rep)

    return {"model": model, "group": group, "rep": rep, "graph": h, "config": config}


def _parse_point(p: Sequence[Any], d: int) -> tuple[Fraction, ...]:
    vals = [parse_rational(x) for x in p]
    if len(vals) == d:
        return tuple(vals) + (Fraction(1),)
    if len(vals) == d + 1:
        return tuple(vals)
    raise InputError(f"point must have {d} or {d + 1} coordinates, got {len(vals)}")


def parse_configuration(doc: dict, h: GainGraph, rep: PointRepresentation) -> BarConfiguration:
    """Explicit bar configuration: one entry per edge, given by generating
    points (a single point for non-free loops, two points otherwise)."""
    bars_doc = _require(doc, "bars", "configuration")
    entries: dict = {}
    for e in h.edges:
        key = str(e.id)
        if key not in bars_doc:
            raise InputError(f"configuration missing bar for edge {e.id!r}")
        pts = [_parse_point(p, rep.d) for p in _require(bars_doc[key], "points", f"bar {key}")]
        if e.id in h.loops_l:
            if len(pts) != 1:
                raise InputError(f"non-free loop {e.id!r} takes exactly one point")
            entries[e.id] = loop_bar_from_point(h, rep, e.id, pts[0])
        else:
            if len(pts) != 2:
                raise InputError(f"edge {e.id!r} takes exactly two points")
            entries[e.id] = bar_from_points(rep.d, pts[0], pts[1])
        if all(x == 0 for x in entries[e.id].vector):
            raise InputError(f"bar of edge {e.id!r} is the zero extensor")
    return BarConfiguration(d=rep.d, entries=entries, meta={"source": "explicit"})


def parse_hinge_configuration(doc: dict, h: GainGraph, rep: PointRepresentation):
    """Explicit hinge configuration: d-1 generating points per edge."""
    from .algebra import wedge
    from .hinge import HingeConfiguration, HingeEntry

    hinges_doc = _require(doc, "hinges", "configuration")
    entries: dict = {}
    for e in h.edges:
        key = str(e.id)
        if key not in hinges_doc:
            raise InputError(f"configuration missing hinge for edge {e.id!r}")
        pts = [_parse_point(p, rep.d) for p in _require(hinges_doc[key], "points", f"hinge {key}")]
        if len(pts) != rep.d - 1:
            raise InputError(f"hinge {e.id!r} takes exactly {rep.d - 1} points")
        ext = wedge(pts, rep.d)
        if ext.is_zero():
            raise InputError(f"hinge of edge {e.id!r} is the zero extensor")
        entries[e.id] = HingeEntry(vector=ext.coords, points=tuple(tuple(p) for p in pts))
    return HingeConfiguration(d=rep.d, entries=entries, meta={"source": "explicit"})


# ---------------------------------------------------------------------------
# random instances (used by `crosscheck` and by the test ensembles)


def random_diagonal_rep(
    rng: random.Random, orders: tuple[int, ...], d: int
) -> PointRepresentation:
    """Random faithful diagonal +-1 representation of a two-group."""
    group = AbelianGroup(orders)
    while True:
        gens = [
            SquareMatrix.from_rows(
                [
                    [Fraction(rng.choice((1, -1)) if i == j else 0) for j in range(d)]
                    for i in range(d)
                ]
            )
            for _ in orders
        ]
        try:
            rep = PointRepresentation.from_generators(group, d, gens)
        except InputError:
            continue
        if rep.is_faithful():
            return rep


def random_gain_graph(
    rng: random.Random,
    group: AbelianGroup,
    max_vertices: int,
    max_edges: int,
    require_loop_l: bool = False,
) -> GainGraph:
    """Random quotient gain graph: loops never get the identity gain, and a
    loop whose gain has order two goes to the non-free set with probability
    one half."""
    nv = rng.randint(1, max_vertices)
    vertices = [f"v{i}" for i in range(nv)]
    ne = rng.randint(1, max_edges)
    elems = group.elements()
    involutions = [g for g in elems if g != group.identity and group.add(g, g) == group.identity]
    edges = []
    loops_l = []
    for eid in range(ne):
        tail = rng.choice(vertices)
        head = rng.choice(vertices)
        if tail == head:
            candidates = [g for g in elems if g != group.identity]
            if not candidates:
                head = vertices[(vertices.index(tail) + 1) % nv]
                if head == tail:  # single vertex, trivial group: skip loops
                    continue
                gain = group.identity
            else:
                gain = rng.choice(candidates)
                if group.add(gain, gain) == group.identity and rng.random() < 0.5:
                    loops_l.append(eid)
        else:
            gain = rng.choice(elems)
        edges.append((eid, tail, head, gain))
    if require_loop_l and not loops_l and involutions:
        eid = len(edges)
        v = rng.choice(vertices)
        edges.append((eid, v, v, rng.choice(involutions)))
        loops_l.append(eid)
    if not edges:
        edges.append((0, vertices[0], vertices[-1] if nv > 1 else vertices[0], group.identity))
        if nv == 1:
            raise InputError("cannot build a loopless instance on one vertex of a trivial group")
    return make_gain_graph(vertices, edges, loops_l, group=group)


def crosscheck_instances(
    count: int,
    orders: tuple[int, ...],
    d: int,
    seed: int,
    max_vertices: int = 4,
    max_edges: int = 10,
    bound: int = 1000,
) -> dict:
    """Randomized agreement harness: per instance, (a) the exact lifted
    rank must equal the sum of the orbit-matrix ranks, and (b) the
    combinatorial deficiency must equal the numeric flex count per
    character.  Mismatching instances are serialized for replay."""
    rng = random.Random(seed)
    mismatches = []
    for t in range(count):
        rep = random_diagonal_rep(rng, orders, d)
        h = random_gain_graph(rng, rep.group, max_vertices, max_edges)
        cfg_seed = rng.randrange(2 ** 32)
        config = random_generic_bars(h, rep, cfg_seed, bound=bound)
        cc = crosscheck_block_ranks(h, config, rep)
        report = analyze_generic(h, rep, cfg_seed, samples=2, bound=bound)
        issues = []
        if not cc.additive:
            issues.append(
                {
                    "kind": "rank_additivity",
                    "lifted_rank": cc.lifted_rank,
                    "block_ranks": {str(list(k)): v for k, v in cc.block_ranks.items()},
                }
            )
        for g in rep.group.elements():
            verdict = combinatorial_verdict(h, rep, g)
            numeric = report.irrep_report(g)
            if verdict.deficiency != numeric.flex or verdict.rigid != numeric.rigid:
                issues.append(
                    {
                        "kind": "combinatorial_vs_numeric",
                        "irrep": list(g),
                        "deficiency": verdict.deficiency,
                        "flex": numeric.flex,
                    }
                )
        if issues:
            mismatches.append(
                {
                    "instance": t,
                    "issues": issues,
                    "replay": serialize_instance(h, rep, cfg_seed),
                }
            )
    return {
        "count": count,
        "group": {"orders": list(orders)},
        "d": d,
        "seed": seed,
        "mismatches": mismatches,
        "ok": not mismatches,
    }


def serialize_instance(h: GainGraph, rep: PointRepresentation, seed: int) -> dict:
    gens = []
    for gen in rep.group.generators():
        m = rep.tau(gen)
        gens.append([[str(x) for x in row] for row in m.rows])
    return {
        "schema": SCHEMA_VERSION,
        "model": "body-bar",
        "group": {"orders": list(rep.group.orders)},
        "representation": {"d": rep.d, "generators": gens},
        "gain_graph": {
            "vertices": list(h.vertices),
            "edges": [
                {
                    "id": e.id,
                    "tail": e.tail,
                    "head": e.head,
                    "gain": list(e.gain),
                    "inL": e.id in h.loops_l,
                }
                for e in h.edges
            ],
        },
        "seed": seed,
    }


# ---------------------------------------------------------------------------
# commands


def _emit(doc: dict, fmt: str, text_lines) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")
    else:
        for line in text_lines(doc):
            sys.stdout.write(line + "\n")


def _analyze_text(doc: dict):
    yield f"model: {doc['model']}"
    for r in doc["irreps"]:
        yield (
            f"irrep {r['irrep']}: rank {r['rank']}, trivial {r['trivial']}, "
            f"flex {r['flex']} -> {'rigid' if r['rigid'] else 'flexible'}"
        )
    yield f"verdict: {'rigid' if doc['rigid'] else 'flexible'}"


def _irrep_filter(rep: PointRepresentation, arg: str | None) -> list[Element]:
    if arg is None:
        return rep.group.elements()
    out = []
    for part in arg.split(";"):
        elem = tuple(int(x) for x in part.split(",") if x != "")
        if not rep.group.contains(elem):
            raise InputError(f"--irrep {part!r} is not an element of the group")
        out.append(elem)
    return out


def cmd_analyze(args) -> int:
    fw = _load(args)
    rep, h = fw["rep"], fw["graph"]
    combinatorial = rep.group.is_two_group() and rep.is_diagonal_pm_one() and rep.is_faithful()
    shown = [list(g) for g in _irrep_filter(rep, args.irrep)]
    if fw["model"] == "body-hinge":
        hrep = analyze_hinge(h, rep, seed=args.seed, samples=args.samples, config=fw["config"])
        doc = hrep.to_json()
        doc["model"] = "body-hinge"
        doc["irreps"] = [r for r in doc["numeric"]["irreps"] if r["irrep"] in shown]
        doc["rigid"] = hrep.numeric.rigid
        _emit(doc, args.format, _analyze_text)
        if not hrep.consistent:
            return EXIT_INCONSISTENT
        return EXIT_RIGID if hrep.rigid else EXIT_FLEXIBLE
    if fw["config"] is not None:
        report = analyze(h, rep, fw["config"])
    else:
        report = analyze_generic(h, rep, seed=args.seed, samples=args.samples)
    doc = report.to_json()
    doc["model"] = "body-bar"
    doc["irreps"] = [r for r in doc["irreps"] if r["irrep"] in shown]
    consistent = True
    if combinatorial:
        verdicts = [combinatorial_verdict(h, rep, g) for g in rep.group.elements()]
        doc["combinatorial"] = [v.to_json() for v in verdicts]
        if fw["config"] is None:
            by_irrep = {v.irrep: v for v in verdicts}
            for r in report.irreps:
                v = by_irrep[r.irrep]
                if v.rigid != r.rigid or v.deficiency != r.flex:
                    consistent = False
        doc["consistent"] = consistent
        if args.oracle:
            doc["counting_violations"] = _counting_oracle(h, rep)
    _emit(doc, args.format, _analyze_text)
    if not consistent:
        return EXIT_INCONSISTENT
    return EXIT_RIGID if report.rigid else EXIT_FLEXIBLE


def _counting_oracle(h: GainGraph, rep: PointRepresentation) -> dict:
    """Per-character brute-force counting check (small inputs only)."""
    from .gaingraph import remove_zero_loops

    out = {}
    for g in rep.group.elements():
        h_g = remove_zero_loops(h, rep, g)
        labeled = labeled_signed_graphs(h_g, rep, g)
        violation = check_counting_condition(labeled)
        out[str(list(g))] = (
            None
            if violation is None
            else {
                "edges": [list(e) if isinstance(e, tuple) else e for e in violation.edges],
                "size": violation.size,
                "bound": violation.bound,
            }
        )
    return out


def cmd_certify(args) -> int:
    fw = _load(args)
    rep, h = fw["rep"], fw["graph"]
    if fw["model"] == "body-hinge":
        from .gaingraph import multiply_edges
        from .hinge import bar_multiplicity

        h = multiply_edges(h, bar_multiplicity(rep.d))
    certificates = []
    all_rigid = True
    for g in _irrep_filter(rep, args.irrep):
        verdict = combinatorial_verdict(h, rep, g)
        cert = verdict.to_json()
        if args.oracle:
            from .gaingraph import remove_zero_loops

            h_g = remove_zero_loops(h, rep, g)
            labeled = labeled_signed_graphs(h_g, rep, g)
            violation = check_counting_condition(labeled)
            cert["counting_violation"] = (
                None
                if violation is None
                else {
                    "edges": [list(e) if isinstance(e, tuple) else e for e in violation.edges],
                    "size": violation.size,
                    "bound": violation.bound,
                }
            )
        certificates.append(cert)
        all_rigid = all_rigid and verdict.rigid
    doc = {"schema": SCHEMA_VERSION, "model": fw["model"], "certificates": certificates}
    _emit(doc, args.format, _certify_text)
    return EXIT_RIGID if all_rigid else EXIT_FLEXIBLE


def _certify_text(doc: dict):
    for cert in doc["certificates"]:
        status = "rigid" if cert["rigid"] else f"flexible (deficiency {cert['deficiency']})"
        yield f"irrep {cert['irrep']}: rank {cert['rank']} / target {cert['target']} -> {status}"
        if cert["rigid"]:
            for label, ids in sorted(cert["decomposition"].items()):
                if ids:
                    yield f"  {label}: {ids}"


def cmd_flex(args) -> int:
    fw = _load(args)
    rep, h = fw["rep"], fw["graph"]
    if fw["model"] == "body-hinge":
        raise InputError("flex extraction runs on the body-bar model; expand hinges first")
    config = fw["config"] or random_generic_bars(h, rep, args.seed)
    flexes = []
    for g in _irrep_filter(rep, args.irrep):
        om = orbit_matrix(h, config, rep, g)
        flex = extract_flex(om, rep)
        if flex is not None:
            residual = flex_residuals(om, flex)
            if any(x != 0 for x in residual):
                raise ConsistencyError("extracted flex does not satisfy the orbit system")
            flexes.append(flex.to_json())
    doc = {"schema": SCHEMA_VERSION, "flexes": flexes}
    _emit(doc, args.format, _flex_text)
    return EXIT_FLEXIBLE if flexes else EXIT_RIGID


def _flex_text(doc: dict):
    if not doc["flexes"]:
        yield "no nontrivial flexes"
    for f in doc["flexes"]:
        yield f"irrep {f['irrep']}:"
        for v, vec in sorted(f["assignment"].items()):
            yield f"  {v}: {vec}"


def cmd_lift(args) -> int:
    fw = _load(args)
    rep, h = fw["rep"], fw["graph"]
    if fw["model"] == "body-hinge":
        from .hinge import lift_hinges, random_generic_hinges

        hconf = fw["config"] or random_generic_hinges(h, rep, args.seed)
        cov, hinges = lift_hinges(h, hconf, rep)
        entries = hinges
        vector_key = "hinge"
    else:
        config = fw["config"] or random_generic_bars(h, rep, args.seed)
        cov, entries = lift_bars(h, config, rep)
        vector_key = "bar"
    doc = {
        "schema": SCHEMA_VERSION,
        "model": fw["model"],
        "vertices": [[v, list(g)] for v, g in cov.vertices],
        "edges": [
            {
                "id": [e.base, list(e.id[1])],
                "tail": [e.tail[0], list(e.tail[1])],
                "head": [e.head[0], list(e.head[1])],
                vector_key: [str(x) for x in entries[e.id].vector],
                "points": (
                    None
                    if entries[e.id].points is None
                    else [[str(x) for x in p] for p in entries[e.id].points]
                ),
            }
            for e in cov.edges
        ],
    }
    _emit(doc, args.format, _lift_text)
    return EXIT_RIGID


def _lift_text(doc: dict):
    yield f"{len(doc['vertices'])} bodies, {len(doc['edges'])} bars"
    for e in doc["edges"]:
        yield f"  {e['id']}: {e['tail']} -- {e['head']}"


def cmd_crosscheck(args) -> int:
    orders = _parse_orders(args.group)
    summary = crosscheck_instances(
        count=args.count,
        orders=orders,
        d=args.dim,
        seed=args.seed,
        max_vertices=args.max_vertices,
        max_edges=args.max_edges,
    )
    _emit(summary, args.format, _crosscheck_text)
    return EXIT_RIGID if summary["ok"] else EXIT_INCONSISTENT


def _crosscheck_text(doc: dict):
    yield (
        f"{doc['count']} instances, group orders {doc['group']['orders']}, "
        f"{len(doc['mismatches'])} mismatches"
    )
    for m in doc["mismatches"]:
        yield f"  instance {m['instance']}: {[i['kind'] for i in m['issues']]}"


def _parse_orders(arg: str) -> tuple[int, ...]:
    if arg in ("trivial", ""):
        return ()
    try:
        return tuple(int(x) for x in arg.split("x"))
    except ValueError:
        raise InputError(f"bad group spec {arg!r}; use e.g. '2' or '2x2' or 'trivial'")


def _load(args) -> dict:
    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.input}: line {exc.lineno}, column {exc.colno}: {exc.msg}")
    return parse_framework(doc)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitrig",
        description="Infinitesimal rigidity of symmetric body-bar and body-hinge frameworks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_input=True):
        if with_input:
            p.add_argument("input", help="framework JSON file")
        p.add_argument("--seed", type=int, default=42, help="PRNG seed for generic sampling")
        p.add_argument("--samples", type=int, default=2, help="independent samples for rank agreement")
        p.add_argument("--irrep", default=None,
                       help="restrict to characters, e.g. '1' or '0,1;1,0' for product groups")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--oracle", action="store_true",
                       help="run the brute-force counting oracle on small inputs")

    p = sub.add_parser("analyze", help="numeric + combinatorial rigidity report")
    add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("certify", help="per-character matroid union certificates")
    add_common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("flex", help="extract nontrivial symmetric flexes")
    add_common(p)
    p.set_defaults(func=cmd_flex)

    p = sub.add_parser("lift", help="emit the covering framework")
    add_common(p)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("crosscheck", help="randomized numeric/combinatorial agreement harness")
    add_common(p, with_input=False)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--group", default="2", help="'2', '2x2', or 'trivial'")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--max-vertices", type=int, default=4)
    p.add_argument("--max-edges", type=int, default=10)
    p.set_defaults(func=cmd_crosscheck)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except ConsistencyError as exc:
        sys.stderr.write(f"consistency failure: {exc}\n")
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
