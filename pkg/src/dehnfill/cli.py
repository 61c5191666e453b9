"""Command line front end.

Exit status: 0 success, 1 violations found (check, replay), 2 usage or
input error, 3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import constraints as C
from .enumeration import (DEFAULT_NODE_CAP, CatalogError, SearchBudgetExceeded, enumerate_quintuples,
                          load_catalog, paper_form, replay_eliminations, search_pairs)
from .graph import GraphError, load_graph
from .homology import Presentation, PresentationError, diagonal, group_of, smith_normal_form

EXIT_OK, EXIT_VIOLATIONS, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(args, payload, text_lines):
    if args.format == "json":
        out = json.dumps(payload, indent=1, sort_keys=True) + "\n"
    else:
        out = "".join(line + "\n" for line in text_lines)
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)


def _existing(path: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise UsageError(f"no such file: {path}")
    return p


def _load_matrix(path: Path) -> list[list[int]]:
    text = path.read_text(encoding="utf-8")
    try:
        rows = json.loads(text)
    except json.JSONDecodeError:
        return [list(r) for r in Presentation.from_text(text).matrix()]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise UsageError(f"{path}: expected a JSON list of rows")
    return [[int(x) for x in r] for r in rows]


def cmd_snf(args) -> int:
    a = _load_matrix(_existing(args.input))
    d, u, v = smith_normal_form(a)
    diag = diagonal(d)
    _emit(args, {"U": u, "D": d, "V": v, "diagonal": diag},
          ["diagonal: " + " ".join(map(str, diag))] + ["U = " + json.dumps(u), "V = " + json.dumps(v)])
    return EXIT_OK


def cmd_group(args) -> int:
    pres = Presentation.load(_existing(args.input))
    g = group_of(pres)
    _emit(args, {"group": str(g), "free_rank": g.free_rank, "torsion": list(g.torsion), "finite": g.is_finite},
          [str(g)])
    return EXIT_OK


def cmd_faces(args) -> int:
    g = load_graph(_existing(args.input))
    faces = []
    for f in g.faces:
        try:
            color = str(g.face_color(f).value)
        except Exception:
            color = None
        faces.append({"degree": f.degree, "edges": [g.edges[e].name or str(e) for e in f.edge_ids],
                      "color": color})
    chi = g.num_vertices - g.num_edges + len(faces)
    lines = [f"V={g.num_vertices} E={g.num_edges} F={len(faces)} chi={chi}"]
    lines += [f"{f['degree']}-gon {','.join(f['edges'])}" + (f" {f['color']}" if f["color"] else "")
              for f in faces]
    _emit(args, {"vertices": g.num_vertices, "edges": g.num_edges, "euler": chi, "faces": faces}, lines)
    return EXIT_OK


def cmd_check(args) -> int:
    g = load_graph(_existing(args.input))
    found = C.check_parallelism_bounds(g, args.context)
    if args.census:
        census = C.face_census(g)
        found += C.face_census_feasible(census) + C.bigon_color_constraints(census, C.class_adjacency(g))
    if args.labels:
        found += C.check_label_signs(g)
    real = C.only_violations(found)
    _emit(args, {"violations": [v.to_json() for v in found]},
          [f"{v.kind} {v.lemma_tag} {v.subject}: {v.detail}" for v in found] or ["no violations"])
    return EXIT_VIOLATIONS if real else EXIT_OK


def cmd_enumerate(args) -> int:
    rules = [r for spec in args.rules for r in spec.split(",") if r]
    tuples = enumerate_quintuples(args.t, rules, args.alpha0)
    _emit(args, {"t": args.t, "rules": rules, "quintuples": [list(q) for q in tuples]},
          [" ".join(map(str, q)) + f"  (as G{paper_form(q)})" for q in tuples])
    return EXIT_OK


def cmd_search(args) -> int:
    gs = load_graph(_existing(args.gs))
    gt = load_graph(_existing(args.gt))
    d = tuple(args.d or (1, 2))
    rules = tuple(r for spec in args.rules for r in spec.split(",") if r) if args.rules else ("parity", "double_parallel")
    res = search_pairs(gs, gt, d, node_cap=args.node_cap, rules=rules)
    payload = {"d": list(d), "correspondences_found": len(res), "nodes_explored": res.nodes,
               "correspondences": [c.to_dict() for c in res.correspondences] if args.details else None}
    _emit(args, payload, [f"{len(res)} correspondences", f"{res.nodes} nodes explored"])
    return EXIT_OK


def cmd_replay(args) -> int:
    reports = replay_eliminations(load_catalog(_existing(args.catalog)), args.node_cap, args.workers)
    bad = [r for r in reports if not r.matches]
    diffs = []
    if args.golden:
        golden_dir = Path(args.golden)
        for r in reports:
            path = golden_dir / (_slug(r.case_id) + ".json")
            if args.update_golden:
                golden_dir.mkdir(parents=True, exist_ok=True)
                path.write_text(json.dumps(r.to_dict(), indent=1, sort_keys=True) + "\n", encoding="utf-8")
                continue
            if not path.exists():
                diffs.append(f"{r.case_id}: no golden file {path.name}")
                continue
            want = json.loads(path.read_text(encoding="utf-8"))
            for key, value in sorted(r.to_dict().items()):
                if want.get(key) != value:
                    diffs.append(f"{r.case_id}: {key} is {value!r}, golden has {want.get(key)!r}")
    lines = []
    for r in reports:
        mark = "ok " if r.matches else "BAD"
        extra = f" -> {r.group}" if r.group else ""
        lines.append(f"{mark} {r.case_id}: {r.verdict} [{r.lemma_tag}]{extra}")
    lines += diffs
    lines.append(f"{len(reports)} cases, {len(bad)} unexpected, {len(diffs)} golden differences")
    _emit(args, {"reports": [r.to_dict() for r in reports], "unexpected": [r.case_id for r in bad],
                 "golden_differences": diffs}, lines)
    return EXIT_VIOLATIONS if bad or diffs else EXIT_OK


def _slug(case_id: str) -> str:
    keep = "".join(ch if ch.isalnum() or ch in "._-" else "_" for ch in case_id)
    return keep.strip("_")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dehnfill", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    budget = argparse.ArgumentParser(add_help=False)
    budget.add_argument("--node-cap", type=int, default=None,
                        help=f"search node budget (default $DGK_NODE_CAP or {DEFAULT_NODE_CAP})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("snf", parents=[common], help="Smith normal form of a matrix or presentation file")
    p.add_argument("input")
    p.set_defaults(func=cmd_snf)

    p = sub.add_parser("group", parents=[common], help="abelian group of a presentation file")
    p.add_argument("input")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("faces", parents=[common], help="faces of a graph file")
    p.add_argument("input")
    p.set_defaults(func=cmd_faces)

    p = sub.add_parser("check", parents=[common], help="run the single-graph checkers")
    p.add_argument("input")
    p.add_argument("--context", choices=sorted(C.CONTEXTS), default="GS")
    p.add_argument("--census", action="store_true", help="face census and bigon color rules")
    p.add_argument("--labels", action="store_true", help="label and sign rules")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("enumerate", parents=[common], help="canonical quintuples")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--rules", action="append", default=[], help="comma separated: epsilon, caps")
    p.add_argument("--alpha0", type=int, default=None)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("search", parents=[common, budget], help="edge correspondences of a graph pair")
    p.add_argument("gs")
    p.add_argument("gt")
    p.add_argument("--d", type=int, action="append", choices=(1, 2))
    p.add_argument("--rules", action="append", default=None, help="comma separated: parity, double_parallel")
    p.add_argument("--details", action="store_true", help="include every correspondence (json)")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("replay", parents=[common, budget], help="replay a case catalog")
    p.add_argument("--catalog", required=True)
    p.add_argument("--golden", help="directory of golden reports to compare against")
    p.add_argument("--update-golden", action="store_true", help="rewrite the golden reports")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "node_cap", None) is not None and args.node_cap < 1:
        print("error: --node-cap must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "workers", 1) < 1:
        print("error: --workers must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except SearchBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, CatalogError, GraphError, PresentationError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
