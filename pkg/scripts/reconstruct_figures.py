"""Rebuild the checked-in figure graphs under data/ from the combinatorics alone.

Each figure pair is found by exhaustive search: one side is built from its
quintuple or Klein family (or enumerated among one-vertex torus graphs),
the other side is forced by the boundary point model, and edges are named
so that the faces quoted in the text get the quoted edge names.  The
homology of the filled complex built from the quoted faces must equal the
stated group, otherwise the script stops.

    python scripts/reconstruct_figures.py [data_dir]
"""

from __future__ import annotations

import json
import string
import sys
from pathlib import Path

from dehnfill.enumeration import (correspondence_from_names, derive_partners, filled_homology,
                                  filled_presentation, search_pairs)
from dehnfill.graph import (Color, Edge, GraphError, RotationGraph, Surface, build_klein_graph,
                            build_quintuple_graph, dump_graph, isomorphic)
from dehnfill.homology import group_of

NAMES = string.ascii_lowercase


def one_vertex_torus_graphs(partner_count: int) -> list[RotationGraph]:
    """Monogon-free one-vertex torus graphs of degree 5*partner_count, up to homeomorphism."""
    deg = 5 * partner_count

    def matchings(items):
        if not items:
            yield []
            return
        first = items[0]
        for k in range(1, len(items)):
            for rest in matchings(items[1:k] + items[k + 1:]):
                yield [(first, items[k])] + rest

    out = []
    for m in matchings(list(range(deg))):
        edges = tuple(Edge(((0, a), (0, b))) for a, b in m)
        try:
            g = RotationGraph(Surface.TORUS, (1,), edges, partner_count, 5)
        except GraphError:
            continue
        if any(f.degree == 1 for f in g.faces):
            continue
        if not any(isomorphic(g, h) for h in out):
            out.append(g)
    return out


def name_edges(c, specs):
    """Yield (naming, faces) for gt edges making each (degree, names, color) spec a face.

    Names not mentioned in any spec go to the remaining edges in index order.
    """
    gt = c.gt
    faces = gt.faces
    colors = {}
    for i, f in enumerate(faces):
        try:
            colors[i] = gt.face_color(f)
        except Exception:
            colors[i] = None
    options = []
    for deg, names, color in specs:
        options.append([i for i, f in enumerate(faces)
                        if f.degree == deg and len(set(f.edge_ids)) == len(names)
                        and (color is None or colors[i] == color)])

    def assign(k, chosen):
        if k == len(specs):
            yield list(chosen)
            return
        for i in options[k]:
            if i not in chosen:
                yield from assign(k + 1, chosen + [i])

    mentioned = sorted({n for _, names, _ in specs for n in names})
    for chosen in assign(0, []):
        cand = {}
        for n in mentioned:
            inside = [set(faces[chosen[k]].edge_ids) for k, spec in enumerate(specs) if n in spec[1]]
            outside = [set(faces[chosen[k]].edge_ids) for k, spec in enumerate(specs) if n not in spec[1]]
            pool = set.intersection(*inside) - set().union(*outside) if inside else set()
            cand[n] = sorted(pool)
        for picks in _injective(mentioned, cand):
            naming = dict(zip(picks, mentioned))
            rest = [n for n in NAMES[:gt.num_edges] if n not in mentioned]
            free = [e for e in range(gt.num_edges) if e not in naming]
            naming.update(zip(free, rest))
            yield naming, chosen


def _injective(keys, cand, used=()):
    if not keys:
        yield ()
        return
    for e in cand[keys[0]]:
        if e not in used:
            for tail in _injective(keys[1:], cand, used + (e,)):
                yield (e,) + tail


def renamed(g: RotationGraph, names: dict[int, str], figure_ref: str) -> RotationGraph:
    from dataclasses import replace
    edges = tuple(replace(e, name=names[k]) for k, e in enumerate(g.edges))
    return replace(g, edges=edges, figure_ref=figure_ref)


def reconstruct(tag, figure_ref, gs, gt, d, specs, expected, out, homology_faces=None, colors=False,
                gs_name="gs"):
    res = search_pairs(gs, gt, d, colors=colors)
    hits, groups = [], {}
    for c in res.correspondences:
        for naming, chosen in name_edges(c, specs):
            faces = chosen if homology_faces is None else [chosen[k] for k in homology_faces]
            group = str(filled_homology(c, faces))
            groups[group] = groups.get(group, 0) + 1
            if group == expected and not hits:
                hits.append((c, naming, faces))
    if not hits:
        raise SystemExit(f"{tag}: quoted faces give {groups}, expected {expected}")
    c, naming, faces = hits[0]
    gs_named = renamed(c.gs, {e: naming[f] for e, f in enumerate(c.edge_map)}, figure_ref)
    gt_named = renamed(c.gt, naming, figure_ref)
    back = correspondence_from_names(gs_named, gt_named, d)
    pres = filled_presentation(back, faces)
    assert str(group_of(pres)) == expected
    dump_graph(gs_named, out / "graphs" / f"{tag}_{gs_name}.json")
    dump_graph(gt_named, out / "graphs" / f"{tag}_gt.json")
    face_names = [sorted({naming[e] for e in c.gt.faces[i].edge_ids}) for i in faces]
    pair = {"figure_ref": figure_ref, "gs": f"../graphs/{tag}_{gs_name}.json",
            "gt": f"../graphs/{tag}_gt.json", "d": d, "homology_faces": face_names,
            "group": expected, "correspondences_found": len(res),
            "groups_over_namings": dict(sorted(groups.items()))}
    (out / "pairs" / f"{tag}.json").write_text(json.dumps(pair, indent=1) + "\n", encoding="utf-8")
    (out / "presentations" / f"{tag}_cells.txt").write_text(
        f"# filled complex of the {figure_ref} pair; generators are edges off a spanning tree\n"
        + pres.to_text(), encoding="utf-8")
    print(f"{tag}: {len(res)} correspondences, groups over namings {groups}")


def main(out: Path) -> None:
    for sub in ("graphs", "pairs", "presentations"):
        (out / sub).mkdir(parents=True, exist_ok=True)
    B, W = Color.BLACK, Color.WHITE

    torus_t1 = [g for g in one_vertex_torus_graphs(2)
                if sorted(f.degree for f in g.faces) == [2, 2, 3, 3]]
    t1_specs = [(2, "ad", B), (3, "bce", B), (2, "db", W), (3, "ace", W)]
    for tag, ref, d, expected in (("fig04", "Figure 4", 1, "Z/5"), ("fig05", "Figure 5", 2, "Z/35")):
        for gt in torus_t1:
            partners = derive_partners(gt, 2, d, "torus")
            if partners:
                gs = partners[0].partner
                reconstruct(tag, ref, gs, gt, d, t1_specs, expected, out, colors=True)
                break

    gs = build_quintuple_graph((0, 3, 3, 3, 1), 2, signs=(1, -1))
    gt = build_quintuple_graph((0, 3, 3, 3, 1), 2, signs=(1, 1))
    reconstruct("fig08", "Figure 8", gs, gt, 2,
                [(2, "cf", B), (4, "ghij", B), (2, "fi", W), (4, "abcj", W)], "Z/2 + Z/30", out, colors=True)

    for gt in one_vertex_torus_graphs(2):
        partners = derive_partners(gt, 2, 1, "klein")
        if partners and sorted(f.degree for f in gt.faces) == [2, 2, 3, 3]:
            reconstruct("fig12", "Figure 12", partners[0].partner, gt, 1,
                        [(2, "ae", None), (3, "abd", None), (3, "bce", None)],
                        "Z/20", out, gs_name="gp")
            break

    gt = build_quintuple_graph((1, 1, 1, 1, 0), 1, signs=(1, -1))
    reconstruct("fig14", "Figure 14", build_klein_graph("H", 3, 1, 1, 2), gt, 1,
                [(3, "acd", None), (3, "bcd", None)], "Z/4", out, gs_name="gp")

    gp = build_klein_graph("H", 2, 4, 4, 4)
    gt = derive_partners(gp, 4, 1, "torus")[0].partner
    reconstruct("fig28", "Figure 28", gp, gt, 1, [(2, "ef", None), (6, "acfgj", None)],
                "Z/4 + Z/4", out, gs_name="gp")

    gt = build_quintuple_graph((2, 2, 1, 2, 1), 2, signs=(1, -1))
    gp = derive_partners(gt, 2, 2, "klein")[0].partner
    reconstruct("fig16", "Figure 16", gp, gt, 2, [(2, "ab", None), (2, "de", None), (3, "aci", None)],
                "Z/16", out, gs_name="gp")

    for name, q, signs in (("gs_4420", (0, 4, 4, 2, 0), (1, -1)), ("gt_03322", (0, 3, 3, 2, 2), (1, 1)),
                           ("gt_03232", (0, 3, 2, 3, 2), (1, 1)), ("gs_4222", (0, 4, 2, 2, 2), (1, -1)),
                           ("gt_03331", (0, 3, 3, 3, 1), (1, 1))):
        dump_graph(build_quintuple_graph(q, 2, signs=signs), out / "graphs" / f"{name}.json")
    for t in (4, 6):
        for form in ("H", "HPrime"):
            dump_graph(build_klein_graph(form, t // 2 + 1, t, t - 1, t),
                       out / "graphs" / f"klein_{form}_{t // 2 + 1}_{t}_{t - 1}.json")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "data")
