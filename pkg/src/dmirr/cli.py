"""Command-line entry point.

Single results are printed as one JSON object with sorted keys and 1-based,
sorted edge lists; ``bench`` prints CSV.  Exit codes: 0 success, 1
infeasible input or a NO answer, 2 usage or input error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any

from . import instances
from .approx import NotDMIrreducible, NotStronglyConnected, SolveReport, dmiss_2approx, dmiss_3approx, scss_2approx
from .connectivity import is_dm_irreducible, scc
from .ears import long_ear_maximal_decomposition, odd_proper_ear_decomposition
from .fpt import fpt_unweighted_dmiss, node_budget_from_env
from .graphs import BipartiteGraph, Digraph, GraphError
from .io import GraphFormatError, read_graph, serialize
from .oracle import OracleTooLarge, exact_min_dmiss, exact_min_scss

OK, NO, USAGE, LIMIT = 0, 1, 2, 3
BENCH_COLUMNS = ["instance", "n", "m", "algorithm", "weight", "opt_or_bound", "ratio", "runtime_ms"]


class UsageError(Exception):
    pass


class Infeasible(Exception):
    def __init__(self, payload: dict[str, Any]):
        self.payload = payload
        super().__init__(payload.get("reason", "infeasible"))


def _emit(obj: dict[str, Any], out) -> None:
    out.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")


def _pairs(graph, ids) -> list[list[int]]:
    items = graph.edges if isinstance(graph, BipartiteGraph) else graph.arcs
    return sorted([items[i][0] + 1, items[i][1] + 1] for i in ids)


def _labelled_arcs(G: BipartiteGraph, arcs) -> list[list[str]]:
    return sorted([G.vertex_label(a), G.vertex_label(b)] for a, b in arcs)


def _load(path: str, kind: type | None = None):
    try:
        graph = read_graph(path)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except (GraphFormatError, GraphError) as exc:
        raise UsageError(f"{path}: {exc}") from None
    if kind is not None and not isinstance(graph, kind):
        want = "bipartite ('bip')" if kind is BipartiteGraph else "directed ('dig')"
        raise UsageError(f"{path}: expected a {want} graph")
    return graph


def _dm_failure(cert) -> dict[str, Any]:
    out: dict[str, Any] = {"dm_irreducible": False, "reason": cert.reason}
    if cert.hall_violator is not None:
        left, right = cert.hall_violator
        out["hall_violator"] = {"left": sorted(u + 1 for u in left), "right": sorted(v + 1 for v in right)}
    if cert.components is not None:
        out["components"] = len(cert.components)
    return out


def _require_irreducible(G: BipartiteGraph) -> None:
    cert = is_dm_irreducible(G)
    if not cert:
        raise Infeasible(_dm_failure(cert))


def _report(rep: SolveReport, graph, timing: bool) -> dict[str, Any]:
    out: dict[str, Any] = {"algorithm": rep.algorithm, "weight": rep.weight, "edges": _pairs(graph, rep.edges)}
    certs: dict[str, Any] = {}
    for key, val in rep.certificates.items():
        if key == "root":
            certs[key] = val + 1
        elif key in ("tree", "matching"):
            certs[key] = _pairs(graph, val)
        elif key.endswith("arborescence"):
            if isinstance(graph, BipartiteGraph):
                certs[key] = _labelled_arcs(graph, val)
            else:
                certs[key] = sorted([a + 1, b + 1] for a, b in val)
        else:
            certs[key] = val
    out["certificates"] = certs
    if timing:
        out["runtime_ms"] = round(rep.runtime_ms, 3)
    return out


def cmd_check(args) -> tuple[int, dict[str, Any]]:
    graph = _load(args.file)
    if isinstance(graph, Digraph):
        comps = scc(graph)
        strong = len(comps) <= 1
        return (OK if strong else NO), {"strongly_connected": strong, "components": len(comps)}
    cert = is_dm_irreducible(graph)
    if cert:
        return OK, {"dm_irreducible": True, "matching": _pairs(graph, cert.matching.ids)}
    return NO, _dm_failure(cert)


def cmd_ears(args) -> tuple[int, dict[str, Any]]:
    G = _load(args.file, BipartiteGraph)
    _require_irreducible(G)
    dec = long_ear_maximal_decomposition(G) if args.long else odd_proper_ear_decomposition(G)
    ears = [
        {"kind": ear.kind, "length": ear.length, "vertices": [G.vertex_label(x) for x in ear.vertices],
         "edges": _pairs(G, ear.edges)}
        for ear in dec.ears
    ]
    out: dict[str, Any] = {"ears": ears, "count": len(ears)}
    if dec.s is not None:
        out["long_ears"] = dec.s
        out["nontrivial_ears"] = dec.r
    return OK, out


def cmd_approx2(args) -> tuple[int, dict[str, Any]]:
    G = _load(args.file, BipartiteGraph)
    if not 1 <= args.root <= G.n:
        raise UsageError(f"root must lie in 1..{G.n}")
    _require_irreducible(G)
    return OK, _report(dmiss_2approx(G, args.root - 1), G, args.timing)


def cmd_approx3(args) -> tuple[int, dict[str, Any]]:
    G = _load(args.file, BipartiteGraph)
    _require_irreducible(G)
    return OK, _report(dmiss_3approx(G), G, args.timing)


def cmd_scss2(args) -> tuple[int, dict[str, Any]]:
    D = _load(args.file, Digraph)
    if not 1 <= args.root <= max(D.n, 1):
        raise UsageError(f"root must lie in 1..{D.n}")
    try:
        rep = scss_2approx(D, args.root - 1)
    except NotStronglyConnected as exc:
        raise Infeasible({"strongly_connected": False, "components": len(exc.components)}) from None
    return OK, _report(rep, D, args.timing)


def cmd_exact(args) -> tuple[int, dict[str, Any]]:
    graph = _load(args.file)
    if isinstance(graph, BipartiteGraph):
        _require_irreducible(graph)
        sol = exact_min_dmiss(graph, force=args.force)
    else:
        comps = scc(graph)
        if len(comps) > 1:
            raise Infeasible({"strongly_connected": False, "components": len(comps)})
        sol = exact_min_scss(graph, force=args.force)
    return OK, {"algorithm": "exact", "weight": sol.weight, "edges": _pairs(graph, sol.ids)}


def cmd_fpt(args) -> tuple[int, dict[str, Any]]:
    G = _load(args.file, BipartiteGraph)
    if args.k > 3 and not args.force:
        raise UsageError("k > 3 needs --force (the search grows very quickly)")
    if G.n < 2 or not 0 <= args.k <= G.n - 2:
        raise UsageError(f"k must lie in 0..{G.n - 2}")
    _require_irreducible(G)
    budget = args.node_budget if args.node_budget is not None else node_budget_from_env()
    res = fpt_unweighted_dmiss(G, args.k, node_budget=budget)
    out: dict[str, Any] = {
        "answer": res.answer,
        "k": args.k,
        "target": 3 * G.n - 2 - args.k,
        "kernel": dict(res.kernel_stats),
        "witness": None if res.witness is None else _pairs(G, res.witness.ids),
    }
    code = {"yes": OK, "no": NO}.get(res.answer, LIMIT)
    return code, out


def _generate(args) -> tuple[Any, list[str]]:
    kind = args.kind
    if kind == "fig1":
        ell = _need(args, "ell")
        G = instances.gen_fig1(ell)
        return G, [f"tight family ell={ell}", f"bad root u{instances.fig1_root(ell) + 1}"]
    if kind == "random":
        n, extra, wmax, seed = (_need(args, k) for k in ("n", "extra", "wmax", "seed"))
        if args.ears:
            G = instances.gen_random_ears(n, extra, wmax, seed, hub=args.hub)
        else:
            G = instances.gen_random_dmi(n, extra, wmax, seed)
        return G, [f"random n={n} extra={extra} wmax={wmax} seed={seed}"]
    if kind == "random-dig":
        n, extra, wmax, seed = (_need(args, k) for k in ("n", "extra", "wmax", "seed"))
        return instances.gen_random_strong(n, extra, wmax, seed), [f"random digraph n={n} seed={seed}"]
    if args.file is None:
        raise UsageError(f"gen {kind} needs an input file")
    if kind == "reduce-matching":
        G = _load(args.file, BipartiteGraph)
        H, root = instances.reduce_matching_to_sbstr(G)
        return H, [f"root u{root + 1}", f"offset {G.n * instances.reduction_offset(G)}"]
    if kind == "reduce-arb":
        D = _load(args.file, Digraph)
        r = _need(args, "root") - 1
        try:
            H, root = instances.reduce_arborescence_to_sbstr(D, r)
        except GraphError as exc:
            raise Infeasible({"reason": str(exc)}) from None
        B = 1 + sum(w for _, _, w in D.arcs)
        return H, [f"root u{root + 1}", f"offset {(D.n - 1) * B}"]
    D = _load(args.file, Digraph)
    try:
        return instances.reduce_scss_to_dmiss(D), ["split-vertex image"]
    except GraphError as exc:
        raise Infeasible({"reason": str(exc)}) from None


def _need(args, name: str) -> int:
    val = getattr(args, name)
    if val is None:
        raise UsageError(f"gen {args.kind} needs --{name}")
    return val


def cmd_gen(args, out) -> int:
    try:
        graph, comments = _generate(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out.write(serialize(graph, comments))
    return OK


def _read_solution(path: str) -> list[tuple[int, int]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    stripped = text.strip()
    if stripped.startswith("{"):
        data = json.loads(stripped)
        return [(int(a), int(b)) for a, b in data.get("edges", [])]
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) not in (2, 3):
            raise UsageError(f"{path}: malformed solution line {lineno}")
        try:
            pairs.append((int(toks[0]), int(toks[1])))
        except ValueError:
            raise UsageError(f"{path}: malformed solution line {lineno}") from None
    return pairs


def verify_solution(graph, pairs) -> dict[str, Any]:
    """Check a 1-based edge list against ``graph`` without trusting any solver."""
    index = {(a + 1, b + 1): i for i, (a, b, _) in enumerate(graph.edges if isinstance(graph, BipartiteGraph) else graph.arcs)}
    foreign = sorted({p for p in pairs if p not in index})
    if foreign:
        raise UsageError(f"solution uses edges not in the instance: {[list(p) for p in foreign]}")
    ids = sorted({index[p] for p in pairs})
    out: dict[str, Any] = {"edges": len(ids)}
    if isinstance(graph, BipartiteGraph):
        sub, _ = graph.subgraph(ids)
        covered = {u for u, _, _ in sub.edges} | {graph.n + v for _, v, _ in sub.edges}
        out["weight"] = graph.weight(ids)
        out["spanning"] = len(covered) == 2 * graph.n
        cert = is_dm_irreducible(sub)
        out["valid"] = bool(cert) and out["spanning"]
        out["reason"] = cert.reason
    else:
        sub, _ = graph.subgraph(ids)
        touched = {a for a, _, _ in sub.arcs} | {b for _, b, _ in sub.arcs}
        out["weight"] = graph.weight(ids)
        out["spanning"] = graph.n <= 1 or len(touched) == graph.n
        strong = len(scc(sub)) <= 1
        out["valid"] = strong and out["spanning"]
        out["reason"] = "strongly connected" if strong else "not strongly connected"
    return out


def cmd_verify(args) -> tuple[int, dict[str, Any]]:
    graph = _load(args.file)
    report = verify_solution(graph, _read_solution(args.solution))
    return (OK if report["valid"] else NO), report


def _bench_instance(entry: dict[str, Any], base: Path) -> tuple[str, Any, dict[str, Any]]:
    name = entry.get("name")
    opts = {"root": entry.get("root"), "bound": entry.get("bound", "auto")}
    if "file" in entry:
        path = base / entry["file"]
        if not path.exists():
            raise UsageError(f"missing instance file: {path}")
        graph = _load(str(path))
        return name or Path(entry["file"]).stem, graph, opts
    gen = entry.get("gen")
    if gen == "fig1":
        ell = int(entry["ell"])
        if opts["root"] is None:
            opts["root"] = instances.fig1_root(ell) + 1
        if opts["bound"] == "auto":
            opts["bound"] = "hamiltonian"
        return name or f"fig1-l{ell}", instances.gen_fig1(ell), opts
    if gen in ("random", "random-ears"):
        n, extra, wmax, seed = (int(entry[k]) for k in ("n", "extra", "wmax", "seed"))
        if gen == "random":
            G = instances.gen_random_dmi(n, extra, wmax, seed)
        else:
            G = instances.gen_random_ears(n, extra, wmax, seed, hub=entry.get("hub"))
        return name or f"{gen}-n{n}-s{seed}", G, opts
    if gen == "random-dig":
        n, extra, wmax, seed = (int(entry[k]) for k in ("n", "extra", "wmax", "seed"))
        return name or f"dig-n{n}-s{seed}", instances.gen_random_strong(n, extra, wmax, seed), opts
    raise UsageError(f"bench instance needs 'file' or a known 'gen': {entry}")


def _bench_row(job: tuple[str, Any, dict[str, Any], str]) -> list[str]:
    name, graph, opts, algo = job
    bip = isinstance(graph, BipartiteGraph)
    if algo == "approx2" and bip:
        rep = dmiss_2approx(graph, (opts["root"] or 1) - 1)
    elif algo == "approx3" and bip:
        rep = dmiss_3approx(graph)
    elif algo == "scss2" and not bip:
        rep = scss_2approx(graph, (opts["root"] or 1) - 1)
    elif algo == "exact":
        start = time.perf_counter()
        sol = exact_min_dmiss(graph) if bip else exact_min_scss(graph)
        rep = SolveReport("exact", sol, {}, (time.perf_counter() - start) * 1e3)
    else:
        raise UsageError(f"algorithm {algo} does not apply to instance {name}")
    bound = _bench_bound(graph, opts["bound"])
    ratio = "" if bound in (None, 0) else f"{rep.weight / bound:.6f}"
    return [name, str(graph.n), str(graph.m), algo, str(rep.weight),
            "" if bound is None else str(bound), ratio, f"{rep.runtime_ms:.3f}"]


def _bench_bound(graph, mode: str) -> int | None:
    if mode == "hamiltonian":
        return graph.weight(instances.fig1_hamiltonian(graph))
    if mode in ("exact", "auto"):
        if mode == "auto" and graph.m > 24:
            return None
        sol = exact_min_dmiss(graph) if isinstance(graph, BipartiteGraph) else exact_min_scss(graph)
        return sol.weight
    return None


def run_bench(spec_path: str, out) -> int:
    path = Path(spec_path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise UsageError(f"no such file: {spec_path}") from None
    spec = json.loads(text) if text.strip() else {}
    jobs = []
    for entry in spec.get("instances", []):
        name, graph, opts = _bench_instance(entry, path.parent)
        for algo in entry.get("algorithms", spec.get("algorithms", [])):
            jobs.append((name, graph, opts, algo))
    workers = int(spec.get("workers", 1))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_bench_row, jobs))
    else:
        rows = [_bench_row(job) for job in jobs]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    writer.writerows(rows)
    out.write(buf.getvalue())
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dmirr", description="DM-irreducible and strongly connected spanning subgraphs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="test DM-irreducibility (or strong connectivity of a digraph)")
    s.add_argument("file")

    s = sub.add_parser("ears", help="odd proper ear decomposition")
    s.add_argument("file")
    s.add_argument("--long", action="store_true", help="put a maximal set of long ears first")
    s.add_argument("--lines", action="store_true", help="one text line per ear instead of JSON")

    s = sub.add_parser("approx2", help="2-approximation through a strongly balanced spanning tree")
    s.add_argument("file")
    s.add_argument("--root", type=int, default=1, help="left root vertex, 1-based")
    s.add_argument("--timing", action="store_true")

    s = sub.add_parser("approx3", help="3-approximation through a matching and two arborescences")
    s.add_argument("file")
    s.add_argument("--timing", action="store_true")

    s = sub.add_parser("scss2", help="2-approximation for strongly connected spanning subgraphs")
    s.add_argument("file")
    s.add_argument("--root", type=int, default=1)
    s.add_argument("--timing", action="store_true")

    s = sub.add_parser("exact", help="exact optimum by branch and bound (small instances)")
    s.add_argument("file")
    s.add_argument("--force", action="store_true", help="lift the edge-count cap")

    s = sub.add_parser("fpt", help="decide the unweighted problem with parameter k")
    s.add_argument("file")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--force", action="store_true", help="allow k > 3")
    s.add_argument("--node-budget", type=int, default=None, help="search node cap (default: DMIRR_NODE_BUDGET or 10^7)")

    s = sub.add_parser("gen", help="write a generated or reduced instance to stdout")
    s.add_argument("kind", choices=["fig1", "random", "random-dig", "reduce-matching", "reduce-arb", "reduce-scss"])
    s.add_argument("file", nargs="?")
    s.add_argument("--ell", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--extra", type=int)
    s.add_argument("--wmax", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--ears", action="store_true", help="grow the graph from random odd ears")
    s.add_argument("--hub", type=int, default=None)
    s.add_argument("--root", type=int)

    s = sub.add_parser("bench", help="run a JSON benchmark spec and print CSV")
    s.add_argument("spec")

    s = sub.add_parser("verify", help="check a solution edge list against an instance")
    s.add_argument("file")
    s.add_argument("solution")
    return p


HANDLERS = {
    "check": cmd_check,
    "ears": cmd_ears,
    "approx2": cmd_approx2,
    "approx3": cmd_approx3,
    "scss2": cmd_scss2,
    "exact": cmd_exact,
    "fpt": cmd_fpt,
    "verify": cmd_verify,
}


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        if args.command == "gen":
            return cmd_gen(args, out)
        if args.command == "bench":
            return run_bench(args.spec, out)
        if args.command == "ears" and args.lines:
            _, payload = cmd_ears(args)
            for i, ear in enumerate(payload["ears"]):
                out.write(f"ear {i} kind={ear['kind']} len={ear['length']} verts={','.join(ear['vertices'])}\n")
            return OK
        code, payload = HANDLERS[args.command](args)
        _emit(payload, out)
        return code
    except UsageError as exc:
        err.write(f"dmirr: {exc}\n")
        return USAGE
    except Infeasible as exc:
        _emit(exc.payload, out)
        err.write(f"dmirr: {exc}\n")
        return NO
    except NotDMIrreducible as exc:
        _emit(_dm_failure(exc.certificate), out)
        return NO
    except OracleTooLarge as exc:
        err.write(f"dmirr: {exc}\n")
        return LIMIT
    except json.JSONDecodeError as exc:
        err.write(f"dmirr: malformed JSON: {exc}\n")
        return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
