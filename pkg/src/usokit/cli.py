"""Command-line front end: ``usokit check | build | transform | census | iso | verify-report``.

Exit codes: 0 when the checked property holds (or the command succeeded),
1 when it fails, 2 on input or validation errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import analysis, constructions, iso, lcp
from .cube import (
    Automorphism,
    OutMap,
    apply_automorphism,
    check_permutation,
    dims_of,
    dimset,
    mirror,
    permute_dims,
    reverse,
)
from .errors import NotGeneric, UsoError
from .formats import read_lcp, read_uso, write_lcp, write_uso
from .lgraph import has_property_l, lgraph

log = logging.getLogger("usokit")

HOLDS, FAILS, INPUT_ERROR = 0, 1, 2
CHECKS = ("uso", "property-l", "holt-klee", "locally-uniform", "pseudo")
BUILD_KINDS = (
    "pcube",
    "dcube",
    "kaleidoscope-product",
    "kaleidoscope-pmatrix",
    "combed",
    "uniform",
    "matching-reversal",
)


def parse_set(text: str) -> int:
    text = text.strip().strip("{}").strip()
    if text in ("", "-"):
        return 0
    return dimset(int(tok) for tok in text.split(","))


def parse_matching(text: str) -> list[tuple[int, int]]:
    edges = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok:
            v, _, i = tok.partition(":")
            edges.append((int(v), int(i)))
    return edges


def _abs(path) -> str:
    return str(Path(path).resolve())


def _property_l_dict(o: OutMap) -> dict:
    rep = has_property_l(o)
    out = {"holds": rep.holds}
    if not rep.holds:
        out["vertex"] = list(dims_of(rep.vertex))
        out["cycle"] = list(rep.cycle)
    return out


# --- check -------------------------------------------------------------------


def cmd_check(path, which: str) -> dict:
    o = read_uso(path)
    report = {"command": "check", "which": which, "inputs": {"path": _abs(path)}}
    witness: dict = {}
    if which == "uso":
        bad = analysis.uso_violation(o)
        holds = bad is None
        if holds:
            witness["sink"] = list(dims_of(analysis.global_sink(o)))
        else:
            witness["pair"] = [list(dims_of(bad[0])), list(dims_of(bad[1]))]
    elif which == "property-l":
        prop = _property_l_dict(o)
        holds = prop.pop("holds")
        witness.update(prop)
    elif which == "holt-klee":
        paths = analysis.holt_klee_paths(o)
        holds = len(paths) >= o.n
        witness["paths"] = [[list(dims_of(v)) for v in p] for p in paths]
    elif which == "locally-uniform":
        bad = analysis.locally_uniform_violation(o)
        holds = bad is None
        if bad:
            v, u, b = bad
            witness.update(vertex=list(dims_of(v)), edge_vertex=list(dims_of(u)), dimension=b + 1)
    elif which == "pseudo":
        holds = analysis.is_pseudo_uso(o)
        sinks = analysis.sinks_in_face(o, analysis.Face.whole(o.n)).sinks
        witness["sinks"] = [list(dims_of(s)) for s in sinks]
        witness["parity"] = analysis.pseudo_outdegree_parity(o).value
        if holds and o.n >= 3 and sinks:
            cyc = analysis.find_pseudo_cycle(o, sinks[0])
            witness["cycle"] = [list(dims_of(v)) for v in cyc.cycle]
            witness["base"] = list(dims_of(cyc.base))
    else:
        raise UsoError(f"unknown check {which!r}")
    report["verdict"] = "holds" if holds else "fails"
    report["witness"] = witness
    return report


# --- build -------------------------------------------------------------------


def cmd_build(kind: str, out_path, input_path=None, n=None, bits=None, matching=None, lcp_out=None) -> dict:
    report: dict = {"command": "build", "kind": kind, "inputs": {}, "output": _abs(out_path)}

    def need_input():
        if input_path is None:
            raise UsoError(f"build {kind} needs an input file")
        report["inputs"]["path"] = _abs(input_path)
        return input_path

    if kind in ("pcube", "dcube"):
        m, q = read_lcp(need_input())
        o = lcp.pcube_outmap(m, q) if kind == "pcube" else lcp.dcube_outmap(m, q)
    elif kind == "kaleidoscope-product":
        o = constructions.product_kaleidoscope(read_uso(need_input()))
    elif kind == "kaleidoscope-pmatrix":
        a, b = read_lcp(need_input())
        m, q, o = constructions.pcube_kaleidoscope(a, b)
        if lcp_out:
            write_lcp(lcp_out, m, q)
            report["lcp_output"] = _abs(lcp_out)
    elif kind == "combed":
        if n is None or bits is None:
            raise UsoError("build combed needs --n and --bits")
        report["inputs"].update(n=n, bits=bits)
        o = constructions.recursively_combed(constructions.CombedSpec.from_string(n, bits))
    elif kind == "uniform":
        if n is None:
            raise UsoError("build uniform needs --n")
        report["inputs"]["n"] = n
        o = constructions.uniform_uso(n)
    elif kind == "matching-reversal":
        if n is None or matching is None:
            raise UsoError("build matching-reversal needs --n and --matching")
        report["inputs"].update(n=n, matching=matching)
        o = constructions.matching_reversal(n, parse_matching(matching))
    else:
        raise UsoError(f"unknown build kind {kind!r}")
    write_uso(out_path, o)
    report["n"] = o.n
    report["is_uso"] = analysis.is_uso(o)
    report["property_l"] = _property_l_dict(o)
    report["verdict"] = "ok"
    return report


# --- transform ---------------------------------------------------------------


def _apply_transform(o: OutMap, op: str, args: list[str]) -> tuple[OutMap, dict]:
    extra: dict = {}
    if op == "reverse":
        return reverse(o, parse_set(args[0] if args else "")), extra
    if op == "mirror":
        return mirror(o, parse_set(args[0] if args else "")), extra
    if op == "permute":
        return permute_dims(o, check_permutation([int(x) for x in args[0].split(",")], o.n)), extra
    if op == "automorph":
        a = Automorphism(parse_set(args[0]), tuple(int(x) for x in args[1].split(",")))
        return apply_automorphism(o, a), extra
    if op == "find-l-copy":
        a = iso.exists_property_l_copy(o)
        extra["automorphism"] = None if a is None else a.to_dict()
        return (o if a is None else apply_automorphism(o, a)), extra
    raise UsoError(f"unknown transform {op!r}")


def cmd_transform(path, op: str, args: list[str], out_path) -> dict:
    o = read_uso(path)
    new, extra = _apply_transform(o, op, args)
    write_uso(out_path, new)
    before, after = _property_l_dict(o), _property_l_dict(new)
    return {
        "command": "transform",
        "op": op,
        "args": list(args),
        "inputs": {"path": _abs(path)},
        "output": _abs(out_path),
        "property_l_before": before,
        "property_l_after": after,
        "property_l_changed": before["holds"] != after["holds"],
        "witness": extra,
        "verdict": "ok" if op != "find-l-copy" or extra["automorphism"] else "fails",
    }


# --- census / iso ------------------------------------------------------------


def cmd_census(n: int, out_dir, heavy=False, resume=False, jobs=1) -> dict:
    if n >= 4 and not heavy:
        raise UsoError("the n=4 census is heavy; pass --heavy")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    state = out / "census-state.json"

    def progress(done, total):
        log.info("census n=%d: %d/%d shards", n, done, total)

    records = iso.census(n, jobs=jobs, state_path=state, resume=resume, progress=progress)
    files = []
    for k, rec in enumerate(records):
        name = f"class-{k:05d}.uso"
        write_uso(out / name, rec.canonical)
        files.append(name)
    (out / "classes.json").write_text(json.dumps([r.to_dict() for r in records]))
    return {
        "command": "census",
        "inputs": {"n": n},
        "output": _abs(out),
        "classes": len(records),
        "classes_without_property_l": sum(1 for r in records if not r.has_property_l_member),
        "total_usos": sum(r.class_size for r in records),
        "verdict": "ok",
    }


def cmd_iso(path1, path2) -> dict:
    o1, o2 = read_uso(path1), read_uso(path2)
    a = iso.are_isomorphic(o1, o2)
    return {
        "command": "iso",
        "inputs": {"path1": _abs(path1), "path2": _abs(path2)},
        "verdict": "isomorphic" if a else "not-isomorphic",
        "witness": {"automorphism": a.to_dict()} if a else {},
    }


# --- verification ------------------------------------------------------------


def _set(lst) -> int:
    return dimset(lst)


def _verify_check(report: dict) -> bool:
    o = read_uso(report["inputs"]["path"])
    which, w, holds = report["which"], report["witness"], report["verdict"] == "holds"
    if which == "uso":
        if holds:
            return analysis.is_uso(o) and analysis.global_sink(o) == _set(w["sink"])
        u, v = _set(w["pair"][0]), _set(w["pair"][1])
        return u != v and not (o[u] ^ o[v]) & (u ^ v)
    if which == "property-l":
        if holds:
            return has_property_l(o).holds
        g = lgraph(o, _set(w["vertex"]))
        cyc = w["cycle"]
        return len(cyc) >= 2 and all((cyc[k], cyc[(k + 1) % len(cyc)]) in g.arcs for k in range(len(cyc)))
    if which == "holt-klee":
        paths = [[_set(v) for v in p] for p in w["paths"]]
        src, snk = analysis.global_source(o), analysis.global_sink(o)
        inner = [v for p in paths for v in p[1:-1]]
        ok = len(inner) == len(set(inner)) and all(p[0] == src and p[-1] == snk for p in paths)
        ok = ok and all(o[a] & (a ^ b) and (a ^ b).bit_count() == 1 for p in paths for a, b in zip(p, p[1:]))
        return ok and (len(paths) >= o.n) == holds
    if which == "locally-uniform":
        if holds:
            return analysis.check_locally_uniform(o)
        return analysis.locally_uniform_violation(o) is not None and analysis.locally_uniform_violation(o)[0] == _set(w["vertex"])
    if which == "pseudo":
        if analysis.is_pseudo_uso(o) != holds:
            return False
        if "cycle" in w:
            wit = analysis.PseudoCycleWitness(_set(w["base"]), tuple(_set(v) for v in w["cycle"]))
            return analysis.validate_pseudo_cycle(o, wit)
        return True
    return False


def _verify_build(report: dict) -> bool:
    o = read_uso(report["output"])
    if analysis.is_uso(o) != report["is_uso"] or has_property_l(o).holds != report["property_l"]["holds"]:
        return False
    inputs = report["inputs"]
    kind = report["kind"]
    if kind in ("pcube", "dcube"):
        m, q = read_lcp(inputs["path"])
        return lcp.pcube_outmap(m, q) == o
    if kind == "kaleidoscope-product":
        return constructions.product_kaleidoscope(read_uso(inputs["path"])) == o
    if kind == "kaleidoscope-pmatrix":
        a, b = read_lcp(inputs["path"])
        return constructions.is_kaleidoscope(o, lcp.pcube_outmap(a, b))
    return True


def _verify_transform(report: dict) -> bool:
    o = read_uso(report["inputs"]["path"])
    new = read_uso(report["output"])
    if report["op"] == "find-l-copy":
        a = report["witness"].get("automorphism")
        if a is None:
            return iso.exists_property_l_copy(o) is None and new == o
        return apply_automorphism(o, Automorphism.from_dict(a)) == new and has_property_l(new).holds
    return _apply_transform(o, report["op"], report["args"])[0] == new


def _verify_census(report: dict) -> bool:
    out = Path(report["output"])
    records = [iso.IsoClassRecord.from_dict(d) for d in json.loads((out / "classes.json").read_text())]
    if len(records) != report["classes"]:
        return False
    for k, rec in enumerate(records):
        if read_uso(out / f"class-{k:05d}.uso") != rec.canonical or not iso.verify_record(rec):
            return False
    return sum(1 for r in records if not r.has_property_l_member) == report["classes_without_property_l"]


def _verify_iso(report: dict) -> bool:
    o1, o2 = read_uso(report["inputs"]["path1"]), read_uso(report["inputs"]["path2"])
    if report["verdict"] == "isomorphic":
        a = Automorphism.from_dict(report["witness"]["automorphism"])
        return apply_automorphism(o1, a) == o2
    return iso.are_isomorphic(o1, o2) is None


def verify_report(report: dict) -> bool:
    """Replay a report's witnesses against its input files."""
    handlers = {
        "check": _verify_check,
        "build": _verify_build,
        "transform": _verify_transform,
        "census": _verify_census,
        "iso": _verify_iso,
    }
    handler = handlers.get(report.get("command"))
    if handler is None:
        raise UsoError(f"cannot verify report of command {report.get('command')!r}")
    return handler(report)


# --- entry point -------------------------------------------------------------


def _exit_code(report: dict) -> int:
    return FAILS if report["verdict"] in ("fails", "not-isomorphic", "invalid") else HOLDS


def _emit(report: dict, fmt: str, report_path) -> None:
    if report_path:
        Path(report_path).write_text(json.dumps(report, indent=2) + "\n")
    if fmt == "json":
        print(json.dumps(report, indent=2))
        return
    for key, value in report.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value)
        print(f"{key}: {value}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--report", help="also write the JSON report to this path")
    common.add_argument("-v", "--verbose", action="store_true")
    p = argparse.ArgumentParser(prog="usokit", description="Unique sink orientation toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="decide a property of a USO file")
    c.add_argument("path")
    c.add_argument("which", choices=CHECKS)

    b = sub.add_parser("build", parents=[common], help="construct an orientation and write a USO file")
    b.add_argument("kind", choices=BUILD_KINDS)
    b.add_argument("input", nargs="?")
    b.add_argument("-o", "--out", required=True)
    b.add_argument("--n", type=int)
    b.add_argument("--bits", help="combed spec bit string")
    b.add_argument("--matching", help="edges as vertexmask:dimension, comma separated")
    b.add_argument("--lcp-out", help="kaleidoscope-pmatrix: write the blown-up LCP here")

    t = sub.add_parser("transform", parents=[common], help="reverse, mirror, permute or automorph an orientation")
    t.add_argument("path")
    t.add_argument("op", choices=("reverse", "mirror", "permute", "automorph", "find-l-copy"))
    t.add_argument("args", nargs="*", help="set like 1,3 or {} ; permutation like 2,3,1")
    t.add_argument("-o", "--out", required=True)

    s = sub.add_parser("census", parents=[common], help="isomorphism classes of n-cube USOs")
    s.add_argument("n", type=int)
    s.add_argument("--out", default="census")
    s.add_argument("--heavy", action="store_true")
    s.add_argument("--resume", action="store_true")
    s.add_argument("--jobs", type=int, default=1)

    i = sub.add_parser("iso", parents=[common], help="test two USO files for isomorphism")
    i.add_argument("path1")
    i.add_argument("path2")

    v = sub.add_parser("verify-report", parents=[common], help="re-validate the witnesses in a JSON report")
    v.add_argument("report_file")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    start = time.perf_counter()
    try:
        if args.command == "check":
            report = cmd_check(args.path, args.which)
        elif args.command == "build":
            report = cmd_build(args.kind, args.out, args.input, args.n, args.bits, args.matching, args.lcp_out)
        elif args.command == "transform":
            report = cmd_transform(args.path, args.op, args.args, args.out)
        elif args.command == "census":
            report = cmd_census(args.n, args.out, args.heavy, args.resume, args.jobs)
        elif args.command == "iso":
            report = cmd_iso(args.path1, args.path2)
        else:
            original = json.loads(Path(args.report_file).read_text())
            ok = verify_report(original)
            report = {"command": "verify-report", "inputs": {"path": _abs(args.report_file)},
                      "verdict": "valid" if ok else "invalid"}
    except NotGeneric as exc:
        print(f"error: {exc} (vertex {sorted(dims_of(exc.vertex))}, index {exc.index})", file=sys.stderr)
        return INPUT_ERROR
    except (UsoError, OSError, ValueError, KeyError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    report["timings"] = {"seconds": round(time.perf_counter() - start, 6)}
    _emit(report, args.format, args.report)
    return _exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
