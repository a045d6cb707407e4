"""Command line entry point.

Exit codes: 0 success, 1 negative result (hom-free, failed check, rejected
precondition), 2 usage or input error, 3 internal guard tripped.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import hashlib
import io
import json
import os
import platform
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (HypergraphFormatError, InvalidParameters, NoEdges, NotAForest, NotCertified,
                     PreconditionFailure, SymmetryViolation, TooLarge)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3

# output schema per (command, action); schemas/*.json ship with the package
SCHEMAS = {"homcheck": "homcheck", "lagrangian": "optimization", "pspectral": "optimization",
           "entropy": "entropy", "ratio": "ratio", "forest derive": "forest-derive",
           "forest certify": "forest-certify", "forest sample": "forest-sample", "verify": "verify",
           "verify all": "verify-all", "construct g1": "construct-design",
           "construct intersection": "construct-design", "construct g1-density": "construct-g1-density"}


def load_schema(name: str) -> dict:
    from importlib.resources import files
    return json.loads(files(__package__).joinpath("schemas", f"{name}.json").read_text(encoding="utf-8"))


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# output helpers


def _plain(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, dict):
        return {str(a): _plain(b) for a, b in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, np.ndarray):
        return [_plain(x) for x in v.tolist()]
    if isinstance(v, float) and v != v:
        return "nan"
    if isinstance(v, float) and v in (float("inf"), float("-inf")):
        return "inf" if v > 0 else "-inf"
    return v


def dumps(obj) -> str:
    # repr floats round-trip exactly, which keeps reruns byte-identical
    return json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n"


def _parse_ints(text, what="list"):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected a comma separated list of integers for {what}, got {text!r}") from None


def _read_graph(path):
    from .hypergraph import read_hypergraph
    try:
        return read_hypergraph(path)
    except HypergraphFormatError as exc:
        exc.path = path
        raise
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        err = HypergraphFormatError(exc.msg, exc.lineno, exc.colno)
        err.path = path
        raise err from None
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def _read_forest(path):
    from .forests import validate_forest
    from .hypergraph import PartialHypergraph
    data = _read_json(path)
    if not isinstance(data, dict) or not {"k", "n", "faces"} <= set(data):
        raise UsageError(f"{path}: a forest file needs keys 'k', 'n', 'faces' (and optionally 'order')")
    F = PartialHypergraph(int(data["k"]), int(data["n"]), data["faces"])
    return validate_forest(F, data.get("order"))


def _distribution(G, path):
    from .entropy import edge_distribution_from_json, uniform_edge_distribution
    if path is None:
        return uniform_edge_distribution(G)
    data = _read_json(path)
    if isinstance(data, dict) and "distribution" in data:
        data = data["distribution"]
    try:
        data = {"edges": data["edges"], "q": [Fraction(str(v)) if isinstance(v, str) else v for v in data["q"]]}
    except (KeyError, TypeError):
        raise UsageError(f"{path}: a distribution needs 'edges' and 'q'") from None
    return edge_distribution_from_json(G, data)


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, exit_code, files_written)


def cmd_gen(args):
    from . import hypergraph as hg
    kind = args.kind
    if kind == "tent":
        lam = _parse_ints(args.lam or "", "--lambda")
        G = hg.make_partial_tent(lam) if args.partial else hg.make_tent(lam)
    elif kind == "clique":
        G = hg.make_complete(args.r, args.k)
    elif kind == "fks":
        G = hg.make_Fks_partial(args.k, args.s, args.r) if args.partial else hg.make_Fks(args.k, args.s, args.r)
    elif kind == "blowup":
        if not args.input:
            raise UsageError("gen blowup needs an input hypergraph")
        base = _read_graph(args.input)
        G = hg.blowup(base, _parse_ints(args.counts or "", "--counts")) if args.counts else \
            hg.iterated_blowup(base, args.m)
    else:
        raise UsageError(f"unknown generator {kind!r}")
    if isinstance(G, hg.PartialHypergraph):
        text = json.dumps({"k": G.k, "n": G.n, "faces": [list(f) for f in sorted(G.maximal_faces)]}) + "\n"
    else:
        text = hg.to_json(G) + "\n" if (args.output or "").endswith(".json") else hg.to_text(G)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        return None, EXIT_OK, [args.output]
    sys.stdout.write(text)
    return None, EXIT_OK, []


def cmd_homcheck(args):
    from .homs import find_hom
    from .hypergraph import PartialHypergraph
    source = args.F
    if source.endswith(".json"):
        data = _read_json(source)
        F = PartialHypergraph(int(data["k"]), int(data["n"]), data["faces"]) if "faces" in data else \
            _read_graph(source)
    else:
        F = _read_graph(source)
    G = _read_graph(args.G)
    w = find_hom(F, G)
    payload = {"source": args.F, "target": args.G, "hom_exists": w is not None,
               "map": None if w is None else list(w.map)}
    return payload, EXIT_OK if w is not None else EXIT_NEGATIVE, []


def cmd_lagrangian(args):
    from .lagrangian import blowup_density
    G = _read_graph(args.G)
    res = blowup_density(G, starts=args.starts, seed=args.seed, exact=not args.numeric)
    return res.to_dict(), EXIT_OK, []


def cmd_pspectral(args):
    from .lagrangian import p_spectral
    G = _read_graph(args.G)
    return p_spectral(G, args.p, starts=args.starts, seed=args.seed).to_dict(), EXIT_OK, []


def cmd_entropy(args):
    from .entropy import entropic_density
    G = _read_graph(args.G)
    return entropic_density(G, args.p, starts=args.starts, seed=args.seed).to_dict(), EXIT_OK, []


def cmd_ratio(args):
    from .entropy import ratio_sequence
    G = _read_graph(args.G)
    return ratio_sequence(_distribution(G, args.dist)).to_dict(), EXIT_OK, []


def _family_params(args):
    params = {"k": args.k}
    for name in ("i", "j", "r", "s"):
        v = getattr(args, name)
        if v is not None:
            params[name] = v
    return params


def cmd_forest(args):
    from .forests import FAMILIES, certify_disjointness, derive_constraint, sampled_hom_distribution
    if args.action == "derive":
        try:
            c = derive_constraint(args.family, **_family_params(args))
        except KeyError as exc:
            raise UsageError(f"family {args.family!r} needs --{exc.args[0]}") from None
        return {"constraint": c.to_dict()}, EXIT_OK, []
    if args.action == "certify":
        if args.family not in FAMILIES:
            raise UsageError(f"unknown family {args.family!r}; choose from {sorted(FAMILIES)}")
        params = _family_params(args)
        params["N"] = args.N
        if args.family == "lemma72":
            params.pop("N")
        try:
            fam = FAMILIES[args.family](**params)
        except TypeError as exc:
            raise UsageError(f"bad parameters for {args.family}: {exc}") from None
        host = _read_graph(args.host) if args.host else None
        a = certify_disjointness(fam, G=host)
        ok = a <= fam.claimed_a
        payload = {"family": args.family, "params": params, "members": len(fam.members),
                   "claimed_a": fam.claimed_a, "certified_a": a, "certified": ok,
                   "mode": "host" if host is not None else "forbidden-family"}
        return payload, EXIT_OK if ok else EXIT_NEGATIVE, []
    if args.action == "sample":
        if not (args.forest and args.G):
            raise UsageError("forest sample needs --forest FILE and --graph FILE")
        PF = _read_forest(args.forest)
        G = _read_graph(args.G)
        res = sampled_hom_distribution(PF, _distribution(G, args.dist))
        payload = {"forest_seq": list(PF.forest_seq), "entropy": res.entropy, "predicted": res.predicted,
                   "entropy_gap": res.entropy_gap, "faces_match": res.faces_match,
                   "mismatched_face": None if res.mismatched_face is None else list(res.mismatched_face),
                   "support_size": len(res.joint.support)}
        ok = res.faces_match and res.entropy_gap <= 1e-9
        return payload, EXIT_OK if ok else EXIT_NEGATIVE, []
    raise UsageError(f"unknown forest action {args.action!r}")


def _run_criterion(job):
    from .acceptance import run_criterion
    i, scale, seed = job
    return run_criterion(i, scale, seed).to_dict()


def cmd_verify(args):
    from . import verify as v
    claim = args.claim
    if claim == "all":
        from .acceptance import CRITERIA
        only = _parse_ints(args.only, "--only") if args.only else sorted(CRITERIA)
        unknown = [i for i in only if i not in CRITERIA]
        if unknown:
            raise UsageError(f"no criterion numbered {unknown[0]}")
        jobs = [(i, args.scale, args.seed) for i in only]
        if args.jobs > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=min(args.jobs, len(jobs))) as pool:
                results = list(pool.map(_run_criterion, jobs))
        else:
            results = [_run_criterion(j) for j in jobs]
        for r in results:
            print(f"[{'PASS' if r['pass'] else 'FAIL'}] {r['number']:2d} {r['title']}: {r['summary']}",
                  file=sys.stderr)
            r.pop("seconds")  # wall time would break byte-identical reruns
        ok = all(r["pass"] for r in results)
        return {"scale": args.scale, "seed": args.seed, "results": results}, EXIT_OK if ok else EXIT_NEGATIVE, []
    if claim == "appendix":
        if args.k is None or (args.r is None and args.d is None):
            raise UsageError("verify appendix needs --k and --r or --d")
        return {"reports": [v.appendix_diagnostics(args.k, args.r, args.d)]}, EXIT_OK, []
    if args.G is None:
        raise UsageError(f"verify {claim} needs a hypergraph file")
    G = _read_graph(args.G)
    need_r = claim in ("entropic-turan", "spectral-turan", "pspectral-turan", "star-series")
    if need_r and args.r is None:
        raise UsageError(f"verify {claim} needs --r")
    if claim == "entropic-turan":
        reps = [v.check_entropic_turan(G, args.r, _distribution(G, args.dist))]
    elif claim == "spectral-turan":
        trees = [_read_graph(t) for t in args.tree or []]
        walks = _parse_ints(args.walks, "--walks") if args.walks else ()
        reps = v.check_spectral_turan(G, args.r, trees, walks=walks)
    elif claim == "pspectral-turan":
        reps = v.check_pspectral_turan(G, args.r, args.p)
    elif claim == "star-sidorenko":
        reps = [v.check_star_sidorenko(G, args.i if args.i is not None else 2)]
    elif claim == "star-series":
        reps = v.check_star_series(G, args.r)
    elif claim == "tent-density":
        reps = [v.tent_density_bound(G, args.mode, args.r, args.s)]
    else:
        raise UsageError(f"unknown claim {claim!r}")
    payload = {"reports": [r.to_dict() for r in reps]}
    return payload, EXIT_OK if all(r.passed for r in reps) else EXIT_NEGATIVE, []


def cmd_construct(args):
    from . import constructions as c
    from .hypergraph import write_hypergraph
    files = []
    if args.what == "g1-density":
        series = [c.g1_iterated_density(m, args.normalization) for m in range(1, args.m + 1)]
        payload = {"m": args.m, "normalization": args.normalization, "series": [str(x) for x in series],
                   "floats": [float(x) for x in series], "limit": "2/7"}
        return payload, EXIT_OK, files
    if args.what == "g1":
        res = c.find_G1()
        ok = res.verify() and res.stats["isomorphism_classes"] == 1
    elif args.what == "intersection":
        if args.k is None:
            raise UsageError("construct intersection needs --k")
        res = c.intersection_design(args.k, args.alpha)
        free = c.check_tent_freeness(res, args.alpha)
        res.stats["tents_checked"] = {",".join(map(str, lam)): (w is None) for lam, w in free.items()}
        ok = res.verify() and all(w is None for w in free.values())
    else:
        raise UsageError(f"unknown construction {args.what!r}")
    payload = res.to_dict()
    if args.output:
        write_hypergraph(res.hypergraph, args.output)
        files.append(args.output)
    return payload, EXIT_OK if ok else EXIT_NEGATIVE, files


def _records(data):
    if isinstance(data, dict):
        for key in ("results", "reports"):
            if isinstance(data.get(key), list):
                return data[key]
        return [data]
    if isinstance(data, list):
        return data
    return [{"value": data}]


def cmd_report(args):
    rows = []
    for path in args.inputs:
        for rec in _records(_read_json(path)):
            flat = {"source": os.path.basename(path)}
            for key, val in (rec.items() if isinstance(rec, dict) else [("value", rec)]):
                flat[key] = val if not isinstance(val, (dict, list)) else json.dumps(val, sort_keys=True)
            rows.append(flat)
    cols = []
    for r in rows:
        cols += [c for c in r if c not in cols and c != "details"]
    buf = io.StringIO()
    if args.format == "csv":
        w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    else:
        buf.write("| " + " | ".join(cols) + " |\n")
        buf.write("|" + "---|" * len(cols) + "\n")
        for r in rows:
            buf.write("| " + " | ".join(str(r.get(c, "")).replace("|", "\\|") for c in cols) + " |\n")
    text = buf.getvalue()
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        return None, EXIT_OK, [args.output]
    sys.stdout.write(text)
    return None, EXIT_OK, []


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every randomized step (default 0)")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker cap (default: all cores)")
    common.add_argument("--out-dir", help="also write result.json and manifest.json under "
                                          "OUT_DIR/<command>/<timestamp>/")

    p = argparse.ArgumentParser(prog="entropic-turan", description="Hypergraph Turan density toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="write a named hypergraph")
    g.add_argument("kind", choices=["tent", "clique", "fks", "blowup"])
    g.add_argument("input", nargs="?", help="base hypergraph for blowup")
    g.add_argument("--lambda", dest="lam", help="tent partition, e.g. 2,1")
    g.add_argument("--partial", action="store_true", help="write the partial version (JSON faces)")
    g.add_argument("--k", type=int)
    g.add_argument("--r", type=int)
    g.add_argument("--s", type=int)
    g.add_argument("--counts", help="blowup part sizes, e.g. 2,2,3")
    g.add_argument("--m", type=int, default=2, help="iterated blowup depth")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    h = sub.add_parser("homcheck", parents=[common], help="search a homomorphism F -> G")
    h.add_argument("F")
    h.add_argument("G")
    h.set_defaults(func=cmd_homcheck)

    for name, func, helptext in (("lagrangian", cmd_lagrangian, "blowup density"),
                                 ("pspectral", cmd_pspectral, "p-spectral radius"),
                                 ("entropy", cmd_entropy, "entropic density")):
        q = sub.add_parser(name, parents=[common], help=helptext)
        q.add_argument("G")
        q.add_argument("--starts", type=int, default=16 if name == "entropy" else 32)
        if name != "lagrangian":
            q.add_argument("--p", type=float, default=2.0 if name == "pspectral" else 1.0)
        else:
            q.add_argument("--numeric", action="store_true", help="skip the exact clique path for graphs")
        q.set_defaults(func=func)

    r = sub.add_parser("ratio", parents=[common], help="ratio sequence of an edge distribution")
    r.add_argument("G")
    r.add_argument("--dist", help="JSON with 'edges' and 'q' (default: uniform)")
    r.set_defaults(func=cmd_ratio)

    f = sub.add_parser("forest", parents=[common], help="forest families and sampled homomorphisms")
    f.add_argument("action", choices=["derive", "certify", "sample"])
    f.add_argument("--family")
    for name in ("k", "i", "j", "r", "s"):
        f.add_argument(f"--{name}", type=int)
    f.add_argument("--N", type=int, default=4, help="truncation level of the family")
    f.add_argument("--host", help="certify against this host graph instead of the forbidden family")
    f.add_argument("--forest", help="forest JSON for sample")
    f.add_argument("--graph", dest="G", help="host hypergraph for sample")
    f.add_argument("--dist")
    f.set_defaults(func=cmd_forest)

    v = sub.add_parser("verify", parents=[common], help="check a claim on an instance, or run the suite")
    v.add_argument("claim", choices=["all", "entropic-turan", "spectral-turan", "pspectral-turan",
                                     "star-sidorenko", "star-series", "tent-density", "appendix"])
    v.add_argument("G", nargs="?")
    v.add_argument("--r", type=int)
    v.add_argument("--p", type=float, default=2.0)
    v.add_argument("--i", type=int)
    v.add_argument("--s", type=int)
    v.add_argument("--k", type=int)
    v.add_argument("--d", type=int)
    v.add_argument("--mode", choices=["tents", "fks"], default="tents")
    v.add_argument("--tree", action="append", help="tree file (repeatable)")
    v.add_argument("--walks", help="walk lengths, e.g. 3,4")
    v.add_argument("--dist")
    v.add_argument("--scale", choices=["desk", "quick"], default="desk")
    v.add_argument("--only", help="criterion numbers, e.g. 1,2,13")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("construct", parents=[common], help="searched designs")
    c.add_argument("what", choices=["g1", "intersection", "g1-density"])
    c.add_argument("--k", type=int)
    c.add_argument("--alpha", type=float, default=0.8)
    c.add_argument("--m", type=int, default=5)
    c.add_argument("--normalization", choices=["binomial", "power"], default="binomial")
    c.add_argument("-o", "--output", help="write the design as a hypergraph file")
    c.set_defaults(func=cmd_construct)

    rp = sub.add_parser("report", parents=[common], help="tabulate JSON outputs")
    rp.add_argument("inputs", nargs="+")
    rp.add_argument("--format", choices=["csv", "md"], default="md")
    rp.add_argument("-o", "--output")
    rp.set_defaults(func=cmd_report)
    return p


def _digest(path):
    try:
        return hashlib.sha256(Path(path).read_bytes()).hexdigest()
    except OSError:
        return None


def _write_run(args, argv, payload, files, seconds):
    stamp = _dt.datetime.now(_dt.timezone.utc).strftime("%Y%m%dT%H%M%S%fZ")
    name = args.command + (f"-{getattr(args, 'claim', '')}" if args.command == "verify" else "")
    out = Path(args.out_dir) / name / stamp
    out.mkdir(parents=True, exist_ok=True)
    written = list(files)
    if payload is not None:
        (out / "result.json").write_text(dumps(payload), encoding="utf-8")
        written.append(str(out / "result.json"))
    inputs = [a for a in argv if os.path.isfile(a)]
    manifest = {"command_line": ["entropic-turan", *argv], "seed": args.seed, "jobs": args.jobs,
                "versions": {"entropic_turan": __version__, "numpy": np.__version__,
                             "python": platform.python_version()},
                "inputs": {p: _digest(p) for p in inputs}, "outputs": written,
                "wall_time_seconds": round(seconds, 3)}
    (out / "manifest.json").write_text(dumps(manifest), encoding="utf-8")
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    t0 = time.perf_counter()
    try:
        payload, code, files = args.func(args)
    except HypergraphFormatError as exc:
        path = getattr(exc, "path", None)
        print(f"error: {path + ': ' if path else ''}{exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, InvalidParameters, NoEdges, NotAForest, SymmetryViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionFailure as exc:
        sys.stdout.write(dumps({"precondition_failed": str(exc), "witness": exc.witness}))
        return EXIT_NEGATIVE
    except (TooLarge, NotCertified) as exc:
        print(f"guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    if payload is not None:
        sys.stdout.write(dumps(payload))
    if args.out_dir:
        where = _write_run(args, argv, payload, files, time.perf_counter() - t0)
        print(f"wrote {where}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
