"""Command-line front end.

Exit codes: 0 success (or a conclusive certificate), 1 computation
failure, 2 inconclusive certificate, 64 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import families
from .complex import DEFAULT_MAX_CROSSINGS, CubeTooLarge, assemble
from .detect import certified_wrap_bounds, find_pwu, gap_template, ki_gap
from .diagram import DiagramError, diagram_to_json, diagram_wrap, find_nugatory, parse_diagram, \
    trace_faces
from .homology import homology
from .resolution import classify, load_resolution, resolution_to_json, resolve
from .transform import TransformError, to_uniform, to_uniform_patchwise

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _env_default(name, default, cast=str):
    raw = os.environ.get(f"AKH_{name}")
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        raise UsageError(f"AKH_{name}={raw!r} is not a valid value") from None


def _bool(raw):
    return raw.lower() in ("1", "true", "yes", "on")


def _bits(text):
    text = text.strip()
    if text in ("", "()", "-"):
        return ()
    if "," in text:
        return tuple(int(b) for b in text.split(","))
    if set(text) - {"0", "1"}:
        raise argparse.ArgumentTypeError(f"bit vector must be 0/1 digits, got {text!r}")
    return tuple(int(b) for b in text)


def _ints(text):
    text = text.strip()
    return [int(x) for x in text.split(",")] if text else []


def _read_diagram(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    try:
        return parse_diagram(text)
    except DiagramError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _emit(args, payload, text):
    if args.json:
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _u_from_args(args, d):
    if getattr(args, "resolution", None):
        with open(args.resolution, encoding="utf-8") as fh:
            return load_resolution(d, fh.read()).u
    if args.u is None:
        raise UsageError("a bit vector is required (--u or --resolution)")
    if len(args.u) != len(d.crossings):
        raise UsageError(f"--u has {len(args.u)} bits, diagram has {len(d.crossings)} crossings")
    return args.u


# -- subcommands -------------------------------------------------------------

def cmd_validate(args):
    d = _read_diagram(args.diagram)
    faces = trace_faces(d)
    nug = find_nugatory(d)
    payload = {"valid": True, "crossings": len(d.crossings), "free_loops": len(d.free_loops),
               "faces": len(faces), "wrap": diagram_wrap(d),
               "signs": list(d.crossing_signs()),
               "nugatory": [{"crossing": c, "kind": k} for c, k in nug]}
    text = (f"ok: {len(d.crossings)} crossings, {len(d.free_loops)} free loops, "
            f"{len(faces)} faces, wrap {payload['wrap']}")
    _emit(args, payload, text)
    return EXIT_OK


def cmd_wrap(args):
    d = _read_diagram(args.diagram)
    w = diagram_wrap(d)
    _emit(args, {"wrap": w}, str(w))
    return EXIT_OK


def cmd_resolve(args):
    d = _read_diagram(args.diagram)
    res = resolve(d, _u_from_args(args, d))
    payload = resolution_to_json(res)
    if args.w is not None:
        payload["report"] = classify(d, res, args.w).as_dict()
    lines = [f"u = {''.join(map(str, res.u)) or '()'}  wrap(D_u) = {res.wrap}"]
    for c in res.circles:
        kind = "trivial" if c.trivial else "nontrivial"
        flags = [f for f in ("type0", "type1", "type01", "type10") if getattr(c, f)]
        lines.append(f"  circle {c.id}: {kind}, depth {c.depth}, edges {list(c.edges)}"
                     + (f", loop {c.loop}" if c.loop is not None else "")
                     + (f", {' '.join(flags)}" if c.trivial else ""))
    if args.w is not None:
        rep = payload["report"]
        lines.append("  " + ", ".join(f"{k}={rep[k]}" for k in
                                      ("exactly_wrapped", "insulated", "uniform", "almost_uniform",
                                       "pwu", "n0", "n1", "n2")))
    if args.json:
        _emit(args, payload, "")
    else:
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_complex(args):
    d = _read_diagram(args.diagram)
    c = assemble(d, k=args.k, max_crossings=args.max_crossings)
    if args.dot:
        sys.stdout.write(c.to_dot(k=args.k))
        return EXIT_OK
    if args.triplets:
        sys.stdout.write(c.dump_triplets(k=args.k, q=args.q))
        return EXIT_OK
    counts = {}
    for j in c.indices(q=args.q, k=args.k):
        key = (int(c.degree[j]), int(c.q[j]), int(c.k[j]))
        counts[key] = counts.get(key, 0) + 1
    rows = [{"i": i, "q": q, "k": k, "generators": n} for (i, q, k), n in sorted(counts.items())]
    text = "\n".join([f"{'i':>3} {'q':>4} {'k':>4}  generators"]
                     + [f"{r['i']:>3} {r['q']:>4} {r['k']:>4}  {r['generators']}" for r in rows])
    _emit(args, {"k": args.k, "q": args.q, "d_squared_zero": c.check_d_squared(), "blocks": rows},
          text)
    return EXIT_OK


def cmd_homology(args):
    d = _read_diagram(args.diagram)
    h = homology(d, k=args.k, q=args.q, max_crossings=args.max_crossings)
    if args.json:
        sys.stdout.write(h.to_json())
    else:
        sys.stdout.write(str(h) + "\n")
    return EXIT_OK


def _default_w(args, d):
    if args.w is not None:
        return args.w
    return certified_wrap_bounds(d, max_crossings=args.max_crossings).lower


def cmd_detect_pwu(args):
    d = _read_diagram(args.diagram)
    w = _default_w(args, d)
    if w is None:
        raise CubeTooLarge("no certified w available; pass --w")
    found = find_pwu(d, w, max_crossings=args.max_crossings)
    bits = ["".join(map(str, u)) or "()" for u in found]
    _emit(args, {"w": w, "count": len(found), "resolutions": [list(u) for u in found]},
          f"w = {w}: {len(found)} perfectly wrapped uniform resolution(s)\n" + "\n".join(bits))
    return EXIT_OK


def cmd_detect_gap(args):
    d = _read_diagram(args.diagram)
    u = _u_from_args(args, d)
    w = _default_w(args, d)
    res = resolve(d, u)
    gap = sorted(ki_gap(d, res, w))
    rep = classify(d, res, w)
    payload = {"u": list(u), "w": w, "size": len(gap), "pwu": rep.is_pwu, "n2": rep.n2,
               "generators": [list(g.labels) for g in gap],
               "matches_template": (set(gap) == gap_template(res)) if gap else None}
    text = f"gap at w = {w}: {len(gap)} generator(s)\n" + "\n".join(str(g) for g in gap)
    _emit(args, payload, text)
    return EXIT_OK


def _certify_one(d, args, witnesses=None):
    cert = certified_wrap_bounds(d, witnesses=witnesses, verify_homology=args.verify_homology,
                                 max_crossings=args.max_crossings)
    return cert


def cmd_certify(args):
    d = _read_diagram(args.diagram)
    witnesses = [args.witness] if args.witness is not None else None
    if args.witness_file:
        with open(args.witness_file, encoding="utf-8") as fh:
            witnesses = [tuple(u) for u in json.load(fh)["witnesses"]]
    cert = _certify_one(d, args, witnesses)
    payload = cert.as_dict()
    lo = "?" if cert.lower is None else cert.lower
    text = (f"lower {lo}, upper {cert.upper}: "
            + (f"conclusive, wrap = {cert.upper}" if cert.conclusive else "inconclusive"))
    if cert.homology_verified is not None:
        text += f" (homology check {'passed' if cert.homology_verified else 'FAILED'})"
    _emit(args, payload, text)
    if cert.homology_verified is False:
        return EXIT_FAIL
    return EXIT_OK if cert.conclusive else EXIT_INCONCLUSIVE


def cmd_transform(args):
    d = _read_diagram(args.diagram)
    res = resolve(d, _u_from_args(args, d))
    steps = []
    fn = to_uniform_patchwise if args.patchwise else to_uniform
    out = fn(d, res, w=args.w, steps=steps)
    payload = resolution_to_json(out)
    payload["steps"] = [list(s) for s in steps]
    if args.json:
        _emit(args, payload, "")
    else:
        sys.stdout.write("".join(map(str, out.u)) + "\n")
    return EXIT_OK


def _gen_member(args):
    fam = args.family
    if fam == "braid":
        d = families.braid_closure(_ints(args.word), args.strands)
        return d, [families.layout_of(d).vertical()]
    if fam == "chains":
        ins = [tuple(int(x) for x in item.split(":")) for item in args.insert or []]
        d, u = families.with_chains(_ints(args.word), args.strands, ins)
        return d, [u]
    if fam == "belts":
        blocks = []
        for item in args.block or []:
            if item.startswith("belt:"):
                _, start, k = item.split(":")
                blocks.append(("belt", int(start), int(k)))
            else:
                blocks.append(_ints(item))
        return families.with_belts(blocks, args.strands)
    if fam == "cable":
        base = families.braid_closure(_ints(args.word), args.strands)
        d, u = families.cable(base, args.n, families.layout_of(base).vertical())
        return d, [u]
    if fam == "earrings":
        base = families.braid_closure(_ints(args.word), args.strands)
        sites = [tuple(int(x) for x in s.split(":")) for s in args.site or []]
        d, u = families.add_earrings(base, families.layout_of(base).vertical(), sites)
        return d, [u]
    raise UsageError(f"unknown family {fam!r}")


def cmd_gen(args):
    if args.family == "alternating":
        corpus = families.alternating_corpus(args.max_crossings_corpus)
        payload = {"diagrams": [diagram_to_json(d) for d in corpus]}
        _emit(args, payload, json.dumps(payload, sort_keys=True, indent=2))
        return EXIT_OK
    try:
        d, witnesses = _gen_member(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    diagram = diagram_to_json(d)
    sidecar = {"witnesses": [list(u) for u in witnesses], "w": diagram_wrap(d)}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(diagram, sort_keys=True, indent=2) + "\n")
        with open(args.out + ".witness.json", "w", encoding="utf-8") as fh:
            fh.write(json.dumps(sidecar, sort_keys=True, indent=2) + "\n")
        sys.stdout.write(f"wrote {args.out} and {args.out}.witness.json\n")
        return EXIT_OK
    payload = {"diagram": diagram, **sidecar}
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def cmd_verify(args):
    def one(path):
        try:
            d = _read_diagram(path)
        except UsageError as exc:
            return {"file": path, "error": str(exc)}
        witnesses = None
        side = path + ".witness.json"
        if os.path.exists(side):
            with open(side, encoding="utf-8") as fh:
                witnesses = [tuple(u) for u in json.load(fh)["witnesses"]]
        cert = _certify_one(d, args, witnesses)
        return {"file": path, **cert.as_dict()}

    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
        results = list(pool.map(one, args.diagrams))
    lines = []
    for r in results:
        if "error" in r:
            lines.append(f"{r['file']}: error: {r['error']}")
        else:
            lines.append(f"{r['file']}: {r['conjecture_status']} (lower {r['lower']}, "
                         f"upper {r['upper']})")
    _emit(args, {"results": results}, "\n".join(lines))
    if any("error" in r for r in results):
        return EXIT_USAGE
    if any(r["homology_verified"] is False for r in results):
        return EXIT_FAIL
    return EXIT_OK if all(r["conclusive"] for r in results) else EXIT_INCONCLUSIVE


# -- parser ------------------------------------------------------------------

def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true",
                        default=_env_default("JSON", False, _bool), help="structured output")
    common.add_argument("--max-crossings", type=int,
                        default=_env_default("MAX_CROSSINGS", DEFAULT_MAX_CROSSINGS, int),
                        help="cube cap (crossings)")
    common.add_argument("--threads", type=int, default=_env_default("THREADS", 1, int),
                        help="worker threads for batch commands")
    common.add_argument("--verify-homology", action="store_true",
                        default=_env_default("VERIFY_HOMOLOGY", False, _bool),
                        help="confirm certificates by exact linear algebra")

    p = _Parser(prog="akh", description="Annular Khovanov homology toolkit")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, fn, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("validate", cmd_validate, help="check a diagram file")
    sp.add_argument("diagram")
    sp = add("wrap", cmd_wrap, help="diagram wrapping number")
    sp.add_argument("diagram")
    sp = add("resolve", cmd_resolve, help="trace one resolution")
    sp.add_argument("diagram")
    sp.add_argument("--u", type=_bits)
    sp.add_argument("--resolution")
    sp.add_argument("--w", type=int)
    sp = add("complex", cmd_complex, help="chain complex summary or dumps")
    sp.add_argument("diagram")
    sp.add_argument("--k", type=int)
    sp.add_argument("--q", type=int)
    sp.add_argument("--dot", action="store_true")
    sp.add_argument("--triplets", action="store_true")
    sp = add("homology", cmd_homology, help="homology table")
    sp.add_argument("diagram")
    sp.add_argument("--k", type=int)
    sp.add_argument("--q", type=int)

    det = sub.add_parser("detect", help="perfectly wrapped uniform resolutions and gaps")
    dsub = det.add_subparsers(dest="what", parser_class=_Parser)
    dsub.required = True
    sp = dsub.add_parser("pwu", parents=[common])
    sp.set_defaults(fn=cmd_detect_pwu)
    sp.add_argument("diagram")
    sp.add_argument("--w", type=int)
    sp = dsub.add_parser("gap", parents=[common])
    sp.set_defaults(fn=cmd_detect_gap)
    sp.add_argument("diagram")
    sp.add_argument("--u", type=_bits)
    sp.add_argument("--resolution")
    sp.add_argument("--w", type=int)

    cert = sub.add_parser("certify", help="wrap certificates")
    csub = cert.add_subparsers(dest="what", parser_class=_Parser)
    csub.required = True
    sp = csub.add_parser("wrap", parents=[common])
    sp.set_defaults(fn=cmd_certify)
    sp.add_argument("diagram")
    sp.add_argument("--witness", type=_bits)
    sp.add_argument("--witness-file")

    tr = sub.add_parser("transform", help="resolution transforms")
    tsub = tr.add_subparsers(dest="what", parser_class=_Parser)
    tsub.required = True
    sp = tsub.add_parser("uniformize", parents=[common])
    sp.set_defaults(fn=cmd_transform)
    sp.add_argument("diagram")
    sp.add_argument("--u", type=_bits)
    sp.add_argument("--resolution")
    sp.add_argument("--w", type=int)
    sp.add_argument("--patchwise", action="store_true")

    sp = add("gen", cmd_gen, help="generate a family member")
    sp.add_argument("family", choices=["braid", "chains", "belts", "cable", "earrings", "alternating"])
    sp.add_argument("--word", default="")
    sp.add_argument("--strands", type=int, default=2)
    sp.add_argument("--insert", action="append", help="position:generator:length:sign")
    sp.add_argument("--block", action="append", help="braid word '1,-2' or 'belt:start:k'")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--site", action="append", help="layer:position")
    sp.add_argument("--max-crossings-corpus", type=int, default=6)
    sp.add_argument("--out")

    sp = add("verify-conjecture", cmd_verify, help="certify a batch of diagrams")
    sp.add_argument("diagrams", nargs="+")
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (CubeTooLarge, TransformError, DiagramError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAIL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
