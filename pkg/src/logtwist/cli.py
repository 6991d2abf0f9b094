"""Command-line front end.

Exit status: 0 on success, 2 when the input fails validation, 3 when a spin
computation falls outside the supported all-rational regime.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Optional

from . import jsonio
from .diffdata import induced_orders
from .hyper import (
    check_involution_compat,
    check_nonempty,
    edge_orbit_split,
    hyperelliptic_signature,
    quadratic_pushforward,
    quotient_cover_check,
)
from .minmonoid import (
    hyperelliptic_monoid_coequalizer,
    hyperelliptic_monoid_quotient,
    hyperelliptic_properties,
    minimal_monoid,
    monoids_equal,
)
from .spin import SpinInput, UnsupportedRegime, h0_parity, random_placement, spin_pieces, spin_degrees, spin_report
from .stablegraph import GraphError, to_dot, validate
from .twist import WeightedGraph, enumerate_structures, is_consistent

EXIT_OK, EXIT_INVALID, EXIT_UNSUPPORTED = 0, 2, 3
DEFAULT_SEED = 20181
PLACEMENT_TRIALS = 5


def _need(job: jsonio.Job, *fields: str) -> None:
    for f in fields:
        if getattr(job, f) is None:
            raise jsonio.InputError(f"/{f}", "missing field")


def _weighted(job: jsonio.Job) -> WeightedGraph:
    _need(job, "graph", "structure")
    problem = validate(job.graph, job.signature)
    if problem:
        raise jsonio.InputError("/graph", problem)
    return WeightedGraph(job.graph, job.signature, job.structure)


def cmd_enumerate(job, args) -> dict:
    _need(job, "graph")
    problem = validate(job.graph, job.signature)
    if problem:
        raise jsonio.InputError("/graph", problem)
    found = enumerate_structures(job.graph, job.signature, args.max_contact)
    items = []
    for T in found:
        d = jsonio.structure_to_json(T)
        d["consistent"] = is_consistent(job.graph, job.signature, T)
        items.append(d)
    return {"max_contact": args.max_contact, "count": len(items), "structures": items}


def cmd_monoid(job, args) -> dict:
    W = _weighted(job)
    out = {
        "consistent": is_consistent(W.graph, W.signature, W.structure),
        "monoid": jsonio.monoid_to_json(minimal_monoid(W)),
    }
    if job.involution is not None:
        inv = job.involution
        hyp = {"compatible": check_involution_compat(W, inv)}
        if hyp["compatible"]:
            A = hyperelliptic_monoid_quotient(W, inv)
            B = hyperelliptic_monoid_coequalizer(W, inv)
            hyp["quotient"] = jsonio.monoid_to_json(A)
            hyp["coequalizer"] = jsonio.monoid_to_json(B)
            hyp["presentations_agree"] = monoids_equal(A, B)
            hyp["property_violations"] = hyperelliptic_properties(W, inv, A)
        out["hyperelliptic"] = hyp
    return out


def cmd_spin(job, args) -> dict:
    W = _weighted(job)
    signs = job.signs
    if signs is None:
        raise jsonio.InputError("/signs", "missing field (or pass --signs)")
    try:
        inp = SpinInput.build(W, signs)
    except ValueError as exc:
        raise jsonio.InputError("/signs", str(exc)) from None
    report = spin_report(inp)
    rng = random.Random(args.seed)
    stable = True
    for _, piece in spin_pieces(W, inp.signs, spin_degrees(W)):
        base = h0_parity(piece)[0]
        for _ in range(PLACEMENT_TRIALS):
            if h0_parity(piece, random_placement(piece, rng))[0] != base:
                stable = False
    report["placement_invariant"] = stable
    report["seed"] = args.seed
    return report


def cmd_hyper(job, args) -> dict:
    out = {}
    sig = job.hyp_signature
    if job.graph is not None:
        _need(job, "involution")
        G, inv = job.graph, job.involution
        diag = quotient_cover_check(G, inv)
        split = edge_orbit_split(G, inv)
        out["cover_check"] = diag or "ok"
        out["edge_split"] = {
            "fixed": [G.edge_name(k) for k in split.fixed],
            "swapped": [G.edge_name(k) for k in split.swapped],
        }
        if job.structure is not None:
            W = _weighted(job)
            out["compatible"] = check_involution_compat(W, inv)
        if sig is None:
            sig = hyperelliptic_signature(WeightedGraph(G, job.signature, job.structure)
                                          if job.structure is not None else _bare(job), inv)
    if sig is None:
        raise jsonio.InputError("/hyp_signature", "need a graph with involution or a hyperelliptic signature")
    out["signature"] = {"fixed": list(sig.fixed), "pairs": list(sig.pairs)}
    try:
        ok = check_nonempty(sig)
    except ValueError as exc:
        raise jsonio.InputError("/hyp_signature", str(exc)) from None
    out["nonempty"] = ok
    out["pushforward"] = list(quadratic_pushforward(sig)) if ok else None
    return out


def _bare(job) -> WeightedGraph:
    from .twist import TwistedStructure

    G = job.graph
    T = TwistedStructure((0,) * G.num_edges, ("none",) * G.num_edges, (False,) * G.num_vertices)
    return WeightedGraph(G, job.signature, T)


def cmd_report(job, args) -> dict:
    out = {}
    if job.graph is not None:
        out["graph"] = jsonio.graph_to_json(job.graph)
        out["signature"] = list(job.signature)
        out["enumerate"] = cmd_enumerate(job, args)
    if job.structure is not None:
        W = _weighted(job)
        out["structure"] = jsonio.structure_to_json(job.structure)
        out["orders"] = induced_orders(W).to_json()
        out["monoid"] = cmd_monoid(job, args)
        if job.signs is not None:
            try:
                out["spin"] = cmd_spin(job, args)
            except UnsupportedRegime as exc:
                out["spin"] = {"unsupported": str(exc)}
    if job.involution is not None or job.hyp_signature is not None:
        out["hyper"] = cmd_hyper(job, args)
    if job.graph is not None:
        out["dot"] = to_dot(job.graph, job.structure)
    return out


COMMANDS = {
    "enumerate": cmd_enumerate,
    "monoid": cmd_monoid,
    "spin": cmd_spin,
    "hyper": cmd_hyper,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="logtwist", description="Weighted graphs of log twisted differentials.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--input", "-i", required=True, help="input JSON file ('-' for stdin)")
    p.add_argument("--output", "-o", help="write the JSON report here instead of stdout")
    p.add_argument("--max-contact", type=int, default=10, help="contact order bound for enumeration")
    p.add_argument("--signs", help="gluing signs on even-contact nodes, e.g. '+,-'")
    p.add_argument("--involution", help="involution as inline JSON or a path to a JSON file")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized placement checks")
    p.add_argument("--dot", help="also write the graph as Graphviz DOT to this path")
    return p


def _read_json(src: str, label: str):
    try:
        if src == "-":
            return json.load(sys.stdin)
        if src.lstrip().startswith("{"):
            return json.loads(src)
        with open(src, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise jsonio.InputError(label, f"malformed JSON: {exc}") from None
    except OSError as exc:
        raise jsonio.InputError(label, f"cannot read: {exc.strerror}") from None


def run(argv: Optional[list[str]] = None) -> tuple[int, str]:
    """Execute a command; returns (exit status, text written to stdout)."""
    args = build_parser().parse_args(argv)
    try:
        if args.max_contact < 0:
            raise jsonio.InputError("--max-contact", "must be nonnegative")
        job = jsonio.parse_job(_read_json(args.input, "--input"))
        if args.signs is not None:
            job.signs = jsonio.parse_signs(args.signs, "--signs")
        if args.involution is not None:
            _need(job, "graph")
            job.involution = jsonio.parse_involution(_read_json(args.involution, "--involution"), job.graph,
                                                     "--involution")
        result = COMMANDS[args.command](job, args)
    except (jsonio.InputError, GraphError) as exc:
        return EXIT_INVALID, f"error: {exc}\n"
    except UnsupportedRegime as exc:
        return EXIT_UNSUPPORTED, f"unsupported: {exc}\n"
    except ValueError as exc:
        return EXIT_INVALID, f"error: {exc}\n"
    text = jsonio.dumps(result)
    if args.dot and job.graph is not None:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(job.graph, job.structure))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        return EXIT_OK, ""
    return EXIT_OK, text


def main(argv: Optional[list[str]] = None) -> int:
    status, text = run(argv)
    stream = sys.stdout if status == EXIT_OK else sys.stderr
    stream.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
