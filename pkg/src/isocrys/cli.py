"""Command-line entry point.  Every subcommand builds a scenario and runs it.

Exit codes: 0 when every claim holds, 1 when a claim fails, 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .scenario import FORMAT, ScenarioError, bundled_scenarios, load_scenario, run_scenario


def _scenario(directive: str, params: dict, expect: dict | None = None, name: str | None = None) -> dict:
    return {"format": FORMAT, "name": name or directive, "directive": directive,
            "params": params, "expect": expect or {}}


def _from_args(args) -> dict:
    cmd = args.command
    if cmd == "run":
        return load_scenario(args.file)
    if cmd == "ex1":
        params = {"deform": args.deform, "seed": args.seed}
        if args.N is not None:
            params["ring"] = {"N": args.N}
        return _scenario("paper-ex1", params, name="ex1-deform" if args.deform else "ex1")
    if cmd == "twosl":
        params = {"r": args.r, "sigma1": args.sigma1, "sigma2": args.sigma2, "seed": args.seed,
                  "direct_M": not args.skip_direct}
        if args.N is not None:
            params["N"] = args.N
        return _scenario("twosl", params)
    if cmd == "classify":
        return _scenario("classify", {"height": args.height})
    if cmd == "newton":
        return _scenario("newton", {"file": args.file, "generic": args.generic, "seed": args.seed})
    if cmd == "hilbert":
        return _scenario("hilbert", {"p": args.p, "f": args.f, "a": args.a, "b": args.b})
    if cmd == "search-triple":
        return _scenario("search-triple", {"disc": args.disc, "p": args.p, "bound": args.bound})
    if cmd == "octonion":
        return _scenario("octonion", {"check": args.check})
    if cmd == "ghost":
        return _scenario("ghost", {"case": args.case, "r": args.r})
    if cmd == "oort":
        return _scenario("oort", {"dim": args.dim, "end_degree": args.enddeg})
    raise ScenarioError(f"unknown command {cmd!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="isocrys", description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, help="also write the report to this file")
    ap.add_argument("--no-timing", action="store_true", help="omit the timing field")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a scenario file or a bundled scenario by name")
    p.add_argument("file")
    sub.add_parser("list", help="list bundled scenarios")

    p = sub.add_parser("ex1", help="height-6 graded symmetric example")
    p.add_argument("--deform", action="store_true", help="also analyse the unipotent deformation")
    p.add_argument("--N", type=int)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("twosl", help="two-window construction")
    p.add_argument("--r", type=int, default=8)
    p.add_argument("--sigma1", type=int, default=0)
    p.add_argument("--sigma2", type=int, default=5)
    p.add_argument("--N", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--skip-direct", action="store_true", help="skip the direct polygon of the rank-7 window")

    p = sub.add_parser("classify", help="graded symmetric isogeny types of a given height")
    p.add_argument("--height", type=int, required=True)

    p = sub.add_parser("newton", help="Newton slopes of a module stored as JSON")
    p.add_argument("--file", required=True)
    p.add_argument("--generic", action="store_true")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("hilbert", help="Hilbert symbol (a, b) over the unramified extension of degree f")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--f", type=int, default=1)
    p.add_argument("a")
    p.add_argument("b")

    p = sub.add_parser("search-triple", help="anisotropic totally positive triple in Q(sqrt(D))")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--bound", type=int, default=50)

    p = sub.add_parser("octonion", help="derivations, exterior square and weights")
    p.add_argument("--check", default="all", choices=["all", "derivations", "lambda2", "weights", "commutants"])

    p = sub.add_parser("ghost", help="ghost dimension from torus invariants")
    p.add_argument("--case", required=True, choices=["so3", "so5", "g2"])
    p.add_argument("--r", type=int, default=8)

    p = sub.add_parser("oort", help="2 dim / [End : Q]")
    p.add_argument("dim", type=int)
    p.add_argument("enddeg", type=int)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if args.command == "list":
        print("\n".join(bundled_scenarios()))
        return 0
    try:
        doc = _from_args(args)
        report = run_scenario(doc)
    except (ScenarioError, ValueError, KeyError, TypeError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(json.dumps({"format": FORMAT, "error": f"{type(exc).__name__}: {exc}", "pass": False}),
              file=sys.stderr)
        return 2
    text = report.to_text(timing=not args.no_timing)
    sys.stdout.write(text)
    if args.out:
        args.out.write_text(text)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
