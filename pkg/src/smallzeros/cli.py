"""Command-line entry point.

Subcommands: ``solve``, ``bounds``, ``oracle``, ``batch`` and ``verify``.
Exit codes are 0 for solved (or verified), 2 for unknown, 3 for certified
unsatisfiable and 1 for errors or failed verification.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .arith import format_rational, parse_rational
from .certify import EXIT_ERROR, EXIT_SOLVED, EXIT_UNKNOWN, SolveOptions, decimal_bound, exit_code, run_solve
from .constants import a_constant, b_constant, bounds_from_heights
from .documents import parse_instance
from .errors import SmallZerosError
from .oracle import minimal_solution
from .single import DEFAULT_WITNESS_CAP
from .verify import verify_certificate


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _emit(doc, out: Optional[str]):
    text = json.dumps(doc, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _enc(b) -> dict:
    return {"lo": decimal_bound(b.lo, up=False), "hi": decimal_bound(b.hi, up=True), "prec": b.prec}


def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.file))
    cert = run_solve(inst, SolveOptions(cap=args.cap, oracle=not args.no_oracle))
    _emit(cert, args.out)
    return exit_code(cert)


def cmd_bounds(args) -> int:
    hf = parse_rational(args.hf)
    hls = [parse_rational(h) for h in (args.hl or ["1"])]
    if len(hls) == 1:
        hls = hls * args.m
    if len(hls) != args.m:
        raise SmallZerosError(f"--hl needs 1 or {args.m} values, got {len(hls)}")
    rep = bounds_from_heights(args.n, hf, hls)
    doc = {
        "N": args.n,
        "M": args.m,
        "H(F)": format_rational(hf),
        "H(L)": [format_rational(h) for h in hls],
        "A(N)": _enc(a_constant(args.n)),
        "B(N,M)": _enc(b_constant(args.n, args.m)),
        "bounds": {name: _enc(b) for name, b in rep.named().items()},
        "M_values": [dict(_enc(m), source=s) for m, s in zip(rep.M_values, rep.M_sources)],
        "star_order": rep.star_order,
    }
    _emit(doc, None)
    return EXIT_SOLVED


def cmd_oracle(args) -> int:
    inst = parse_instance(_read(args.file))
    found = minimal_solution(inst.quadratic, list(inst.linear), args.cap)
    doc = {"label": inst.label, "cap": args.cap}
    if found is None:
        doc["point"] = None
        _emit(doc, None)
        return EXIT_UNKNOWN
    doc["point"] = [format_rational(c) for c in found[0]]
    doc["height"] = found[1]
    _emit(doc, None)
    return EXIT_SOLVED


def cmd_batch(args) -> int:
    from .batch import batch_to_files

    rows = batch_to_files(args.seed, args.count, args.n, args.m, args.coeff_range, args.out,
                          jobs=args.jobs, cert_dir=args.cert_dir, options=SolveOptions(cap=args.cap))
    solved = sum(r["status"] == "solved" for r in rows)
    passed = sum(r["all_pass"] is True for r in rows)
    print(f"{len(rows)} instances, {solved} solved, {passed} within every bound -> {args.out}")
    return EXIT_SOLVED


def cmd_verify(args) -> int:
    cert = json.loads(_read(args.certificate))
    inst = json.loads(_read(args.instance)) if args.instance else None
    res = verify_certificate(cert, inst)
    print("ok" if res.ok else f"REJECTED: {res.message}")
    return EXIT_SOLVED if res.ok else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="smallzeros", description="Small zeros of quadratic forms off hyperplanes.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve an instance and print its certificate")
    s.add_argument("file")
    s.add_argument("--cap", type=int, default=DEFAULT_WITNESS_CAP, help="sup-norm radius for witness search")
    s.add_argument("--no-oracle", action="store_true", help="never run the brute-force oracle")
    s.add_argument("--out", help="write the certificate here instead of stdout")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bounds", help="evaluate constants and height bounds")
    b.add_argument("--n", type=int, required=True, help="N (forms in N+1 variables)")
    b.add_argument("--m", type=int, required=True, help="number of linear forms")
    b.add_argument("--hf", default="1", help="height of F")
    b.add_argument("--hl", nargs="+", help="heights of the linear forms (one value is broadcast)")
    b.set_defaults(func=cmd_bounds)

    o = sub.add_parser("oracle", help="minimal solution by exhaustive search")
    o.add_argument("file")
    o.add_argument("--cap", type=int, required=True)
    o.set_defaults(func=cmd_oracle)

    a = sub.add_parser("batch", help="run seeded random instances and write a CSV summary")
    a.add_argument("--seed", type=int, required=True)
    a.add_argument("--count", type=int, required=True)
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--m", type=int, required=True)
    a.add_argument("--coeff-range", type=int, default=5)
    a.add_argument("--out", required=True)
    a.add_argument("--jobs", type=int, default=1)
    a.add_argument("--cap", type=int, default=DEFAULT_WITNESS_CAP)
    a.add_argument("--cert-dir", help="also write one certificate per instance here")
    a.set_defaults(func=cmd_batch)

    v = sub.add_parser("verify", help="independently re-check a certificate")
    v.add_argument("certificate")
    v.add_argument("--instance", help="instance document the certificate must match")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SmallZerosError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
