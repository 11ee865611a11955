"""End-to-end solving of an instance into a certificate document.

The outcome is one of three statuses, each with its own exit code:

* ``solved`` (0): a point ``u`` with ``F(u) = 0`` and every ``L_i(u) != 0``,
  with its heights and every bound evaluated;
* ``unknown`` (2): no witness was found within the search cap and nothing
  could be certified either way;
* ``unsatisfiable`` (3): the search covered a radius large enough that
  any witness would have been found, or ``F`` is certified anisotropic,
  or (in two variables) the finitely many zeros were all ruled out.

Errors (bad input, violated preconditions) map to exit code 1.
"""

from __future__ import annotations

import hashlib
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .arith import format_rational, primitive_rep
from .constants import DEFAULT_PREC, BoundValue, evaluate_bounds
from .documents import FORMAT_VERSION, Instance, canonical_json, instance_digest, instance_to_dict
from .errors import AnisotropicError, PreconditionError, SearchTruncated, ZeroFormError
from .heights import form_height, homogeneous_height, inhomogeneous_height
from .multi import solve_multi
from .oracle import find_witness, minimal_solution
from .single import DEFAULT_WITNESS_CAP, _check_witness, binary_zeros, solve_single
from .zeros import DEFAULT_MAX_POINTS, search_zero

EXIT_SOLVED = 0
EXIT_ERROR = 1
EXIT_UNKNOWN = 2
EXIT_UNSATISFIABLE = 3

EXIT_CODES = {"solved": EXIT_SOLVED, "unknown": EXIT_UNKNOWN, "unsatisfiable": EXIT_UNSATISFIABLE}

DIGITS = 40


@dataclass(frozen=True)
class SolveOptions:
    cap: int = DEFAULT_WITNESS_CAP
    oracle: bool = True
    max_points: Optional[int] = DEFAULT_MAX_POINTS
    prec: int = DEFAULT_PREC


def decimal_bound(value: Fraction, up: bool, digits: int = DIGITS) -> str:
    """Scientific-notation string with ``digits`` significant digits, rounded outward."""
    value = Fraction(value)
    if value == 0:
        return "0"
    sign = "-" if value < 0 else ""
    v = abs(value)
    if value < 0:
        up = not up
    e = len(str(v.numerator // v.denominator)) - 1 if v >= 1 else -len(str(v.denominator // v.numerator))
    # make e exact: 10^e <= v < 10^(e+1)
    while Fraction(10) ** e > v:
        e -= 1
    while Fraction(10) ** (e + 1) <= v:
        e += 1
    scaled = v * Fraction(10) ** (digits - 1 - e)
    m = math.ceil(scaled) if up else math.floor(scaled)
    if m >= 10 ** digits:
        m //= 10
        e += 1
    s = str(m)
    return f"{sign}{s[0]}.{s[1:]}e{e:+d}"


def _bound_entry(b: BoundValue, h: int) -> dict:
    return {"lo": decimal_bound(b.lo, up=False), "hi": decimal_bound(b.hi, up=True),
            "prec": b.prec, "pass": b.check(h)}


def _strs(v):
    return [format_rational(c) for c in v]


def _finish(doc: dict, t0: float) -> dict:
    doc["wall_time"] = f"{time.perf_counter() - t0:.6f}"
    doc["digest"] = hashlib.sha256(canonical_json(doc)).hexdigest()
    return doc


def _skeleton(inst: Instance, status: str) -> dict:
    idoc = instance_to_dict(inst)
    return {
        "format": FORMAT_VERSION,
        "kind": "certificate",
        "label": inst.label,
        "status": status,
        "instance": idoc,
        "instance_sha256": instance_digest(idoc),
    }


def _validate(inst: Instance):
    F, Ls = inst.quadratic, list(inst.linear)
    if not Ls:
        raise PreconditionError("at least one linear form is required")
    if F.is_zero():
        raise ZeroFormError("quadratic form is identically zero")
    for k, L in enumerate(Ls):
        if L.is_zero():
            raise ZeroFormError(f"linear form {k} is identically zero")


def _unsat_reason(inst: Instance, opts: SolveOptions, searched: bool) -> Optional[dict]:
    F0, Ls = inst.quadratic.primitive(), list(inst.linear)
    if inst.num_vars == 2:
        try:
            zeros = binary_zeros(F0)
        except AnisotropicError:
            return {"kind": "binary", "zeros": []}
        if all(any(L(z) == 0 for L in Ls) for z in zeros):
            return {"kind": "binary", "zeros": [_strs(z) for z in zeros]}
        return None
    if not searched:
        return None
    report = evaluate_bounds(F0, Ls, opts.prec)
    name, best = min(report.named().items(), key=lambda kv: kv[1].hi)
    radius = math.floor(best.hi)
    if radius <= opts.cap:
        return {"kind": "exhausted", "radius": opts.cap, "bound": name}
    res = search_zero(F0, opts.cap, opts.max_points)
    if res.status == "anisotropic":
        return {"kind": "anisotropic", "radius": res.radius}
    return None


def run_solve(inst: Instance, options: Optional[SolveOptions] = None) -> dict:
    """Solve ``inst`` and return the certificate document (a JSON-ready dict)."""
    opts = options or SolveOptions()
    t0 = time.perf_counter()
    _validate(inst)
    F, Ls = inst.quadratic, list(inst.linear)
    F0 = F.primitive()

    source = "instance"
    t = None
    if inst.witness is not None:
        t = _check_witness(F0, Ls, inst.witness)
    elif inst.num_vars == 2:
        if _unsat_reason(inst, opts, False) is None:
            t = next(z for z in binary_zeros(F0) if all(L(z) != 0 for L in Ls))
            source = "binary"
    elif opts.oracle:
        try:
            t = find_witness(F0, Ls, opts.cap, opts.max_points)
        except SearchTruncated:
            doc = _skeleton(inst, "unknown")
            doc["reason"] = f"witness search stopped after {opts.max_points} points"
            return _finish(doc, t0)
        source = "oracle"

    if t is None:
        searched = opts.oracle and inst.num_vars > 2
        reason = _unsat_reason(inst, opts, searched)
        if reason is not None:
            doc = _skeleton(inst, "unsatisfiable")
            doc["reason"] = reason
        else:
            doc = _skeleton(inst, "unknown")
            doc["reason"] = (f"no witness within sup-norm {opts.cap}" if searched
                             else "no witness given and the oracle is disabled")
        return _finish(doc, t0)

    if len(Ls) == 1:
        sol = solve_single(F, Ls[0], witness=t)
        u, solver, trace = sol.point, "single", sol.trace()
    else:
        msol = solve_multi(F, Ls, witness=t)
        u, solver = msol.point, "multi"
        trace = {"order": msol.order, "levels": msol.trace()}

    fz = F(u) == 0
    lnz = [L(u) != 0 for L in Ls]
    if not (fz and all(lnz)):
        raise AssertionError("constructed point failed exact verification")
    H_u, h_u = homogeneous_height(u), inhomogeneous_height(u)
    report = evaluate_bounds(F, Ls, opts.prec)

    oracle = {"cap": None, "min": None}
    if opts.oracle:
        if source == "oracle":
            oracle = {"cap": opts.cap, "min": homogeneous_height(t)}
        else:
            cap = homogeneous_height(t)
            found = minimal_solution(F0, Ls, cap)
            oracle = {"cap": cap, "min": found[1]}

    doc = _skeleton(inst, "solved")
    doc.update({
        "N": F.dim - 1,
        "M": len(Ls),
        "solver": solver,
        "witness": _strs(t),
        "witness_source": source,
        "point": _strs(u),
        "primitive": [str(c) for c in primitive_rep(u)],
        "checks": {"F(u)=0": fz, "L(u)!=0": lnz},
        "heights": {
            "H(u)": str(H_u),
            "h(u)": str(h_u),
            "H(F)": str(form_height(F)),
            "H(L)": [str(form_height(L)) for L in Ls],
        },
        "bounds": {name: _bound_entry(b, h_u) for name, b in report.named().items()},
        "M_values": [{"lo": decimal_bound(m.lo, up=False), "hi": decimal_bound(m.hi, up=True), "source": s}
                     for m, s in zip(report.M_values, report.M_sources)],
        "star_order": report.star_order,
        "oracle": oracle,
        "trace": trace,
    })
    return _finish(doc, t0)


def exit_code(cert: dict) -> int:
    return EXIT_CODES[cert["status"]]
