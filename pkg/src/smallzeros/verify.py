"""Independent checker for certificate documents.

Nothing here imports the solver's arithmetic, height or bound code. Values
are recomputed from the embedded instance with plain ``Fraction`` loops,
``math.gcd``/``math.lcm`` and mpmath floating point using the Gamma function
directly, so a bug in the solving path cannot vouch for itself.

Checks run in a fixed order and the first failure is reported:
instance hash, exact zero/nonvanishing claims, primitive representative,
heights, bounds, oracle minimum, trace consistency, then the digest over
the whole document.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

import mpmath
import numpy as np

_VERIFY_PREC = 320
_MAX_RESCAN_POINTS = 2_000_000
_WIDTH_TOL = Fraction(1, 10 ** 30)


@dataclass
class VerifyResult:
    ok: bool
    message: str

    def __bool__(self):
        return self.ok


class _Reject(Exception):
    pass


def _q(s) -> Fraction:
    if isinstance(s, bool):
        raise _Reject(f"expected a rational, got {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str) or not s.strip():
        raise _Reject(f"expected a rational string, got {s!r}")
    num, sep, den = s.strip().partition("/")
    try:
        p, d = int(num), (int(den) if sep else 1)
    except ValueError:
        raise _Reject(f"malformed rational {s!r}") from None
    if d == 0:
        raise _Reject(f"zero denominator in {s!r}")
    return Fraction(p, d)


def _canon(doc) -> bytes:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()


def _normal_instance(doc) -> dict:
    """Spelling-independent view of an instance: defaults filled, rationals reduced."""
    if not isinstance(doc, dict):
        raise _Reject("instance document must be an object")

    def row(r):
        return [str(_q(c)) for c in r]

    quad = doc.get("quadratic", [])
    w = doc.get("witness")
    return {
        "format": doc.get("format", 1),
        "label": doc.get("label", ""),
        "num_vars": doc.get("num_vars", len(quad)),
        "quadratic": [row(r) for r in quad],
        "linear": [row(r) for r in doc.get("linear", [])],
        "witness": None if w is None else row(w),
    }


def _quad(A, x, y=None):
    y = x if y is None else y
    return sum((A[i][j] * x[i] * y[j] for i in range(len(x)) for j in range(len(x))), Fraction(0))


def _lin(q, x):
    return sum((a * b for a, b in zip(q, x)), Fraction(0))


def _int_rep(x: Sequence[Fraction]) -> List[int]:
    den = 1
    for c in x:
        den = math.lcm(den, c.denominator)
    ints = [int(c * den) for c in x]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    return [c // g for c in ints]


def _H(x) -> int:
    return max(abs(c) for c in _int_rep(x))


def _h(x) -> int:
    den = 1
    for c in x:
        den = math.lcm(den, c.denominator)
    return max([den] + [abs(int(c * den)) for c in x])


def _form_H(values) -> int:
    return _H([Fraction(v) for v in values])


def _field_constant(N: int):
    # 2^{5N/2} (N+1)^{N/2} pi^{-N/2} Gamma(N/2 + 1)
    N = mpmath.mpf(N)
    return mpmath.power(2, 5 * N / 2) * mpmath.power(N + 1, N / 2) * mpmath.power(mpmath.pi, -N / 2) * mpmath.gamma(N / 2 + 1)


def recompute_bounds(N: int, hF: int, hLs: Sequence[int]) -> dict:
    """All bound values as mpmath floats at high precision."""
    M = len(hLs)
    with mpmath.workprec(_VERIFY_PREC):
        A = _field_constant(N)
        B = (mpmath.mpf(N + 1) ** 2 * A * (486 * mpmath.mpf(N + 1) ** 6 * A ** 2) ** (M - 1)
             * math.factorial(M + 2) * mpmath.mpf(math.factorial(M + 3)) ** 2 / 192)
        F = mpmath.mpf(hF)
        ms = [min(mpmath.sqrt(F), mpmath.mpf(h) ** N) for h in hLs]
        first = max(range(M), key=lambda i: (min(Fraction(hF), Fraction(hLs[i]) ** (2 * N)), -i))
        base = mpmath.mpf(N + 1) / 2 + (M - 1) * (N + 2)
        out = {
            "bound_13": B * F ** (mpmath.mpf(N + 2 * M) / 2 + (M - 1) * (N + 2)),
            "bound_14": B * F ** base * mpmath.fprod(
                mpmath.mpf(h) ** (mpmath.mpf((2 * M - 1) * N) / M) for h in hLs),
            "bound_15": B * F ** (mpmath.mpf(2 * N + 2 * M + 1) / 4 + (M - 1) * (N + 2)) * mpmath.fprod(
                mpmath.mpf(h) ** (mpmath.mpf((2 * M - 1) * N) / (2 * M)) for h in hLs),
            "bound_star": B * F ** base * ms[first] * mpmath.fprod(
                m ** 2 for i, m in enumerate(ms) if i != first),
            "bound_product": B * F ** base * mpmath.fprod(m ** (2 - mpmath.mpf(1) / M) for m in ms),
        }
        if M == 1:
            out["bound_216"] = 18 * mpmath.mpf(N + 1) ** 2 * A * F ** (mpmath.mpf(N + 1) / 2) * ms[0]
        out["_M"] = ms
        out["_first"] = first
    return out


def _mp_to_fraction(x) -> Fraction:
    man, exp = x.man_exp
    return Fraction(int(man)) * Fraction(2) ** int(exp)


def _check_enclosure(name: str, entry: dict, value):
    try:
        lo, hi = Fraction(entry["lo"]), Fraction(entry["hi"])
    except (KeyError, TypeError, ValueError):
        raise _Reject(f"{name}: malformed enclosure") from None
    v = _mp_to_fraction(value)
    # recomputation error is far below 2^-300 relative
    slack = abs(v) / 2 ** 300
    if not (lo <= v + slack and v - slack <= hi):
        raise _Reject(f"{name} mismatch: recomputed {mpmath.nstr(value, 20)} outside [{entry['lo']}, {entry['hi']}]")
    if hi - lo > _WIDTH_TOL * abs(v):
        raise _Reject(f"{name} mismatch: enclosure [{entry['lo']}, {entry['hi']}] is too wide")


def _pass_flag(name: str, entry: dict, h: int):
    lo, hi = Fraction(entry["lo"]), Fraction(entry["hi"])
    expected = True if h <= lo else (False if h > hi else None)
    if entry.get("pass", "missing") != expected:
        raise _Reject(f"{name} pass flag {entry.get('pass')!r} does not match h(u) = {h}")


def _scaled_ints(rows) -> List[List[int]]:
    den = 1
    for row in rows:
        for c in row:
            den = math.lcm(den, c.denominator)
    return [[int(c * den) for c in row] for row in rows]


def _brute_min(A, qs, radius: int) -> Optional[int]:
    """Least sup-norm of a solution with sup-norm <= radius, over the full cube."""
    n = len(A)
    if radius < 1:
        return None
    Ai = np.array(_scaled_ints(A), dtype=object)
    Qi = [np.array(r, dtype=object) for r in _scaled_ints(qs)] if qs else []
    axis = np.arange(-radius, radius + 1)
    X = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1).reshape(-1, n)
    big = max([abs(int(c)) for c in Ai.reshape(-1)] + [1]) * n * n * radius * radius
    if big < 2 ** 62:
        X = X.astype(np.int64)
        Ai = Ai.astype(np.int64)
        Qi = [q.astype(np.int64) for q in Qi]
    else:
        X = X.astype(object)
    ok = ((X @ Ai) * X).sum(axis=1) == 0
    ok &= np.abs(X).max(axis=1) > 0
    for q in Qi:
        ok &= X @ q != 0
    if not ok.any():
        return None
    return int(np.abs(X[ok]).max(axis=1).min())


def _binary_zeros(A) -> Optional[List[List[Fraction]]]:
    a, b, c = A[0][0], A[0][1], A[1][1]
    if a == 0:
        return [[Fraction(1), Fraction(0)], [c, -2 * b]]
    disc = b * b - a * c
    if disc < 0:
        return None
    rn, rd = math.isqrt(disc.numerator), math.isqrt(disc.denominator)
    if rn * rn != disc.numerator or rd * rd != disc.denominator:
        return None
    r = Fraction(rn, rd)
    return [[(-b + r) / a, Fraction(1)], [(-b - r) / a, Fraction(1)]]


def _load_instance(doc: dict):
    if not isinstance(doc, dict):
        raise _Reject("instance missing")
    n = doc.get("num_vars")
    A = [[_q(c) for c in row] for row in doc["quadratic"]]
    if not isinstance(n, int) or len(A) != n or any(len(r) != n for r in A):
        raise _Reject("instance dimensions inconsistent")
    for i in range(n):
        for j in range(n):
            if A[i][j] != A[j][i]:
                raise _Reject(f"instance matrix not symmetric at ({i},{j})")
    qs = [[_q(c) for c in row] for row in doc["linear"]]
    if any(len(q) != n for q in qs):
        raise _Reject("instance linear form has the wrong length")
    return n, A, qs


def _verify_unsat(cert: dict, n: int, A, qs):
    reason = cert.get("reason")
    if not isinstance(reason, dict):
        raise _Reject("unsatisfiable certificate without a reason")
    kind = reason.get("kind")
    if kind == "binary":
        if n != 2:
            raise _Reject("binary reason for a form in more than two variables")
        zeros = _binary_zeros(A)
        if zeros is None:
            return
        for z in zeros:
            if all(_lin(q, z) != 0 for q in qs):
                raise _Reject(f"zero {[str(c) for c in z]} avoids every hyperplane")
        return
    radius = reason.get("radius")
    if not isinstance(radius, int) or radius < 0:
        raise _Reject("unsatisfiable reason lacks a radius")
    if (2 * radius + 1) ** n > _MAX_RESCAN_POINTS:
        raise _Reject(f"radius {radius} in {n} variables is too large to re-check")
    if kind == "exhausted":
        hF = _form_H([c for row in A for c in row])
        hLs = [_form_H(q) for q in qs]
        vals = recompute_bounds(n - 1, hF, hLs)
        name = reason.get("bound")
        if name not in vals or name.startswith("_"):
            raise _Reject(f"unknown bound {name!r}")
        if math.floor(vals[name]) > radius:
            raise _Reject(f"radius {radius} is below {name}")
        if _brute_min(A, qs, radius) is not None:
            raise _Reject("a solution exists inside the claimed empty radius")
        return
    if kind == "anisotropic":
        hF = _form_H([c for row in A for c in row])
        with mpmath.workprec(_VERIFY_PREC):
            need = math.ceil(_field_constant(n - 1) * mpmath.mpf(hF) ** (mpmath.mpf(n - 1) / 2))
        if radius < need:
            raise _Reject(f"anisotropy radius {radius} is below {need}")
        if _brute_min(A, [], radius) is not None:
            raise _Reject("the form has a zero inside the claimed radius")
        return
    raise _Reject(f"unknown unsatisfiability reason {kind!r}")


def _verify_solved(cert: dict, n: int, A, qs):
    u = [_q(c) for c in cert["point"]]
    if len(u) != n:
        raise _Reject("point has the wrong number of coordinates")
    if not any(u):
        raise _Reject("point is zero")
    if _quad(A, u) != 0:
        raise _Reject("F(u) ≠ 0")
    for k, q in enumerate(qs):
        if _lin(q, u) == 0:
            raise _Reject(f"L{k + 1}(u) = 0")
    checks = cert.get("checks", {})
    if checks.get("F(u)=0") is not True or checks.get("L(u)!=0") != [True] * len(qs):
        raise _Reject("recorded exact checks do not match")
    w = cert.get("witness")
    if w is not None:
        t = [_q(c) for c in w]
        if len(t) != n or _quad(A, t) != 0 or any(_lin(q, t) == 0 for q in qs):
            raise _Reject("witness is not a valid witness")
    prim = [int(c) for c in cert["primitive"]]
    if prim != _int_rep(u) and prim != [-c for c in _int_rep(u)]:
        raise _Reject("primitive representative mismatch")
    hF = _form_H([c for row in A for c in row])
    hLs = [_form_H(q) for q in qs]
    H_u, h_u = _H(u), _h(u)
    hs = cert["heights"]
    if hs.get("H(u)") != str(H_u) or hs.get("h(u)") != str(h_u):
        raise _Reject(f"height mismatch: H(u) = {H_u}, h(u) = {h_u}")
    if hs.get("H(F)") != str(hF) or hs.get("H(L)") != [str(h) for h in hLs]:
        raise _Reject("form height mismatch")
    if cert.get("N") != n - 1 or cert.get("M") != len(qs):
        raise _Reject("N or M mismatch")
    vals = recompute_bounds(n - 1, hF, hLs)
    names = sorted(k for k in vals if not k.startswith("_"))
    bounds = cert.get("bounds", {})
    if sorted(bounds) != names:
        raise _Reject(f"bound set mismatch: expected {names}")
    for name in names:
        _check_enclosure(name, bounds[name], vals[name])
        _pass_flag(name, bounds[name], h_u)
    mv = cert.get("M_values", [])
    if len(mv) != len(qs):
        raise _Reject("M_values length mismatch")
    for k, (entry, m) in enumerate(zip(mv, vals["_M"])):
        _check_enclosure(f"M_{k + 1}", entry, m)
        src = "F" if Fraction(hF) <= Fraction(hLs[k]) ** (2 * (n - 1)) else "L"
        if entry.get("source") != src:
            raise _Reject(f"M_{k + 1} source mismatch")
    order = cert.get("star_order")
    if not isinstance(order, list) or sorted(order) != list(range(len(qs))) or order[0] != vals["_first"]:
        raise _Reject("star_order mismatch")
    oracle = cert.get("oracle", {})
    omin = oracle.get("min")
    if omin is not None:
        if not isinstance(omin, int) or omin > h_u or omin > H_u:
            raise _Reject(f"oracle minimum {omin!r} exceeds the height of the constructed point")
        if (2 * omin + 1) ** n <= _MAX_RESCAN_POINTS and _brute_min(A, qs, omin) != omin:
            raise _Reject("oracle minimum does not reproduce")
    trace = cert.get("trace")
    if cert.get("solver") == "multi":
        if not isinstance(trace, dict) or trace.get("levels", [{}])[-1].get("point") != cert["point"]:
            raise _Reject("trace does not end at the certified point")
        if trace.get("order") != order:
            raise _Reject("trace order mismatch")
    elif cert.get("solver") != "single" or len(qs) != 1 or not isinstance(trace, dict):
        raise _Reject("solver field mismatch")


def verify_certificate(cert: dict, instance: Optional[dict] = None) -> VerifyResult:
    """Re-check every claim in ``cert``; ``instance`` optionally supplies the instance document."""
    try:
        if not isinstance(cert, dict) or cert.get("kind") != "certificate" or cert.get("format") != 1:
            raise _Reject("not a format-1 certificate")
        inst = cert.get("instance")
        if instance is not None and _normal_instance(instance) != _normal_instance(inst):
            raise _Reject("certificate was issued for a different instance")
        if hashlib.sha256(_canon(inst)).hexdigest() != cert.get("instance_sha256"):
            raise _Reject("instance hash mismatch")
        if cert.get("label") != inst.get("label"):
            raise _Reject("label mismatch")
        n, A, qs = _load_instance(inst)
        status = cert.get("status")
        if status == "solved":
            _verify_solved(cert, n, A, qs)
        elif status == "unsatisfiable":
            _verify_unsat(cert, n, A, qs)
        elif status != "unknown":
            raise _Reject(f"unknown status {status!r}")
        wall = cert.get("wall_time")
        try:
            if float(wall) < 0:
                raise ValueError
        except (TypeError, ValueError):
            raise _Reject("wall_time malformed") from None
        body = {k: v for k, v in cert.items() if k != "digest"}
        if hashlib.sha256(_canon(body)).hexdigest() != cert.get("digest"):
            raise _Reject("digest mismatch")
    except _Reject as exc:
        return VerifyResult(False, str(exc))
    except (KeyError, TypeError, ValueError, AttributeError, IndexError) as exc:
        return VerifyResult(False, f"malformed certificate: {exc!r}")
    return VerifyResult(True, "ok")
