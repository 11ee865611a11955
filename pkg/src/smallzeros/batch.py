"""Seeded random instances and the batch experiment driver.

Instance ``i`` of a batch is generated from ``numpy.random.default_rng([seed, i])``
alone, so a batch is reproducible from its parameters, and so is any
single instance. Three families are mixed:

``random``
    a random symmetric integer matrix, half the time with one diagonal
    entry adjusted so that a small vector becomes a zero;
``planted``
    like ``random`` but the linear forms are made to vanish at some of the
    smallest zeros of ``F``, which pushes the solver off its early exits;
``ruled``
    ``F = l1 l2 + l3 l4`` for small linear forms, which has lines (or whole
    planes) of zeros and reaches the rarer merge cases.

Each instance carries a witness found by the oracle within a small radius.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .arith import LinearForm, QuadraticForm, primitive_rep
from .certify import SolveOptions, run_solve
from .documents import Instance, make_instance
from .lattice import quadratic_values, scan
from .oracle import find_witness

FAMILIES = ("random", "planted", "ruled")
WITNESS_CAP = 6
MAX_ATTEMPTS = 400

CSV_COLUMNS = [
    "label", "family", "N", "M", "status", "solver", "path", "H(u)", "h(u)", "oracle_min",
    "bound_13", "bound_14", "bound_15", "bound_216", "bound_star", "all_pass", "case_trace",
]


def nullspace(rows: Sequence[Sequence[int]], n: int) -> List[List[Fraction]]:
    """Basis of ``{q : r . q = 0 for every row r}`` by exact row reduction."""
    M = [[Fraction(c) for c in r] for r in rows]
    pivots = []
    r = 0
    for col in range(n):
        pr = next((i for i in range(r, len(M)) if M[i][col] != 0), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        inv = 1 / M[r][col]
        M[r] = [c * inv for c in M[r]]
        for i in range(len(M)):
            if i != r and M[i][col] != 0:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -M[i][f]
        basis.append(v)
    return basis


def _int(rng, lo, hi, size=None):
    return rng.integers(lo, hi + 1, size=size)


def _random_matrix(rng, n: int, R: int) -> Optional[QuadraticForm]:
    A = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i, n):
            A[i, j] = A[j, i] = _int(rng, -R, R)
    if rng.random() < 0.5:
        z = _int(rng, -2, 2, n)
        if z.any():
            k = int(np.flatnonzero(z)[0])
            rest = int(z @ A @ z) - int(A[k, k]) * int(z[k]) ** 2
            a = Fraction(-rest, int(z[k]) ** 2)
            if a.denominator == 1 and abs(a) <= R:
                A[k, k] = int(a)
    if not A.any():
        return None
    return QuadraticForm(tuple(tuple(int(c) for c in row) for row in A))


def _ruled_matrix(rng, n: int, R: int) -> Optional[QuadraticForm]:
    ls = [_int(rng, -1, 1, n) for _ in range(4)]
    A = np.outer(ls[0], ls[1]) + np.outer(ls[1], ls[0]) + np.outer(ls[2], ls[3]) + np.outer(ls[3], ls[2])
    if not A.any():
        return None
    F = QuadraticForm(tuple(tuple(int(c) for c in row) for row in A)).primitive()
    if max(abs(c) for c in F.coefficient_vector()) > R:
        return None
    return F


def _small_zeros(F: QuadraticForm, radius: int = 2) -> List[Tuple[int, ...]]:
    A = F.integer_matrix()
    out = []
    for _, chunk in scan(F.dim, radius):
        out.extend(tuple(int(c) for c in row) for row in chunk[quadratic_values(A, chunk) == 0])
    return out


def _linear_form(rng, n: int, R: int, through: Sequence[Sequence[int]]) -> Optional[LinearForm]:
    if not through:
        q = _int(rng, -R, R, n)
        return LinearForm(tuple(int(c) for c in q)) if q.any() else None
    basis = nullspace(through, n)
    if not basis:
        return None
    coeffs = _int(rng, -2, 2, len(basis))
    v = [sum((int(c) * b[j] for c, b in zip(coeffs, basis)), Fraction(0)) for j in range(n)]
    if not any(v):
        return None
    q = primitive_rep(v)
    if max(abs(c) for c in q) > R:
        return None
    return LinearForm(q)


def generate_instance(seed: int, index: int, N: int, M: int, coeff_range: int = 5,
                      family: Optional[str] = None, witness_cap: int = WITNESS_CAP) -> Tuple[Instance, str]:
    """Instance number ``index`` of the batch ``seed``; returns it with its family."""
    rng = np.random.default_rng([seed, index])
    n, R = N + 1, coeff_range
    fam = family or FAMILIES[int(rng.integers(len(FAMILIES)))]
    for _ in range(MAX_ATTEMPTS):
        F = _ruled_matrix(rng, n, R) if fam == "ruled" else _random_matrix(rng, n, R)
        if F is None:
            continue
        zeros = _small_zeros(F) if fam != "random" else []
        if fam != "random" and not zeros:
            continue
        Ls = []
        for _ in range(M):
            k = int(rng.integers(0, min(2, len(zeros)) + 1)) if zeros else 0
            pick = [zeros[int(i)] for i in rng.choice(len(zeros), size=k, replace=False)] if k else []
            L = _linear_form(rng, n, R, pick) or _linear_form(rng, n, R, [])
            if L is None:
                break
            Ls.append(L)
        if len(Ls) != M:
            continue
        t = find_witness(F, Ls, witness_cap)
        if t is None:
            continue
        return make_instance(F, Ls, t, f"s{seed}-i{index}-{fam}"), fam
    raise RuntimeError(f"could not generate instance {index} of seed {seed} in {MAX_ATTEMPTS} attempts")


def case_trace(cert: dict) -> str:
    trace = cert.get("trace")
    if trace is None:
        return ""
    if cert.get("solver") == "single":
        return _single_chain(trace)
    parts = []
    for lv in trace["levels"]:
        s = lv["case"]
        if "single" in lv:
            s += "(" + _single_chain(lv["single"]) + ")"
        if "beta" in lv:
            s += f"[{'+' if lv['sign'] > 0 else '-'}{lv['beta']}]"
        if lv.get("alt_w"):
            s += "*"
        parts.append(s)
    return ";".join(parts)


def _single_chain(trace: dict) -> str:
    out = [trace["path"]]
    while "sub" in trace:
        trace = trace["sub"]
        out.append(trace["path"])
    return ">".join(out)


def csv_row(cert: dict, family: str = "") -> dict:
    row = {c: "" for c in CSV_COLUMNS}
    row.update(label=cert["label"], family=family, status=cert["status"])
    inst = cert["instance"]
    row["N"] = inst["num_vars"] - 1
    row["M"] = len(inst["linear"])
    if cert["status"] == "solved":
        row["solver"] = cert["solver"]
        tr = cert["trace"]
        row["path"] = tr["path"] if cert["solver"] == "single" else tr["levels"][-1]["case"]
        row["H(u)"] = cert["heights"]["H(u)"]
        row["h(u)"] = cert["heights"]["h(u)"]
        om = cert["oracle"]["min"]
        row["oracle_min"] = "" if om is None else om
        for name, b in cert["bounds"].items():
            if name in row:
                row[name] = b["hi"]
        row["all_pass"] = all(b["pass"] is True for b in cert["bounds"].values())
        row["case_trace"] = case_trace(cert)
    return row


def _run_one(args) -> Tuple[dict, dict]:
    seed, i, N, M, R, opts = args
    inst, fam = generate_instance(seed, i, N, M, R)
    cert = run_solve(inst, opts)
    return csv_row(cert, fam), cert


def run_batch(seed: int, count: int, N: int, M: int, coeff_range: int,
              jobs: int = 1, options: Optional[SolveOptions] = None) -> Iterable[Tuple[dict, dict]]:
    """Yield ``(csv_row, certificate)`` in index order."""
    opts = options or SolveOptions()
    tasks = [(seed, i, N, M, coeff_range, opts) for i in range(count)]
    if jobs <= 1:
        yield from map(_run_one, tasks)
        return
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        yield from ex.map(_run_one, tasks, chunksize=max(1, count // (4 * jobs)))


def write_csv(rows: Iterable[dict], out) -> None:
    w = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)


def batch_to_files(seed: int, count: int, N: int, M: int, coeff_range: int, out_path: str,
                   jobs: int = 1, cert_dir: Optional[str] = None,
                   options: Optional[SolveOptions] = None) -> List[dict]:
    rows = []
    if cert_dir:
        os.makedirs(cert_dir, exist_ok=True)
    for row, cert in run_batch(seed, count, N, M, coeff_range, jobs, options):
        rows.append(row)
        if cert_dir:
            with open(os.path.join(cert_dir, f"{cert['label']}.json"), "w") as fh:
                json.dump(cert, fh, indent=1)
    buf = io.StringIO()
    write_csv(rows, buf)
    with open(out_path, "w", newline="") as fh:
        fh.write(buf.getvalue())
    return rows
