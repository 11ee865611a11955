"""End-to-end acceptance checks, one test per criterion.

Each test records a single ``criterion N [PASS|FAIL]`` line through the
``report_acceptance`` fixture; the lines are repeated in the terminal
summary.
"""

import itertools
import math
import time
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from mutations import mutations
from oracles import ternary_isotropic
from smallzeros.arith import LinearForm, QuadraticForm, primitive_rep
from smallzeros.batch import generate_instance
from smallzeros.certify import run_solve
from smallzeros.constants import a_constant, b_constant, evaluate_bounds, single_bound
from smallzeros.heights import form_height, homogeneous_height, inhomogeneous_height
from smallzeros.lattice import scan
from smallzeros.multi import solve_multi
from smallzeros.nonvanishing import Polynomial, box_radius, nonvanishing_point_linear, nonvanishing_point_poly
from smallzeros.oracle import find_nonsingular_zero, minimal_solution
from smallzeros.single import reflect, solve_single
from smallzeros.verify import verify_certificate
from smallzeros.zeros import is_singular_point, nonsingular_small_zero, small_zero

pytestmark = pytest.mark.acceptance


def test_criterion_1_single_form_bound(report_acceptance):
    t0 = time.perf_counter()
    failures, paths = [], Counter()
    for i in range(500):
        N = 1 + i % 3
        inst, _ = generate_instance(1001, i, N, 1, 5)
        F, L = inst.quadratic, inst.linear[0]
        sol = solve_single(F, L, inst.witness)
        u = sol.point
        paths[sol.path.value] += 1
        ok = F(u) == 0 and L(u) != 0
        ok = ok and single_bound(N, form_height(F), form_height(L)).check(inhomogeneous_height(u)) is True
        if not ok:
            failures.append(inst.label)
    elapsed = time.perf_counter() - t0
    passed = not failures and elapsed < 120
    report_acceptance(1, "single-form bound on 500 instances", passed,
                      f"{500 - len(failures)}/500 within bound, {elapsed:.1f}s, paths {dict(paths)}")
    assert not failures, failures[:10]
    assert elapsed < 120


def test_criterion_2_multi_form_bounds(report_acceptance):
    t0 = time.perf_counter()
    failures, cases = [], Counter()
    for i in range(500):
        N, M = 1 + i % 3, 2 + (i // 3) % 2
        inst, _ = generate_instance(2002, i, N, M, 5)
        F, Ls = inst.quadratic, list(inst.linear)
        sol = solve_multi(F, Ls, inst.witness)
        u = sol.point
        for lv in sol.levels:
            cases[lv.case.value + ("*" if lv.alt_w else "")] += 1
        h = inhomogeneous_height(u)
        rep = evaluate_bounds(F, Ls)
        ok = F(u) == 0 and all(L(u) != 0 for L in Ls)
        ok = ok and all(b.check(h) is True for b in (rep.bound_13, rep.bound_14, rep.bound_15, rep.bound_star))
        if not ok:
            failures.append(inst.label)
    elapsed = time.perf_counter() - t0
    passed = not failures and elapsed < 300
    report_acceptance(2, "multi-form bounds on 500 instances", passed,
                      f"{500 - len(failures)}/500 within all four bounds, {elapsed:.1f}s, cases {dict(cases)}")
    assert not failures, failures[:10]
    assert elapsed < 300


_MONOMIALS = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)]


def _ternary_family(R=3):
    rows = np.array(list(itertools.product(range(-R, R + 1), repeat=6)), dtype=np.int64)
    return rows[np.abs(rows).max(axis=1) > 0]


def _first_zero_heights(C: np.ndarray, limits: np.ndarray, block: int = 4096) -> np.ndarray:
    """Sup-norm of the first primitive zero of each form (0 if none up to its limit)."""
    out = np.zeros(len(C), dtype=np.int64)
    R = int(limits.max())
    for start in range(0, len(C), block):
        idx = np.arange(start, min(start + block, len(C)))
        for r, chunk in scan(3, R):
            live = idx[(out[idx] == 0) & (limits[idx] >= r)]
            if not len(live):
                break
            mono = np.stack([chunk[:, i] * chunk[:, j] * (1 if i == j else 2) for i, j in _MONOMIALS], axis=1)
            hit = (C[live] @ mono.T) == 0
            found = hit.any(axis=1)
            out[live[found]] = r
    return out


def test_criterion_3_ternary_zero_bound(report_acceptance):
    t0 = time.perf_counter()
    fam = _ternary_family()
    A = [[[r[0], r[3], r[4]], [r[3], r[1], r[5]], [r[4], r[5], r[2]]] for r in fam.tolist()]
    iso = np.array([ternary_isotropic(a) for a in A])
    heights = np.array([max(abs(c) for c in r) // math.gcd(*r) for r in fam.tolist()], dtype=np.int64)
    a2 = a_constant(2)
    limits = np.array([math.floor(a2.hi * h) for h in heights], dtype=np.int64)

    C = fam[iso]
    found = _first_zero_heights(C, limits[iso])
    missing = int((found == 0).sum())
    # exact comparison against the certified lower end of the bound
    violations = sum(1 for H, hF in zip(found.tolist(), heights[iso].tolist()) if H and not H <= a2.lo * hF)
    ratio = max(Fraction(H, hF) for H, hF in zip(found.tolist(), heights[iso].tolist()) if H)

    # the local-global decision agrees with the search on the anisotropic side
    aniso = fam[~iso]
    stray = int((_first_zero_heights(aniso, np.full(len(aniso), 8)) > 0).sum())

    # library agreement on a sample
    rng = np.random.default_rng(3)
    sample = rng.choice(len(C), size=300, replace=False)
    disagree = 0
    for k in sample:
        r = C[k].tolist()
        F = QuadraticForm(((r[0], r[3], r[4]), (r[3], r[1], r[5]), (r[4], r[5], r[2])))
        z = small_zero(F)
        m = minimal_solution(F, [], int(found[k]))
        if z is None or m is None or homogeneous_height(z) != found[k] or m[0] != z:
            disagree += 1

    elapsed = time.perf_counter() - t0
    passed = missing == 0 and violations == 0 and stray == 0 and disagree == 0
    report_acceptance(3, "ternary forms, entries in [-3,3]: minimal zero within A(2) H(F)", passed,
                      f"{len(C)} isotropic of {len(fam)}, {missing} missing, {violations} over bound, "
                      f"max H/H(F) = {ratio} (bound {float(a2.hi):.3f}), {stray} stray zeros on anisotropic side, "
                      f"{disagree}/300 library disagreements, {elapsed:.1f}s")
    assert missing == 0 and violations == 0
    assert stray == 0 and disagree == 0


def _affine_classes(N, R=2):
    """Nonconstant affine forms a.X + b up to a nonzero scalar, as (a, b)."""
    seen = set()
    for v in itertools.product(range(-R, R + 1), repeat=N + 1):
        if any(v[:N]):
            p = primitive_rep(v)
            lead = next(c for c in p if c)
            seen.add(tuple(int(c) * (1 if lead > 0 else -1) for c in p))
    return sorted(seen)


def _box_order(N, R):
    pts = [(0,) * N]
    for _, chunk in scan(N, R, canonical=False, primitive=False):
        pts.extend(tuple(int(c) for c in row) for row in chunk)
    return np.array(pts, dtype=np.int64)


def _first_hits(forms, box, M):
    """Index in ``box`` of the first point where a product of ``M`` forms is nonzero, for every multiset."""
    N = box.shape[1]
    coeffs = np.array([f[:N] for f in forms], dtype=np.int64)
    consts = np.array([f[N] for f in forms], dtype=np.int64)
    nz = (box @ coeffs.T + consts) != 0  # points x forms
    bits = np.zeros(len(forms), dtype=object)
    for j in range(len(forms)):
        bits[j] = int("".join("1" if b else "0" for b in nz[::-1, j]), 2)
    bits = [int(b) for b in bits]
    out = []
    for combo in itertools.combinations_with_replacement(range(len(forms)), M):
        m = bits[combo[0]]
        for c in combo[1:]:
            m &= bits[c]
        out.append(((m & -m).bit_length() - 1) if m else -1)
    return out, list(itertools.combinations_with_replacement(range(len(forms)), M))


def test_criterion_4_box_bound(report_acceptance):
    t0 = time.perf_counter()
    total, over, checked, disagree = 0, 0, 0, 0
    rng = np.random.default_rng(4)
    for N in (1, 2):
        forms = _affine_classes(N)
        box = _box_order(N, box_radius(5))
        norms = np.abs(box).max(axis=1)
        for M in range(1, 6):
            hits, combos = _first_hits(forms, box, M)
            B = box_radius(M)
            for h in hits:
                total += 1
                if h < 0 or norms[h] > B:
                    over += 1
            # the library scan must land on the same point
            picks = range(len(combos)) if len(combos) <= 3000 else rng.choice(len(combos), 3000, replace=False)
            for k in picks:
                U = Polynomial.product_of_affine([(forms[c][:N], forms[c][N]) for c in combos[k]])
                x = nonvanishing_point_poly(U)
                checked += 1
                if U(x) == 0 or max(map(abs, x), default=0) > B or tuple(box[hits[k]]) != x:
                    disagree += 1
    # homogeneous linear forms through the solver's entry point (one more variable)
    lin_total, lin_over = 0, 0
    for n in (2, 3):
        qs = sorted({tuple(int(c) for c in primitive_rep(v)) for v in itertools.product(range(-2, 3), repeat=n)
                     if any(v) and next(c for c in v if c) > 0})
        for M in range(1, 4 if n == 3 else 6):
            for combo in itertools.combinations_with_replacement(qs, M):
                Ls = [LinearForm(q) for q in combo]
                w = nonvanishing_point_linear(Ls)
                lin_total += 1
                if any(L(w) == 0 for L in Ls) or 2 * inhomogeneous_height(w) > M + 2:
                    lin_over += 1
    # the extremal family: all integers in [-k, k] are roots
    attained = []
    for M in (1, 3, 5):
        k = M // 2
        U = Polynomial.product_of_affine([((1,), -j) for j in range(-k, k + 1)])
        attained.append(abs(nonvanishing_point_poly(U)[0]) == k + 1 == box_radius(M))
    elapsed = time.perf_counter() - t0
    passed = over == 0 and disagree == 0 and lin_over == 0 and all(attained)
    report_acceptance(4, "nonvanishing point within floor(M/2)+1", passed,
                      f"{total} products checked exhaustively, {over} over bound, {checked} library calls with "
                      f"{disagree} disagreements, {lin_total} linear-form sets with {lin_over} over bound, "
                      f"extremal family attains the bound for M=1,3,5: {all(attained)}, {elapsed:.1f}s")
    assert over == 0 and disagree == 0 and lin_over == 0 and all(attained)


def _rand_rational_vec(rng, n, R, D):
    return tuple(Fraction(int(a), int(b)) for a, b in zip(rng.integers(-R, R + 1, n), rng.integers(1, D + 1, n)))


def test_criterion_5_reflection_and_sum_heights(report_acceptance):
    rng = np.random.default_rng(55)
    lemma_bad = lemma_done = 0
    while lemma_done < 1000:
        n = int(rng.integers(2, 5))
        A = np.triu(rng.integers(-7, 8, (n, n)))
        A = A + np.triu(A, 1).T
        if not A.any():
            continue
        F = QuadraticForm(tuple(tuple(int(c) for c in row) for row in A)).primitive()
        w = _rand_rational_vec(rng, n, 9, 4)
        t = _rand_rational_vec(rng, n, 5, 3)
        u = reflect(F, t, w)
        bound = 3 * n ** 2 * form_height(F) * inhomogeneous_height(w) * inhomogeneous_height(t) ** 2
        lemma_bad += inhomogeneous_height(u) > bound
        lemma_done += 1
    sum_bad = 0
    for _ in range(1000):
        n = int(rng.integers(1, 5))
        x, y = _rand_rational_vec(rng, n, 30, 12), _rand_rational_vec(rng, n, 30, 12)
        a, b = int(rng.integers(1, 11)), int(rng.integers(1, 11))
        sign = 1 if rng.random() < 0.5 else -1
        z = tuple(a * p + sign * b * q for p, q in zip(x, y))
        sum_bad += inhomogeneous_height(z) > (a + b) * inhomogeneous_height(x) * inhomogeneous_height(y)
    passed = lemma_bad == 0 and sum_bad == 0
    report_acceptance(5, "reflection height bound and sum property", passed,
                      f"{lemma_bad}/1000 reflection violations, {sum_bad}/1000 sum violations")
    assert passed


def _degenerate_form(rng, n, R):
    """Form with a rational radical, so its first zero is often singular."""
    core = np.triu(rng.integers(-R, R + 1, (n - 1, n - 1)))
    core = core + np.triu(core, 1).T
    P = np.eye(n, dtype=np.int64)
    i, j = rng.choice(n, 2, replace=False)
    P[i, j] = int(rng.integers(-1, 2))
    A = np.zeros((n, n), dtype=np.int64)
    A[: n - 1, : n - 1] = core
    B = P.T @ A @ P
    return QuadraticForm(tuple(tuple(int(c) for c in row) for row in B))


def test_criterion_6_nonsingular_zero(report_acceptance):
    rng = np.random.default_rng(66)
    done, bad, reduced, attempts = 0, [], 0, 0
    while done < 200:
        attempts += 1
        planted = done % 2 == 1
        N = 2 + (done // 2) % 2 if planted else 1 + (done // 2) % 3
        if planted:
            F = _degenerate_form(rng, N + 1, 5)
        else:
            inst, _ = generate_instance(606, attempts, N, 1, 5)
            F = inst.quadratic
        if F.is_zero():
            continue
        cap = 4
        if find_nonsingular_zero(F.primitive(), cap) is None:
            continue
        first = small_zero(F.primitive(), cap=cap)
        s = nonsingular_small_zero(F, witness_cap=cap)
        if first is not None and is_singular_point(F, first):
            reduced += 1
        A = a_constant(N)
        c = max(Fraction(3), A.lo)
        H = Fraction(homogeneous_height(s))
        ok = F(s) == 0 and not is_singular_point(F, s) and H ** 2 <= c ** 2 * Fraction(form_height(F)) ** N
        if not ok:
            bad.append(str(F))
        done += 1
    passed = not bad
    report_acceptance(6, "nonsingular zero within max(3, A(N)) H(F)^(N/2)", passed,
                      f"{200 - len(bad)}/200 pass, {reduced} needed the singular reduction")
    assert not bad, bad[:5]


def test_criterion_7_constants(report_acceptance):
    a1 = a_constant(1)
    ok = a1.lo == a1.hi == 4
    worst = Fraction(0)
    for N in range(1, 9):
        b, a = b_constant(N, 1), a_constant(N)
        target_lo, target_hi = 18 * (N + 1) ** 2 * a.lo, 18 * (N + 1) ** 2 * a.hi
        ok = ok and b.lo <= target_hi and target_lo <= b.hi
        width = max(b.relative_width(), a.relative_width(), (max(b.hi, target_hi) - min(b.lo, target_lo)) / b.lo)
        worst = max(worst, width)
        ok = ok and b.prec >= 128
    ok = ok and worst < Fraction(1, 2 ** 64)
    report_acceptance(7, "A(1) = 4 and B(N,1) = 18 (N+1)^2 A(N)", ok,
                      f"A(1) enclosure [{a1.lo}, {a1.hi}], worst relative width {float(worst):.3e} (< 2^-64)")
    assert ok


def test_criterion_8_oracle_and_certificates(report_acceptance):
    certs = []
    for i in range(150):
        N, M = 1 + i % 3, 1 + (i // 3) % 3
        inst, _ = generate_instance(808, i, N, M, 5)
        certs.append(run_solve(inst))
    dominated = sum(1 for c in certs if c["status"] == "solved"
                    and c["oracle"]["min"] is not None and c["oracle"]["min"] <= int(c["heights"]["h(u)"]))
    solved = sum(c["status"] == "solved" for c in certs)
    accepted = sum(verify_certificate(c).ok for c in certs)
    corpus = rejected = 0
    for c in certs[::5]:
        for _, bad in mutations(c):
            corpus += 1
            rejected += not verify_certificate(bad).ok
    passed = dominated == solved == len(certs) and accepted == len(certs) and rejected == corpus
    report_acceptance(8, "oracle dominance and certificate integrity", passed,
                      f"oracle_min <= h(u) on {dominated}/{solved} solved, verifier accepted {accepted}/{len(certs)}, "
                      f"rejected {rejected}/{corpus} single-field mutations")
    assert passed
