import csv
import hashlib
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mutations import SEMANTIC_PATHS, mutations, semantic_mutation
from smallzeros.arith import LinearForm, QuadraticForm
from smallzeros.batch import CSV_COLUMNS, batch_to_files, generate_instance, nullspace
from smallzeros.certify import SolveOptions, decimal_bound, exit_code, run_solve
from smallzeros.cli import main
from smallzeros.documents import emit_instance, instance_to_dict, make_instance, parse_instance
from smallzeros.errors import FormatError
from smallzeros.verify import verify_certificate

HYPERBOLA_DOC = {
    "format": 1,
    "label": "hyperbola",
    "num_vars": 2,
    "quadratic": [["1", "0"], ["0", "-1"]],
    "linear": [["1", "1"]],
}


def _write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


class TestParse:
    def test_minimal_document(self):
        inst = parse_instance(json.dumps(HYPERBOLA_DOC))
        assert inst.N == 1 and inst.M == 1 and inst.witness is None
        assert inst.quadratic == QuadraticForm.diagonal(1, -1)

    def test_integers_and_fractions(self):
        doc = dict(HYPERBOLA_DOC, quadratic=[[1, "1/2"], ["1/2", 0]], witness=["1", "0"])
        inst = parse_instance(json.dumps(doc))
        assert inst.quadratic.entries[0][1] == Fraction(1, 2)

    @pytest.mark.parametrize("patch, match", [
        ({"quadratic": [["1/0", "0"], ["0", "1"]]}, "zero denominator"),
        ({"quadratic": [["1", "2"], ["3", "1"]]}, r"\(0,1\).*\(1,0\)"),
        ({"linear": [["1", "1", "1"]]}, "linear"),
        ({"num_vars": 1, "quadratic": [["1"]], "linear": [["1"]]}, "num_vars"),
        ({"quadratic": [["1", "0"]]}, "quadratic"),
        ({"format": 2}, "format"),
        ({"witness": ["1"]}, "witness"),
        ({"quadratic": [["0.5", "0"], ["0", "1"]]}, "rational"),
    ])
    def test_errors(self, patch, match):
        with pytest.raises(FormatError, match=match):
            parse_instance(json.dumps(dict(HYPERBOLA_DOC, **patch)))

    def test_not_json(self):
        with pytest.raises(FormatError):
            parse_instance("{")

    @settings(max_examples=80, deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(1, 3), st.integers(1, 3))
    def test_round_trip(self, seed, N, M):
        inst, _ = generate_instance(seed, 0, N, M, 4)
        again = parse_instance(emit_instance(inst))
        assert again == inst
        assert instance_to_dict(again) == instance_to_dict(inst)


class TestSolve:
    def test_worked_base_case(self):
        cert = run_solve(parse_instance(json.dumps(HYPERBOLA_DOC)))
        assert cert["status"] == "solved" and cert["point"] == ["1", "1"]
        assert all(b["pass"] is True for b in cert["bounds"].values())
        assert cert["witness_source"] == "binary" and exit_code(cert) == 0
        assert verify_certificate(cert).ok

    def test_unknown(self):
        inst = make_instance(QuadraticForm.diagonal(1, 1, -3), [LinearForm((1, 0, 0))])
        cert = run_solve(inst, SolveOptions(cap=3))
        assert cert["status"] == "unknown" and exit_code(cert) == 2
        assert verify_certificate(cert).ok
        off = run_solve(inst, SolveOptions(oracle=False))
        assert off["status"] == "unknown"

    def test_unsatisfiable_binary(self):
        inst = make_instance(QuadraticForm.diagonal(1, -1), [LinearForm((1, 1)), LinearForm((1, -1))])
        cert = run_solve(inst)
        assert cert["status"] == "unsatisfiable" and cert["reason"]["kind"] == "binary"
        assert exit_code(cert) == 3 and verify_certificate(cert).ok

    def test_unsatisfiable_anisotropic(self):
        inst = make_instance(QuadraticForm.diagonal(1, 1, 1), [LinearForm((1, 0, 0))], label="sphere")
        cert = run_solve(inst)
        assert cert["status"] == "unsatisfiable" and cert["reason"]["kind"] == "anisotropic"
        assert verify_certificate(cert).ok

    def test_digest(self):
        cert = run_solve(parse_instance(json.dumps(HYPERBOLA_DOC)))
        body = {k: v for k, v in cert.items() if k != "digest"}
        assert cert["digest"] == hashlib.sha256(
            json.dumps(body, sort_keys=True, separators=(",", ":")).encode()).hexdigest()

    def test_decimal_bound_directed(self):
        x = Fraction(1, 3)
        lo, hi = decimal_bound(x, up=False, digits=5), decimal_bound(x, up=True, digits=5)
        assert Fraction(lo) <= x <= Fraction(hi)
        assert decimal_bound(Fraction(288), up=True) == "2." + "8" + "8" + "0" * 37 + "e+2"


def _certificates():
    out = []
    for seed, N, M in [(3, 1, 1), (3, 2, 1), (4, 2, 2), (4, 3, 3), (5, 2, 3)]:
        for i in range(4):
            inst, _ = generate_instance(seed, i, N, M, 4)
            out.append(run_solve(inst))
    out.append(run_solve(make_instance(QuadraticForm.diagonal(1, 1, 1), [LinearForm((1, 0, 0))])))
    out.append(run_solve(make_instance(QuadraticForm.diagonal(1, -1), [LinearForm((1, 1)), LinearForm((1, -1))])))
    return out


@pytest.fixture(scope="module")
def certificates():
    return _certificates()


class TestVerify:
    def test_accepts_all(self, certificates):
        for cert in certificates:
            assert verify_certificate(cert).ok, cert["label"]

    def test_instance_must_match(self, certificates):
        cert = certificates[0]
        assert verify_certificate(cert, cert["instance"]).ok
        respelled = dict(cert["instance"], quadratic=[[f"{c}/1" if "/" not in c else c for c in r]
                                                      for r in cert["instance"]["quadratic"]])
        assert verify_certificate(cert, respelled).ok
        other = certificates[1]["instance"]
        res = verify_certificate(cert, other)
        assert not res.ok and "different instance" in res.message

    def test_tampered_point(self):
        cert = run_solve(parse_instance(json.dumps(HYPERBOLA_DOC)))
        cert["point"][0] = "2"
        res = verify_certificate(cert)
        assert not res.ok and res.message == "F(u) ≠ 0"

    def test_tampered_bound(self, certificates):
        cert = semantic_mutation(certificates[2], ("bounds", "bound_13", "hi"))
        res = verify_certificate(cert)
        assert not res.ok and "bound_13" in res.message

    def test_mutation_corpus(self, certificates):
        total = 0
        for cert in certificates:
            for where, bad in mutations(cert):
                assert not verify_certificate(bad).ok, (cert["label"], where)
                total += 1
        assert total > 500

    def test_semantic_mutations(self, certificates):
        solved = [c for c in certificates if c["status"] == "solved" and c["M"] >= 2]
        for cert in solved[:3]:
            for path in SEMANTIC_PATHS:
                bad = semantic_mutation(cert, path)
                res = verify_certificate(bad)
                assert not res.ok, path
                assert res.message != "digest mismatch", path


class TestCommandLine:
    def test_solve_and_verify(self, tmp_path, capsys):
        f = _write(tmp_path, "h.json", HYPERBOLA_DOC)
        out = str(tmp_path / "cert.json")
        assert main(["solve", f, "--out", out]) == 0
        assert main(["verify", out, "--instance", f]) == 0
        assert "ok" in capsys.readouterr().out

    def test_exit_codes(self, tmp_path):
        unknown = make_instance(QuadraticForm.diagonal(1, 1, -3), [LinearForm((1, 0, 0))])
        f = _write(tmp_path, "u.json", instance_to_dict(unknown))
        assert main(["solve", f, "--cap", "3", "--out", str(tmp_path / "c.json")]) == 2
        assert main(["solve", f, "--no-oracle", "--out", str(tmp_path / "c.json")]) == 2
        unsat = make_instance(QuadraticForm.diagonal(1, -1), [LinearForm((1, 1)), LinearForm((1, -1))])
        f = _write(tmp_path, "x.json", instance_to_dict(unsat))
        assert main(["solve", f, "--out", str(tmp_path / "c.json")]) == 3
        bad = _write(tmp_path, "bad.json", dict(HYPERBOLA_DOC, quadratic=[["1", "2"], ["3", "1"]]))
        assert main(["solve", bad]) == 1
        assert main(["solve", str(tmp_path / "missing.json")]) == 1

    def test_verify_rejects(self, tmp_path, capsys):
        cert = run_solve(parse_instance(json.dumps(HYPERBOLA_DOC)))
        cert["point"] = ["1", "2"]
        f = _write(tmp_path, "c.json", cert)
        assert main(["verify", f]) == 1
        assert "REJECTED" in capsys.readouterr().out

    def test_bounds(self, capsys):
        assert main(["bounds", "--n", "1", "--m", "1"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert Fraction(doc["A(N)"]["hi"]) == 4 and Fraction(doc["B(N,M)"]["lo"]) == 288
        assert main(["bounds", "--n", "2", "--m", "3", "--hf", "5", "--hl", "2"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["H(L)"] == ["2", "2", "2"] and len(doc["M_values"]) == 3
        assert main(["bounds", "--n", "2", "--m", "3", "--hl", "2", "3"]) == 1

    def test_oracle(self, tmp_path, capsys):
        doc = dict(HYPERBOLA_DOC, linear=[["1", "-1"]])
        f = _write(tmp_path, "o.json", doc)
        assert main(["oracle", f, "--cap", "3"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["point"] == ["1", "-1"] and out["height"] == 1
        f = _write(tmp_path, "c.json", dict(HYPERBOLA_DOC, quadratic=[["1", "0"], ["0", "1"]]))
        assert main(["oracle", f, "--cap", "3"]) == 2

    def test_batch_reproducible(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["batch", "--seed", "9", "--count", "12", "--n", "2", "--m", "2", "--coeff-range", "4"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b), "--jobs", "2", "--cert-dir", str(tmp_path / "certs")]) == 0
        assert a.read_bytes() == b.read_bytes()
        rows = list(csv.DictReader(a.open()))
        assert list(rows[0]) == CSV_COLUMNS and len(rows) == 12
        for p in (tmp_path / "certs").iterdir():
            assert verify_certificate(json.loads(p.read_text())).ok


def test_batch_rows_self_consistent(tmp_path):
    rows = batch_to_files(1, 10, 1, 2, 5, str(tmp_path / "r.csv"))
    for r in rows:
        assert r["status"] == "solved" and r["all_pass"] is True
        assert int(r["oracle_min"]) <= int(r["h(u)"])


def test_nullspace():
    basis = nullspace([[1, 1, 0], [0, 1, 1]], 3)
    assert len(basis) == 1
    v = basis[0]
    assert v[0] + v[1] == 0 and v[1] + v[2] == 0
    assert len(nullspace([], 2)) == 2
