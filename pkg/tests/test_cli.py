import json
import random
import subprocess
import sys

import pytest

from tensorstrength.cli import main
from tensorstrength.cli.families import FamilySpec, generate, power_sum, triple_product
from tensorstrength.cli.formats import (
    certificate_from_json,
    certificate_to_json,
    presentation_from_json,
    presentation_to_json,
    tensor_from_json,
    tensor_from_text,
    tensor_to_json,
)
from tensorstrength.exactalg import GF, QQ, parse_polynomial, quadratic_field
from tensorstrength.machinery import rank_locus
from tensorstrength.multilinear import SymTensor, random_tensor
from tensorstrength.strength import degree_two_strength, trivial_certificate, verify_certificate


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc), encoding="utf-8")
    return str(path)


# -- documents -----------------------------------------------------------------

def test_polynomial_text():
    q = tensor_from_text("x1^3 + x2^3", QQ)
    assert isinstance(q, SymTensor) and q.d == 3 and len(q.terms) == 2


@pytest.mark.parametrize("flavor", ["sym", "alt", "ord"])
def test_tensor_round_trip(flavor, rng):
    for F in (QQ, GF(5), quadratic_field(-1)):
        for _ in range(100):
            d = rng.randint(1, 3)
            dims = tuple(rng.randint(1, 3) for _ in range(d)) if flavor == "ord" else rng.randint(d, 4)
            q = random_tensor(rng, flavor, F, d, dims, density=0.5)
            doc = tensor_to_json(q)
            assert tensor_from_json(json.loads(json.dumps(doc))) == q
            assert tensor_to_json(tensor_from_json(doc)) == doc


def test_certificate_round_trip(rng):
    for flavor in ("sym", "alt", "ord"):
        for _ in range(20):
            dims = (2, 3, 2) if flavor == "ord" else 4
            q = random_tensor(rng, flavor, QQ, 3, dims, density=0.4)
            cert = trivial_certificate(q)
            back = certificate_from_json(json.loads(json.dumps(certificate_to_json(cert))))
            assert verify_certificate(back)
            assert certificate_to_json(back) == certificate_to_json(cert)


def test_irrational_certificate_round_trip():
    cert = degree_two_strength(power_sum(2, 2)).certificate
    back = certificate_from_json(json.loads(json.dumps(certificate_to_json(cert))))
    assert verify_certificate(back) and len(back) == 1


def test_presentation_round_trip():
    for P in (rank_locus("sym", 2, 3, 2), rank_locus("ord", 2, (2, 2), 1), rank_locus("alt", 2, 4, 2)):
        doc = presentation_to_json(P)
        back = presentation_from_json(json.loads(json.dumps(doc)))
        assert back.generators == P.generators
        assert presentation_to_json(back) == doc
        assert back.spot_check(5)


def test_bad_documents():
    from tensorstrength.cli.formats import DocumentError

    with pytest.raises(DocumentError):
        tensor_from_json({"flavor": "alt", "d": 2, "dims": [3], "terms": [{"idx": [2, 1], "coeff": "1"}]})
    with pytest.raises(DocumentError):
        tensor_from_json({"flavor": "sym", "d": 2, "dims": [2], "terms": [{"idx": [1, 0], "coeff": "1"}]})
    with pytest.raises(DocumentError):
        tensor_from_json({"flavor": "sym", "d": 2})


# -- families ------------------------------------------------------------------

def test_families():
    assert power_sum(2, 5).poly == parse_polynomial("x1^2 + x2^2 + x3^2 + x4^2 + x5^2")
    t = triple_product(2)
    assert t.poly.nvars == 6 and t.poly == parse_polynomial("x1*x2*x3 + x4*x5*x6")
    q, cert = generate(FamilySpec("border_strength", d=3, k=2, n=4, seed=7))
    assert len(cert) == 2 and verify_certificate(cert) and cert.target == q
    again, _ = generate(FamilySpec("border_strength", d=3, k=2, n=4, seed=7))
    assert again == q
    with pytest.raises(ValueError):
        generate(FamilySpec("nope"))
    with pytest.raises(ValueError):
        generate(FamilySpec("power_sum", n=0))


# -- commands ------------------------------------------------------------------

def test_bound_command(capsys):
    code, out, err = run(["bound", "--flavor", "sym", "--d", "3", "--dimU", "3"], capsys)
    assert code == 0
    assert json.loads(out)["N"] == 9
    assert err.strip() == "9"
    code, out, _ = run(["bound", "--flavor", "ord", "--d", "3", "--dimU", "2,2,2"], capsys)
    assert json.loads(out)["N"] == 16


def test_quad_command(tmp_path, capsys):
    path = tmp_path / "q.json"
    assert run(["generate", "power_sum", "--d", "2", "--n", "6", "--out", str(path)], capsys)[0] == 0
    code, out, _ = run(["quad", str(path)], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["strength"] == 3
    assert verify_certificate(certificate_from_json(doc["certificate"]))


def test_verify_command(tmp_path, capsys):
    cert = trivial_certificate(tensor_from_text("x1^2*x2 + x2^3 + x1*x2*x3", QQ))
    doc = certificate_to_json(cert)
    assert run(["verify", write(tmp_path, "good.json", doc)], capsys)[0] == 0
    doc["terms"][0]["s"]["terms"][0]["coeff"] = "5"
    assert run(["verify", write(tmp_path, "bad.json", doc)], capsys)[0] == 1


def test_stdin_input(capsys, monkeypatch):
    code, out, _ = run(["trivial"], capsys, stdin="x1*x2 + x3^2", monkeypatch=monkeypatch)
    assert code == 0 and json.loads(out)["terms"] <= 3


def test_exit_codes(tmp_path, capsys, monkeypatch):
    assert run(["trivial"], capsys, stdin="x1^", monkeypatch=monkeypatch)[0] == 2
    assert run(["verify"], capsys, stdin="{not json", monkeypatch=monkeypatch)[0] == 2
    assert run(["quad", "--field", "2"], capsys, stdin="x1^2 + x2^2", monkeypatch=monkeypatch)[0] == 3
    dense = tensor_to_json(random_tensor(random.Random(0), "sym", GF(3), 3, 3))
    assert run(["brute", "--budget", "5", write(tmp_path, "t.json", dense)], capsys)[0] == 4
    pres = write(tmp_path, "p.json", presentation_to_json(rank_locus("sym", 2, 3, 2)))
    ytensor = write(tmp_path, "y.txt", "x1*x4 + x5^2")
    assert run(["pipeline", pres, "--tensor", ytensor], capsys)[0] == 5
    assert run(["nonsense"], capsys)[0] == 2


def test_machinery_commands(tmp_path, capsys):
    pres = write(tmp_path, "p.json", presentation_to_json(rank_locus("sym", 2, 3, 2)))
    code, out, _ = run(["derive", pres], capsys)
    assert code == 0 and json.loads(out)["h"] == "c_4*c_6 - 1/4*c_5^2"
    code, out, _ = run(["psi", pres, "--dimV", "2", "--samples", "10"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["matched"] == doc["samples"] == 10
    code, out, _ = run(["pipeline", pres, "--dimV", "3", "--samples", "10"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["max"] <= doc["bound"] == 6
    code, out, _ = run(["specialize", pres, "--p", "5"], capsys)
    assert code == 0 and json.loads(out)["statuses"] == ["kept"]


def test_chop_and_leibniz_commands(tmp_path, capsys):
    q = write(tmp_path, "q.txt", "x1^3 + x1*x4^2 + x2*x3*x5 + x5^3")
    code, out, _ = run(["chop", q, "--dimU", "2"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["terms"] <= 2
    assert verify_certificate(certificate_from_json(doc["certificate"]))
    _, cert = generate(FamilySpec("border_strength", d=3, k=2, n=3, seed=1))
    code, out, _ = run(["leibniz", write(tmp_path, "c.json", certificate_to_json(cert))], capsys)
    doc = json.loads(out)
    assert code == 0
    assert all(d["terms"] <= doc["bound"] for d in doc["derivatives"])


def test_formats_command(capsys):
    code, out, _ = run(["formats"], capsys)
    assert code == 0 and "Exit codes" in out


def test_deterministic_reports(tmp_path, capsys):
    pres = write(tmp_path, "p.json", presentation_to_json(rank_locus("sym", 2, 3, 2)))
    outs = [run(["pipeline", pres, "--samples", "5", "--seed", "9"], capsys)[1] for _ in range(2)]
    assert outs[0] == outs[1]
    outs = [run(["generate", "border_strength", "--d", "3", "--k", "2", "--n", "4", "--seed", "7"], capsys)[1]
            for _ in range(2)]
    assert outs[0] == outs[1]


def test_certificates_reverify_in_fresh_process(tmp_path):
    cmd = [sys.executable, "-m", "tensorstrength"]
    gen = subprocess.run(cmd + ["generate", "power_sum", "--d", "2", "--n", "5"],
                         capture_output=True, text=True, check=True)
    quad = subprocess.run(cmd + ["quad"], input=gen.stdout, capture_output=True, text=True, check=True)
    cert = json.dumps(json.loads(quad.stdout)["certificate"])
    res = subprocess.run(cmd + ["verify"], input=cert, capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["verified"] is True
