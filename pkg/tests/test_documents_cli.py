"""JSON document parsing/serialization and the command line interface."""

import io
import json
import math

import pytest

from heightdyn import (
    DivisorClass,
    DocumentError,
    MultiPoint,
    PicardLattice,
    cli,
    dump_document,
    parse_document,
    registry,
)
from heightdyn.documents import (
    divisor_to_obj,
    lattice_to_obj,
    morphism_to_obj,
    parse_divisor,
    parse_lattice,
    parse_morphism,
    parse_points,
    parse_pullback,
    point_to_obj,
    pullback_to_obj,
)

K3_DOC = ('{"rank":2,"labels":["E+","E-"],"field_d":3,'
          '"cone":{"type":"orthant"},"witness_ample":["1","1"]}')


def write(tmp_path, name, payload):
    target = tmp_path / name
    if not isinstance(payload, str):
        payload = dump_document(payload)
    target.write_text(payload, encoding="utf-8")
    return str(target)


def run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    out = json.loads(captured.out) if captured.out.strip() else None
    err = json.loads(captured.err) if captured.err.strip() else None
    return code, out, err


def test_parse_lattice_document():
    lattice = parse_document(K3_DOC)
    assert lattice == registry.k3_lattice()


def test_lattice_round_trips():
    for lattice in (registry.k3_lattice(), registry.triple_line_lattice(),
                    PicardLattice.orthant(3)):
        assert parse_lattice(dump_document(lattice_to_obj(lattice))) == lattice


def test_pullback_round_trips_with_surds():
    original = registry.k3_iota1()
    doc = dump_document(pullback_to_obj(original))
    assert "2-√3" in doc and "2+√3" in doc
    assert parse_pullback(doc) == original


def test_divisor_round_trips():
    original = DivisorClass.of(["2+sqrt3", "1/2", 4])
    assert parse_divisor(dump_document(divisor_to_obj(original))) == original


def test_morphism_round_trips():
    for f in (registry.squaring_map(), registry.sum_square_map(),
              registry.swap_product_map(), registry.power_product_map(2, 3)):
        assert parse_morphism(dump_document(morphism_to_obj(f))) == f


def test_points_parse_and_normalize():
    signature, points = parse_points(
        '{"signature": [1, 1], "points": [[[2, 4], [3, 6]]]}')
    assert signature == (1, 1)
    assert points == [MultiPoint.of([(1, 2), (1, 2)])]


def test_parse_document_sniffs_each_type():
    assert parse_document('{"coeffs": [1, 2]}') == DivisorClass.of([1, 2])
    assert parse_document('{"matrix": [[2, 0], [0, 3]]}').entries
    assert parse_document(dump_document(
        morphism_to_obj(registry.squaring_map()))) == registry.squaring_map()
    signature, _ = parse_document('{"signature": [1], "points": []}')
    assert signature == (1,)


def test_parse_document_errors_carry_paths():
    with pytest.raises(DocumentError) as err:
        parse_document('{"cone": {"type": "fan"}}')
    assert err.value.path == "$" and "missing key 'rank'" in str(err.value)

    fan = K3_DOC.replace("orthant", "fan")
    with pytest.raises(DocumentError) as err:
        parse_document(fan)
    assert err.value.path == "$.cone.type"

    with pytest.raises(DocumentError) as err:
        parse_document('{"unrelated": 1}')
    assert "unrecognized document" in str(err.value)

    with pytest.raises(DocumentError) as err:
        parse_document("not json")
    assert "invalid JSON" in str(err.value)

    with pytest.raises(DocumentError):
        parse_document("[1, 2]")


def test_cli_mu_exact(tmp_path, capsys):
    argv = [
        "mu",
        "--lattice", write(tmp_path, "lat.json", K3_DOC),
        "--pullback", write(tmp_path, "pb.json",
                            pullback_to_obj(registry.k3_iota1())),
        "--divisor", write(tmp_path, "d.json", {"coeffs": [1, 1]}),
    ]
    code, out, _ = run(capsys, argv)
    assert code == 0
    assert out["mu1"] == "2-√3" and out["mu2"] == "2+√3"
    assert out["exact"] is True and out["method"] == "closed_form"
    assert out["mu1_float"] == pytest.approx(2 - math.sqrt(3), abs=1e-12)


def test_cli_mu_bisection(tmp_path, capsys):
    argv = [
        "mu", "--method", "bisection",
        "--lattice", write(tmp_path, "lat.json", K3_DOC),
        "--pullback", write(tmp_path, "pb.json",
                            pullback_to_obj(registry.k3_phi())),
        "--divisor", write(tmp_path, "d.json", {"coeffs": [1, 1]}),
    ]
    code, out, _ = run(capsys, argv)
    assert code == 0
    assert out["exact"] is False and out["method"] == "bisection"
    assert out["mu1"] == pytest.approx(7 - 4 * math.sqrt(3), abs=1e-9)


def test_cli_heights(tmp_path, capsys):
    points = {"signature": [1, 1], "points": [[[1, 2], [1, 3]], [[0, 1], [1, 1]]]}
    argv = [
        "heights",
        "--points", write(tmp_path, "pts.json", points),
        "--divisor", write(tmp_path, "d.json", {"coeffs": [2, 3]}),
    ]
    code, out, _ = run(capsys, argv)
    assert code == 0
    values = [row["height"] for row in out["heights"]]
    assert values[0] == pytest.approx(2 * math.log(2) + 3 * math.log(3))
    assert values[1] == 0.0


def test_cli_heights_default_divisor(tmp_path, capsys):
    points = {"signature": [1], "points": [[[1, 7]]]}
    argv = ["heights", "--points", write(tmp_path, "pts.json", points)]
    code, out, _ = run(capsys, argv)
    assert code == 0
    assert out["heights"][0]["height"] == pytest.approx(math.log(7))


def test_cli_eval(tmp_path, capsys):
    argv = [
        "eval",
        "--morphism", write(tmp_path, "f.json",
                            morphism_to_obj(registry.swap_product_map())),
        "--points", write(tmp_path, "pts.json",
                          {"signature": [1, 1], "points": [[[1, 2], [1, 3]]]}),
    ]
    code, out, _ = run(capsys, argv)
    assert code == 0
    assert out["images"][0]["image"] == [[1, 9], [1, 8]]


def test_cli_orbit(tmp_path, capsys):
    argv = [
        "orbit",
        "--morphism", write(tmp_path, "f.json",
                            morphism_to_obj(registry.squaring_map())),
        "--point", write(tmp_path, "p.json",
                         {"signature": [1], "points": [[[1, -1]]]}),
    ]
    code, out, _ = run(capsys, argv)
    assert code == 0
    assert out["status"] == "periodic"
    assert out["tail"] == 1 and out["period"] == 1
    assert out["points"] == [[[1, -1]], [[1, 1]], [[1, 1]]]


def test_cli_preperiodic(tmp_path, capsys):
    argv = [
        "preperiodic", "--height-bound", "20",
        "--morphism", write(tmp_path, "f.json",
                            morphism_to_obj(registry.squaring_map())),
    ]
    code, out, _ = run(capsys, argv)
    assert code == 0
    assert out["count"] == 4 and out["undetermined"] == []
    assert out["max_height"] == 0.0


def test_cli_northcott(tmp_path, capsys):
    argv = [
        "northcott", "--mu1", "2.0", "--mu2", "2.0",
        "--epsilon", "0.5", "--height-bound", "30",
        "--morphism", write(tmp_path, "f.json",
                            morphism_to_obj(registry.sum_square_map())),
        "--divisor", write(tmp_path, "d.json", {"coeffs": [1]}),
    ]
    code, out, _ = run(capsys, argv)
    assert code == 0
    assert out["c1_emp"] == 0.0
    assert out["c2_emp"] == pytest.approx(math.log(2), abs=1e-12)
    assert out["argmax_contract"] == [[1, -1]]
    assert all(isinstance(k, str) for k in out["bucket_maxima"])


def test_cli_silverman(tmp_path, capsys):
    argv = [
        "silverman", "--height-bound", "50", "--h-min", str(math.log(5)),
        "--morphism", write(tmp_path, "f.json",
                            morphism_to_obj(registry.squaring_map())),
        "--divisor", write(tmp_path, "d.json", {"coeffs": [1]}),
    ]
    code, out, _ = run(capsys, argv)
    assert code == 0
    assert out["estimate"] == pytest.approx(2.0, abs=1e-12)


def test_cli_classify_matrix(tmp_path, capsys):
    doc = {"matrix": [[0, 3], [2, 0]], "dims": [1, 1]}
    argv = ["classify", "--matrix", write(tmp_path, "m.json", doc)]
    code, out, _ = run(capsys, argv)
    assert code == 0
    assert out["ok"] is True
    assert out["sigma"] == [1, 0] and out["degrees"] == [2, 3]
    assert out["power"] == 2 and out["power_matrix"] == [[6, 0], [0, 6]]
    assert out["mu1"] == 6 and out["mu2"] == 6


def test_cli_classify_sorts_dims(tmp_path, capsys):
    doc = {"matrix": [[3, 0], [0, 2]], "dims": [2, 1]}
    argv = ["classify", "--matrix", write(tmp_path, "m.json", doc)]
    code, out, _ = run(capsys, argv)
    assert code == 0
    assert out["dims"] == [1, 2] and out["input_order"] == [1, 0]
    assert out["degrees"] == [2, 3]


def test_cli_classify_rejects_non_dominant(tmp_path, capsys):
    doc = {"matrix": [[2, 3], [0, 0]], "dims": [1, 1]}
    argv = ["classify", "--matrix", write(tmp_path, "m.json", doc)]
    code, out, _ = run(capsys, argv)
    assert code == 2
    assert out["ok"] is False and "feeds no target" in out["reason"]


def test_cli_classify_morphism_input(tmp_path, capsys):
    argv = [
        "classify",
        "--morphism", write(tmp_path, "f.json",
                            morphism_to_obj(registry.power_product_map(2, 3))),
    ]
    code, out, _ = run(capsys, argv)
    assert code == 0
    assert out["ok"] is True and out["degrees"] == [2, 3]


def test_cli_verify_paper(capsys):
    code, out, _ = run(capsys, ["verify-paper"])
    assert code == 0
    assert out["passed"] is True
    assert len(out["cases"]) == 7
    for case in out["cases"]:
        assert case["passed"] is True
        assert case["bisect_error"] <= 1e-9


def test_cli_reads_stdin(capsys, monkeypatch):
    doc = '{"signature": [1], "points": [[[1, 4]]]}'
    monkeypatch.setattr("sys.stdin", io.StringIO(doc))
    code, out, _ = run(capsys, ["heights", "--points", "-"])
    assert code == 0
    assert out["heights"][0]["height"] == pytest.approx(math.log(4))


def test_cli_pretty_flag(tmp_path, capsys):
    argv = [
        "--pretty", "mu",
        "--lattice", write(tmp_path, "lat.json", K3_DOC),
        "--pullback", write(tmp_path, "pb.json",
                            pullback_to_obj(registry.k3_iota1())),
        "--divisor", write(tmp_path, "d.json", {"coeffs": [1, 1]}),
    ]
    code = cli.main(argv)
    captured = capsys.readouterr()
    assert code == 0
    assert "\n  " in captured.out
    assert json.loads(captured.out)["mu1"] == "2-√3"


def test_cli_missing_file(tmp_path, capsys):
    argv = ["heights", "--points", str(tmp_path / "absent.json")]
    code, _, err = run(capsys, argv)
    assert code == 1
    assert "cannot read" in err["error"]


def test_cli_bad_json(tmp_path, capsys):
    argv = ["heights", "--points", write(tmp_path, "pts.json", "{nope")]
    code, _, err = run(capsys, argv)
    assert code == 1
    assert "invalid JSON" in err["error"]


def test_cli_signature_mismatch(tmp_path, capsys):
    points = {"signature": [1, 1], "points": [[[1, 2], [1, 3]]]}
    argv = [
        "heights",
        "--points", write(tmp_path, "pts.json", points),
        "--divisor", write(tmp_path, "d.json", {"coeffs": [1]}),
    ]
    code, _, err = run(capsys, argv)
    assert code == 1 and err is not None


def test_cli_usage_errors(capsys):
    assert cli.main(["no-such-command"]) == 1
    capsys.readouterr()
    assert cli.main([]) == 1
    capsys.readouterr()
    assert cli.main(["--help"]) == 0
    capsys.readouterr()
