import json

import pytest

from cli.app import VERBS, build_parser, execute, run
from cli.commands import COMMANDS
from cli.descriptors import parse_element, resolve_fusion, resolve_label
from cli.render import Report, fingerprint, render, render_tsv, sign_row
from core.errors import DescriptorError

from conftest import lattice_of, ring_of


def test_every_verb_has_a_handler():
    assert set(VERBS) == set(COMMANDS) | {"verify"}
    parser = build_parser()
    for verb in VERBS:
        assert parser.parse_args([verb]).verb == verb


def test_units_of_c3(capsys):
    assert run(["units", "--group", "C3"]) == 0
    out = capsys.readouterr().out
    assert "group\t{±1}" in out
    assert out.startswith("# fb units\n# group\tC3\n")


def test_lattice_report():
    out = execute(["lattice", "--group", "A4"])
    assert "subgroups\t10" in out
    assert "classes\t5" in out
    assert "frattini\t1#1" in out


def test_unknown_verb_is_usage_error():
    assert run(["no-such-verb"]) == 2


def test_unknown_group_is_usage_error():
    assert run(["marks", "--group", "NoSuchGroup"]) == 2


def test_missing_flag_is_usage_error():
    assert run(["local", "--fusion", "frobenius:A4:2"]) == 2
    assert run(["witness", "--fusion", "trivial:V4", "--element", "[1]"]) == 2


def test_precondition_failure_exits_one():
    assert run(["bouc-check", "--fusion", "frobenius:S4:2"]) == 1
    assert run(["max-units", "--fusion", "frobenius:D6:3"]) == 1


def test_cap_exceeded_exits_one():
    assert run(["lattice", "--group", "S5", "--cap", "60"]) == 1


def test_reeh_basis_report():
    out = execute(["reeh-basis", "--fusion", "frobenius:A4:2"])
    assert "alpha[C2#1]\t6\t2\t0" in out
    assert "rank\t3" in out


def test_transfer_report():
    out = execute(["transfer", "--fusion", "frobenius:A4:2", "--element", "alpha[C2]"])
    assert "coefficients\t-2\t1\t6\t0\t0" in out
    assert "marks\t6\t2\t6\t0\t0" in out


def test_witness_report():
    out = execute(["witness", "--fusion", "frobenius:A4:2", "--element", "alpha[C2]"])
    assert "realizable\ttrue" in out
    assert "coefficients\t0\t1\t0\t0\t0" in out


def test_stable_units_ambient_check():
    out = execute(["stable-units", "--fusion", "frobenius:A4:2", "--ambient-check"])
    assert "rank\t2" in out
    assert "counterexample\tfalse" in out


def test_classes_from_json_descriptor(tmp_path):
    path = tmp_path / "v4.json"
    path.write_text(json.dumps({"group": "V4", "automorphisms": [[0, 2, 3, 1]]}))
    out = execute(["classes", "--fusion", str(path)])
    assert "f_classes\t3" in out
    assert "trivial\tfalse" in out


def test_json_format_is_deterministic():
    argv = ["marks", "--group", "S3", "--format", "json"]
    first, second = execute(argv), execute(argv)
    assert first == second
    payload = json.loads(first)
    assert payload["verb"] == "marks"
    assert len(payload["fingerprint"]) == 64
    assert payload["tables"][0]["rows"][0] == ["1#1", 6, 3, 2, 1]


def test_tsv_fingerprint_covers_body():
    report = Report("marks", {"group": "X"})
    report.table("t", ("a", "b")).rows.append((1, None))
    report.flags["ok"] = True
    text = render_tsv(report)
    body, last = text.rsplit("# sha256 ", 1)
    assert last.strip() == fingerprint(body.encode("utf-8"))
    assert "1\t-" in body and "ok\ttrue" in body
    with pytest.raises(DescriptorError):
        render(report, "xml")


def test_sign_row():
    assert sign_row((-1, 1, 1)) == "- + +"


def test_parse_element():
    ring = ring_of("A4")
    assert parse_element("2*[C2] - [1]", ring).coeffs == (-1, 2, 0, 0, 0)
    assert parse_element("[A4]", ring) == ring.one()
    assert parse_element("[C2#3]", ring) == ring.transitive(1)


@pytest.mark.parametrize("expr", ["", "2*[C2] [1]", "[D8]", "alpha[C2]", "3"])
def test_parse_element_rejects(expr):
    with pytest.raises(DescriptorError):
        parse_element(expr, ring_of("A4"))


def test_resolve_label():
    L = lattice_of("A4")
    assert resolve_label(L, "V4") == L.by_label("V4#1")
    with pytest.raises(DescriptorError):
        resolve_label(L, "C5")


@pytest.mark.parametrize("ref", ["frobenius:A4", "frobenius::2", "sylow:A4:2", "trivial:S3"])
def test_resolve_fusion_rejects(ref):
    with pytest.raises(DescriptorError):
        resolve_fusion(ref)
