from __future__ import annotations

import json

import pytest
from hypothesis import given, settings, strategies as st

from finstack import corpus
from finstack.cli import main
from finstack.document import Document, DocumentError, parse, serialize

SAMPLES = {
    "groupoid": corpus.groupoids()["pair-2"],
    "functor": corpus.weak_actions()["strict/Z/2-on-2-free"].mu,
    "stacky-groupoid": corpus.presentations()["skeletal-Z2-Z2-cocycle"],
    "action": corpus.weak_actions()["cm-Z2-into-Z4/left-self"],
    "bibundle": corpus.stacky_bibundles()["fibre/pair-2"],
    "crossed-module": corpus.crossed_modules()["Z2-into-Z4"],
    "skeletal": corpus.skeletal_data()["Z2-Z2-cocycle"],
}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, value):
    path = tmp_path / name
    path.write_text(value if isinstance(value, str) else serialize(value))
    return str(path)


# documents ------------------------------------------------------------------------------


@pytest.mark.parametrize("kind", sorted(SAMPLES))
def test_round_trip_is_canonical(kind):
    text = serialize(SAMPLES[kind])
    doc = parse(text)
    assert isinstance(doc, Document) and doc.kind == kind and doc.schema_version == 1
    assert serialize(doc.value) == text
    assert text.endswith("\n") and json.loads(text)["schemaVersion"] == 1


ROW_TABLES = {"composition", "associator", "beta", "tau", "omega"}


def shuffle_rows(value, rng, key=None, parent=None):
    """Reorder keys everywhere and rows of keyed tables; positional lists keep their order."""
    if isinstance(value, dict):
        return {k: shuffle_rows(v, rng, k, key) for k, v in reversed(list(value.items()))}
    if isinstance(value, list):
        items = [shuffle_rows(v, rng, None, key) for v in value]
        if key in ROW_TABLES or parent == "multiplication":
            rng.shuffle(items)
        return items
    return value


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(SAMPLES)), st.randoms(use_true_random=False))
def test_non_canonical_input_canonicalises(kind, rng):
    text = serialize(SAMPLES[kind])
    messy = json.dumps(shuffle_rows(json.loads(text), rng), separators=(",", ":"))
    once = serialize(parse(messy).value)
    assert once == text
    assert serialize(parse(once).value) == once


def test_dangling_identifier_names_the_field():
    d = json.loads(serialize(SAMPLES["groupoid"]))
    d["payload"]["arrows"][0][1] = 7
    with pytest.raises(DocumentError) as info:
        parse(json.dumps(d))
    assert info.value.field == "payload.arrows[0][1]" and "dangling" in info.value.message
    assert info.value.line is None


def test_schema_version_and_kind_are_checked():
    d = json.loads(serialize(SAMPLES["groupoid"]))
    with pytest.raises(DocumentError, match="schema version") as info:
        parse(json.dumps({**d, "schemaVersion": 2}))
    assert info.value.field == "schemaVersion"
    with pytest.raises(DocumentError) as info:
        parse(json.dumps({**d, "kind": "monoid"}))
    assert info.value.field == "kind"


def test_missing_field_is_named():
    d = json.loads(serialize(SAMPLES["groupoid"]))
    del d["payload"]["inverse"]
    with pytest.raises(DocumentError) as info:
        parse(json.dumps(d))
    assert info.value.field == "payload.inverse"


def test_syntax_errors_carry_a_line():
    text = serialize(SAMPLES["groupoid"])
    with pytest.raises(DocumentError) as info:
        parse(text[:40])
    assert info.value.line is not None and "line" in str(info.value)
    assert set(info.value.as_dict()) >= {"message", "line"}


# command line -------------------------------------------------------------------------


def test_examples_listing_marks_the_analogue(capsys):
    code, out, _ = run(capsys, "examples")
    assert code == 0
    lines = out.splitlines()
    assert any(line.startswith("discrete-prequantization") and "finite analogue" in line for line in lines)
    assert "bz2-trivial-on-point" in out


def test_example_output_is_a_document(capsys):
    code, out, err = run(capsys, "examples", "discrete-prequantization")
    assert code == 0 and parse(out).kind == "bibundle"
    assert "finite analogue" in err


def test_validate_passes_and_reports_json(capsys, tmp_path):
    path = write(tmp_path, "g.json", SAMPLES["groupoid"])
    code, out, _ = run(capsys, "--format", "json", "validate", path)
    body = json.loads(out)
    assert code == 0 and body["passed"] is True and body["witness"] is None
    assert body["command"] == "validate groupoid"


def test_format_after_the_subcommand(capsys, tmp_path):
    path = write(tmp_path, "g.json", SAMPLES["groupoid"])
    code, out, _ = run(capsys, "validate", path, "--format", "json")
    assert code == 0 and json.loads(out)["passed"] is True


def test_broken_axiom_exits_1_with_a_witness(capsys, tmp_path):
    d = json.loads(serialize(SAMPLES["groupoid"]))
    d["payload"]["inverse"] = [0, 1, 2, 3]
    path = write(tmp_path, "bad.json", json.dumps(d))
    code, out, _ = run(capsys, "--format", "json", "validate", path)
    body = json.loads(out)
    assert code == 1 and body["passed"] is False
    assert body["witness"]["law"] and isinstance(body["witness"]["ids"], list)


def test_human_report(capsys, tmp_path):
    path = write(tmp_path, "bz2.json", corpus.bz2_trivial_on_point())
    code, out, _ = run(capsys, "check", "principal", path)
    assert code == 1
    assert out.startswith("check principal: FAILED at comparison:faithful")
    assert "weakly_representable: false" in out


@pytest.mark.parametrize("name,command,expected", [
    ("free-z2-action", "principal", 0),
    ("bz2-trivial-on-point", "principal", 1),
    ("identity-bibundle", "morita", 0),
    ("one-sided-bibundle", "morita", 1),
    ("skeletal-cocycle", "coherence", 0),
    ("crossed-module", "coherence", 0),
])
def test_check_exit_codes(capsys, tmp_path, name, command, expected):
    assert main(["examples", name, "-o", str(tmp_path / "x.json")]) == 0
    capsys.readouterr()
    code, _, _ = run(capsys, "check", command, str(tmp_path / "x.json"))
    assert code == expected


def test_non_cocycle_fails_coherence(capsys, tmp_path):
    d = json.loads(serialize(SAMPLES["skeletal"]))
    rows = d["payload"]["omega"]
    for row in rows:
        if row[:3] == [1, 1, 0]:
            row[3] = 1 - row[3]
    path = write(tmp_path, "sk.json", json.dumps(d))
    code, out, _ = run(capsys, "--format", "json", "check", "coherence", path)
    assert code == 1 and json.loads(out)["witness"]["law"] == "kghl"


def test_prequotient_writes_a_functor(capsys, tmp_path):
    src = write(tmp_path, "a.json", corpus.weak_actions()["strict/Z/2-on-2-free"])
    code, out, _ = run(capsys, "prequotient", src)
    assert code == 0
    q = parse(out).value
    assert q.cod.n_arrows == 4 and q.dom.n_objects == 2
    code, out, _ = run(capsys, "prequotient", src, "-o", str(tmp_path / "q.json"))
    assert code == 0 and "arrows: 4" in out


def test_compose_and_flip(capsys, tmp_path):
    bb = corpus.stacky_bibundles()["fibre/pair-2"]
    first = write(tmp_path, "b.json", bb)
    code, flipped, _ = run(capsys, "flip", first)
    assert code == 0 and parse(flipped).kind == "bibundle"
    second = write(tmp_path, "f.json", flipped)
    code, out, _ = run(capsys, "compose", first, second)
    assert code == 0
    composite = write(tmp_path, "c.json", out)
    code, _, _ = run(capsys, "check", "morita", composite)
    assert code == 0


@pytest.mark.parametrize("argv", [
    ["validate", "/nonexistent/file.json"],
    ["bogus"],
    ["examples", "no-such-example"],
    ["check", "sideways", "x.json"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_wrong_kind_and_mismatched_compose_exit_2(capsys, tmp_path):
    g = write(tmp_path, "g.json", SAMPLES["groupoid"])
    code, _, err = run(capsys, "check", "principal", g)
    assert code == 2 and "expected kind action" in err
    a = write(tmp_path, "a.json", corpus.stacky_bibundles()["identity/group-Z/2"])
    b = write(tmp_path, "b.json", corpus.stacky_bibundles()["identity/group-Z/3"])
    code, out, err = run(capsys, "--format", "json", "compose", a, b)
    assert code == 2 and "error" in json.loads(out) and err.startswith("error:")


def test_input_errors_report_the_field(capsys, tmp_path):
    d = json.loads(serialize(SAMPLES["groupoid"]))
    d["payload"]["arrows"][0][1] = 7
    path = write(tmp_path, "d.json", json.dumps(d))
    code, _, err = run(capsys, "validate", path)
    assert code == 2 and "payload.arrows[0][1]" in err
