import json

import pytest

from realcheck.cli import main
from realcheck.errors import StructureError
from realcheck.formats import (aks_to_dict, load_aks, load_map, load_opca,
                               opca_to_dict, save_aks)
from realcheck.lattices import L2

from conftest import FIXTURES


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


# -- loading -------------------------------------------------------------------

def test_opca_round_trip(tmp_path):
    path = write(tmp_path, "l2.json", dict(opca_to_dict(L2), U=["0"]))
    opca, sup = load_opca(path)
    assert opca.elements == L2.elements
    assert opca.table == L2.table
    assert opca.U == frozenset({"0"})
    assert sup is None


def test_leq_closure_computed_on_load(tmp_path):
    payload = {"elements": ["a", "b", "c"], "leq": [["a", "b"], ["b", "c"]],
               "app": [[x, y, "a"] for x in "abc" for y in "abc"],
               "k": "a", "s": "a"}
    opca, _ = load_opca(write(tmp_path, "chain.json", payload))
    assert opca.leq("a", "c") and opca.leq("b", "b")


def test_missing_field_names_file_and_field(tmp_path):
    path = write(tmp_path, "bad.json", {"elements": ["a"]})
    with pytest.raises(StructureError) as exc:
        load_opca(path)
    assert "bad.json" in str(exc.value) and "app" in str(exc.value)


def test_dangling_reference_names_the_field(tmp_path):
    payload = {"elements": ["a"], "leq": [], "app": [["a", "zz", "a"]],
               "k": "a", "s": "a"}
    with pytest.raises(StructureError) as exc:
        load_opca(write(tmp_path, "dangling.json", payload))
    assert "app" in str(exc.value)


def test_json_syntax_error_reports_the_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"elements": [\n  "a",\n oops\n]}')
    with pytest.raises(StructureError) as exc:
        load_opca(str(path))
    assert "line 3" in str(exc.value)


def test_sup_field_parsed(tmp_path):
    payload = dict(opca_to_dict(L2))
    payload["sup"] = [[[], "0"], [["0"], "0"], [["0", "1"], "1"]]
    _, sup = load_opca(write(tmp_path, "with_sup.json", payload))
    assert sup[frozenset()] == "0" and sup[frozenset({"0", "1"})] == "1"


def test_aks_file_round_trip(tmp_path):
    aks = load_aks(FIXTURES / "aks_mid0.json")
    path = tmp_path / "copy.json"
    save_aks(path, aks)
    again = load_aks(path)
    assert aks_to_dict(again) == aks_to_dict(aks)


def test_map_file_accepts_both_layouts(tmp_path):
    assert load_map(write(tmp_path, "m1.json", {"map": {"a": "b"}})) == {"a": "b"}
    assert load_map(write(tmp_path, "m2.json", {"map": [["a", "b"]]})) == {"a": "b"}


# -- CLI -----------------------------------------------------------------------------

def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_opca_pass(capsys):
    code, out, _ = run(capsys, "check-opca", str(FIXTURES / "l2.json"))
    assert code == 0 and "k.law" in out


def test_input_error_exits_two(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, err = run(capsys, "check-opca", str(bad))
    assert code == 2 and "input error" in err
    code, _, err = run(capsys, "check-opca", str(tmp_path / "missing.json"))
    assert code == 2


def test_failures_exit_one(capsys):
    code, out, _ = run(capsys, "check-aks", str(FIXTURES / "aks_broken.json"))
    assert code == 1 and "fail" in out


def test_build_then_check_round_trip(capsys, tmp_path):
    out_path = tmp_path / "built.json"
    code, _, _ = run(capsys, "build-aks", str(FIXTURES / "l2.json"),
                     "--U", "0", "--out", str(out_path))
    assert code == 0
    code1, out1, _ = run(capsys, "--format", "machine",
                         "check-aks", str(out_path))
    code2, out2, _ = run(capsys, "--format", "machine",
                         "check-aks", str(out_path))
    assert code1 == code2 == 0
    stripped1 = [json.loads(line) for line in out1.strip().splitlines()]
    stripped2 = [json.loads(line) for line in out2.strip().splitlines()]
    assert stripped1 == stripped2  # identical report across runs
    verdicts = {rec["check"]: rec["verdict"] for rec in stripped1}
    assert all(v == "pass" for v in verdicts.values())
    assert {"aks.s1_dot", "aks.s2_K", "aks.s3_S", "aks.s4_cc",
            "aks.s5_kof"} <= set(verdicts)


def test_machine_format_stable_across_runs(capsys):
    _, out1, _ = run(capsys, "--format", "machine",
                     "check-tripos", str(FIXTURES / "l3.json"), "--index-size", "2")
    _, out2, _ = run(capsys, "--format", "machine",
                     "check-tripos", str(FIXTURES / "l3.json"), "--index-size", "2")
    assert out1 == out2


def test_check_localic_triangulation(capsys):
    code, out, _ = run(capsys, "check-localic", str(FIXTURES / "l3.json"))
    assert code == 0 and "localic.triangulation" in out


def test_check_order_ca(capsys):
    code, out, _ = run(capsys, "check-order-ca", str(FIXTURES / "aks_mid1.json"))
    assert code == 0


def test_check_density_identity(capsys):
    code, out, _ = run(capsys, "check-density", str(FIXTURES / "l2.json"),
                       str(FIXTURES / "l2.json"),
                       str(FIXTURES / "l2_identity.map.json"))
    assert code == 0 and "density.agreement" in out


def test_check_bco_command(capsys, tmp_path):
    path = write(tmp_path, "bco.json", {
        "elements": ["0", "1"], "leq": [["0", "1"]],
        "functions": {"id": [["0", "0"], ["1", "1"]]}})
    code, out, _ = run(capsys, "check-bco", path)
    assert code == 0 and "bco.sub_identity" in out


def test_check_filter_override(capsys):
    code, _, _ = run(capsys, "check-filter", str(FIXTURES / "l3.json"),
                     "--subset", "1")
    assert code == 0
    code, _, _ = run(capsys, "check-filter", str(FIXTURES / "l3.json"),
                     "--subset", "m")
    assert code == 1  # designated k=s=1 missing from {m}


def test_k2_subcommands(capsys):
    code, out, _ = run(capsys, "k2", "apply", "--alpha", "1", "--beta", "n+1",
                       "--n", "7", "--fuel", "1")
    assert code == 0 and "'value': 0" in out
    code, _, _ = run(capsys, "k2", "apply", "--alpha", "0", "--beta", "n",
                     "--n", "0", "--fuel", "5")
    assert code == 1
    code, out, _ = run(capsys, "k2", "discrete", "--elems", "n+1; n*2",
                       "--depth", "3")
    assert code == 0
    code, _, _ = run(capsys, "k2", "tau", "--alpha", "0", "--prefix", "1,2",
                     "--nprime", "1", "--j", "0", "--fuel", "2")
    assert code == 1


def test_check_tripos_exit_zero_on_lattice(capsys):
    code, out, _ = run(capsys, "check-tripos", str(FIXTURES / "diamond.json"),
                       "--index-size", "1")
    assert code == 0 and "tripos.star_equals_applicative" in out


def test_check_tripos_refuses_without_joins(capsys):
    # the vee has no top, so no sup table can be derived from the poset
    code, out, _ = run(capsys, "check-tripos", str(FIXTURES / "vee.json"))
    assert code == 1 and "refused" in out


def test_eval_term_flag(capsys):
    code, out, _ = run(capsys, "check-opca", str(FIXTURES / "l3.json"),
                       "--eval-term", "S K K m")
    assert code == 0 and "'value': 'm'" in out
    code, _, err = run(capsys, "check-opca", str(FIXTURES / "l3.json"),
                       "--eval-term", r"\x. y (")
    assert code == 2
