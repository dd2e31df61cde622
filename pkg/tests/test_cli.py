import csv
import io
import json
import subprocess
import sys

import pytest

from ndca.cli import main

from golden6 import DESIGNATION6, FKM6


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_allocate_n6_agent5(capsys):
    code, out, _ = run(capsys, "allocate", "--n", "6", "--agent", "5", "--variant", "global")
    assert code == 0
    table = rows(out)
    assert len(table) == 10
    assert {"size": "3", "members": "5;6;1", "source_ia": "0;0;3", "periodic": "0"} in table


def test_allocate_sorted_flag(capsys):
    _, out, _ = run(capsys, "allocate", "--n", "6", "--agent", "5", "--sorted")
    assert "1;5;6" in [r["members"] for r in rows(out)]


def test_allocate_single_agent(capsys):
    code, out, _ = run(capsys, "allocate", "--n", "1", "--agent", "1")
    assert code == 0
    assert rows(out) == [{"size": "1", "members": "1", "source_ia": "0", "periodic": "0"}]


@pytest.mark.parametrize("argv", [
    ["allocate", "--n", "6", "--agent", "7"],
    ["allocate", "--n", "6", "--agent", "0"],
    ["allocate", "--n", "6"],
    ["allocate", "--n", "6", "--agent", "1", "--variant", "bogus"],
    ["verify", "--n-min", "2", "--n-max", "26"],
    ["verify", "--n-min", "2", "--n-max", "3", "--variants", "nope"],
    ["bench", "--n", "5", "--jobs", "2"],
    ["--jobs", "0", "memory"],
    ["memory", "--n", "x"],
    ["amortise"],
    [],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_json_is_one_document(capsys):
    code, out, _ = run(capsys, "--format", "json", "allocate", "--n", "4", "--agent", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "allocate"
    assert doc["total"] == len(doc["rows"])


def test_format_flag_after_subcommand(capsys):
    _, out, _ = run(capsys, "memory", "--n", "5", "--format", "json")
    assert json.loads(out)["rows"] == [
        {"n": 5, "ndca_bytes": 108, "dcvc_bytes": 264, "ratio": 2.4444}
    ]


def test_dcvc_allocate(capsys):
    _, out, _ = run(capsys, "dcvc-allocate", "--n", "6", "--agent", "3")
    size3 = [r for r in rows(out) if r["size"] == "3"]
    assert [r["members"] for r in size3] == ["2;4;5", "2;3;6", "2;3;5"]
    assert size3[0]["self_interested"] == "0"
    assert [r["list_index"] for r in size3] == ["7", "8", "9"]


def test_vbfr_allocate(capsys):
    _, out, _ = run(capsys, "vbfr-allocate", "--n", "6", "--agent", "4", "--size", "3")
    assert rows(out) == [{"size": "3", "members": "4;5;6"}]


def test_compare(capsys):
    code, out, _ = run(capsys, "compare", "--n", "6", "--size", "3")
    assert code == 0
    table = rows(out)
    assert len(table) == 18
    by = {(r["method"], r["agent"]): r for r in table}
    assert by[("vbfr", "2")]["size_count"] == "6"
    assert by[("dcvc", "3")]["self_interested"] == "0"
    assert all(r["self_interested"] == "1" for r in table if r["method"] != "dcvc")


def test_verify_small_range(capsys):
    code, out, _ = run(capsys, "verify", "--n-min", "2", "--n-max", "2")
    assert code == 0
    for r in rows(out):
        totals = sorted(int(v) for v in r["per_agent_totals"].split(";"))
        assert totals == [1, 2]


def test_verify_parallel_matches_serial(capsys):
    args = ["verify", "--n-min", "2", "--n-max", "9", "--variants", "per-size,global,dcvc"]
    _, serial, _ = run(capsys, *args)
    code, parallel, _ = run(capsys, "--jobs", "4", *args)
    assert code == 0
    assert serial == parallel


def test_verify_counts_only_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "verify", "--n-min", "14",
                       "--n-max", "16", "--counts-only")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] is True
    glob = {r["n"]: r["per_size_imbalance_max"] for r in doc["rows"] if r["variant"] == "global"}
    assert glob == {14: 1, 15: 1, 16: 4}
    assert all(r["exhaustive"] is False for r in doc["rows"])


def test_verify_failure_exit_1(capsys, monkeypatch):
    import ndca.verify as verify

    monkeypatch.setattr(verify, "kappa", lambda n: -1)
    code, out, _ = run(capsys, "verify", "--n-min", "4", "--n-max", "4", "--variants", "per-size")
    assert code == 1
    assert rows(out)[0]["passed"] == "0"


def test_necklaces_with_ia(capsys):
    _, out, _ = run(capsys, "necklaces", "--n", "6", "--with-ia")
    table = rows(out)
    assert [(r["necklace"], r["ia"]) for r in table] == [
        (w, ";".join(map(str, t))) for w, t in FKM6
    ]
    assert table[-1]["period"] == ""


def test_tables_fkm6(capsys):
    _, out, _ = run(capsys, "tables", "fkm6")
    assert [r["necklace"] for r in rows(out)] == [w for w, _ in FKM6]


def test_tables_designation6(capsys):
    _, out, _ = run(capsys, "tables", "designation6")
    got = [
        (int(r["size"]), tuple(int(v) for v in r["ia"].split(";")), int(r["repetitions"]),
         int(r["stride"]), int(r["offset"]), tuple(int(v) for v in r["window"].split(";")))
        for r in rows(out)
    ]
    assert got == DESIGNATION6


def test_tables_example6(capsys):
    _, out, _ = run(capsys, "tables", "example6")
    table = rows(out)
    assert len(table) == 63
    assert len({frozenset(r["members"].split(";")) for r in table}) == 63


@pytest.mark.slow
def test_tables_imbalance(capsys):
    _, out, _ = run(capsys, "tables", "imbalance")
    table = {int(r["n"]): r for r in rows(out)}
    assert table[12]["kappa"] == "7"
    assert table[24]["global_offset_size_max"] == "12"
    assert all(r["per_size_offset_aggregate"] == r["kappa"] for r in table.values())


def test_tables_deterministic(capsys):
    _, a, _ = run(capsys, "tables", "example6")
    _, b, _ = run(capsys, "tables", "example6")
    assert a == b


def test_bench_csv_schema(capsys):
    code, out, _ = run(capsys, "bench", "--n", "5,6", "--runs", "3")
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["n", "algorithm", "R", "mean_ns", "sd_ns", "ci95_ns", "checksum"]
    assert [(r["n"], r["algorithm"]) for r in table] == [
        ("5", "ndca"), ("5", "dcvc"), ("6", "ndca"), ("6", "dcvc")
    ]


def test_profile(capsys):
    _, out, _ = run(capsys, "--format", "json", "profile", "--n", "8", "--runs", "2")
    doc = json.loads(out)
    assert [r["component"] for r in doc["rows"]] == [
        "fkm", "gen_inc_array", "period", "designation", "gen_coalition"
    ]
    assert doc["largest"] in {r["component"] for r in doc["rows"]}


def test_profile_ops(capsys):
    _, out, _ = run(capsys, "profile", "--n", "10", "--ops")
    r = rows(out)[0]
    assert r["ndca_coalitions"] == "105" and r["dcvc_coalitions"] == "103"


def test_amortise_given_inputs(capsys):
    code, out, _ = run(capsys, "amortise", "--t-ndca", "0.06748", "--t-dcvc", "0.0122",
                       "--m", "1342181", "--c", "0,1e-5")
    assert code == 0
    etas = [float(r["eta"]) for r in rows(out)]
    assert etas[0] == pytest.approx(67.48 / 12.2)
    assert etas[1] < 1.05


def test_amortise_measured(capsys):
    code, out, _ = run(capsys, "amortise", "--n", "8", "--runs", "2", "--c", "0,1")
    assert code == 0
    table = rows(out)
    assert table[0]["m"] == "32"
    assert float(table[1]["eta"]) == pytest.approx(1.0, abs=1e-3)


def test_memory_default(capsys):
    _, out, _ = run(capsys, "memory")
    assert [(r["n"], r["ndca_bytes"], r["dcvc_bytes"]) for r in rows(out)] == [
        ("5", "108", "264"), ("10", "168", "464"), ("15", "228", "664"),
        ("20", "288", "864"), ("25", "348", "1064"),
    ]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ndca", "tables", "fkm6"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "order,necklace,ia"
    bad = subprocess.run([sys.executable, "-m", "ndca", "allocate", "--n", "6", "--agent", "7"],
                         capture_output=True, text=True, check=False)
    assert bad.returncode == 2
