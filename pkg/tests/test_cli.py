import json
import subprocess
import sys
from io import StringIO

import pytest

from paleyparity import __version__
from paleyparity.cli import main


def run(*argv):
    out, err = StringIO(), StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def records(text):
    return [json.loads(ln) for ln in text.splitlines() if ln]


def test_coeven_q13():
    code, out, _ = run("coeven", "--q", "13")
    rec = records(out)[0]
    assert code == 0 and rec["count"] == "2" and rec["dimension"] == 1
    m = rec["manifest"]
    assert m["tool"] == "paleyparity" and m["version"] == __version__
    assert m["subcommand"] == "coeven" and m["params"]["q"] == 13


def test_coeven_listing_and_brute():
    code, out, _ = run("coeven", "--q", "17", "--list", "3")
    recs = records(out)
    assert recs[0]["count"] == "512"
    assert len([r for r in recs if "part1" in r]) == 3
    assert recs[-1]["truncated"] is True
    _, out, _ = run("coeven", "--q", "9", "--method", "brute")
    assert records(out)[0]["count"] == "32"


def test_not_prime_power():
    code, out, err = run("coeven", "--q", "12")
    assert code == 1 and out == ""
    assert json.loads(err)["error_kind"] == "NotPrimePower"


def test_tournament_is_rejected_for_coeven():
    code, _, err = run("coeven", "--q", "7")
    assert code == 1 and json.loads(err)["error_kind"] == "DomainError"


@pytest.mark.parametrize("argv", [[], ["nope"], ["coeven"], ["mds"], ["census", "--q", "x", "--r-min", "1"],
                                  ["--workers", "0", "coeven", "--q", "13"]])
def test_usage_errors_exit_2(argv):
    code, _, err = run(*argv)
    assert code == 2 and json.loads(err)["error_kind"] == "UsageError"


def test_census_tournament_pairs():
    code, out, _ = run("census", "--q", "7", "--r-min", "2")
    rec = records(out)[0]
    assert code == 0 and int(rec["even"]) == 0 and rec["r"] == 2


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("PALEYPARITY_BUDGET", "100")
    code, _, err = run("census", "--q", "13", "--r-min", "4")
    assert code == 1 and json.loads(err)["error_kind"] == "BudgetExceeded"
    code, _, _ = run("--budget", "100000", "census", "--q", "13", "--r-min", "4")
    assert code == 0
    monkeypatch.setenv("PALEYPARITY_BUDGET", "lots")
    assert run("field-info", "--q", "5")[0] == 2


def test_field_info_and_paley():
    _, out, _ = run("field-info", "--q", "9")
    rec = records(out)[0]
    assert rec["q"] == 9 and rec["paley"] == "graph" and rec["minus_one_is_square"]
    _, out, _ = run("paley", "--q", "13")
    rec = records(out)[0]
    assert rec["edges"] == 39 and rec["rank2"] == 12
    _, out, _ = run("paley", "--q", "5", "--edges")
    assert out.splitlines() == ["0 1", "0 4", "1 2", "2 3", "3 4"]


def test_bound_and_weil():
    _, out, _ = run("bound", "--n", "12", "--theta", "6")
    assert records(out)[0]["bound"] == "11"
    code, out, _ = run("weil", "--trials", "50", "--seed", "4")
    rec = records(out)[-1]
    assert code == 0 and rec["ok"] and rec["trials"] == 50


def test_mds_search_verify_round_trip(tmp_path):
    code, out, _ = run("mds", "search", "--q", "13", "--n", "4")
    recs = records(out)
    assert code == 0 and recs[-1]["summary"] and recs[-1]["count"] == "130"
    assert len(recs) == 131
    path = tmp_path / "codes.jsonl"
    path.write_text(out)
    code, vout, _ = run("mds", "verify", "--file", str(path))
    assert code == 0 and records(vout)[-1] == {"records": 130, "failed": 0, "manifest": records(vout)[-1]["manifest"]}

    tampered = recs[0]
    tampered["generator"][0][0] = (tampered["generator"][0][0] + 1) % 13
    path.write_text(json.dumps(tampered) + "\n")
    code, _, err = run("mds", "verify", "--file", str(path))
    assert code == 1 and json.loads(err)["error_kind"] == "VerificationFailed"
    code, _, err = run("mds", "verify", "--file", str(tmp_path / "missing"))
    assert code == 1


def test_mds_text_format():
    _, out, _ = run("mds", "search", "--q", "13", "--n", "3", "--limit", "2", "--format", "text")
    blocks = [b.splitlines() for b in out.strip().split("\n\n")]
    assert len(blocks) == 2
    assert all(b[0] == "13 4 2" and len(b) == 3 for b in blocks)


def test_coeven_pairs_and_random_expect():
    _, out, _ = run("coeven-pairs", "--q", "17", "--cap", "2")
    rec = records(out)[0]
    assert rec["count"] == "255" and len(rec["witnesses"]) == 2
    _, out, _ = run("random-expect", "--kind", "digraph", "--n", "10", "--p", "1/2", "--r", "4",
                    "--trials", "500", "--seed", "1")
    rec = records(out)[0]
    assert rec["closed_form"] == "105/8" and rec["manifest"]["seed"] == 1
    code, _, err = run("random-expect", "--n", "10", "--p", "3/2", "--r", "4")
    assert code == 1 and json.loads(err)["error_kind"] == "DomainError"


def test_output_ignores_worker_count():
    argv = ["census", "--q", "29", "--r-min", "3", "--r-max", "4", "--mode", "sample",
            "--samples", "5000", "--seed", "3"]
    one = run("--workers", "1", *argv)[1]
    many = run("--workers", "3", *argv)[1]
    assert one == many


def test_timing_flag_appends_wall_time():
    _, out, _ = run("--timing", "bound", "--n", "4", "--theta", "2")
    assert "wall_time" in records(out)[-1]


def test_verify_all_subset():
    code, out, _ = run("verify-all", "--only", "1,3")
    recs = records(out)
    assert code == 0 and [r.get("criterion") for r in recs[:2]] == [1, 3]
    assert recs[-1]["failed"] == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "paleyparity", "coeven", "--q", "13"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["count"] == "2"
    proc = subprocess.run([sys.executable, "-m", "paleyparity", "--version"],
                          capture_output=True, text=True, check=False)
    assert proc.stdout.strip() == __version__
