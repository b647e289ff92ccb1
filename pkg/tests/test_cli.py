import io
import json
import subprocess
import sys

import pytest

from drinfeld.cli import EXIT_BUDGET, EXIT_OK, EXIT_USAGE, int_list, main


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def test_int_list():
    assert int_list("2..4") == [2, 3, 4]
    assert int_list("5") == [5]
    assert int_list("2,7") == [2, 7]


def test_count_range():
    code, out = run("count", "--d", "2", "--q", "2", "--m", "2..4")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert len(lines) == 4 and lines[1] == "2,2,2,2,2,6,3,1"


def test_count_below_rank():
    code, out = run("count", "--d", "3", "--q", "2", "--m", "2")
    assert code == EXIT_OK and out.splitlines()[1].split(",")[3] == "0"


def test_count_budget_exit():
    assert run("count", "--d", "4", "--q", "3", "--m", "9")[0] == EXIT_BUDGET


def test_count_json():
    code, out = run("count", "--d", "2", "--q", "3", "--m", "2", "--format", "json")
    assert code == EXIT_OK and json.loads(out)[0]["classes"] == 2


def test_verify_lemma():
    code, out = run("verify", "lemma-aa", "--d", "3", "--q", "2", "--i", "2")
    assert code == EXIT_OK
    names = {l.split()[0] for l in out.splitlines()}
    assert {"check=lemma-aa.shape", "check=lemma-aa.valuation", "check=lemma-aa.residue",
            "check=lemma-aa.pole"} <= names
    assert all(l.endswith("PASS") for l in out.splitlines())


def test_verify_quotient():
    code, out = run("verify", "quotient", "--d", "3", "--q", "2", "--m", "3", "--i", "1")
    assert code == EXIT_OK
    assert "check=quotient.U_I.constancy d=3 q=2 m=3 i=1 PASS" in out
    assert "check=quotient.U_I.separation d=3 q=2 m=3 i=1 PASS" in out


def test_verify_factorization_reports_constant():
    code, out = run("verify", "factorization", "--d", "3", "--q", "3", "--i", "1")
    assert code == EXIT_OK and "C=2" in out


def test_verify_json_records():
    code, out = run("verify", "covering", "--d", "2", "--q", "2", "--m", "2", "--format", "json")
    recs = json.loads(out)
    assert code == EXIT_OK
    assert any(r.get("check") == "covering.totals" and r["result"] == "PASS" for r in recs)


def test_enumerate():
    assert len(run("enumerate", "omega", "--d", "2", "--q", "2", "--m", "2")[1].splitlines()) == 3
    code, out = run("enumerate", "dl", "--d", "2", "--q", "2", "--m", "2", "--format", "json")
    assert code == EXIT_OK and len(json.loads(out)) == 6


def test_orbits():
    code, out = run("orbits", "--group", "U_I", "--i", "1", "--d", "3", "--q", "2", "--m", "3")
    rows = out.splitlines()[1:]
    assert code == EXIT_OK and len(rows) == 24
    assert len({r.split(",")[0] for r in rows}) == 6


def test_usage_errors():
    assert run("count", "--d", "2", "--q", "6", "--m", "2")[0] == EXIT_USAGE
    assert run("orbits", "--group", "U_I", "--d", "3", "--q", "2", "--m", "3")[0] == EXIT_USAGE
    assert run("count", "--d", "2", "--q", "2", "--m", "3", "--modulus", "1,1,1,1")[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nonsense"])
    assert exc.value.code == EXIT_USAGE


def test_modulus_override_changes_encoding_not_counts():
    a = run("count", "--d", "2", "--q", "2", "--m", "3", "--modulus", "1,0,1,1")
    b = run("count", "--d", "2", "--q", "2", "--m", "3")
    assert a == b
    pa = run("enumerate", "omega", "--d", "2", "--q", "2", "--m", "3", "--modulus", "1,0,1,1")[1]
    pb = run("enumerate", "omega", "--d", "2", "--q", "2", "--m", "3")[1]
    assert len(pa.splitlines()) == len(pb.splitlines())


def test_jobs_do_not_change_output():
    args = ["verify", "quotient", "--d", "2,3", "--q", "2", "--m", "3,4"]
    assert run(*args) == run(*args, "--jobs", "2")


def test_quick_suite_and_module_entry():
    proc = subprocess.run([sys.executable, "-m", "drinfeld", "verify", "all", "--quick"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == EXIT_OK
    assert "FAIL" not in proc.stdout and proc.stdout.count("PASS") > 100
