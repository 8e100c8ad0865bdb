import csv
import io
import json

import pytest

from ermrev.cli import run
from ermrev.curve import quadrilateral, triangular, write_curve


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def tri_file(tmp_path):
    p = tmp_path / "tri.curve"
    write_curve(triangular(1), p)
    return str(p)


class TestExamples:
    def test_erm_exact(self, tri_file):
        code, out, _ = call("erm", "--curve", tri_file, "--n", "2", "--exact", "--tol", "1e-9")
        assert code == 0
        assert "0.666666667" in out

    def test_bounds_minimize(self):
        code, out, _ = call("bounds", "--minimize", "--format", "json")
        assert code == 0
        d = json.loads(out)
        assert d["q_star"] == pytest.approx(0.713832, abs=1e-5)
        assert d["bound"] == pytest.approx(0.50922, abs=1e-5)
        assert d["pass"] is True

    def test_reproduce_prop1_json(self):
        code, out, _ = call("reproduce", "prop1", "--format", "json")
        assert code == 0
        d = json.loads(out)
        assert d["ERM(F,1)"] == pytest.approx(0.95, abs=1e-9)
        assert d["ERM(F,2)"] == pytest.approx(0.9166667, abs=1e-6)
        assert d["pass"] is True


class TestErm:
    def test_n1(self, tri_file):
        code, out, _ = call("erm", "--curve", tri_file, "--n", "1", "--format", "json")
        assert code == 0 and json.loads(out)["value"] == pytest.approx(0.5, abs=1e-15)

    def test_mc_default_for_large_n(self, tri_file):
        code, out, _ = call("erm", "--curve", tri_file, "--n", "5", "--trials", "20000", "--format", "json")
        d = json.loads(out)
        assert code == 0 and d["trials"] == 20000 and d["std_error"] > 0

    def test_exact_large_n_is_usage_error(self, tri_file):
        code, _, err = call("erm", "--curve", tri_file, "--n", "3", "--exact")
        assert code == 2 and err.startswith("ermrev: usage error")

    def test_bad_trials(self, tri_file):
        assert call("erm", "--curve", tri_file, "--mc", "--trials", "0")[0] == 2

    def test_exact_and_mc_exclusive(self, tri_file):
        assert call("erm", "--curve", tri_file, "--exact", "--mc")[0] == 2


class TestErrors:
    def test_unknown_subcommand(self):
        code, out, err = call("frobnicate")
        assert code == 2 and out == "" and err.count("\n") == 1

    def test_missing_file(self, tmp_path):
        code, _, err = call("erm", "--curve", str(tmp_path / "nope.curve"))
        assert code == 2 and "FileNotFoundError" in err

    def test_parse_error_reports_line(self, tmp_path):
        p = tmp_path / "bad.curve"
        p.write_text("# header\n0 0\n0.5 abc\n1 1\n")
        code, _, err = call("erm", "--curve", str(p))
        assert code == 2
        assert "CurveParseError" in err and "line 3" in err
        assert err.count("\n") == 1

    def test_nonconcave_file(self, tmp_path):
        p = tmp_path / "bad.curve"
        p.write_text("0 0\n0.5 0.1\n1 1\n")
        code, _, err = call("erm", "--curve", str(p))
        assert code == 2 and "NonConcave" in err

    def test_bad_emit_params(self):
        assert call("emit-curve", "quadrilateral", "0.1")[0] == 2
        assert call("emit-curve", "quadrilateral", "0.1", "0.05")[0] == 2

    def test_failed_reproduction_exits_one(self, monkeypatch):
        import ermrev.experiments as ex
        from ermrev.experiments import ExperimentReport, Target

        def failing(tol):
            rep = ExperimentReport("prop1")
            rep.add("x", 1.0, Target("x", 0.0, 0.0))
            return rep

        monkeypatch.setattr(ex, "reproduce_prop1", failing)
        code, out, _ = call("reproduce", "prop1", "--format", "csv")
        assert code == 1 and out.rstrip().endswith("pass,false")

    def test_switch_failure_goes_to_given_stream(self, monkeypatch):
        import ermrev.experiments as ex
        from ermrev.errors import SearchFailed

        def boom(tol):
            raise SearchFailed("no")

        monkeypatch.setattr(ex, "find_switch_pair", boom)
        code, _, err = call("reproduce", "switch")
        assert code == 1 and "no" in err


class TestFormats:
    def test_csv_round_trip(self):
        code, out, _ = call("bounds", "--qstar", "0.7", "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["label", "value"]
        values = {k: float(v) for k, v in rows[1:]}
        from ermrev.bounds import combined_bound

        rep = combined_bound(0.7)
        assert values["combined"] == rep.combined
        assert values["bound_R"] == rep.bound_R

    def test_json_round_trip(self, tri_file):
        from ermrev.engine import erm_mc

        _, out, _ = call("erm", "--curve", tri_file, "--mc", "--trials", "5000", "--seed", "3", "--format", "json")
        est = erm_mc(triangular(1), 2, 5000, 3)
        d = json.loads(out)
        assert d["value"] == est.value and d["std_error"] == est.std_error

    def test_table(self):
        _, out, _ = call("bounds", "--qstar", "0.5", "--digits", "4")
        assert "combined" in out and "delta" in out

    @pytest.mark.parametrize("fmt", ["table", "csv", "json"])
    def test_byte_identical_reruns(self, fmt, tri_file):
        argv = ("erm", "--curve", tri_file, "--mc", "--n", "3", "--trials", "70000", "--seed", "9", "--format", fmt)
        assert call(*argv)[1] == call(*argv)[1]

    def test_byte_identical_across_threads(self, tri_file, monkeypatch):
        argv = ("erm", "--curve", tri_file, "--mc", "--trials", "200000", "--format", "csv")
        monkeypatch.setenv("ERM2_THREADS", "1")
        a = call(*argv)[1]
        monkeypatch.setenv("ERM2_THREADS", "4")
        assert call(*argv)[1] == a


class TestEmit:
    def test_to_stdout_round_trips(self):
        from ermrev.curve import parse_curve

        code, out, _ = call("emit-curve", "quadrilateral", "0.1", "0.22")
        assert code == 0 and out.startswith("#")
        assert parse_curve(out) == quadrilateral(0.1, 0.22)

    def test_to_file_then_erm(self, tmp_path):
        p = tmp_path / "ter.curve"
        code, _, _ = call("emit-curve", "truncated-equal-revenue", "10", "--out", str(p))
        assert code == 0
        code, out, _ = call("erm", "--curve", str(p), "--format", "json")
        assert json.loads(out)["value"] == pytest.approx(11 / 12, abs=1e-9)


class TestOtherCommands:
    @pytest.mark.parametrize("which", ["prop3", "switch"])
    def test_reproduce(self, which):
        code, out, _ = call("reproduce", which, "--format", "json")
        assert code == 0 and json.loads(out)["pass"] is True

    def test_theorem(self):
        code, out, _ = call("reproduce", "theorem", "--curves", "10", "--format", "json")
        assert code == 0 and json.loads(out)["min ERM(F,2)/OPT"] > 0.509

    def test_search_triangular(self):
        code, out, _ = call("search", "triangular", "--grid", "50", "--format", "json")
        assert code == 0 and json.loads(out)["ratio"] == pytest.approx(0.6166702368, abs=1e-8)

    def test_module_entry(self):
        import subprocess
        import sys

        res = subprocess.run([sys.executable, "-m", "ermrev", "bounds", "--qstar", "0.5"], capture_output=True, text=True)
        assert res.returncode == 0 and "combined" in res.stdout
