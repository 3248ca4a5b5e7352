import io
import json
import os

import pytest

from hallalg.cli import main


def run_cli(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


class TestIsoclasses:
    def test_kronecker_delta_rows(self):
        code, out = run_cli(["isoclasses", "--quiver", "k2", "--q", "2", "--d", "1,1"])
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 5  # header + 4 classes
        assert lines[0].split() == ["class", "aut", "orbit_size"]

    def test_nilpotent_selector(self):
        code, out = run_cli(["isoclasses", "--quiver", "cr:2", "--q", "2",
                             "--d", "1,1", "--format", "json"])
        assert code == 0
        rows = json.loads(out)
        assert sorted(r["class"] for r in rows) == ["S1[1]+S2[1]", "S1[2]", "S2[2]"]

    def test_bad_selector(self):
        code, _ = run_cli(["isoclasses", "--quiver", "q9", "--d", "1,1"])
        assert code == 2

    def test_bad_dimension(self):
        code, _ = run_cli(["isoclasses", "--quiver", "k2", "--d", "1,1,1"])
        assert code == 2


class TestHallNum:
    def test_documented_example(self):
        code, out = run_cli(["hallnum", "--quiver", "c1", "--q", "2",
                             "--L", "(1,1)", "--M", "(1)", "--N", "(1)"])
        assert code == 0
        assert out.strip() == "3"

    def test_multisegment_syntax(self):
        code, out = run_cli(["hallnum", "--quiver", "cr:2", "--q", "3",
                             "--L", "S1[2]", "--M", "S1[1]", "--N", "S2[1]",
                             "--format", "json"])
        assert code == 0
        assert json.loads(out)["value"] == 1

    def test_brute_selector_rejected(self):
        code, _ = run_cli(["hallnum", "--quiver", "k2", "--q", "2",
                           "--L", "(1)", "--M", "(1)", "--N", "(1)"])
        assert code == 2


class TestHallPoly:
    def test_lines_polynomial(self):
        code, out = run_cli(["hallpoly", "--quiver", "c1",
                             "--L", "(1,1)", "--M", "(1)", "--N", "(1)"])
        assert code == 0
        assert out.strip() == "q+1"


class TestPrimitive:
    def test_full_dimension(self):
        code, out = run_cli(["primitive", "--quiver", "k2", "--q", "2",
                             "--d", "1,1", "--format", "json"])
        assert code == 0
        assert json.loads(out)["dim"] == 2

    def test_regular_restriction(self):
        code, out = run_cli(["primitive", "--quiver", "k2", "--q", "2",
                             "--d", "1,1", "--reg", "--format", "json"])
        assert code == 0
        assert json.loads(out)["dim"] == 3

    def test_reg_requires_k2(self):
        code, _ = run_cli(["primitive", "--quiver", "a2", "--q", "2",
                           "--d", "1,1", "--reg"])
        assert code == 2


class TestVerify:
    def test_xi_json(self):
        code, out = run_cli(["verify", "xi", "--n", "8", "--format", "json"])
        assert code == 0
        data = json.loads(out)
        assert data["check"] == "xi"
        assert data["params"] == {"n": 8}
        assert data["status"] == "pass"
        assert "elapsed_ms" in data

    def test_single_cells(self):
        code, out = run_cli(["verify", "pairing", "--r", "2", "--n", "1",
                             "--q", "3", "--format", "json"])
        assert code == 0
        assert json.loads(out)["status"] == "pass"

    def test_unknown_check(self):
        code, _ = run_cli(["verify", "nonsense"])
        assert code == 2

    def test_missing_check(self):
        code, _ = run_cli(["verify"])
        assert code == 2


class TestElement:
    def test_cyclic_pnr_explicit(self):
        code, out = run_cli(["element", "--family", "cyclic_pnr", "--r", "2",
                             "--n", "1", "--q", "3"])
        assert code == 0
        assert "(-2)*[S1[1]+S2[1]]" in out  # 1 - q at q = 3

    def test_jordan_symbolic(self):
        code, out = run_cli(["element", "--family", "jordan_pn", "--n", "2",
                             "--symbolic"])
        assert code == 0
        data = json.loads(out)
        assert {t["coeff"] for t in data["terms"]} == {"1", "-q+1"}

    def test_kron_difference(self):
        code, out = run_cli(["element", "--family", "kron_pk2", "--n", "1",
                             "--q", "2", "--format", "json"])
        assert code == 0
        assert len(json.loads(out)["terms"]) == 2

    def test_symbolic_hallnum(self):
        code, out = run_cli(["hallnum", "--quiver", "c1", "--L", "(1,1)",
                             "--M", "(1)", "--N", "(1)", "--symbolic"])
        assert code == 0
        assert out.strip() == "q+1"

    def test_bad_family(self, capsys):
        import pytest as _pytest
        with _pytest.raises(SystemExit):
            run_cli(["element", "--family", "mystery"])


class TestVerifyAll:
    def test_full_suite_exits_zero(self):
        code, out = run_cli(["verify", "--all"])
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 12
        assert all("PASS" in line for line in lines)

    def test_failure_exits_one(self, monkeypatch):
        from hallalg import suite
        from hallalg.report import VerificationReport

        def failing():
            return VerificationReport("stub", {}, "fail", "L", "R", 0, "forced")

        monkeypatch.setattr(suite, "CRITERIA",
                            ((1, "stub", failing),))
        import hallalg.cli as cli
        monkeypatch.setattr(cli, "run_all",
                            lambda jobs=1: [(1, "stub", failing())])
        code, out = run_cli(["verify", "--all"])
        assert code == 1
        assert "FAIL" in out


class TestFourierCommand:
    def test_a2_check(self):
        code, out = run_cli(["fourier", "--check", "a2", "--q", "2",
                             "--format", "json"])
        assert code == 0
        assert json.loads(out)["status"] == "pass"

    def test_glsum(self):
        code, out = run_cli(["fourier", "--check", "glsum", "--n", "2", "--q", "3"])
        assert code == 0
        assert json.loads(out)["value"] == "3"


class TestCache:
    def test_warm_run_byte_identical(self, tmp_path):
        args = ["isoclasses", "--quiver", "k2", "--q", "2", "--d", "2,1",
                "--cache-dir", str(tmp_path), "--format", "json"]
        code1, cold = run_cli(args)
        assert code1 == 0
        files = os.listdir(tmp_path)
        assert files, "cache file was not written"
        code2, warm = run_cli(args)
        assert code2 == 0
        assert cold == warm

    def test_hallnum_cache_roundtrip(self, tmp_path):
        args = ["hallnum", "--quiver", "c1", "--q", "2", "--L", "(2,1)",
                "--M", "(1)", "--N", "(2)", "--cache-dir", str(tmp_path)]
        code1, cold = run_cli(args)
        code2, warm = run_cli(args)
        assert code1 == code2 == 0
        assert cold == warm == "2\n"

    def test_corrupt_cache_recomputed(self, tmp_path):
        args = ["hallnum", "--quiver", "c1", "--q", "2", "--L", "(1,1)",
                "--M", "(1)", "--N", "(1)", "--cache-dir", str(tmp_path)]
        code1, cold = run_cli(args)
        for name in os.listdir(tmp_path):
            with open(tmp_path / name, "w") as fh:
                fh.write("{ not json")
        code2, warm = run_cli(args)
        assert code1 == code2 == 0
        assert cold == warm

    def test_stale_version_ignored(self, tmp_path):
        args = ["isoclasses", "--quiver", "k2", "--q", "2", "--d", "1,1",
                "--cache-dir", str(tmp_path), "--format", "json"]
        code1, cold = run_cli(args)
        for name in os.listdir(tmp_path):
            path = tmp_path / name
            data = json.loads(path.read_text())
            data["version"] = "something-older"
            data["classes"] = []
            path.write_text(json.dumps(data))
        code2, warm = run_cli(args)
        assert code2 == 0
        assert warm == cold  # stale entry was ignored and rebuilt
