import json
import logging

import pandas as pd
import pytest

from src.core.app import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main
from src.core.designs import design_to_dict, icosahedron_design, octahedron_design
from src.utils.io import read_json, sha256_file


@pytest.fixture(autouse=True)
def _reset_logging():
    root = logging.getLogger()
    level = root.level
    yield
    for handler in [h for h in root.handlers if getattr(h, "_randcorr", False)]:
        root.removeHandler(handler)
    root.setLevel(level)


def run(capsys, tmp_path, *argv):
    code = main(["--out", str(tmp_path), *argv])
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


class TestMoments:
    def test_bell(self, capsys, tmp_path):
        code, payload = run(capsys, tmp_path, "moments", "--state", "bell")
        assert code == EXIT_OK
        assert payload["r2"] == pytest.approx(1 / 3, abs=1e-12)
        assert payload["r4"] == pytest.approx(1 / 5, abs=1e-12)
        assert payload["verdicts"][0]["verdict"] == "entangled"

    def test_bd_closed_form_with_r6(self, capsys, tmp_path):
        code, payload = run(
            capsys, tmp_path, "moments", "--state", "bd:0.5,0.3,0.1", "--engine", "bd", "--t", "2,4,6"
        )
        assert code == EXIT_OK
        assert payload["engine"] == "bd-closed-form"
        assert [v["criterion"] for v in payload["verdicts"]] == ["F", "R6"]
        assert payload["verdicts"][1]["verdict"] == "separable"

    def test_pair_marginal(self, capsys, tmp_path):
        code, payload = run(capsys, tmp_path, "moments", "--state", "ghz:3", "--pair", "0,2")
        assert code == EXIT_OK
        assert payload["nqubits"] == 2
        assert payload["r2"] == pytest.approx(1 / 9, abs=1e-12)

    def test_monte_carlo(self, capsys, tmp_path):
        code, payload = run(
            capsys, tmp_path, "--seed", "3", "moments", "--state", "w:3", "--engine", "mc", "--samples", "2000"
        )
        assert code == EXIT_OK
        assert payload["nsamples"] == 2000
        assert "verdicts" not in payload

    @pytest.mark.parametrize(
        "argv",
        [
            ["moments", "--state", "banana"],
            ["moments", "--state", "ghz:3", "--engine", "bd"],
            ["moments", "--state", "bell", "--t", "2"],
            ["moments", "--state", "bell", "--pair", "0"],
            ["moments", "--state", "bd:1,1,1"],
            ["nonsense"],
        ],
    )
    def test_usage_errors(self, capsys, tmp_path, argv):
        code, _ = run(capsys, tmp_path, *argv)
        assert code == EXIT_USAGE

    def test_no_manifest_without_outputs(self, capsys, tmp_path):
        run(capsys, tmp_path, "moments", "--state", "bell")
        assert not list(tmp_path.glob("manifest_*.json"))

    def test_design_file_is_verified(self, capsys, tmp_path):
        path = tmp_path / "ico.json"
        path.write_text(json.dumps(design_to_dict(icosahedron_design())))
        code, payload = run(capsys, tmp_path, "moments", "--state", "bell", "--design-file", str(path))
        assert code == EXIT_OK
        assert payload["r4"] == pytest.approx(1 / 5, abs=1e-12)

    def test_overclaimed_design_file_rejected(self, capsys, tmp_path):
        payload = design_to_dict(octahedron_design())
        payload["strength"] = 5
        path = tmp_path / "octa.json"
        path.write_text(json.dumps(payload))
        code, out = run(capsys, tmp_path, "moments", "--state", "bell", "--design-file", str(path))
        assert code == EXIT_FAILURE
        assert out is None


class TestDesign:
    def test_build_sl2f5(self, capsys, tmp_path):
        code, payload = run(capsys, tmp_path, "design", "build", "sl2f5")
        assert code == EXIT_OK
        assert payload["size"] == 60
        assert payload["directions"] == 30
        assert "closure" in payload

    def test_printed_generators_fail(self, capsys, tmp_path):
        code, _ = run(capsys, tmp_path, "design", "build", "sl2f5", "--printed-generators")
        assert code == EXIT_FAILURE

    def test_verify_strength(self, capsys, tmp_path):
        code, payload = run(capsys, tmp_path, "design", "verify", "octahedron", "--strength", "3")
        assert code == EXIT_OK and payload["passed"]
        code, payload = run(capsys, tmp_path, "design", "verify", "octahedron", "--strength", "4")
        assert code == EXIT_FAILURE and not payload["passed"]

    def test_verify_overclaimed_file(self, capsys, tmp_path):
        payload = design_to_dict(octahedron_design())
        payload["strength"] = 5
        path = tmp_path / "octa.json"
        path.write_text(json.dumps(payload))
        code, _ = run(capsys, tmp_path, "design", "verify", "--file", str(path))
        assert code == EXIT_FAILURE

    def test_project_and_save(self, capsys, tmp_path):
        code, payload = run(capsys, tmp_path, "design", "project", "clifford", "--save")
        assert code == EXIT_OK
        assert payload["size"] == 6
        assert payload["verification"]["passed"]
        manifest = read_json(tmp_path / "manifest_design.json")
        assert len(manifest["outputs"]) == 1

    def test_project_spherical_is_usage_error(self, capsys, tmp_path):
        code, _ = run(capsys, tmp_path, "design", "project", "icosahedron")
        assert code == EXIT_USAGE

    def test_missing_name(self, capsys, tmp_path):
        code, _ = run(capsys, tmp_path, "design", "build")
        assert code == EXIT_USAGE


class TestFigures:
    def test_fig2a(self, capsys, tmp_path):
        code, _ = run(capsys, tmp_path, "fig2a", "--points", "11")
        assert code == EXIT_OK
        curves = pd.read_csv(tmp_path / "fig2a.csv")
        assert list(curves.columns) == ["r2", "f_lb", "f_ub", "f_lb_sep", "f_ub_ent"]
        assert len(curves) == 11
        labels = pd.read_csv(tmp_path / "fig2a_points.csv")["label"].tolist()
        assert labels == ["A", "B", "C", "D1", "D2", "D3", "D4", "D5"]
        manifest = read_json(tmp_path / "manifest_fig2a.json")
        assert manifest["outputs"]["fig2a.csv"] == sha256_file(tmp_path / "fig2a.csv")
        assert manifest["seed"] == 0

    def test_fig2b(self, capsys, tmp_path):
        code, _ = run(capsys, tmp_path, "fig2b", "--nmax", "8")
        assert code == EXIT_OK
        df = pd.read_csv(tmp_path / "fig2b.csv")
        assert bool(df.query("n == 7 and k == 2")["detected"].iloc[0]) is False

    def test_scan_bd_is_byte_deterministic(self, capsys, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        code_a, payload = run(capsys, a, "--seed", "7", "scan-bd", "--count", "300")
        code_b, _ = run(capsys, b, "--seed", "7", "scan-bd", "--count", "300")
        assert code_a == code_b == EXIT_OK
        assert payload["violations"] == 0
        assert (a / "scan_bd.csv").read_bytes() == (b / "scan_bd.csv").read_bytes()

    def test_scan_bd_defaults(self, capsys, tmp_path):
        code, payload = run(capsys, tmp_path, "scan-bd")
        assert code == EXIT_OK
        assert payload["count"] == 10_000
        assert payload["violations"] == 0
        assert payload["r6_missed"] == 0
        summary = pd.read_csv(tmp_path / "scan_bd_summary.csv")
        assert "missed_rank_deficient" in summary.columns

    def test_fig3a_thread_independent(self, capsys, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        run(capsys, a, "--threads", "1", "fig3a", "--count", "6", "--class", "fullysep")
        run(capsys, b, "--threads", "3", "fig3a", "--count", "6", "--class", "fullysep")
        name = "fig3a_fullysep.csv"
        assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_fig3b_range(self, capsys, tmp_path):
        code, _ = run(capsys, tmp_path, "fig3b", "--nmax", "9")
        assert code == EXIT_USAGE


@pytest.mark.slow
def test_calibrate(capsys, tmp_path):
    target = tmp_path / "line_params.json"
    code, payload = run(
        capsys, tmp_path, "calibrate", "--nmax", "3", "--restarts", "8", "--params-file", str(target)
    )
    assert code == EXIT_OK
    assert payload["3"]["slope_m"] < 0
    assert read_json(target)["3"]["seed"] == 0


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "randcorr" in capsys.readouterr().out
