import json

import numpy as np
import pytest

from eofbound.cli import (
    EXIT_MISSING_SURFACE,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_VALIDATION,
    EXIT_VERIFY_FAILED,
    main,
)
from eofbound.io import save_state, save_surface
from eofbound.states import maximally_entangled, pure_density, random_separable

from conftest import CACHE_DIR


@pytest.fixture()
def max_ent_file(tmp_path):
    path = tmp_path / "maxent.json"
    save_state(path, pure_density(maximally_entangled(4)), label="maxent")
    return str(path)


@pytest.fixture()
def surface_file(tmp_path, surface_small):
    path = tmp_path / "surface.tsv"
    save_surface(path, surface_small)
    return str(path)


class TestMonotonesCommand:
    def test_maximally_entangled(self, max_ent_file, capsys):
        assert main(["monotones", max_ent_file]) == EXIT_OK
        out = capsys.readouterr().out
        assert "1.5" in out
        assert "MONOTONE_BOUNDARY" in out
        assert "n_R" in out

    def test_product_state(self, tmp_path, capsys):
        psi = np.zeros(16)
        psi[0] = 1.0
        path = tmp_path / "product.json"
        save_state(path, pure_density(psi))
        assert main(["monotones", str(path)]) == EXIT_OK
        out = capsys.readouterr().out
        assert "= 0.000000000000" in out

    def test_missing_file_is_parse_error(self, tmp_path):
        assert main(["monotones", str(tmp_path / "nope.json")]) == EXIT_PARSE

    def test_invalid_trace_is_validation_error(self, tmp_path, capsys):
        rho = pure_density(maximally_entangled(4))
        payload = {
            "format": "eofbound-state", "version": 1, "dims": [4, 4],
            "re": (0.9 * rho.matrix.real).tolist(),
            "im": (0.9 * rho.matrix.imag).tolist(),
        }
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(payload))
        assert main(["monotones", str(path)]) == EXIT_VALIDATION
        assert "trace" in capsys.readouterr().err


class TestBoundCommand:
    def test_maximally_entangled_bound(self, max_ent_file, surface_file, capsys):
        assert main(["bound", max_ent_file, "--surface", surface_file]) == EXIT_OK
        out = capsys.readouterr().out
        assert "doubly constrained) = 2.000000000000" in out
        assert "(n_T only)        = 2.000000000000" in out
        assert "(n_Phi only)      = 1.000000000000" in out

    def test_separable_bound_is_zero(self, tmp_path, surface_file, rng, capsys):
        path = tmp_path / "sep.json"
        save_state(path, random_separable(rng, dim_b=4))
        assert main(["bound", str(path), "--surface", surface_file]) == EXIT_OK
        out = capsys.readouterr().out
        assert "doubly constrained) = 0.000000000000" in out

    def test_missing_surface_exit_code(self, max_ent_file, tmp_path, capsys):
        code = main(["bound", max_ent_file, "--surface",
                     str(tmp_path / "absent.tsv")])
        assert code == EXIT_MISSING_SURFACE
        assert "build-surface" in capsys.readouterr().err


class TestBuildSurfaceCommand:
    def test_too_small_grid_rejected(self, tmp_path):
        code = main(["build-surface", "--grid", "51", "--output",
                     str(tmp_path / "s.tsv")])
        assert code == EXIT_VALIDATION

    def test_rebuild_is_byte_identical(self, tmp_path, capsys):
        p1, p2 = tmp_path / "a.tsv", tmp_path / "b.tsv"
        assert main(["build-surface", "--grid", "101", "--mu4-step", "1e-2",
                     "--output", str(p1)]) == EXIT_OK
        assert main(["build-surface", "--grid", "101", "--mu4-step", "1e-2",
                     "--output", str(p2)]) == EXIT_OK
        assert p1.read_bytes() == p2.read_bytes()
        assert "max hull gap" in capsys.readouterr().out


class TestCoverageCommand:
    def test_writes_output_file(self, tmp_path, capsys):
        out = tmp_path / "cov.tsv"
        assert main(["coverage", "--mu4", "0.0", "--grid", "41",
                     "--output", str(out)]) == EXIT_OK
        assert out.exists()
        assert "reachable nodes" in capsys.readouterr().out

    def test_invalid_mu4(self, capsys):
        assert main(["coverage", "--mu4", "0.4", "--grid", "41"]) == \
            EXIT_VALIDATION


class TestExportFiguresCommand:
    def test_exports(self, tmp_path, surface_file, capsys):
        out_dir = tmp_path / "figs"
        assert main(["export-figures", "--surface", surface_file,
                     "--output", str(out_dir), "--mu4-list", "0,0.25",
                     "--coverage-grid", "41"]) == EXIT_OK
        names = {p.name for p in out_dir.iterdir()}
        assert "boundaries.tsv" in names
        assert "surface_ext.tsv" in names


class TestVerifyCommand:
    ARGS = ["verify", "--skip-surface", "--resolution", "150",
            "--pure-samples", "300", "--separable-samples", "30",
            "--ensembles", "20"]

    def test_quick_verify_passes_and_writes_json(self, tmp_path, capsys):
        report = tmp_path / "report.json"
        assert main(self.ARGS + ["--json", str(report)]) == EXIT_OK
        out = capsys.readouterr().out
        assert "[PASS]" in out and "[FAIL]" not in out
        payload = json.loads(report.read_text())
        assert payload["passed"] is True

    def test_fixed_seed_reports_identical(self, tmp_path):
        r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
        assert main(self.ARGS + ["--seed", "5", "--json", str(r1)]) == EXIT_OK
        assert main(self.ARGS + ["--seed", "5", "--json", str(r2)]) == EXIT_OK
        assert r1.read_bytes() == r2.read_bytes()

    def test_verify_with_surface(self, surface_file, tmp_path, capsys):
        args = ["verify", "--surface", surface_file, "--resolution", "150",
                "--pure-samples", "200", "--separable-samples", "20",
                "--ensembles", "10", "--json", str(tmp_path / "r.json")]
        code = main(args)
        out = capsys.readouterr().out
        # the minimum-resolution surface fails the default-resolution gap
        # criterion, proving the verifier actually gates on it
        assert code == EXIT_VERIFY_FAILED
        assert "hull_gap" in out
