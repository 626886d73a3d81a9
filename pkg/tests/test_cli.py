import csv
import hashlib
import json

import pytest

from excitonqfi.cli import main
from excitonqfi.spectra import synthesize_extinction


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def run(*argv):
    return main([str(a) for a in argv])


class TestChainAndRing:
    def test_ring_superradiant_value(self, tmp_path):
        assert run("ring", "--n", 7, "--out", tmp_path) == 0
        rows = read_csv(tmp_path / "ring.csv")
        by_k = {row["k"]: float(row["fq"]) for row in rows}
        assert by_k["0"] == 19.0
        assert by_k["3"] == 5.0

    def test_chain_band_edge_value(self, tmp_path):
        assert run("chain", "--n", 20, "--k", 1, "--out", tmp_path) == 0
        (row,) = read_csv(tmp_path / "chain.csv")
        assert float(row["fq"]) == pytest.approx(51.917004687782885, rel=1e-12)
        assert int(row["depth"]) == 3

    def test_chain_sweep_mode(self, tmp_path):
        assert run("chain", "--n-max", 12, "--k-list", "1,3,5", "--out", tmp_path) == 0
        rows = read_csv(tmp_path / "chain.csv")
        ns = {int(r["n_sites"]) for r in rows}
        assert ns == set(range(2, 13))
        # k <= n filtering
        assert all(int(r["k"]) <= int(r["n_sites"]) for r in rows)

    def test_oracle_flag_adds_column_and_passes(self, tmp_path):
        assert run("ring", "--n", 6, "--oracle", "--out", tmp_path) == 0
        rows = read_csv(tmp_path / "ring.csv")
        for row in rows:
            assert abs(float(row["fq_oracle"]) - float(row["fq"])) <= 1e-8

    def test_oracle_rejected_beyond_guard(self, tmp_path):
        with pytest.raises(SystemExit):
            run("ring", "--n", 13, "--oracle", "--out", tmp_path)


class TestDimerSweep:
    def test_beta_sweep_concurrence_plateau(self, tmp_path):
        assert run("dimer-sweep", "--preset", "fmo", "--beta-max", 100,
                   "--out", tmp_path) == 0
        rows = read_csv(tmp_path / "dimer_sweep.csv")
        assert len(rows) == 100
        assert float(rows[-1]["concurrence"]) == pytest.approx(0.7006359503889288,
                                                               abs=1e-6)

    def test_theta_sweep_contains_bell_row(self, tmp_path):
        assert run("dimer-sweep", "--theta-sweep", "--out", tmp_path) == 0
        rows = read_csv(tmp_path / "dimer_sweep.csv")
        fq = [float(r["fq_dipole"]) for r in rows]
        assert max(fq) == 4.0
        mid = rows[len(rows) // 2]
        assert float(mid["fq_dipole"]) == 4.0
        assert float(mid["purity_a"]) == 0.5

    def test_missing_parameters_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as err:
            run("dimer-sweep", "--out", tmp_path)
        assert err.value.code == 2


class TestThermalHeatmap:
    def test_all_grid_presets_within_budget(self, tmp_path):
        import time

        start = time.monotonic()
        for grid in ("small", "medium", "large"):
            assert run("thermal-heatmap", "--grid", grid, "--out",
                       tmp_path / grid) == 0
        assert time.monotonic() - start < 10.0

    def test_emits_all_dimer_columns(self, tmp_path):
        assert run("thermal-heatmap", "--grid", "small", "--out", tmp_path) == 0
        rows = read_csv(tmp_path / "thermal_heatmap.csv")
        assert set(rows[0]) == {"sin_2theta", "j_over_kbt", "purity_ab",
                                "purity_a", "concurrence", "fq_dipole", "fq_max"}

    def test_negative_j_half_plane_and_symmetry(self, tmp_path):
        assert run("thermal-heatmap", "--grid", "small", "--out", tmp_path) == 0
        rows = read_csv(tmp_path / "thermal_heatmap.csv")
        cells = {(r["sin_2theta"], r["j_over_kbt"]): r for r in rows}
        for r in rows:
            s = float(r["sin_2theta"])
            if s < 0.0:
                assert float(r["fq_dipole"]) <= 2.0 + 1e-12
            mirror = cells.get((repr(-s), r["j_over_kbt"]))
            if mirror is not None:
                assert abs(float(r["fq_max"]) - float(mirror["fq_max"])) <= 1e-12
                identity = 2.0 + 2.0 * float(r["concurrence"])
                assert abs(float(r["fq_max"]) - identity) <= 1e-10


class TestOptimizeCommand:
    def test_ring_json_payload(self, tmp_path):
        assert run("optimize", "--system", "ring", "--n", 5, "--k", 0,
                   "--seed", 3, "--starts", 4, "--out", tmp_path) == 0
        payload = json.loads((tmp_path / "optimize.json").read_text())
        assert payload["f_max"] == pytest.approx(13.0, abs=1e-6)
        assert payload["f_dipole"] == pytest.approx(13.0, abs=1e-9)
        assert len(payload["bloch"]) == 5
        assert payload["seed"] == 3

    def test_seed_mandatory(self, tmp_path):
        with pytest.raises(SystemExit) as err:
            run("optimize", "--system", "ring", "--n", 5, "--k", 0, "--out", tmp_path)
        assert err.value.code == 2

    def test_byte_identical_rerun(self, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        for out in (a, b):
            assert run("optimize", "--system", "dimer-thermal", "--preset", "fmo",
                       "--temperature", 300, "--seed", 9, "--starts", 4,
                       "--out", out) == 0
        assert (a / "optimize.json").read_bytes() == (b / "optimize.json").read_bytes()


class TestDisorderCommand:
    def test_preset_run_and_rerun_byte_identical(self, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        for out, threads in ((a, 1), (b, 2)):
            assert run("disorder", "--preset", "pic", "--seed", 7,
                       "--realizations", 40, "--threads", threads,
                       "--out", out) == 0
        assert (a / "disorder.csv").read_bytes() == (b / "disorder.csv").read_bytes()
        rows = read_csv(a / "disorder.csv")
        assert rows[0]["mode"] == "diagonal"
        assert {r["seed"] for r in rows} == {"7"}

    def test_config_file_run(self, tmp_path):
        config = tmp_path / "sweep.toml"
        config.write_text("\n".join([
            'topology = "disordered-chain"',
            "n_sites = 8",
            "site_energy_cm1 = 18000.0",
            "jprime_cm1 = 600.0",
            "lattice_a = 1.0",
            "sigma_de_cm1 = 76.8",
            "sigma_dx_a = 0.0",
            "seed = 1",
            "realizations = 30",
            "[sweep]",
            'mode = "diagonal"',
            "sigma_over_j = [0.0, 0.3]",
            "j_over_kbt = [50.0]",
        ]))
        assert run("disorder", "--config", config, "--seed", 5, "--out", tmp_path) == 0
        rows = read_csv(tmp_path / "disorder.csv")
        assert len(rows) == 2
        zero = [r for r in rows if float(r["sigma_over_j"]) == 0.0][0]
        assert float(zero["stderr"]) == 0.0

    def test_seed_mandatory(self, tmp_path):
        with pytest.raises(SystemExit) as err:
            run("disorder", "--preset", "pic", "--out", tmp_path)
        assert err.value.code == 2


class TestSpectrumCommand:
    def test_sum_rule_notes_in_manifest(self, tmp_path):
        assert run("spectrum", "--preset", "fmo", "--out", tmp_path) == 0
        manifest = json.loads((tmp_path / "spectrum_manifest.json").read_text())
        notes = manifest["notes"]
        assert notes["fq_from_spectrum"] == pytest.approx(notes["four_c0"], rel=5e-3)
        assert notes["fq_from_symmetric_correlation"] == pytest.approx(
            notes["fq_from_spectrum"], rel=1e-6)
        rows = read_csv(tmp_path / "spectrum.csv")
        assert set(rows[0]) == {"omega_cm1", "intensity", "band"}

    def test_ground_state_bands_relabeled(self, tmp_path):
        assert run("spectrum", "--preset", "fmo", "--initial", "e0",
                   "--out", tmp_path) == 0
        rows = read_csv(tmp_path / "spectrum.csv")
        assert {r["band"] for r in rows} == {"GSB"}


class TestIngestCommand:
    def test_round_trip(self, tmp_path):
        trace = synthesize_extinction(2.5, 3.336e-27, 20)
        path = tmp_path / "ext.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["omega_cm1", "eps_L_per_mol_cm", "band"])
            for omega, eps, band in zip(trace.omega_cm1, trace.eps, trace.bands):
                writer.writerow([repr(float(omega)), repr(float(eps)), band])
        assert run("ingest", "--input", path, "--mu-ccm", 3.336e-27, "--n", 20,
                   "--out", tmp_path) == 0
        payload = json.loads((tmp_path / "ingest.json").read_text())
        assert payload["fq_per_site"] == pytest.approx(2.5, rel=0.01)
        assert payload["witnessed_depth"] == 3

    def test_missing_columns_usage_error(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(SystemExit) as err:
            run("ingest", "--input", path, "--mu-ccm", 1e-27, "--n", 4,
                "--out", tmp_path)
        assert err.value.code == 2


class TestManifests:
    def test_every_command_writes_valid_manifest(self, tmp_path):
        assert run("chain", "--n", 6, "--out", tmp_path) == 0
        manifest = json.loads((tmp_path / "chain_manifest.json").read_text())
        assert manifest["subcommand"] == "chain"
        assert manifest["version"]
        digest = manifest["outputs"]["chain.csv"]
        raw = hashlib.sha256((tmp_path / "chain.csv").read_bytes()).hexdigest()
        assert digest == f"sha256:{raw}"

    def test_disorder_manifest_notes_coupling_choice(self, tmp_path):
        assert run("disorder", "--preset", "pic", "--seed", 3,
                   "--realizations", 10, "--out", tmp_path) == 0
        manifest = json.loads((tmp_path / "disorder_manifest.json").read_text())
        assert "1/r^3" in manifest["notes"]["coupling"]
        assert manifest["seed"] == 3
        assert manifest["config"]["config_digest"]
