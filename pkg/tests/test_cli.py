from __future__ import annotations

import csv
import hashlib
import json
import math
import shutil
import subprocess

import numpy as np
import pytest

from identangle import (
    DensityMatrix,
    GramMatrix,
    balanced_tritter_rows,
    density_matrix_from_spec,
    ghz_state,
    simulate_counts,
    w_preset,
    write_counts,
)
from identangle.cli import main, read_density_matrix

INV_SQRT2 = 1.0 / math.sqrt(2.0)

GHZ_CONFIG = {
    "label": "ghz-balanced",
    "preset": "ghz",
    "distinguishability": {"gram": [[1, 1, 1], [1, 1, 1], [1, 1, 1]]},
}

DELAY_CONFIG = {
    "preset": "ghz",
    "distinguishability": {"delays": [0.0, 0.0, 0.0], "coherence_length": 1.0},
}


def write_config(tmp_path, data, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def read_report(out_dir):
    return json.loads((out_dir / "report.json").read_text(encoding="utf-8"))


def test_run_ghz_balanced(tmp_path, capsys):
    config = write_config(tmp_path, GHZ_CONFIG)
    out = tmp_path / "out"
    assert main(["run", "--config", config, "--out-dir", str(out)]) == 0
    report = read_report(out)
    assert report["tool"] == "identangle"
    assert report["label"] == "ghz-balanced"
    assert report["p_success"] == pytest.approx(0.25, abs=1e-12)
    assert report["fidelity_ghz"] == pytest.approx(1.0, abs=1e-12)
    assert report["verdict"] == "genuine-GHZ-witnessed"
    assert report["ghz_witness_passed"] is True

    matrix = read_density_matrix(out / report["density_matrix_file"])
    target = ghz_state().vector
    np.testing.assert_allclose(matrix, np.outer(target, target.conj()), atol=1e-15)
    digest = hashlib.sha256((out / "density_matrix.txt").read_bytes()).hexdigest()
    assert report["density_matrix_sha256"] == digest
    assert "wrote" in capsys.readouterr().out


def test_run_w_dft_variant(tmp_path):
    config = write_config(
        tmp_path,
        {
            "preset": "w",
            "w": {"variant": "dft"},
            "distinguishability": {"gram": [[1, 1, 1], [1, 1, 1], [1, 1, 1]]},
        },
    )
    out = tmp_path / "out"
    assert main(["run", "--config", config, "--out-dir", str(out)]) == 0
    report = read_report(out)
    assert report["p_success"] == pytest.approx(1 / 9, abs=1e-12)
    assert report["verdict"] == "genuine-W-witnessed"
    assert report["fidelity_w_max"] == pytest.approx(1.0, abs=1e-9)
    assert report["phi1_pi"] == pytest.approx(0.0, abs=1e-6)
    assert report["phi2_pi"] == pytest.approx(0.0, abs=1e-6)


def test_config_hash_ignores_formatting_but_not_values(tmp_path):
    compact = tmp_path / "a.json"
    compact.write_text(json.dumps(GHZ_CONFIG, separators=(",", ":")), encoding="utf-8")
    spaced = tmp_path / "b.json"
    spaced.write_text(
        json.dumps(dict(reversed(list(GHZ_CONFIG.items()))), indent=4), encoding="utf-8"
    )
    out_a, out_b = tmp_path / "out_a", tmp_path / "out_b"
    assert main(["run", "--config", str(compact), "--out-dir", str(out_a)]) == 0
    assert main(["run", "--config", str(spaced), "--out-dir", str(out_b)]) == 0
    assert read_report(out_a)["config_hash"] == read_report(out_b)["config_hash"]

    changed = dict(GHZ_CONFIG, label="other")
    out_c = tmp_path / "out_c"
    assert main(["run", "--config", write_config(tmp_path, changed, "c.json"),
                 "--out-dir", str(out_c)]) == 0
    assert read_report(out_c)["config_hash"] != read_report(out_a)["config_hash"]


def test_run_outputs_are_byte_identical_across_runs(tmp_path):
    config_data = dict(GHZ_CONFIG, tomography={"shots": 500, "seed": 4})
    config = write_config(tmp_path, config_data)
    out_a, out_b = tmp_path / "first", tmp_path / "second"
    assert main(["run", "--config", config, "--out-dir", str(out_a)]) == 0
    assert main(["run", "--config", config, "--out-dir", str(out_b)]) == 0
    for name in ("density_matrix.txt", "counts.txt", "report.json"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_run_with_tomography_section(tmp_path):
    config_data = dict(GHZ_CONFIG, tomography={"shots": 2000, "seed": 0})
    config = write_config(tmp_path, config_data)
    out = tmp_path / "out"
    assert main(["run", "--config", config, "--out-dir", str(out)]) == 0
    report = read_report(out)
    tomo = report["tomography"]
    assert tomo["shots_per_setting"] == 2000
    assert tomo["seed"] == 0
    assert tomo["num_settings"] == 27
    assert tomo["mle_fidelity_vs_simulated"] > 0.95
    assert (out / tomo["counts_file"]).exists()


def test_seed_flag_overrides_config_seed(tmp_path):
    config_data = dict(GHZ_CONFIG, tomography={"shots": 400, "seed": 0})
    config = write_config(tmp_path, config_data)
    out_default, out_seeded = tmp_path / "default", tmp_path / "seeded"
    assert main(["run", "--config", config, "--out-dir", str(out_default)]) == 0
    assert main(
        ["run", "--config", config, "--out-dir", str(out_seeded), "--seed", "9"]
    ) == 0
    assert read_report(out_seeded)["tomography"]["seed"] == 9
    assert (out_default / "counts.txt").read_bytes() != (out_seeded / "counts.txt").read_bytes()


def test_run_csv_report(tmp_path):
    config = write_config(tmp_path, GHZ_CONFIG)
    out = tmp_path / "out"
    assert main(["run", "--config", config, "--out-dir", str(out), "--format", "csv"]) == 0
    lines = (out / "report.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "key,value"
    values = {}
    for line in lines[1:]:
        key, _, raw = line.partition(",")
        values[key] = json.loads(raw)
    assert values["verdict"] == "genuine-GHZ-witnessed"
    assert values["p_success"] == pytest.approx(0.25)
    assert values["ghz_witness_passed"] is True


def test_scan_uniform_overlap_follows_coherence_law(tmp_path):
    config = write_config(tmp_path, GHZ_CONFIG)
    out = tmp_path / "out"
    rc = main(
        ["scan", "--config", config, "--param", "g", "--start", "0", "--stop", "1",
         "--steps", "6", "--out-dir", str(out), "--format", "csv"]
    )
    assert rc == 0
    with open(out / "scan.csv", newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    header, data = rows[0], rows[1:]
    assert header[0] == "g"
    g_col = header.index("g")
    f_col = header.index("fidelity_ghz")
    p_col = header.index("p_success")
    assert len(data) == 6
    for row in data:
        g = json.loads(row[g_col])
        assert json.loads(row[p_col]) == pytest.approx(0.25, abs=1e-12)
        assert json.loads(row[f_col]) == pytest.approx((1 + g**3) / 2, abs=1e-9)


def test_scan_delay_decoheres_smoothly(tmp_path):
    config = write_config(tmp_path, DELAY_CONFIG)
    out = tmp_path / "out"
    rc = main(
        ["scan", "--config", config, "--param", "L3", "--start", "0", "--stop", "3",
         "--steps", "4", "--out-dir", str(out)]
    )
    assert rc == 0
    payload = json.loads((out / "scan.json").read_text(encoding="utf-8"))
    assert payload["parameter"] == "L3"
    fidelities = [row["fidelity_ghz"] for row in payload["rows"]]
    for value, row in zip((0.0, 1.0, 2.0, 3.0), payload["rows"]):
        overlap = math.exp(-(value**2))
        assert row["p_success"] == pytest.approx(0.25, abs=1e-12)
        assert row["fidelity_ghz"] == pytest.approx((1 + overlap**2) / 2, abs=1e-9)
    assert fidelities[0] == pytest.approx(1.0, abs=1e-12)
    assert all(a >= b for a, b in zip(fidelities, fidelities[1:]))
    assert fidelities[-1] == pytest.approx(0.5, abs=1e-6)


def test_scan_ghz_amplitude_renormalizes_partner(tmp_path):
    config = write_config(tmp_path, GHZ_CONFIG)
    out = tmp_path / "out"
    rc = main(
        ["scan", "--config", config, "--param", "alpha1", "--start", "0.2", "--stop",
         "0.9", "--steps", "3", "--out-dir", str(out)]
    )
    assert rc == 0
    payload = json.loads((out / "scan.json").read_text(encoding="utf-8"))
    for row in payload["rows"]:
        v = row["alpha1"]
        # Keeping the row normalized pins the success probability at 1/4
        # while the two surviving amplitudes trade magnitude.
        assert row["p_success"] == pytest.approx(0.25, abs=1e-12)
        expected = (1 + 2 * v * math.sqrt(1 - v * v)) / 2
        assert row["fidelity_ghz"] == pytest.approx(expected, abs=1e-9)


def test_scan_rejects_bad_requests(tmp_path, capsys):
    config = write_config(tmp_path, GHZ_CONFIG)
    out = str(tmp_path / "out")
    rc = main(["scan", "--config", config, "--param", "g", "--start", "0", "--stop",
               "1", "--steps", "0", "--out-dir", out])
    assert rc == 2
    assert "steps" in capsys.readouterr().err

    rc = main(["scan", "--config", config, "--param", "bogus", "--start", "0",
               "--stop", "1", "--steps", "2", "--out-dir", out])
    assert rc == 2
    assert "not scannable" in capsys.readouterr().err

    rc = main(["scan", "--config", config, "--param", "L1", "--start", "0", "--stop",
               "1", "--steps", "2", "--out-dir", out])
    assert rc == 2
    assert "delay" in capsys.readouterr().err


def test_run_rejects_invalid_gram(tmp_path, capsys):
    bad = {
        "preset": "ghz",
        "distinguishability": {"gram": [[1, 0.5, 0.5], [0.4, 1, 0.5], [0.5, 0.5, 1]]},
    }
    config = write_config(tmp_path, bad)
    rc = main(["run", "--config", config, "--out-dir", str(tmp_path / "out")])
    assert rc == 2
    assert "distinguishability" in capsys.readouterr().err


def test_run_rejects_missing_config(tmp_path, capsys):
    rc = main(["run", "--config", str(tmp_path / "nope.json"),
               "--out-dir", str(tmp_path / "out")])
    assert rc == 2
    assert "not found" in capsys.readouterr().err


def test_run_rejects_non_object_config(tmp_path, capsys):
    path = tmp_path / "list.json"
    path.write_text("[1, 2, 3]", encoding="utf-8")
    rc = main(["run", "--config", str(path), "--out-dir", str(tmp_path / "out")])
    assert rc == 2
    assert "object" in capsys.readouterr().err


def test_run_total_destructive_interference_exits_3(tmp_path, capsys):
    hom = {
        "preset": "custom",
        "custom": {
            "amplitudes": [[INV_SQRT2, INV_SQRT2], [INV_SQRT2, -INV_SQRT2]],
            "spins": [["down", "down"], ["down", "down"]],
        },
        "distinguishability": {"gram": [[1, 1], [1, 1]]},
    }
    config = write_config(tmp_path, hom)
    rc = main(["run", "--config", config, "--out-dir", str(tmp_path / "out")])
    assert rc == 3
    assert "numerical failure" in capsys.readouterr().err


def test_reconstruct_ghz_counts(tmp_path):
    truth = DensityMatrix.from_pure(ghz_state().vector)
    table = simulate_counts(truth, shots=20_000, seed=7)
    counts_path = tmp_path / "counts.txt"
    write_counts(table, counts_path)
    out = tmp_path / "out"
    assert main(["reconstruct", "--counts", str(counts_path), "--out-dir", str(out)]) == 0
    report = json.loads((out / "reconstruction_report.json").read_text(encoding="utf-8"))
    assert report["shots_per_setting"] == 20_000
    assert report["num_settings"] == 27
    assert report["fidelity_ghz"] > 0.98
    assert report["verdict"] == "genuine-GHZ-witnessed"
    matrix = read_density_matrix(out / report["density_matrix_file"])
    assert np.trace(matrix).real == pytest.approx(1.0, abs=1e-9)
    np.testing.assert_allclose(matrix, matrix.conj().T, atol=1e-12)


def test_reconstruct_dephased_w_counts(tmp_path):
    rho, _ = density_matrix_from_spec(
        w_preset(balanced_tritter_rows()), GramMatrix.fully_distinguishable(3)
    )
    table = simulate_counts(rho, shots=20_000, seed=5)
    counts_path = tmp_path / "counts.txt"
    write_counts(table, counts_path)
    out = tmp_path / "out"
    assert main(["reconstruct", "--counts", str(counts_path), "--out-dir", str(out)]) == 0
    report = json.loads((out / "reconstruction_report.json").read_text(encoding="utf-8"))
    # Fully dephased single-excitation mixture: W fidelity collapses to 1/3.
    assert report["fidelity_w_max"] == pytest.approx(1 / 3, abs=0.02)
    assert report["verdict"] == "witness-inconclusive"


def test_reconstruct_rejects_truncated_counts(tmp_path, capsys):
    truth = DensityMatrix.from_pure(ghz_state().vector)
    table = simulate_counts(truth, shots=100, seed=1)
    counts_path = tmp_path / "counts.txt"
    write_counts(table, counts_path)
    lines = counts_path.read_text(encoding="utf-8").splitlines()
    counts_path.write_text("\n".join(lines[:-2]) + "\nXXX 00\n", encoding="utf-8")
    rc = main(["reconstruct", "--counts", str(counts_path),
               "--out-dir", str(tmp_path / "out")])
    assert rc == 2
    assert "line" in capsys.readouterr().err


@pytest.mark.skipif(shutil.which("identangle") is None, reason="entry point not on PATH")
def test_console_script_reports_version():
    result = subprocess.run(
        ["identangle", "--version"], capture_output=True, text=True, timeout=60
    )
    assert result.returncode == 0
    assert result.stdout.strip().startswith("identangle ")


def test_reconstruct_csv_report(tmp_path):
    truth = DensityMatrix.from_pure(ghz_state().vector)
    table = simulate_counts(truth, shots=2_000, seed=3)
    counts_path = tmp_path / "counts.txt"
    write_counts(table, counts_path)
    out = tmp_path / "out"
    rc = main(["reconstruct", "--counts", str(counts_path), "--out-dir", str(out),
               "--format", "csv"])
    assert rc == 0
    text = (out / "reconstruction_report.csv").read_text(encoding="utf-8")
    assert text.startswith("key,value")
    assert '"genuine-GHZ-witnessed"' in text
