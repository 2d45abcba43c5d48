import numpy as np
import pytest

from cpma.cli import main
from cpma.grid import load_grid, save_grid
from cpma.shapes import blob_2d, disc


@pytest.fixture()
def disc_pbm(tmp_path):
    path = tmp_path / "disc.pbm"
    save_grid(disc(48), path)
    return path


def test_skeletonize_cpma(disc_pbm, tmp_path, capsys):
    out = tmp_path / "skel.pbm"
    rc = main(["skeletonize", str(disc_pbm), "--method", "cpma", "--connect", "--output", str(out)])
    assert rc == 0
    skel = load_grid(out)
    assert skel.count() > 0
    assert "skeleton points" in capsys.readouterr().out


def test_skeletonize_writes_score_csv(disc_pbm, tmp_path):
    out = tmp_path / "skel.pbm"
    score = tmp_path / "score.csv"
    rc = main(
        ["skeletonize", str(disc_pbm), "--method", "cpma", "--output", str(out), "--score-output", str(score)]
    )
    assert rc == 0
    lines = score.read_text().splitlines()
    assert lines[0] == "y,x,value"
    assert len(lines) == 1 + 48 * 48


def test_skeletonize_baseline_method(disc_pbm, tmp_path):
    out = tmp_path / "skel.pbm"
    rc = main(["skeletonize", str(disc_pbm), "--method", "gima", "--gamma", "2", "--output", str(out)])
    assert rc == 0


def test_missing_parameter_flag_exits_2(disc_pbm, tmp_path, capsys):
    out = tmp_path / "skel.pbm"
    with pytest.raises(SystemExit) as exc:
        main(["skeletonize", str(disc_pbm), "--method", "gima", "--output", str(out)])
    assert exc.value.code == 2
    assert "--gamma" in capsys.readouterr().err


def test_unimplemented_method_exits_2(disc_pbm, tmp_path, capsys):
    out = tmp_path / "skel.pbm"
    with pytest.raises(SystemExit) as exc:
        main(["skeletonize", str(disc_pbm), "--method", "poisson", "--output", str(out)])
    assert exc.value.code == 2
    assert "not implemented" in capsys.readouterr().err


def test_missing_input_exits_1(tmp_path, capsys):
    rc = main(["skeletonize", str(tmp_path / "nope.pbm"), "--output", str(tmp_path / "o.pbm")])
    assert rc == 1
    assert "error" in capsys.readouterr().err


def test_reconstruct_reports_jaccard(disc_pbm, tmp_path, capsys):
    out = tmp_path / "rec.pbm"
    rc = main(["reconstruct", str(disc_pbm), "--method", "mat", "--output", str(out)])
    assert rc == 0
    assert "jaccard=1.000000" in capsys.readouterr().out
    assert load_grid(out) == load_grid(disc_pbm)


def test_metrics_command(disc_pbm, tmp_path, capsys):
    other = tmp_path / "blob.pbm"
    save_grid(blob_2d(48, seed=2), other)
    rc = main(["metrics", str(disc_pbm), str(other)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "hausdorff=" in out and "dubuisson_jain=" in out and "jaccard=" in out


def test_voxelize_command(tmp_path, capsys):
    from conftest import fixture_path

    out = tmp_path / "cube.vox"
    rc = main(["voxelize", fixture_path("cube"), "--resolution", "12", "--output", str(out)])
    assert rc == 0
    g = load_grid(out)
    assert g.count() > 0


def test_noise_bench_cli_deterministic(tmp_path):
    dataset = tmp_path / "data"
    dataset.mkdir()
    save_grid(disc(48), dataset / "disc.pbm")
    outs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        rc = main(
            ["noise-bench", "--dataset", str(dataset), "--methods", "mat", "--levels", "1..2",
             "--seed", "7", "--out", str(out), "--jobs", "1"]
        )
        assert rc == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_rotation_bench_cli(tmp_path, capsys):
    dataset = tmp_path / "data"
    dataset.mkdir()
    save_grid(disc(48), dataset / "disc.pbm")
    out = tmp_path / "rot.csv"
    rc = main(
        ["rotation-bench", "--dataset", str(dataset), "--methods", "mat", "--angles", "0",
         "--out", str(out), "--jobs", "1"]
    )
    assert rc == 0
    rows = out.read_text().splitlines()
    assert rows[0].startswith("dataset,")
    assert all(row.endswith(",0") or ",0," in row for row in rows[1:])


def test_tau_sweep_cli(tmp_path):
    dataset = tmp_path / "data"
    dataset.mkdir()
    save_grid(disc(48), dataset / "disc.pbm")
    out = tmp_path / "tau.json"
    rc = main(
        ["tau-sweep", "--dataset", str(dataset), "--taus", "0.3,0.6", "--out", str(out),
         "--format", "json", "--jobs", "1"]
    )
    assert rc == 0
    import json

    rows = json.loads(out.read_text())
    assert all(r["metric"] == "jaccard" for r in rows)


def test_empty_range_rejected(tmp_path, capsys):
    dataset = tmp_path / "data"
    dataset.mkdir()
    save_grid(disc(48), dataset / "disc.pbm")
    with pytest.raises(SystemExit) as exc:
        main(["noise-bench", "--dataset", str(dataset), "--levels", "", "--out", str(tmp_path / "x.csv")])
    assert exc.value.code == 2
