import numpy as np
import pytest

from rnml import formats
from rnml.cli import main
from rnml.model import omega_matrix
from rnml.moments import Dataset

THREE_POINT_CSV = "x0,x1,y\n1,1,0\n1,-1,0\n1,0,1\n"


def write_three_point(tmp_path):
    path = tmp_path / "three.csv"
    path.write_text(THREE_POINT_CSV)
    return path


def test_gen_writes_dataset(tmp_path, capsys):
    out = tmp_path / "d.csv"
    code = main(["gen", "--target", "linear", "--m", "100", "--r", "0.1",
                 "--basis", "chebyshev", "--dx", "10", "--seed", "1",
                 "-o", str(out)])
    assert code == 0
    x, y = formats.read_dataset_csv(out)
    assert x.shape == (100, 10)
    assert y.shape == (100,)
    stdout = capsys.readouterr().out
    assert "generator=pcg64" in stdout and "seed=1" in stdout


def test_gen_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    flags = ["gen", "--target", "runge", "--m", "30", "--r", "0.3",
             "--basis", "legendre", "--dx", "4", "--seed", "5"]
    assert main(flags + ["-o", str(a)]) == 0
    assert main(flags + ["-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_gen_seed_env_fallback(tmp_path, monkeypatch):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    flags = ["gen", "--target", "linear", "--m", "20", "--dx", "3"]
    monkeypatch.setenv("RNML_SEED", "77")
    assert main(flags + ["-o", str(a)]) == 0
    monkeypatch.delenv("RNML_SEED")
    assert main(flags + ["--seed", "77", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_gen_invalid_m(tmp_path, capsys):
    code = main(["gen", "--target", "linear", "--m", "0", "--dx", "3",
                 "-o", str(tmp_path / "d.csv")])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_gen_bad_env_seed(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("RNML_SEED", "not-a-number")
    code = main(["gen", "--target", "linear", "--m", "5", "--dx", "2",
                 "-o", str(tmp_path / "d.csv")])
    assert code == 2


def test_fit_three_point_table(tmp_path, capsys):
    data = write_three_point(tmp_path)
    model_path = tmp_path / "m.json"
    code = main(["fit", str(data), "-o", str(model_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "0.3333333" in out          # second node
    assert "1.2" in out and "1.8" in out
    assert "0.48" in out               # localization
    assert "condition(G)" in out and "lambda = 0" in out
    loaded = formats.read_model_json(model_path)
    assert loaded.d_x == 2 and loaded.m == 3


def test_fit_missing_file_is_io_error(tmp_path, capsys):
    code = main(["fit", str(tmp_path / "nope.csv"), "-o", str(tmp_path / "m.json")])
    assert code == 4
    assert "i/o" in capsys.readouterr().err


def test_fit_degenerate_needs_lambda(tmp_path, capsys):
    rng = np.random.Generator(np.random.PCG64(60))
    x = rng.uniform(-1, 1, (40, 2))
    dup = np.column_stack([x, x[:, 1]])     # duplicated feature column
    path = tmp_path / "dup.csv"
    formats.write_dataset_csv(path, dup, x[:, 0])
    code = main(["fit", str(path), "-o", str(tmp_path / "m.json")])
    assert code == 3
    err = capsys.readouterr().err
    assert "--lambda" in err
    code = main(["fit", str(path), "--lambda", "1e-8", "-o", str(tmp_path / "m.json")])
    assert code == 0


def test_predict_round_trip_matches_omega(tmp_path):
    data_path = tmp_path / "d.csv"
    model_path = tmp_path / "m.json"
    sweep_path = tmp_path / "s.csv"
    assert main(["gen", "--target", "linear", "--m", "80", "--r", "0.1",
                 "--basis", "chebyshev", "--dx", "6", "--seed", "2",
                 "-o", str(data_path)]) == 0
    assert main(["fit", str(data_path), "-o", str(model_path)]) == 0
    assert main(["predict", str(model_path),
                 "--queries", str(data_path), "-o", str(sweep_path)]) == 0
    names, body = formats.read_sweep_csv(sweep_path)
    assert names[:3] == ["id", "a_ls", "a_rn"]
    x, y = formats.read_dataset_csv(data_path)
    model = formats.read_model_json(model_path)
    om = omega_matrix(model, Dataset(x=x, y=y))
    assert np.abs(body[:, 3:] - om).max() < 1e-10
    assert np.abs(body[:, 3:].sum(axis=1) - 1.0).max() < 1e-9


def test_predict_grid_three_point(tmp_path):
    data = write_three_point(tmp_path)
    model_path = tmp_path / "m.json"
    sweep_path = tmp_path / "s.csv"
    assert main(["fit", str(data), "-o", str(model_path)]) == 0
    # monomial grid: x = (1, t); at t=0 the query is the pure second state
    assert main(["predict", str(model_path), "--basis", "monomial",
                 "--lo", "-1", "--hi", "1", "--count", "5",
                 "-o", str(sweep_path)]) == 0
    names, body = formats.read_sweep_csv(sweep_path)
    assert names[0] == "t"
    assert np.array_equal(body[:, 0], np.linspace(-1, 1, 5))
    mid = body[2]
    assert mid[1] == pytest.approx(1 / 3, abs=1e-12)   # a_ls at center
    assert mid[2] == pytest.approx(1 / 3, abs=1e-12)   # a_rn at center
    assert mid[3] == pytest.approx(0.0, abs=1e-12)
    assert mid[4] == pytest.approx(1.0, abs=1e-12)
    # spectrum range bound holds on the full grid
    assert body[:, 2].min() >= -1e-12
    assert body[:, 2].max() <= 1 / 3 + 1e-12


def test_predict_default_grid_bounds(tmp_path):
    data = write_three_point(tmp_path)
    model_path = tmp_path / "m.json"
    sweep_path = tmp_path / "s.csv"
    assert main(["fit", str(data), "-o", str(model_path)]) == 0
    assert main(["predict", str(model_path), "--basis", "monomial",
                 "-o", str(sweep_path)]) == 0
    _, body = formats.read_sweep_csv(sweep_path)
    assert body[0, 0] == -1.2 and body[-1, 0] == 1.2
    assert body.shape[0] == 241


def test_predict_grid_needs_basis(tmp_path, capsys):
    data = write_three_point(tmp_path)
    model_path = tmp_path / "m.json"
    assert main(["fit", str(data), "-o", str(model_path)]) == 0
    code = main(["predict", str(model_path), "-o", str(tmp_path / "s.csv")])
    assert code == 2
    assert "--basis" in capsys.readouterr().err


def test_predict_query_dimension_mismatch(tmp_path):
    data = write_three_point(tmp_path)
    model_path = tmp_path / "m.json"
    assert main(["fit", str(data), "-o", str(model_path)]) == 0
    queries = tmp_path / "q.csv"
    queries.write_text("x0,x1,x2\n1,0,0\n")
    code = main(["predict", str(model_path),
                 "--queries", str(queries), "-o", str(tmp_path / "s.csv")])
    assert code == 2


def test_predict_plot_renders(tmp_path):
    data = write_three_point(tmp_path)
    model_path = tmp_path / "m.json"
    png = tmp_path / "s.png"
    assert main(["fit", str(data), "-o", str(model_path)]) == 0
    assert main(["predict", str(model_path), "--basis", "monomial",
                 "--count", "9", "-o", str(tmp_path / "s.csv"),
                 "--plot", str(png)]) == 0
    assert png.stat().st_size > 1000


def test_distribution_three_point(tmp_path):
    data = write_three_point(tmp_path)
    model_path = tmp_path / "m.json"
    dist_path = tmp_path / "dist.csv"
    assert main(["fit", str(data), "-o", str(model_path)]) == 0
    assert main(["distribution", str(model_path),
                 "-o", str(dist_path)]) == 0
    lines = dist_path.read_text().splitlines()
    assert lines[0] == "node,weight"
    nodes = [float(l.split(",")[0]) for l in lines[1:3]]
    weights = [float(l.split(",")[1]) for l in lines[1:3]]
    assert nodes == pytest.approx([0.0, 1 / 3], abs=1e-12)
    assert weights == pytest.approx([1.2, 1.8], abs=1e-12)


def test_select_three_point(tmp_path, capsys):
    data = write_three_point(tmp_path)
    out = tmp_path / "t.csv"
    code = main(["select", str(data), "--d", "1", "-o", str(out)])
    assert code == 0
    stdout = capsys.readouterr().out
    assert "1.8" in stdout                     # top coverage printed first
    lines = out.read_text().splitlines()
    assert lines[2] == "c0,c1"
    assert len(lines) == 4                     # one selected state row


def test_select_d_out_of_range(tmp_path):
    data = write_three_point(tmp_path)
    assert main(["select", str(data), "--d", "5", "-o", str(tmp_path / "t.csv")]) == 2


def test_classify2_three_point(tmp_path, capsys):
    data = write_three_point(tmp_path)
    code = main(["classify2", str(data)])
    assert code == 0
    out = capsys.readouterr().out
    assert "class1 = 1" in out and "class2 = 0" in out
    assert "0.2" in out and "-1.2" in out
    assert "strength sum = -1" in out


def test_classify2_rejects_three_labels(tmp_path, capsys):
    path = tmp_path / "three_labels.csv"
    path.write_text("x0,x1,y\n1,0,0\n0,1,1\n1,1,2\n")
    assert main(["classify2", str(path)]) == 2


def test_repro_bundle(tmp_path):
    outdir = tmp_path / "bundle"
    code = main(["repro", "--outdir", str(outdir), "--m", "120",
                 "--count", "25", "--seed", "1"])
    assert code == 0
    import json
    with open(outdir / "manifest.json") as fh:
        manifest = json.load(fh)
    assert len(manifest["cells"]) == 12
    assert manifest["generator"] == "pcg64"
    targets = {c["target"] for c in manifest["cells"]}
    assert targets == {"linear", "runge", "step"}
    for cell in manifest["cells"]:
        assert (outdir / cell["dataset"]).exists()
        assert (outdir / cell["model"]).exists()
        assert (outdir / cell["sweep"]).exists()
        assert (outdir / cell["figure"]).exists()
        assert np.isfinite(cell["rmse_ls_interior"])
        assert np.isfinite(cell["rmse_rn_interior"])
    # the showcase cell also renders the probability curves
    assert (outdir / "linear_r0.1_dx10" / "probabilities.png").exists()


def test_repro_manifest_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    flags = ["repro", "--m", "60", "--count", "11", "--seed", "3", "--no-figures"]
    assert main(flags + ["--outdir", str(a)]) == 0
    assert main(flags + ["--outdir", str(b)]) == 0
    assert (a / "manifest.json").read_bytes() == (b / "manifest.json").read_bytes()


def test_unwritable_output_is_io_error(tmp_path, capsys):
    data = write_three_point(tmp_path)
    target = tmp_path / "no_dir" / "m.json"
    code = main(["fit", str(data), "-o", str(target)])
    assert code == 4
