"""Figure rendering from CLI-generated CSVs."""

import hashlib

import numpy as np
import pytest

from plot import FigureSpec, SchemaMismatch, build_figure, load_csv, main, render


def checksum(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_all_four_kinds_render(csv_dir, tmp_path):
    for kind in ("levels", "eit", "ndfwm", "saturation"):
        out = tmp_path / f"{kind}.png"
        spec = FigureSpec(
            input_csv=(str(csv_dir / f"{kind}.csv"),),
            figure_kind=kind,
            output_image=str(out),
        )
        render(spec)
        assert out.exists() and out.stat().st_size > 0


def test_levels_figure_has_three_series(csv_dir):
    spec = FigureSpec(
        input_csv=(str(csv_dir / "levels.csv"),),
        figure_kind="levels",
        output_image="unused.png",
    )
    fig = build_figure(spec)
    try:
        assert len(fig.axes[0].lines) == 3
    finally:
        import matplotlib.pyplot as plt

        plt.close(fig)


def test_eit_peak_matches_csv_maximum(csv_dir):
    path = csv_dir / "eit.csv"
    _, cols = load_csv(str(path), "eit")
    spec = FigureSpec(
        input_csv=(str(path),), figure_kind="eit", output_image="unused.png"
    )
    fig = build_figure(spec)
    try:
        ydata = fig.axes[0].lines[0].get_ydata()
        assert abs(float(np.max(ydata)) - float(cols["transparency_frac"].max())) < 1e-9
    finally:
        import matplotlib.pyplot as plt

        plt.close(fig)


def test_rendering_is_read_only(csv_dir, tmp_path):
    path = csv_dir / "ndfwm.csv"
    before = checksum(path)
    render(FigureSpec(input_csv=(str(path),), figure_kind="ndfwm",
                      output_image=str(tmp_path / "x.png")))
    assert checksum(path) == before


def test_empty_csv_is_schema_mismatch(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(SchemaMismatch):
        load_csv(str(empty), "eit")


def test_wrong_schema_rejected(csv_dir):
    with pytest.raises(SchemaMismatch):
        load_csv(str(csv_dir / "eit.csv"), "ndfwm")


def test_missing_file_raises(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_csv(str(tmp_path / "nope.csv"), "eit")


def test_deterministic_dimensions(csv_dir, tmp_path):
    from PIL import Image

    sizes = []
    for i in range(2):
        out = tmp_path / f"dim{i}.png"
        render(FigureSpec(input_csv=(str(csv_dir / "eit.csv"),),
                          figure_kind="eit", output_image=str(out)))
        with Image.open(out) as img:
            sizes.append(img.size)
    assert sizes[0] == sizes[1]


def test_saturation_accepts_multiple_sweeps(csv_dir, tmp_path):
    path = str(csv_dir / "saturation.csv")
    out = tmp_path / "sat2.png"
    render(FigureSpec(input_csv=(path, path), figure_kind="saturation",
                      output_image=str(out)))
    assert out.exists()
    with pytest.raises(ValueError):
        FigureSpec(input_csv=(path, path), figure_kind="eit",
                   output_image="x.png")


def test_baseline_slope_presentation_only(csv_dir):
    path = str(csv_dir / "eit.csv")
    _, cols = load_csv(path, "eit")
    fig = build_figure(FigureSpec(input_csv=(path,), figure_kind="eit",
                                  output_image="unused.png",
                                  baseline_slope=0.002))
    try:
        ydata = np.asarray(fig.axes[0].lines[0].get_ydata())
        expected = cols["transparency_frac"] + 0.002 * cols["delta_MHz"]
        assert np.allclose(ydata, expected, atol=1e-12)
    finally:
        import matplotlib.pyplot as plt

        plt.close(fig)


def test_cli_entry_point(csv_dir, tmp_path):
    out = tmp_path / "cli.png"
    rc = main(["--kind", "eit", "--in", str(csv_dir / "eit.csv"),
               "--out", str(out)])
    assert rc == 0 and out.exists()
    rc = main(["--kind", "ndfwm", "--in", str(csv_dir / "eit.csv"),
               "--out", str(tmp_path / "bad.png")])
    assert rc == 1
