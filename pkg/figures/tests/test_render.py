import pathlib

import pytest

from npfigures import FigureSpec, SchemaError, render

DATA = pathlib.Path(__file__).parent / "data"

GOLDEN = {
    "power-curve": DATA / "power_curve.csv",
    "bounding-seq": DATA / "bounding_seq.csv",
    "regime-map": DATA / "regime_map.csv",
}


@pytest.mark.parametrize("kind", sorted(GOLDEN))
def test_renders_each_kind(kind, tmp_path):
    out = tmp_path / f"{kind}.svg"
    result = render(FigureSpec(inputs=(str(GOLDEN[kind]),), kind=kind, output=str(out)))
    assert result == str(out)
    body = out.read_bytes()
    assert body.startswith(b"<?xml")
    assert len(body) > 1000


@pytest.mark.parametrize("kind", sorted(GOLDEN))
def test_svg_output_is_byte_identical(kind, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    render(FigureSpec(inputs=(str(GOLDEN[kind]),), kind=kind, output=str(a)))
    render(FigureSpec(inputs=(str(GOLDEN[kind]),), kind=kind, output=str(b)))
    assert a.read_bytes() == b.read_bytes()


def test_png_output(tmp_path):
    out = tmp_path / "fig.png"
    render(FigureSpec(inputs=(str(GOLDEN["power-curve"]),), kind="power-curve", output=str(out)))
    assert out.read_bytes().startswith(b"\x89PNG")


def test_schema_mismatch_lists_missing_columns(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("mu,lambda_true\n1,0.1\n")
    with pytest.raises(SchemaError) as exc:
        render(FigureSpec(inputs=(str(bad),), kind="power-curve", output=str(tmp_path / "x.svg")))
    msg = str(exc.value)
    assert "median_ratio" in msg and "delta_kind" in msg


def test_wrong_kind_for_csv(tmp_path):
    with pytest.raises(SchemaError):
        render(
            FigureSpec(
                inputs=(str(GOLDEN["regime-map"]),),
                kind="bounding-seq",
                output=str(tmp_path / "x.svg"),
            )
        )


def test_empty_csv_rejected(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("nu,gamma,r,regime,fwer_full_detection\n")
    with pytest.raises(SchemaError, match="no data rows"):
        render(FigureSpec(inputs=(str(empty),), kind="regime-map", output=str(tmp_path / "x.svg")))


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(ValueError, match="unknown figure kind"):
        FigureSpec(inputs=("x.csv",), kind="pie", output="y.svg")


def test_no_inputs_rejected():
    with pytest.raises(ValueError):
        FigureSpec(inputs=(), kind="power-curve", output="y.svg")
