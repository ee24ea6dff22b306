"""Smoke tests for the figure-regeneration script (rendering only, no physics)."""

import importlib.util
import math
import pathlib

import pytest

matplotlib = pytest.importorskip("matplotlib")

_RENDER = pathlib.Path(__file__).resolve().parents[1] / "figures" / "render.py"
_spec = importlib.util.spec_from_file_location("figure_render", _RENDER)
render = importlib.util.module_from_spec(_spec)
_spec.loader.exec_module(render)


PREAMBLE = """\
# artifact test
# [material.left]
# omega_pl = 0.1
# omega_0 = 0.1
# gamma = 0.001
# [material.right]
# omega_pl = 0.1
# omega_0 = 0.1
# gamma = 0.001
# [geometry]
# a = 100.0
# d_left = 100.0
# d_right = 100.0
# [temperatures]
# t_phi_left = 600.0
# t_phi_right = 300.0
# t_b_left = 600.0
# t_b_right = 300.0
"""

COLUMNS = ("swept_value,force_total,force_ic,force_bath,q_total,q_ic,q_b,"
           "q_normalized,q_norm_denominator,quad_error,converged")


def make_table(path, with_inf_row=True, drop_column=None, no_rows=False):
    cols = COLUMNS.split(",")
    rows = [
        [1.0, 2.0e-7, 1.0e-7, 1.0e-7, 5.0e-9, 4.0e-9, 1.0e-9, 0.9, 5.5e-9, 1e-12, 1],
        [100.0, 1.8e-7, 0.9e-7, 0.9e-7, 4.5e-9, 3.0e-9, 1.5e-9, 0.8, 5.5e-9, 1e-12, 1],
        [1e4, 1.7e-7, 0.8e-7, 0.9e-7, 4.8e-9, 1.0e-9, 3.8e-9, 0.86, 5.5e-9, 1e-12, 1],
    ]
    if with_inf_row:
        rows.append([math.inf, 1.7e-7, math.nan, math.nan, 5.0e-9, math.nan,
                     math.nan, 0.9, 5.5e-9, 0.0, 1])
    if drop_column is not None:
        idx = cols.index(drop_column)
        cols = cols[:idx] + cols[idx + 1:]
        rows = [r[:idx] + r[idx + 1:] for r in rows]
    lines = [PREAMBLE + ",".join(cols)]
    if not no_rows:
        for r in rows:
            lines.append(",".join(str(v) for v in r))
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.mark.parametrize("fig", [1, 2, 3, 4, 5])
def test_each_figure_renders(tmp_path, fig):
    csv = make_table(tmp_path / "t.csv")
    out = tmp_path / f"fig{fig}.png"
    spec = render.FigureSpec(fig=fig, inputs=(str(csv),), output=str(out))
    render.render_figure(spec)
    assert out.exists() and out.stat().st_size > 0


def test_empty_table_errors_without_partial_image(tmp_path):
    csv = make_table(tmp_path / "t.csv", no_rows=True)
    out = tmp_path / "fig3.png"
    spec = render.FigureSpec(fig=3, inputs=(str(csv),), output=str(out))
    with pytest.raises(render.EmptyTableError):
        render.render_figure(spec)
    assert not out.exists()


def test_missing_column_is_named(tmp_path):
    csv = make_table(tmp_path / "t.csv", drop_column="q_normalized")
    out = tmp_path / "fig3.png"
    spec = render.FigureSpec(fig=3, inputs=(str(csv),), output=str(out))
    with pytest.raises(render.MissingColumnError, match="q_normalized"):
        render.render_figure(spec)
    assert not out.exists()


def test_fig2_requires_limit_row(tmp_path):
    csv = make_table(tmp_path / "t.csv", with_inf_row=False)
    spec = render.FigureSpec(fig=2, inputs=(str(csv),),
                             output=str(tmp_path / "fig2.png"))
    with pytest.raises(render.TableError):
        render.render_figure(spec)


def test_rendering_is_deterministic(tmp_path):
    csv = make_table(tmp_path / "t.csv")
    out1, out2 = tmp_path / "a.png", tmp_path / "b.png"
    for out in (out1, out2):
        render.render_figure(
            render.FigureSpec(fig=3, inputs=(str(csv),), output=str(out)))
    assert out1.read_bytes() == out2.read_bytes()


def test_multiple_inputs_overlay(tmp_path):
    c1 = make_table(tmp_path / "a.csv")
    c2 = make_table(tmp_path / "b.csv")
    out = tmp_path / "fig5.png"
    render.render_figure(
        render.FigureSpec(fig=5, inputs=(str(c1), str(c2)), output=str(out)))
    assert out.exists() and out.stat().st_size > 0


def test_main_exit_codes(tmp_path):
    good = make_table(tmp_path / "t.csv")
    bad = make_table(tmp_path / "empty.csv", no_rows=True)
    out = tmp_path / "f.png"
    assert render.main(["--fig", "3", "--in", str(good), "--out", str(out)]) == 0
    assert render.main(["--fig", "3", "--in", str(bad), "--out", str(out)]) == 1
