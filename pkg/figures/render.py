#!/usr/bin/env python3
"""Regenerate the five summary figures from sweep CSVs emitted by the CLI.

Pure rendering: no physics is computed here.  Input tables are the CSV
output of `neqplates sweep` (a '#'-prefixed metadata preamble holding the
scenario in INI form, then a header row and data rows).  Curve labels are
read from the preamble, never from filenames.

Usage:
    python figures/render.py --fig N --in <csv> [--in <csv> ...] --out <img>

Figures:
    1  total force vs plate thickness, one curve per right temperature,
       dashed horizontal lines at the d -> infinity asymptotes
    2  heat contributions vs thickness: initial-conditions part normalized
       by its d = 0 value, bath part by its d -> infinity value
    3  normalized total heat vs thickness, one curve per left temperature,
       dashed vertical line at the plasma wavelength
    4  normalized total heat vs thickness, one curve per plasma frequency
    5  normalized total heat vs thickness for crossed temperatures,
       showing the zero crossing
"""

import argparse
import configparser
import csv
import io
import math
import os
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE_FILE = os.path.join(os.path.dirname(os.path.abspath(__file__)), "style.mplstyle")

# lambda_pl = 2 pi / omega_pl for omega_pl = 0.1 nm^-1
PLASMA_WAVELENGTH_NM = 62.8


class TableError(ValueError):
    """Base class for input-table problems."""


class EmptyTableError(TableError):
    """The table parsed but contains no data rows."""


class MissingColumnError(TableError):
    """A column required by the figure is absent from the table header."""


@dataclass(frozen=True)
class Table:
    path: str
    meta: configparser.ConfigParser
    columns: tuple
    rows: list  # list of dicts: column -> float

    def column(self, name):
        if name not in self.columns:
            raise MissingColumnError(f"{self.path}: missing column {name!r}")
        return [r[name] for r in self.rows]

    def temperature_k(self, key):
        """A [temperatures] entry from the preamble, in kelvin."""
        return self.meta.getfloat("temperatures", key)


@dataclass(frozen=True)
class FigureSpec:
    fig: int               # figure id in {1..5}
    inputs: tuple          # one or more CSV paths
    output: str            # image path
    logx: bool = True
    logy: bool = False


def load_table(path):
    """Parse a sweep CSV; returns a Table.  Raises TableError subclasses."""
    with open(path) as fh:
        text = fh.read()
    comment_lines = []
    data_lines = []
    for line in text.splitlines():
        if line.startswith("#"):
            comment_lines.append(line[1:].lstrip())
        elif line.strip():
            data_lines.append(line)
    meta = configparser.ConfigParser()
    try:
        meta.read_string("\n".join(
            ln for ln in comment_lines if "=" in ln or ln.startswith("[")
        ))
    except configparser.Error:
        meta = configparser.ConfigParser()
    if not data_lines:
        raise EmptyTableError(f"{path}: no header or data rows")
    reader = csv.reader(io.StringIO("\n".join(data_lines)))
    header = next(reader)
    rows = []
    for rec in reader:
        rows.append({c: float(v) for c, v in zip(header, rec)})
    if not rows:
        raise EmptyTableError(f"{path}: no data rows")
    return Table(path, meta, tuple(header), rows)


def _finite(xs, ys):
    pairs = [(x, y) for x, y in zip(xs, ys)
             if math.isfinite(x) and math.isfinite(y)]
    return [p[0] for p in pairs], [p[1] for p in pairs]


def _inf_row_value(table, column):
    for r in table.rows:
        if math.isinf(r["swept_value"]):
            return r[column]
    return None


def _render_fig1(ax, tables):
    for t in tables:
        d = t.column("swept_value")
        f = t.column("force_total")
        label = f"$T_R = {t.temperature_k('t_phi_right'):g}$ K"
        x, y = _finite(d, f)
        (line,) = ax.plot(x, y, label=label)
        f_inf = _inf_row_value(t, "force_total")
        if f_inf is not None and math.isfinite(f_inf):
            ax.axhline(f_inf, linestyle="--", linewidth=1.0,
                       color=line.get_color(), alpha=0.8)
    ax.set_ylabel(r"total force $F$ [nm$^{-2}$]")


def _render_fig2(ax, tables):
    for t in tables:
        d = t.column("swept_value")
        q_ic = t.column("q_ic")
        q_b = t.column("q_b")
        q_ic0 = t.column("q_norm_denominator")[0]   # d = 0 blackbody value
        q_b_inf = _inf_row_value(t, "q_total")       # bath-only at d -> inf
        if q_b_inf is None or not math.isfinite(q_b_inf):
            raise TableError(f"{t.path}: figure 2 needs a d -> infinity row")
        tl = t.temperature_k("t_phi_left")
        x, y = _finite(d, [q / q_ic0 for q in q_ic])
        (line,) = ax.plot(x, y, label=f"$T_L = {tl:g}$ K, init. cond. / $Q(0)$")
        x, y = _finite(d, [q / q_b_inf for q in q_b])
        ax.plot(x, y, linestyle=":", color=line.get_color(),
                label=f"$T_L = {tl:g}$ K, baths / $Q(\\infty)$")
    ax.set_ylabel("normalized heat contributions")


def _normalized_heat_curves(ax, tables, label_fmt):
    for t in tables:
        d = t.column("swept_value")
        qn = t.column("q_normalized")
        x, y = _finite(d, qn)
        ax.plot(x, y, label=label_fmt(t))
    ax.set_ylabel(r"$Q(d)\,/\,Q(d{=}0)$")


def _render_fig3(ax, tables):
    _normalized_heat_curves(
        ax, tables,
        lambda t: f"$T_L = {t.temperature_k('t_phi_left'):g}$ K",
    )
    ax.axvline(PLASMA_WAVELENGTH_NM, linestyle="--", linewidth=1.0,
               color="0.3", label=r"$\lambda_{\mathrm{Pl}} = 62.8$ nm")


def _render_fig4(ax, tables):
    def lbl(t):
        wp = t.meta.getfloat("material.left", "omega_pl")
        return rf"$\omega_{{\mathrm{{Pl}}}} = {wp:g}$ nm$^{{-1}}$"

    _normalized_heat_curves(ax, tables, lbl)


def _render_fig5(ax, tables):
    _normalized_heat_curves(
        ax, tables,
        lambda t: f"$T_{{\\phi,R}} = T_{{B,L}} = {t.temperature_k('t_phi_right'):g}$ K",
    )
    ax.axhline(0.0, linewidth=0.8, color="0.3")


_RENDERERS = {1: _render_fig1, 2: _render_fig2, 3: _render_fig3,
              4: _render_fig4, 5: _render_fig5}


def render_figure(spec):
    """Render one figure from its input tables; writes spec.output.

    Raises TableError (and subclasses) before any file is written, so a
    failed render never leaves a partial image.
    """
    if spec.fig not in _RENDERERS:
        raise ValueError(f"figure id must be 1..5, got {spec.fig}")
    tables = [load_table(p) for p in spec.inputs]
    with plt.style.context(STYLE_FILE):
        fig, ax = plt.subplots()
        try:
            _RENDERERS[spec.fig](ax, tables)
            ax.set_xlabel(r"plate thickness $d$ [nm]")
            if spec.logx:
                ax.set_xscale("log")
            if spec.logy:
                ax.set_yscale("log")
            ax.legend()
            fig.savefig(spec.output, metadata={"Software": "neqplates-figures"})
        finally:
            plt.close(fig)
    return spec.output


def main(argv=None):
    ap = argparse.ArgumentParser(
        description="Render a figure from neqplates sweep CSVs.")
    ap.add_argument("--fig", type=int, required=True, choices=range(1, 6))
    ap.add_argument("--in", dest="inputs", action="append", required=True,
                    metavar="CSV", help="input table (repeatable)")
    ap.add_argument("--out", required=True, help="output image path")
    ap.add_argument("--linear-x", action="store_true",
                    help="linear thickness axis (default: log)")
    args = ap.parse_args(argv)
    spec = FigureSpec(fig=args.fig, inputs=tuple(args.inputs),
                      output=args.out, logx=not args.linear_x)
    try:
        render_figure(spec)
    except TableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
