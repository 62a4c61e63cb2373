"""Figure recipes for the grmsim CSV contract.

Every grmsim CSV starts with a manifest line (``# `` followed by the
resolved run configuration as JSON, plus a ``derived`` block for
trajectories), then a column header, then data rows. Floats carry 12
significant digits; unavailable values are empty cells. A recipe is a
fixed arrangement of those columns into a figure; nothing here
recomputes physics.

Rendering is deterministic by construction: the Agg backend is forced,
figure geometry, fonts, colormap, and PNG metadata are pinned, and the
manifest is echoed in the figure footer so an image can always be traced
back to the exact run that produced it. Re-rendering the same CSV gives
a pixel-identical file.
"""

from __future__ import annotations

import csv
import json
import re
import warnings
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIGSIZE = (9.6, 5.4)
DPI = 150
CONTOUR_LEVELS = (5.0, 10.0)
PNG_METADATA = {"Software": "plotkit 0.1.0"}

RC_PARAMS = {
    "figure.figsize": FIGSIZE,
    "figure.dpi": 100.0,
    "font.family": "DejaVu Sans",
    "font.size": 9.0,
    "axes.titlesize": 10.0,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "grid.linewidth": 0.5,
    "image.cmap": "viridis",
    "lines.linewidth": 1.2,
    "legend.framealpha": 0.9,
}

REQUIRED_COLUMNS = {
    "heatmap": ("lambda", "kappa", "err_omega_pct", "err_delta_pct", "flags"),
    "curves": ("lambda", "kappa", "omega_pert", "omega_num",
               "delta_pert", "delta_num"),
    "spectrum": ("omega_c",),
    "trajectory": ("t_over_TH", "n1", "n2", "n3", "q1", "q2", "q3", "norm"),
}

KINDS = tuple(sorted(REQUIRED_COLUMNS))


class SchemaError(ValueError):
    """The CSV does not match the declared figure kind."""


@dataclass(frozen=True)
class FigureRecipe:
    """What to render: a CSV, a kind, and where the image goes.

    ``xlabel``/``ylabel``/``title`` override the kind defaults; axes are
    already normalized by the CSV itself (frequencies in units of the
    atom splitting, trajectory time in units of T_H).
    """

    kind: str
    csv_path: str
    out_path: str
    title: str | None = None
    xlabel: str | None = None
    ylabel: str | None = None

    def __post_init__(self):
        if self.kind not in REQUIRED_COLUMNS:
            raise SchemaError(
                f"unknown figure kind {self.kind!r}; expected one of {KINDS}"
            )


@dataclass(frozen=True)
class Table:
    """One parsed CSV: manifest, header, and rows of strings."""

    manifest: dict
    header: tuple[str, ...]
    rows: tuple[dict, ...]

    def col(self, name: str) -> np.ndarray:
        """Numeric view of a column; empty or non-numeric cells are NaN."""
        if name not in self.header:
            raise SchemaError(f"CSV has no column {name!r}")
        out = np.full(len(self.rows), np.nan)
        for i, row in enumerate(self.rows):
            cell = row.get(name)
            if cell is None or cell == "":
                continue
            try:
                out[i] = float(cell)
            except ValueError:
                pass
        return out


def load_table(path: str) -> Table:
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
        if not first.startswith("# "):
            raise SchemaError(
                f"{path}: missing manifest line (expected '# ' + JSON)"
            )
        try:
            manifest = json.loads(first[2:])
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: manifest is not valid JSON: {exc}") from None
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: missing column header")
        rows = tuple(reader)
    return Table(manifest=manifest, header=tuple(reader.fieldnames), rows=rows)


def _check_columns(kind: str, table: Table) -> None:
    missing = [c for c in REQUIRED_COLUMNS[kind] if c not in table.header]
    if missing:
        raise SchemaError(
            f"CSV does not match kind {kind!r}: missing columns {missing} "
            f"(header has {list(table.header)})"
        )
    if kind == "spectrum" and not _level_columns(table):
        raise SchemaError(
            "CSV does not match kind 'spectrum': no e_<k> level columns"
        )


def _level_columns(table: Table) -> list[str]:
    cols = [c for c in table.header if re.fullmatch(r"e_\d+", c)]
    return sorted(cols, key=lambda c: int(c.split("_")[1]))


def _config(table: Table) -> dict:
    return table.manifest.get("config", {})


def _wrap_footer(text: str, width: int = 200, max_lines: int = 3) -> str:
    """Hard-wrap the manifest for the footer; elide past max_lines."""
    lines = [text[i:i + width] for i in range(0, len(text), width)]
    if len(lines) > max_lines:
        lines = lines[:max_lines]
        lines[-1] = lines[-1][: width - 4] + " ..."
    return "\n".join(lines)


def _finish(fig, table: Table, recipe: FigureRecipe) -> str:
    footer = "# " + json.dumps(table.manifest, sort_keys=True)
    fig.text(
        0.01, 0.005, _wrap_footer(footer),
        fontsize=4.2, family="monospace", va="bottom", color="0.35",
    )
    fig.savefig(recipe.out_path, format="png", dpi=DPI, metadata=dict(PNG_METADATA))
    plt.close(fig)
    return recipe.out_path


def _empty_axes(fig, recipe: FigureRecipe, note: str) -> None:
    ax = fig.subplots()
    ax.set_xticks([])
    ax.set_yticks([])
    ax.grid(False)
    ax.text(0.5, 0.5, note, ha="center", va="center", color="0.5",
            transform=ax.transAxes)
    warnings.warn(f"{recipe.csv_path}: {note}; rendered blank axes")


# ----------------------------------------------------------------------
# heatmap: error-grid CSV, one panel per error column
# ----------------------------------------------------------------------

def _grid_from_rows(table: Table, value_col: str):
    lam = table.col("lambda")
    kap = table.col("kappa")
    vals = table.col(value_col)
    xs = np.unique(lam)
    ys = np.unique(kap)
    z = np.full((len(ys), len(xs)), np.nan)
    ix = np.searchsorted(xs, lam)
    iy = np.searchsorted(ys, kap)
    z[iy, ix] = vals
    return xs, ys, z


def _render_heatmap(fig, table: Table, recipe: FigureRecipe) -> None:
    axes = fig.subplots(1, 2, sharey=True)
    panels = (
        ("err_omega_pct", "resonant frequency error (%)"),
        ("err_delta_pct", "splitting error (%)"),
    )
    finite_max = 0.0
    for col, _ in panels:
        v = table.col(col)
        if np.isfinite(v).any():
            finite_max = max(finite_max, float(np.nanmax(v)))
    vmax = max(finite_max, 2 * CONTOUR_LEVELS[-1] * 0.6)  # keep contours inside
    cmap = plt.get_cmap("viridis").copy()
    cmap.set_bad("0.85")
    for ax, (col, title) in zip(axes, panels):
        xs, ys, z = _grid_from_rows(table, col)
        mesh = ax.pcolormesh(
            xs, ys, np.ma.masked_invalid(z),
            shading="nearest", cmap=cmap, vmin=0.0, vmax=vmax, rasterized=False,
        )
        if len(xs) >= 2 and len(ys) >= 2 and np.isfinite(z).any():
            cs = ax.contour(
                xs, ys, z, levels=list(CONTOUR_LEVELS),
                colors=["w", "r"], linestyles="dashed", linewidths=1.0,
            )
            ax.clabel(cs, fmt="%.0f%%", fontsize=7)
        ax.set_title(title)
        ax.set_xlabel(recipe.xlabel or "lambda / omega_a")
        ax.grid(False)
        fig.colorbar(mesh, ax=ax, shrink=0.9)
    axes[0].set_ylabel(recipe.ylabel or "kappa / omega_a")
    cfg = _config(table)
    fig.suptitle(
        recipe.title
        or f"closed form vs numerical scan, n = {cfg.get('n', '?')}"
    )
    fig.subplots_adjust(left=0.08, right=0.98, bottom=0.16, top=0.86, wspace=0.18)


# ----------------------------------------------------------------------
# curves: scan-resonance CSV, frequency and splitting vs the swept knob
# ----------------------------------------------------------------------

def _render_curves(fig, table: Table, recipe: FigureRecipe) -> None:
    lam, kap = table.col("lambda"), table.col("kappa")
    sweep = "kappa" if len(np.unique(kap)) >= len(np.unique(lam)) else "lambda"
    other = "lambda" if sweep == "kappa" else "kappa"
    x_all = table.col(sweep)
    o_all = table.col(other)

    ax_top, ax_bot = fig.subplots(2, 1, sharex=True)
    pairs = (
        (ax_top, "omega_pert", "omega_num", "resonant frequency / omega_a"),
        (ax_bot, "delta_pert", "delta_num", "splitting / omega_a"),
    )
    for ax, pert_col, num_col, ylab in pairs:
        for j, fixed in enumerate(np.unique(o_all)):
            m = o_all == fixed
            order = np.argsort(x_all[m])
            x = x_all[m][order]
            color = f"C{j % 10}"
            label = f"{other} = {fixed:g}"
            ax.plot(x, table.col(pert_col)[m][order], "--", color=color,
                    label=f"{label} (closed form)")
            ax.plot(x, table.col(num_col)[m][order], "o", ms=3.5, color=color,
                    label=f"{label} (scan)")
        ax.set_ylabel(ylab)
    d = np.concatenate([table.col("delta_pert"), table.col("delta_num")])
    d = d[np.isfinite(d)]
    if d.size and (d > 0).all() and d.max() / d.min() > 30:
        ax_bot.set_yscale("log")
    ax_bot.set_xlabel(recipe.xlabel or f"{sweep} / omega_a")
    ax_top.legend(fontsize=7, ncol=2)
    cfg = _config(table)
    fig.suptitle(recipe.title or f"n = {cfg.get('n', '?')} resonance scan")
    fig.subplots_adjust(left=0.10, right=0.97, bottom=0.14, top=0.90, hspace=0.12)


# ----------------------------------------------------------------------
# spectrum: eigenvalue fan across the drive-frequency window
# ----------------------------------------------------------------------

def _render_spectrum(fig, table: Table, recipe: FigureRecipe) -> None:
    ax = fig.subplots()
    omega = table.col("omega_c")
    levels = _level_columns(table)
    for name in levels:
        ax.plot(omega, table.col(name), lw=0.9, color="0.25")
    ax.set_xlabel(recipe.xlabel or "omega_c / omega_a")
    ax.set_ylabel(recipe.ylabel or "energy / omega_a")
    cfg = _config(table)
    fig.suptitle(
        recipe.title
        or f"lowest {len(levels)} levels, n = {cfg.get('n', '?')}, "
           f"lambda = {cfg.get('lambda', '?')}, kappa = {cfg.get('kappa', '?')}"
    )
    fig.subplots_adjust(left=0.09, right=0.97, bottom=0.14, top=0.90)


# ----------------------------------------------------------------------
# trajectory: junction occupancy panels
# ----------------------------------------------------------------------

def _render_trajectory(fig, table: Table, recipe: FigureRecipe) -> None:
    ax_n, ax_q = fig.subplots(2, 1, sharex=True)
    t = table.col("t_over_TH")
    for j in range(3):
        ax_n.plot(t, table.col(f"n{j + 1}"), color=f"C{j}", label=f"site {j + 1}")
        ax_q.plot(t, table.col(f"q{j + 1}"), color=f"C{j}", label=f"site {j + 1}")
    ax_n.set_ylabel("photons per site")
    ax_q.set_ylabel("atom excitation")
    ax_q.set_xlabel(recipe.xlabel or "t / T_H")
    ax_n.legend(fontsize=8, loc="upper right")
    norm = table.col("norm")
    if np.isfinite(norm).any():
        drift = float(np.nanmax(np.abs(norm - 1.0)))
        ax_q.text(0.99, 0.92, f"max |norm - 1| = {drift:.1e}",
                  ha="right", va="top", fontsize=7, color="0.4",
                  transform=ax_q.transAxes)
    cfg = _config(table)
    derived = table.manifest.get("derived", {})
    bits = [f"mu = {cfg.get('mu', '?')}", f"n = {cfg.get('n', '?')}"]
    if "T_H" in derived:
        bits.append(f"T_H = {derived['T_H']:.4g}")
    fig.suptitle(recipe.title or "junction trajectory, " + ", ".join(bits))
    fig.subplots_adjust(left=0.09, right=0.97, bottom=0.14, top=0.90, hspace=0.12)


_RENDERERS = {
    "heatmap": _render_heatmap,
    "curves": _render_curves,
    "spectrum": _render_spectrum,
    "trajectory": _render_trajectory,
}


def render(recipe: FigureRecipe) -> str:
    """Render one recipe; returns the output path.

    A schema mismatch (wrong columns for the kind, missing manifest or
    header) raises SchemaError. A CSV with a valid header but no data
    rows renders blank axes and issues a warning instead of failing, so
    sweep pipelines degrade gracefully.
    """
    table = load_table(recipe.csv_path)
    _check_columns(recipe.kind, table)
    with matplotlib.rc_context(RC_PARAMS):
        fig = plt.figure(figsize=FIGSIZE)
        if not table.rows:
            _empty_axes(fig, recipe, "no data rows")
        else:
            _RENDERERS[recipe.kind](fig, table, recipe)
        return _finish(fig, table, recipe)
