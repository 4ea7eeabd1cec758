#!/usr/bin/env python3
"""Render the reference figures from CSV tables produced by the lorentzdc CLI.

Usage:  figures/render <figure-id> <csv> [-o out.png]

figure ids:
  fig1  quantum-fluctuation integrand maps (two depths, values scaled by zeta^3)
  fig2  thermal integrand maps (full / imaginary-part conductivity) and the
        force spectrum over depth, with sign-change contours
  fig3  temperature dependence of the short-distance amplitude c(T)
  fig4  force-density profiles normalised to T/z^2 with the 1/8 and 1/4 guides

Rendering never recomputes physics; it is a pure view of the CSV columns.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.colors import LogNorm, SymLogNorm

FIGURE_IDS = ("fig1", "fig2", "fig3", "fig4")

MAP_COLUMNS = {"panel", "x", "p_or_zeta", "value"}
PROFILE_COLUMNS = {"model", "theta", "zeta", "f_norm"}
PREFACTOR_COLUMNS = {"theta", "c_closed_norm", "c_numeric_norm"}


class SchemaError(RuntimeError):
    pass


def read_csv(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty CSV, nothing to render")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: CSV has a header but no data rows")
    return rows


def require_columns(rows, needed, figure_id):
    have = set(rows[0].keys())
    missing = sorted(needed - have)
    if missing:
        raise SchemaError(f"CSV does not match the {figure_id} schema; "
                          f"missing columns: {', '.join(missing)}")


def fnum(row, key):
    raw = row.get(key, "")
    return float(raw) if raw not in ("", None) else math.nan


def _panel_grid(rows):
    xs = np.array(sorted({fnum(r, "x") for r in rows}))
    ys = np.array(sorted({fnum(r, "p_or_zeta") for r in rows}))
    grid = np.full((ys.size, xs.size), np.nan)
    xi = {v: i for i, v in enumerate(xs)}
    yi = {v: i for i, v in enumerate(ys)}
    for r in rows:
        grid[yi[fnum(r, "p_or_zeta")], xi[fnum(r, "x")]] = fnum(r, "value")
    return xs, ys, grid


def _map_overlays(ax, rows, xs, ps, with_theta):
    w_over_z = fnum(rows[0], "depth_p")
    ax.plot(ps, ps, color="orange", lw=1.2)                      # light cone x = p
    # diffusion line x = p^2/Omega_hat^2 reconstructed from the overlay column
    ref = next((r for r in rows if fnum(r, "diffusion_x") > 0), None)
    if ref is not None:
        w2 = fnum(ref, "p_or_zeta") ** 2 / fnum(ref, "diffusion_x")
        ax.plot(ps, ps * ps / w2, "k--", lw=0.8)
    ax.axhline(1.0, color="gray", ls="--", lw=0.8)               # x = 1 knee
    if not math.isnan(w_over_z):
        ax.axvline(w_over_z, color="gray", ls="--", lw=0.8)      # p = Omega_hat/zeta
        ax.axhline(w_over_z, color="gray", ls=":", lw=0.8)       # xi = c/z analog
    if with_theta:
        th = fnum(rows[0], "theta_x")
        if not math.isnan(th):
            ax.axhline(th, color="gray", ls="-.", lw=0.8)        # x = theta


def render_fig1(rows):
    require_columns(rows, MAP_COLUMNS, "fig1")
    panels = sorted({r["panel"] for r in rows})
    fig, axes = plt.subplots(1, len(panels), figsize=(5.2 * len(panels), 4.4))
    axes = np.atleast_1d(axes)
    for ax, name in zip(axes, panels):
        sub = [r for r in rows if r["panel"] == name]
        xs, ps, grid = _panel_grid(sub)
        positive = np.nanmax(grid) > 0
        vmax = np.nanmax(np.abs(grid))
        norm = LogNorm(vmin=max(vmax * 1e-12, 1e-300), vmax=vmax) if positive else None
        pcm = ax.pcolormesh(ps, xs, grid.T, norm=norm, shading="auto", cmap="viridis")
        _map_overlays(ax, sub, xs, ps, with_theta=False)
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel(r"$p = cQ\tau$")
        ax.set_ylabel(r"$\hat x = \xi\tau$")
        ax.set_title(f"({name}) quantum integrand $\\times\\,\\zeta^3$")
        fig.colorbar(pcm, ax=ax)
    fig.tight_layout()
    return fig


def render_fig2(rows):
    require_columns(rows, MAP_COLUMNS, "fig2")
    panels = sorted({r["panel"] for r in rows})
    fig, axes = plt.subplots(1, len(panels), figsize=(5.0 * len(panels), 4.2))
    axes = np.atleast_1d(axes)
    for ax, name in zip(axes, panels):
        sub = [r for r in rows if r["panel"] == name]
        xs, ys, grid = _panel_grid(sub)
        vmax = np.nanmax(np.abs(grid))
        norm = SymLogNorm(linthresh=max(vmax * 1e-6, 1e-300), vmin=-vmax, vmax=vmax)
        spectrum = math.isnan(fnum(sub[0], "lightcone_x"))
        if spectrum:
            # panel (c): force spectrum over (zeta, x), sign changes dash-dotted red
            pcm = ax.pcolormesh(ys, xs, grid.T, norm=norm, shading="auto", cmap="RdBu_r")
            if np.nanmin(grid) < 0 < np.nanmax(grid):
                ax.contour(ys, xs, grid.T, levels=[0.0], colors="red",
                           linestyles="dashdot", linewidths=1.0)
            th = fnum(sub[0], "theta_x")
            if not math.isnan(th):
                ax.axhline(th, color="gray", ls="--", lw=0.8)
            ax.set_xlabel(r"$\zeta = z/\bar\lambda_p$")
            ax.set_ylabel(r"$x = \omega\tau$")
            ax.set_title(f"({name}) spectrum $\\times\\,\\zeta^2$")
        else:
            pcm = ax.pcolormesh(ys, xs, grid.T, norm=norm, shading="auto", cmap="RdBu_r")
            _map_overlays(ax, sub, xs, ys, with_theta=True)
            ax.set_xlabel(r"$p = cQ\tau$")
            ax.set_ylabel(r"$x = \omega\tau$")
            ax.set_title(f"({name}) thermal integrand")
        ax.set_xscale("log")
        ax.set_yscale("log")
        fig.colorbar(pcm, ax=ax)
    fig.tight_layout()
    return fig


def render_fig3(rows):
    require_columns(rows, PREFACTOR_COLUMNS, "fig3")
    thetas = np.array([fnum(r, "theta") for r in rows])
    closed = np.array([fnum(r, "c_closed_norm") for r in rows])
    numeric = np.array([fnum(r, "c_numeric_norm") for r in rows])
    order = np.argsort(thetas)
    fig, ax = plt.subplots(figsize=(5.4, 4.0))
    ax.plot(thetas[order], closed[order], "-", color="C0", label="closed form")
    ax.plot(thetas[order], numeric[order], "--", color="C2", label="integral form")
    if "f_norm_at_zeta0.2" in rows[0]:
        fz = np.array([fnum(r, "f_norm_at_zeta0.2") for r in rows])
        good = ~np.isnan(fz)
        if good.any():
            ax.plot(thetas[good], fz[good], "o", color="C3", ms=5,
                    label=r"full force at $\zeta = 0.2$")
    ax.axhline(0.125, color="gray", ls=":", lw=0.9)
    ax.set_xscale("log")
    ax.set_xlabel(r"$\theta = k_B T \tau/\hbar$")
    ax.set_ylabel(r"$c(T)\,\bar\lambda_p^2/(k_B T)$")
    ax.legend()
    fig.tight_layout()
    return fig


def render_fig4(rows):
    require_columns(rows, PROFILE_COLUMNS, "fig4")
    fig, ax = plt.subplots(figsize=(5.6, 4.2))
    groups = {}
    for r in rows:
        groups.setdefault((r["model"], fnum(r, "theta")), []).append(r)
    for (model, theta), sub in sorted(groups.items()):
        z = np.array([fnum(r, "zeta") for r in sub])
        fn = np.array([fnum(r, "f_norm") for r in sub])
        order = np.argsort(z)
        style = dict(ls="-.", color="black") if model == "ideal" else {}
        label = "ideal conductor" if model == "ideal" else f"{model}, $\\theta$ = {theta:g}"
        ax.plot(z[order], np.abs(fn[order]), label=label, **style)
    # short- and large-distance guides of the ideal-conductor closed form
    ax.axhline(0.125, color="gray", ls="--", lw=1.0)
    ax.axhline(0.25, color="gray", ls="--", lw=1.0)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(r"$\zeta = z/\bar\lambda_p$")
    ax.set_ylabel(r"$-f\,z^2\bar\lambda_p^2/(k_B T)$")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


RENDERERS = {
    "fig1": render_fig1,
    "fig2": render_fig2,
    "fig3": render_fig3,
    "fig4": render_fig4,
}


def render(figure_id, csv_path, out_path=None):
    if figure_id not in RENDERERS:
        raise SchemaError(f"unknown figure id {figure_id!r}, expected one of {FIGURE_IDS}")
    rows = read_csv(csv_path)
    fig = RENDERERS[figure_id](rows)
    out = out_path or f"{figure_id}.png"
    fig.savefig(out, dpi=160)
    return fig, out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="figures/render", description=__doc__)
    parser.add_argument("figure_id", choices=FIGURE_IDS)
    parser.add_argument("csv")
    parser.add_argument("-o", "--out", default=None)
    args = parser.parse_args(argv)
    try:
        _, out = render(args.figure_id, args.csv, args.out)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
