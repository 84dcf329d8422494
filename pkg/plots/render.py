"""Render figure CSVs into vector charts.

One analytic curve per CSV; simulated values show as unfilled circles and
header-recorded local optima as asterisks.  The renderer draws only what is
present in the files.
"""

import argparse
import sys

from figcsv import SchemaError, read_figure_csv
from style import LINESTYLES, new_axes, save


def _label(csv, keys):
    parts = []
    for key in keys:
        if key in csv.header:
            parts.append(f"{key}={csv.header[key]}")
    return ", ".join(parts) or csv.path.stem


def render_fig3(csvs, ax):
    for i, csv in enumerate(csvs):
        csv.require("sweep_value", "pm")
        style = "--" if csv.header.get("pm_mode") == "approx" else "-"
        ax.plot(csv.series("sweep_value"), csv.series("pm"), style,
                label=_label(csv, ["mu", "pm_mode"]))
    ax.set_xlabel("collision budget")
    ax.set_ylabel("required miss-detection probability")


def render_fig4a(csvs, ax):
    for i, csv in enumerate(csvs):
        csv.require("sweep_value", "c")
        x = csv.series("sweep_value")
        line, = ax.plot(x, csv.series("c"),
                        linestyle=LINESTYLES[i % len(LINESTYLES)],
                        label=_label(csv, ["chi2"]))
        if csv.has_values("sim_throughput"):
            ax.plot(x, csv.series("sim_throughput"), linestyle="none",
                    marker="o", markerfacecolor="none",
                    markeredgecolor=line.get_color(), markersize=5)
        if "local_max_sigma_s2_db" in csv.header and "local_max_c" in csv.header:
            ax.plot([float(csv.header["local_max_sigma_s2_db"])],
                    [float(csv.header["local_max_c"])],
                    linestyle="none", marker="*", markersize=12,
                    color=line.get_color())
    ax.set_xlabel("transmit power over noise power (dB)")
    ax.set_ylabel("secondary throughput (bit/s/Hz)")


def render_fig4b(csvs, ax):
    for csv in csvs:
        csv.require("sweep_value", "left_max", "right_at_argmax")
        x = csv.series("sweep_value")
        ax.plot(x, csv.series("left_max"), "-", label="maximized left side")
        ax.plot(x, csv.series("right_at_argmax"), "-.", label="right side at argmax")
    ax.set_yscale("log")
    ax.set_xlabel("RSI suppression factor")
    ax.set_ylabel("existence-condition sides")


def render_fig5(csvs, ax):
    for i, csv in enumerate(csvs):
        csv.require("pc", "pw")
        ax.plot(csv.series("pc"), csv.series("pw"),
                linestyle=LINESTYLES[i % len(LINESTYLES)],
                label=_label(csv, ["mu", "chi2"]))
    ax.set_yscale("log")
    ax.set_xlabel("collision ratio")
    ax.set_ylabel("spectrum waste ratio")


def render_fig6(csvs, ax):
    for i, csv in enumerate(csvs):
        csv.require("sweep_value", "pw")
        ax.plot(csv.series("sweep_value"), csv.series("pw"),
                linestyle=LINESTYLES[i % len(LINESTYLES)],
                label=_label(csv, ["sigma_s_db", "ns"]))
    ax.set_xlabel("RSI suppression factor (dB)")
    ax.set_ylabel("spectrum waste ratio")


RENDERERS = {
    "fig3": render_fig3,
    "fig4a": render_fig4a,
    "fig4b": render_fig4b,
    "fig5": render_fig5,
    "fig6": render_fig6,
}


def render(csv_paths, figure_kind: str, out_image_path: str):
    """Draw one figure family from its CSV set into a vector image."""
    if figure_kind not in RENDERERS:
        raise SchemaError(f"unknown figure kind {figure_kind!r}")
    csvs = [read_figure_csv(p) for p in csv_paths]
    fig, ax = new_axes()
    RENDERERS[figure_kind](csvs, ax)
    ax.legend(loc="best")
    save(fig, out_image_path)
    return out_image_path


def script_main(figure_kind: str, argv=None) -> int:
    parser = argparse.ArgumentParser(
        description=f"render {figure_kind} CSVs into a vector chart"
    )
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        help="figure CSV files (one curve per file)")
    parser.add_argument("--out", required=True, help="output .svg or .pdf path")
    args = parser.parse_args(argv)
    try:
        render(args.inputs, figure_kind, args.out)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    return 0
