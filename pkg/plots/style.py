"""Deterministic publication styling shared by the figure scripts."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

# fixed hash salt and no embedded dates: identical input -> identical bytes
matplotlib.rcParams.update(
    {
        "svg.hashsalt": "latcr-plots",
        "figure.figsize": (6.4, 4.4),
        "figure.dpi": 120,
        "axes.grid": True,
        "grid.alpha": 0.3,
        "grid.linestyle": ":",
        "lines.linewidth": 1.6,
        "legend.fontsize": 8,
        "axes.labelsize": 10,
        "font.size": 9,
    }
)

LINESTYLES = ["-", "--", "-.", ":", (0, (5, 1, 1, 1))]


def new_axes():
    fig, ax = plt.subplots()
    return fig, ax


def save(fig, out_path: str):
    meta_key = "CreationDate" if str(out_path).endswith(".pdf") else "Date"
    fig.savefig(out_path, metadata={meta_key: None}, bbox_inches="tight")
    plt.close(fig)
