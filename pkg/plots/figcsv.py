"""Reader for the experiment CSV contract.

Files begin with '#' comment lines (tool version, command echo, and
``key = value`` parameter pairs), followed by a header row and data rows.
Empty cells mean "not computed" and come back as NaN.  Rendering never
recomputes model quantities; everything drawn is a column or a header
entry of the file.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np


class SchemaError(Exception):
    """A figure CSV is missing something the renderer needs."""


@dataclass(frozen=True)
class FigureCsv:
    path: Path
    header: dict
    columns: dict  # name -> float array (NaN where empty)

    def require(self, *names: str):
        for name in names:
            if name not in self.columns:
                raise SchemaError(f"{self.path}: missing required column {name!r}")

    def series(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise SchemaError(f"{self.path}: missing required column {name!r}")
        return self.columns[name]

    def has_values(self, name: str) -> bool:
        return name in self.columns and bool(np.any(np.isfinite(self.columns[name])))


def _to_float(cell: str) -> float:
    if cell == "":
        return float("nan")
    try:
        return float(cell)
    except ValueError:
        return float("nan")


def read_figure_csv(path) -> FigureCsv:
    path = Path(path)
    header: dict = {}
    names = None
    rows = []
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            if line.startswith("# command:"):
                header["command"] = line[len("# command:"):].strip()
            elif "=" in line:
                key, _, value = line[1:].partition("=")
                header[key.strip()] = value.strip()
            continue
        if names is None:
            names = line.split(",")
            continue
        if line.strip():
            rows.append(line.split(","))
    if names is None:
        raise SchemaError(f"{path}: no column header found")
    columns = {
        name: np.array([_to_float(row[i]) for row in rows])
        for i, name in enumerate(names)
    }
    return FigureCsv(path=path, header=header, columns=columns)
