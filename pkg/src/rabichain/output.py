"""Deterministic text and raster writers.

All numeric text uses fixed 12-significant-digit scientific notation so
golden-file comparisons are stable across platforms and runs.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .dynamics import Trajectory


def format_float(x: float) -> str:
    """12 significant digits, scientific."""
    return f"{x:.11e}"


def timeseries_text(traj: Trajectory) -> str:
    lines = ["t_mm\tP_e\tP_g\tP_r\tmean_n"]
    for k in range(traj.t_grid.shape[0]):
        lines.append(
            "\t".join(
                format_float(v)
                for v in (traj.t_grid[k], traj.p_e[k], traj.p_g[k], traj.p_r[k], traj.mean_n[k])
            )
        )
    return "\n".join(lines) + "\n"


def intensity_map_text(traj: Trajectory) -> str:
    """Rows are grid times (top to bottom), columns are sites (left to right)."""
    n = traj.pnt.shape[1]
    lines = ["t_mm\t" + "\t".join(f"P{j}" for j in range(n))]
    for k in range(traj.t_grid.shape[0]):
        row = "\t".join(format_float(v) for v in traj.pnt[k])
        lines.append(format_float(traj.t_grid[k]) + "\t" + row)
    return "\n".join(lines) + "\n"


def intensity_map_pgm(traj: Trajectory) -> bytes:
    """8-bit grayscale raster, max-normalized, binary PGM (P5).

    Rotated a quarter turn relative to the text table so that propagation
    distance runs horizontally: width = grid points, height = sites,
    site 0 on the top row.
    """
    img = traj.pnt.T  # (sites, times)
    peak = img.max()
    scale = 255.0 / peak if peak > 0 else 0.0
    data = np.clip(np.rint(img * scale), 0, 255).astype(np.uint8)
    header = f"P5\n{data.shape[1]} {data.shape[0]}\n255\n".encode("ascii")
    return header + data.tobytes()


def sweep_summary_text(rows: list[tuple[float, float, float, float]]) -> str:
    lines = ["omega0_mm1\tmin_P_r\tmin_population\tmax_mean_n"]
    for omega0, min_pr, min_pop, max_n in rows:
        lines.append("\t".join(format_float(v) for v in (omega0, min_pr, min_pop, max_n)))
    return "\n".join(lines) + "\n"


def write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def write_bytes(path: Path, blob: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(blob)
