"""Rearranged-matrix and trace artifacts: text grid, PGM graymap, PNG figures.

The text grid and graymap are dependency-free data outputs; the PNG figures
are rendered with matplotlib (imported lazily) for quick visual inspection
of the block-diagonal structure and the per-sweep density history.
"""

from __future__ import annotations

import numpy as np

from .bigraph import BipartiteGraph


def matrix_values(g: BipartiteGraph, row_order, col_order) -> np.ndarray:
    """Adjacency (or weight) matrix with rows/columns permuted."""
    full = np.zeros((g.p, g.q))
    for idx, (i, j) in enumerate(g.edges):
        full[i, j] = g.edge_weights[idx] if g.is_weighted else 1.0
    return full[np.ix_(row_order, col_order)]


def write_text_grid(mat: np.ndarray, fh, weighted: bool) -> None:
    for row in mat:
        if weighted:
            fh.write(" ".join(f"{v:g}" for v in row) + "\n")
        else:
            fh.write(" ".join(str(int(v)) for v in row) + "\n")


def write_pgm(mat: np.ndarray, fh) -> None:
    """ASCII portable graymap; edges ink dark on a white background."""
    rows, cols = mat.shape
    fh.write(f"P2\n{cols} {rows}\n255\n")
    gray = np.round(255 * (1.0 - np.clip(mat, 0.0, 1.0))).astype(int)
    for row in gray:
        fh.write(" ".join(str(v) for v in row) + "\n")


def save_heatmap_png(mat: np.ndarray, path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 6 * mat.shape[0] / max(1, mat.shape[1])))
    ax.imshow(mat, cmap="Greys", interpolation="nearest", aspect="auto", vmin=0, vmax=1)
    ax.set_xlabel("columns (V, grouped by community)")
    ax.set_ylabel("rows (U, grouped by community)")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_trace_png(d_history, path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 3.5))
    sweeps = range(1, len(d_history) + 1)
    ax.plot(sweeps, d_history, marker="o")
    ax.set_xlabel("sweep")
    ax.set_ylabel("partition density")
    ax.set_ylim(0, 1.05)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
