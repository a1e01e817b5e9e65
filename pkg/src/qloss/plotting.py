"""Figure rendering for the command-line report paths.

Every function takes already-computed rows (the same dict rows the CSV
writer receives) and renders a PNG next to the delimited output.  All
rendering uses the Agg backend so the package works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "plot_fragility_report",
    "plot_determinant_curves",
    "plot_mu_scan",
    "plot_random_sweep",
    "plot_majorana_points",
]


def plot_fragility_report(rows, path):
    """Dominant residual eigenvalue per lost qubit, colored by verdict."""
    fig, ax = plt.subplots(figsize=(6.0, 3.5))
    qubits = [row["qubit"] for row in rows]
    weights = [row["dominant_weight"] for row in rows]
    colors = ["tab:red" if row["fragile"] else "tab:blue" for row in rows]
    ax.bar(qubits, weights, color=colors)
    ax.set_xlabel("lost qubit")
    ax.set_ylabel("dominant residual eigenvalue")
    ax.set_ylim(0.0, 1.05)
    ax.set_xticks(qubits)
    handles = [plt.Rectangle((0, 0), 1, 1, color="tab:red"),
               plt.Rectangle((0, 0), 1, 1, color="tab:blue")]
    ax.legend(handles, ["fragile", "robust"], fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_determinant_curves(rows, path):
    """Pair-state partial-transpose determinant versus u, one curve per (N, k)."""
    groups = {}
    for row in rows:
        groups.setdefault((row["N"], row["k"]), []).append(row)
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for (n, k), group in sorted(groups.items()):
        u = [row["u"] for row in group]
        det = [row["det_pt"] for row in group]
        ax.plot(u, det, label=f"N={n}, k={k}")
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("u")
    ax.set_ylabel("det of partially transposed pair state")
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_mu_scan(rows, path, boundary=None):
    """Scatter of the scanned mu grid colored by observed two-loss fragility."""
    fig, ax = plt.subplots(figsize=(6.5, 5.5))
    inside = [row for row in rows if row["in_S"]]
    outside = [row for row in rows if not row["in_S"]]
    if outside:
        ax.scatter(
            [row["Re_mu"] for row in outside],
            [row["Im_mu"] for row in outside],
            s=4, c="0.85", marker=".", label="outside S",
        )
    for fragile, color, label in ((True, "tab:red", "fragile"), (False, "tab:blue", "robust")):
        sel = [row for row in inside if row["fragile_observed"] == fragile]
        if sel:
            ax.scatter(
                [row["Re_mu"] for row in sel],
                [row["Im_mu"] for row in sel],
                s=4, c=color, marker=".", label=label,
            )
    if boundary is not None and len(boundary):
        ax.plot(boundary[:, 0], boundary[:, 1], color="black", linewidth=1.0,
                label="predicted boundary")
    ax.set_xlabel("Re mu")
    ax.set_ylabel("Im mu")
    ax.set_aspect("equal")
    ax.legend(fontsize="small", markerscale=3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_random_sweep(rows, path):
    """Certified-robust fraction against the number of qubits lost."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    t = [row["t"] for row in rows]
    fraction = [row["fraction_robust"] for row in rows]
    ax.plot(t, fraction, marker="o")
    ax.set_xlabel("qubits lost (t)")
    ax.set_ylabel("fraction certified robust")
    ax.set_ylim(-0.05, 1.05)
    ax.set_xticks(t)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_majorana_points(points, multiplicities, path):
    """Majorana constellation on the unit sphere."""
    fig = plt.figure(figsize=(5.5, 5.5))
    ax = fig.add_subplot(projection="3d")
    theta = np.linspace(0.0, np.pi, 19)
    phi = np.linspace(0.0, 2.0 * np.pi, 37)
    theta, phi = np.meshgrid(theta, phi)
    ax.plot_wireframe(
        np.sin(theta) * np.cos(phi),
        np.sin(theta) * np.sin(phi),
        np.cos(theta),
        color="0.85", linewidth=0.4,
    )
    points = np.asarray(points, dtype=float)
    sizes = 40.0 * np.asarray(multiplicities, dtype=float)
    ax.scatter(points[:, 0], points[:, 1], points[:, 2], s=sizes, c="tab:red",
               depthshade=False)
    for point, mult in zip(points, multiplicities):
        if mult > 1:
            ax.text(point[0], point[1], point[2], f" x{mult}", fontsize=8)
    ax.set_box_aspect((1.0, 1.0, 1.0))
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
