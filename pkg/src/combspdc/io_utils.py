"""Deterministic file writers for run artifacts.

CSV and JSON outputs are byte-stable across reruns of the same
configuration: floats are serialized with repr (shortest round-trip form),
JSON keys are sorted, and no timestamps are embedded.  Every writer
registers its file with a :class:`Manifest` that records content hashes.
"""

from __future__ import annotations

import hashlib
import json
import os

import numpy as np


class Manifest:
    """Collects written files and lands as manifest.json next to them."""

    def __init__(self, out_dir: str):
        self.out_dir = out_dir
        self.entries: list[dict] = []
        os.makedirs(out_dir, exist_ok=True)

    def path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    def register(self, name: str) -> None:
        p = self.path(name)
        h = hashlib.sha256()
        with open(p, "rb") as fh:
            data = fh.read()
        h.update(data)
        self.entries.append({"path": name, "sha256": h.hexdigest(),
                             "bytes": len(data)})

    def write(self) -> str:
        p = self.path("manifest.json")
        payload = {"files": sorted(self.entries, key=lambda e: e["path"])}
        with open(p, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return p


def write_json(manifest: Manifest, name: str, data) -> str:
    p = manifest.path(name)
    with open(p, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")
    manifest.register(name)
    return p


def write_grid_csv(manifest: Manifest, name: str, signal_nm, idler_nm, rows) -> str:
    """Grid export: two header lines with the axes in nm, then the rows.

    Row i corresponds to signal_nm[i]; column j to idler_nm[j].
    """
    p = manifest.path(name)
    with open(p, "w", encoding="utf-8") as fh:
        fh.write("# signal_nm," + ",".join(repr(float(v)) for v in signal_nm) + "\n")
        fh.write("# idler_nm," + ",".join(repr(float(v)) for v in idler_nm) + "\n")
        for row in rows:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    manifest.register(name)
    return p


def write_table_csv(manifest: Manifest, name: str, header: list[str], rows) -> str:
    p = manifest.path(name)
    with open(p, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")
    manifest.register(name)
    return p


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_heatmap_png(manifest: Manifest, name: str, intensity, signal_nm,
                      idler_nm, title: str = "") -> str:
    """Linear-scale intensity heatmap with wavelength axes."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    z = np.asarray(intensity, dtype=float)
    s = np.asarray(signal_nm, dtype=float)
    i = np.asarray(idler_nm, dtype=float)
    fig, ax = plt.subplots(figsize=(5.2, 4.4))
    # axes in nm decrease with frequency; show wavelength increasing
    mesh = ax.pcolormesh(i, s, z, shading="auto", cmap="inferno")
    ax.set_xlabel("idler wavelength (nm)")
    ax.set_ylabel("signal wavelength (nm)")
    if title:
        ax.set_title(title)
    fig.colorbar(mesh, ax=ax, label="intensity (arb.)")
    fig.tight_layout()
    p = manifest.path(name)
    fig.savefig(p, dpi=150)
    plt.close(fig)
    manifest.register(name)
    return p


def write_line_png(manifest: Manifest, name: str, x, curves: dict,
                   xlabel: str, ylabel: str, title: str = "") -> str:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    for label, y in curves.items():
        ax.plot(x, y, label=label, lw=1.2)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(curves) > 1:
        ax.legend(fontsize=8)
    fig.tight_layout()
    p = manifest.path(name)
    fig.savefig(p, dpi=150)
    plt.close(fig)
    manifest.register(name)
    return p
