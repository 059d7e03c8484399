"""Figure rendering for the report commands.

Everything draws through the Agg backend straight to PNG files; nothing here
opens a window. Each renderer returns the list of files it wrote so the run
manifest can record them.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _save(fig, out_dir: str, name: str) -> str:
    path = os.path.join(out_dir, name)
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def _downsample(idx: np.ndarray, vals: np.ndarray, cap: int = 4000):
    if len(idx) <= cap:
        return idx, vals
    step = len(idx) // cap + 1
    return idx[::step], vals[::step]


def render_sieve(out_dir: str, vonmangoldt, mu) -> list[str]:
    files = []
    x = vonmangoldt.limit
    n = np.arange(x + 1)
    psi = np.cumsum(vonmangoldt.values)
    i, v = _downsample(n[1:], psi[1:])
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(i, v, lw=1.0, label="psi(t)")
    ax.plot(i, i, lw=0.8, ls="--", color="gray", label="t")
    ax.set_xlabel("t")
    ax.set_ylabel("cumulative Lambda mass")
    ax.legend(loc="upper left")
    ax.set_title(f"Chebyshev psi up to {x}")
    files.append(_save(fig, out_dir, "sieve_psi.png"))

    mert = np.cumsum(mu.values)
    i, v = _downsample(n[1:], mert[1:])
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(i, v, lw=0.8, color="tab:green")
    ax.axhline(0.0, color="gray", lw=0.8)
    ax.set_xlabel("t")
    ax.set_ylabel("Mertens sum")
    ax.set_title("Cumulative Mobius sum")
    files.append(_save(fig, out_dir, "sieve_mertens.png"))
    return files


def render_identities(out_dir: str, rows: list[dict]) -> list[str]:
    xs = [r["x"] for r in rows]
    measured = [r["lambda_sum"] for r in rows]
    predicted = [r["x_times_l"] for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(xs, measured, "o-", label="sum of lambda(n), n <= x")
    ax.plot(xs, predicted, "--", label="L(1, chi) * x")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("x")
    ax.legend(loc="upper left")
    ax.set_title("Mean value of the convolved character weight")
    return [_save(fig, out_dir, "identities_mean_value.png")]


def render_lvalue(out_dir: str, chi, terms: int = 5000) -> list[str]:
    from .characters import chi_eval

    terms = min(terms, 20000)
    vals = np.array([chi_eval(chi, n) for n in range(1, terms + 1)], dtype=np.float64)
    partial = np.cumsum(vals / np.arange(1, terms + 1))
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(np.arange(1, terms + 1), partial, lw=0.9)
    ax.axhline(partial[-1], color="gray", lw=0.8, ls="--")
    ax.set_xlabel("terms")
    ax.set_ylabel("partial sum of chi(n)/n")
    ax.set_title(f"L(1, chi) partial sums, disc = {chi.disc}")
    return [_save(fig, out_dir, "lvalue_partial_sums.png")]


def render_theorem1(out_dir: str, reports, threshold: float) -> list[str]:
    residues = [r.a for r in reports]
    psis = [r.psi for r in reports]
    preds = [r.predicted for r in reports]
    colors = ["tab:red" if r.chi_a == 1 else "tab:blue" for r in reports]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.bar(range(len(residues)), psis, color=colors, width=0.8)
    ax.plot(range(len(residues)), preds, "k.", ms=3, label="character main term")
    ax.axhline(threshold, color="gray", ls="--", lw=0.9, label="deficiency threshold")
    ax.set_xlabel("residue class index (coprime a ascending)")
    ax.set_ylabel("psi(x, q, a)")
    ax.legend(loc="lower right", fontsize=8)
    ax.set_title("Progression mass per residue (blue: chi(a) = -1)")
    return [_save(fig, out_dir, "theorem1_residues.png")]


def render_theorem2(out_dir: str, rows) -> list[str]:
    qs = [r[0] for r in rows]
    devs = [r[4] for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(qs, devs, ".", ms=4)
    ax.set_xlabel("q")
    ax.set_ylabel("|psi(x, q, a) - psi(x)/phi(q)|")
    ax.set_title("Per-modulus deviation over the dyadic window")
    return [_save(fig, out_dir, "theorem2_deviation.png")]


def render_bounds(out_dir: str, smooth_rows: list[dict]) -> list[str]:
    from .bounds import dickman_rho

    us = np.linspace(1.0, 6.0, 200)
    rhos = [dickman_rho(float(u)) for u in us]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(us, rhos, lw=1.2, label="rho(u)")
    if smooth_rows:
        ax.plot(
            [r["u"] for r in smooth_rows],
            [r["density"] for r in smooth_rows],
            "o",
            label="Psi(x, x^(1/u)) / x",
        )
    ax.set_yscale("log")
    ax.set_xlabel("u")
    ax.legend(loc="upper right")
    ax.set_title("Smooth-number density against the Dickman function")
    return [_save(fig, out_dir, "bounds_dickman.png")]


def render_scan(out_dir: str, entries: list[dict]) -> list[str]:
    discs = [e["disc"] for e in entries]
    lvals = [e["l_value"] for e in entries]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(discs, lvals, ".", ms=4)
    best = min(entries, key=lambda e: e["score"])
    ax.annotate(
        f"disc {best['disc']}",
        xy=(best["disc"], best["l_value"]),
        xytext=(0.55, 0.85),
        textcoords="axes fraction",
        arrowprops={"arrowstyle": "->", "lw": 0.8},
        fontsize=8,
    )
    ax.set_xlabel("fundamental discriminant")
    ax.set_ylabel("L(1, chi_d)")
    ax.set_title("L-values across the discriminant scan")
    return [_save(fig, out_dir, "scan_lvalues.png")]
