"""CSV and SVG outputs for sweeps and energy profiles."""
import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

SWEEP_HEADER = ("alpha", "c_r", "layers", "mean_snr_db", "mean_prd_pct", "n")
ENERGY_HEADER = ("layer", "f_s", "e")


def _num(x):
    return repr(float(x))


def layers_label(layers):
    return ";".join(str(l) for l in layers)


def write_sweep_csv(path, cells):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_HEADER)
        for c in cells:
            w.writerow([_num(c.alpha), _num(c.c_r), layers_label(c.layer_subset),
                        _num(c.mean_snr_db), _num(c.mean_prd_pct), c.n_signals])


def write_energy_csv(path, profile):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ENERGY_HEADER)
        for layer in sorted(profile):
            for f_s, e in profile[layer]:
                w.writerow([layer, _num(f_s), _num(e)])


def _save_svg(fig, path):
    with matplotlib.rc_context({"svg.hashsalt": "fcae", "svg.fonttype": "none"}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_sweep(cells, path, metric):
    fig, ax = plt.subplots(figsize=(6, 4))
    groups = {}
    for c in cells:
        groups.setdefault((c.alpha, c.layer_subset), []).append(c)
    for (alpha, layers), group in sorted(groups.items()):
        group = sorted(group, key=lambda c: c.c_r)
        ax.plot([c.c_r for c in group], [getattr(c, metric) for c in group], marker="o",
                label=f"alpha={alpha:g}, W[{layers_label(layers)}]")
    ax.set_xlabel("compression ratio")
    ax.set_ylabel("mean SNR (dB)" if metric == "mean_snr_db" else "mean PRD (%)")
    ax.legend(fontsize="small")
    ax.grid(True, alpha=0.3)
    _save_svg(fig, path)


def plot_energy(profile, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    for layer in sorted(profile):
        f_s, e = zip(*profile[layer])
        ax.plot(f_s, e, label=f"W[{layer}]")
    ax.axhline(0.9, color="grey", linestyle=":")
    ax.set_xlabel("fraction of singular values F_s")
    ax.set_ylabel("energy E")
    ax.legend()
    ax.grid(True, alpha=0.3)
    _save_svg(fig, path)


def emit_report(cells, energy_profiles, output_dir):
    """Write sweep/energy CSVs and SVG plots; returns the written paths.

    ``energy_profiles`` maps a label (e.g. the alpha of the checkpoint) to a
    per-layer profile from :func:`~fcae.pipeline.runner.energy_profile`.
    """
    if not cells and not energy_profiles:
        raise ValueError("nothing to report")
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if cells:
        write_sweep_csv(out / "sweep.csv", cells)
        plot_sweep(cells, out / "snr_vs_cr.svg", "mean_snr_db")
        plot_sweep(cells, out / "prd_vs_cr.svg", "mean_prd_pct")
        written += [out / "sweep.csv", out / "snr_vs_cr.svg", out / "prd_vs_cr.svg"]
    for label, profile in energy_profiles.items():
        suffix = "" if len(energy_profiles) == 1 else f"_{label}"
        write_energy_csv(out / f"energy{suffix}.csv", profile)
        plot_energy(profile, out / f"energy{suffix}.svg")
        written += [out / f"energy{suffix}.csv", out / f"energy{suffix}.svg"]
    return written
