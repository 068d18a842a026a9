"""Delimited output, extrema text and figures for sweep results."""

from __future__ import annotations

import csv
import io
import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .sweeps import CSV_COLUMNS, SweepResult, SweepRow  # noqa: E402


def _fmt(x) -> str:
    if x is None:
        return ""
    # repr of a float is locale-free and round-trips exactly
    return repr(float(x))


def _parse(s: str):
    return None if s == "" else float(s)


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([_fmt(r.alpha_sq), _fmt(r.gt), _fmt(r.omega_over_g), r.rwa,
                         _fmt(r.objective), r.kind])
    return buf.getvalue()


def write_csv(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(rows_to_csv(rows))


def read_csv(path) -> list[SweepRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        return [SweepRow(float(d["alpha_sq"]), _parse(d["gt"]), _parse(d["omega_over_g"]),
                         d["rwa"], float(d["objective"]), d["kind"]) for d in reader]


def format_extrema(result: SweepResult) -> list[str]:
    lines = []
    for e in result.extrema:
        where = f"alpha_sq={e.alpha_sq:.4f}"
        if e.gt is not None:
            where += f" gt={e.gt:.4f}"
        lines.append(f"{e.kind:<3}  {e.series}: {e.value:.4f} at {where}")
    return lines


_AXIS_LABELS = {
    "p_err_min": "minimum error probability",
    "helstrom_bound": "minimum error probability",
    "q_one": "failure probability",
    "q_sm": "failure probability",
    "kennedy_bound": "failure probability",
}


def plot_result(result: SweepResult, path) -> None:
    """Line plot of every (kind, rwa, omega) series; gt or alpha_sq on the x axis."""
    series = {}
    for r in result.rows:
        if r.kind == "guard_error" or not math.isfinite(r.objective):
            continue
        series.setdefault((r.kind, r.rwa, r.omega_over_g), []).append(r)
    if not series:
        raise ValueError("nothing to plot")

    vs_gt = result.mode in ("purity",) or (
        result.mode == "ambiguous-sweep" and len({r.alpha_sq for r in result.rows}) == 1)
    with plt.rc_context({"svg.hashsalt": "jcd", "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for (kind, rwa, omega), rows in series.items():
            xs = [r.gt if vs_gt else r.alpha_sq for r in rows]
            label = kind if rwa == "na" else (
                f"{kind}, RWA" if rwa == "on" else f"{kind}, no RWA (omega/g={omega:g})")
            style = "-" if rwa == "na" else (":" if rwa == "on" else "-.")
            ax.plot(xs, [r.objective for r in rows], style, lw=1.4, label=label)
        ax.set_xlabel("gt" if vs_gt else r"$|\alpha|^2$")
        kinds = sorted({k for k, _, _ in series})
        ax.set_ylabel(_AXIS_LABELS.get(kinds[0], kinds[0] if len(kinds) == 1 else "value"))
        ax.set_title(result.mode)
        ax.legend(fontsize=7, frameon=False)
        fig.tight_layout()
        fig.savefig(path, metadata={"Date": None} if str(path).endswith(".svg") else None)
        plt.close(fig)
