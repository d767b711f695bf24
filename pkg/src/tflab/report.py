"""Result serialization: delimited rows, a JSON summary, and figure rendering.

The CSV schema is fixed: experiment, module, p, q, parameter, member_id,
value, threshold, pass.  Empty cells mean "not applicable" (informational
rows have no threshold and no verdict).  Figures are rendered headlessly and
written next to the delimited output, one PNG per experiment.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

CSV_COLUMNS = ["experiment", "module", "p", "q", "parameter", "member_id",
               "value", "threshold", "pass"]


def _cell(x) -> str:
    if x is None or x == "":
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.16g}"
    return str(x)


def write_rows(rows: list[dict], path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([_cell(row.get(col)) for col in CSV_COLUMNS])


def read_rows(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def write_summary(results, durations: dict, path, extra: dict | None = None) -> None:
    """JSON digest: per-experiment verdicts plus run metadata."""
    payload = {
        "passed": all(r.passed for r in results),
        "experiments": {
            r.name: {
                "passed": r.passed,
                "rows": len(r.rows),
                "duration_s": round(durations.get(r.name, 0.0), 3),
                "checks": [
                    {
                        "name": c.name,
                        "value": c.value,
                        "threshold": c.threshold,
                        "mode": c.mode,
                        "passed": c.passed,
                    }
                    for c in r.checks
                ],
            }
            for r in results
        },
    }
    payload.update(extra or {})
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# figures

def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _parse(tag: str, key: str):
    for tok in tag.split(","):
        if tok.startswith(key + "="):
            return float(tok.split("=", 1)[1])
    return None


def _paint_bh_growth(rows, ax):
    curves = {}
    for r in rows:
        lam = _parse(r["parameter"], "lambda")
        if lam is None:
            continue
        phase = r["parameter"].split(",")[0].split("=")[1]
        curves.setdefault((phase, r["q"]), []).append((lam, r["value"]))
    for (phase, q), pts in sorted(curves.items()):
        pts.sort()
        ax.loglog([a for a, _ in pts], [b for _, b in pts], "o-", label=f"{phase}, q={q}")
    ax.set_xlabel("lambda")
    ax.set_ylabel("transform-side L^q norm")
    ax.legend(fontsize=8)


def _paint_omega_scaling(rows, ax):
    groups = {}
    for r in rows:
        vol = _parse(r["parameter"], "volume")
        if vol is None:
            continue
        groups.setdefault((r["p"], r["q"]), []).append((vol, r["value"]))
    for (p, q), pts in sorted(groups.items()):
        pts.sort()
        ax.loglog([a for a, _ in pts], [b for _, b in pts], "o-", label=f"p={p}, q={q}")
    ax.set_xlabel("fattened support measure")
    ax.set_ylabel("two-sided norm ratio")
    ax.legend(fontsize=8)


def _paint_generic(rows, ax):
    vals = [(i, r["value"]) for i, r in enumerate(rows) if isinstance(r["value"], float)]
    if not vals:
        ax.text(0.5, 0.5, "no numeric rows", ha="center")
        return
    xs = [i for i, _ in vals]
    ys = [v for _, v in vals]
    positive = [y for y in ys if y > 0]
    if positive and max(positive) / min(positive) > 100.0:
        ax.set_yscale("log")
    ax.plot(xs, ys, ".", ms=4)
    ax.set_xlabel("row")
    ax.set_ylabel("value")


_PAINTERS = {
    "bh-growth": _paint_bh_growth,
    "omega-scaling": _paint_omega_scaling,
}


def render_figure(name: str, rows: list[dict], path) -> Path:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.0), dpi=110)
    _PAINTERS.get(name, _paint_generic)(rows, ax)
    ax.set_title(name)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path)
    plt.close(fig)
    return path
