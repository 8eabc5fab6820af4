"""Render experiment CSVs to figures, one image per group.

The input must follow the public schema `gibbslab-csv-1`:

    schema, experiment, family, n, beta, ell, quantity, value, band,
    samples, seed, version, wall_time_s

Numeric y-columns become line plots over the x-column; categorical
y-columns (e.g. the uniqueness verdicts) become step plots with labeled
levels.  Output is deterministic for identical input and spec.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

SCHEMA = "gibbslab-csv-1"
COLUMNS = (
    "schema",
    "experiment",
    "family",
    "n",
    "beta",
    "ell",
    "quantity",
    "value",
    "band",
    "samples",
    "seed",
    "version",
    "wall_time_s",
)


class RenderError(RuntimeError):
    """Schema mismatch, missing column, or empty selection."""


@dataclass(frozen=True)
class PlotSpec:
    inputs: tuple
    x: str
    y: str = "value"
    group_by: tuple = ()
    filters: dict = field(default_factory=dict)
    out: str = "plot"
    format: str = "png"
    title: str | None = None

    def __post_init__(self):
        for col in (self.x, self.y, *self.group_by, *self.filters):
            if col not in COLUMNS:
                raise RenderError(f"column {col!r} is not part of the {SCHEMA} schema")
        if self.format not in ("png", "svg"):
            raise RenderError(f"unsupported image format {self.format!r}")


def load_plot_spec(source) -> PlotSpec:
    if isinstance(source, dict):
        obj = dict(source)
    else:
        with open(source, "r", encoding="utf8") as fh:
            obj = json.load(fh)
    known = {"inputs", "x", "y", "group_by", "filters", "out", "format", "title"}
    unknown = set(obj) - known
    if unknown:
        raise RenderError(f"unknown plot spec keys: {sorted(unknown)}")
    obj["inputs"] = tuple(obj.get("inputs", ()))
    obj["group_by"] = tuple(obj.get("group_by", ()))
    return PlotSpec(**obj)


def _read_rows(paths) -> list:
    rows = []
    for path in paths:
        with open(path, "r", encoding="utf8", newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or tuple(reader.fieldnames) != COLUMNS:
                raise RenderError(
                    f"{path}: header does not match the {SCHEMA} schema "
                    f"(got {reader.fieldnames})"
                )
            for row in reader:
                if row["schema"] != SCHEMA:
                    raise RenderError(f"{path}: schema tag {row['schema']!r} != {SCHEMA!r}")
                rows.append(row)
    if not rows:
        raise RenderError("no data rows in the input CSVs")
    return rows


def _as_number(text):
    try:
        return float(text)
    except (TypeError, ValueError):
        return None


def render(spec: PlotSpec) -> list:
    """Render one image per group; returns the written paths."""
    rows = _read_rows(spec.inputs)
    for col, want in spec.filters.items():
        rows = [r for r in rows if r[col] == str(want)]
    if not rows:
        raise RenderError("selection is empty after filtering")

    groups: dict = {}
    for row in rows:
        key = tuple((col, row[col]) for col in spec.group_by)
        groups.setdefault(key, []).append(row)

    out_base = Path(spec.out)
    out_base.parent.mkdir(parents=True, exist_ok=True)
    written = []
    for key in sorted(groups, key=repr):
        sel = groups[key]
        xs_raw = [r[spec.x] for r in sel]
        ys_raw = [r[spec.y] for r in sel]
        xs_num = [_as_number(v) for v in xs_raw]
        ys_num = [_as_number(v) for v in ys_raw]
        if any(v is None for v in xs_num):
            raise RenderError(f"x column {spec.x!r} is not numeric in group {key}")

        order = sorted(range(len(sel)), key=lambda i: xs_num[i])
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        label = ", ".join(f"{c}={v}" for c, v in key) or "all"
        if all(v is not None for v in ys_num):
            ax.plot(
                [xs_num[i] for i in order],
                [ys_num[i] for i in order],
                marker="o",
            )
        else:
            levels = sorted({ys_raw[i] for i in order})
            level_of = {v: i for i, v in enumerate(levels)}
            ax.step(
                [xs_num[i] for i in order],
                [level_of[ys_raw[i]] for i in order],
                where="post",
                marker="o",
            )
            ax.set_yticks(range(len(levels)))
            ax.set_yticklabels(levels)
        ax.set_xlabel(spec.x)
        ax.set_ylabel(spec.y)
        ax.set_title(spec.title or label)
        ax.grid(True, alpha=0.3)
        suffix = "" if len(groups) == 1 else "__" + "_".join(f"{c}-{v}" for c, v in key).replace("/", "-")
        # plain concatenation: group labels may contain dots (beta values)
        path = out_base.parent / f"{out_base.name}{suffix}.{spec.format}"
        fig.savefig(path)
        plt.close(fig)
        written.append(str(path))
    return written
