"""Benchmark harness: pattern search and edge flipping over grid meshes.

Counts are reproducible and checked by tests; wall times are informative
only and depend on the machine.
"""

from __future__ import annotations

import csv
import time
from typing import IO

from .mesh import flip_rule, gen_mesh, quad_pattern
from .rewrite import find_and_rewrite
from .search import SearchOptions, homomorphisms

TASKS = ("homsearch", "rewrite")
FIELDS = ("size", "rows", "cols", "count", "seconds")


def run_task(task: str, rows: int, cols: int) -> dict:
    """One benchmark row: build the mesh, run the workload, time it."""
    if task not in TASKS:
        raise ValueError(f"unknown benchmark task {task!r}")
    mesh = gen_mesh(rows, cols)
    start = time.perf_counter()
    if task == "homsearch":
        count = len(homomorphisms(quad_pattern(), mesh))
    else:
        count = len(find_and_rewrite(flip_rule(), mesh, SearchOptions(monic=True)))
    elapsed = time.perf_counter() - start
    return {
        "size": f"{rows}x{cols}",
        "rows": rows,
        "cols": cols,
        "count": count,
        "seconds": round(elapsed, 6),
    }


def run_bench(task: str, sizes: list[tuple[int, int]]) -> list[dict]:
    return [run_task(task, rows, cols) for rows, cols in sizes]


def write_csv(rows: list[dict], fh: IO[str]) -> None:
    writer = csv.DictWriter(fh, fieldnames=FIELDS)
    writer.writeheader()
    for row in rows:
        writer.writerow(row)


def parse_sizes(spec: str) -> list[tuple[int, int]]:
    """Parse a size list like "2x2,2x3,2x4"; empty string means no sizes."""
    out: list[tuple[int, int]] = []
    for token in filter(None, (t.strip() for t in spec.split(","))):
        rows, _, cols = token.partition("x")
        out.append((int(rows), int(cols)))
    return out
