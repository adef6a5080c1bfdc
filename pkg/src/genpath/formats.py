"""Readers and writers for graph, matrix, trajectory and report files."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .graph_core import Graph


def graph_to_dict(g: Graph) -> dict:
    return {"num_vertices": g.num_vertices, "edges": [list(e) for e in g.sorted_edges()]}


def graph_from_dict(data: dict) -> Graph:
    return Graph.from_edges(int(data["num_vertices"]), data["edges"])


def graph_to_edge_list(g: Graph) -> str:
    lines = [f"# vertices {g.num_vertices}"]
    lines += [f"{u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def graph_from_edge_list(text: str) -> Graph:
    num_vertices = None
    edges = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "vertices":
                num_vertices = int(parts[1])
            continue
        u, v = line.split()
        edges.append((int(u), int(v)))
    if num_vertices is None:
        raise ValueError("edge list is missing the '# vertices N' header")
    return Graph.from_edges(num_vertices, edges)


def read_graph(path: str | Path) -> Graph:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        return graph_from_dict(json.loads(text))
    return graph_from_edge_list(text)


def write_graph(g: Graph, path: str | Path) -> None:
    path = Path(path)
    if path.suffix == ".json":
        path.write_text(dumps(graph_to_dict(g)))
    else:
        path.write_text(graph_to_edge_list(g))


def matrix_to_csv(m: np.ndarray) -> str:
    buf = io.StringIO()
    buf.write(f"order={m.shape[0]}\n")
    writer = csv.writer(buf, lineterminator="\n")
    for row in m:
        writer.writerow([repr(float(x)) for x in row])
    return buf.getvalue()


def matrix_from_csv(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].strip()
    if not header.startswith("order="):
        raise ValueError(f"matrix CSV must start with 'order=N', got {header!r}")
    order = int(header.split("=", 1)[1])
    rows = [[float(x) for x in row] for row in csv.reader(lines[1:])]
    m = np.array(rows, dtype=float)
    if m.shape != (order, order):
        raise ValueError(f"expected a {order}x{order} matrix, got shape {m.shape}")
    return m


def trajectory_to_csv(times, states, inputs) -> str:
    n = states.shape[1]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t"] + [f"x{i}" for i in range(1, n + 1)] + ["u"])
    for t, x, u in zip(times, states, inputs):
        writer.writerow([repr(float(t))] + [repr(float(v)) for v in x] + [repr(float(u))])
    return buf.getvalue()


def trajectory_from_csv(text: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    rows = list(csv.reader(io.StringIO(text)))
    data = np.array(rows[1:], dtype=float)
    return data[:, 0], data[:, 1:-1], data[:, -1]


def _finite(obj):
    """Non-finite floats become ``null`` so the output stays strict JSON."""
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _finite(obj.tolist())
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(data) -> str:
    return json.dumps(_finite(data), indent=2, default=_jsonable, allow_nan=False) + "\n"
