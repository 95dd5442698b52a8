"""Named graphs shipped with the package, plus small parametric families.

Names accepted by :func:`load_fixture`:

* any JSON file under ``chainpursuit/fixtures`` (``fig2a``, ``fig6``, ...);
* ``p<n>``, ``c<n>``, ``k<n>`` for paths, cycles and complete graphs;
* ``grid<r>x<c>`` (``grid<n>`` for square) with vertex ``(i, j)`` at ``i*c + j``.
"""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path

from .graph import Graph, complete_graph, cycle_graph, grid_graph, load_graph, path_graph

_FAMILY = re.compile(r"^(p|c|k)(\d+)$")
_GRID = re.compile(r"^grid(\d+)(?:x(\d+))?$")


def _fixture_dir():
    return resources.files(__package__).joinpath("fixtures")


def fixture_names() -> list[str]:
    return sorted(
        p.name[: -len(".json")] for p in _fixture_dir().iterdir() if p.name.endswith(".json")
    )


def fixture_text(name: str) -> str | None:
    """Raw text of a shipped fixture file, or None for generated families."""
    res = _fixture_dir().joinpath(f"{name}.json")
    if res.is_file():
        return res.read_text(encoding="utf-8")
    return None


def load_fixture(name: str) -> Graph:
    text = fixture_text(name)
    if text is not None:
        return load_graph(text)
    m = _FAMILY.match(name)
    if m:
        kind, n = m.group(1), int(m.group(2))
        if kind == "c" and n < 3:
            raise ValueError("cycles need at least 3 vertices")
        if n < 1:
            raise ValueError("families need at least 1 vertex")
        return {"p": path_graph, "c": cycle_graph, "k": complete_graph}[kind](n)
    m = _GRID.match(name)
    if m:
        rows = int(m.group(1))
        cols = int(m.group(2) or rows)
        return grid_graph(rows, cols)
    raise KeyError(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}")


def resolve_graph(name_or_path: str) -> tuple[Graph, str]:
    """Load ``name_or_path`` as a file path if one exists, else as a fixture name.

    Returns the graph and the exact text it was built from (for digests).
    """
    path = Path(name_or_path)
    if path.is_file():
        text = path.read_text(encoding="utf-8")
        return load_graph(text), text
    text = fixture_text(name_or_path)
    if text is not None:
        return load_graph(text), text
    g = load_fixture(name_or_path)
    return g, name_or_path


def terminals(g: Graph) -> tuple[int, int] | None:
    """The ``(s, t)`` pair a fixture marks as its intended terminals."""
    pair = g.meta.get("terminals")
    if pair is None:
        return None
    s, t = pair
    return int(s), int(t)
