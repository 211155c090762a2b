"""Abstract process structures: multigraphs over hyper-environments.

Vertices are environment indices; each co-name pair contributes one edge
between the environments holding its two names.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .syntax import SessionType, ValueType, dual


class ApsError(Exception):
    pass


@dataclass
class Multigraph:
    graph: nx.MultiGraph

    @property
    def vertices(self) -> list[int]:
        return sorted(self.graph.nodes)

    @property
    def endpoints(self) -> dict[tuple[str, str], tuple[int, int]]:
        return {k: (u, v) for u, v, k in self.graph.edges(keys=True)}


def build_aps(
    h: Sequence[Mapping[str, ValueType]], names: Iterable[tuple[str, str]]
) -> Multigraph:
    where: dict[str, int] = {}
    for i, env in enumerate(h):
        for n in env:
            if n in where:
                raise ApsError(f"name {n!r} occurs in two environments")
            where[n] = i
    g = nx.MultiGraph()
    g.add_nodes_from(range(len(h)))
    seen: set[str] = set()
    for x, y in names:
        for n in (x, y):
            if n not in where:
                raise ApsError(f"name {n!r} is not in the hyper-environment")
            if n in seen:
                raise ApsError(f"name {n!r} appears in two co-name pairs")
            seen.add(n)
        tx, ty = h[where[x]][x], h[where[y]][y]
        if not isinstance(tx, SessionType) or ty != dual(tx):
            raise ApsError(f"{x} and {y} do not have dual session types")
        g.add_edge(where[x], where[y], key=(x, y))
    return Multigraph(g)


def is_tree(g: Multigraph) -> bool:
    if g.graph.number_of_nodes() == 0:
        return False
    return nx.is_tree(g.graph)


def is_forest(g: Multigraph) -> bool:
    if g.graph.number_of_nodes() == 0:
        return True
    return nx.is_forest(g.graph)


def leaves(g: Multigraph) -> set[int]:
    return {v for v in g.graph.nodes if g.graph.degree(v) == 1}


def verdict(g: Multigraph) -> str:
    if is_tree(g):
        return "tree"
    if is_forest(g):
        return "forest"
    return "cyclic"


def to_dot(g: Multigraph, h: Sequence[Mapping[str, ValueType]] | None = None) -> str:
    from .surface import print_type

    lines = ["graph aps {"]
    for v in g.vertices:
        if h is not None:
            label = ", ".join(f"{n}:{print_type(t)}" for n, t in h[v].items()) or "∅"
        else:
            label = str(v)
        label = label.replace('"', '\\"')
        lines.append(f'  g{v} [label="{label}"];')
    for (x, y), (u, v) in sorted(g.endpoints.items()):
        lines.append(f'  g{u} -- g{v} [label="{x}/{y}"];')
    lines.append("}")
    return "\n".join(lines)


def config_aps(c) -> tuple[list[dict[str, ValueType]], Multigraph]:
    """One environment per thread, typed from the enclosing binders; one
    edge per binder. Needs no typing derivation, so it also applies to
    configurations that HGV rejects."""
    from .semantics import flatten_config
    from .syntax import free_names

    fl = flatten_config(c)
    types: dict[str, ValueType] = {}
    pairs = []
    for b in fl.binders:
        types[b.x] = b.ann
        types[b.y] = dual(b.ann)
        pairs.append((b.x, b.y))
    h = [{n: types[n] for n in sorted(free_names(t)) if n in types} for t in fl.threads]
    used = {n for env in h for n in env}
    pairs = [(x, y) for x, y in pairs if x in used and y in used]
    return h, build_aps(h, pairs)
