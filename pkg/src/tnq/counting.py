"""Counting proper 3-edge-colorings of 3-regular graphs.

One order-3 antisymmetric tensor per node, one wire per edge, contracted
through the network planner.  For planar graphs the magnitude equals the
number of proper colorings; for non-planar graphs the value is a signed
sum (the classic bipartite counterexample contracts to zero even though
colorings exist).  A backtracking enumerator serves as the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tensor as tz
from .errors import NumericalError, ParseError, ShapeError
from .gates import epsilon_tensor
from .network import Network, contract_network


@dataclass(frozen=True)
class ColorGraph:
    """Undirected multigraph given by an edge list (no self-loops)."""

    n_nodes: int
    edges: tuple
    planarity_asserted: bool = False

    def __post_init__(self):
        edges = tuple(
            (int(u), int(v)) for u, v in self.edges
        )
        object.__setattr__(self, "edges", edges)
        for u, v in edges:
            if not (0 <= u < self.n_nodes and 0 <= v < self.n_nodes):
                raise ShapeError(f"edge ({u}, {v}) references a bad node")
            if u == v:
                raise ShapeError("self-loops are not allowed")

    def degrees(self):
        deg = [0] * self.n_nodes
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


def parse_edgelist(text, planarity_asserted=False):
    """Parse lines of `u v` node pairs; '#' starts a comment."""
    edges = []
    max_node = -1
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != 2:
            raise ParseError(f"expected two node ids, got {body!r}",
                             code="malformed", line=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer token in {body!r}",
                             code="bad-token", line=lineno)
        if u < 0 or v < 0:
            raise ParseError("negative node id", code="bad-token",
                             line=lineno)
        edges.append((u, v))
        max_node = max(max_node, u, v)
    return ColorGraph(max_node + 1, tuple(edges),
                      planarity_asserted=planarity_asserted)


def _check_cubic(g):
    deg = g.degrees()
    bad = [i for i, d in enumerate(deg) if d != 3]
    if bad:
        raise ShapeError(f"graph is not 3-regular (nodes {bad})")


def count_colorings_epsilon(g):
    """Signed coloring count by contracting one epsilon per node.

    Legs at each node are ordered by ascending (neighbor, edge id); the
    lower-numbered endpoint of each edge keeps a ket leg and the other
    endpoint a bra leg so the bond orientations pair up.  Leg-order
    changes only flip the overall sign, so the magnitude is the
    invariant quantity.
    """
    _check_cubic(g)
    # per node: sorted list of (neighbor, edge_id, is_lower_endpoint)
    incidence = {i: [] for i in range(g.n_nodes)}
    for eid, (u, v) in enumerate(g.edges):
        lo, hi = (u, v) if u <= v else (v, u)
        incidence[lo].append((hi, eid, True))
        incidence[hi].append((lo, eid, False))
    net = Network()
    endpoint = {}  # edge id -> list of (node, leg)
    for node in range(g.n_nodes):
        legs = sorted(incidence[node])
        t = epsilon_tensor(3)
        for pos, (_, _, is_lower) in enumerate(legs):
            if not is_lower:
                t = tz.bend_leg(t, pos)
        net.add_node(node, t)
        for pos, (_, eid, _) in enumerate(legs):
            endpoint.setdefault(eid, []).append((node, pos))
    for eid, ends in endpoint.items():
        net.add_bond(ends[0], ends[1])
    net.finalize()
    val = complex(contract_network(net).data)
    k = int(round(val.real))
    if abs(val - k) > 1e-6:
        raise NumericalError(f"coloring count residue {abs(val - k)}")
    return k


def count_colorings_bruteforce(g):
    """Exhaustive proper-coloring count by backtracking over edges."""
    _check_cubic(g)
    edges = g.edges
    if len(edges) > 20:
        raise ShapeError("brute-force oracle capped at 20 edges")
    used = [0] * g.n_nodes  # bitmask of colors already present at a node

    def rec(k):
        if k == len(edges):
            return 1
        u, v = edges[k]
        total = 0
        for c in range(3):
            bit = 1 << c
            if used[u] & bit or used[v] & bit:
                continue
            used[u] |= bit
            used[v] |= bit
            total += rec(k + 1)
            used[u] &= ~bit
            used[v] &= ~bit
        return total

    return rec(0)
