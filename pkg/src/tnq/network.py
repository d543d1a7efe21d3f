"""Tensor-network multigraph with a deterministic greedy contraction planner.

A :class:`Network` holds named tensors (nodes), bonds pairing two legs of
equal dimension and opposite orientation, and an ordered list of open
legs.  Every leg of every node must appear in exactly one bond or exactly
once among the open legs.  Parallel bonds between the same pair of nodes
and bonds joining two legs of a single node (traces) are both allowed.

The planner repeatedly contracts the bonded node pair whose result has
the fewest entries, breaking ties by the lexicographically smallest pair
of node ids, so evaluation is fully deterministic.
"""

from __future__ import annotations

import numpy as np

from . import tensor as tz
from .errors import ShapeError, SizeCapError
from .tensor import Tensor


class Network:
    """Builder for a tensor network; finalize before contracting."""

    def __init__(self):
        self.nodes = {}
        self.bonds = []
        self.open_legs = []
        self._finalized = False

    def _mutable(self):
        if self._finalized:
            raise ShapeError("network already finalized")

    def add_node(self, node_id, t):
        self._mutable()
        if node_id in self.nodes:
            raise ShapeError(f"duplicate node id {node_id!r}")
        if not isinstance(t, Tensor):
            raise ShapeError("node value must be a Tensor")
        self.nodes[node_id] = t
        return node_id

    def add_bond(self, end_a, end_b):
        """Bond two (node, leg) endpoints."""
        self._mutable()
        self.bonds.append((tuple(end_a), tuple(end_b)))

    def set_open_legs(self, legs):
        self._mutable()
        self.open_legs = [tuple(leg) for leg in legs]

    def finalize(self):
        """Validate invariants and freeze the network."""
        self._mutable()
        seen = {}
        for (na, la), (nb, lb) in self.bonds:
            for n, leg in ((na, la), (nb, lb)):
                if n not in self.nodes:
                    raise ShapeError(f"bond references unknown node {n!r}")
                if not (0 <= leg < self.nodes[n].order):
                    raise ShapeError(f"bond references bad leg {leg} of {n!r}")
                if (n, leg) in seen:
                    raise ShapeError(f"leg ({n!r}, {leg}) used twice")
                seen[(n, leg)] = "bond"
            ta, tb = self.nodes[na], self.nodes[nb]
            if ta.dims[la] != tb.dims[lb]:
                raise ShapeError(
                    f"bonded legs ({na!r},{la})-({nb!r},{lb}) differ in dim"
                )
            if ta.orients[la] == tb.orients[lb]:
                raise ShapeError(
                    f"bonded legs ({na!r},{la})-({nb!r},{lb}) have equal orientation"
                )
        for n, leg in self.open_legs:
            if n not in self.nodes or not (0 <= leg < self.nodes[n].order):
                raise ShapeError(f"open leg ({n!r}, {leg}) does not exist")
            if (n, leg) in seen:
                raise ShapeError(f"leg ({n!r}, {leg}) is bonded and open")
            seen[(n, leg)] = "open"
        for n, t in self.nodes.items():
            for leg in range(t.order):
                if (n, leg) not in seen:
                    raise ShapeError(f"leg ({n!r}, {leg}) is dangling")
        self._finalized = True
        return self

    def conjugate(self):
        """New network with every tensor conjugated and all legs bent."""
        out = Network()
        for n, t in self.nodes.items():
            out.add_node(n, tz.dagger(t))
        out.bonds = list(self.bonds)
        out.open_legs = list(self.open_legs)
        if self._finalized:
            out.finalize()
        return out


def _node_key(node_id):
    return (str(type(node_id).__name__), str(node_id))


class _Plan:
    """Working state of a contraction: current tensors plus a map from
    original (node, leg) to current (node, axis)."""

    def __init__(self, net):
        self.tensors = dict(net.nodes)
        self.where = {
            (n, leg): (n, leg)
            for n, t in net.nodes.items()
            for leg in range(t.order)
        }

    def _trace_self(self, node, pairs):
        t = self.tensors[node]
        axis_pairs = [
            (self.where[a][1], self.where[b][1]) for a, b in pairs
        ]
        result = tz.trace_pairs(t, axis_pairs)
        removed = sorted(i for p in axis_pairs for i in p)
        remap = {}
        for old_axis in range(t.order):
            if old_axis in removed:
                continue
            remap[old_axis] = old_axis - sum(1 for r in removed if r < old_axis)
        for orig, (n, axis) in list(self.where.items()):
            if n != node:
                continue
            if axis in removed:
                del self.where[orig]
            else:
                self.where[orig] = (node, remap[axis])
        self.tensors[node] = result

    def _merge(self, na, nb, bond_list):
        ta, tb = self.tensors[na], self.tensors[nb]
        legs_a, legs_b = [], []
        for end_a, end_b in bond_list:
            wa, wb = self.where[end_a], self.where[end_b]
            if wa[0] == nb:
                wa, wb = wb, wa
            legs_a.append(wa[1])
            legs_b.append(wb[1])
        result = tz.contract(ta, legs_a, tb, legs_b)
        keep = min(na, nb, key=_node_key)
        drop = nb if keep == na else na
        rest_a = [i for i in range(ta.order) if i not in legs_a]
        rest_b = [i for i in range(tb.order) if i not in legs_b]
        new_axis = {}
        for pos, axis in enumerate(rest_a):
            new_axis[(na, axis)] = pos
        for pos, axis in enumerate(rest_b):
            new_axis[(nb, axis)] = len(rest_a) + pos
        for orig, (n, axis) in list(self.where.items()):
            if n in (na, nb):
                if (n, axis) in new_axis:
                    self.where[orig] = (keep, new_axis[(n, axis)])
                else:
                    del self.where[orig]
        self.tensors[keep] = result
        del self.tensors[drop]
        return keep


def contract_network(net):
    """Contract a finalized network to a single tensor.

    The result's legs follow the declared open-leg order verbatim.
    """
    if not net._finalized:
        raise ShapeError("finalize() the network before contracting")
    plan = _Plan(net)

    # group bonds by the unordered node pair they currently join
    def bond_groups():
        groups = {}
        for bond in net.bonds:
            (a, b) = bond
            if a not in plan.where:
                continue  # already consumed
            na = plan.where[a][0]
            nb = plan.where[b][0]
            key = tuple(sorted((na, nb), key=_node_key))
            groups.setdefault(key, []).append(bond)
        return groups

    # self-bonds first: they only shrink tensors
    groups = bond_groups()
    for (na, nb), blist in list(groups.items()):
        if na == nb:
            plan._trace_self(na, blist)
    groups = {k: v for k, v in bond_groups().items() if k[0] != k[1]}

    while groups:
        best = None
        for (na, nb), blist in groups.items():
            ta, tb = plan.tensors[na], plan.tensors[nb]
            shared = 1
            for end_a, end_b in blist:
                shared *= plan.tensors[plan.where[end_a][0]].dims[
                    plan.where[end_a][1]
                ]
            cost = (ta.data.size // shared) * (tb.data.size // shared)
            key = (cost, _node_key(na), _node_key(nb))
            if best is None or key < best[0]:
                best = (key, (na, nb), blist)
        (cost, _, _), (na, nb), blist = best
        if cost > tz.SIZE_CAP:
            ta, tb = plan.tensors[na], plan.tensors[nb]
            raise SizeCapError(
                f"planned intermediate with {cost} entries exceeds cap "
                f"(joining {na!r} {ta.dims} with {nb!r} {tb.dims})",
                shape=ta.dims + tb.dims,
            )
        merged = plan._merge(na, nb, blist)
        # contracting two nodes can create new self-bonds on the merged node
        groups = bond_groups()
        for (xa, xb), xblist in list(groups.items()):
            if xa == xb:
                plan._trace_self(xa, xblist)
        groups = {k: v for k, v in bond_groups().items() if k[0] != k[1]}

    # tensor-product disconnected remainders in ascending id order
    order = sorted(plan.tensors, key=_node_key)
    result = plan.tensors[order[0]]
    offsets = {order[0]: 0}
    for nid in order[1:]:
        offsets[nid] = result.order
        result = tz.tensor_product(result, plan.tensors[nid])
    final_axis = {}
    for orig, (n, axis) in plan.where.items():
        final_axis[orig] = offsets[n] + axis

    perm = [final_axis[leg] for leg in net.open_legs]
    if sorted(perm) != list(range(result.order)):
        raise ShapeError("open legs do not cover the contraction result")
    return tz.permute_legs(result, perm)


def inner_product(a, b):
    """``<a|b>`` for networks with identical open-leg shapes (a conjugated)."""
    ta = contract_network(a)
    tb = contract_network(b)
    if ta.dims != tb.dims:
        raise ShapeError("open-leg shape mismatch in inner_product")
    return complex(np.vdot(ta.data, tb.data))


def norm_squared(net):
    """Squared two-norm of the state a network represents (real, >= 0)."""
    t = contract_network(net)
    return float(np.vdot(t.data, t.data).real)


def single_node_network(t):
    """Convenience: wrap one tensor with all legs open in declared order."""
    net = Network()
    net.add_node(0, t)
    net.set_open_legs([(0, i) for i in range(t.order)])
    return net.finalize()
