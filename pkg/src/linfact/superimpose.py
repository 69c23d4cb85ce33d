"""Trie superimposition on a suffix tree, shared by LZ78 and position-heap construction.

Each insertion asks for the deepest already-present locus on the root path of a query
leaf and adds the locus one symbol below it. Loci at original nodes are NMA marks;
loci inside an edge are counted by :class:`EdgeMarkLedger`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._impl import debug_enabled, kernels
from .errors import InvariantViolation
from .marked_ancestor import new_marked_index
from .tree_queries import preprocess_level_ancestor


class TrieSuperimposition:
    def __init__(self, tree, backend="reference", root_payload=0, la=None, impl=None, debug=None):
        self.kernels = kernels(impl)
        self.tree = tree
        self.debug = debug_enabled(debug)
        self.la = la if la is not None else preprocess_level_ancestor(tree, impl=impl)
        self.nma = new_marked_index(
            tree, backend, root_payload=root_payload, la=self.la, impl=impl
        )
        self.core = self.kernels.Superimposer(
            tree.text, tree.str_depth, self.nma, self.la, self.debug
        )

    def insert(self, leaf: int, start: int, new_id: int) -> tuple[int, int, int]:
        """Returns ``(parent id, parent string depth, extension symbol)``."""
        return self.core.insert(leaf, start, new_id)

    @property
    def checks(self) -> int:
        return self.core.checks

    def ledger(self) -> "EdgeMarkLedger":
        counts, last = self.core.ledger()
        return EdgeMarkLedger(self.tree, counts, last)


@dataclass(eq=False)
class EdgeMarkLedger:
    """Per-edge count of marked loci strictly inside the edge into node ``e``.

    Marks on an edge sit at string depths ``|u|+1 .. |u|+count`` below its upper end u;
    only the deepest payload is stored, the others follow from trie parent links.
    """

    tree: object
    counts: np.ndarray
    last_payload: np.ndarray

    def mark_count(self, e: int) -> int:
        return int(self.counts[e])

    def factor_ids(self, e: int, id_parent) -> list[int]:
        """Payloads on edge ``e`` from shallowest to deepest."""
        k = int(self.counts[e])
        ids = []
        x = int(self.last_payload[e])
        for _ in range(k):
            ids.append(x)
            x = int(id_parent[x])
        return ids[::-1]

    def marked_edges(self) -> np.ndarray:
        return np.flatnonzero(self.counts)

    def check(self, nma, id_parent, id_depth) -> int:
        """Verify contiguity and mark discipline; returns the number of edges checked.

        ``id_parent[i]``/``id_depth[i]`` give the trie parent and string length of payload i.
        """
        t = self.tree
        checked = 0
        for e in self.marked_edges():
            e = int(e)
            u = int(t.parent[e])
            k = int(self.counts[e])
            du = int(t.str_depth[u])
            if not nma.is_marked(u):
                raise InvariantViolation(f"edge into {e} has marks but its upper node {u} is unmarked")
            room = int(t.str_depth[e]) - du - 1
            if k > room or (nma.is_marked(e) and k != room):
                raise InvariantViolation(f"edge into {e} holds {k} of {room} interior marks")
            ids = self.factor_ids(e, id_parent)
            for j, x in enumerate(ids):
                if int(id_depth[x]) != du + j + 1:
                    raise InvariantViolation(f"marks on edge into {e} are not contiguous")
            if int(id_parent[ids[0]]) != nma.payload_of(u):
                raise InvariantViolation(f"shallowest mark on edge into {e} does not hang off {u}")
            checked += 1
        return checked


def check_marked_nodes(tree, nma, id_depth) -> int:
    """Every explicitly marked node carries a payload whose string length is its depth."""
    checked = 0
    for v in range(1, tree.node_count):
        if nma.is_marked(v):
            if int(id_depth[nma.payload_of(v)]) != int(tree.str_depth[v]):
                raise InvariantViolation(f"marked node {v} carries a payload of the wrong length")
            checked += 1
    return checked
