"""Semi-dynamic nearest marked ancestor over a static preorder tree.

Marking must be ancestor-closed: a node can be marked only after its parent.
The root is marked on creation. Two interchangeable backends:

``reference``
    marked-ancestor counts over preorder ranges in a Fenwick tree, answered through a
    level-ancestor query; O(log n) per operation.
``accelerated``
    word-sized clusters with ancestor bitmasks, recursing once on the cluster tree
    before falling back to the reference scheme.
"""
from __future__ import annotations

import numpy as np

from ._impl import kernels
from .errors import AlreadyMarked, AncestorClosednessViolation

BACKENDS = ("reference", "accelerated")


def new_marked_index(tree, backend="reference", root_payload=0, la=None, impl=None):
    k = kernels(impl)
    parent = np.asarray(tree.parent, dtype=np.int32)
    if backend == "reference":
        return k.ReferenceNMA(parent, la=la, root_payload=root_payload)
    if backend == "accelerated":
        return k.AcceleratedNMA(parent, la=la, root_payload=root_payload)
    raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")


def mark(idx, v: int, payload: int = 0) -> None:
    idx.mark(v, payload)


def nma(idx, v: int) -> tuple[int, int]:
    return idx.nma(v)


class NaiveMarkedIndex:
    """Walk-up oracle: flags per node, climb parents until a marked one."""

    backend = "naive"

    def __init__(self, parent, root_payload=0):
        self.parent = [int(x) for x in parent]
        self.marked = [False] * len(self.parent)
        self.payload = [0] * len(self.parent)
        self.marked[0] = True
        self.payload[0] = root_payload

    def mark(self, v, payload=0):
        if self.marked[v]:
            raise AlreadyMarked(f"node {v} already marked")
        if not self.marked[self.parent[v]]:
            raise AncestorClosednessViolation(f"parent of node {v} is unmarked")
        self.marked[v] = True
        self.payload[v] = payload

    def nma(self, v):
        while not self.marked[v]:
            v = self.parent[v]
        return v, self.payload[v]

    def is_marked(self, v):
        return self.marked[v]
