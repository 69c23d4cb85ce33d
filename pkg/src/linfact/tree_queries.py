"""Level-ancestor queries on static rooted trees.

The default index (ladders + jump pointers + bitmask micro trees) lives in the kernel
module; :class:`BinaryLiftingIndex` is the independent cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._impl import kernels
from .errors import DepthOutOfRange, NotAncestor


@dataclass(eq=False)
class RootedTree:
    """A rooted tree renumbered into preorder.

    ``original[v]`` is the caller's id for preorder node v and ``index[x]`` the reverse.
    """

    parent: np.ndarray
    original: np.ndarray
    index: np.ndarray

    @classmethod
    def from_parents(cls, parents) -> "RootedTree":
        par = np.asarray(parents, dtype=np.int64)
        n = len(par)
        roots = np.flatnonzero(par < 0)
        if len(roots) != 1:
            raise ValueError("tree must have exactly one root (parent < 0)")
        children = [[] for _ in range(n)]
        for v in range(n):
            if par[v] >= 0:
                children[par[v]].append(v)
        order = []
        stack = [int(roots[0])]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(reversed(children[v]))
        if len(order) != n:
            raise ValueError("parent array is not a tree")
        original = np.asarray(order, dtype=np.int32)
        index = np.empty(n, dtype=np.int32)
        index[original] = np.arange(n, dtype=np.int32)
        new_parent = np.full(n, -1, dtype=np.int32)
        new_parent[1:] = index[par[original[1:]]]
        return cls(new_parent, original, index)

    @property
    def node_count(self) -> int:
        return len(self.parent)


def _parent_and_depth(tree):
    parent = np.asarray(tree.parent, dtype=np.int32)
    depth = getattr(tree, "edge_depth", None)
    return parent, depth


def preprocess_level_ancestor(tree, impl=None):
    """O(n)-space, O(1)-query level-ancestor index for a preorder tree."""
    parent, depth = _parent_and_depth(tree)
    return kernels(impl).LevelAncestor(parent, depth)


def level_ancestor(idx, v: int, d: int) -> int:
    return idx.level_ancestor(v, d)


def child_toward(idx, u: int, z: int) -> int:
    return idx.child_toward(u, z)


def naive_level_ancestor(parent, v: int, d: int) -> int:
    path = []
    while v >= 0:
        path.append(int(v))
        v = parent[v]
    if not 0 <= d < len(path):
        raise DepthOutOfRange(f"depth {d} outside 0..{len(path) - 1}")
    return path[len(path) - 1 - d]


class BinaryLiftingIndex:
    """Doubling table: O(n log n) space, O(log n) query. Accepts any parent array."""

    def __init__(self, parent):
        parent = np.asarray(parent, dtype=np.int64)
        n = len(parent)
        self.n = n
        depth = np.full(n, -1, dtype=np.int64)
        roots = np.flatnonzero(parent < 0)
        depth[roots] = 0
        # resolve depths without assuming any numbering
        for v in range(n):
            chain = []
            u = v
            while depth[u] < 0:
                chain.append(u)
                u = parent[u]
            for w in reversed(chain):
                depth[w] = depth[parent[w]] + 1
        self.depth = depth
        levels = max(1, int(depth.max()).bit_length()) if n else 1
        up = np.empty((levels, n), dtype=np.int64)
        up[0] = np.where(parent < 0, np.arange(n), parent)
        for i in range(1, levels):
            up[i] = up[i - 1][up[i - 1]]
        self.up = up

    def level_ancestor(self, v: int, d: int) -> int:
        k = int(self.depth[v]) - d
        if d < 0 or k < 0:
            raise DepthOutOfRange(f"depth {d} outside 0..{int(self.depth[v])}")
        i = 0
        while k:
            if k & 1:
                v = self.up[i][v]
            k >>= 1
            i += 1
        return int(v)

    def child_toward(self, u: int, z: int) -> int:
        if self.depth[u] >= self.depth[z]:
            raise NotAncestor(f"{u} is not a proper ancestor of {z}")
        x = self.level_ancestor(z, int(self.depth[u]) + 1)
        if self.up[0][x] != u:
            raise NotAncestor(f"{u} is not a proper ancestor of {z}")
        return x

    def memory_words(self) -> int:
        return int(self.up.size)
