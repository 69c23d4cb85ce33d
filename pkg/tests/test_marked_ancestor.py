import random

import pytest

from helpers import legal_ops, random_tree
from linfact.errors import AlreadyMarked, AncestorClosednessViolation
from linfact.marked_ancestor import BACKENDS, NaiveMarkedIndex, mark, new_marked_index, nma
from linfact.tree_queries import RootedTree


def _run(tree, ops, impl, backend, root_payload=0):
    p = tree.parent.tolist()
    ref = NaiveMarkedIndex(p, root_payload)
    idx = new_marked_index(tree, backend, root_payload=root_payload, impl=impl)
    for op, v, pay in ops:
        if op == "mark":
            ref.mark(v, pay)
            mark(idx, v, pay)
        else:
            assert tuple(nma(idx, v)) == ref.nma(v)
    for v in range(len(p)):
        assert idx.is_marked(v) == ref.is_marked(v)
    return idx


@pytest.mark.parametrize("shape", ["recursive", "path", "caterpillar", "broom"])
def test_random_interleavings(impl, backend, shape):
    rnd = random.Random(shape + backend)
    for n in (1, 2, 31, 64, 65, 200, 1500):
        tree = RootedTree.from_parents(random_tree(n, rnd, shape))
        for share in (0.1, 0.5, 0.9):
            _run(tree, legal_ops(tree.parent.tolist(), 3 * n, rnd, share), impl, backend)


def test_root_is_marked_with_payload(impl, backend):
    tree = RootedTree.from_parents([-1, 0, 1])
    idx = new_marked_index(tree, backend, root_payload=7, impl=impl)
    assert idx.is_marked(0)
    assert tuple(idx.nma(2)) == (0, 7)
    assert idx.payload_of(0) == 7


def test_marking_everything(impl, backend):
    rnd = random.Random(3)
    tree = RootedTree.from_parents(random_tree(3000, rnd))
    idx = new_marked_index(tree, backend, impl=impl)
    for v in range(1, 3000):  # preorder: parents come first
        idx.mark(v, v)
    for v in range(3000):
        assert tuple(idx.nma(v)) == (v, v)


def test_closedness_is_enforced(impl, backend):
    tree = RootedTree.from_parents([-1, 0, 1, 2])
    idx = new_marked_index(tree, backend, impl=impl)
    with pytest.raises(AncestorClosednessViolation):
        idx.mark(2, 1)
    idx.mark(1, 1)
    with pytest.raises(AlreadyMarked):
        idx.mark(1, 2)
    with pytest.raises(AlreadyMarked):
        idx.mark(0, 2)
    idx.mark(2, 3)
    assert tuple(idx.nma(3)) == (2, 3)


def test_unknown_backend():
    tree = RootedTree.from_parents([-1, 0])
    with pytest.raises(ValueError):
        new_marked_index(tree, "fancy")


def test_deep_path_queries():
    tree = RootedTree.from_parents(list(range(-1, 20000)))
    for b in BACKENDS:
        idx = new_marked_index(tree, b)
        assert tuple(idx.nma(19999)) == (0, 0)
        idx.mark(1, 5)
        assert tuple(idx.nma(19999)) == (1, 5)
