"""Brute-force oracles and random generators shared by the tests."""
import random

import numpy as np


def naive_sa(s):
    s = list(s)
    return sorted(range(len(s)), key=lambda i: s[i:])


def naive_lcp(s, sa):
    s = list(s)
    out = []
    for a, b in zip(sa, sa[1:]):
        k = 0
        while a + k < len(s) and b + k < len(s) and s[a + k] == s[b + k]:
            k += 1
        out.append(k)
    return out


def random_tree(n, rnd: random.Random, shape="recursive"):
    """Parent array (root 0, parent[0] = -1) of an n-node tree with parents before children."""
    par = [-1]
    for i in range(1, n):
        if shape == "path":
            par.append(i - 1)
        elif shape == "caterpillar":
            par.append(i - 1 if rnd.random() < 0.7 else rnd.randrange(i))
        elif shape == "broom":
            par.append(i - 1 if i < n // 2 else rnd.randrange(n // 2))
        else:
            par.append(rnd.randrange(i))
    return par


def legal_ops(parent, count, rnd: random.Random, mark_share=0.3):
    """Random interleaving of marks (always extending the marked top part) and queries."""
    n = len(parent)
    kids = [[] for _ in range(n)]
    for v in range(1, n):
        kids[parent[v]].append(v)
    frontier = list(kids[0])
    ops = []
    payload = 1
    for _ in range(count):
        if frontier and rnd.random() < mark_share:
            j = rnd.randrange(len(frontier))
            v = frontier[j]
            frontier[j] = frontier[-1]
            frontier.pop()
            frontier.extend(kids[v])
            ops.append(("mark", v, payload))
            payload += 1
        else:
            ops.append(("nma", rnd.randrange(n), 0))
    return ops


def suffix_set(words):
    """All distinct suffixes of w + '$' as strings, the empty one included."""
    out = {""}
    for w in words:
        s = w.decode("latin-1") + "$"
        for i in range(len(s)):
            out.add(s[i:])
    return out


def prec_key(s):
    # length first, then the reversed string with '$' smallest
    return (len(s), [(-1 if ch == "$" else ord(ch)) for ch in reversed(s)])


def random_words(rnd: random.Random, k_max=8, len_max=24, alphabet=b"ab"):
    k = rnd.randint(1, k_max)
    return [bytes(rnd.choice(alphabet) for _ in range(rnd.randint(0, len_max))) for _ in range(k)]


def random_bytes(nprng, n, sigma):
    return nprng.integers(0, sigma, n, dtype=np.uint8).tobytes()
