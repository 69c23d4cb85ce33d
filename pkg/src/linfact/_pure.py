"""Pure-Python kernels. Same API and algorithms as the compiled ``_core`` module.

All trees handed to these kernels are numbered in preorder: node 0 is the
root, ``parent[v] < v`` and every subtree occupies a contiguous id range.
"""
import numpy as np

from .errors import (
    AlreadyMarked,
    AncestorClosednessViolation,
    DepthOutOfRange,
    InvariantViolation,
    NotAncestor,
)

IMPL = "pure"

MICRO = 64  # word size: micro trees and clusters hold at most MICRO - 1 nodes


def _i32(a):
    return np.asarray(a, dtype=np.int32)


def _select(x, k):
    """Bit position of the k-th (0-based) set bit of x."""
    pos = 0
    width = 32
    while width:
        low = x & ((1 << width) - 1)
        c = low.bit_count()
        if k >= c:
            k -= c
            x >>= width
            pos += width
        else:
            x = low
        width >>= 1
    return pos


# --------------------------------------------------------------------------
# suffix sorting


def _sa_naive(s):
    n = len(s)
    return sorted(range(n), key=lambda i: s[i:])


def _sais(s, upper):
    n = len(s)
    if n == 0:
        return []
    if n == 1:
        return [0]
    if n == 2:
        return [0, 1] if s[0] < s[1] else [1, 0]
    if n < 10:
        return _sa_naive(s)

    sa = [-1] * n
    ls = [False] * n
    for i in range(n - 2, -1, -1):
        ls[i] = ls[i + 1] if s[i] == s[i + 1] else s[i] < s[i + 1]
    sum_l = [0] * (upper + 2)
    sum_s = [0] * (upper + 2)
    for i in range(n):
        if not ls[i]:
            sum_s[s[i]] += 1
        else:
            sum_l[s[i] + 1] += 1
    for i in range(upper + 1):
        sum_s[i] += sum_l[i]
        if i < upper:
            sum_l[i + 1] += sum_s[i]

    def induce(lms):
        for i in range(n):
            sa[i] = -1
        buf = sum_s[:]
        for d in lms:
            if d == n:
                continue
            sa[buf[s[d]]] = d
            buf[s[d]] += 1
        buf = sum_l[:]
        sa[buf[s[n - 1]]] = n - 1
        buf[s[n - 1]] += 1
        for i in range(n):
            v = sa[i]
            if v >= 1 and not ls[v - 1]:
                c = s[v - 1]
                sa[buf[c]] = v - 1
                buf[c] += 1
        buf = sum_l[:]
        for i in range(n - 1, -1, -1):
            v = sa[i]
            if v >= 1 and ls[v - 1]:
                c = s[v - 1] + 1
                buf[c] -= 1
                sa[buf[c]] = v - 1

    lms_map = [-1] * (n + 1)
    lms = []
    for i in range(1, n):
        if not ls[i - 1] and ls[i]:
            lms_map[i] = len(lms)
            lms.append(i)
    m = len(lms)
    induce(lms)

    if m:
        sorted_lms = [v for v in sa if lms_map[v] != -1]
        rec_s = [0] * m
        rec_upper = 0
        rec_s[lms_map[sorted_lms[0]]] = 0
        for i in range(1, m):
            left, right = sorted_lms[i - 1], sorted_lms[i]
            end_l = lms[lms_map[left] + 1] if lms_map[left] + 1 < m else n
            end_r = lms[lms_map[right] + 1] if lms_map[right] + 1 < m else n
            same = True
            if end_l - left != end_r - right:
                same = False
            else:
                while left < end_l:
                    if s[left] != s[right]:
                        break
                    left += 1
                    right += 1
                if left == n or s[left] != s[right]:
                    same = False
            if not same:
                rec_upper += 1
            rec_s[lms_map[sorted_lms[i]]] = rec_upper
        rec_sa = _sais(rec_s, rec_upper)
        sorted_lms = [lms[r] for r in rec_sa]
        induce(sorted_lms)
    return sa


def sais(s, upper=None):
    """Suffix array of the integer sequence ``s`` (values in ``0..upper``) by induced sorting.

    The end of the sequence acts as a virtual terminator smaller than every symbol,
    so repeated minimal symbols are allowed.
    """
    s = [int(x) for x in s]
    if upper is None:
        upper = max(s) if s else 0
    return _i32(_sais(s, upper))


def kasai(s, sa):
    """``lcp[i]`` = common-prefix length of the suffixes at ``sa[i]`` and ``sa[i+1]``."""
    s = [int(x) for x in s]
    sa = [int(x) for x in sa]
    n = len(s)
    if n <= 1:
        return np.zeros(0, dtype=np.int32)
    rnk = [0] * n
    for i, p in enumerate(sa):
        rnk[p] = i
    lcp = [0] * (n - 1)
    h = 0
    for i in range(n):
        if h > 0:
            h -= 1
        if rnk[i] == 0:
            continue
        j = sa[rnk[i] - 1]
        while j + h < n and i + h < n and s[j + h] == s[i + h]:
            h += 1
        lcp[rnk[i] - 1] = h
    return _i32(lcp)


def build_tree(sa, lcp, eff=None):
    """Compacted trie of the suffixes ``sa`` truncated to lengths ``eff[pos]``
    (whole suffixes when ``eff`` is None).

    Suffixes whose truncated strings coincide share one leaf. Returns preorder-numbered
    ``(parent, str_depth, edge_depth, rep, is_leaf, leaf_of_pos)``; ``rep[v]`` is the
    start of a suffix in v's subtree and children appear in lexicographic order.
    """
    sa = [int(x) for x in sa]
    lcp = [int(x) for x in lcp]
    n = len(sa)
    eff = list(range(n, 0, -1)) if eff is None else [int(x) for x in eff]
    cap = 2 * n + 1
    parent = [-1] * cap
    sd = [0] * cap
    lb = [0] * cap
    rep = [0] * cap
    leafflag = [0] * cap
    leaf_of = [0] * n
    stack = [0]
    cnt = 1
    k = 0
    prev_e = -1
    for i in range(n):
        pos = sa[i]
        e = eff[pos]
        if i == 0:
            h = 0
        else:
            h = min(lcp[i - 1], e, prev_e)
            if h == e and h == prev_e:
                leaf_of[pos] = stack[-1]
                continue
        while sd[stack[-1]] > h:
            last = stack.pop()
            if sd[stack[-1]] >= h:
                parent[last] = stack[-1]
            else:
                x = cnt
                cnt += 1
                sd[x] = h
                lb[x] = lb[last]
                rep[x] = rep[last]
                parent[last] = x
                stack.append(x)
        leaf = cnt
        cnt += 1
        sd[leaf] = e
        lb[leaf] = k
        rep[leaf] = pos
        leafflag[leaf] = 1
        leaf_of[pos] = leaf
        stack.append(leaf)
        k += 1
        prev_e = e
    while len(stack) > 1:
        last = stack.pop()
        parent[last] = stack[-1]
    if n:
        rep[0] = sa[0]

    # preorder = order by (leftmost leaf, depth); within a leftmost-leaf group later
    # creations are shallower
    off = [0] * (k + 1)
    for v in range(1, cnt):
        off[lb[v] + 1] += 1
    off[0] = 1
    for i in range(1, k + 1):
        off[i] += off[i - 1]
    new_id = [0] * cnt
    for v in range(cnt - 1, 0, -1):
        b = lb[v]
        new_id[v] = off[b]
        off[b] += 1
    nparent = [-1] * cnt
    nsd = [0] * cnt
    nrep = [0] * cnt
    nleaf = [0] * cnt
    for v in range(cnt):
        w = new_id[v]
        nparent[w] = new_id[parent[v]] if v else -1
        nsd[w] = sd[v]
        nrep[w] = rep[v]
        nleaf[w] = leafflag[v]
    ned = [0] * cnt
    for w in range(1, cnt):
        ned[w] = ned[nparent[w]] + 1
    leaf_of = [new_id[x] for x in leaf_of]
    return (
        _i32(nparent),
        _i32(nsd),
        _i32(ned),
        _i32(nrep),
        np.asarray(nleaf, dtype=np.uint8),
        _i32(leaf_of),
    )


# --------------------------------------------------------------------------
# level ancestor


def _edge_depths(parent):
    n = len(parent)
    depth = [0] * n
    for v in range(1, n):
        depth[v] = depth[parent[v]] + 1
    return depth


class LevelAncestor:
    """Ladder decomposition + jump pointers at jump nodes + bitmask micro trees.

    Macro nodes (subtree size >= MICRO) climb from a descendant jump node with one
    power-of-two jump pointer and finish on a ladder. Micro nodes resolve targets
    inside their micro tree by selecting a bit of their ancestor mask.
    """

    def __init__(self, parent, depth=None):
        parent = [int(x) for x in parent]
        n = len(parent)
        self.n = n
        self.parent = parent
        self.depth = _edge_depths(parent) if depth is None else [int(x) for x in depth]
        depth = self.depth

        size = [1] * n
        height = [0] * n
        longchild = [-1] * n
        for v in range(n - 1, 0, -1):
            p = parent[v]
            size[p] += size[v]
            if height[v] + 1 > height[p]:
                height[p] = height[v] + 1
                longchild[p] = v

        # jump nodes: macro nodes without macro children
        aux = [0] * n
        jnode = []
        jdesc = [-1] * n
        for v in range(n - 1, -1, -1):
            if size[v] >= MICRO:
                if jdesc[v] == -1:
                    jdesc[v] = len(jnode)
                    jnode.append(v)
                if v:
                    p = parent[v]
                    if jdesc[p] == -1:
                        jdesc[p] = jdesc[v]
        maxdepth = max(depth) if n else 0
        levels = max(1, maxdepth.bit_length())
        jp = [[0] * levels for _ in jnode]

        ladder = []
        lad_pos = [0] * n
        reach = [0] * n
        amask = [0] * n
        path = [0] * (maxdepth + 1)
        for v in range(n):
            d = depth[v]
            path[d] = v
            if v == 0 or longchild[parent[v]] != v:
                length = height[v] + 1
                ext = min(length, d)
                start = len(ladder)
                ladder.extend(path[d - ext:d])
                u = v
                j = 0
                while u != -1:
                    ladder.append(u)
                    lad_pos[u] = start + ext + j
                    reach[u] = ext + j
                    u = longchild[u]
                    j += 1
            if size[v] < MICRO:
                if v and size[parent[v]] < MICRO:
                    r = aux[parent[v]]
                    amask[v] = amask[parent[v]] | (1 << (v - r))
                else:
                    r = v
                    amask[v] = 1
                aux[v] = r
            else:
                row = jdesc[v]
                aux[v] = row
                if jnode[row] == v:
                    jrow = jp[row]
                    for i in range(levels):
                        step = 1 << i
                        jrow[i] = path[d - step] if step <= d else 0
        self.ladder = ladder
        self.lad_pos = lad_pos
        self.reach = reach
        self.aux = aux
        self.amask = amask
        self.jnode = jnode
        self.jp = jp
        self.levels = levels

    def _la(self, v, d):
        depth = self.depth
        k = depth[v] - d
        if k == 0:
            return v
        if k <= self.reach[v]:
            return self.ladder[self.lad_pos[v] - k]
        mask = self.amask[v]
        if mask:
            r = self.aux[v]
            if d >= depth[r]:
                return r + _select(mask, d - depth[r])
            v = self.parent[r]
            k = depth[v] - d
            if k == 0:
                return v
            if k <= self.reach[v]:
                return self.ladder[self.lad_pos[v] - k]
        row = self.aux[v]
        j = self.jnode[row]
        k = depth[j] - d
        i = k.bit_length() - 1
        u = self.jp[row][i]
        return self.ladder[self.lad_pos[u] - (k - (1 << i))]

    def level_ancestor(self, v, d):
        v = int(v)
        d = int(d)
        if not 0 <= v < self.n:
            raise IndexError(f"node {v} out of range")
        if d < 0 or d > self.depth[v]:
            raise DepthOutOfRange(f"depth {d} outside 0..{self.depth[v]} for node {v}")
        return self._la(v, d)

    def child_toward(self, u, z):
        u = int(u)
        z = int(z)
        du = self.depth[u]
        if du >= self.depth[z]:
            raise NotAncestor(f"{u} is not a proper ancestor of {z}")
        x = self._la(z, du + 1)
        if self.parent[x] != u:
            raise NotAncestor(f"{u} is not a proper ancestor of {z}")
        return x

    def edge_depth(self, v):
        return self.depth[int(v)]

    def memory_words(self):
        return (
            len(self.ladder)
            + len(self.lad_pos)
            + len(self.reach)
            + len(self.aux)
            + 2 * len(self.amask)
            + len(self.jnode)
            + len(self.jnode) * self.levels
        )


# --------------------------------------------------------------------------
# nearest marked ancestor


class _NMABase:
    def nma(self, v):
        node = self._find(int(v))
        return node, self.payload[node]

    def mark(self, v, payload=0):
        self._mark(int(v), int(payload))

    def payload_of(self, v):
        return self.payload[int(v)]


def _subtree_end(parent):
    n = len(parent)
    size = [1] * n
    for v in range(n - 1, 0, -1):
        size[parent[v]] += size[v]
    return [v + size[v] for v in range(n)]


class ReferenceNMA(_NMABase):
    """Marked-ancestor counts over the preorder (Euler) ranges with a Fenwick tree.

    Marking v adds one to every node of v's subtree; the count k at a node is the
    number of its marked ancestors-or-self, and the answer is the level ancestor at
    edge depth k - 1 (the marked set is ancestor-closed).
    """

    backend = "reference"

    def __init__(self, parent, la=None, root_payload=0):
        parent = [int(x) for x in parent]
        n = len(parent)
        self.n = n
        self.parent = parent
        self.la = la if la is not None else LevelAncestor(parent)
        self.end = _subtree_end(parent)
        self.fen = [0] * (n + 2)
        self.marked = bytearray(n)
        self.marked[0] = 1
        self.payload = [0] * n
        self.payload[0] = root_payload

    def _add(self, i, delta):
        i += 1
        fen = self.fen
        size = self.n + 1
        while i <= size:
            fen[i] += delta
            i += i & -i

    def _count(self, v):
        i = v + 1
        s = 0
        fen = self.fen
        while i > 0:
            s += fen[i]
            i -= i & -i
        return s + 1

    def _find(self, v):
        return self.la._la(v, self._count(v) - 1)

    def is_marked(self, v):
        return bool(self.marked[int(v)])

    def _mark(self, v, payload):
        if self.marked[v]:
            raise AlreadyMarked(f"node {v} already marked")
        if not self.marked[self.parent[v]]:
            raise AncestorClosednessViolation(f"parent of node {v} is unmarked")
        self.marked[v] = 1
        self.payload[v] = payload
        self._add(v, 1)
        self._add(self.end[v], -1)

    def memory_words(self):
        return 3 * self.n + 2


def cluster_partition(parent):
    """Split a preorder tree into clusters of at most MICRO - 1 nodes.

    A cluster is a run of consecutive sibling subtrees (trimmed) hanging from one
    attachment node outside the cluster; the root cluster has no attachment. Every
    cluster other than the root cluster holds at least MICRO // 2 nodes.

    Returns ``(cluster_of, local_index, attach)`` with clusters numbered in preorder
    of their first node, so the induced cluster tree is itself preorder-numbered.
    """
    n = len(parent)
    half = MICRO // 2
    open_size = [1] * n
    pend = [-1] * n
    group_of = [-1] * n
    gsize = []
    gattach = []
    dissolved = []
    for v in range(n - 1, -1, -1):
        g = pend[v]
        if g != -1:
            open_size[v] += gsize[g]
            dissolved[g] = True
            pend[v] = -1
        if v == 0:
            break
        p = parent[v]
        g = pend[p]
        if g == -1:
            g = len(gsize)
            gsize.append(0)
            gattach.append(p)
            dissolved.append(False)
            pend[p] = g
        group_of[v] = g
        gsize[g] += open_size[v]
        if gsize[g] >= half:
            pend[p] = -1
    root_group = len(gsize)
    gattach.append(-1)
    raw = [0] * n
    raw[0] = root_group
    renum = [-1] * (root_group + 1)
    cluster_of = [0] * n
    local = [0] * n
    fill = []
    attach = []
    for v in range(n):
        if v:
            g = group_of[v]
            raw[v] = g if g != -1 and not dissolved[g] else raw[parent[v]]
        g = raw[v]
        c = renum[g]
        if c == -1:
            c = renum[g] = len(fill)
            fill.append(0)
            attach.append(gattach[g])
        cluster_of[v] = c
        local[v] = fill[c]
        fill[c] += 1
    return cluster_of, local, attach


class AcceleratedNMA(_NMABase):
    """Micro/macro nearest marked ancestor.

    Inside a cluster (<= 63 nodes) the answer is the highest set bit of
    ``ancestors & marked``. Otherwise the query moves to the cluster tree, where a
    cluster counts as marked once its attachment node is marked; that tree is handled
    by another AcceleratedNMA (``levels`` deep) and finally by ReferenceNMA.
    """

    backend = "accelerated"

    def __init__(self, parent, la=None, root_payload=0, levels=2):
        parent = [int(x) for x in parent]
        n = len(parent)
        self.n = n
        self.parent = parent
        self.la = la
        cl, local, attach = cluster_partition(parent)
        nc = len(attach)
        self.cl = cl
        self.local = local
        self.attach = attach
        base = [0] * (nc + 1)
        for c in cl:
            base[c + 1] += 1
        for c in range(nc):
            base[c + 1] += base[c]
        self.base = base
        cnodes = [0] * n
        anc = [0] * n
        for v in range(n):
            c = cl[v]
            cnodes[base[c] + local[v]] = v
            bit = 1 << local[v]
            if v and cl[parent[v]] == c:
                anc[v] = anc[parent[v]] | bit
            else:
                anc[v] = bit
        self.cnodes = cnodes
        self.anc = anc
        self.marked = [0] * nc
        self.marked[0] = 1  # the tree root is local index 0 of cluster 0
        first_att = [-1] * n
        next_att = [-1] * nc
        for c in range(nc - 1, 0, -1):
            a = attach[c]
            next_att[c] = first_att[a]
            first_att[a] = c
        self.first_att = first_att
        self.next_att = next_att
        mparent = [-1] + [cl[attach[c]] for c in range(1, nc)]
        self.macro_la = LevelAncestor(mparent)
        if levels > 1:
            self.macro = AcceleratedNMA(mparent, la=self.macro_la, levels=levels - 1)
        else:
            self.macro = ReferenceNMA(mparent, la=self.macro_la)
        a = first_att[0]
        while a != -1:
            self.macro._mark(a, 0)
            a = next_att[a]
        self.payload = [0] * n
        self.payload[0] = root_payload

    def _find(self, v):
        c = self.cl[v]
        m = self.anc[v] & self.marked[c]
        if m:
            return self.cnodes[self.base[c] + m.bit_length() - 1]
        c2 = self.macro._find(c)
        if c2 == c:
            return self.attach[c]
        mla = self.macro_la
        c3 = mla._la(c, mla.depth[c2] + 1)
        x = self.attach[c3]
        m = self.anc[x] & self.marked[c2]
        if m:
            return self.cnodes[self.base[c2] + m.bit_length() - 1]
        return self.attach[c2]

    def is_marked(self, v):
        v = int(v)
        return bool((self.marked[self.cl[v]] >> self.local[v]) & 1)

    def _mark(self, v, payload):
        c = self.cl[v]
        bit = 1 << self.local[v]
        if self.marked[c] & bit:
            raise AlreadyMarked(f"node {v} already marked")
        if v:
            p = self.parent[v]
            if not (self.marked[self.cl[p]] >> self.local[p]) & 1:
                raise AncestorClosednessViolation(f"parent of node {v} is unmarked")
        self.marked[c] |= bit
        self.payload[v] = payload
        a = self.first_att[v]
        while a != -1:
            self.macro._mark(a, 0)
            a = self.next_att[a]

    def memory_words(self):
        nc = len(self.attach)
        own = 2 * self.n + self.n // 4 + 2 * self.n + nc * 4 + self.n
        return own + self.macro_la.memory_words() + self.macro.memory_words()


# --------------------------------------------------------------------------
# trie superimposition


class Superimposer:
    """Grows a trie superimposed on a static suffix tree, one node per ``insert``.

    Marked original nodes live in the NMA structure; loci strictly inside an edge are
    kept as a per-edge count of contiguous marks below the edge's upper node plus the
    payload of the deepest one. Earlier payloads on an edge are recovered through the
    trie's parent links.
    """

    def __init__(self, text, str_depth, nma, la, debug=False):
        self.text = [int(x) for x in text]
        self.sd = [int(x) for x in str_depth]
        self.nma = nma
        self.la = la
        n = len(self.sd)
        self.mark_count = [0] * n
        self.last_payload = [0] * n
        self.debug = bool(debug)
        self.checks = 0

    def insert(self, z, start, new_id):
        """Extend the trie by one symbol along the root-to-leaf path of ``z``.

        Returns ``(parent_payload, parent_string_depth, symbol)``.
        """
        nma = self.nma
        la = self.la
        sd = self.sd
        u = nma._find(z)
        if u == z:
            raise InvariantViolation(f"query leaf {z} is already marked")
        du = la.depth[u]
        c = z if la.depth[z] == du + 1 else la._la(z, du + 1)
        cnt = self.mark_count[c]
        if cnt:
            xd = sd[u] + cnt
            xid = self.last_payload[c]
        else:
            xd = sd[u]
            xid = nma.payload[u]
        sym = self.text[start + xd]
        if self.debug:
            self._check(u, c, z, cnt, xd)
        if xd + 1 == sd[c]:
            nma._mark(c, new_id)
        else:
            self.mark_count[c] = cnt + 1
            self.last_payload[c] = new_id
        return xid, xd, sym

    def _check(self, u, c, z, cnt, xd):
        la = self.la
        if la._la(z, la.depth[u]) != u or la.parent[c] != u:
            raise InvariantViolation(f"nearest marked node {u} is not on the path to {z}")
        if not nma_is_marked(self.nma, u):
            raise InvariantViolation(f"ledger base {u} is unmarked")
        if cnt and nma_is_marked(self.nma, c):
            raise InvariantViolation(f"edge into marked node {c} carries ledger marks")
        if not 0 <= cnt < self.sd[c] - self.sd[u] or xd + 1 > self.sd[c]:
            raise InvariantViolation(f"ledger of edge {c} not contiguous")
        self.checks += 1

    def ledger(self):
        return np.asarray(self.mark_count, dtype=np.int32), np.asarray(
            self.last_payload, dtype=np.int32
        )


def nma_is_marked(nma, v):
    return nma.is_marked(v)


def lz78_loop(sp, leaf_of, n):
    """LZ78 factorization driver: returns (parents, symbols, end positions 1-based)."""
    leaf_of = [int(x) for x in leaf_of]
    parents = []
    symbols = []
    ends = []
    p = 0
    i = 1
    while p < n:
        xid, xd, sym = sp.insert(leaf_of[p], p, i)
        parents.append(xid)
        symbols.append(sym)
        p += xd + 1
        ends.append(p)
        i += 1
    return _i32(parents), _i32(symbols), _i32(ends)


def heap_loop(sp, leaves, starts, first_id):
    """Position-heap driver: insert query leaves in order with ids first_id, first_id+1, ..."""
    parents = []
    symbols = []
    for k, (z, st) in enumerate(zip(leaves, starts)):
        xid, _, sym = sp.insert(int(z), int(st), first_id + k)
        parents.append(xid)
        symbols.append(sym)
    return _i32(parents), _i32(symbols)
