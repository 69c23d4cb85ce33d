# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Mirrors ``_pure`` function for function; see that module for the
algorithm notes. Trees are preorder-numbered (root 0, ``parent[v] < v``)."""
import numpy as np

from libc.stdint cimport int32_t, uint8_t, uint64_t

from .errors import (
    AlreadyMarked,
    AncestorClosednessViolation,
    DepthOutOfRange,
    InvariantViolation,
    NotAncestor,
)

cdef extern from *:
    """
    static inline int lf_popcount(unsigned long long x) { return __builtin_popcountll(x); }
    static inline int lf_msb(unsigned long long x) { return 63 - __builtin_clzll(x); }
    static inline void lf_prefetch(const void *p) { __builtin_prefetch(p, 0, 1); }
    static inline void lf_prefetchw(const void *p) { __builtin_prefetch(p, 1, 1); }
    """
    int lf_popcount(unsigned long long x) nogil
    int lf_msb(unsigned long long x) nogil
    void lf_prefetch(const void *p) nogil
    void lf_prefetchw(const void *p) nogil

IMPL = "compiled"
MICRO = 64

cdef enum:
    C_MICRO = 64
    # lookahead for software prefetch in scans with data-dependent addresses
    PF = 32


cdef inline int select64(uint64_t x, int k) noexcept nogil:
    cdef int pos = 0
    cdef int width = 32
    cdef int c
    cdef uint64_t low
    while width:
        low = x & ((<uint64_t>1 << width) - 1)
        c = lf_popcount(low)
        if k >= c:
            k -= c
            x >>= width
            pos += width
        else:
            x = low
        width >>= 1
    return pos


def _i32(a):
    a = np.ascontiguousarray(a, dtype=np.int32)
    # typed memoryviews need a writable buffer
    return a if a.flags.writeable else a.copy()


# --------------------------------------------------------------------------
# suffix sorting


cdef object _sais(int32_t[::1] s, int upper):
    cdef Py_ssize_t n = s.shape[0]
    cdef Py_ssize_t i, m, left, right, end_l, end_r
    cdef int v, c, rec_upper, typ
    cdef bint same
    if n == 0:
        return np.zeros(0, dtype=np.int32)
    if n == 1:
        return np.zeros(1, dtype=np.int32)
    if n == 2:
        return np.array([0, 1] if s[0] < s[1] else [1, 0], dtype=np.int32)
    if n < 10:
        lst = list(np.asarray(s))
        return np.array(sorted(range(n), key=lambda j: lst[j:]), dtype=np.int32)

    sa_arr = np.empty(n, dtype=np.int32)
    cdef int32_t[::1] sa = sa_arr
    # symbol and S-type bit packed together: one random read per induced step
    st_arr = np.empty(n, dtype=np.int32)
    cdef int32_t[::1] st = st_arr
    typ = 0
    st[n - 1] = s[n - 1] << 1
    for i in range(n - 2, -1, -1):
        if s[i] != s[i + 1]:
            typ = s[i] < s[i + 1]
        st[i] = (s[i] << 1) | typ
    sum_l_arr = np.zeros(upper + 2, dtype=np.int32)
    sum_s_arr = np.zeros(upper + 2, dtype=np.int32)
    buf_arr = np.zeros(upper + 2, dtype=np.int32)
    cdef int32_t[::1] sum_l = sum_l_arr
    cdef int32_t[::1] sum_s = sum_s_arr
    cdef int32_t[::1] buf = buf_arr
    for i in range(n):
        if not st[i] & 1:
            sum_s[s[i]] += 1
        else:
            sum_l[s[i] + 1] += 1
    for i in range(upper + 1):
        sum_s[i] += sum_l[i]
        if i < upper:
            sum_l[i + 1] += sum_s[i]

    m = 0
    for i in range(1, n):
        if st[i] & 1 and not st[i - 1] & 1:
            m += 1
    lms_arr = np.empty(m, dtype=np.int32)
    cdef int32_t[::1] lms = lms_arr
    m = 0
    for i in range(1, n):
        if st[i] & 1 and not st[i - 1] & 1:
            lms[m] = i
            m += 1

    _induce(st, sa, sum_s, sum_l, buf, lms)

    cdef int32_t[::1] sorted_lms
    cdef int32_t[::1] rec_s
    cdef int32_t[::1] rec_sa
    cdef int32_t[::1] lms_map
    if m:
        sorted_arr = np.empty(m, dtype=np.int32)
        sorted_lms = sorted_arr
        c = 0
        for i in range(n):
            if i + PF < n and sa[i + PF] > 0:
                lf_prefetch(&st[sa[i + PF] - 1])
            v = sa[i]
            if v > 0 and st[v] & 1 and not st[v - 1] & 1:
                sorted_lms[c] = v
                c += 1
        # rank of each LMS position among LMS positions, stored at half index
        lms_map_arr = np.empty(n // 2 + 1, dtype=np.int32)
        lms_map = lms_map_arr
        for i in range(m):
            lms_map[lms[i] >> 1] = i
        for i in range(min(m, PF)):
            lf_prefetch(&lms_map[sorted_lms[i] >> 1])
        rec_arr = np.zeros(m, dtype=np.int32)
        rec_s = rec_arr
        rec_upper = 0
        rec_s[lms_map[sorted_lms[0] >> 1]] = 0
        for i in range(1, m):
            if i + PF < m:
                lf_prefetch(&lms_map[sorted_lms[i + PF] >> 1])
                lf_prefetch(&s[sorted_lms[i + PF]])
            left = sorted_lms[i - 1]
            right = sorted_lms[i]
            end_l = lms[lms_map[left >> 1] + 1] if lms_map[left >> 1] + 1 < m else n
            end_r = lms[lms_map[right >> 1] + 1] if lms_map[right >> 1] + 1 < m else n
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
            rec_s[lms_map[sorted_lms[i] >> 1]] = rec_upper
        del lms_map_arr
        rec_sa = _sais(rec_s, rec_upper)
        for i in range(m):
            if i + PF < m:
                lf_prefetch(&lms[rec_sa[i + PF]])
            sorted_lms[i] = lms[rec_sa[i]]
        _induce(st, sa, sum_s, sum_l, buf, sorted_lms)
    return sa_arr


cdef void _induce(int32_t[::1] st, int32_t[::1] sa, int32_t[::1] sum_s,
                  int32_t[::1] sum_l, int32_t[::1] buf, int32_t[::1] lms) noexcept:
    cdef Py_ssize_t n = st.shape[0]
    cdef Py_ssize_t i
    cdef Py_ssize_t nb = sum_s.shape[0]
    cdef int v, d, c, x
    for i in range(n):
        sa[i] = -1
    for i in range(nb):
        buf[i] = sum_s[i]
    for i in range(lms.shape[0]):
        d = lms[i]
        if d == n:
            continue
        c = st[d] >> 1
        sa[buf[c]] = d
        buf[c] += 1
    for i in range(nb):
        buf[i] = sum_l[i]
    c = st[n - 1] >> 1
    sa[buf[c]] = n - 1
    buf[c] += 1
    for i in range(n):
        if i + PF < n and sa[i + PF] > 0:
            lf_prefetch(&st[sa[i + PF] - 1])
        v = sa[i]
        if v >= 1:
            x = st[v - 1]
            if not x & 1:
                c = x >> 1
                sa[buf[c]] = v - 1
                buf[c] += 1
    for i in range(nb):
        buf[i] = sum_l[i]
    for i in range(n - 1, -1, -1):
        if i >= PF and sa[i - PF] > 0:
            lf_prefetch(&st[sa[i - PF] - 1])
        v = sa[i]
        if v >= 1:
            x = st[v - 1]
            if x & 1:
                c = (x >> 1) + 1
                buf[c] -= 1
                sa[buf[c]] = v - 1


def sais(s, upper=None):
    arr = _i32(s)
    if upper is None:
        upper = int(arr.max()) if len(arr) else 0
    return _sais(arr, int(upper))


def kasai(s, sa):
    """LCP of adjacent suffixes, via the permuted LCP array (sequential text scan)."""
    cdef int32_t[::1] t = _i32(s)
    cdef int32_t[::1] sv = _i32(sa)
    cdef Py_ssize_t n = t.shape[0]
    cdef Py_ssize_t i, j, h
    if n <= 1:
        return np.zeros(0, dtype=np.int32)
    phi_arr = np.empty(n, dtype=np.int32)
    lcp_arr = np.empty(n - 1, dtype=np.int32)
    cdef int32_t[::1] phi = phi_arr
    cdef int32_t[::1] lcp = lcp_arr
    phi[sv[0]] = -1
    for i in range(1, n):
        if i + PF < n:
            lf_prefetchw(&phi[sv[i + PF]])
        phi[sv[i]] = sv[i - 1]
    h = 0
    # phi[i] is overwritten with the LCP of suffix i and its SA predecessor
    for i in range(n):
        # the compare starts h symbols in, and h moves slowly, so aim there
        if i + PF < n and phi[i + PF] >= 0 and phi[i + PF] + h < n:
            lf_prefetch(&t[phi[i + PF] + h])
        j = phi[i]
        if j == -1:
            phi[i] = 0
            h = 0
            continue
        while j + h < n and i + h < n and t[j + h] == t[i + h]:
            h += 1
        phi[i] = h
        if h > 0:
            h -= 1
    for i in range(1, n):
        if i + PF < n:
            lf_prefetch(&phi[sv[i + PF]])
        lcp[i - 1] = phi[sv[i]]
    return lcp_arr


def build_tree(sa, lcp, eff=None):
    """Preorder suffix tree from SA and LCP; ``eff=None`` means a single text (n - pos).

    Preorder sorts nodes by leftmost leaf rank, ancestors first. A counting pass sizes
    the block of each rank; the second pass gives every node its final id on creation,
    filling blocks from the end because the deepest node of a block is created first.
    """
    cdef int32_t[::1] sav = _i32(sa)
    cdef int32_t[::1] lcpv = _i32(lcp)
    cdef int32_t[::1] effv
    cdef bint single = eff is None
    cdef Py_ssize_t n = sav.shape[0]
    if not single:
        effv = _i32(eff)
    st_sd_a = np.empty(n + 2, dtype=np.int32)
    st_lb_a = np.empty(n + 2, dtype=np.int32)
    st_rep_a = np.empty(n + 2, dtype=np.int32)
    st_id_a = np.empty(n + 2, dtype=np.int32)
    cdef int32_t[::1] st_sd = st_sd_a
    cdef int32_t[::1] st_lb = st_lb_a
    cdef int32_t[::1] st_rep = st_rep_a
    cdef int32_t[::1] st_id = st_id_a
    slot_a = np.zeros(n + 1, dtype=np.int32)
    cdef int32_t[::1] slot = slot_a
    cdef Py_ssize_t top, i
    cdef int k, prev_e, pos, e, h, lsd, llb, lrep, lid, x, cnt, b, w
    cdef int npass

    leaf_of_a = np.zeros(n, dtype=np.int32)
    cdef int32_t[::1] leaf_of = leaf_of_a
    cdef int32_t[::1] npar
    cdef int32_t[::1] nsd
    cdef int32_t[::1] nrep
    cdef uint8_t[::1] nleaf

    for npass in range(2):
        top = 0
        st_sd[0] = 0
        st_lb[0] = 0
        st_rep[0] = sav[0] if n else 0
        st_id[0] = 0
        k = 0
        prev_e = -1
        for i in range(n):
            pos = sav[i]
            if single:
                e = <int>(n - pos)
            else:
                if i + PF < n:
                    lf_prefetch(&effv[sav[i + PF]])
                e = effv[pos]
            if npass and i + PF < n:
                lf_prefetchw(&leaf_of[sav[i + PF]])
            if i == 0:
                h = 0
            else:
                h = lcpv[i - 1]
                if e < h:
                    h = e
                if prev_e < h:
                    h = prev_e
                if h == e and h == prev_e:
                    # repeated suffix of the generalized text: same leaf
                    if npass:
                        leaf_of[pos] = st_id[top]
                    continue
            while st_sd[top] > h:
                lsd = st_sd[top]
                llb = st_lb[top]
                lrep = st_rep[top]
                lid = st_id[top]
                top -= 1
                if st_sd[top] >= h:
                    if npass:
                        npar[lid] = st_id[top]
                else:
                    # new branching node between the popped one and the stack top
                    if npass:
                        slot[llb] -= 1
                        x = slot[llb]
                        nsd[x] = h
                        nrep[x] = lrep
                        nleaf[x] = 0
                        npar[lid] = x
                    else:
                        slot[llb] += 1
                        x = 0
                    top += 1
                    st_sd[top] = h
                    st_lb[top] = llb
                    st_rep[top] = lrep
                    st_id[top] = x
            if npass:
                slot[k] -= 1
                x = slot[k]
                nsd[x] = e
                nrep[x] = pos
                nleaf[x] = 1
                leaf_of[pos] = x
            else:
                slot[k] += 1
                x = 0
            top += 1
            st_sd[top] = e
            st_lb[top] = k
            st_rep[top] = pos
            st_id[top] = x
            k += 1
            prev_e = e
        if npass:
            while top > 0:
                lid = st_id[top]
                top -= 1
                npar[lid] = st_id[top]
        else:
            # block b occupies [slot[b] - count, slot[b]) after this prefix sum
            cnt = 1
            for b in range(k):
                cnt += slot[b]
                slot[b] = cnt
            np_a = np.empty(cnt, dtype=np.int32)
            nsd_a = np.empty(cnt, dtype=np.int32)
            nrep_a = np.empty(cnt, dtype=np.int32)
            nleaf_a = np.empty(cnt, dtype=np.uint8)
            npar = np_a
            nsd = nsd_a
            nrep = nrep_a
            nleaf = nleaf_a
            npar[0] = -1
            nsd[0] = 0
            nrep[0] = sav[0] if n else 0
            nleaf[0] = 0
    del st_sd_a, st_lb_a, st_rep_a, st_id_a, slot_a

    ned_a = np.zeros(cnt, dtype=np.int32)
    cdef int32_t[::1] ned = ned_a
    for w in range(1, cnt):
        if w + PF < cnt:
            lf_prefetch(&ned[npar[w + PF]])
        ned[w] = ned[npar[w]] + 1
    return np_a, nsd_a, ned_a, nrep_a, nleaf_a, leaf_of_a


# --------------------------------------------------------------------------
# level ancestor


cdef class LevelAncestor:
    cdef readonly int n
    cdef readonly int levels
    cdef public object parent_arr, depth_arr
    cdef int32_t[::1] parent
    cdef int32_t[::1] depth
    cdef int32_t[::1] ladder
    cdef int32_t[::1] lad_pos
    cdef int32_t[::1] reach
    cdef int32_t[::1] aux
    cdef int32_t[::1] jnode
    cdef uint64_t[::1] amask
    cdef int32_t[:, ::1] jp

    def __init__(self, parent, depth=None):
        parent_a = _i32(parent)
        cdef int32_t[::1] par = parent_a
        cdef int n = par.shape[0]
        cdef int v, p, d, i, r, row, length, ext, step, maxdepth, nj
        self.n = n
        self.parent_arr = parent_a
        self.parent = par
        if depth is None:
            depth_a = np.zeros(n, dtype=np.int32)
            self.depth = depth_a
            for v in range(1, n):
                self.depth[v] = self.depth[par[v]] + 1
        else:
            depth_a = _i32(depth)
            self.depth = depth_a
        self.depth_arr = depth_a
        cdef int32_t[::1] dep = self.depth

        size_a = np.ones(n, dtype=np.int32)
        height_a = np.zeros(n, dtype=np.int32)
        long_a = np.full(n, -1, dtype=np.int32)
        cdef int32_t[::1] size = size_a
        cdef int32_t[::1] height = height_a
        cdef int32_t[::1] longchild = long_a
        for v in range(n - 1, 0, -1):
            if v > PF:
                lf_prefetchw(&size[par[v - PF]])
                lf_prefetchw(&height[par[v - PF]])
            p = par[v]
            size[p] += size[v]
            if height[v] + 1 > height[p]:
                height[p] = height[v] + 1
                longchild[p] = v

        aux_a = np.zeros(n, dtype=np.int32)
        jdesc_a = np.full(n, -1, dtype=np.int32)
        jtmp_a = np.zeros(n, dtype=np.int32)
        cdef int32_t[::1] aux = aux_a
        cdef int32_t[::1] jdesc = jdesc_a
        cdef int32_t[::1] jtmp = jtmp_a
        nj = 0
        for v in range(n - 1, -1, -1):
            if size[v] >= C_MICRO:
                if jdesc[v] == -1:
                    jdesc[v] = nj
                    jtmp[nj] = v
                    nj += 1
                if v:
                    p = par[v]
                    if jdesc[p] == -1:
                        jdesc[p] = jdesc[v]
        self.jnode = jtmp_a[:nj].copy()
        del jtmp_a
        maxdepth = 0
        for v in range(n):
            if dep[v] > maxdepth:
                maxdepth = dep[v]
        self.levels = 1
        while (1 << self.levels) <= maxdepth:
            self.levels += 1
        jp_a = np.zeros((nj, self.levels), dtype=np.int32)
        self.jp = jp_a

        ladder_a = np.empty(2 * n + 1, dtype=np.int32)
        lad_pos_a = np.zeros(n, dtype=np.int32)
        reach_a = np.zeros(n, dtype=np.int32)
        amask_a = np.zeros(n, dtype=np.uint64)
        path_a = np.zeros(maxdepth + 1, dtype=np.int32)
        cdef int32_t[::1] ladder = ladder_a
        cdef int32_t[::1] lad_pos = lad_pos_a
        cdef int32_t[::1] reach = reach_a
        cdef uint64_t[::1] amask = amask_a
        cdef int32_t[::1] path = path_a
        cdef int fill = 0
        for v in range(n):
            if 0 < v < n - PF:
                p = par[v + PF]
                lf_prefetch(&longchild[p])
                lf_prefetch(&lad_pos[p])
                lf_prefetch(&reach[p])
                lf_prefetch(&size[p])
                lf_prefetch(&aux[p])
                lf_prefetch(&amask[p])
            # the ladder slot of a path continuation needs the parent's lad_pos, which a
            # short lookahead usually already has
            if 0 < v < n - 8:
                p = par[v + 8]
                if p < v:
                    lf_prefetchw(&ladder[lad_pos[p] + 1])
            d = dep[v]
            path[d] = v
            if v == 0 or longchild[par[v]] != v:
                # head of a long path: its ancestors, then room for the path itself
                length = height[v] + 1
                ext = length if length < d else d
                for i in range(d - ext, d):
                    ladder[fill] = path[i]
                    fill += 1
                lad_pos[v] = fill
                reach[v] = ext
                ladder[fill] = v
                fill += length
            else:
                # continues the parent's path, one slot further down
                p = par[v]
                lad_pos[v] = lad_pos[p] + 1
                reach[v] = reach[p] + 1
                ladder[lad_pos[v]] = v
            if size[v] < C_MICRO:
                if v and size[par[v]] < C_MICRO:
                    r = aux[par[v]]
                    amask[v] = amask[par[v]] | (<uint64_t>1 << (v - r))
                else:
                    r = v
                    amask[v] = 1
                aux[v] = r
            else:
                row = jdesc[v]
                aux[v] = row
                if self.jnode[row] == v:
                    for i in range(self.levels):
                        step = 1 << i
                        self.jp[row, i] = path[d - step] if step <= d else 0
        # a view, not a copy: the tail is small and copying would touch every page again
        self.ladder = ladder_a[:fill]
        self.lad_pos = lad_pos
        self.reach = reach
        self.aux = aux
        self.amask = amask

    cdef inline int _la(self, int v, int d) noexcept:
        cdef int k = self.depth[v] - d
        cdef uint64_t mask
        cdef int r, row, j, i, u
        if k == 0:
            return v
        if k <= self.reach[v]:
            return self.ladder[self.lad_pos[v] - k]
        mask = self.amask[v]
        if mask:
            r = self.aux[v]
            if d >= self.depth[r]:
                return r + select64(mask, d - self.depth[r])
            v = self.parent[r]
            k = self.depth[v] - d
            if k == 0:
                return v
            if k <= self.reach[v]:
                return self.ladder[self.lad_pos[v] - k]
        row = self.aux[v]
        j = self.jnode[row]
        k = self.depth[j] - d
        i = lf_msb(<uint64_t>k)
        u = self.jp[row, i]
        return self.ladder[self.lad_pos[u] - (k - (1 << i))]

    cdef inline int _depth(self, int v) noexcept:
        return self.depth[v]

    cdef inline int _parent(self, int v) noexcept:
        return self.parent[v]

    def level_ancestor(self, v, d):
        v = int(v)
        d = int(d)
        if not 0 <= v < self.n:
            raise IndexError(f"node {v} out of range")
        if d < 0 or d > self.depth[v]:
            raise DepthOutOfRange(f"depth {d} outside 0..{self.depth[v]} for node {v}")
        return self._la(v, d)

    def child_toward(self, u, z):
        cdef int uu = int(u)
        cdef int zz = int(z)
        cdef int x
        if self.depth[uu] >= self.depth[zz]:
            raise NotAncestor(f"{uu} is not a proper ancestor of {zz}")
        x = self._la(zz, self.depth[uu] + 1)
        if self.parent[x] != uu:
            raise NotAncestor(f"{uu} is not a proper ancestor of {zz}")
        return x

    def edge_depth(self, v):
        return self.depth[int(v)]

    def memory_words(self):
        return (
            self.ladder.shape[0]
            + self.lad_pos.shape[0]
            + self.reach.shape[0]
            + self.aux.shape[0]
            + 2 * self.amask.shape[0]
            + self.jnode.shape[0]
            + self.jp.shape[0] * self.jp.shape[1]
        )


# --------------------------------------------------------------------------
# nearest marked ancestor


cdef class NMABase:
    cdef readonly int n
    cdef public object payload_arr
    cdef int32_t[::1] payload
    cdef int32_t[::1] parent

    cdef int _find(self, int v) noexcept:
        return 0

    cdef int _mark(self, int v, int payload) except -1:
        return 0

    cdef bint _is_marked(self, int v) noexcept:
        return False

    def nma(self, v):
        cdef int node
        v = int(v)
        if not 0 <= v < self.n:
            raise IndexError(f"node {v} out of range")
        node = self._find(v)
        return node, self.payload[node]

    def mark(self, v, payload=0):
        v = int(v)
        if not 0 <= v < self.n:
            raise IndexError(f"node {v} out of range")
        self._mark(v, int(payload))

    def is_marked(self, v):
        return bool(self._is_marked(int(v)))

    def payload_of(self, v):
        return self.payload[int(v)]

    @property
    def la(self):
        return self._get_la()

    def _get_la(self):
        return None


cdef class ReferenceNMA(NMABase):
    cdef LevelAncestor _la_idx
    cdef int32_t[::1] end
    cdef int32_t[::1] fen
    cdef uint8_t[::1] marked
    cdef public str backend

    def __init__(self, parent, la=None, root_payload=0):
        parent_a = _i32(parent)
        cdef int32_t[::1] par = parent_a
        cdef int n = par.shape[0]
        cdef int v
        self.n = n
        self.parent = par
        self.backend = "reference"
        self._la_idx = la if la is not None else LevelAncestor(parent_a)
        size_a = np.ones(n, dtype=np.int32)
        cdef int32_t[::1] size = size_a
        for v in range(n - 1, 0, -1):
            size[par[v]] += size[v]
        for v in range(n):
            size[v] += v
        self.end = size
        self.fen = np.zeros(n + 2, dtype=np.int32)
        self.marked = np.zeros(n, dtype=np.uint8)
        self.marked[0] = 1
        self.payload_arr = np.zeros(n, dtype=np.int32)
        self.payload = self.payload_arr
        self.payload[0] = root_payload

    def _get_la(self):
        return self._la_idx

    cdef inline void _add(self, int i, int delta) noexcept:
        cdef int size = self.n + 1
        i += 1
        while i <= size:
            self.fen[i] += delta
            i += i & -i

    cdef int _find(self, int v) noexcept:
        cdef int i = v + 1
        cdef int s = 0
        while i > 0:
            s += self.fen[i]
            i -= i & -i
        return self._la_idx._la(v, s)

    cdef bint _is_marked(self, int v) noexcept:
        return self.marked[v] != 0

    cdef int _mark(self, int v, int payload) except -1:
        if self.marked[v]:
            raise AlreadyMarked(f"node {v} already marked")
        if not self.marked[self.parent[v]]:
            raise AncestorClosednessViolation(f"parent of node {v} is unmarked")
        self.marked[v] = 1
        self.payload[v] = payload
        self._add(v, 1)
        self._add(self.end[v], -1)
        return 0

    def memory_words(self):
        return 3 * self.n + 2


def cluster_partition(parent):
    cdef int32_t[::1] par = _i32(parent)
    cdef int n = par.shape[0]
    cdef int half = C_MICRO // 2
    cdef int v, g, p, c, ng
    open_a = np.ones(n, dtype=np.int32)
    pend_a = np.full(n, -1, dtype=np.int32)
    group_a = np.full(n, -1, dtype=np.int32)
    gsize_a = np.zeros(n + 1, dtype=np.int32)
    gattach_a = np.full(n + 1, -1, dtype=np.int32)
    dis_a = np.zeros(n + 1, dtype=np.uint8)
    cdef int32_t[::1] open_size = open_a
    cdef int32_t[::1] pend = pend_a
    cdef int32_t[::1] group_of = group_a
    cdef int32_t[::1] gsize = gsize_a
    cdef int32_t[::1] gattach = gattach_a
    cdef uint8_t[::1] dissolved = dis_a
    ng = 0
    for v in range(n - 1, -1, -1):
        if v > PF:
            lf_prefetchw(&pend[par[v - PF]])
        g = pend[v]
        if g != -1:
            open_size[v] += gsize[g]
            dissolved[g] = 1
            pend[v] = -1
        if v == 0:
            break
        p = par[v]
        g = pend[p]
        if g == -1:
            g = ng
            ng += 1
            gsize[g] = 0
            gattach[g] = p
            pend[p] = g
        group_of[v] = g
        gsize[g] += open_size[v]
        if gsize[g] >= half:
            pend[p] = -1
    root_group = ng
    gattach[root_group] = -1
    del open_a, pend_a
    raw_a = np.zeros(n, dtype=np.int32)
    renum_a = np.full(ng + 1, -1, dtype=np.int32)
    cl_a = np.zeros(n, dtype=np.int32)
    local_a = np.zeros(n, dtype=np.uint8)
    fill_a = np.zeros(ng + 1, dtype=np.int32)
    attach_a = np.zeros(ng + 1, dtype=np.int32)
    cdef int32_t[::1] raw = raw_a
    cdef int32_t[::1] renum = renum_a
    cdef int32_t[::1] cl = cl_a
    cdef uint8_t[::1] local = local_a
    cdef int32_t[::1] fill = fill_a
    cdef int32_t[::1] attach = attach_a
    cdef int nc = 0
    raw[0] = root_group
    for v in range(n):
        if 0 < v < n - PF:
            lf_prefetch(&raw[par[v + PF]])
        if v:
            g = group_of[v]
            if g != -1 and not dissolved[g]:
                raw[v] = g
            else:
                raw[v] = raw[par[v]]
        g = raw[v]
        c = renum[g]
        if c == -1:
            c = nc
            renum[g] = c
            nc += 1
            attach[c] = gattach[g]
        cl[v] = c
        local[v] = fill[c]
        fill[c] += 1
    return cl_a, local_a, attach_a[:nc].copy()


cdef class AcceleratedNMA(NMABase):
    cdef object _la_obj
    cdef public str backend
    cdef int32_t[::1] cl
    cdef uint8_t[::1] local
    cdef int32_t[::1] attach
    cdef int32_t[::1] base
    cdef int32_t[::1] cnodes
    cdef uint64_t[::1] anc
    cdef uint64_t[::1] marked
    cdef int32_t[::1] first_att
    cdef int32_t[::1] next_att
    cdef readonly LevelAncestor macro_la
    cdef readonly NMABase macro
    cdef readonly int nclusters

    def __init__(self, parent, la=None, root_payload=0, levels=2):
        parent_a = _i32(parent)
        cdef int32_t[::1] par = parent_a
        cdef int n = par.shape[0]
        cdef int v, c, a
        cdef uint64_t bit
        self.n = n
        self.parent = par
        self.backend = "accelerated"
        self._la_obj = la
        cl_a, local_a, attach_a = cluster_partition(parent_a)
        self.cl = cl_a
        self.local = local_a
        self.attach = attach_a
        cdef int nc = attach_a.shape[0]
        self.nclusters = nc
        base_a = np.zeros(nc + 1, dtype=np.int32)
        self.base = base_a
        for v in range(n):
            self.base[self.cl[v] + 1] += 1
        for c in range(nc):
            self.base[c + 1] += self.base[c]
        self.cnodes = np.zeros(n, dtype=np.int32)
        self.anc = np.zeros(n, dtype=np.uint64)
        cdef int32_t[::1] cl = self.cl
        cdef uint64_t[::1] anc = self.anc
        for v in range(n):
            if 0 < v < n - PF:
                lf_prefetch(&cl[par[v + PF]])
                lf_prefetch(&anc[par[v + PF]])
            c = self.cl[v]
            self.cnodes[self.base[c] + self.local[v]] = v
            bit = <uint64_t>1 << self.local[v]
            if v and self.cl[par[v]] == c:
                self.anc[v] = self.anc[par[v]] | bit
            else:
                self.anc[v] = bit
        self.marked = np.zeros(nc, dtype=np.uint64)
        self.marked[0] = 1
        self.first_att = np.full(n, -1, dtype=np.int32)
        self.next_att = np.full(nc, -1, dtype=np.int32)
        mparent_a = np.full(nc, -1, dtype=np.int32)
        for c in range(nc - 1, 0, -1):
            a = self.attach[c]
            self.next_att[c] = self.first_att[a]
            self.first_att[a] = c
            mparent_a[c] = self.cl[a]
        self.macro_la = LevelAncestor(mparent_a)
        if levels > 1:
            self.macro = AcceleratedNMA(mparent_a, la=self.macro_la, levels=levels - 1)
        else:
            self.macro = ReferenceNMA(mparent_a, la=self.macro_la)
        a = self.first_att[0]
        while a != -1:
            self.macro._mark(a, 0)
            a = self.next_att[a]
        self.payload_arr = np.zeros(n, dtype=np.int32)
        self.payload = self.payload_arr
        self.payload[0] = root_payload

    def _get_la(self):
        return self._la_obj

    cdef int _find(self, int v) noexcept:
        cdef int c = self.cl[v]
        cdef uint64_t m = self.anc[v] & self.marked[c]
        cdef int c2, c3, x
        if m:
            return self.cnodes[self.base[c] + lf_msb(m)]
        c2 = self.macro._find(c)
        if c2 == c:
            return self.attach[c]
        c3 = self.macro_la._la(c, self.macro_la.depth[c2] + 1)
        x = self.attach[c3]
        m = self.anc[x] & self.marked[c2]
        if m:
            return self.cnodes[self.base[c2] + lf_msb(m)]
        return self.attach[c2]

    cdef bint _is_marked(self, int v) noexcept:
        return (self.marked[self.cl[v]] >> self.local[v]) & 1

    cdef int _mark(self, int v, int payload) except -1:
        cdef int c = self.cl[v]
        cdef uint64_t bit = <uint64_t>1 << self.local[v]
        cdef int p, a
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
        return 0

    def memory_words(self):
        cdef int nc = self.nclusters
        own = 2 * self.n + self.n // 4 + 2 * self.n + nc * 4 + self.n
        return own + self.macro_la.memory_words() + self.macro.memory_words()


# --------------------------------------------------------------------------
# trie superimposition


cdef class Superimposer:
    cdef int32_t[::1] text
    cdef int32_t[::1] sd
    cdef int32_t[::1] mark_count
    cdef int32_t[::1] last_payload
    cdef readonly NMABase nma
    cdef readonly LevelAncestor la
    cdef readonly bint debug
    cdef public long checks
    cdef object _keep

    def __init__(self, text, str_depth, NMABase nma, LevelAncestor la, debug=False):
        text_a = _i32(text)
        sd_a = _i32(str_depth)
        self._keep = (text_a, sd_a)
        self.text = text_a
        self.sd = sd_a
        self.nma = nma
        self.la = la
        n = sd_a.shape[0]
        self.mark_count = np.zeros(n, dtype=np.int32)
        self.last_payload = np.zeros(n, dtype=np.int32)
        self.debug = bool(debug)
        self.checks = 0

    cdef int _insert(self, int z, int start, int new_id, int* out_id, int* out_depth) except -1:
        cdef NMABase nma = self.nma
        cdef LevelAncestor la = self.la
        cdef int u = nma._find(z)
        cdef int du, c, cnt, xd, xid, sym
        if u == z:
            raise InvariantViolation(f"query leaf {z} is already marked")
        du = la.depth[u]
        if la.depth[z] == du + 1:
            c = z
        else:
            c = la._la(z, du + 1)
        cnt = self.mark_count[c]
        if cnt:
            xd = self.sd[u] + cnt
            xid = self.last_payload[c]
        else:
            xd = self.sd[u]
            xid = nma.payload[u]
        sym = self.text[start + xd]
        if self.debug:
            self._check(u, c, z, cnt, xd)
        if xd + 1 == self.sd[c]:
            nma._mark(c, new_id)
        else:
            self.mark_count[c] = cnt + 1
            self.last_payload[c] = new_id
        out_id[0] = xid
        out_depth[0] = xd
        return sym

    cdef int _check(self, int u, int c, int z, int cnt, int xd) except -1:
        cdef LevelAncestor la = self.la
        if la._la(z, la.depth[u]) != u or la.parent[c] != u:
            raise InvariantViolation(f"nearest marked node {u} is not on the path to {z}")
        if not self.nma._is_marked(u):
            raise InvariantViolation(f"ledger base {u} is unmarked")
        if cnt and self.nma._is_marked(c):
            raise InvariantViolation(f"edge into marked node {c} carries ledger marks")
        if not (0 <= cnt < self.sd[c] - self.sd[u]) or xd + 1 > self.sd[c]:
            raise InvariantViolation(f"ledger of edge {c} not contiguous")
        self.checks += 1
        return 0

    def insert(self, z, start, new_id):
        cdef int xid = 0, xd = 0, sym
        sym = self._insert(int(z), int(start), int(new_id), &xid, &xd)
        return xid, xd, sym

    def ledger(self):
        return np.asarray(self.mark_count).copy(), np.asarray(self.last_payload).copy()


def lz78_loop(Superimposer sp, leaf_of, int n):
    cdef int32_t[::1] lo = _i32(leaf_of)
    par_a = np.empty(n, dtype=np.int32)
    sym_a = np.empty(n, dtype=np.int32)
    end_a = np.empty(n, dtype=np.int32)
    cdef int32_t[::1] par = par_a
    cdef int32_t[::1] sym = sym_a
    cdef int32_t[::1] end = end_a
    cdef int p = 0
    cdef int i = 0
    cdef int xid = 0, xd = 0
    while p < n:
        sym[i] = sp._insert(lo[p], p, i + 1, &xid, &xd)
        par[i] = xid
        p += xd + 1
        end[i] = p
        i += 1
    return par_a[:i].copy(), sym_a[:i].copy(), end_a[:i].copy()


def heap_loop(Superimposer sp, leaves, starts, int first_id):
    cdef int32_t[::1] lv = _i32(leaves)
    cdef int32_t[::1] st = _i32(starts)
    cdef Py_ssize_t m = lv.shape[0]
    cdef Py_ssize_t k
    par_a = np.empty(m, dtype=np.int32)
    sym_a = np.empty(m, dtype=np.int32)
    cdef int32_t[::1] par = par_a
    cdef int32_t[::1] sym = sym_a
    cdef int xid = 0, xd = 0
    for k in range(m):
        sym[k] = sp._insert(lv[k], st[k], first_id + <int>k, &xid, &xd)
        par[k] = xid
    return par_a, sym_a
