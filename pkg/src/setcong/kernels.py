"""Hot integer kernels.

All functions here take and return plain numpy arrays and are compiled with
numba unless ``SETCONG_DISABLE_NUMBA`` is set (see :mod:`setcong._accel`).

Subset digraphs: vertices are bitmasks ``0 .. 2**nbits - 1``.  When
``nbits > 0`` every vertex ``v`` carries implicit covering edges
``v -> v | (1 << k)`` for each clear bit ``k``; further edges come from a CSR
pair ``(ptr, dst)``.  With ``nbits == 0`` the graph is just the CSR graph.

Search: domains are uint32 bitmasks over the values ``0..r`` (bit ``v`` set
means value ``v`` is still possible; value 0 means "in no set").
"""
import numpy as np

from ._accel import njit


@njit
def scc_labels(n, nbits, ptr, dst):
    """Tarjan's algorithm, iterative.  Returns (component id per vertex, count).

    Component ids come out in reverse topological order.
    """
    index = np.full(n, -1, np.int64)
    low = np.zeros(n, np.int64)
    onstack = np.zeros(n, np.bool_)
    comp = np.full(n, -1, np.int64)
    stack = np.empty(n, np.int64)
    call_v = np.empty(n, np.int64)
    call_e = np.empty(n, np.int64)
    sp = 0
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        index[root] = counter
        low[root] = counter
        counter += 1
        stack[sp] = root
        sp += 1
        onstack[root] = True
        call_v[0] = root
        call_e[0] = 0
        cp = 1
        while cp > 0:
            v = call_v[cp - 1]
            e = call_e[cp - 1]
            deg = nbits + ptr[v + 1] - ptr[v]
            if e < deg:
                call_e[cp - 1] = e + 1
                if e < nbits:
                    if (v >> e) & 1:
                        continue
                    w = v | (1 << e)
                else:
                    w = dst[ptr[v] + e - nbits]
                if index[w] == -1:
                    index[w] = counter
                    low[w] = counter
                    counter += 1
                    stack[sp] = w
                    sp += 1
                    onstack[w] = True
                    call_v[cp] = w
                    call_e[cp] = 0
                    cp += 1
                elif onstack[w] and index[w] < low[v]:
                    low[v] = index[w]
            else:
                if low[v] == index[v]:
                    while True:
                        sp -= 1
                        w = stack[sp]
                        onstack[w] = False
                        comp[w] = ncomp
                        if w == v:
                            break
                    ncomp += 1
                cp -= 1
                if cp > 0:
                    u = call_v[cp - 1]
                    if low[v] < low[u]:
                        low[u] = low[v]
    return comp, ncomp


@njit
def reachable_from(n, nbits, ptr, dst, src):
    seen = np.zeros(n, np.bool_)
    queue = np.empty(n, np.int64)
    seen[src] = True
    queue[0] = src
    head = 0
    tail = 1
    while head < tail:
        v = queue[head]
        head += 1
        for k in range(nbits):
            if not (v >> k) & 1:
                w = v | (1 << k)
                if not seen[w]:
                    seen[w] = True
                    queue[tail] = w
                    tail += 1
        for e in range(ptr[v], ptr[v + 1]):
            w = dst[e]
            if not seen[w]:
                seen[w] = True
                queue[tail] = w
                tail += 1
    return seen


# --- finite family search -------------------------------------------------


@njit
def _allowed_y(dx, lm, rm, full, kind):
    # values for y = g.x compatible with some value in dom(x)
    has_l = (dx & lm) != 0
    has_n = (dx & (full & ~lm)) != 0
    a = np.uint32(0)
    if kind == 0:
        if has_l:
            a |= rm
        if has_n:
            a |= full & ~rm
    else:
        if dx != 0:
            a |= rm
        if has_n:
            a |= full & ~rm
    return a


@njit
def _allowed_x(dy, lm, rm, full, kind):
    has_r = (dy & rm) != 0
    has_n = (dy & (full & ~rm)) != 0
    a = np.uint32(0)
    if kind == 0:
        if has_r:
            a |= lm
        if has_n:
            a |= full & ~lm
    else:
        if has_r:
            a |= lm
        if dy != 0:
            a |= full & ~lm
    return a


@njit
def _propagate(dom, queue, inq, qlen, img, pre, lmask, rmask, kind, full):
    """AC-3 over the binary witness constraints.  False on a domain wipeout."""
    s = img.shape[0]
    head = 0
    n = dom.shape[0]
    while qlen > 0:
        v = queue[head]
        head += 1
        if head == n:
            head = 0
        qlen -= 1
        inq[v] = False
        for i in range(s):
            y = img[i, v]
            if y >= 0 and y != v:
                new = dom[y] & _allowed_y(dom[v], lmask[i], rmask[i], full, kind[i])
                if new != dom[y]:
                    dom[y] = new
                    if new == 0:
                        return False
                    if not inq[y]:
                        inq[y] = True
                        queue[(head + qlen) % n] = y
                        qlen += 1
            x = pre[i, v]
            if x >= 0 and x != v:
                new = dom[x] & _allowed_x(dom[v], lmask[i], rmask[i], full, kind[i])
                if new != dom[x]:
                    dom[x] = new
                    if new == 0:
                        return False
                    if not inq[x]:
                        inq[x] = True
                        queue[(head + qlen) % n] = x
                        qlen += 1
    return True


@njit
def _unary(dom, img, pre, lmask, rmask, kind, full):
    n = dom.shape[0]
    s = img.shape[0]
    for v in range(n):
        d = dom[v]
        for i in range(s):
            lm = lmask[i]
            rm = rmask[i]
            if img[i, v] < 0:
                d &= full & ~lm
            if kind[i] == 0 and pre[i, v] < 0:
                d &= full & ~rm
            if img[i, v] == v:
                if kind[i] == 0:
                    d &= full & ~(lm ^ rm)
                else:
                    d &= full & ~(lm & ~rm)
        dom[v] = d
        if d == 0:
            return False
    return True


@njit
def _any_nonzero(dom):
    for v in range(dom.shape[0]):
        if dom[v] & ~np.uint32(1):
            return True
    return False


@njit
def _first_open(dom):
    for v in range(dom.shape[0]):
        d = dom[v]
        if d & (d - np.uint32(1)):
            return v
    return -1


@njit
def family_search(img, pre, lmask, rmask, kind, nvalues, max_nodes):
    """Backtracking with maintained arc consistency over a word ball.

    ``img[i, x]`` / ``pre[i, x]`` index g_i.x / g_i^-1.x in the ball, or -1
    when the point leaves it.  Variables are branched in index order, values
    in ascending order, so the first solution is deterministic.

    Returns ``(status, assignment, nodes)`` with status 1 = found,
    0 = exhausted, -1 = node budget hit (``max_nodes <= 0`` means unbounded).
    """
    n = img.shape[1]
    full = np.uint32((1 << nvalues) - 1)
    doms = np.empty((n + 1, n), np.uint32)
    doms[0, :] = full
    queue = np.empty(n, np.int64)
    inq = np.zeros(n, np.bool_)
    assign = np.full(n, -1, np.int64)
    nodes = 0

    if not _unary(doms[0], img, pre, lmask, rmask, kind, full):
        return 0, assign, nodes
    for v in range(n):
        queue[v] = v
        inq[v] = True
    if not _propagate(doms[0], queue, inq, n, img, pre, lmask, rmask, kind, full):
        return 0, assign, nodes
    if not _any_nonzero(doms[0]):
        return 0, assign, nodes

    var_at = np.empty(n + 1, np.int64)
    val_at = np.zeros(n + 1, np.int64)
    depth = 0
    var_at[0] = _first_open(doms[0])
    if var_at[0] < 0:
        for v in range(n):
            assign[v] = int(np.log2(doms[0][v]))
        return 1, assign, nodes

    while depth >= 0:
        v = var_at[depth]
        d = doms[depth, v]
        val = val_at[depth]
        while val < nvalues and not (d >> val) & 1:
            val += 1
        if val >= nvalues:
            depth -= 1
            continue
        val_at[depth] = val + 1
        nodes += 1
        if max_nodes > 0 and nodes > max_nodes:
            return -1, assign, nodes
        child = doms[depth + 1]
        child[:] = doms[depth]
        child[v] = np.uint32(1) << val
        inq[:] = False
        queue[0] = v
        inq[v] = True
        if not _propagate(child, queue, inq, 1, img, pre, lmask, rmask, kind, full):
            continue
        if not _any_nonzero(child):
            continue
        u = _first_open(child)
        if u < 0:
            for x in range(n):
                dd = child[x]
                k = 0
                while dd > 1:
                    dd >>= 1
                    k += 1
                assign[x] = k
            return 1, assign, nodes
        depth += 1
        var_at[depth] = u
        val_at[depth] = 0
    return 0, assign, nodes


# --- set graph ------------------------------------------------------------


@njit
def setgraph_edges(npts, shift, ends, ends_inv):
    """Edges of the labeled set graph over nonempty proper subsets of P.

    ``shift[l, p]`` is the index of rho_l.p in P (or -1); ``ends[l]`` and
    ``ends_inv[l]`` are the bitmasks E(rho_l) and E(rho_l^-1).  Returns
    parallel arrays (src, dst, label, good).
    """
    nlab = shift.shape[0]
    nv = (1 << npts) - 2
    cap = nv * nlab
    src = np.empty(cap, np.int64)
    dst = np.empty(cap, np.int64)
    lab = np.empty(cap, np.int64)
    good = np.empty(cap, np.bool_)
    ne = 0
    for S in range(1, (1 << npts) - 1):
        for l in range(nlab):
            e = ends[l]
            T = 0
            rest = S & ~e
            for p in range(npts):
                if (rest >> p) & 1:
                    T |= 1 << shift[l, p]
            contains = (e & S) == e
            if contains:
                T |= ends_inv[l]
            if T != 0:
                src[ne] = S
                dst[ne] = T
                lab[ne] = l
                good[ne] = contains or (e & S) == 0
                ne += 1
    return src[:ne], dst[:ne], lab[:ne], good[:ne]
