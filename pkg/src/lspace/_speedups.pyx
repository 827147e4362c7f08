# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernel: single-word (<= 64 concept) fast path.

Mirrors ``_kernel_py``: same traversal order, same word-operation
accounting.  Position bitmaps fit one 64-bit word each, so a mex rescan is
one xor/increment/popcount.
"""

from libc.stdlib cimport free, malloc

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

ctypedef unsigned long long u64

DEF MAXK = 64

cdef struct Ctx:
    int n
    int k
    int *conc          # conc[i*n + j]: concept at position j of sequence i
    int *pos           # pos[i*n + c]: position of concept c in sequence i
    u64 bitmaps[MAXK]
    int mexv[MAXK]
    long long count
    long long ops
    bint count_ops


cdef void _rec(Ctx *ctx, int p) noexcept nogil:
    cdef int i, j, x, mi, mj, n, k
    cdef bint blocked
    cdef u64 b
    cdef int saved[MAXK]
    n = ctx.n
    k = ctx.k
    for i in range(p, k):
        mi = ctx.mexv[i]
        if mi >= n:
            continue
        x = ctx.conc[i * n + mi]
        blocked = False
        for j in range(i):
            mj = ctx.mexv[j]
            if mj < n and ctx.conc[j * n + mj] == x:
                blocked = True
                break
        if blocked:
            continue
        for j in range(i, k):
            saved[j] = ctx.mexv[j]
        for j in range(k):
            ctx.bitmaps[j] |= (<u64>1) << ctx.pos[j * n + x]
        for j in range(i, k):
            b = ctx.bitmaps[j]
            ctx.mexv[j] = __builtin_popcountll(b ^ (b + 1)) - 1
        ctx.count += 1
        if ctx.count_ops:
            ctx.ops += 2 * k
            for j in range(i, k):
                ctx.ops += 1 + (ctx.mexv[j] >> 6)
        _rec(ctx, i)
        for j in range(k):
            ctx.bitmaps[j] &= ~((<u64>1) << ctx.pos[j * n + x])
        for j in range(i, k):
            ctx.mexv[j] = saved[j]


cdef Ctx *_make_ctx(int n, int k, object conc, object pos, bint count_ops) except NULL:
    if n > 63 or k > MAXK:
        raise ValueError("compiled kernel handles n <= 63, k <= 64")
    cdef Ctx *ctx = <Ctx *>malloc(sizeof(Ctx))
    if ctx == NULL:
        raise MemoryError()
    ctx.n = n
    ctx.k = k
    ctx.count = 1
    ctx.ops = 0
    ctx.count_ops = count_ops
    ctx.conc = <int *>malloc(sizeof(int) * max(1, n * k))
    ctx.pos = <int *>malloc(sizeof(int) * max(1, n * k))
    if ctx.conc == NULL or ctx.pos == NULL:
        free(ctx.conc)
        free(ctx.pos)
        free(ctx)
        raise MemoryError()
    cdef int i, j
    for i in range(k):
        ctx.bitmaps[i] = 0
        ctx.mexv[i] = 0
        for j in range(n):
            ctx.conc[i * n + j] = conc[i][j]
            ctx.pos[i * n + j] = pos[i][j]
    return ctx


cdef void _free_ctx(Ctx *ctx) noexcept:
    free(ctx.conc)
    free(ctx.pos)
    free(ctx)


def count_states(int n, int k, conc, pos, bint count_ops=False):
    """(state count, word operations) for the space defined by the sequences."""
    if n == 0 or k == 0:
        return 1, 0
    cdef Ctx *ctx = _make_ctx(n, k, conc, pos, count_ops)
    try:
        with nogil:
            _rec(ctx, 0)
        return ctx.count, ctx.ops
    finally:
        _free_ctx(ctx)


cdef int _collect(Ctx *ctx, int p, u64 state, list out, long long cap) except -1:
    cdef int i, j, x, mi, mj, n, k
    cdef bint blocked
    cdef u64 b, child
    cdef int saved[MAXK]
    n = ctx.n
    k = ctx.k
    for i in range(p, k):
        mi = ctx.mexv[i]
        if mi >= n:
            continue
        x = ctx.conc[i * n + mi]
        blocked = False
        for j in range(i):
            mj = ctx.mexv[j]
            if mj < n and ctx.conc[j * n + mj] == x:
                blocked = True
                break
        if blocked:
            continue
        for j in range(i, k):
            saved[j] = ctx.mexv[j]
        for j in range(k):
            ctx.bitmaps[j] |= (<u64>1) << ctx.pos[j * n + x]
        for j in range(i, k):
            b = ctx.bitmaps[j]
            ctx.mexv[j] = __builtin_popcountll(b ^ (b + 1)) - 1
        child = state | ((<u64>1) << x)
        if cap >= 0 and len(out) >= cap:
            raise OverflowError("state count exceeds cap")
        out.append(child)
        _collect(ctx, i, child, out, cap)
        for j in range(k):
            ctx.bitmaps[j] &= ~((<u64>1) << ctx.pos[j * n + x])
        for j in range(i, k):
            ctx.mexv[j] = saved[j]
    return 0


def collect_states(int n, int k, conc, pos, cap=None):
    """All state masks in traversal order; raises OverflowError beyond ``cap``."""
    out = [0]
    if cap is not None and cap < 1:
        raise OverflowError("state count exceeds cap")
    if n == 0 or k == 0:
        return out
    cdef Ctx *ctx = _make_ctx(n, k, conc, pos, False)
    try:
        _collect(ctx, 0, 0, out, -1 if cap is None else <long long>cap)
        return out
    finally:
        _free_ctx(ctx)
