"""Pure-Python enumeration kernel for sequence-defined learning spaces.

The traversal follows the predecessor-tree reverse search: from a state
whose mex vector is v, branch i >= p adds the first concept excluded from
sequence i (skipping branches whose first excluded concept repeats an
earlier sequence's), then rescans mex coordinates >= i.  Per-sequence
position bitmaps make each rescan a first-zero-bit computation, done with
the B xor (B+1) trick on arbitrary-precision ints.

A compiled twin of this module lives in ``_speedups.pyx``; keep the two in
step.  Word-operation counting models the bitmaps as little-endian arrays
of 64-bit words: setting or clearing one bit costs one word, a mex rescan
costs one word per word scanned up to the first zero bit.
"""

from __future__ import annotations

from typing import Callable


class MexBitState:
    """Traversal scratch: per-sequence position bitmaps plus the state mask.

    Bit j of ``bitmap[i]`` is set iff the concept at position j of sequence
    i belongs to the current state.  Single-traversal, single-thread use.
    """

    __slots__ = ("n", "k", "pos", "bitmaps", "state")

    def __init__(self, n: int, k: int, pos: tuple[tuple[int, ...], ...]):
        self.n = n
        self.k = k
        self.pos = pos
        self.bitmaps = [0] * k
        self.state = 0

    def add(self, concept: int) -> None:
        self.state |= 1 << concept
        for i in range(self.k):
            self.bitmaps[i] |= 1 << self.pos[i][concept]

    def remove(self, concept: int) -> None:
        self.state &= ~(1 << concept)
        for i in range(self.k):
            self.bitmaps[i] &= ~(1 << self.pos[i][concept])

    def mex_of(self, i: int) -> int:
        """Index of the first zero bit of bitmap i (= n when the prefix is full)."""
        b = self.bitmaps[i]
        return (b ^ (b + 1)).bit_length() - 1


def traverse(
    n: int,
    k: int,
    conc: tuple[tuple[int, ...], ...],
    pos: tuple[tuple[int, ...], ...],
    enter: Callable[[int, int], None] | None = None,
    leave: Callable[[int], None] | None = None,
) -> int:
    """Depth-first visit of every state; returns the state count.

    ``enter(mask, added_concept)`` runs when a state is first reached (the
    root gets ``enter(0, -1)``), ``leave(mask)`` when its subtree is done.
    Exceptions from either callback abort the traversal and propagate.
    """
    if enter is not None:
        enter(0, -1)
    if n == 0 or k == 0:
        if leave is not None:
            leave(0)
        return 1
    bitmaps = [0] * k
    mexv = [0] * k
    count = 1

    def rec(p: int, state: int) -> None:
        nonlocal count
        for i in range(p, k):
            mi = mexv[i]
            if mi >= n:
                continue
            x = conc[i][mi]
            blocked = False
            for j in range(i):
                mj = mexv[j]
                if mj < n and conc[j][mj] == x:
                    blocked = True
                    break
            if blocked:
                continue
            saved = mexv[i:]
            for j in range(k):
                bitmaps[j] |= 1 << pos[j][x]
            child = state | (1 << x)
            for j in range(i, k):
                b = bitmaps[j]
                mexv[j] = (b ^ (b + 1)).bit_length() - 1
            count += 1
            if enter is not None:
                enter(child, x)
            rec(i, child)
            if leave is not None:
                leave(child)
            for j in range(k):
                bitmaps[j] &= ~(1 << pos[j][x])
            mexv[i:] = saved

    rec(0, 0)
    if leave is not None:
        leave(0)
    return count


def count_states(
    n: int,
    k: int,
    conc: tuple[tuple[int, ...], ...],
    pos: tuple[tuple[int, ...], ...],
    count_ops: bool = False,
) -> tuple[int, int]:
    """(state count, word operations); ops are 0 unless ``count_ops``."""
    if n == 0 or k == 0:
        return 1, 0
    bitmaps = [0] * k
    mexv = [0] * k
    count = 1
    ops = 0

    def rec(p: int) -> None:
        nonlocal count, ops
        for i in range(p, k):
            mi = mexv[i]
            if mi >= n:
                continue
            x = conc[i][mi]
            blocked = False
            for j in range(i):
                mj = mexv[j]
                if mj < n and conc[j][mj] == x:
                    blocked = True
                    break
            if blocked:
                continue
            saved = mexv[i:]
            for j in range(k):
                bitmaps[j] |= 1 << pos[j][x]
            for j in range(i, k):
                b = bitmaps[j]
                mexv[j] = (b ^ (b + 1)).bit_length() - 1
            count += 1
            if count_ops:
                ops += 2 * k  # one word set now, one cleared on backtrack
                for j in range(i, k):
                    ops += 1 + (mexv[j] >> 6)  # words scanned by the rescan
            rec(i)
            for j in range(k):
                bitmaps[j] &= ~(1 << pos[j][x])
            mexv[i:] = saved

    rec(0)
    return count, ops


def collect_states(
    n: int,
    k: int,
    conc: tuple[tuple[int, ...], ...],
    pos: tuple[tuple[int, ...], ...],
    cap: int | None = None,
) -> list[int]:
    """All state masks in traversal order; raises OverflowError beyond ``cap``."""
    out: list[int] = []

    def enter(mask: int, _added: int) -> None:
        if cap is not None and len(out) >= cap:
            raise OverflowError("state count exceeds cap")
        out.append(mask)

    traverse(n, k, conc, pos, enter=enter)
    return out
