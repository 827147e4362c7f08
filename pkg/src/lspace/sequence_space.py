"""Learning spaces defined by sets of learning sequences.

A sequence space over domain D is a set of permutations of D; its states
are the unions of per-sequence prefixes.  States are indexed by mex
vectors (per-sequence first excluded position); ``up`` inverts the
indexing by unioning prefixes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from . import _kernels
from .core import (
    CapacityError,
    Domain,
    MAX_EXPLICIT_STATES,
    ParseError,
    SetFamily,
    State,
    ValidationError,
)
from ._kernel_py import MexBitState  # noqa: F401  (re-exported scratch type)

MexVector = tuple[int, ...]


@dataclass(frozen=True)
class SequenceSpace:
    """Validated set of learning sequences with position tables.

    ``seqs[i][j]`` is the concept index at position j of sequence i;
    ``pos[i][c]`` is the position of concept c in sequence i;
    ``prefix_masks[i][j]`` is the bit mask of the first j concepts of
    sequence i.  Immutable and safe to share across threads.
    """

    domain: Domain
    seqs: tuple[tuple[int, ...], ...]
    pos: tuple[tuple[int, ...], ...]
    prefix_masks: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.seqs)

    def sequence_labels(self, i: int) -> tuple[str, ...]:
        return tuple(self.domain.concepts[c] for c in self.seqs[i])

    def all_sequence_labels(self) -> list[tuple[str, ...]]:
        return [self.sequence_labels(i) for i in range(self.k)]


def new_sequence_space(
    domain: Domain, sequences: Iterable[Sequence[str]]
) -> SequenceSpace:
    """Validate and index a set of learning sequences.

    Every sequence must be a permutation of the whole domain; duplicates
    are dropped with a warning since they do not change the space.
    """
    n = domain.n
    seqs: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    for snum, seq in enumerate(sequences):
        idxs = tuple(domain.index(lab) for lab in seq)
        counts = [0] * n
        for c in idxs:
            counts[c] += 1
        missing = [domain.concepts[c] for c in range(n) if counts[c] == 0]
        duplicated = [domain.concepts[c] for c in range(n) if counts[c] > 1]
        if missing or duplicated:
            raise ValidationError(
                f"sequence {snum} is not a permutation of the domain"
                f" (missing: {missing or '-'}, duplicated: {duplicated or '-'})"
            )
        if idxs in seen:
            warnings.warn(f"dropping duplicate sequence {snum}", stacklevel=2)
            continue
        seen.add(idxs)
        seqs.append(idxs)
    if n > 0 and not seqs:
        raise ValidationError("at least one sequence required for a nonempty domain")
    return _build(domain, tuple(seqs))


def _build(domain: Domain, seqs: tuple[tuple[int, ...], ...]) -> SequenceSpace:
    n = domain.n
    pos = []
    prefix_masks = []
    for s in seqs:
        p = [0] * n
        masks = [0]
        m = 0
        for j, c in enumerate(s):
            p[c] = j
            m |= 1 << c
            masks.append(m)
        pos.append(tuple(p))
        prefix_masks.append(tuple(masks))
    return SequenceSpace(domain, seqs, tuple(pos), tuple(prefix_masks))


def _as_mask(sp: SequenceSpace, s: State | int) -> int:
    if isinstance(s, State):
        if s.domain.concepts != sp.domain.concepts:
            raise ValidationError("state belongs to a different domain")
        return s.bits
    return s


def mex(sp: SequenceSpace, s: State | int) -> MexVector:
    """Per-sequence index of the first concept excluded from ``s`` (n if none)."""
    bits = _as_mask(sp, s)
    n = sp.domain.n
    out = []
    for seq in sp.seqs:
        j = 0
        for j, c in enumerate(seq):
            if not (bits >> c) & 1:
                break
        else:
            j = n
        out.append(j)
    return tuple(out)


def up(sp: SequenceSpace, v: Sequence[int]) -> State:
    """Union of the first v_i concepts of each sequence."""
    if len(v) != sp.k:
        raise ValidationError("mex vector length differs from sequence count")
    m = 0
    for i, vi in enumerate(v):
        if not 0 <= vi <= sp.domain.n:
            raise ValidationError(f"coordinate {i} out of range [0, n]")
        m |= sp.prefix_masks[i][vi]
    return State(sp.domain, m)


def _up_mask(sp: SequenceSpace, v: Sequence[int]) -> int:
    m = 0
    for i, vi in enumerate(v):
        m |= sp.prefix_masks[i][vi]
    return m


def contains(sp: SequenceSpace, s: State | int) -> bool:
    """Membership test: up(mex(S)) == S exactly for states of the space."""
    bits = _as_mask(sp, s)
    return _up_mask(sp, mex(sp, bits)) == bits


def _require_member(sp: SequenceSpace, s: State | int) -> int:
    bits = _as_mask(sp, s)
    if not contains(sp, bits):
        raise ValidationError("state is not a member of the sequence space")
    return bits


def predecessor(sp: SequenceSpace, s: State | int) -> State:
    """The state one concept below ``s`` in the canonical predecessor tree.

    Decrement the last nonzero mex coordinate until the up image first
    changes; the change removes exactly one concept.
    """
    bits = _require_member(sp, s)
    if bits == 0:
        raise ValidationError("the empty state has no predecessor")
    v = list(mex(sp, bits))
    while True:
        for i in range(sp.k - 1, -1, -1):
            if v[i] > 0:
                v[i] -= 1
                break
        else:
            raise AssertionError("decrement ran past the zero vector")
        m = _up_mask(sp, v)
        if m != bits:
            return State(sp.domain, m)


def _branch_start(sp: SequenceSpace, bits: int, v: MexVector) -> int:
    """Smallest i such that the state is a union of prefixes of sequences 0..i.

    Matches the p value the enumeration threads through its recursion: a
    state generated on branch i needs no branches below i, but may extend
    sequence i itself further.
    """
    if sp.k == 0:
        return 0
    acc = 0
    for i in range(sp.k):
        acc |= sp.prefix_masks[i][v[i]]
        if acc == bits:
            return i
    raise AssertionError("state not reproducible from its own mex vector")


def successors(
    sp: SequenceSpace, s: State | int
) -> list[tuple[State, MexVector, int]]:
    """States whose predecessor is ``s``: (state, its mex vector, branch index)."""
    bits = _require_member(sp, s)
    v = mex(sp, bits)
    n = sp.domain.n
    p = _branch_start(sp, bits, v)
    out = []
    for i in range(p, sp.k):
        if v[i] >= n:
            continue
        x = sp.seqs[i][v[i]]
        if any(v[j] < n and sp.seqs[j][v[j]] == x for j in range(i)):
            continue
        w = list(v)
        w[i] += 1
        m = _up_mask(sp, w)
        out.append((State(sp.domain, m), mex(sp, m), i))
    return out


def enumerate_states(
    sp: SequenceSpace,
    visitor: Callable[[State], None] | None = None,
    count_ops: bool = False,
    force_pure: bool = False,
) -> int | tuple[int, int]:
    """Depth-first enumeration of all states; returns the count.

    With a visitor, each state is delivered exactly once (parents before
    children, branches in sequence order) and visitor exceptions abort the
    traversal.  Without one the counting kernel runs — compiled when built
    and the domain fits in one word, pure Python otherwise.  With
    ``count_ops`` returns (count, word operations) from the pure kernel's
    instrumented run.
    """
    n, k = sp.domain.n, sp.k
    if visitor is not None:
        dom = sp.domain

        def enter(mask: int, _added: int) -> None:
            visitor(State(dom, mask))

        return _kernels.traverse(n, k, sp.seqs, sp.pos, enter=enter)
    count, ops = _kernels.count_states(
        n, k, sp.seqs, sp.pos, count_ops=count_ops, force_pure=force_pure
    )
    if count_ops:
        return count, ops
    return count


def state_masks(sp: SequenceSpace, cap: int | None = MAX_EXPLICIT_STATES) -> list[int]:
    """All state masks in traversal order; CapacityError above ``cap``."""
    try:
        return _kernels.collect_states(sp.domain.n, sp.k, sp.seqs, sp.pos, cap=cap)
    except OverflowError:
        raise CapacityError(f"state count exceeds cap of {cap}") from None


def family(sp: SequenceSpace, cap: int | None = MAX_EXPLICIT_STATES) -> SetFamily:
    """The explicit family of all states (desk scale only)."""
    return SetFamily(sp.domain, state_masks(sp, cap=cap))


def fringes(
    sp: SequenceSpace, s: State | int
) -> tuple[frozenset[str], frozenset[str]]:
    """(inner, outer) fringe concepts of a member state.

    Outer fringe: the first excluded concept of each sequence.  Inner
    fringe: members x whose removal still indexes a state, tested with the
    coordinatewise-minimum update of the mex vector.
    """
    bits = _require_member(sp, s)
    v = mex(sp, bits)
    n = sp.domain.n
    dom = sp.domain
    outer = {dom.concepts[sp.seqs[i][v[i]]] for i in range(sp.k) if v[i] < n}
    inner = set()
    rest = bits
    while rest:
        low = rest & -rest
        x = low.bit_length() - 1
        rest ^= low
        w = [min(v[i], sp.pos[i][x]) for i in range(sp.k)]
        if _up_mask(sp, w) == bits & ~low:
            inner.add(dom.concepts[x])
    return frozenset(inner), frozenset(outer)


def project(sp: SequenceSpace, keep: Iterable[str]) -> SequenceSpace:
    """The space over a concept subset: states are intersections with it.

    Realized by restricting every sequence to the kept concepts; duplicate
    restricted sequences collapse, so the projection never has more
    sequences than the source.
    """
    keep_set = set(keep)
    if not keep_set:
        raise ValidationError("projection onto the empty concept set")
    for lab in keep_set:
        sp.domain.index(lab)
    sub = Domain(tuple(lab for lab in sp.domain.concepts if lab in keep_set))
    keep_mask = sp.domain.mask_of(keep_set)
    seqs = []
    seen = set()
    for s in sp.seqs:
        restricted = tuple(
            sub.index(sp.domain.concepts[c]) for c in s if (keep_mask >> c) & 1
        )
        if restricted not in seen:
            seen.add(restricted)
            seqs.append(restricted)
    return _build(sub, tuple(seqs))


def union_via_mex(sp: SequenceSpace, s: State | int, t: State | int) -> State:
    """Union of two member states through the index arithmetic."""
    sb = _require_member(sp, s)
    tb = _require_member(sp, t)
    vs, vt = mex(sp, sb), mex(sp, tb)
    return up(sp, tuple(max(a, b) for a, b in zip(vs, vt)))


# ---------------------------------------------------------------------------
# .seqs file format
#
#   domain: A,B,C
#   A,B,C
#   C,B,A
# ---------------------------------------------------------------------------


def parse_seqs(text: str) -> SequenceSpace:
    domain: Domain | None = None
    sequences: list[list[str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if domain is None:
            if not line.startswith("domain:"):
                raise ParseError("expected 'domain:' header", lineno)
            labels = [c for c in line[len("domain:") :].strip().split(",") if c]
            try:
                domain = Domain(tuple(labels))
            except ValidationError as exc:
                raise ParseError(str(exc), lineno) from None
            continue
        sequences.append(line.split(","))
    if domain is None:
        raise ParseError("missing 'domain:' header", 1)
    try:
        return new_sequence_space(domain, sequences)
    except ValidationError as exc:
        raise ParseError(str(exc), 1) from None


def serialize_seqs(sp: SequenceSpace) -> str:
    lines = ["domain: " + ",".join(sp.domain.concepts)]
    for i in range(sp.k):
        lines.append(",".join(sp.sequence_labels(i)))
    return "\n".join(lines) + "\n"
