"""Bases, chain covers, minimal sequence representations, and dimensions.

The base of a learning space is the unique minimal generating subfamily:
exactly the states with a single predecessor.  A minimum chain cover of the
base under inclusion (Dilworth, via bipartite matching) extends chain by
chain to learning sequences, giving a defining sequence set of minimum
cardinality — the convex dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Union

from .core import (
    Domain,
    SetFamily,
    State,
    ValidationError,
    is_learning_space,
)
from .quasi_ordinal import HasseDiagram, is_lower_set, lower_set_family, order_from_hasse
from .sequence_space import (
    SequenceSpace,
    _build,
    contains,
    family as seq_family,
    mex,
    new_sequence_space,
)

SpaceLike = Union[SequenceSpace, HasseDiagram, SetFamily]


@dataclass(frozen=True)
class BaseFamily:
    """The base sets of a learning space, ordered by inclusion."""

    domain: Domain
    sets: tuple[int, ...]  # masks, sorted by (size, bits)

    def __len__(self) -> int:
        return len(self.sets)

    def states(self) -> list[State]:
        return [State(self.domain, m) for m in self.sets]

    def masks(self) -> frozenset[int]:
        return frozenset(self.sets)


@dataclass(frozen=True)
class ChainCover:
    """A minimum set of inclusion chains jointly covering the base."""

    domain: Domain
    chains: tuple[tuple[int, ...], ...]  # each chain ascending by inclusion

    def __len__(self) -> int:
        return len(self.chains)


@dataclass(frozen=True)
class DimensionReport:
    n: int
    dim_b: int
    dim_c: int
    order_dim_is_2: bool

    def __post_init__(self):
        if not (self.dim_c <= self.dim_b and self.n <= self.dim_b or self.dim_b == 0):
            raise ValidationError("dimension inequalities violated")


def _space_view(space: SpaceLike) -> tuple[Domain, Callable[[int], bool]]:
    """(domain, membership test on masks) for any space representation."""
    if isinstance(space, SequenceSpace):
        return space.domain, lambda m: contains(space, m)
    if isinstance(space, HasseDiagram):
        return space.domain, lambda m: is_lower_set(space, State(space.domain, m))
    if isinstance(space, SetFamily):
        return space.domain, lambda m: m in space.masks
    raise ValidationError(f"not a space representation: {type(space).__name__}")


def base_of_family(fam: SetFamily) -> BaseFamily:
    """States with exactly one single-concept-removal member."""
    if not is_learning_space(fam):
        raise ValidationError("family is not a learning space")
    masks = fam.masks
    base = []
    for m in masks:
        preds = 0
        mm = m
        while mm:
            low = mm & -mm
            if (m & ~low) in masks:
                preds += 1
                if preds > 1:
                    break
            mm ^= low
        if preds == 1:
            base.append(m)
    return BaseFamily(fam.domain, tuple(sorted(base, key=lambda m: (m.bit_count(), m))))


def base_of_sequences(sp: SequenceSpace) -> BaseFamily:
    """Base of a sequence space, from the prefixes of its sequences.

    Only prefixes can be base sets.  A prefix ending in x is one exactly
    when x sits, in every other sequence, either at the same position or
    past that sequence's first excluded concept.  Scanning each sequence
    from its longest prefix down lets the mex vector update by
    coordinatewise minimum at each step.
    """
    n, k = sp.domain.n, sp.k
    base: set[int] = set()
    for i in range(k):
        v = list(mex(sp, sp.domain.full_mask))  # all n
        for m in range(n, 0, -1):
            x = sp.seqs[i][m - 1]
            is_base = True
            for j in range(k):
                if j == i:
                    continue
                pjx = sp.pos[j][x]
                if pjx != m - 1 and pjx <= v[j]:
                    is_base = False
                    break
            if is_base:
                base.add(sp.prefix_masks[i][m])
            # drop x: the prefix one shorter has mex = min(current, pos(x))
            for j in range(k):
                pjx = sp.pos[j][x]
                if pjx < v[j]:
                    v[j] = pjx
    return BaseFamily(sp.domain, tuple(sorted(base, key=lambda m: (m.bit_count(), m))))


def _base_of(space: SpaceLike) -> BaseFamily:
    if isinstance(space, SequenceSpace):
        return base_of_sequences(space)
    if isinstance(space, HasseDiagram):
        # one base set per concept: its strict down-set plus itself
        order = order_from_hasse(space)
        n = space.domain.n
        below = [0] * n
        for x in range(n):
            m = order.above[x]
            while m:
                y = (m & -m).bit_length() - 1
                below[y] |= 1 << x
                m &= m - 1
        sets = [below[x] | (1 << x) for x in range(n)]
        return BaseFamily(
            space.domain, tuple(sorted(sets, key=lambda m: (m.bit_count(), m)))
        )
    if isinstance(space, SetFamily):
        return base_of_family(space)
    raise ValidationError(f"not a space representation: {type(space).__name__}")


def _hopcroft_karp(n_left: int, n_right: int, adj: list[list[int]]) -> list[int]:
    """Maximum bipartite matching; returns match_left (right index or -1).

    Layered BFS phases with augmenting DFS, O(E sqrt(V)).
    """
    INF = float("inf")
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    dist = [0.0] * n_left

    def bfs() -> bool:
        queue = []
        for u in range(n_left):
            if match_l[u] == -1:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in adj[u]:
            w = match_r[v]
            if w == -1 or (dist[w] == dist[u] + 1 and dfs(w)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = INF
        return False

    while bfs():
        for u in range(n_left):
            if match_l[u] == -1:
                dfs(u)
    return match_l


def chain_cover(base: BaseFamily) -> ChainCover:
    """Minimum chain cover of the base under inclusion (Dilworth via matching).

    Left and right copies of every base set, an edge for each proper
    inclusion; each matched edge merges two chains, so m sets and a
    maximum matching of size t give m - t chains.
    """
    sets = base.sets
    m = len(sets)
    adj = [
        [j for j in range(m) if i != j and sets[i] & ~sets[j] == 0]
        for i in range(m)
    ]
    match_l = _hopcroft_karp(m, m, adj)
    is_successor = [False] * m
    for u in range(m):
        if match_l[u] != -1:
            is_successor[match_l[u]] = True
    chains = []
    for u in range(m):
        if not is_successor[u]:
            chain = [sets[u]]
            cur = u
            while match_l[cur] != -1:
                cur = match_l[cur]
                chain.append(sets[cur])
            chains.append(tuple(chain))
    chains.sort(key=lambda ch: (ch[0].bit_count(), ch[0]))
    return ChainCover(base.domain, tuple(chains))


def extend_chain_to_sequence(
    space: SpaceLike, chain: Iterable[State | int]
) -> tuple[str, ...]:
    """A learning sequence whose prefixes include every chain set.

    The chain must be a nested family of states; the empty set and the
    whole domain are appended implicitly.  Quasi-ordinal inputs use the
    linear-time reverse-postorder construction; anything else builds the
    sequence stage by stage, peeling each chain set down by accessibility
    and concatenating the concepts not already placed.
    """
    domain, member = _space_view(space)
    masks = []
    for s in chain:
        m = s.bits if isinstance(s, State) else s
        if not member(m):
            raise ValidationError("chain set is not a state of the space")
        masks.append(m)
    masks = sorted(set(masks) | {0, domain.full_mask}, key=lambda m: m.bit_count())
    for a, b in zip(masks, masks[1:]):
        if a & ~b:
            raise ValidationError("chain sets are not nested")

    if isinstance(space, HasseDiagram):
        return _chain_to_sequence_qos(space, masks)

    sigma: list[int] = []
    placed = 0
    for target in masks[1:]:
        tau = _peel_order(domain, member, target)
        for x in tau:
            if not (placed >> x) & 1:
                sigma.append(x)
                placed |= 1 << x
    return tuple(domain.concepts[x] for x in sigma)


def _peel_order(
    domain: Domain, member: Callable[[int], bool], target: int
) -> list[int]:
    """An accessibility ordering of ``target``: every prefix is a state.

    Peels one concept at a time, lowest domain index first among the
    removable ones, and returns the additions in forward order.
    """
    reversed_order = []
    cur = target
    while cur:
        mm = cur
        pick = -1
        while mm:
            low = mm & -mm
            if member(cur & ~low):
                pick = low.bit_length() - 1
                break
            mm ^= low
        if pick < 0:
            raise ValidationError("state has no removable concept; not accessible")
        reversed_order.append(pick)
        cur &= ~(1 << pick)
    reversed_order.reverse()
    return reversed_order


def _chain_to_sequence_qos(h: HasseDiagram, masks: list[int]) -> tuple[str, ...]:
    """Reverse postorder of a DFS seeded in descending smallest-chain-set size."""
    n = h.domain.n
    smallest = [h.domain.full_mask.bit_count()] * n
    for m in sorted(masks, key=lambda m: m.bit_count(), reverse=True):
        sz = m.bit_count()
        mm = m
        while mm:
            x = (mm & -mm).bit_length() - 1
            smallest[x] = sz
            mm &= mm - 1
    out = h.successors()
    seen = [False] * n
    postorder: list[int] = []

    def visit(u: int) -> None:
        seen[u] = True
        for v in out[u]:
            if not seen[v]:
                visit(v)
        postorder.append(u)

    for u in sorted(range(n), key=lambda u: (-smallest[u], u)):
        if not seen[u]:
            visit(u)
    postorder.reverse()
    return tuple(h.domain.concepts[u] for u in postorder)


def minimize(space: SpaceLike) -> tuple[SequenceSpace, int]:
    """A minimum defining sequence set: (sequence space, convex dimension).

    Base, then minimum chain cover, then one learning sequence per chain.
    The regenerated family equals the input family exactly.
    """
    domain, _ = _space_view(space)
    if isinstance(space, SetFamily):
        if not is_learning_space(space):
            raise ValidationError("family is not a learning space")
        uncovered = domain.full_mask & ~space.union_mask()
        if uncovered:
            labels = domain.labels_of(uncovered)
            raise ValidationError(
                f"concepts {labels} belong to no state; sequences cannot cover them"
            )
    base = _base_of(space)
    cover = chain_cover(base)
    words = [extend_chain_to_sequence(space, chain) for chain in cover.chains]
    if len(set(words)) != len(words):
        raise AssertionError("minimum cover chains produced duplicate sequences")
    if domain.n == 0:
        return _build(domain, ()), 0
    return new_sequence_space(domain, words), len(words)


def dimensions(space: SpaceLike) -> DimensionReport:
    """Isometric dimension n, base cardinality, and convex dimension."""
    domain, _ = _space_view(space)
    base = _base_of(space)
    dim_c = len(chain_cover(base))
    return DimensionReport(
        n=domain.n,
        dim_b=len(base),
        dim_c=dim_c,
        order_dim_is_2=dim_c == 2,
    )


def enumerate_basic_words(
    space: SpaceLike, limit: int | None = None
) -> tuple[list[tuple[str, ...]], bool]:
    """All learning sequences (permutations whose prefixes are all states).

    Brute force by depth-first extension, lexicographic in domain index;
    desk scale.  Returns (words, truncated): truncated is True when
    ``limit`` stopped the search early.
    """
    domain, member = _space_view(space)
    n = domain.n
    words: list[tuple[str, ...]] = []
    truncated = False
    prefix: list[int] = []

    def extend(mask: int) -> bool:
        if len(prefix) == n:
            if limit is not None and len(words) >= limit:
                return False
            words.append(tuple(domain.concepts[x] for x in prefix))
            return True
        for x in range(n):
            if not (mask >> x) & 1:
                child = mask | (1 << x)
                if member(child):
                    prefix.append(x)
                    if not extend(child):
                        return False
                    prefix.pop()
        return True

    if not extend(0):
        truncated = True
    return words, truncated


def is_join_of_two_hierarchies(
    space: SpaceLike,
) -> tuple[bool, dict[int, int] | None]:
    """Test whether the base splits into two disjoint-or-nested families.

    Builds the conflict graph joining base sets that are neither disjoint
    nor nested and 2-colors it; returns the coloring as a witness when it
    is bipartite.
    """
    base = _base_of(space)
    sets = base.sets
    m = len(sets)
    adj: list[list[int]] = [[] for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            inter = sets[i] & sets[j]
            if inter and inter != sets[i] and inter != sets[j]:
                adj[i].append(j)
                adj[j].append(i)
    color = [-1] * m
    for start in range(m):
        if color[start] != -1:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            u = queue.pop()
            for v in adj[u]:
                if color[v] == -1:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return False, None
    return True, {sets[i]: color[i] for i in range(m)}


def family_of(space: SpaceLike) -> SetFamily:
    """The explicit state family of any space representation (desk scale)."""
    if isinstance(space, SequenceSpace):
        return seq_family(space)
    if isinstance(space, HasseDiagram):
        return lower_set_family(space)
    if isinstance(space, SetFamily):
        return space
    raise ValidationError(f"not a space representation: {type(space).__name__}")
