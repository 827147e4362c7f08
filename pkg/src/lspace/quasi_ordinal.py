"""Quasi-ordinal spaces: lower-set families of partial orders.

A Hasse diagram of prerequisite coverings defines the space whose states are
the lower sets of the induced order.  Enumeration is by reverse search over
the predecessor tree (remove the member latest in a fixed topological
order), which visits each lower set exactly once with per-state work
proportional to the out-degree of the added concept.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .core import (
    CapacityError,
    Domain,
    MAX_EXPLICIT_STATES,
    ParseError,
    SetFamily,
    State,
    ValidationError,
)

Visitor = Callable[[int], None]


@dataclass(frozen=True)
class HasseDiagram:
    """Covering relation x -> y: concept x is a prerequisite covered by y.

    The constructor rejects self-loops, cycles, and transitive edges; use
    :func:`transitive_reduction` to sanitize an arbitrary DAG first.
    """

    domain: Domain
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        n = self.domain.n
        for x, y in self.edges:
            if x == y:
                raise ValidationError("self-loop in Hasse diagram")
            if not (0 <= x < n and 0 <= y < n):
                raise ValidationError("edge endpoint outside domain")
        above = _reachability(n, self.edges)
        for x in range(n):
            if (above[x] >> x) & 1:
                raise ValidationError("cycle in Hasse diagram")
        for x, y in self.edges:
            for z in range(n):
                if z != x and z != y and (above[x] >> z) & 1 and (above[z] >> y) & 1:
                    raise ValidationError(
                        f"transitive edge {self.domain.concepts[x]}->"
                        f"{self.domain.concepts[y]} (path via {self.domain.concepts[z]})"
                    )

    @classmethod
    def from_labels(
        cls, domain: Domain, pairs: Iterable[tuple[str, str]]
    ) -> "HasseDiagram":
        return cls(
            domain,
            frozenset((domain.index(x), domain.index(y)) for x, y in pairs),
        )

    def edge_labels(self) -> list[tuple[str, str]]:
        c = self.domain.concepts
        return sorted((c[x], c[y]) for x, y in self.edges)

    def successors(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.domain.n)]
        for x, y in self.edges:
            out[x].append(y)
        for lst in out:
            lst.sort()
        return out

    def predecessors(self) -> list[list[int]]:
        inc: list[list[int]] = [[] for _ in range(self.domain.n)]
        for x, y in self.edges:
            inc[y].append(x)
        for lst in inc:
            lst.sort()
        return inc


@dataclass(frozen=True)
class PartialOrder:
    """Strict order as per-concept masks: bit y of above[x] set iff x < y."""

    domain: Domain
    above: tuple[int, ...]

    def __post_init__(self):
        n = self.domain.n
        if len(self.above) != n:
            raise ValidationError("order table size mismatch")
        for x in range(n):
            if (self.above[x] >> x) & 1:
                raise ValidationError("order is not irreflexive")
            m = self.above[x]
            while m:
                y = (m & -m).bit_length() - 1
                if self.above[y] & ~self.above[x]:
                    raise ValidationError("order is not transitive")
                m &= m - 1

    def lt(self, x: str, y: str) -> bool:
        return (self.above[self.domain.index(x)] >> self.domain.index(y)) & 1 == 1


def _reachability(n: int, edges: frozenset[tuple[int, int]]) -> list[int]:
    """above[x] = mask of concepts reachable from x by one or more edges."""
    out: list[list[int]] = [[] for _ in range(n)]
    for x, y in edges:
        out[x].append(y)
    above = [0] * n
    seen = [False] * n

    def visit(u: int) -> None:
        seen[u] = True
        for v in out[u]:
            if not seen[v]:
                visit(v)
            above[u] |= above[v] | (1 << v)

    for u in range(n):
        if not seen[u]:
            visit(u)
    return above


def transitive_reduction(
    domain: Domain, pairs: Iterable[tuple[str, str]]
) -> HasseDiagram:
    """Build the Hasse diagram of the order generated by arbitrary DAG edges."""
    n = domain.n
    edges = frozenset(
        (domain.index(x), domain.index(y)) for x, y in pairs if x != y
    )
    above = _reachability(n, edges)
    for x in range(n):
        if (above[x] >> x) & 1:
            raise ValidationError("cycle in edge set")
    covers = set()
    for x in range(n):
        m = above[x]
        while m:
            y = (m & -m).bit_length() - 1
            m &= m - 1
            # x -> y is a cover unless some z sits strictly between.
            if not any(
                (above[x] >> z) & 1 and (above[z] >> y) & 1
                for z in range(n)
                if z != x and z != y
            ):
                covers.add((x, y))
    return HasseDiagram(domain, frozenset(covers))


def order_from_hasse(h: HasseDiagram) -> PartialOrder:
    return PartialOrder(h.domain, tuple(_reachability(h.domain.n, h.edges)))


def is_lower_set(h: HasseDiagram, s: State) -> bool:
    bits = s.bits
    for x, y in h.edges:
        if (bits >> y) & 1 and not (bits >> x) & 1:
            return False
    return True


def topological_order(h: HasseDiagram) -> tuple[str, ...]:
    """Concepts sorted by longest path from a minimal concept, ties by index."""
    n = h.domain.n
    inc = h.predecessors()
    depth = [-1] * n

    def d(u: int) -> int:
        if depth[u] < 0:
            depth[u] = max((d(v) + 1 for v in inc[u]), default=0)
        return depth[u]

    order = sorted(range(n), key=lambda u: (d(u), u))
    return tuple(h.domain.concepts[u] for u in order)


def _topo_positions(h: HasseDiagram) -> tuple[list[int], list[int]]:
    """(order, position) with order[r] = concept at rank r."""
    labels = topological_order(h)
    order = [h.domain.index(lab) for lab in labels]
    pos = [0] * h.domain.n
    for r, u in enumerate(order):
        pos[u] = r
    return order, pos


def enumerate_lower_sets(
    h: HasseDiagram,
    visitor: Visitor | None = None,
    count_edge_touches: bool = False,
) -> int | tuple[int, int]:
    """Visit every lower set of ``h`` exactly once; return the count.

    Reverse search over the predecessor tree: the predecessor of a nonempty
    lower set removes its member latest in the topological order, so the
    children of S are concepts later than the most recent addition whose
    prerequisites are all present.  A per-concept count of missing
    prerequisites makes each child test O(1); stepping into a child touches
    only the Hasse edges out of the added concept.

    The visitor receives states as int masks, parents before children,
    children in topological order of the added concept.  With
    ``count_edge_touches`` also returns the total number of edge touches.
    """
    n = h.domain.n
    _, pos = _topo_positions(h)
    out = h.successors()
    inc = h.predecessors()
    missing = [len(inc[u]) for u in range(n)]
    touches = 0

    if visitor is not None:
        visitor(0)
    count = 1
    # children of the empty set: minimal concepts, in topological order
    roots = sorted((u for u in range(n) if missing[u] == 0), key=lambda u: pos[u])

    def walk(mask: int, children: list[int]) -> None:
        nonlocal count, touches
        for idx, x in enumerate(children):
            child_mask = mask | (1 << x)
            enabled = []
            for y in out[x]:
                touches += 1
                missing[y] -= 1
                if missing[y] == 0:
                    enabled.append(y)
            count += 1
            if visitor is not None:
                visitor(child_mask)
            # survivors: children later than x in topo order, plus the
            # newly enabled successors of x (always later than x), merged
            # in topo-position order.
            survivors = children[idx + 1 :]
            if enabled:
                enabled.sort(key=lambda u: pos[u])
                merged = []
                a = b = 0
                while a < len(survivors) and b < len(enabled):
                    if pos[survivors[a]] < pos[enabled[b]]:
                        merged.append(survivors[a])
                        a += 1
                    else:
                        merged.append(enabled[b])
                        b += 1
                merged.extend(survivors[a:])
                merged.extend(enabled[b:])
            else:
                merged = survivors
            walk(child_mask, merged)
            for y in out[x]:
                touches += 1
                missing[y] += 1

    walk(0, roots)
    if count_edge_touches:
        return count, touches
    return count


def lower_set_family(h: HasseDiagram) -> SetFamily:
    masks: list[int] = []

    def collect(m: int) -> None:
        masks.append(m)
        if len(masks) > MAX_EXPLICIT_STATES:
            raise CapacityError("lower-set family above desk scale")

    enumerate_lower_sets(h, collect)
    return SetFamily(h.domain, masks)


def fringe_qos(h: HasseDiagram, s: State) -> tuple[frozenset[str], frozenset[str]]:
    """(inner, outer) fringe of a lower set, in one pass over the edges.

    Start from all concepts as candidates; an edge x->y removes y when x is
    missing (y is not minimal-outside nor maximal-inside) and removes x when
    y is present (x is not maximal-inside nor minimal-outside).
    """
    if not is_lower_set(h, s):
        raise ValidationError("state is not a lower set of the diagram")
    bits = s.bits
    candidates = h.domain.full_mask
    for x, y in h.edges:
        if not (bits >> x) & 1:
            candidates &= ~(1 << y)
        if (bits >> y) & 1:
            candidates &= ~(1 << x)
    inner = candidates & bits
    outer = candidates & ~bits & h.domain.full_mask
    return (
        frozenset(h.domain.labels_of(inner)),
        frozenset(h.domain.labels_of(outer)),
    )


def restrict(h: HasseDiagram, keep: Iterable[str]) -> HasseDiagram:
    """Hasse diagram of the induced order on a subset of the concepts."""
    keep_set = set(keep)
    for lab in keep_set:
        h.domain.index(lab)
    sub = Domain(tuple(lab for lab in h.domain.concepts if lab in keep_set))
    order = order_from_hasse(h)
    pairs = [
        (x, y)
        for x in sub.concepts
        for y in sub.concepts
        if order.lt(x, y)
    ]
    return transitive_reduction(sub, pairs)


def concept_distance(order: PartialOrder, x: str, y: str) -> int:
    """Number of concepts (besides one of x,y) whose comparisons to x and y differ."""
    dom = order.domain
    xi, yi = dom.index(x), dom.index(y)
    delta = (1 << xi) | (1 << yi)
    for z in range(dom.n):
        zu = order.above[z]
        if ((zu >> xi) & 1) != ((zu >> yi) & 1):
            delta |= 1 << z
        if ((order.above[xi] >> z) & 1) != ((order.above[yi] >> z) & 1):
            delta |= 1 << z
    return delta.bit_count() - 1


# ---------------------------------------------------------------------------
# .hasse file format
#
#   domain: A,B,C
#   edge A B
#   edge A C
# ---------------------------------------------------------------------------


def parse_hasse(text: str) -> HasseDiagram:
    domain: Domain | None = None
    pairs: list[tuple[str, str]] = []
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
        parts = line.split()
        if len(parts) != 3 or parts[0] != "edge":
            raise ParseError("expected 'edge X Y'", lineno)
        pairs.append((parts[1], parts[2]))
    if domain is None:
        raise ParseError("missing 'domain:' header", 1)
    try:
        return HasseDiagram.from_labels(domain, pairs)
    except ValidationError as exc:
        raise ParseError(str(exc), 1) from None


def serialize_hasse(h: HasseDiagram) -> str:
    lines = ["domain: " + ",".join(h.domain.concepts)]
    for x, y in h.edge_labels():
        lines.append(f"edge {x} {y}")
    return "\n".join(lines) + "\n"
