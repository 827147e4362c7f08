"""Fibers of projections, upper-subfamily recognition, joins, and the
semilattice algebra of learning spaces.

The algebraic side works over explicit finite semilattice tables: a
commutative idempotent monoid given as an m x m index table.  Irreducibles
and primes characterize quasi-ordinal representability; singular objects
and the sets N(x) of singulars an object fails to divide give the minimal
set representation, which is an antimatroid exactly when the semilattice
has separated equalizers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import (
    Domain,
    ParseError,
    SetFamily,
    State,
    ValidationError,
    is_learning_space,
)
from .base_dimension import SpaceLike, family_of, minimize
from .quasi_ordinal import HasseDiagram, transitive_reduction
from .sequence_space import SequenceSpace, new_sequence_space


# ---------------------------------------------------------------------------
# Fibers and upper subfamilies
# ---------------------------------------------------------------------------


def fiber(space: SpaceLike, know: State, unknow: State) -> SetFamily:
    """States containing every concept of K and none of U."""
    if know.bits & unknow.bits:
        raise ValidationError("know and unknow sets overlap")
    fam = family_of(space)
    k, u = know.bits, unknow.bits
    return SetFamily(
        fam.domain, (m for m in fam.masks if m & k == k and m & u == 0)
    )


@dataclass(frozen=True)
class GeneratorFamily:
    """Generating sets whose union closure defines a family."""

    domain: Domain
    sets: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.sets)) != len(self.sets):
            raise ValidationError("duplicate generator sets")

    @classmethod
    def from_states(cls, domain: Domain, states: Iterable[State]) -> "GeneratorFamily":
        return cls(domain, tuple(dict.fromkeys(s.bits for s in states)))


def closure_membership(gen: GeneratorFamily, s: State | int) -> bool:
    """True iff ``s`` equals the union of the generators it contains."""
    bits = s.bits if isinstance(s, State) else s
    union = 0
    for t in gen.sets:
        if t & ~bits == 0:
            union |= t
    return union == bits


def is_safe(gen: GeneratorFamily, s: State | int) -> bool:
    """True iff unioning ``s`` with any generator (or nothing) stays in the family.

    Family members check their own membership through the empty union; a
    candidate being *added* to a containing space is judged by
    :func:`_extension_safe` instead.
    """
    bits = s.bits if isinstance(s, State) else s
    if not closure_membership(gen, bits):
        return False
    return all(closure_membership(gen, bits | t) for t in gen.sets)


def _extension_safe(gen: GeneratorFamily, bits: int) -> bool:
    """Safety for sets outside the family: all generator unions land inside."""
    return all(closure_membership(gen, bits | t) for t in gen.sets)


def recognize_upper_subfamily(gen: GeneratorFamily) -> SequenceSpace | None:
    """If the generated family is an upper subfamily of some learning space,
    build a minimal sequence representation of one; otherwise None.

    Greedy reachability: each generator must be buildable one concept at a
    time through extension-safe sets (candidates tried in domain order);
    safe sets stay safe under union, so the greedy never dead-ends on a
    reachable target.  The unions of the greedy prefixes form a containing
    learning space, which is then minimized.
    """
    dom = gen.domain
    prefix_sets: set[int] = {0}
    for target in gen.sets:
        cur = 0
        while cur != target:
            rest = target & ~cur
            step = -1
            while rest:
                low = rest & -rest
                if _extension_safe(gen, cur | low):
                    step = low.bit_length() - 1
                    break
                rest ^= low
            if step < 0:
                return None
            cur |= 1 << step
            prefix_sets.add(cur)
    # union closure of the safe prefixes is a learning space containing gen
    closure: set[int] = {0}
    frontier = list(prefix_sets)
    for m in frontier:
        closure |= {m | c for c in closure}
    union_all = 0
    for m in closure:
        union_all |= m
    sub = Domain(dom.labels_of(union_all))
    fam = SetFamily(sub, (_project_mask(dom, sub, m) for m in closure))
    sp, _ = minimize(fam)
    return sp


def _project_mask(src: Domain, dst: Domain, mask: int) -> int:
    return dst.mask_of(lab for lab in src.labels_of(mask))


def join(a: SequenceSpace, b: SequenceSpace) -> SequenceSpace:
    """The space of pairwise unions of states, as the combined sequence set."""
    if a.domain.concepts != b.domain.concepts:
        raise ValidationError("join requires identical domains")
    words = a.all_sequence_labels() + b.all_sequence_labels()
    unique = list(dict.fromkeys(words))
    return new_sequence_space(a.domain, unique)


# ---------------------------------------------------------------------------
# Finite semilattices as explicit tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SemilatticeTable:
    """m objects, an m x m product table, and the identity's index.

    Commutativity, associativity, idempotence, and the identity law are
    verified exhaustively at construction.
    """

    op: tuple[tuple[int, ...], ...]
    identity: int

    def __post_init__(self):
        m = len(self.op)
        for row in self.op:
            if len(row) != m or any(not 0 <= v < m for v in row):
                raise ValidationError("malformed product table")
        if not 0 <= self.identity < m:
            raise ValidationError("identity index out of range")
        e = self.identity
        for x in range(m):
            if self.op[e][x] != x or self.op[x][e] != x:
                raise ValidationError("identity law fails")
            if self.op[x][x] != x:
                raise ValidationError("idempotence fails")
            for y in range(x + 1, m):
                if self.op[x][y] != self.op[y][x]:
                    raise ValidationError("commutativity fails")
        for x in range(m):
            for y in range(m):
                for z in range(m):
                    if self.op[self.op[x][y]][z] != self.op[x][self.op[y][z]]:
                        raise ValidationError("associativity fails")

    @property
    def m(self) -> int:
        return len(self.op)

    def mul(self, x: int, y: int) -> int:
        return self.op[x][y]

    def divides(self, x: int, y: int) -> bool:
        """x | y: some z has xz = y; in a semilattice, equivalent to xy = y."""
        return self.op[x][y] == y


def union_semilattice(fam: SetFamily) -> tuple[SemilatticeTable, list[int]]:
    """The union operation of a union-closed family containing the empty set.

    Returns the table and the state masks in object-index order (sorted by
    size then bits, so the identity is object 0).
    """
    masks = fam.sorted_masks()
    if 0 not in fam.masks:
        raise ValidationError("family lacks the empty set; no identity")
    index = {m: i for i, m in enumerate(masks)}
    op = []
    for a in masks:
        row = []
        for b in masks:
            u = a | b
            if u not in index:
                raise ValidationError("family is not union-closed")
            row.append(index[u])
        op.append(tuple(row))
    return SemilatticeTable(tuple(op), index[0]), masks


@dataclass(frozen=True)
class ElementClasses:
    """Irreducibles, primes, and singulars of a semilattice.

    The identity is excluded from irreducibles and primes (it is the empty
    product); singulars are any objects with a unique successor, identity
    included.  ``successor`` maps each singular to its successor.
    """

    irreducibles: tuple[int, ...]
    primes: tuple[int, ...]
    singulars: tuple[int, ...]
    successor: dict[int, int]


def classify_elements(t: SemilatticeTable) -> ElementClasses:
    m = t.m
    e = t.identity
    irreducibles = []
    for x in range(m):
        if x == e:
            continue
        if all(
            t.mul(y, z) != x or y == x or z == x for y in range(m) for z in range(m)
        ):
            irreducibles.append(x)
    primes = []
    for x in range(m):
        if x == e:
            continue
        if all(
            not t.divides(x, t.mul(y, z)) or t.divides(x, y) or t.divides(x, z)
            for y in range(m)
            for z in range(m)
        ):
            primes.append(x)
    singulars = []
    successor: dict[int, int] = {}
    for s in range(m):
        above = [x for x in range(m) if x != s and t.divides(s, x)]
        # a successor t: s|t and every proper multiple of s is a multiple of t
        succs = [
            u for u in above if all(t.divides(u, x) for x in above)
        ]
        if len(succs) == 1:
            singulars.append(s)
            successor[s] = succs[0]
    return ElementClasses(
        tuple(irreducibles), tuple(primes), tuple(singulars), successor
    )


def has_separated_equalizers(
    t: SemilatticeTable,
) -> tuple[bool, tuple[int, int] | None]:
    """Check the separated-equalizers condition; witness the first failure.

    A pair x|y is equalizing when some a, b have xa != xb but ya = yb with
    the common value distinct from both; separation demands a third object
    strictly between x and y.
    """
    m = t.m
    for x in range(m):
        for y in range(m):
            if x == y or not t.divides(x, y):
                continue
            if _is_equalizing(t, x, y) and not any(
                z != x and z != y and t.divides(x, z) and t.divides(z, y)
                for z in range(m)
            ):
                return False, (x, y)
    return True, None


def _is_equalizing(t: SemilatticeTable, x: int, y: int) -> bool:
    m = t.m
    for a in range(m):
        xa = t.mul(x, a)
        ya = t.mul(y, a)
        if xa == ya:
            continue
        for b in range(m):
            xb = t.mul(x, b)
            if xb != xa and xb != ya and t.mul(y, b) == ya:
                return True
    return False


@dataclass(frozen=True)
class AntimatroidRepresentation:
    """Result of the N(x) construction.

    ``family`` always holds the N-sets (over a domain of singular-object
    labels) and ``object_sets`` the map object -> N(x) mask.  ``ok`` says
    whether the family is an antimatroid, which happens exactly when the
    semilattice has separated equalizers; ``witness`` carries the failing
    pair otherwise.
    """

    family: SetFamily
    object_sets: dict[int, int]
    ok: bool
    witness: tuple[int, int] | None


def to_antimatroid(t: SemilatticeTable) -> AntimatroidRepresentation:
    """Represent the semilattice by the sets N(x) of undivided singulars."""
    classes = classify_elements(t)
    singulars = classes.singulars
    dom = Domain(tuple(f"s{idx}" for idx in singulars))
    bit = {s: i for i, s in enumerate(singulars)}
    object_sets: dict[int, int] = {}
    for x in range(t.m):
        mask = 0
        for s in singulars:
            if not t.divides(x, s):
                mask |= 1 << bit[s]
        object_sets[x] = mask
    if len(set(object_sets.values())) != t.m:
        raise AssertionError("N(x) representation failed injectivity")
    for x in range(t.m):
        for y in range(t.m):
            if object_sets[t.mul(x, y)] != object_sets[x] | object_sets[y]:
                raise AssertionError("N(xy) != N(x) | N(y)")
    fam = SetFamily(dom, object_sets.values())
    ok, witness = has_separated_equalizers(t)
    if ok != is_learning_space(fam):
        raise AssertionError("separated equalizers disagree with the N-family axioms")
    return AntimatroidRepresentation(fam, object_sets, ok, witness)


@dataclass(frozen=True)
class QuasiOrdinalRepresentation:
    """Hasse diagram of the prime divisibility order (when every irreducible
    is prime) or a witness irreducible that is not prime."""

    diagram: HasseDiagram | None
    object_sets: dict[int, int] | None
    witness: int | None

    @property
    def ok(self) -> bool:
        return self.diagram is not None


def to_quasi_ordinal(t: SemilatticeTable) -> QuasiOrdinalRepresentation:
    """Represent the semilattice as lower sets of a partial order on primes."""
    classes = classify_elements(t)
    primes = set(classes.primes)
    for x in classes.irreducibles:
        if x not in primes:
            return QuasiOrdinalRepresentation(None, None, x)
    plist = classes.primes
    dom = Domain(tuple(f"p{p}" for p in plist))
    bit = {p: i for i, p in enumerate(plist)}
    object_sets = {}
    for x in range(t.m):
        mask = 0
        for p in plist:
            if t.divides(p, x):
                mask |= 1 << bit[p]
        object_sets[x] = mask
    pairs = [
        (f"p{p}", f"p{q}")
        for p in plist
        for q in plist
        if p != q and t.divides(p, q)
    ]
    diagram = transitive_reduction(dom, pairs)
    if len(set(object_sets.values())) != t.m:
        raise AssertionError("prime-set representation failed injectivity")
    return QuasiOrdinalRepresentation(diagram, object_sets, None)


# ---------------------------------------------------------------------------
# .semilattice file format
#
#   objects: 3
#   identity: 0
#   0 1 2
#   1 1 2
#   2 2 2
# ---------------------------------------------------------------------------


def parse_semilattice(text: str) -> SemilatticeTable:
    m: int | None = None
    identity: int | None = None
    rows: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if m is None:
            if not line.startswith("objects:"):
                raise ParseError("expected 'objects:' header", lineno)
            m = int(line[len("objects:") :].strip())
            continue
        if identity is None:
            if not line.startswith("identity:"):
                raise ParseError("expected 'identity:' header", lineno)
            identity = int(line[len("identity:") :].strip())
            continue
        try:
            row = tuple(int(v) for v in line.split())
        except ValueError:
            raise ParseError("expected a row of integers", lineno) from None
        if len(row) != m:
            raise ParseError(f"expected {m} entries per row", lineno)
        rows.append(row)
    if m is None or identity is None or len(rows) != m:
        raise ParseError("incomplete semilattice table", 1)
    try:
        return SemilatticeTable(tuple(rows), identity)
    except ValidationError as exc:
        raise ParseError(str(exc), 1) from None


def serialize_semilattice(t: SemilatticeTable) -> str:
    lines = [f"objects: {t.m}", f"identity: {t.identity}"]
    for row in t.op:
        lines.append(" ".join(str(v) for v in row))
    return "\n".join(lines) + "\n"
