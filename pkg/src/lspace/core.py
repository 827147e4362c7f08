"""Domains, knowledge states, and explicit state families.

A state is a set of concepts over a fixed domain, stored as a bit vector
(one bit per concept, in domain order).  Explicit families of states are a
desk-scale representation used for validation and as the oracle side of
larger algorithms; they are capped at ``MAX_EXPLICIT_STATES`` members.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

MAX_EXPLICIT_STATES = 1 << 24

WORD_BITS = 64
_WORD_MASK = (1 << WORD_BITS) - 1


class LspaceError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(LspaceError):
    """A structure or argument violates a documented invariant."""


class ParseError(LspaceError):
    """A file could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CapacityError(LspaceError):
    """An explicit family would exceed the desk-scale capacity limit."""


@dataclass(frozen=True)
class Domain:
    """An ordered set of distinct concept labels.

    The label's position in ``concepts`` is its identity everywhere else in
    the package: bit i of a state refers to ``concepts[i]``.
    """

    concepts: tuple[str, ...]

    def __post_init__(self):
        if not isinstance(self.concepts, tuple):
            object.__setattr__(self, "concepts", tuple(self.concepts))
        seen = set()
        for c in self.concepts:
            if not c:
                raise ValidationError("concept labels must be non-empty")
            if c in seen:
                raise ValidationError(f"duplicate concept label {c!r}")
            seen.add(c)
        object.__setattr__(self, "_index", {c: i for i, c in enumerate(self.concepts)})

    @property
    def n(self) -> int:
        return len(self.concepts)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValidationError(f"unknown concept {label!r}") from None

    def mask_of(self, labels: Iterable[str]) -> int:
        m = 0
        for lab in labels:
            m |= 1 << self.index(lab)
        return m

    def labels_of(self, mask: int) -> tuple[str, ...]:
        return tuple(c for i, c in enumerate(self.concepts) if (mask >> i) & 1)

    def state(self, labels: Iterable[str]) -> "State":
        return State(self, self.mask_of(labels))

    def full_state(self) -> "State":
        return State(self, self.full_mask)

    def empty_state(self) -> "State":
        return State(self, 0)


@dataclass(frozen=True)
class State:
    """A knowledge state: a subset of the domain's concepts as a bit vector."""

    domain: Domain
    bits: int

    def __post_init__(self):
        if not 0 <= self.bits <= self.domain.full_mask:
            raise ValidationError("state bits out of range for domain")

    def labels(self) -> tuple[str, ...]:
        return self.domain.labels_of(self.bits)

    def __contains__(self, label: str) -> bool:
        return (self.bits >> self.domain.index(label)) & 1 == 1

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __or__(self, other: "State") -> "State":
        _check_same_domain(self.domain, other.domain)
        return State(self.domain, self.bits | other.bits)

    def __and__(self, other: "State") -> "State":
        _check_same_domain(self.domain, other.domain)
        return State(self.domain, self.bits & other.bits)

    def with_concept(self, label: str) -> "State":
        return State(self.domain, self.bits | (1 << self.domain.index(label)))

    def without_concept(self, label: str) -> "State":
        return State(self.domain, self.bits & ~(1 << self.domain.index(label)))

    def words(self) -> tuple[int, ...]:
        """The bit vector as little-endian 64-bit words (word 0 holds bits 0..63)."""
        return mask_to_words(self.bits, self.domain.n)

    def __str__(self) -> str:
        return format_state_line(self)


def mask_to_words(mask: int, n: int) -> tuple[int, ...]:
    nwords = max(1, (n + WORD_BITS - 1) // WORD_BITS)
    return tuple((mask >> (WORD_BITS * w)) & _WORD_MASK for w in range(nwords))


def words_to_mask(words: Iterable[int]) -> int:
    mask = 0
    for w, word in enumerate(words):
        mask |= (word & _WORD_MASK) << (WORD_BITS * w)
    return mask


def _check_same_domain(a: Domain, b: Domain) -> None:
    if a.concepts != b.concepts:
        raise ValidationError("operands belong to different domains")


class SetFamily:
    """A deduplicated collection of states over one domain."""

    __slots__ = ("domain", "_masks")

    def __init__(self, domain: Domain, masks: Iterable[int]):
        self.domain = domain
        unique = set()
        full = domain.full_mask
        for m in masks:
            if not 0 <= m <= full:
                raise ValidationError("state bits out of range for domain")
            unique.add(m)
            if len(unique) > MAX_EXPLICIT_STATES:
                raise CapacityError(
                    f"explicit family exceeds {MAX_EXPLICIT_STATES} states"
                )
        self._masks = frozenset(unique)

    @classmethod
    def from_states(cls, domain: Domain, states: Iterable[State]) -> "SetFamily":
        masks = []
        for s in states:
            _check_same_domain(domain, s.domain)
            masks.append(s.bits)
        return cls(domain, masks)

    @classmethod
    def from_labels(cls, domain: Domain, label_sets: Iterable[Iterable[str]]) -> "SetFamily":
        return cls(domain, (domain.mask_of(ls) for ls in label_sets))

    @property
    def masks(self) -> frozenset[int]:
        return self._masks

    def sorted_masks(self) -> list[int]:
        """Canonical order: by size, then by bit pattern."""
        return sorted(self._masks, key=lambda m: (m.bit_count(), m))

    def states(self) -> Iterator[State]:
        for m in self.sorted_masks():
            yield State(self.domain, m)

    def __len__(self) -> int:
        return len(self._masks)

    def __contains__(self, s) -> bool:
        if isinstance(s, State):
            return s.bits in self._masks
        return s in self._masks

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SetFamily)
            and self.domain.concepts == other.domain.concepts
            and self._masks == other._masks
        )

    def __hash__(self) -> int:
        return hash((self.domain.concepts, self._masks))

    def union_mask(self) -> int:
        u = 0
        for m in self._masks:
            u |= m
        return u

    def with_mask(self, mask: int) -> "SetFamily":
        return SetFamily(self.domain, self._masks | {mask})

    def without_mask(self, mask: int) -> "SetFamily":
        return SetFamily(self.domain, self._masks - {mask})


def powerset_family(domain: Domain) -> SetFamily:
    if domain.n > 24:
        raise CapacityError("powerset family above desk scale")
    return SetFamily(domain, range(1 << domain.n))


def is_accessible(family: SetFamily) -> bool:
    """True iff every nonempty state has a one-concept-smaller state in the family.

    Iterating this condition downward reaches the empty set, so for nonempty
    families it also forces the empty state to be a member.
    """
    masks = family.masks
    for m in masks:
        if m == 0:
            continue
        mm = m
        ok = False
        while mm:
            low = mm & -mm
            if (m & ~low) in masks:
                ok = True
                break
            mm ^= low
        if not ok:
            return False
    return True


def is_union_closed(family: SetFamily) -> bool:
    masks = family.masks
    lst = list(masks)
    for i, a in enumerate(lst):
        for b in lst[i + 1 :]:
            if (a | b) not in masks:
                return False
    return True


def is_learning_space(family: SetFamily) -> bool:
    return 0 in family.masks and is_accessible(family) and is_union_closed(family)


def state_fringes_bruteforce(
    family: SetFamily, s: State
) -> tuple[frozenset[str], frozenset[str]]:
    """(inner, outer) fringe concepts of ``s``, by trying all single-bit edits."""
    if s.bits not in family.masks:
        raise ValidationError("state is not a member of the family")
    inner = []
    outer = []
    for i, label in enumerate(family.domain.concepts):
        bit = 1 << i
        if s.bits & bit:
            if (s.bits & ~bit) in family.masks:
                inner.append(label)
        elif (s.bits | bit) in family.masks:
            outer.append(label)
    return frozenset(inner), frozenset(outer)


# ---------------------------------------------------------------------------
# .states file format
#
#   # comment
#   domain: A,B,C
#   {}
#   A
#   A,B
#
# One state per line, concepts comma-separated without spaces; `{}` is the
# empty state.  The first non-comment line must be the domain header.
# ---------------------------------------------------------------------------


def format_state_line(s: State) -> str:
    labels = s.labels()
    return ",".join(labels) if labels else "{}"


def parse_states(text: str) -> SetFamily:
    domain: Domain | None = None
    masks: list[int] = []
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
        if line == "{}":
            masks.append(0)
            continue
        try:
            masks.append(domain.mask_of(line.split(",")))
        except ValidationError as exc:
            raise ParseError(str(exc), lineno) from None
    if domain is None:
        raise ParseError("missing 'domain:' header", 1)
    return SetFamily(domain, masks)


def serialize_states(family: SetFamily) -> str:
    lines = ["domain: " + ",".join(family.domain.concepts)]
    for s in family.states():
        lines.append(format_state_line(s))
    return "\n".join(lines) + "\n"


PriorFunction = Callable[[State], float]
