"""Fringes of a learning space itself, and single-state add/remove edits.

The inner fringe holds the states whose removal leaves a learning space,
the outer fringe the non-states whose insertion does.  Both computations
enumerate the space, so their cost is proportional to the state count;
edits re-minimize the edited family into a fresh sequence representation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import SetFamily, State, ValidationError
from .base_dimension import SpaceLike, _base_of, family_of, minimize
from .sequence_space import SequenceSpace


@dataclass(frozen=True)
class SpaceFringe:
    removable: SetFamily
    addable: SetFamily


def space_inner_fringe(space: SpaceLike) -> SetFamily:
    """States removable one at a time: base members short of the top whose
    single-concept extensions are all outside the base."""
    base = _base_of(space)
    base_masks = base.masks()
    fam = family_of(space)
    top = fam.union_mask()
    removable = []
    for m in base.sets:
        if m == top:
            continue
        missing = fam.domain.full_mask & ~m
        ok = True
        while missing:
            low = missing & -missing
            if (m | low) in base_masks:
                ok = False
                break
            missing ^= low
        if ok:
            removable.append(m)
    return SetFamily(fam.domain, removable)


def space_outer_fringe(space: SpaceLike) -> SetFamily:
    """Non-states addable one at a time.

    For a state S, the sets S+x that can join the family are those with x
    in every outer fringe of the states S+y, excluding x that already give
    states; the empty intersection (S at the top) admits any concept
    outside S.
    """
    fam = family_of(space)
    masks = fam.masks
    full = fam.domain.full_mask
    outer_of: dict[int, int] = {}
    for m in masks:
        out = 0
        missing = full & ~m
        while missing:
            low = missing & -missing
            if (m | low) in masks:
                out |= low
            missing ^= low
        outer_of[m] = out
    addable = set()
    for m in masks:
        inter = full
        out = outer_of[m]
        om = out
        while om:
            low = om & -om
            inter &= outer_of[m | low]
            om ^= low
        candidates = inter & ~out & ~m
        while candidates:
            low = candidates & -candidates
            addable.add(m | low)
            candidates ^= low
    return SetFamily(fam.domain, addable)


def space_fringe(space: SpaceLike) -> SpaceFringe:
    return SpaceFringe(space_inner_fringe(space), space_outer_fringe(space))


def remove_state(space: SpaceLike, s: State) -> SequenceSpace:
    """Sequence representation of the family without ``s``.

    Raises naming the violated removability condition: membership, base
    membership, not being the top state, or a base extension.
    """
    fam = family_of(space)
    if s.bits not in fam.masks:
        raise ValidationError("state is not a member of the space")
    if s.bits == fam.union_mask():
        raise ValidationError("state is the union of the space; not removable")
    base = _base_of(space)
    base_masks = base.masks()
    if s.bits not in base_masks:
        raise ValidationError("state is not in the base; removal breaks union closure")
    missing = fam.domain.full_mask & ~s.bits
    while missing:
        low = missing & -missing
        if (s.bits | low) in base_masks:
            lab = fam.domain.labels_of(low)[0]
            raise ValidationError(
                f"base extension with {lab!r} exists; removal breaks accessibility"
            )
        missing ^= low
    sp, _ = minimize(fam.without_mask(s.bits))
    return sp


def add_state(space: SpaceLike, s: State) -> SequenceSpace:
    """Sequence representation of the family extended with ``s``."""
    fam = family_of(space)
    if s.bits in fam.masks:
        raise ValidationError("set is already a state of the space")
    if s.bits not in space_outer_fringe(space).masks:
        raise ValidationError("set is not addable; it would break the space axioms")
    sp, _ = minimize(fam.with_mask(s.bits))
    return sp
