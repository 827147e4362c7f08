import random

import pytest

from lspace import (
    Domain,
    ValidationError,
    add_state,
    family,
    is_learning_space,
    new_sequence_space,
    powerset_family,
    remove_state,
    space_inner_fringe,
    space_outer_fringe,
)

from oracles import brute_addable, brute_removable, random_sequence_space


class TestInnerFringe:
    def test_abc_removable_states(self, abc_space, abc_family, abc_domain):
        removable = space_inner_fringe(abc_space)
        expect = brute_removable(set(abc_family.masks), abc_domain.n)
        assert removable.masks == expect
        for m in removable.masks:
            assert is_learning_space(abc_family.without_mask(m))

    def test_powerset_of_one_has_nothing_removable(self):
        dom = Domain(("x",))
        assert len(space_inner_fringe(powerset_family(dom))) == 0

    def test_chain_space_has_nothing_removable(self):
        dom = Domain(("a", "b", "c"))
        sp = new_sequence_space(dom, [dom.concepts])
        assert len(space_inner_fringe(sp)) == 0

    def test_matches_exhaustive_oracle_randomized(self):
        rng = random.Random(83)
        for _ in range(40):
            dom, seqs = random_sequence_space(rng, max_n=8, max_k=3)
            sp = new_sequence_space(dom, seqs)
            fam = family(sp)
            assert space_inner_fringe(sp).masks == brute_removable(
                set(fam.masks), dom.n
            )


class TestOuterFringe:
    def test_abc_addable_includes_missing_singleton(self, abc_space, abc_domain):
        addable = space_outer_fringe(abc_space)
        assert abc_domain.mask_of(["B"]) in addable.masks

    def test_powerset_has_nothing_addable(self):
        dom = Domain(("a", "b", "c"))
        assert len(space_outer_fringe(powerset_family(dom))) == 0

    def test_matches_exhaustive_oracle_randomized(self):
        rng = random.Random(89)
        for _ in range(40):
            dom, seqs = random_sequence_space(rng, max_n=8, max_k=3)
            sp = new_sequence_space(dom, seqs)
            fam = family(sp)
            assert space_outer_fringe(sp).masks == brute_addable(
                set(fam.masks), dom.n
            )


class TestRemoveState:
    def test_removal_shrinks_family_by_one(self, abc_space, abc_family):
        removable = space_inner_fringe(abc_space)
        for s in removable.states():
            sp2 = remove_state(abc_space, s)
            assert family(sp2).masks == abc_family.masks - {s.bits}

    def test_cannot_remove_top(self, abc_space, abc_domain):
        with pytest.raises(ValidationError, match="union of the space"):
            remove_state(abc_space, abc_domain.full_state())

    def test_cannot_remove_non_base_state(self, abc_space, abc_domain):
        with pytest.raises(ValidationError, match="base"):
            remove_state(abc_space, abc_domain.state(["A", "C"]))

    def test_cannot_remove_non_member(self, abc_space, abc_domain):
        with pytest.raises(ValidationError, match="member"):
            remove_state(abc_space, abc_domain.state(["B"]))

    def test_base_extension_blocks_removal(self, order8):
        # {A} is a base set of the eight-concept space, but {A,C} is too
        with pytest.raises(ValidationError, match="accessibility"):
            remove_state(order8, order8.domain.state(["A"]))


class TestAddState:
    def test_add_missing_singleton_restores_powerset(self, abc_space, abc_domain):
        sp2 = add_state(abc_space, abc_domain.state(["B"]))
        assert family(sp2).masks == set(range(8))

    def test_add_then_remove_roundtrip(self, abc_space, abc_family, abc_domain):
        b = abc_domain.state(["B"])
        sp2 = add_state(abc_space, b)
        sp3 = remove_state(sp2, b)
        assert family(sp3).masks == abc_family.masks

    def test_remove_then_add_roundtrip(self, abc_space, abc_family):
        removable = space_inner_fringe(abc_space)
        for s in removable.states():
            sp2 = remove_state(abc_space, s)
            sp3 = add_state(sp2, s)
            assert family(sp3).masks == abc_family.masks

    def test_cannot_add_existing_state(self, abc_space, abc_domain):
        with pytest.raises(ValidationError, match="already"):
            add_state(abc_space, abc_domain.state(["A", "C"]))

    def test_cannot_add_non_addable_set(self):
        dom = Domain(("a", "b", "c"))
        sp = new_sequence_space(dom, [dom.concepts])
        with pytest.raises(ValidationError, match="not addable"):
            add_state(sp, dom.state(["c"]))

    def test_new_base_formula_cross_check(self):
        # after inserting T, the base is T itself plus the old base members
        # that are not one-concept extensions of T; the base is recomputed
        # from scratch, this pins the closed form against it
        from lspace import base_of_family

        rng = random.Random(3)
        checked = 0
        for _ in range(30):
            dom, seqs = random_sequence_space(rng, max_n=7, max_k=3)
            sp = new_sequence_space(dom, seqs)
            fam = family(sp)
            old_base = base_of_family(fam).masks()
            for t in sorted(space_outer_fringe(sp).masks):
                extensions = {
                    t | (1 << y) for y in range(dom.n) if not (t >> y) & 1
                }
                formula = {t} | {b for b in old_base if b not in extensions}
                assert base_of_family(fam.with_mask(t)).masks() == formula
                checked += 1
        assert checked >= 50
