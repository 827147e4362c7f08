import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lspace import (
    Domain,
    HasseDiagram,
    ValidationError,
    concept_distance,
    enumerate_lower_sets,
    fringe_qos,
    is_learning_space,
    is_lower_set,
    lower_set_family,
    order_from_hasse,
    parse_hasse,
    restrict,
    serialize_hasse,
    state_fringes_bruteforce,
    topological_order,
    transitive_reduction,
)

from oracles import brute_lower_sets


def chain(n=3, labels="xyz"):
    dom = Domain(tuple(labels[:n]))
    return HasseDiagram.from_labels(dom, list(zip(labels, labels[1:n])))


def worst_case_diagram(n):
    """2n/3 bottom concepts each covered by all n/3 top concepts."""
    assert n % 3 == 0
    bottoms = [f"b{i}" for i in range(2 * n // 3)]
    tops = [f"t{i}" for i in range(n // 3)]
    dom = Domain(tuple(bottoms + tops))
    return HasseDiagram.from_labels(dom, [(b, t) for b in bottoms for t in tops])


def random_diagram(rng, max_n=8):
    n = rng.randint(1, max_n)
    dom = Domain(tuple(f"c{i}" for i in range(n)))
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.3:
                pairs.append((f"c{i}", f"c{j}"))
    return transitive_reduction(dom, pairs)


class TestHasseValidation:
    def test_rejects_self_loop(self):
        dom = Domain(("x", "y"))
        with pytest.raises(ValidationError):
            HasseDiagram.from_labels(dom, [("x", "x")])

    def test_rejects_cycle(self):
        dom = Domain(("x", "y"))
        with pytest.raises(ValidationError):
            HasseDiagram.from_labels(dom, [("x", "y"), ("y", "x")])

    def test_rejects_transitive_edge(self):
        dom = Domain(("x", "y", "z"))
        with pytest.raises(ValidationError):
            HasseDiagram.from_labels(dom, [("x", "y"), ("y", "z"), ("x", "z")])

    def test_transitive_reduction_helper(self):
        dom = Domain(("x", "y", "z"))
        h = transitive_reduction(dom, [("x", "y"), ("y", "z"), ("x", "z")])
        assert h.edge_labels() == [("x", "y"), ("y", "z")]


class TestOrderFromHasse:
    def test_transitivity(self):
        h = chain()
        order = order_from_hasse(h)
        assert order.lt("x", "z")
        assert not order.lt("z", "x")

    def test_empty_edges(self):
        dom = Domain(("x", "y"))
        order = order_from_hasse(HasseDiagram(dom, frozenset()))
        assert not order.lt("x", "y") and not order.lt("y", "x")

    def test_order8_chain_restriction(self, order8):
        sub = restrict(order8, ["A", "C", "E", "G"])
        assert sub.edge_labels() == [("A", "C"), ("C", "E"), ("E", "G")]


class TestLowerSets:
    def test_trivial_lower_sets(self):
        h = chain()
        assert is_lower_set(h, h.domain.empty_state())
        assert is_lower_set(h, h.domain.full_state())
        assert not is_lower_set(h, h.domain.state(["y"]))

    def test_order8_count(self, order8):
        assert enumerate_lower_sets(order8) == 19

    def test_worst_case_formula(self):
        h = worst_case_diagram(6)
        assert enumerate_lower_sets(h) == 2**4 + 2**2 - 1

    def test_edgeless_powerset(self):
        dom = Domain(tuple(f"c{i}" for i in range(10)))
        assert enumerate_lower_sets(HasseDiagram(dom, frozenset())) == 1024

    def test_matches_filter_oracle_randomized(self):
        rng = random.Random(42)
        for _ in range(60):
            h = random_diagram(rng)
            edges = sorted(h.edges)
            expect = brute_lower_sets(h.domain, edges)
            fam = lower_set_family(h)
            assert fam.masks == expect

    def test_visits_parents_before_children_deterministically(self, order8):
        seen = []
        enumerate_lower_sets(order8, seen.append)
        assert seen[0] == 0
        assert len(seen) == len(set(seen)) == 19
        again = []
        enumerate_lower_sets(order8, again.append)
        assert seen == again
        # the predecessor (drop the member latest in the topological order)
        # of every state is visited before the state itself
        order = topological_order(order8)
        rank = {order8.domain.index(c): r for r, c in enumerate(order)}
        position = {m: i for i, m in enumerate(seen)}
        for m in seen:
            if m == 0:
                continue
            latest = max(
                (c for c in range(order8.domain.n) if (m >> c) & 1),
                key=lambda c: rank[c],
            )
            assert position[m & ~(1 << latest)] < position[m]

    def test_visitor_abort_propagates(self, order8):
        class Stop(Exception):
            pass

        def visitor(mask):
            raise Stop

        with pytest.raises(Stop):
            enumerate_lower_sets(order8, visitor)

    def test_enumerated_family_is_quasi_ordinal(self):
        rng = random.Random(7)
        for _ in range(20):
            h = random_diagram(rng, max_n=7)
            fam = lower_set_family(h)
            assert is_learning_space(fam)
            masks = fam.masks
            for a in masks:
                for b in masks:
                    assert (a & b) in masks

    def test_edge_touch_budget(self):
        rng = random.Random(3)
        for _ in range(10):
            h = random_diagram(rng, max_n=8)
            count, touches = enumerate_lower_sets(h, count_edge_touches=True)
            out_degree = max((len(v) for v in h.successors()), default=0)
            assert touches <= 2 * count * max(1, out_degree)


class TestTopologicalOrder:
    def test_source_first(self):
        dom = Domain(("x", "y", "z"))
        h = HasseDiagram.from_labels(dom, [("x", "y"), ("x", "z")])
        assert topological_order(h)[0] == "x"

    def test_chain_order(self):
        assert topological_order(chain()) == ("x", "y", "z")

    def test_worst_case_bottoms_before_tops(self):
        h = worst_case_diagram(6)
        order = topological_order(h)
        positions = {c: i for i, c in enumerate(order)}
        for x, y in h.edge_labels():
            assert positions[x] < positions[y]
        assert all(order[i].startswith("b") for i in range(4))


class TestFringeQos:
    def test_empty_and_full(self, order8):
        inner, outer = fringe_qos(order8, order8.domain.empty_state())
        assert inner == frozenset()
        assert outer == {"A", "B"}  # minimal concepts
        inner, outer = fringe_qos(order8, order8.domain.full_state())
        assert outer == frozenset()
        assert inner == {"G", "H"}  # maximal concepts

    def test_chain_single_state(self):
        h = chain()
        inner, outer = fringe_qos(h, h.domain.state(["x"]))
        assert inner == {"x"}
        assert outer == {"y"}

    def test_rejects_non_lower_set(self):
        h = chain()
        with pytest.raises(ValidationError):
            fringe_qos(h, h.domain.state(["z"]))

    def test_matches_bruteforce_on_random_spaces(self):
        rng = random.Random(11)
        for _ in range(25):
            h = random_diagram(rng, max_n=7)
            fam = lower_set_family(h)
            for s in fam.states():
                assert fringe_qos(h, s) == state_fringes_bruteforce(fam, s)


class TestRestrict:
    def test_identity(self, order8):
        assert restrict(order8, order8.domain.concepts).edges == order8.edges

    def test_chain_shortcut_becomes_cover(self):
        h = chain()
        sub = restrict(h, ["x", "z"])
        assert sub.edge_labels() == [("x", "z")]

    def test_order8_sampled_restriction(self, order8):
        sub = restrict(order8, ["A", "D", "E", "G", "H"])
        assert sub.edge_labels() == [
            ("A", "D"), ("A", "E"), ("D", "G"), ("D", "H"), ("E", "G"),
        ]
        # restriction of the order = projection of the space
        keep_mask = order8.domain.mask_of(["A", "D", "E", "G", "H"])
        projected = set()
        for m in lower_set_family(order8).masks:
            projected.add(sub.domain.mask_of(order8.domain.labels_of(m & keep_mask)))
        assert lower_set_family(sub).masks == projected

    def test_restriction_matches_projection_randomized(self):
        rng = random.Random(5)
        for _ in range(20):
            h = random_diagram(rng, max_n=7)
            keep = [c for c in h.domain.concepts if rng.random() < 0.6]
            if not keep:
                continue
            sub = restrict(h, keep)
            keep_mask = h.domain.mask_of(keep)
            projected = {
                sub.domain.mask_of(h.domain.labels_of(m & keep_mask))
                for m in lower_set_family(h).masks
            }
            assert lower_set_family(sub).masks == projected


class TestConceptDistance:
    def vee(self):
        dom = Domain(("x", "y", "z"))
        return order_from_hasse(
            HasseDiagram.from_labels(dom, [("x", "y"), ("x", "z")])
        )

    def test_identity_distance(self):
        order = self.vee()
        for c in "xyz":
            assert concept_distance(order, c, c) == 0

    def test_sibling_distance(self):
        assert concept_distance(self.vee(), "y", "z") == 1

    def test_parent_child_distance(self):
        assert concept_distance(self.vee(), "x", "y") == 2

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**20), st.integers(2, 6))
    def test_metric_axioms(self, seed, n):
        rng = random.Random(seed)
        dom = Domain(tuple(f"c{i}" for i in range(n)))
        pairs = [
            (f"c{i}", f"c{j}")
            for i in range(n)
            for j in range(i + 1, n)
            if rng.random() < 0.4
        ]
        order = order_from_hasse(transitive_reduction(dom, pairs))
        cs = dom.concepts
        for x in cs:
            for y in cs:
                assert concept_distance(order, x, y) == concept_distance(order, y, x)
                for z in cs:
                    assert concept_distance(order, x, z) <= concept_distance(
                        order, x, y
                    ) + concept_distance(order, y, z)


def test_hasse_format_roundtrip(order8):
    text = serialize_hasse(order8)
    again = parse_hasse(text)
    assert again.edges == order8.edges
    assert serialize_hasse(again) == text
