import random

import pytest

from groundkit import Digraph, check_preservation, mfvs_size
from groundkit import reductions as R
from groundkit.digraph import UnknownArcError, UnknownVertexError, bidirectional_arcs
from groundkit.oracle import exact_mfvs, is_fvs
from groundkit.reductions import (
    CONFLUENT, IN_CLIQUE, ISOLATED, LOOP, NONCONFLUENT, OUT_CLIQUE, PIE, RHO_C, RHO_NC, SUBSET,
    BidirectionalArcError,
)
from groundkit.synthetic import random_digraph

from conftest import labeled, random_family
from independent import decode, iso_class_representatives


def ix(g, *names):
    return tuple(g.index(x) for x in names)


class TestPredicates:
    def test_loop(self):
        g = labeled([("a", "a"), ("b", "c"), ("c", "b")])
        assert R.pred_loop(g, g.index("a"))
        assert not R.pred_loop(g, g.index("b"))

    def test_loop_unknown_vertex(self):
        with pytest.raises(UnknownVertexError):
            R.pred_loop(labeled([("a", "b")]), 5)

    def test_in_clique_fig6(self):
        ps = ["p1", "p2", "p3"]
        g = labeled([(p, q) for p in ps for q in ps if p != q] + [(p, "u") for p in ps] + [("u", "w")])
        assert R.pred_in(g, g.index("u"))
        assert not R.pred_out(g, g.index("p1"))

    def test_single_predecessor(self):
        g = labeled([("a", "u"), ("u", "b"), ("u", "c")])
        assert R.pred_in(g, g.index("u"))
        assert not R.pred_out(g, g.index("u"))

    def test_loop_blocks_clique_rules(self):
        g = labeled([("u", "u"), ("a", "u")])
        assert not R.pred_in(g, g.index("u")) and not R.pred_out(g, g.index("u"))

    def test_subset_bare_two_cycle(self):
        g = labeled([("u", "v"), ("v", "u")])
        assert R.pred_subset(g, *ix(g, "u", "v")) and R.pred_subset(g, *ix(g, "v", "u"))

    def test_subset_needs_inclusion(self):
        g = labeled([("u", "v"), ("v", "u"), ("x", "v")])
        assert not R.pred_subset(g, *ix(g, "u", "v"))
        assert R.pred_subset(g, *ix(g, "v", "u"))

    def test_subset_loop_on_v(self):
        g = labeled([("u", "v"), ("v", "u"), ("v", "v")])
        assert not R.pred_subset(g, *ix(g, "u", "v"))

    def test_subset_distinct_vertices(self):
        g = labeled([("u", "v"), ("v", "u")])
        with pytest.raises(ValueError):
            R.pred_subset(g, 0, 0)

    def test_subset_brute_force(self):
        for g in random_family(200, n_max=7, densities=(0.3, 0.5), seed=1):
            for u in g.vertices():
                for v in g.vertices():
                    if u == v:
                        continue
                    others = set(g.vertices()) - {u, v}
                    expect = (not g.has_loop(v) and g.has_arc(u, v) and g.has_arc(v, u)
                              and all(g.has_arc(x, u) for x in others if g.has_arc(x, v))
                              and all(g.has_arc(u, x) for x in others if g.has_arc(v, x)))
                    assert R.pred_subset(g, u, v) == expect

    def test_pie_cases(self):
        g = labeled([("a", "b"), ("b", "c")])
        assert R.pred_pie(g, ix(g, "a", "b"))
        # v -> w -> u closes only through the bidirectional pair u <-> v
        g = labeled([("u", "v"), ("v", "u"), ("v", "w"), ("w", "u")])
        assert R.pred_pie(g, ix(g, "v", "w")) and R.pred_pie(g, ix(g, "w", "u"))
        g = labeled([("a", "b"), ("b", "c"), ("c", "a")])
        assert not R.pred_pie(g, ix(g, "a", "b"))

    def test_arc_rules_refuse_bidirectional_and_unknown(self):
        g = labeled([("a", "b"), ("b", "a"), ("c", "c")])
        for pred in (R.pred_pie, R.pred_dome):
            with pytest.raises(BidirectionalArcError):
                pred(g, ix(g, "a", "b"))
            with pytest.raises(BidirectionalArcError):
                pred(g, ix(g, "c", "c"))
            with pytest.raises(UnknownArcError):
                pred(g, ix(g, "a", "c"))

    def test_dome_cases(self):
        g = labeled([("u", "v")])
        assert R.pred_dome(g, ix(g, "u", "v"))  # no vu-path at all
        g = labeled([("u", "v"), ("v", "x"), ("x", "y"), ("y", "u"), ("u", "x")])
        assert R.pred_dome(g, ix(g, "u", "v"))  # x is an out-neighbour of u
        g = labeled([("u", "v"), ("v", "x"), ("x", "u")])
        assert not R.pred_dome(g, ix(g, "u", "v"))

    def test_dome_ignores_endpoints(self):
        # v is always an out-neighbour of u; counting endpoints would make this 3-cycle arc removable
        g = labeled([("u", "v"), ("v", "u2"), ("u2", "u")])
        assert not R.pred_dome(g, ix(g, "u", "v"))

    def test_pie_and_dome_against_path_enumeration(self):
        for g in random_family(250, n_max=7, densities=(0.2, 0.35), seed=2):
            bidir = bidirectional_arcs(g)
            reduced = [a for a in g.arcs() if a not in bidir]
            paths_cache = {}
            for u, v in reduced:
                paths = paths_cache.setdefault((v, u), list(_simple_paths(reduced, v, u)))
                assert R.pred_pie(g, (u, v)) == (not paths)
                n_in = {x for x, y in reduced if y == v}
                n_out = {y for x, y in reduced if x == u}
                expect = all(set(p[1:-1]) & (n_in | n_out) for p in paths)
                assert R.pred_dome(g, (u, v)) == expect


def _simple_paths(arcs, s, t):
    succ = {}
    for a, b in arcs:
        succ.setdefault(a, []).append(b)
    stack = [[s]]
    while stack:
        path = stack.pop()
        for y in succ.get(path[-1], ()):
            if y == t:
                yield path + [y]
            elif y not in path:
                stack.append(path + [y])


def test_dome_subsumes_pie_on_all_graphs_up_to_five_vertices():
    # self-loops never enter G - A<->, so loop-free classes cover every graph
    for n in range(1, 6):
        for code in iso_class_representatives(n, loops=False):
            g = Digraph.from_edges(n, decode(code, n))
            for a in R.targets(PIE, g):
                if R.pred_pie(g, a):
                    assert R.pred_dome(g, a)


def test_dome_subsumes_pie_on_random_six_vertex_graphs():
    for g in random_family(2000, n_max=6, densities=(0.2, 0.3, 0.45), seed=66):
        for a in R.targets(PIE, g):
            if R.pred_pie(g, a):
                assert R.pred_dome(g, a)


class TestApply:
    def test_loop(self):
        g = labeled([("a", "a")])
        h, d = R.apply(LOOP, g, 0)
        assert h.num_vertices == 0 and d.included == {0}

    def test_failed_predicate_is_a_no_op(self):
        g = labeled([("a", "b")])
        h, d = R.apply(LOOP, g, 0)
        assert h is g and not d.applied

    def test_in_clique_fig6(self):
        ps = ["p1", "p2", "p3"]
        g = labeled([(p, q) for p in ps for q in ps if p != q] + [(p, "u") for p in ps] + [("u", "w")])
        h, d = R.apply(IN_CLIQUE, g, g.index("u"))
        assert d.excluded == {g.index("u")} and not d.included
        assert h.label_arcs() == {(p, q) for p in ps for q in ps if p != q} | {(p, "w") for p in ps}

    def test_subset_removes_first_vertex(self):
        g = labeled([("u", "v"), ("v", "u")])
        h, d = R.apply(SUBSET, g, ix(g, "u", "v"))
        assert h.labels() == ["v"] and d.included == {g.index("u")}

    def test_pie_on_dag_arc(self):
        g = labeled([("a", "b"), ("b", "c")])
        h, d = R.apply(PIE, g, ix(g, "a", "b"))
        assert h.label_arcs() == {("b", "c")} and not d.included
        assert sorted(h.labels()) == ["a", "b", "c"]

    def test_every_application_shrinks(self):
        for g in random_family(100, n_max=8, seed=3):
            for kind in R.KIND_ORDER:
                for t in R.targets(kind, g):
                    h, d = R.apply(kind, g, t)
                    if d.applied:
                        assert (h.num_vertices, h.num_arcs) < (g.num_vertices, g.num_arcs)


class TestSweep:
    def test_loop_sweep(self):
        g = labeled([("a", "a"), ("b", "b"), ("c", "c"), ("a", "b")])
        h, res = R.sweep(LOOP, g)
        assert h.num_vertices == 0 and res.included == set(g.vertices())

    def test_out_clique_chain(self):
        g = labeled([("a", "b"), ("b", "c")])
        h, res = R.sweep(OUT_CLIQUE, g)
        assert h.num_arcs == 0
        assert mfvs_size(g) == len(res.included) + mfvs_size(h) == 0

    def test_pie_sweep_on_dag(self):
        g = random_digraph(12, 0.3, seed=4)
        dag = Digraph.from_edges(12, [(u, v) for u, v in g.arcs() if u < v])
        h, res = R.sweep(PIE, dag)
        assert h.num_arcs == 0 and len(res.removed_arcs) == dag.num_arcs

    def test_random_order_gives_same_pie_result(self):
        for g in random_family(50, n_max=10, seed=5):
            base, _ = R.sweep(PIE, g)
            other, _ = R.sweep(PIE, g, rng=random.Random(1))
            assert base.same_as(other)


class TestReduce:
    def test_loop_plus_chain(self):
        g = labeled([("a", "a"), ("b", "c"), ("c", "d")])
        h, tr = R.reduce(g)
        assert h.num_vertices == 0
        assert {g.label(u) for u in tr.included} == {"a"}
        assert tr.counts[LOOP] == 1 and tr.counts[IN_CLIQUE] + tr.counts[OUT_CLIQUE] == 3
        assert mfvs_size(g) == len(tr.included) + mfvs_size(h) == 1

    def test_loop_only_leaves_triangle(self):
        g = labeled([(x, y) for x in "abc" for y in "abc" if x != y])
        h, tr = R.reduce(g, [LOOP], {LOOP: 1})
        assert h.same_as(g) and tr.reductions_total == 0 and not tr.included

    def test_output_is_irreducible(self):
        for g in random_family(150, n_max=12, seed=6):
            for kinds, rho in ((CONFLUENT, RHO_C), (NONCONFLUENT, RHO_NC)):
                h, _ = R.reduce(g, kinds, rho)
                assert not list(R.applicable(h, kinds))
                again, tr = R.reduce(h, kinds, rho)
                assert again.same_as(h) and tr.reductions_total == 0

    def test_input_untouched(self):
        g = random_digraph(10, 0.3, seed=7)
        before = g.label_arcs()
        R.reduce(g, NONCONFLUENT, RHO_NC)
        assert g.label_arcs() == before

    def test_trace_accounting(self):
        for g in random_family(100, n_max=12, seed=8):
            h, tr = R.reduce(g, NONCONFLUENT, RHO_NC)
            assert tr.remaining_vertices + len(tr.included) + tr.excluded == g.num_vertices
            assert tr.remaining_vertices == h.num_vertices and tr.remaining_arcs == h.num_arcs
            assert tr.included == set(tr.included) and not tr.included & set(h.vertices())
            assert tr.reductions_total <= g.num_vertices + g.num_arcs

    def test_trace_dict_keys(self):
        _, tr = R.reduce(labeled([("a", "a")]))
        assert list(tr.to_dict()) == ["remaining_vertices", "included", "excluded", "reductions_total",
                                      "loop", "subset", "in_clique", "out_clique", "pie", "dome", "isolated"]

    def test_isolated_vertices_are_trimmed(self):
        g = labeled([("a", "b")])
        h, tr = R.reduce(g, [PIE], {PIE: 1})
        assert h.num_vertices == 0 and tr.isolated == 2 and tr.counts[PIE] == 1 and tr.excluded == 2

    def test_priorities_must_cover_kinds(self):
        with pytest.raises(ValueError):
            R.reduce(labeled([("a", "b")]), [PIE], {})

    def test_matches_reference_scheduler(self):
        # same irreducible graph up to which of several interchangeable vertices survives
        for g in random_family(150, n_max=12, seed=9):
            for kinds, rho in ((CONFLUENT, RHO_C), (NONCONFLUENT, RHO_NC)):
                h, tr = R.reduce(g, kinds, rho)
                ref, u_ref = R.reduce_reference(g, kinds, rho)
                assert len(tr.included) == len(u_ref) or kinds is NONCONFLUENT
                if kinds is CONFLUENT:
                    assert (h.num_vertices, h.num_arcs) == (ref.num_vertices, ref.num_arcs)

    def test_priority_compliance_on_replay(self):
        for g in random_family(120, n_max=11, densities=(0.15, 0.25), seed=10):
            for kinds, rho in ((CONFLUENT, RHO_C), (NONCONFLUENT, RHO_NC)):
                _, tr = R.reduce(g, kinds, rho, log=True)
                for h, kind, _ in R.replay(g, tr.log):
                    if kind == ISOLATED:
                        continue
                    lower = [k for k in kinds if rho[k] < rho[kind]]
                    assert not list(R.applicable(h, lower)), (kind, g.label_arcs())

    def test_replay_reproduces_result(self):
        for g in random_family(60, n_max=12, seed=11):
            h, tr = R.reduce(g, NONCONFLUENT, RHO_NC, log=True)
            again = g.copy()
            for kind, t in tr.log:
                if kind == ISOLATED:
                    again.discard_vertex(t)
                    continue
                again, d = R.apply(kind, again, t)
                assert d.applied
            assert again.same_as(h)

    def test_dictionary_like_structure_runs(self):
        from groundkit.synthetic import dictionary_like
        g = dictionary_like(3000, 20000, seed=1)
        h, tr = R.reduce(g)
        assert tr.remaining_vertices + len(tr.included) + tr.excluded == g.num_vertices
        assert not list(R.applicable(h, [LOOP, SUBSET, IN_CLIQUE, OUT_CLIQUE]))


class TestPreservation:
    @pytest.mark.parametrize("kind", R.KIND_ORDER, ids=lambda k: k.value)
    def test_single_rule(self, kind):
        for g in random_family(150, n_max=8, seed=20):
            for t in R.targets(kind, g)[:6]:
                if R.holds(kind, g, t):
                    assert check_preservation(g, kind, t)

    @pytest.mark.parametrize("kinds,rho", [(CONFLUENT, RHO_C), (NONCONFLUENT, RHO_NC)], ids=["rc", "rnc"])
    def test_pipeline(self, kinds, rho):
        for g in random_family(150, n_max=10, seed=21):
            h, tr = R.reduce(g, kinds, rho)
            after = exact_mfvs(h)
            assert mfvs_size(g) == len(tr.included) + after.size
            assert all(is_fvs(g, w | tr.included) for w in after.witnesses)


def test_partial_solution_can_depend_on_order():
    # InClique on 1 turns 3 into a loop; contracting 2, 4 and 3 first loops 1 instead
    arcs = [(1, 0), (1, 2), (1, 3), (1, 5), (2, 3), (2, 4), (3, 1), (4, 3), (4, 5), (5, 0)]
    g = Digraph.from_edges(6, arcs)
    first = g.copy()
    for u in (0, 5, 1):
        first = R.apply(IN_CLIQUE, first, u)[0] if R.pred_in(first, u) else R.apply(OUT_CLIQUE, first, u)[0]
    assert first.has_loop(3)
    second = g.copy()
    for u in (0, 5, 2, 4, 3):
        kind = IN_CLIQUE if R.pred_in(second, u) else OUT_CLIQUE
        second, d = R.apply(kind, second, u)
        assert d.applied
    assert second.has_loop(1)
    h1, u1 = R.reduce_reference(first)
    h2, u2 = R.reduce_reference(second)
    assert h1.num_vertices == h2.num_vertices == 0
    assert u1 == {3} and u2 == {1}
    assert mfvs_size(g) == 1

