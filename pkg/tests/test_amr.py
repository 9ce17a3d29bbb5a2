import random
from pathlib import Path

import pytest

from groundkit.amr import (
    DefinitionEntry, InvalidEntryError, PreprocessMetrics, UnpatchableError, ValidityStatus, bypass_root, classify,
    load_amr_corpus, patch, prepare, select_senses, union_corpus, validate,
)
from groundkit.penman import parse_penman

CORPUS = Path(__file__).parent / "data" / "definitions.amr"

APPLE = "(d / define-01 :ARG1 (a / apple) :ARG2 (f / fruit :mod (r / red) :mod (r2 / round)))"
MANNER_NOT_ARG1 = "(d / define-01 :manner (q / quirky) :ARG2 (o / odd))"
TOPIC_NOT_ARG2 = "(d / define-01 :ARG1 (z / zany) :topic (u / unconventional))"
CONTRAST_ROOT = """(c / contrast-01
    :ARG1 (d / define-01 :ARG1 (b / bank) :ARG2 (i / institution))
    :ARG2 (d2 / define-01 :ARG1 (b2 / bank) :ARG2 (l / land)))"""
SUBGRAPH_DEFINED = "(d / define-01 :ARG1 (c / cream :mod (i / ice)) :ARG2 (d2 / dessert))"
WACKY_SPLIT = """(d / define-01 :ARG1 (w / wacky) :ARG2 (s / silly)
    :ARG2 (o / or :op1 (e / excite-01) :op2 (a / amuse-01)))"""
WACKY_DEF = "(s / silly :manner (o / or :op1 (e / excite-01) :op2 (a / amuse-01)))"


def entry(text, lexeme="w", sense=0, replacement=None):
    return DefinitionEntry(lexeme, sense, parse_penman(text).graph,
                           replacement=parse_penman(replacement).graph if replacement else None)


def definition(lexeme, sense, label, *body):
    """A valid entry defining ``label`` by the concepts in ``body``."""
    parts = " ".join(f":mod (b{i} / {c})" for i, c in enumerate(body[1:]))
    return entry(f"(d / define-01 :ARG1 (s / {label}) :ARG2 (h / {body[0]} {parts}))", lexeme, sense)


class TestValidate:
    @pytest.mark.parametrize("text,status", [
        (APPLE, ValidityStatus.VALID),
        (MANNER_NOT_ARG1, ValidityStatus.MISSING_ARG1),
        (TOPIC_NOT_ARG2, ValidityStatus.MISSING_ARG2),
        (CONTRAST_ROOT, ValidityStatus.WRONG_ROOT),
        (SUBGRAPH_DEFINED, ValidityStatus.NON_ATOMIC_DEFINED),
        (WACKY_SPLIT, ValidityStatus.MISSING_ARG2),
    ])
    def test_failure_cases(self, text, status):
        assert validate(entry(text)) is status

    def test_wrong_root_is_checked_first(self):
        assert validate(entry("(x / say-01 :manner (q / quirky))")) is ValidityStatus.WRONG_ROOT

    def test_non_atomic_before_missing_arg2(self):
        assert validate(entry("(d / define-01 :ARG1 (c / cream :mod (i / ice)))")) is ValidityStatus.NON_ATOMIC_DEFINED

    def test_two_arg1_edges(self):
        text = "(d / define-01 :ARG1 (a / apple) :ARG1 (b / pear) :ARG2 (f / fruit))"
        assert validate(entry(text)) is ValidityStatus.MISSING_ARG1

    def test_accepts_bare_graphs(self):
        assert validate(parse_penman(APPLE).graph) is ValidityStatus.VALID


class TestPatch:
    def test_wacky(self):
        fixed = patch(entry(WACKY_SPLIT, "wacky"), parse_penman(WACKY_DEF).graph)
        g = fixed.amr
        assert fixed.status is ValidityStatus.PATCHED and validate(fixed) is ValidityStatus.VALID
        assert sorted(g.instances.values()) == ["amuse-01", "define-01", "excite-01", "or", "silly", "wacky"]
        (arg2,) = g.role_targets(g.root, ":ARG2")
        assert g.instances[arg2] == "silly"

    def test_variable_clashes_are_renamed(self):
        # the replacement reuses "d" and "w", which the kept nodes already own
        fixed = patch(entry(TOPIC_NOT_ARG2), parse_penman("(d / odd :mod (w / very))").graph)
        g = fixed.amr
        assert len(g.instances) == 4 and validate(fixed) is ValidityStatus.VALID
        assert sorted(g.instances.values()) == ["define-01", "odd", "very", "zany"]

    def test_keeps_replacement_attributes(self):
        fixed = patch(entry(TOPIC_NOT_ARG2), parse_penman("(o / odd :polarity -)").graph)
        assert [(fixed.amr.instances[v], r, c) for v, r, c in fixed.amr.attributes] == [("odd", ":polarity", "-")]

    def test_valid_entry_is_untouched(self):
        e = entry(APPLE)
        out = patch(e, parse_penman(WACKY_DEF).graph)
        assert out.amr == e.amr and out.status is ValidityStatus.VALID

    @pytest.mark.parametrize("text", [CONTRAST_ROOT, MANNER_NOT_ARG1, SUBGRAPH_DEFINED])
    def test_unpatchable(self, text):
        with pytest.raises(UnpatchableError):
            patch(entry(text), parse_penman(WACKY_DEF).graph)

    def test_patched_entries_always_validate(self):
        from test_penman import random_amr
        r = random.Random(21)
        for _ in range(100):
            fixed = patch(entry(TOPIC_NOT_ARG2), random_amr(r, r.randint(1, 9)))
            assert validate(fixed) is ValidityStatus.VALID


class TestSelectSenses:
    def test_first_sense_wins(self):
        es = [definition("bank", s, "bank", c) for s, c in [(2, "slope"), (0, "institution"), (1, "row")]]
        kept, poly, coll = select_senses(es)
        assert [e.sense for e in kept] == [0] and (poly, coll) == (2, 0)

    def test_collisions_drop_every_party(self):
        es = [definition("colour", 0, "color", "hue"), definition("color", 0, "color", "tint"),
              definition("red", 0, "red", "color")]
        kept, poly, coll = select_senses(es)
        assert [e.lexeme for e in kept] == ["red"] and (poly, coll) == (0, 2)

    def test_polysemy_then_collision(self):
        es = [definition("colour", 0, "color", "hue"), definition("colour", 1, "color", "paint"),
              definition("color", 0, "color", "tint")]
        kept, poly, coll = select_senses(es)
        assert kept == [] and (poly, coll) == (1, 2)

    def test_disjoint(self):
        es = [definition("apple", 0, "apple", "fruit"), definition("pear", 0, "pear", "fruit")]
        kept, poly, coll = select_senses(es)
        assert kept == es and (poly, coll) == (0, 0)

    def test_idempotent_and_order_independent(self):
        r = random.Random(4)
        labels = ["a", "b", "c", "d"]
        es = [definition(lex, s, r.choice(labels), "x") for lex in "pqrst" for s in range(r.randint(1, 3))]
        kept, _, _ = select_senses(es)
        assert select_senses(kept) == (kept, 0, 0)
        for _ in range(20):
            r.shuffle(es)
            assert select_senses(es)[0] == kept


class TestBypassRoot:
    def test_apple(self):
        arcs, preserved = bypass_root(entry(APPLE))
        assert arcs == {("fruit", "apple"), ("red", "apple"), ("round", "apple")}
        assert preserved.arcs() == [("fruit", "red"), ("fruit", "round")]
        assert preserved.tags("fruit", "red") == {":mod"}

    def test_wacky(self):
        fixed = patch(entry(WACKY_SPLIT, "wacky"), parse_penman(WACKY_DEF).graph)
        arcs, preserved = bypass_root(fixed)
        assert arcs == {(c, "wacky") for c in ["silly", "or", "excite-01", "amuse-01"]}
        assert len(preserved) == 3

    def test_single_concept(self):
        arcs, preserved = bypass_root(entry("(d / define-01 :ARG1 (s / stone) :ARG2 (r / rock))"))
        assert arcs == {("rock", "stone")} and len(preserved) == 0

    def test_one_arc_per_concept(self):
        arcs, _ = bypass_root(entry(APPLE))
        sources = [u for u, _ in arcs]
        assert len(sources) == len(set(sources))

    @pytest.mark.parametrize("text", [CONTRAST_ROOT, TOPIC_NOT_ARG2])
    def test_invalid_entries(self, text):
        with pytest.raises(InvalidEntryError):
            bypass_root(entry(text))

    def test_rejected_status(self):
        e = DefinitionEntry("apple", 0, parse_penman(APPLE).graph, status=ValidityStatus.REJECTED)
        with pytest.raises(InvalidEntryError):
            bypass_root(e)


class TestUnion:
    def test_shared_concept_is_one_vertex(self):
        res = union_corpus([definition("apple", 0, "apple", "fruit", "red"),
                            definition("pear", 0, "pear", "fruit", "green")])
        g = res.graph
        assert g.labels().count("fruit") == 1
        assert {v for u, v in g.label_arcs() if u == "fruit"} == {"apple", "pear"}
        assert res.definitional_tags().tags("fruit", "pear") == {"define-01"}

    def test_empty(self):
        res = union_corpus([])
        assert res.graph.num_vertices == 0 and res.metrics == PreprocessMetrics()

    def test_six_entry_accounting(self):
        es = [definition("apple", 0, "apple", "fruit"),
              definition("apple", 1, "apple", "tree"),
              definition("pear", 0, "pear", "fruit"),
              definition("colour", 0, "color", "hue"),
              definition("color", 0, "color", "tint"),
              entry(CONTRAST_ROOT, "bank", 0)]
        m = union_corpus(es).metrics
        assert m.to_dict() == {"definition_quantity": 6, "initial_invalid": 1, "saved": 0, "final_invalid": 1,
                               "polysemy_filtered": 1, "symbol_collisions": 2, "final_quantity": 2}
        assert m.balanced()

    def test_duplicate_keys_rejected(self):
        with pytest.raises(ValueError):
            prepare([definition("apple", 0, "apple", "fruit")] * 2)

    def test_identity_on_random_corpora(self):
        r = random.Random(17)
        pool = [APPLE, MANNER_NOT_ARG1, TOPIC_NOT_ARG2, CONTRAST_ROOT, SUBGRAPH_DEFINED, WACKY_SPLIT]
        for _ in range(50):
            es = []
            for i in range(r.randint(0, 12)):
                text = r.choice(pool)
                rep = WACKY_DEF if r.random() < 0.5 else None
                es.append(entry(text, r.choice("abcde"), i, rep))
            m = union_corpus(es).metrics
            assert m.balanced() and m.saved <= m.initial_invalid


class TestCorpusFile:
    def test_companion_blocks_pair_up(self):
        es = load_amr_corpus(CORPUS)
        assert [e.key for e in es] == [("apple", 0), ("apple", 1), ("set", 0), ("quirky", 0), ("zany", 0),
                                        ("bank", 0), ("ice-cream", 0), ("wacky", 0)]
        assert {e.key for e in es if e.replacement is not None} == {("bank", 0), ("wacky", 0)}

    def test_classification(self):
        got = classify(load_amr_corpus(CORPUS))
        assert [k for k, s in got.items() if s is ValidityStatus.REJECTED] == [
            ("quirky", 0), ("zany", 0), ("bank", 0), ("ice-cream", 0)]
        assert got[("wacky", 0)] is ValidityStatus.PATCHED

    def test_union_of_sample(self):
        res = union_corpus(load_amr_corpus(CORPUS))
        assert res.metrics.final_quantity == 3 and res.metrics.balanced()
        assert ("thing", "set") in res.graph.label_arcs()
        assert res.preserved.tags("group", "thing") == {":consist-of"}
