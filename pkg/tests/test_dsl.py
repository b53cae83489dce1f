import pytest

from conftest import read_game

from oracles import check_dot

from stackgame import (
    GeneratorConfig,
    generate,
    parse,
    serialize,
    spe,
    to_dot,
)
from stackgame.dsl import GameDocument
from stackgame.errors import (
    ArityError,
    DuplicatePlayerError,
    ParseError,
    UnknownPlayerError,
)
from stackgame.rational import rat
from stackgame.trees import ContractNode, Decision, Leaf, leaves, tree_size


class TestParse:
    def test_minimal_game(self):
        doc = parse("players a b\n(node a (leaf 1 0) (leaf 0 1))")
        assert doc.player_names == ("a", "b")
        assert isinstance(doc.root, Decision)
        assert doc.root.owner == 0
        assert tree_size(doc.root) == 3

    def test_doomsday_file(self):
        doc = parse(read_game("doomsday.game"))
        assert spe(doc.root).payoffs == (rat(0), rat(1))

    def test_arity_error(self):
        with pytest.raises(ArityError):
            parse("players a b\n(node a (leaf 1) (leaf 0 1))")

    def test_values(self):
        doc = parse("players a b\n(node a (leaf 1/3 -2) (leaf 0.25 -inf))")
        lf1, lf2 = leaves(doc.root)
        assert lf1.payoffs == (rat("1/3"), rat(-2))
        assert lf2.payoffs == (rat("1/4"), rat("-inf"))

    def test_labels(self):
        doc = parse("players a b\n(node a (leaf :u3 0 10) (leaf 1 1))")
        assert leaves(doc.root)[0].label == "u3"

    def test_comments_and_whitespace(self):
        text = "players a b ; two parties\n(node a ; root\n  (leaf 1 0);left\n  (leaf 0 1))"
        doc = parse(text)
        assert tree_size(doc.root) == 3

    def test_contract_form(self):
        doc = parse("players a b\n(contract a (node b (leaf 1 0) (leaf 0 1)))")
        assert isinstance(doc.root, ContractNode)
        assert doc.root.owner == 0

    def test_error_positions(self):
        with pytest.raises(ParseError) as err:
            parse("players a b\n(node a (leaf 1 0) (oops 1 0))")
        assert err.value.line == 2
        assert err.value.column == 21

    def test_unknown_player(self):
        with pytest.raises(UnknownPlayerError) as err:
            parse("players a b\n(node c (leaf 1 0) (leaf 0 1))")
        assert err.value.line == 2

    def test_duplicate_player(self):
        with pytest.raises(DuplicatePlayerError):
            parse("players a a\n(leaf 1 1)")

    def test_missing_header(self):
        with pytest.raises(ParseError):
            parse("(node a (leaf 1 0) (leaf 0 1))")

    def test_trailing_garbage(self):
        with pytest.raises(ParseError):
            parse("players a b\n(leaf 1 0) extra")

    def test_single_child_node_rejected(self):
        with pytest.raises(ParseError):
            parse("players a b\n(node a (leaf 1 0))")

    def test_zero_denominator(self):
        with pytest.raises(ParseError):
            parse("players a b\n(node a (leaf 1/0 0) (leaf 0 1))")

    def test_spans_recorded(self):
        doc = parse("players a b\n(node a (leaf 1 0) (leaf 0 1))")
        assert doc.spans[0] == (2, 1)
        assert doc.spans[1] == (2, 9)


class TestSerialize:
    def test_doomsday_golden(self, doomsday):
        expected = (
            "players i j\n"
            "(node j\n"
            "  (leaf 1 0)\n"
            "  (node i\n"
            "    (leaf -inf -inf)\n"
            "    (leaf 0 1)))\n"
        )
        assert serialize(doomsday) == expected

    def test_fractions_render_reduced(self):
        doc = parse("players a b\n(node a (leaf 2/6 0.5) (leaf 0 1))")
        assert "(leaf 1/3 1/2)" in serialize(doc)

    def test_labels_round_trip(self, fig2):
        text = serialize(fig2)
        assert ":u1" in text
        again = parse(text)
        assert [lf.label for lf in leaves(again.root)] == ["u1", "u2", "u3", "u4"]

    def test_round_trip_on_corpus(self):
        for name in ("doomsday.game", "fig2.game", "contract1.game", "contract2.game"):
            doc = parse(read_game(name))
            assert serialize(parse(serialize(doc))) == serialize(doc)

    @pytest.mark.parametrize("seed", range(100))
    def test_round_trip_random_games(self, seed):
        cfg = GeneratorConfig(
            players=2 + seed % 3,
            max_depth=1 + seed % 4,
            branching=(2, 2 + seed % 3),
            max_leaves=10,
            seed=seed,
            strict_generic=seed % 2 == 0,
        )
        doc = generate(cfg, seed)
        text = serialize(doc)
        again = parse(text)
        assert serialize(again) == text
        assert [lf.payoffs for lf in leaves(again.root)] == [
            lf.payoffs for lf in leaves(doc.root)
        ]


class TestDot:
    def test_doomsday_counts(self, doomsday):
        dot = to_dot(doomsday)
        assert dot.count("shape=circle") == 2
        assert dot.count("shape=box") == 3
        assert dot.count("->") == 4
        check_dot(dot)

    def test_spe_overlay_bolds_each_choice(self, fig2):
        result = spe(fig2.root)
        dot = to_dot(fig2, spe_profile=result.profile)
        assert dot.count("penwidth=2.4") == 3  # one bold edge per decision node
        check_dot(dot)

    def test_no_annotations_no_styling(self, fig2):
        dot = to_dot(fig2)
        assert "penwidth" not in dot
        check_dot(dot)

    def test_contract_nodes_double_bordered(self):
        doc = parse("players a b\n(contract a (node b (leaf 1 0) (leaf 0 1)))")
        dot = to_dot(doc)
        assert "peripheries=2" in dot
        check_dot(dot)

    def test_quoting_survives_odd_names(self):
        doc = parse("players a b\n(node a (leaf :l1 1 0) (leaf 0 1))")
        check_dot(to_dot(doc, title='weird "title"'))

    def test_region_and_highlight(self, doomsday):
        dot = to_dot(doomsday, highlight_leaves={1: "red"}, region={1, 4})
        assert "color=\"red\"" in dot
        assert "style=filled" in dot
        check_dot(dot)
