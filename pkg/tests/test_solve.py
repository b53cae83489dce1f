import random

import pytest

from oracles import margin_brute, spe_outcomes_brute

from stackgame import (
    GeneratorConfig,
    contract,
    equivalent,
    expand_one,
    generate,
    leaf,
    node,
    outcome_set,
    prune,
    reindex,
    security_margin,
    spe,
)
from stackgame.errors import (
    ContractNodePresentError,
    IncompleteCutError,
    PlayerMismatchError,
    UnknownNodeError,
)
from stackgame.rational import NEG_INF, POS_INF, rat
from stackgame.solve import malice_key
from stackgame.trees import (
    Leaf,
    StrategyProfile,
    leaves,
    owned_nodes,
    play,
)


def vec(*xs):
    return tuple(rat(x) for x in xs)


def build(t):
    return reindex(t, fresh_origins=True)


class TestSpe:
    def test_doomsday(self, doomsday_tree):
        result = spe(doomsday_tree)
        assert result.payoffs == vec(0, 1)
        realized = play(doomsday_tree, result.profile)
        assert realized.uid == result.leaf
        assert realized.payoffs == result.payoffs

    def test_fig2(self, fig2_tree):
        assert spe(fig2_tree).payoffs == vec(0, 10, 10)

    def test_tie_breaks_against_the_others(self):
        t = build(node(0, leaf(1, 5), leaf(1, 0)))
        assert spe(t).payoffs == vec(1, 0)

    def test_tie_prefers_neg_inf_for_the_other(self):
        t = build(node(0, leaf(1, 0), leaf(1, "-inf")))
        assert spe(t).payoffs == vec(1, NEG_INF)

    def test_tie_avoids_pos_inf_for_the_other(self):
        t = build(node(0, leaf(1, "inf"), leaf(1, -50)))
        assert spe(t).payoffs == vec(1, -50)

    def test_residual_tie_lowest_index(self):
        t = build(node(0, leaf(1, 2, 3), leaf(1, 3, 2), leaf(1, 0, 9)))
        # sums of others: 5, 5, 9 -> first of the tied pair
        result = spe(t)
        assert result.profile.choices[0] == 0

    def test_profile_covers_off_path(self, fig2_tree):
        result = spe(fig2_tree)
        assert set(result.profile.choices) == {n.uid for n in owned_nodes(fig2_tree, 0)} | {
            n.uid for n in owned_nodes(fig2_tree, 1)
        } | {n.uid for n in owned_nodes(fig2_tree, 2)}

    def test_rejects_contract_nodes(self):
        t = build(contract(0, node(1, leaf(1, 0), leaf(0, 1))))
        with pytest.raises(ContractNodePresentError):
            spe(t)

    def test_malice_key_classes(self):
        assert malice_key(vec(1, "-inf"), 0) < malice_key(vec(1, -10**9), 0)
        assert malice_key(vec(1, -5), 0) < malice_key(vec(1, "inf"), 0)


class TestOutcomeSet:
    def test_single_leaf(self):
        t = build(leaf(2, 2))
        assert outcome_set(t) == frozenset({vec(2, 2)})

    def test_tied_node_keeps_both(self):
        t = build(node(0, leaf(1, 0), leaf(1, 5)))
        assert outcome_set(t) == frozenset({vec(1, 0), vec(1, 5)})

    def test_doomsday_matches_brute_force(self, doomsday_tree):
        assert outcome_set(doomsday_tree) == spe_outcomes_brute(doomsday_tree)
        assert outcome_set(doomsday_tree) == frozenset({vec(0, 1)})

    def test_spe_vector_always_member(self, fig2_tree):
        assert spe(fig2_tree).payoffs in outcome_set(fig2_tree)

    @pytest.mark.parametrize("seed", range(60))
    def test_matches_brute_force_on_random_trees(self, seed):
        cfg = GeneratorConfig(
            players=2 + seed % 2,
            max_depth=2 + seed % 2,
            max_leaves=6,
            seed=1000 + seed,
            strict_generic=False,
        )
        tree = generate(cfg, seed).root
        assert outcome_set(tree) == spe_outcomes_brute(tree)
        assert spe(tree).payoffs in outcome_set(tree)

    def test_strictly_generic_singleton(self):
        for i in range(40):
            cfg = GeneratorConfig(players=2, max_depth=3, max_leaves=8, seed=77 + i)
            tree = generate(cfg, i).root
            s = outcome_set(tree)
            assert s == frozenset({spe(tree).payoffs})


class TestEquivalent:
    def test_reflexive(self, doomsday_tree, fig2_tree):
        for t in (doomsday_tree, fig2_tree):
            assert equivalent(t, t, "strict")
            assert equivalent(t, t, "set")

    def test_symmetric_on_random_pairs(self):
        rng = random.Random(3)
        for i in range(30):
            a = generate(GeneratorConfig(players=2, max_depth=2, max_leaves=5, seed=i), 0).root
            b = generate(
                GeneratorConfig(players=2, max_depth=2, max_leaves=5, seed=rng.randrange(10**6)),
                1,
            ).root
            for mode in ("strict", "set"):
                assert equivalent(a, b, mode) == equivalent(b, a, mode)

    def test_doomsday_vs_expansion_differs(self, doomsday_tree):
        expanded = expand_one(doomsday_tree, 0)
        assert not equivalent(doomsday_tree, expanded, "strict")
        assert not equivalent(doomsday_tree, expanded, "set")

    def test_equal_single_leaf_games(self):
        assert equivalent(build(leaf(1, 2)), build(leaf(1, 2)), "strict")

    def test_player_mismatch(self):
        with pytest.raises(PlayerMismatchError):
            equivalent(build(leaf(1, 2)), build(leaf(1, 2, 3)))


class TestPrune:
    def test_doomsday_detonate(self, doomsday_tree):
        # committing to the ruinous branch leaves j choosing between (1,0) and (-inf,-inf)
        i_node = owned_nodes(doomsday_tree, 0)[0]
        pruned = prune(doomsday_tree, 0, {i_node.uid: 0})
        assert {lf.payoffs for lf in leaves(pruned)} == {vec(1, 0), vec("-inf", "-inf")}
        assert spe(pruned).payoffs == vec(1, 0)

    def test_empty_cut_for_absent_player(self, doomsday_tree):
        three = build(node(0, leaf(1, 0, 0), leaf(0, 1, 0)))
        assert prune(three, 2, {}) == three

    def test_fig2_structural(self, fig2_tree):
        pruned = prune(fig2_tree, 0, {0: 0})
        assert pruned.uid == 1  # root collapsed onto the k-node side
        assert len(leaves(pruned)) == 2

    def test_preserves_uids_and_origins(self, fig2_tree):
        pruned = prune(fig2_tree, 1, {4: 1})
        original = {lf.uid for lf in leaves(fig2_tree)}
        assert all(lf.origin in original for lf in leaves(pruned))

    def test_incomplete_cut(self, fig2_tree):
        with pytest.raises(IncompleteCutError):
            prune(fig2_tree, 0, {})

    def test_unknown_node(self, fig2_tree):
        with pytest.raises(UnknownNodeError):
            prune(fig2_tree, 0, {0: 0, 99: 0})
        with pytest.raises(UnknownNodeError):
            prune(fig2_tree, 0, {0: 5})

    def test_prune_of_spe_cut_preserves_spe(self):
        for i in range(50):
            cfg = GeneratorConfig(players=3, max_depth=3, max_leaves=6, seed=500 + i)
            tree = generate(cfg, i).root
            full = spe(tree)
            for p in range(3):
                cut = {n.uid: full.profile.choices[n.uid] for n in owned_nodes(tree, p)}
                assert spe(prune(tree, p, cut)).payoffs == full.payoffs


class TestSecurityMargin:
    def test_simple_gap(self):
        t = build(node(0, leaf(5, 0), leaf(2, 0)))
        margin = security_margin(t, StrategyProfile({0: 0}))
        assert margin == rat(3)

    def test_no_deviation_is_pos_inf(self):
        t = build(node(0, leaf(5, 0), leaf(5, 0)))
        assert security_margin(t, StrategyProfile({0: 0})) == POS_INF

    def test_deviation_by_other_player_counts(self):
        t = build(node(0, node(1, leaf(4, 1), leaf(0, 9)), leaf(3, 3)))
        profile = StrategyProfile({0: 0, 1: 0})
        # player 1 can deviate to (0,9): margin 1-9 = -8
        assert security_margin(t, profile) == rat(-8)

    def test_spe_profile_positive_margin_when_strictly_generic(self):
        for i in range(40):
            cfg = GeneratorConfig(players=2, max_depth=3, max_leaves=8, seed=4000 + i)
            tree = generate(cfg, i).root
            result = spe(tree)
            assert security_margin(tree, result.profile) > rat(0)

    @pytest.mark.parametrize("seed", range(40))
    def test_matches_exhaustive_deviation_oracle(self, seed):
        cfg = GeneratorConfig(
            players=2 + seed % 2,
            max_depth=3,
            max_leaves=6,
            seed=8800 + seed,
            strict_generic=seed % 3 != 0,
        )
        tree = generate(cfg, seed).root
        rng = random.Random(seed)
        choices = {n.uid: rng.randrange(len(n.children)) for n in _decisions(tree)}
        profile = StrategyProfile(choices)
        assert security_margin(tree, profile) == margin_brute(tree, profile)


def _decisions(tree):
    from stackgame.trees import decision_nodes

    return decision_nodes(tree)


class TestLeafChoiceInvariance:
    def test_monotone_transforms_keep_the_spe_leaf(self):
        for i in range(40):
            cfg = GeneratorConfig(players=2, max_depth=3, max_leaves=8, seed=31 + i)
            tree = generate(cfg, i).root
            base = spe(tree)
            rng = random.Random(i)
            scale = [rat(rng.randint(1, 5)) for _ in range(2)]
            shift = [rat(rng.randint(-3, 3)) for _ in range(2)]

            def transform(n):
                if isinstance(n, Leaf):
                    new = tuple(
                        v if not v.is_finite else scale[p] * v + shift[p]
                        for p, v in enumerate(n.payoffs)
                    )
                    return Leaf(uid=n.uid, payoffs=new, label=n.label, origin=n.origin)
                return type(n)(uid=n.uid, owner=n.owner, children=tuple(transform(c) for c in n.children))

            assert spe(transform(tree)).leaf == base.leaf
