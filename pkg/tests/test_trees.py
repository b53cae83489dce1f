import pytest

from stackgame import leaf, node, contract, reindex, validate
from stackgame.commerce import CommerceParams, build_contract1
from stackgame.errors import IncompleteProfileError, MalformedTreeError
from stackgame.trees import (
    Decision,
    Leaf,
    StrategyProfile,
    decision_nodes,
    iter_nodes,
    leaves,
    owned_nodes,
    play,
    player_count,
    require_complete_profile,
    tree_size,
)


def two_level():
    t = node(0, leaf(1, 0), node(1, leaf(2, 2), leaf(0, 3)))
    return reindex(t, fresh_origins=True)


def test_reindex_assigns_preorder_uids():
    t = two_level()
    assert [n.uid for n in iter_nodes(t)] == [0, 1, 2, 3, 4]
    assert all(lf.origin == lf.uid for lf in leaves(t))


def test_reindex_preserves_origins_by_default():
    t = two_level()
    sub = t.children[1]  # uids 2,3,4
    again = reindex(sub)
    assert [n.uid for n in iter_nodes(again)] == [0, 1, 2]
    assert [lf.origin for lf in leaves(again)] == [3, 4]


def test_helpers():
    t = two_level()
    assert tree_size(t) == 5
    assert player_count(t) == 2
    assert len(decision_nodes(t)) == 2
    assert [n.uid for n in owned_nodes(t, 1)] == [2]


def test_validate_single_leaf_is_generic():
    t = reindex(leaf(5, 3), fresh_origins=True)
    report = validate(t, ("a", "b"))
    assert report.generic and report.strictly_generic


def test_validate_doomsday_strictly_generic(doomsday_tree):
    report = validate(doomsday_tree, ("i", "j"))
    assert report.generic
    assert report.strictly_generic  # per-player values {1,-inf,0} and {0,-inf,1}


def test_validate_contract1_not_strictly_generic():
    doc = build_contract1(CommerceParams.from_strings("10", "5", "30", "15"))
    report = validate(doc.root, doc.players)
    assert report.generic
    assert not report.strictly_generic  # the seller's price shows up at three leaves
    assert any(p == 1 for p, _, _ in report.duplicate_values)


def test_validate_rejects_bad_arity():
    t = reindex(node(0, leaf(1), leaf(0, 1)), fresh_origins=True)
    with pytest.raises(MalformedTreeError):
        validate(t, ("a", "b"))


def test_validate_rejects_fanout_one():
    bad = Decision(uid=0, owner=0, children=(Leaf(uid=1, payoffs=(), origin=1),))
    with pytest.raises(MalformedTreeError):
        validate(bad, ("a",))


def test_validate_rejects_duplicate_uids():
    a = leaf(1, 2, uid=1)
    b = leaf(3, 4, uid=1)
    bad = Decision(uid=0, owner=0, children=(a, b))
    with pytest.raises(MalformedTreeError):
        validate(bad, ("a", "b"))


def test_validate_rejects_unknown_owner():
    t = reindex(node(5, leaf(1, 0), leaf(0, 1)), fresh_origins=True)
    with pytest.raises(MalformedTreeError):
        validate(t, ("a", "b"))


def test_play_follows_profile():
    t = two_level()
    profile = StrategyProfile({0: 1, 2: 0})
    assert play(t, profile).payoffs == leaf(2, 2).payoffs


def test_incomplete_profile_detected():
    t = two_level()
    with pytest.raises(IncompleteProfileError):
        require_complete_profile(t, StrategyProfile({0: 0}))
    with pytest.raises(IncompleteProfileError):
        require_complete_profile(t, StrategyProfile({0: 0, 2: 7}))


def test_contract_node_structure():
    t = reindex(contract(0, node(1, leaf(1, 0), leaf(0, 1))), fresh_origins=True)
    validate(t, ("a", "b"))
    assert tree_size(t) == 4
