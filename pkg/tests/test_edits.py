import random

import pytest
from hypothesis import given

from selfnest.edits import (
    EditError,
    EditOp,
    IllegalEdit,
    Kind,
    _apply_unchecked,
    apply,
    can_apply,
    is_zhang_valid_insertion,
    legal_deletions,
    node_delta,
    violation,
)
from selfnest.oracle import enumerate_trees
from selfnest.tree import leaf, parse_tree, serialize, serialize_canonical

from .conftest import trees

T = "(((()))(()))"  # root 0 -> a=1 (chain of height 2), b=4 (unary, height 1)


def test_add_internal_conditions():
    t = parse_tree(T)
    assert t.children(0) == (1, 4)
    assert can_apply(t, EditOp.add_internal(0, 4))
    reason = violation(t, EditOp.add_internal(0, 1))
    assert reason is not None and "AI" in reason


def test_add_internal_result():
    t = parse_tree(T)
    out = apply(t, EditOp.add_internal(0, 4))
    assert serialize(out) == "(((()))((())))"
    assert all(out.node_height(v) == t.node_height(v) for v in t.nodes)


def test_add_subtree():
    out = apply(parse_tree("(()())"), EditOp.add_subtree(0, leaf()))
    assert serialize_canonical(out) == "(()()())"


def test_delete_subtree():
    t = parse_tree("(()())")
    op = EditOp.delete_subtree(0, 1)
    assert can_apply(t, op)
    assert serialize(apply(t, op)) == "(())"


def test_delete_internal_needs_sibling():
    t = parse_tree("((()))")
    with pytest.raises(IllegalEdit, match="sibling"):
        apply(t, EditOp.delete_internal(1))


def test_bad_ids():
    t = parse_tree("(()())")
    with pytest.raises(EditError):
        can_apply(t, EditOp.delete_subtree(0, 9))
    with pytest.raises(EditError):
        can_apply(t, EditOp.add_internal(1, 2))
    with pytest.raises(EditError):
        can_apply(t, EditOp.delete_internal(0))
    with pytest.raises(EditError):
        can_apply(parse_tree("(()())"), EditOp.delete_internal(1))


def test_op_field_validation():
    with pytest.raises(EditError):
        EditOp(Kind.ADD_INTERNAL, 0)
    with pytest.raises(EditError):
        EditOp(Kind.DELETE_INTERNAL, 0, child=1)
    with pytest.raises(EditError):
        EditOp(Kind.DELETE_SUBTREE, 0, child=1, payload=leaf())


@pytest.mark.parametrize("k, total, ok", [(0, 3, True), (2, 3, False), (3, 3, True), (1, 3, True), (0, 0, True)])
def test_zhang(k, total, ok):
    assert is_zhang_valid_insertion(k, total) is ok


def test_zhang_range():
    with pytest.raises(ValueError):
        is_zhang_valid_insertion(4, 3)


def test_fresh_ids_not_reused():
    t = parse_tree("(()())")
    t2 = apply(t, EditOp.add_subtree(0, leaf()))
    t3 = apply(t2, EditOp.delete_subtree(0, max(t2.nodes)))
    t4 = apply(t3, EditOp.add_subtree(0, leaf()))
    assert max(t4.nodes) > max(t2.nodes)


def test_di_sibling_conditions_agree():
    """Sibling of height >= H(w)  <=>  sibling of height H(parent) - 1."""
    checked = 0
    for n in range(2, 10):
        for t in enumerate_trees(n):
            for w in t.nodes:
                u = t.parent(w)
                if u is None or len(t.children(w)) != 1:
                    continue
                sibs = [x for x in t.children(u) if x != w]
                parent_form = any(t.node_height(x) + 1 == t.node_height(u) for x in sibs)
                assert can_apply(t, EditOp.delete_internal(w)) == parent_form
                checked += 1
    assert checked > 1000


def _all_ops(t, rng):
    for v in t.nodes:
        for c in t.children(v):
            yield EditOp.add_internal(v, c)
            yield EditOp.delete_subtree(v, c)
        if t.parent(v) is not None and len(t.children(v)) == 1:
            yield EditOp.delete_internal(v)
        yield EditOp.add_subtree(v, enumerate_trees_cached[rng.randrange(len(enumerate_trees_cached))])


enumerate_trees_cached = [t for n in range(1, 5) for t in enumerate_trees(n)]


def _heights_kept(before, after):
    return all(after.node_height(v) == before.node_height(v) for v in before.nodes if v in after)


@given(trees)
def test_legal_ops_preserve_heights(t):
    rng = random.Random(len(t))
    for op in _all_ops(t, rng):
        if can_apply(t, op):
            out = apply(t, op)
            assert _heights_kept(t, out)
            assert len(out) - len(t) == node_delta(t, op)


def test_conditions_are_tight():
    """Every illegal op on small trees does change some surviving node's height."""
    rng = random.Random(0)
    illegal = 0
    for n in range(2, 8):
        for t in enumerate_trees(n):
            for op in _all_ops(t, rng):
                if not can_apply(t, op):
                    illegal += 1
                    assert not _heights_kept(t, _apply_unchecked(t, op)), (serialize(t), op)
    assert illegal > 100


def test_legal_deletions_are_legal():
    t = parse_tree("(((()))((())(())))")
    ops = list(legal_deletions(t))
    assert ops and all(can_apply(t, op) for op in ops)
    assert {op.kind for op in ops} == {Kind.DELETE_INTERNAL, Kind.DELETE_SUBTREE}
