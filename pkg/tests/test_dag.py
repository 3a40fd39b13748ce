import random

from hypothesis import given

from selfnest.dag import DagClass, DagReduction, class_sizes, expand, is_linear, node_count, reduce, to_dot
from selfnest.randgen import GenSpec, random_tree
from selfnest.tree import is_isomorphic, parse_tree, serialize_canonical

from .conftest import shuffled, trees


def test_leaf():
    d = reduce(parse_tree("()"))
    assert len(d) == 1 and list(d.edges()) == []
    assert is_linear(d)
    assert node_count(d) == 1


def test_cherry():
    d = reduce(parse_tree("(()())"))
    assert len(d) == 2
    assert list(d.edges()) == [(1, 0, 2)]
    assert is_linear(d)


def test_three_classes():
    d = reduce(parse_tree("(()(()()))"))
    assert [c.height for c in d.classes] == [0, 1, 2]
    assert d.classes[1].out_edges == {0: 2}
    assert d.classes[2].out_edges == {0: 1, 1: 1}
    assert node_count(d) == 5


def test_two_height_two_classes_not_linear():
    d = reduce(parse_tree("(((()))((()())))"))
    assert sorted(c.height for c in d.classes).count(2) == 2
    assert not is_linear(d)


def test_expand_small():
    leaf = DagClass(0, {}, "()")
    assert serialize_canonical(expand(DagReduction((leaf,), 0))) == "()"
    d = DagReduction((leaf, DagClass(1, {0: 3}, "(()()())")), 1)
    assert serialize_canonical(expand(d)) == "(()()())"


def test_linear_dag_all_twos():
    classes = [DagClass(0, {}, "")]
    for h in range(1, 4):
        classes.append(DagClass(h, {h - 1: 2}, ""))
    d = DagReduction(tuple(classes), 3)
    assert node_count(d) == 15
    assert class_sizes(d) == [1, 3, 7, 15]
    assert len(expand(d)) == 15


def test_expand_round_trip_random():
    for k in range(50):
        t = random_tree(GenSpec(1 + 3 * k, k))
        assert is_isomorphic(expand(reduce(t)), t)


@given(trees)
def test_node_count_matches(t):
    assert node_count(reduce(t)) == len(t)


@given(trees)
def test_linear_iff_class_per_height(t):
    d = reduce(t)
    assert is_linear(d) == (len(d) == t.height + 1)


@given(trees)
def test_reduce_isomorphism_invariant(t):
    assert reduce(shuffled(t, random.Random(1))) == reduce(t)


def test_dot_output():
    dot = to_dot(reduce(parse_tree("(()())")))
    assert dot.startswith("digraph dag {")
    assert 'c1 -> c0 [label="2"];' in dot
    assert 'label="h=1,n=3"' in dot
