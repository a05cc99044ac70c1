import pytest
from hypothesis import given, settings, strategies as st

from fixtures import (
    CATERPILLAR_WORD,
    TWO_RET_LRQ,
    TWO_RET_WORD,
    caterpillar_example,
    labeled_cherry,
    not_tree_child,
    two_reticulations,
)
from spinaltc.codec import (
    caterpillar_spines,
    decode_nlsctc,
    decode_nlstc,
    decompose_paths,
    encode_nlsctc,
    encode_nlstc,
    is_spinal_caterpillar_tree_child,
    lrq_encode,
)
from spinaltc.enumeration import brute_force_oracle, enumerate_c1_classes, enumerate_c2_classes
from spinaltc.network import Kind, NetworkError, find_spines, is_spinal_tree_child, isomorphic
from spinaltc.words import Word, WordError, transform_t


def test_example_word():
    net, _ = two_reticulations()
    w = encode_nlstc(net)
    assert w.letters == TWO_RET_WORD
    assert (w.n, w.k) == (4, 2)


def test_example_lrq_reading():
    net, _ = two_reticulations()
    assert str(lrq_encode(net)) == TWO_RET_LRQ


def test_example_components():
    net, ids = two_reticulations()
    comps = decompose_paths(net)
    spinal = [c.vertices for c in comps if c.kind == "spinal"]
    names = {v: k for k, v in ids.items()}
    assert [[names[v] for v in p] for p in spinal] == [
        ["a", "b", "c", "d", "e", "e1"],
        ["f", "g", "g1"],
        ["h", "i", "j1"],
    ]
    assert sorted(names[c.vertices[0]] for c in comps if c.kind == "exterior") == ["b1", "j"]


def test_decode_example_is_isomorphic():
    net, _ = two_reticulations()
    assert isomorphic(decode_nlstc(Word(TWO_RET_WORD, 4, 2)), net)


def test_empty_word_is_single_leaf():
    net = decode_nlstc(Word((), 0, 0))
    assert sorted(k.value for k in net.kinds.values()) == ["leaf", "root"]
    assert encode_nlstc(net) == Word((), 0, 0)


def test_decode_rejects_non_members():
    with pytest.raises(WordError, match="prefix-dominance"):
        decode_nlstc(Word((2, 2, 1, 1), 2, 0))
    with pytest.raises(WordError):
        decode_nlstc(Word((1, 1, 2, 1, 2), 2, 1))


def test_c2_word_accepted_by_caterpillar_decoder_only():
    w = Word((1, 1, 2, 1, 2), 2, 1)
    net = decode_nlsctc(w)
    assert not is_spinal_tree_child(net)
    assert is_spinal_caterpillar_tree_child(net)
    assert encode_nlsctc(net) == w


def test_encode_rejects_labeled_and_non_spinal():
    net, _ = labeled_cherry()
    with pytest.raises(NetworkError):
        encode_nlstc(net)
    bad, _ = not_tree_child()
    with pytest.raises(NetworkError):
        encode_nlstc(bad.unlabeled())


def test_caterpillar_example_word():
    net, _ = caterpillar_example()
    assert (net.n, net.k) == (8, 2)
    assert not is_spinal_tree_child(net)
    assert caterpillar_spines(net)
    assert encode_nlsctc(net).letters == CATERPILLAR_WORD
    assert isomorphic(decode_nlsctc(Word(CATERPILLAR_WORD, 7, 2)), net)


def test_spinal_networks_are_caterpillar_networks():
    net, _ = two_reticulations()
    assert is_spinal_caterpillar_tree_child(net)
    assert encode_nlsctc(net) == encode_nlstc(net)


@pytest.mark.parametrize("n, k", [(n, k) for n in range(1, 6) for k in range(0, min(n, 4))])
def test_transform_agrees_with_encoder_on_oracle_networks(n, k):
    for net in brute_force_oracle(n, k).networks:
        word = encode_nlstc(net)
        assert transform_t(lrq_encode(net)) == word
        # the word does not depend on which spine is read
        assert len({str(lrq_encode(net, s)) for s in find_spines(net)}) == 1


@settings(max_examples=60, deadline=None)
@given(n=st.integers(0, 6), data=st.data())
def test_c1_roundtrip_property(n, data):
    k = data.draw(st.integers(0, min(n, 3)))
    w = data.draw(st.sampled_from(list(enumerate_c1_classes(n, k))))
    net = decode_nlstc(w)
    assert (net.n, net.k) == (n + 1, k)
    assert net.vertices_of(Kind.TREE).__len__() == n + k
    assert encode_nlstc(net) == w


@settings(max_examples=60, deadline=None)
@given(n=st.integers(0, 5), data=st.data())
def test_c2_roundtrip_property(n, data):
    k = data.draw(st.integers(0, min(n, 2)))
    w = data.draw(st.sampled_from(list(enumerate_c2_classes(n, k))))
    assert encode_nlsctc(decode_nlsctc(w)) == w
