import xml.etree.ElementTree as ET

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from corpusmix.dtm import SENTENCE, build_dtm, top_terms
from corpusmix.explore import term_network, wordcloud_data
from corpusmix.export import bar_svg, line_svg, network_svg, write_csv, write_network
from corpusmix.textprep import TokenizedDoc


def docs(*token_lists):
    return [TokenizedDoc(f"d{i}", (tuple(t),)) for i, t in enumerate(token_lists)]


def test_wordcloud_endpoints():
    cloud = wordcloud_data([("a", 10), ("b", 5)], min_size=1, max_size=3)
    assert [(c.term, c.size) for c in cloud] == [("a", 3.0), ("b", 1.0)]
    assert wordcloud_data([("x", 4)]) [0].size == 5.0
    assert [c.size for c in wordcloud_data([("x", 4), ("y", 4)])] == [5.0, 5.0]


def test_wordcloud_truncates_and_validates():
    freqs = [(f"t{i}", i) for i in range(1, 200)]
    cloud = wordcloud_data(freqs, max_terms=35)
    assert len(cloud) == 35 and cloud[0].term == "t199"
    with pytest.raises(ValueError):
        wordcloud_data([])
    with pytest.raises(ValueError):
        wordcloud_data([("a", 1)], min_size=3, max_size=3)


@given(st.lists(st.tuples(st.text("abcdef", min_size=1, max_size=4), st.integers(1, 1000)),
                min_size=1, max_size=50, unique_by=lambda tf: tf[0]))
def test_wordcloud_monotone(freqs):
    cloud = wordcloud_data(freqs, max_terms=20)
    for x, y in zip(cloud, cloud[1:]):
        assert x.frequency >= y.frequency and x.size >= y.size
    assert all(1.0 <= c.size <= 5.0 for c in cloud)


def test_term_network_examples():
    net = term_network(build_dtm(docs(["a", "b"], ["a"])), 2)
    assert net.nodes == [("a", 2), ("b", 1)]
    assert net.edges == [("a", "b", 1)]
    apart = term_network(build_dtm(docs(["a", "a"], ["b", "b"])), 2)
    assert apart.edges == []


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.sampled_from("abcdefgh"), min_size=1, max_size=10), min_size=1, max_size=10),
       st.integers(1, 8))
def test_term_network_properties(token_lists, n):
    dtm = build_dtm(docs(*token_lists))
    net = term_network(dtm, n)
    assert net.nodes == top_terms(dtm, n)
    df = dict(zip(dtm.vocab.terms, (dtm.matrix > 0).sum(axis=0).A1))
    for a, b, w in net.edges:
        assert a < b and 1 <= w <= min(df[a], df[b])
    assert net.edges == sorted(net.edges)


def test_sentence_context_network():
    tokdocs = [TokenizedDoc("d", (("a", "b"), ("a", "c")))]
    net = term_network(build_dtm(tokdocs, context=SENTENCE), 3)
    assert ("b", "c", 1) not in net.edges and ("a", "b", 1) in net.edges


def test_network_files(tmp_path):
    nodes = [("work", 3), ("home", 1), ("covid", 2)]
    edges = [("work", "home", 88.09), ("work", "covid", 12.5)]
    paths = write_network(tmp_path / "ego_work", nodes, edges, "degree", "llr", focal="work")
    assert [p.name for p in paths] == ["ego_work.graphml", "ego_work.dot", "ego_work.svg"]
    g = nx.read_graphml(paths[0])
    assert g.nodes["work"]["degree"] == 3 and g.edges["work", "home"]["llr"] == 88.09
    dot = paths[1].read_text()
    assert '"work" -- "home" [llr=88.09];' in dot
    root = ET.fromstring(paths[2].read_text())
    assert root.tag.endswith("svg")


def test_svg_scaling():
    svg = network_svg([("a", 4), ("b", 2)], [("a", "b", 10.0)], focal="a")
    assert 'r="16.00"' in svg and 'r="10.00"' in svg
    assert 'stroke-width="5.00"' in svg and 'stroke-opacity="1.00"' in svg
    ET.fromstring(line_svg([2, 3, 4], [10.0, 8.0, 9.0], "k", "BIC"))
    ET.fromstring(bar_svg(["work", "year"], [914, 604]))


def test_write_csv_floats(tmp_path):
    write_csv(tmp_path / "x.csv", ["a", "b"], [("t", 0.1), ("u", 2)])
    assert (tmp_path / "x.csv").read_text() == "a,b\nt,0.1\nu,2\n"
