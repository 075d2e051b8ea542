import pytest
from hypothesis import given

from dagmatrix import IndexPartition, Query
from dagmatrix.fileio import (
    EXAMPLES,
    GraphFormatError,
    format_graph,
    graph_to_dot,
    load_example,
    load_graph,
    parse_graph,
    pattern_to_dot,
)
from dagmatrix.induced import covariance_graph_given_C, induced_components

from conftest import parent_graphs


@given(parent_graphs(max_d=8))
def test_format_parse_roundtrip(G):
    assert parse_graph(format_graph(G)) == G


def test_comments_and_blank_lines():
    G = parse_graph("# chain\n\nd 3  # three nodes\n1 2\n\n2 3 # last\n")
    assert G.arrows() == [(1, 2), (2, 3)]


@pytest.mark.parametrize(
    "text, lineno, fragment",
    [
        ("1 2\n", 1, "header"),
        ("d x\n", 1, "node count"),
        ("d 3\n1 2 3\n", 2, "arrow line"),
        ("d 3\n1 a\n", 2, "bad arrow"),
        ("d 3\n1 2\n2 1\n", 3, "order"),
        ("d 3\n1 2\n1 2\n", 3, "duplicate"),
        ("d 3\n1 4\n", 2, ""),
    ],
)
def test_parse_errors_carry_line_numbers(text, lineno, fragment):
    with pytest.raises(GraphFormatError) as err:
        parse_graph(text, "g.txt")
    assert err.value.lineno == lineno
    assert str(err.value).startswith(f"g.txt:{lineno}: ")
    assert fragment in str(err.value)


def test_missing_header_and_file(tmp_path):
    with pytest.raises(GraphFormatError, match="missing header"):
        parse_graph("# nothing\n")
    with pytest.raises(GraphFormatError):
        load_graph(tmp_path / "absent.txt")


def test_load_graph(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("d 2\n1 2\n")
    assert load_graph(path).arrows() == [(1, 2)]


def test_dot_of_parent_graph(chain):
    dot = graph_to_dot(chain)
    assert dot.startswith("digraph G {")
    assert "  2 -> 1;" in dot and "  4 -> 3;" in dot
    assert "1 -> 2" not in dot


def test_pattern_dot_kinds(chain):
    S = covariance_graph_given_C(chain, {3})
    dot = pattern_to_dot(S, "covariance")
    assert dot.startswith("graph G {")
    assert "  1 -- 2 [style=dashed];" in dot
    assert "1 -- 4" not in dot
    plain = pattern_to_dot(S, "concentration")
    assert "  1 -- 2;" in plain
    P = induced_components(chain, IndexPartition.split(4, {1, 4})).P_a_given_b
    directed = pattern_to_dot(P, "directed")
    assert "  2 -> 1;" in directed and "  3 -> 4;" in directed
    with pytest.raises(ValueError):
        pattern_to_dot(S, "mixed")


def test_bundled_examples():
    assert load_example("sixnode").d == 6
    G = load_example("sevennode")
    assert G.d == 7 and (4, 7) in G.arrows()
    assert set(EXAMPLES) == {"sixnode", "sevennode"}
    with pytest.raises(GraphFormatError):
        load_example("nope")
