import pytest

from app.exceptions import GraphFormatError
from app.topology.codec import dump_graph, load_graph, read_graph, write_graph
from app.topology.generator import assign_roles, generate_watts_strogatz


def test_dump_and_load_preserve_the_graph(tmp_path):
    graph = assign_roles(generate_watts_strogatz(20, 4, 0.2, seed=3, lat_max=3), 3, 0.25, seed=3)
    path = write_graph(graph, tmp_path / "g.txt")
    assert read_graph(path) == graph
    assert dump_graph(read_graph(path)) == dump_graph(graph)


def test_comments_and_blank_lines_are_ignored():
    text = "# a path\n3 0 0.0 0\n\n0 1 1\n1 2 2\n0 miner 1.0\n1 hfn\n2 spv\n"
    graph = load_graph(text)
    assert graph.latency(1, 2) == 2
    assert graph.miners == [0]


@pytest.mark.parametrize(
    "text",
    [
        "",
        "3 0 0.0\n",
        "2 0 0.0 0\n0 1\n",
        "2 0 0.0 0\n0 1 1\n0 miner\n1 hfn\n",
        "2 0 0.0 0\n0 5 1\n",
        "2 0 0.0 0\n0 1 1\n0 hfn 0.5\n1 hfn\n",
    ],
)
def test_malformed_text_raises(text):
    with pytest.raises(GraphFormatError):
        load_graph(text)
