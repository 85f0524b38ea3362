from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gossipclock.errors import InvalidParameterError, UnsupportedDescriptorError
from gossipclock.topology import Topology, format_descriptor, generate, parse_descriptor


@pytest.mark.parametrize(
    "desc, n_vertices, n_edges",
    [
        ("path:n=4", 4, 3),
        ("cycle:n=5", 5, 5),
        ("complete:n=4", 4, 6),
        ("star:n=4", 4, 3),
        ("symstar:n=3,k=2", 7, 6),
        ("ccs:n=3,k=2", 6, 6),
        ("wheel:n=6", 7, 12),
        ("complete:n=2*complete:n=3", 6, 9),
    ],
)
def test_sizes(desc, n_vertices, n_edges):
    topo = generate(desc)
    assert topo.n_vertices == n_vertices
    assert topo.n_edges == n_edges
    assert topo.is_connected()


def test_custom_graph_round_trip():
    topo = Topology.from_edges(4, [(0, 1), (2, 1), (2, 3)])
    again = Topology.from_json(topo.to_json())
    assert again.edges == topo.edges
    assert again.generator == "custom"


def test_unknown_family():
    with pytest.raises(UnsupportedDescriptorError):
        generate("hypercube:n=3")


@pytest.mark.parametrize("desc", ["path:n=1", "path:m=3", "cycle:n=2", "path:n=x"])
def test_bad_parameters(desc):
    with pytest.raises(InvalidParameterError):
        generate(desc)


def test_orbits_are_consistent():
    for desc in ["symstar:n=4,k=3", "ccs:n=3,k=3", "wheel:n=7", "lollipop:n=3,k=2"]:
        assert generate(desc).orbit_consistent()


_FAMILIES = st.one_of(
    st.builds(lambda n: f"path:n={n}", st.integers(2, 12)),
    st.builds(lambda n: f"cycle:n={n}", st.integers(3, 12)),
    st.builds(lambda n, k: f"symstar:n={n},k={k}", st.integers(1, 5), st.integers(1, 4)),
    st.builds(lambda n, k: f"ccs:n={n},k={k}", st.integers(2, 5), st.integers(1, 4)),
    st.builds(lambda n: f"wheel:n={n}", st.integers(3, 10)),
)


@settings(max_examples=60, deadline=None)
@given(_FAMILIES)
def test_descriptor_round_trip(desc):
    topo = generate(desc)
    assert format_descriptor(parse_descriptor(desc)) == desc
    again = Topology.from_json(topo.to_json())
    assert again.edges == topo.edges
    assert again.descriptor() == topo.descriptor()
