from __future__ import annotations

import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orient_nt.canonical import (
    canonical_form,
    canonical_labeling,
    degree_signature,
    graph_form,
    isomorphism,
    plane_form,
)
from orient_nt.digraph_metrics import ceil_half
from orient_nt.exact_solver import oriented_diameter_exact
from orient_nt.generators import (
    enumerate as enumerate_graphs,
    enumerate_plane,
    enumeration_counts,
    fan_graph,
    oracle_near_triangulations,
    outer_extensions,
    random_maximal_outerplanar,
    random_near_triangulation,
    snake,
    tight_family,
    triangle,
)
from orient_nt.plane_graph import (
    format_pg,
    is_maximal_outerplanar,
    is_near_triangulation,
    mirror,
    relabel,
)

# isomorphism classes of 2-connected near triangulations on n vertices
ABSTRACT_COUNTS = {3: 1, 4: 2, 5: 4, 6: 14, 7: 50, 8: 244}
# plane classes (outer face fixed, reflections identified)
PLANE_COUNTS = {3: 1, 4: 2, 5: 4, 6: 16, 7: 63, 8: 328}


def shuffled(g, seed):
    vs = list(g.vertices)
    perm = vs[:]
    random.Random(seed).shuffle(perm)
    return relabel(g, dict(zip(vs, perm)))


# ------------------------------------------------------------------ canonical


def test_canonical_form_is_labelling_invariant():
    for seed in range(10):
        g = random_near_triangulation(12, seed, 0.5)
        h = shuffled(g, seed + 100)
        assert graph_form(g) == graph_form(h)
        assert plane_form(g) == plane_form(h)


def test_canonical_form_separates_classes():
    forms = [graph_form(g) for g in enumerate_graphs(7)]
    assert len(set(forms)) == len(forms)


def test_plane_form_identifies_mirror_images():
    g = random_near_triangulation(10, 4, 0.4)
    assert plane_form(g) == plane_form(mirror(g))


def test_isomorphism_maps_edges_onto_edges():
    g = random_near_triangulation(11, 2, 0.7)
    h = shuffled(g, 9)
    m = isomorphism(g.adjacency(), h.adjacency())
    assert m is not None
    assert {tuple(sorted((m[a], m[b]))) for a, b in g.edges} == set(h.edges)
    other = fan_graph(11)
    assert graph_form(other) != graph_form(g)
    assert isomorphism(g.adjacency(), other.adjacency()) is None


def test_canonical_labeling_order_is_a_permutation(k4):
    code, order = canonical_labeling(k4.adjacency())
    assert sorted(order) == sorted(k4.vertices)
    assert canonical_form(k4.adjacency()).startswith("4:")
    assert degree_signature(k4.adjacency()) == (3, 3, 3, 3)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(4, 9), seed=st.integers(0, 10_000))
def test_canonical_form_agrees_with_networkx_isomorphism(n, seed):
    a = random_near_triangulation(n, seed, 0.5)
    b = random_near_triangulation(n, seed + 1, 0.5)
    same = nx.is_isomorphic(nx.Graph(list(a.edges)), nx.Graph(list(b.edges)))
    assert (graph_form(a) == graph_form(b)) == same


# ----------------------------------------------------------------- generators


@pytest.mark.parametrize("bias", [0.0, 0.3, 0.7, 1.0])
def test_random_graphs_are_near_triangulations(bias):
    for seed in range(5):
        g = random_near_triangulation(25, seed, bias)
        assert g.n == 25 and is_near_triangulation(g)
        if bias == 0.0:
            assert is_maximal_outerplanar(g)
        if bias == 1.0:
            assert len(g.outer_cycle()) == 3


def test_random_generation_is_deterministic():
    a = random_near_triangulation(40, 17, 0.3)
    b = random_near_triangulation(40, 17, 0.3)
    assert format_pg(a) == format_pg(b)
    assert format_pg(a) != format_pg(random_near_triangulation(40, 18, 0.3))


def test_random_generation_validates_arguments():
    with pytest.raises(ValueError):
        random_near_triangulation(2)
    with pytest.raises(ValueError):
        random_near_triangulation(5, 0, 1.5)


def test_outerplanar_families():
    for n in range(3, 12):
        assert is_maximal_outerplanar(fan_graph(n))
        assert is_maximal_outerplanar(snake(n))
        assert is_maximal_outerplanar(random_maximal_outerplanar(n, n))
    assert max(fan_graph(9).degree(v) for v in fan_graph(9).vertices) == 8
    assert random_maximal_outerplanar(9, fan=True).edges == fan_graph(9).edges


def test_outer_extensions_grow_by_one(tri):
    kids = list(outer_extensions(tri))
    assert kids and all(k.n == 4 and is_near_triangulation(k) for k in kids)


def test_enumeration_counts_are_frozen():
    assert enumeration_counts(8) == ABSTRACT_COUNTS
    assert {n: len(enumerate_plane(n)) for n in range(3, 9)} == PLANE_COUNTS


@pytest.mark.parametrize("n", [3, 4, 5])
def test_enumeration_matches_oracle(n):
    ours = enumerate_graphs(n)
    theirs = oracle_near_triangulations(n)
    assert len(ours) == len(theirs)
    for g in ours:
        h = nx.Graph(list(g.edges))
        assert sum(nx.is_isomorphic(h, t) for t in theirs) == 1


def test_enumeration_reaches_the_octahedron(octahedron):
    # adding ears and splitting faces alone would miss it
    assert is_near_triangulation(octahedron) and octahedron.m == 12


def test_enumeration_outputs_are_valid():
    for g in enumerate_graphs(7):
        assert is_near_triangulation(g) and g.n == 7


def test_tight_family_values():
    for n in range(5, 11):
        g = tight_family(n)
        assert is_maximal_outerplanar(g) and g.n == n
        assert oriented_diameter_exact(g)[0] == ceil_half(n)
    # the plain snake on six vertices is one of the small exceptions
    assert oriented_diameter_exact(snake(6))[0] == 4
    with pytest.raises(ValueError):
        tight_family(4)
    assert triangle().n == 3
