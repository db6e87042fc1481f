import random

import pytest

from gluediag.diagram import GluingDiagram
from gluediag.graphs import make_graph
from gluediag.paths import TaggedPath, eps


def P(*edges, tag=0):
    return TaggedPath(tag, tuple(edges))


# Example diagram: target H has a square root vertex 0 and a round vertex 1,
# source G has the same layout. Edge lists are (origin, terminus).
H_EDGES = [(0, 0), (0, 0), (0, 1), (0, 1), (1, 0), (1, 1), (1, 1)]
G_EDGES = [(0, 0), (0, 0), (0, 1), (1, 1), (1, 1), (1, 0), (1, 1)]


def example_blocks():
    return (
        {P(0): 0},
        {P(1): 0},
        {P(2, 5): 0, P(2, 6): 1, P(2, 4): 2, P(3, 5): 3, P(3, 6): 4, P(3, 4): 5},
        {P(5): 0, P(6): 1, P(4, 2): 3, P(4, 3): 4, P(4, 0): 5, P(4, 1): 2},
        {P(5, tag=1): 0, P(6, tag=1): 1, P(4, 2, tag=1): 3, P(4, 3, tag=1): 4,
         P(4, 0, tag=1): 5, P(4, 1, tag=1): 2},
        {eps(2): 0},
        {eps(3): 0, eps(4): 1, P(2, tag=5): 3, P(3, tag=5): 4, P(0, tag=5): 5, P(1, tag=5): 2},
    )


def example_diagram():
    h = make_graph(2, H_EDGES, root=0)
    g = make_graph(2, G_EDGES, root=0)
    return GluingDiagram(g, h, ((0,), (1, 1, 0, 1, 1, 0)), example_blocks(), {eps(0): 0})


def expanded_example_blocks():
    """The example expanded at member 0 of the round vertex, written out by hand."""
    return (
        {P(0): 0},
        {P(1): 0},
        {P(2, 5, 4): 5, P(2, 5, 5): 6, P(2, 5, 6): 7, P(2, 6): 0, P(2, 4): 1,
         P(3, 5): 2, P(3, 6): 3, P(3, 4): 4},
        {P(4, tag=6): 5, P(5, tag=6): 6, P(6, tag=6): 7, eps(7): 0,
         P(2, tag=5): 2, P(3, tag=5): 3, P(0, tag=5): 4, P(1, tag=5): 1},
        {P(5, 4): 5, P(5, 5): 6, P(5, 6): 7, P(6): 0, P(4, 2): 2, P(4, 3): 3,
         P(4, 0): 4, P(4, 1): 1},
        {eps(1): 0},
        {P(4, tag=2): 5, P(5, tag=2): 6, P(6, tag=2): 7, eps(3): 0,
         P(2, tag=4): 2, P(3, tag=4): 3, P(0, tag=4): 4, P(1, tag=4): 1},
    )


@pytest.fixture
def example():
    return example_diagram()


@pytest.fixture
def rng():
    return random.Random(20240611)
