"""
Fixtures compartilhadas dos testes
"""

import os
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from graph_core import Graph, TripartiteDims

FIXTURES_DIR = Path(__file__).resolve().parent / 'fixtures'


@pytest.fixture
def dims_222():
    return TripartiteDims(2, 2, 2)


@pytest.fixture
def dims_322():
    return TripartiteDims(3, 2, 2)


@pytest.fixture
def entangled_graph(dims_322):
    """Grafo de 12 vértices com a aresta {u1v1w1, u2v2w2}"""
    return Graph.from_edges(dims_322, [(1, 8)])


@pytest.fixture
def local_graph(dims_322):
    """Grafo de 12 vértices com a aresta {u1v1w1, u1v1w2}"""
    return Graph.from_edges(dims_322, [(1, 2)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def fixtures_dir():
    return FIXTURES_DIR
