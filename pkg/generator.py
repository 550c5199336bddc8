"""
Gerador determinístico de famílias de grafos tripartidos
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from config import Config
from errors import GraphValidationError
from graph_core import (
    Edge,
    Graph,
    TripartiteDims,
    complete_graph,
    edge_orbit,
    nearest_point_edges,
    star_graph,
    tensor_product,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratedGraph:
    """Grafo gerado e comentários que o acompanham no arquivo de saída"""

    graph: Graph
    comments: Tuple[str, ...] = field(default_factory=tuple)


def nearest_point_orbits(dims: TripartiteDims) -> List[Tuple[Edge, ...]]:
    """Partição das arestas de vizinhança em órbitas, em ordem canônica"""
    orbits = []
    seen = set()
    for e in nearest_point_edges(dims):
        if e in seen:
            continue
        orbit = edge_orbit(e, dims)
        seen |= orbit
        orbits.append(tuple(sorted(orbit)))
    return orbits


class GraphGenerator:
    """Gerador de grafos com semente fixa (numpy.random.default_rng)"""

    def __init__(self, seed: Optional[int] = None):
        self.seed = Config.DEFAULT_SEED if seed is None else seed
        self.rng = np.random.default_rng(self.seed)

    def generate(self, family: str, dims: TripartiteDims, noise: int = 0) -> GeneratedGraph:
        logger.info(f"Gerando família '{family}' com dims {dims.as_tuple()} (semente {self.seed})")
        if family == 'complete':
            return GeneratedGraph(complete_graph(dims.n, dims))
        if family == 'star':
            return GeneratedGraph(star_graph(dims.n, dims))
        if family == 'tensor':
            return self.tensor(dims)
        if family == 'nearest-random':
            return self.nearest_random(dims, noise=noise)
        raise ValueError(f"Família desconhecida: {family} (opções: {', '.join(Config.GRAPH_FAMILIES)})")

    def random_graph(self, dims: TripartiteDims, edge_probability: float = 0.5) -> Graph:
        """Grafo de Erdős–Rényi G(n, p) sobre os vértices de dims"""
        pairs = list(itertools.combinations(range(1, dims.n + 1), 2))
        mask = self.rng.random(len(pairs)) < edge_probability
        return Graph.from_edges(dims, (pair for pair, keep in zip(pairs, mask) if keep))

    def random_factor(self, n: int) -> Graph:
        """Grafo aleatório em n >= 2 vértices com ao menos uma aresta"""
        if n < 2:
            raise GraphValidationError(f"Fator com ao menos uma aresta exige n >= 2, recebido {n}")
        g = self.random_graph(TripartiteDims(n, 1, 1))
        if g.edge_count == 0:
            pairs = list(itertools.combinations(range(1, n + 1), 2))
            g = Graph.from_edges(g.dims, [pairs[int(self.rng.integers(len(pairs)))]])
        return g

    def tensor(self, dims: TripartiteDims) -> GeneratedGraph:
        factors = [self.random_factor(size) for size in dims.as_tuple()]
        comments = tuple(
            f"fator {label}: " + ' '.join(f"{a}-{b}" for a, b in g.sorted_edges())
            for label, g in zip('ABC', factors)
        )
        return GeneratedGraph(tensor_product(*factors), comments)

    def nearest_random(self, dims: TripartiteDims, probability: Optional[float] = None,
                       noise: int = 0) -> GeneratedGraph:
        """União de órbitas de vizinhança sorteadas, com `noise` alternâncias aleatórias de arestas.

        Sem ruído o resultado satisfaz a condição de grau por construção.
        """
        probability = Config.NEAREST_ORBIT_PROBABILITY if probability is None else probability
        orbits = nearest_point_orbits(dims)
        if not orbits:
            raise GraphValidationError(f"Dims {dims.as_tuple()} não têm arestas de vizinhança")
        chosen = [orbit for orbit, keep in zip(orbits, self.rng.random(len(orbits)) < probability) if keep]
        if not chosen:
            chosen = [orbits[int(self.rng.integers(len(orbits)))]]
        edges = {e for orbit in chosen for e in orbit}

        candidates = nearest_point_edges(dims)
        toggled = []
        for _ in range(noise):
            e = candidates[int(self.rng.integers(len(candidates)))]
            edges ^= {e}
            toggled.append(e)
        if not edges:
            edges = set(chosen[0])

        comments = [f"órbitas sorteadas: {len(chosen)} de {len(orbits)}"]
        if toggled:
            comments.append("ruído: " + ' '.join(f"{a}-{b}" for a, b in toggled))
        return GeneratedGraph(Graph.from_edges(dims, edges), tuple(comments))
