"""
Transpostas parciais de grafos e condição de grau
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from graph_core import Graph, Subsystem, swap_coordinate

logger = logging.getLogger(__name__)

# (vértice, grau em G, grau em G^Γ)
DegreeMismatch = Tuple[int, int, int]


def partial_transpose_graph(g: Graph, sub: Subsystem) -> Graph:
    """G^Γ: {ijk, rst} é aresta se e somente se a troca da coordenada do subsistema é aresta de G"""
    return Graph(g.dims, frozenset(swap_coordinate(e, g.dims, sub) for e in g.edges))


@dataclass(frozen=True)
class DegreeReport:
    """Resultado da comparação Δ(G) = Δ(G^Γ_A) = Δ(G^Γ_B) = Δ(G^Γ_C)"""

    holds: bool
    mismatches: Dict[Subsystem, Tuple[DegreeMismatch, ...]] = field(default_factory=dict)

    def mismatch_count(self) -> int:
        return sum(len(items) for items in self.mismatches.values())

    def failing_subsystems(self) -> List[Subsystem]:
        return [sub for sub in Subsystem if self.mismatches.get(sub)]


def degree_condition(g: Graph) -> DegreeReport:
    base = g.degrees()
    mismatches = {}
    for sub in Subsystem:
        transposed = partial_transpose_graph(g, sub).degrees()
        mismatches[sub] = tuple(
            (v, d, dt) for v, (d, dt) in enumerate(zip(base, transposed), start=1) if d != dt
        )
        if mismatches[sub]:
            logger.debug(f"Condição de grau falha em {sub.name}: {len(mismatches[sub])} vértices")
    holds = not any(mismatches.values())
    return DegreeReport(holds, mismatches)
