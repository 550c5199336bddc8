"""
Grafos com indexação tripartida de vértices

Os vértices de um grafo em n = m·p·q vértices são guardados pelo índice plano
s = (i-1)pq + (j-1)q + k (1-based), que corresponde ao estado |u_i>|v_j>|w_k>.
Coordenadas são calculadas sob demanda.
"""

import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Mapping, NamedTuple, Optional, Tuple

from errors import DimensionError, GraphValidationError
from exact_linalg import RatMatrix, kron3

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


class Subsystem(Enum):
    """Subsistemas A, B e C"""

    A = 0
    B = 1
    C = 2

    @property
    def axis(self) -> int:
        return self.value

    @classmethod
    def parse(cls, label: str) -> 'Subsystem':
        try:
            return cls[label.strip().upper()]
        except KeyError:
            raise ValueError(f"Subsistema inválido: {label!r} (use A, B ou C)")


@dataclass(frozen=True)
class TripartiteDims:
    """Dimensões (m, p, q) dos subsistemas A, B e C"""

    m: int
    p: int
    q: int

    def __post_init__(self):
        for name, value in (('m', self.m), ('p', self.p), ('q', self.q)):
            if not isinstance(value, int) or value < 1:
                raise DimensionError(f"Dimensão {name} deve ser inteiro positivo, recebido {value!r}")

    @property
    def n(self) -> int:
        return self.m * self.p * self.q

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.m, self.p, self.q)

    def __getitem__(self, axis: int) -> int:
        return self.as_tuple()[axis]


class VertexCoord(NamedTuple):
    """Rótulo u_i v_j w_k (1-based)"""

    i: int
    j: int
    k: int

    def label(self) -> str:
        return f"u{self.i}v{self.j}w{self.k}"


def vertex_index(c: VertexCoord, d: TripartiteDims) -> int:
    """s = (i-1)pq + (j-1)q + k"""
    for value, bound, name in zip(c, d.as_tuple(), 'ijk'):
        if not 1 <= value <= bound:
            raise DimensionError(f"Coordenada {name}={value} fora de 1..{bound}")
    return (c.i - 1) * d.p * d.q + (c.j - 1) * d.q + c.k


def vertex_coord(s: int, d: TripartiteDims) -> VertexCoord:
    if not 1 <= s <= d.n:
        raise DimensionError(f"Índice de vértice {s} fora de 1..{d.n}")
    i, rest = divmod(s - 1, d.p * d.q)
    j, k = divmod(rest, d.q)
    return VertexCoord(i + 1, j + 1, k + 1)


def canonical_edge(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Graph:
    """Grafo sem laços com dimensões tripartidas"""

    dims: TripartiteDims
    edges: FrozenSet[Edge]

    def __post_init__(self):
        n = self.dims.n
        canonical = set()
        for a, b in self.edges:
            if a == b:
                raise GraphValidationError(f"Laço não permitido no vértice {a}")
            if not (1 <= a <= n and 1 <= b <= n):
                raise GraphValidationError(f"Aresta {{{a}, {b}}} fora de 1..{n}")
            canonical.add(canonical_edge(a, b))
        object.__setattr__(self, 'edges', frozenset(canonical))

    @classmethod
    def from_edges(cls, dims: TripartiteDims, edges: Iterable[Edge]) -> 'Graph':
        return cls(dims, frozenset(tuple(e) for e in edges))

    @classmethod
    def from_coord_edges(cls, dims: TripartiteDims,
                         edges: Iterable[Tuple[VertexCoord, VertexCoord]]) -> 'Graph':
        return cls.from_edges(dims, ((vertex_index(VertexCoord(*a), dims),
                                      vertex_index(VertexCoord(*b), dims)) for a, b in edges))

    @property
    def n(self) -> int:
        return self.dims.n

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def degree_sum(self) -> int:
        """d_G = 2|E(G)|"""
        return sum(self.degrees())

    def has_edge(self, a: int, b: int) -> bool:
        """Indicador de adjacência λ"""
        return canonical_edge(a, b) in self.edges

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def degrees(self) -> List[int]:
        """Graus d_G(v_1), ..., d_G(v_n)"""
        counts = Counter(v for e in self.edges for v in e)
        return [counts.get(v, 0) for v in range(1, self.n + 1)]

    def with_dims(self, dims: TripartiteDims) -> 'Graph':
        if dims.n != self.n:
            raise DimensionError(f"Dimensões {dims.as_tuple()} não somam {self.n} vértices")
        return Graph(dims, self.edges)


def adjacency_matrix(g: Graph) -> RatMatrix:
    """M(G): 0/1 simétrica com diagonal nula"""
    entries = {}
    for a, b in g.edges:
        entries[(a - 1, b - 1)] = 1
        entries[(b - 1, a - 1)] = 1
    return RatMatrix.from_entries(g.n, entries)


def degree_matrix(g: Graph) -> RatMatrix:
    """Δ(G)"""
    return RatMatrix.diag(g.degrees())


def laplacian(g: Graph) -> RatMatrix:
    """L(G) = Δ(G) - M(G)"""
    return degree_matrix(g) - adjacency_matrix(g)


def complete_graph(n: int, dims: Optional[TripartiteDims] = None) -> Graph:
    """K_n (por padrão em dimensões (n, 1, 1))"""
    dims = _dims_for(n, dims)
    return Graph.from_edges(dims, itertools.combinations(range(1, n + 1), 2))


def star_graph(n: int, dims: Optional[TripartiteDims] = None) -> Graph:
    """K_{1,n-1} com centro no vértice 1"""
    if n < 2:
        raise GraphValidationError(f"Grafo estrela exige n >= 2, recebido {n}")
    dims = _dims_for(n, dims)
    return Graph.from_edges(dims, ((1, v) for v in range(2, n + 1)))


def _dims_for(n: int, dims: Optional[TripartiteDims]) -> TripartiteDims:
    if n < 1:
        raise GraphValidationError(f"Número de vértices deve ser positivo, recebido {n}")
    if dims is None:
        return TripartiteDims(n, 1, 1)
    if dims.n != n:
        raise DimensionError(f"Dimensões {dims.as_tuple()} incompatíveis com n={n}")
    return dims


def tensor_product(g1: Graph, g2: Graph, g3: Graph) -> Graph:
    """G1 ⊗ G2 ⊗ G3, com M = M(G1) ⊗ M(G2) ⊗ M(G3).

    Cada tripla de arestas ({a,b}, {c,d}, {e,f}) gera as quatro arestas entre
    as diagonais do cubo {a,b} x {c,d} x {e,f}.
    """
    dims = TripartiteDims(g1.n, g2.n, g3.n)
    edges = set()
    for (a, b), (c, d), (e, f) in itertools.product(g1.edges, g2.edges, g3.edges):
        for x, y, z in itertools.product((a, b), (c, d), (e, f)):
            u = vertex_index(VertexCoord(x, y, z), dims)
            v = vertex_index(VertexCoord(a + b - x, c + d - y, e + f - z), dims)
            edges.add(canonical_edge(u, v))
    logger.debug(f"Produto tensorial {dims.as_tuple()}: {len(edges)} arestas")
    return Graph.from_edges(dims, edges)


def tensor_adjacency(g1: Graph, g2: Graph, g3: Graph) -> RatMatrix:
    """M(G1) ⊗ M(G2) ⊗ M(G3) calculado diretamente pelo produto de Kronecker"""
    return kron3(adjacency_matrix(g1), adjacency_matrix(g2), adjacency_matrix(g3))


class EdgeKind(Enum):
    ONE_COORD = 'OneCoord'
    TWO_COORD = 'TwoCoord'
    THREE_COORD = 'ThreeCoord'


@dataclass(frozen=True)
class EdgeClass:
    """Classificação da aresta pelos subsistemas em que as pontas diferem"""

    tag: EdgeKind
    differing: FrozenSet[Subsystem]


_KIND_BY_COUNT = {1: EdgeKind.ONE_COORD, 2: EdgeKind.TWO_COORD, 3: EdgeKind.THREE_COORD}


def classify_edge(e: Edge, d: TripartiteDims) -> EdgeClass:
    """ThreeCoord é a aresta 'emaranhada' (i≠r, j≠s, k≠t)"""
    x, y = vertex_coord(e[0], d), vertex_coord(e[1], d)
    differing = frozenset(sub for sub in Subsystem if x[sub.axis] != y[sub.axis])
    return EdgeClass(_KIND_BY_COUNT[len(differing)], differing)


def edge_class_histogram(g: Graph) -> Dict[EdgeKind, int]:
    counts = Counter(classify_edge(e, g.dims).tag for e in g.edges)
    return {kind: counts.get(kind, 0) for kind in EdgeKind}


def subgraph_by_kind(g: Graph, kinds: Iterable[EdgeKind]) -> Graph:
    wanted = set(kinds)
    return Graph(g.dims, frozenset(e for e in g.edges if classify_edge(e, g.dims).tag in wanted))


def is_nearest_edge(e: Edge, d: TripartiteDims) -> bool:
    x, y = vertex_coord(e[0], d), vertex_coord(e[1], d)
    return all(abs(a - b) <= 1 for a, b in zip(x, y))


def is_nearest_point_graph(g: Graph) -> bool:
    """Arestas de comprimento 1, √2 ou √3 no reticulado m x p x q (ambas as diagonais)"""
    return all(is_nearest_edge(e, g.dims) for e in g.edges)


def nearest_point_edges(d: TripartiteDims) -> List[Edge]:
    """Todas as arestas entre vizinhos de cubo unitário, em ordem canônica"""
    edges = set()
    for s in range(1, d.n + 1):
        c = vertex_coord(s, d)
        for delta in itertools.product((-1, 0, 1), repeat=3):
            if delta == (0, 0, 0):
                continue
            other = tuple(v + dv for v, dv in zip(c, delta))
            if all(1 <= v <= bound for v, bound in zip(other, d.as_tuple())):
                edges.add(canonical_edge(s, vertex_index(VertexCoord(*other), d)))
    return sorted(edges)


def swap_coordinate(e: Edge, d: TripartiteDims, sub: Subsystem) -> Edge:
    """Troca a coordenada do subsistema entre as duas pontas da aresta"""
    x, y = list(vertex_coord(e[0], d)), list(vertex_coord(e[1], d))
    x[sub.axis], y[sub.axis] = y[sub.axis], x[sub.axis]
    a, b = vertex_index(VertexCoord(*x), d), vertex_index(VertexCoord(*y), d)
    # a troca de coordenadas iguais é a identidade, nunca um laço
    assert a != b
    return canonical_edge(a, b)


def edge_orbit(e: Edge, d: TripartiteDims) -> FrozenSet[Edge]:
    """Órbita da aresta sob as trocas de coordenada.

    OneCoord: a própria aresta. TwoCoord: as duas diagonais do quadrado.
    ThreeCoord: as quatro diagonais principais do subcubo.
    """
    orbit = {canonical_edge(*e)}
    frontier = [canonical_edge(*e)]
    while frontier:
        current = frontier.pop()
        for sub in Subsystem:
            image = swap_coordinate(current, d, sub)
            if image not in orbit:
                orbit.add(image)
                frontier.append(image)
    return frozenset(orbit)


def apply_vertex_permutation(g: Graph, perm: Mapping[int, int]) -> Graph:
    """Aplica P·M(G)·P^T; vértices ausentes do mapeamento ficam fixos"""
    n = g.n
    full = {v: perm.get(v, v) for v in range(1, n + 1)}
    if any(k not in full for k in perm):
        raise GraphValidationError(f"Permutação menciona vértices fora de 1..{n}")
    if sorted(full.values()) != list(range(1, n + 1)):
        raise GraphValidationError("Permutação não é uma bijeção em 1..n")
    return Graph.from_edges(g.dims, ((full[a], full[b]) for a, b in g.edges))
