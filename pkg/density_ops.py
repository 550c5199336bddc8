"""
Matrizes densidade de grafos

ρ(G) = L(G)/d_G, a companheira ρ₊(G) = (Δ(G)+M(G))/d_G, fatores puros de
aresta, formas fechadas de K_n e K_{1,n-1} e transpostas parciais T_A, T_B, T_C
sobre C^m ⊗ C^p ⊗ C^q.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from sympy import QQ

from errors import DensityUndefinedError, DimensionError, GraphValidationError, PreconditionError
from exact_linalg import RatMatrix, is_psd_exact
from graph_core import (
    Edge,
    Graph,
    Subsystem,
    TripartiteDims,
    adjacency_matrix,
    canonical_edge,
    degree_matrix,
    laplacian,
    vertex_coord,
)

logger = logging.getLogger(__name__)

__all__ = [
    'DensityMatrix', 'Subsystem', 'density_matrix', 'rho_plus', 'edge_factor', 'edge_factor_plus',
    'partial_transpose', 'partial_transpose_matrix', 'rho_complete', 'rho_star',
    'tensor_density_mixture', 'restrict_to_subcube',
]


@dataclass(frozen=True)
class DensityMatrix:
    """Matriz densidade real simétrica com dimensões tripartidas.

    A construção verifica ordem, simetria e traço; ``validate`` acrescenta o
    teste exato de semidefinição positiva, que é caro.
    """

    mat: RatMatrix
    dims: TripartiteDims

    def __post_init__(self):
        if self.mat.order != self.dims.n:
            raise DimensionError(
                f"Ordem {self.mat.order} difere de m·p·q = {self.dims.n} para dims {self.dims.as_tuple()}"
            )
        if not self.mat.is_symmetric():
            raise PreconditionError("Matriz densidade deve ser simétrica")
        if self.mat.trace() != QQ.one:
            raise PreconditionError(f"Traço da matriz densidade deve ser 1, obtido {self.mat.trace()}")

    @property
    def order(self) -> int:
        return self.mat.order

    def validate(self) -> bool:
        if not is_psd_exact(self.mat):
            raise PreconditionError("Matriz densidade não é semidefinida positiva")
        return True


def _degree_sum_or_raise(g: Graph) -> int:
    if g.edge_count == 0:
        raise DensityUndefinedError("Grafo sem arestas: d_G = 0 e a matriz densidade é indefinida")
    return g.degree_sum


def density_matrix(g: Graph) -> DensityMatrix:
    """ρ(G) = L(G)/d_G"""
    d = _degree_sum_or_raise(g)
    logger.debug(f"ρ(G): n={g.n}, |E|={g.edge_count}, d_G={d}")
    return DensityMatrix(laplacian(g).scale(QQ(1, d)), g.dims)


def rho_plus(g: Graph) -> DensityMatrix:
    """ρ₊(G) = (Δ(G) + M(G))/d_G"""
    d = _degree_sum_or_raise(g)
    return DensityMatrix((degree_matrix(g) + adjacency_matrix(g)).scale(QQ(1, d)), g.dims)


def _edge_projector(e: Edge, n: int, sign: int, dims: Optional[TripartiteDims]) -> DensityMatrix:
    a, b = canonical_edge(*e)
    if a == b:
        raise GraphValidationError(f"Laço não permitido no vértice {a}")
    if not (1 <= a <= n and 1 <= b <= n):
        raise GraphValidationError(f"Aresta {{{a}, {b}}} fora de 1..{n}")
    dims = dims or TripartiteDims(n, 1, 1)
    half = QQ(1, 2)
    entries = {
        (a - 1, a - 1): half,
        (b - 1, b - 1): half,
        (a - 1, b - 1): half * sign,
        (b - 1, a - 1): half * sign,
    }
    return DensityMatrix(RatMatrix.from_entries(n, entries), dims)


def edge_factor(e: Edge, n: int, dims: Optional[TripartiteDims] = None) -> DensityMatrix:
    """ρ(H_e) = P[(|a> - |b>)/√2]"""
    return _edge_projector(e, n, -1, dims)


def edge_factor_plus(e: Edge, n: int, dims: Optional[TripartiteDims] = None) -> DensityMatrix:
    """ρ₊(H_e) = P[(|a> + |b>)/√2]"""
    return _edge_projector(e, n, 1, dims)


def partial_transpose_matrix(mat: RatMatrix, dims: TripartiteDims, sub: Subsystem) -> RatMatrix:
    """Transposta parcial de uma matriz tripartida.

    Para T_A: [X^T_A]_{ijk; i'j'k'} = X_{i'jk; ij'k'}. O índice plano
    (i-1)pq + (j-1)q + k coincide com a ordem C do numpy, então basta trocar
    o eixo de linha do subsistema com o eixo de coluna correspondente.
    """
    if mat.order != dims.n:
        raise DimensionError(f"Ordem {mat.order} difere de m·p·q = {dims.n}")
    shape = dims.as_tuple()
    tensor = mat.to_object_array().reshape(shape + shape)
    shuffled = tensor.swapaxes(sub.axis, sub.axis + 3).reshape(dims.n, dims.n)
    return RatMatrix.from_object_array(shuffled)


def partial_transpose(rho: DensityMatrix, sub: Subsystem) -> RatMatrix:
    return partial_transpose_matrix(rho.mat, rho.dims, sub)


def _check_order(n: int, dims: Optional[TripartiteDims]) -> TripartiteDims:
    if n < 2:
        raise GraphValidationError(f"Forma fechada exige n >= 2, recebido {n}")
    if dims is None:
        return TripartiteDims(n, 1, 1)
    if dims.n != n:
        raise DimensionError(f"Dimensões {dims.as_tuple()} incompatíveis com n={n}")
    return dims


def rho_complete(n: int, dims: Optional[TripartiteDims] = None) -> DensityMatrix:
    """ρ(K_n) = (n I_n - J_n) / (n(n-1))"""
    dims = _check_order(n, dims)
    mat = (RatMatrix.identity(n).scale(n) - RatMatrix.ones(n)).scale(QQ(1, n * (n - 1)))
    return DensityMatrix(mat, dims)


def rho_star(n: int, dims: Optional[TripartiteDims] = None) -> DensityMatrix:
    """ρ(K_{1,n-1}) com centro no vértice 1 e prefator 1/(2(n-1))"""
    dims = _check_order(n, dims)
    entries = {(0, 0): n - 1}
    for v in range(1, n):
        entries[(v, v)] = 1
        entries[(0, v)] = -1
        entries[(v, 0)] = -1
    mat = RatMatrix.from_entries(n, entries).scale(QQ(1, 2 * (n - 1)))
    return DensityMatrix(mat, dims)


def tensor_density_mixture(g1: Graph, g2: Graph, g3: Graph) -> DensityMatrix:
    """¼[ρ⊗ρ⊗ρ + ρ₊⊗ρ⊗ρ₊ + ρ⊗ρ₊⊗ρ₊ + ρ₊⊗ρ₊⊗ρ] dos três fatores"""
    minus = [density_matrix(g).mat for g in (g1, g2, g3)]
    plus = [rho_plus(g).mat for g in (g1, g2, g3)]
    patterns = ((-1, -1, -1), (1, -1, 1), (-1, 1, 1), (1, 1, -1))
    total = None
    for pattern in patterns:
        factors = [plus[i] if s > 0 else minus[i] for i, s in enumerate(pattern)]
        term = factors[0].kron(factors[1]).kron(factors[2])
        total = term if total is None else total + term
    dims = TripartiteDims(g1.n, g2.n, g3.n)
    return DensityMatrix(total.scale(QQ(1, 4)), dims)


def restrict_to_subcube(mat: RatMatrix, dims: TripartiteDims,
                        keep: Sequence[int]) -> Tuple[RatMatrix, TripartiteDims]:
    """Compressão (P⊗Q⊗R)·X·(P⊗Q⊗R) restrita aos estados com i <= keep[0], j <= keep[1], k <= keep[2]"""
    if mat.order != dims.n:
        raise DimensionError(f"Ordem {mat.order} difere de m·p·q = {dims.n}")
    keep = tuple(keep)
    if len(keep) != 3 or any(not 1 <= kp <= bound for kp, bound in zip(keep, dims.as_tuple())):
        raise DimensionError(f"Subcubo {keep} incompatível com dims {dims.as_tuple()}")
    indices = [s - 1 for s in range(1, dims.n + 1)
               if all(c <= kp for c, kp in zip(vertex_coord(s, dims), keep))]
    return mat.submatrix(indices), TripartiteDims(*keep)
