"""
Motor de veredictos de separabilidade tripartida

- Teste PPT exato (critério de Peres) com testemunha NPT
- Decomposições separáveis construtivas por órbitas de arestas e por produto tensorial
- Verificação exata de decomposições
- Testemunha de emaranhamento do grafo estrela
"""

import itertools
import logging
import operator
from dataclasses import dataclass
from typing import ClassVar, Dict, List, Optional, Tuple, Union

import numpy as np
from sympy import Poly, QQ

from config import Config
from density_ops import (
    DensityMatrix,
    density_matrix,
    partial_transpose,
    partial_transpose_matrix,
    restrict_to_subcube,
    rho_star,
)
from errors import (
    DensityUndefinedError,
    DimensionError,
    OrbitPairingError,
    PreconditionError,
)
from exact_linalg import (
    LAMBDA,
    CharPoly,
    RatMatrix,
    Rational,
    char_poly,
    charpoly_is_psd,
    count_negative_roots,
    eigenvalues_float,
    format_rational,
    to_rational,
)
from graph_core import (
    Graph,
    Subsystem,
    TripartiteDims,
    VertexCoord,
    edge_orbit,
    vertex_coord,
    vertex_index,
)
from transpose_ops import degree_condition

logger = logging.getLogger(__name__)

# Padrões de sinal com produto -1, por número de subsistemas em que a aresta difere
SIGN_PATTERNS = {
    1: ((-1,),),
    2: ((1, -1), (-1, 1)),
    3: ((1, -1, 1), (1, 1, -1), (-1, -1, -1), (-1, 1, 1)),
}


@dataclass(frozen=True)
class PureProductState:
    """Estado produto não normalizado |a>|b>|c> com vetores inteiros"""

    a: Tuple[int, ...]
    b: Tuple[int, ...]
    c: Tuple[int, ...]

    def __post_init__(self):
        for name in ('a', 'b', 'c'):
            try:
                vec = tuple(operator.index(x) for x in getattr(self, name))
            except TypeError:
                raise PreconditionError(f"Fator {name} do estado produto tem entrada não inteira: {getattr(self, name)}")
            if not any(vec):
                raise PreconditionError(f"Fator {name} do estado produto é nulo")
            object.__setattr__(self, name, vec)

    @property
    def factors(self) -> Tuple[Tuple[int, ...], ...]:
        return (self.a, self.b, self.c)

    @property
    def shape(self) -> Tuple[int, int, int]:
        return (len(self.a), len(self.b), len(self.c))

    @property
    def norms(self) -> Tuple[int, int, int]:
        """Normas ao quadrado de cada fator"""
        return tuple(sum(x * x for x in vec) for vec in self.factors)

    @property
    def squared_norm(self) -> int:
        na, nb, nc = self.norms
        return na * nb * nc

    def vector(self) -> np.ndarray:
        return np.kron(np.kron(np.array(self.a, dtype=object), np.array(self.b, dtype=object)),
                       np.array(self.c, dtype=object))

    def support(self) -> List[Tuple[int, int]]:
        """Pares (índice plano 0-based, coeficiente) não nulos do vetor produto"""
        _, p, q = self.shape
        nonzero = [[(idx, x) for idx, x in enumerate(vec) if x] for vec in self.factors]
        return [(i * p * q + j * q + k, x * y * z)
                for (i, x), (j, y), (k, z) in itertools.product(*nonzero)]

    def projector(self, dims: TripartiteDims) -> RatMatrix:
        _check_state_shape(self, dims)
        entries = {}
        _accumulate(entries, QQ.one, self)
        return RatMatrix.from_entries(dims.n, entries)


def _check_state_shape(state: PureProductState, dims: TripartiteDims):
    if state.shape != dims.as_tuple():
        raise DimensionError(f"Estado com formato {state.shape} incompatível com dims {dims.as_tuple()}")


def _accumulate(entries: Dict[Tuple[int, int], Rational], weight: Rational, state: PureProductState):
    scale = weight * QQ(1, state.squared_norm)
    support = state.support()
    for r, vr in support:
        for c, vc in support:
            entries[(r, c)] = entries.get((r, c), QQ.zero) + scale * vr * vc


@dataclass(frozen=True)
class SeparableDecomposition:
    """Combinação convexa Σ p_i P[|a_i>|b_i>|c_i>]"""

    terms: Tuple[Tuple[Rational, PureProductState], ...]

    def __post_init__(self):
        object.__setattr__(self, 'terms', tuple((to_rational(w), s) for w, s in self.terms))

    def __len__(self) -> int:
        return len(self.terms)

    def weight_sum(self) -> Rational:
        return sum((w for w, _ in self.terms), QQ.zero)

    def mixture(self, dims: TripartiteDims) -> RatMatrix:
        entries = {}
        for weight, state in self.terms:
            _check_state_shape(state, dims)
            _accumulate(entries, weight, state)
        return RatMatrix.from_entries(dims.n, entries)


@dataclass(frozen=True)
class SeparableVerdict:
    decomposition: SeparableDecomposition
    verdict: ClassVar[str] = 'separable'


@dataclass(frozen=True)
class NptVerdict:
    """Transposta parcial com autovalor negativo (emaranhado pelo critério de Peres)"""

    subsystem: Subsystem
    charpoly: CharPoly
    min_eig_approx: float
    negative_roots: int
    verdict: ClassVar[str] = 'npt'


@dataclass(frozen=True)
class InconclusiveVerdict:
    reason: str
    diagnostics: Tuple[str, ...] = ()
    verdict: ClassVar[str] = 'inconclusive'


Verdict = Union[SeparableVerdict, NptVerdict, InconclusiveVerdict]

REASON_PPT = 'PPT'
REASON_DEGREE_PPT = 'degree-condition-fails-but-ppt'
REASON_ORBIT_PAIRING = 'orbit-pairing-failure'
REASON_MISMATCH = 'decomposition-mismatch'


def ppt_test(rho: DensityMatrix) -> Verdict:
    """Critério de Peres sobre os cortes A, B e C (nessa ordem)"""
    for sub in Subsystem:
        transposed = partial_transpose(rho, sub)
        poly = char_poly(transposed)
        if charpoly_is_psd(poly):
            logger.debug(f"ρ^T_{sub.name} é semidefinida positiva")
            continue
        negative = count_negative_roots(poly)
        min_eig = eigenvalues_float(transposed)[0]
        logger.debug(f"ρ^T_{sub.name} tem {negative} raízes negativas (mínimo ≈ {min_eig:.6g})")
        return NptVerdict(sub, poly, min_eig, negative)
    return InconclusiveVerdict(REASON_PPT)


def _orbit_terms(x: VertexCoord, y: VertexCoord, dims: TripartiteDims,
                 weight: Rational) -> List[Tuple[Rational, PureProductState]]:
    """Termos produto da órbita da aresta {x, y}: um por padrão de sinais com produto -1"""
    differing = [axis for axis in range(3) if x[axis] != y[axis]]
    terms = []
    for pattern in SIGN_PATTERNS[len(differing)]:
        signs = dict(zip(differing, pattern))
        vectors = []
        for axis in range(3):
            vec = [0] * dims[axis]
            vec[x[axis] - 1] = 1
            if axis in signs:
                vec[y[axis] - 1] = signs[axis]
            vectors.append(tuple(vec))
        terms.append((weight, PureProductState(*vectors)))
    return terms


def decompose_quadruple(i: int, j: int, k: int, r: int, s: int, t: int,
                        dims: TripartiteDims) -> SeparableDecomposition:
    """Decomposição da mistura uniforme σ das quatro diagonais do subcubo {i,r}x{j,s}x{k,t}"""
    if i == r or j == s or k == t:
        raise PreconditionError(f"Quádrupla exige i≠r, j≠s, k≠t: ({i},{j},{k};{r},{s},{t})")
    x, y = VertexCoord(i, j, k), VertexCoord(r, s, t)
    vertex_index(x, dims)
    vertex_index(y, dims)
    return SeparableDecomposition(tuple(_orbit_terms(x, y, dims, QQ(1, 4))))


def decompose_by_edge_orbits(g: Graph) -> SeparableDecomposition:
    """Decomposição construtiva para grafos que satisfazem a condição de grau.

    Arestas OneCoord formam órbitas unitárias, TwoCoord formam pares e
    ThreeCoord formam quádruplas. Cada aresta contribui peso 1/|E|.
    """
    if g.edge_count == 0:
        raise DensityUndefinedError("Grafo sem arestas não tem matriz densidade")
    report = degree_condition(g)
    if not report.holds:
        failing = ', '.join(sub.name for sub in report.failing_subsystems())
        raise PreconditionError(f"Condição de grau não satisfeita (cortes: {failing})")

    weight = QQ(1, g.edge_count)
    consumed = set()
    terms = []
    for e in g.sorted_edges():
        if e in consumed:
            continue
        orbit = edge_orbit(e, g.dims)
        missing = sorted(orbit - g.edges)
        if missing:
            raise OrbitPairingError(e, missing)
        consumed |= orbit
        terms.extend(_orbit_terms(vertex_coord(e[0], g.dims), vertex_coord(e[1], g.dims), g.dims, weight))

    logger.debug(f"Decomposição por órbitas: {len(terms)} termos para {g.edge_count} arestas")
    return SeparableDecomposition(tuple(terms))


def decompose_tensor_product(g1: Graph, g2: Graph, g3: Graph) -> SeparableDecomposition:
    """Decomposição de ρ(G1 ⊗ G2 ⊗ G3) com quatro termos por tripla de arestas"""
    for label, g in (('G1', g1), ('G2', g2), ('G3', g3)):
        if g.edge_count == 0:
            raise DensityUndefinedError(f"Fator {label} sem arestas")
    dims = TripartiteDims(g1.n, g2.n, g3.n)
    weight = QQ(1, 4 * g1.edge_count * g2.edge_count * g3.edge_count)
    terms = []
    for (a, b), (c, d), (e, f) in itertools.product(g1.sorted_edges(), g2.sorted_edges(), g3.sorted_edges()):
        terms.extend(_orbit_terms(VertexCoord(a, c, e), VertexCoord(b, d, f), dims, weight))
    return SeparableDecomposition(tuple(terms))


@dataclass(frozen=True)
class DecompositionMismatch:
    message: str
    location: Optional[str] = None

    def __str__(self) -> str:
        return self.message if self.location is None else f"{self.message} ({self.location})"


def find_decomposition_mismatch(rho: DensityMatrix,
                                d: SeparableDecomposition) -> Optional[DecompositionMismatch]:
    """Primeira falha da decomposição, ou None se ela reproduz ρ exatamente"""
    for weight, state in d.terms:
        _check_state_shape(state, rho.dims)

    for idx, (weight, _) in enumerate(d.terms, start=1):
        if weight <= 0:
            return DecompositionMismatch(f"peso não positivo {format_rational(weight)}", f"termo {idx}")

    total = d.weight_sum()
    if total != QQ.one:
        return DecompositionMismatch(f"soma dos pesos = {format_rational(total)}", "pesos")

    mixture = d.mixture(rho.dims)
    for r, (expected_row, got_row) in enumerate(zip(rho.mat.rows(), mixture.rows()), start=1):
        for c, (expected, got) in enumerate(zip(expected_row, got_row), start=1):
            if expected != got:
                return DecompositionMismatch(
                    f"entrada esperada {format_rational(expected)}, obtida {format_rational(got)}",
                    f"entrada ({r}, {c})",
                )
    return None


def verify_decomposition(rho: DensityMatrix, d: SeparableDecomposition) -> bool:
    return find_decomposition_mismatch(rho, d) is None


def classify(g: Graph) -> Verdict:
    """Veredicto completo: condição de grau, PPT e decomposição construtiva"""
    rho = density_matrix(g)
    report = degree_condition(g)

    if not report.holds:
        verdict = ppt_test(rho)
        if isinstance(verdict, NptVerdict):
            return verdict
        logger.warning("Condição de grau falha mas todas as transpostas parciais são PSD")
        diagnostics = tuple(
            f"{sub.name}: vértices {[v for v, _, _ in report.mismatches[sub]]}"
            for sub in report.failing_subsystems()
        )
        return InconclusiveVerdict(REASON_DEGREE_PPT, diagnostics)

    try:
        decomposition = decompose_by_edge_orbits(g)
    except OrbitPairingError as e:
        logger.info(f"Pareamento de órbitas falhou: {e}")
        return InconclusiveVerdict(REASON_ORBIT_PAIRING, (str(e),))

    mismatch = find_decomposition_mismatch(rho, decomposition)
    if mismatch is not None:
        logger.error(f"Decomposição construída não reproduz ρ(G): {mismatch}")
        return InconclusiveVerdict(REASON_MISMATCH, (str(mismatch),))
    return SeparableVerdict(decomposition)


def star_cubic(n: int) -> CharPoly:
    """λ³ - (n+1)/(2(n-1)) λ² + (n-4)/(2(n-1)²) λ + (n+4)/(4(n-1)³)"""
    return CharPoly((
        QQ.one,
        -QQ(n + 1, 2 * (n - 1)),
        QQ(n - 4, 2 * (n - 1) ** 2),
        QQ(n + 4, 4 * (n - 1) ** 3),
    ))


@dataclass(frozen=True)
class StarWitness:
    """Testemunha de emaranhamento de ρ(K_{1,n-1}) projetada no subcubo 2x2x2"""

    n: int
    dims: TripartiteDims
    projected: RatMatrix
    charpoly: CharPoly
    repeated_root: Rational
    multiplicity: int
    cubic: CharPoly
    expected_cubic: CharPoly
    matches_closed_form: bool
    negative_roots: int
    root_product: Rational
    min_eig_approx: float

    @property
    def entangled(self) -> bool:
        return self.negative_roots >= 1


def _split_linear_factor(poly: Poly, root: Rational) -> Tuple[Poly, int]:
    linear = Poly([1, -QQ.to_sympy(root)], LAMBDA, domain=QQ)
    multiplicity = 0
    while poly.degree() > 0:
        quotient, remainder = poly.div(linear)
        if not remainder.is_zero:
            break
        poly = quotient
        multiplicity += 1
    return poly, multiplicity


def star_witness(n: int, dims: TripartiteDims) -> StarWitness:
    if dims.n != n:
        raise DimensionError(f"Dimensões {dims.as_tuple()} incompatíveis com n={n}")
    if min(dims.as_tuple()) < Config.MIN_STAR_FACTOR:
        raise PreconditionError(f"Projeção exige m, p, q >= {Config.MIN_STAR_FACTOR}, recebido {dims.as_tuple()}")
    if n < Config.MIN_STAR_ORDER:
        raise PreconditionError(f"Testemunha do grafo estrela exige n >= {Config.MIN_STAR_ORDER}, recebido {n}")

    rho = rho_star(n, dims)
    block, block_dims = restrict_to_subcube(rho.mat, dims, (2, 2, 2))
    projected = partial_transpose_matrix(block, block_dims, Subsystem.A)
    poly = char_poly(projected)

    root = QQ(1, 2 * (n - 1))
    rest, multiplicity = _split_linear_factor(poly.to_poly(), root)
    cubic = CharPoly.from_poly(rest)
    expected = star_cubic(n)
    negative = count_negative_roots(rest)
    # produto das raízes de um polinômio mônico de grau d é (-1)^d vezes o termo constante
    root_product = cubic.coefficients[-1] * (-1) ** cubic.degree

    witness = StarWitness(
        n=n,
        dims=dims,
        projected=projected,
        charpoly=poly,
        repeated_root=root,
        multiplicity=multiplicity,
        cubic=cubic,
        expected_cubic=expected,
        matches_closed_form=(cubic == expected and multiplicity == 5),
        negative_roots=negative,
        root_product=root_product,
        min_eig_approx=eigenvalues_float(projected)[0],
    )
    logger.debug(f"Estrela n={n}: multiplicidade {multiplicity}, raízes negativas {negative}")
    return witness


def verdict_summary(verdict: Verdict) -> str:
    if isinstance(verdict, SeparableVerdict):
        return f"separable ({len(verdict.decomposition)} termos)"
    if isinstance(verdict, NptVerdict):
        return f"npt (corte {verdict.subsystem.name}, mínimo ≈ {verdict.min_eig_approx:.6g})"
    return f"inconclusive ({verdict.reason})"
