"""
Núcleo de álgebra linear exata sobre os racionais

Matrizes simétricas densas com entradas em QQ (sympy DomainMatrix), polinômio
característico exato, teste exato de semidefinição positiva e contagem de
raízes negativas por sequências de Sturm. Autovalores em ponto flutuante
(numpy) existem apenas para exibição e nunca decidem um veredicto.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import Poly, QQ, Symbol
from sympy.polys.matrices import DomainMatrix

from config import Config
from errors import DimensionError, PreconditionError

logger = logging.getLogger(__name__)

# Elemento de QQ (PythonMPQ, gmpy2.mpq ou flint.fmpq, conforme o ambiente)
Rational = QQ.dtype
RationalLike = Union[int, str, Fraction, Any]

LAMBDA = Symbol('lambda')


def parse_rational(text: str) -> Rational:
    """Converte 'num/den' ou 'num' em racional exato"""
    raw = text.strip()
    try:
        if '/' in raw:
            num, den = raw.split('/', 1)
            numerator, denominator = int(num), int(den)
        else:
            numerator, denominator = int(raw), 1
    except ValueError:
        raise ValueError(f"Racional inválido: {text!r}")
    if denominator == 0:
        raise ValueError(f"Denominador zero: {text!r}")
    return QQ(numerator, denominator)


def to_rational(value: RationalLike) -> Rational:
    """Converte inteiros, frações, strings e elementos de QQ para QQ"""
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, (bool, float)):
        raise TypeError(f"Tipo não suportado para racional exato: {type(value).__name__}")
    return QQ.convert(value)


def format_rational(value: Rational) -> str:
    """Sempre no formato 'num/den' em termos mínimos"""
    return f"{int(QQ.numer(value))}/{int(QQ.denom(value))}"


def format_rational_short(value: Rational) -> str:
    """Como format_rational, mas inteiros sem denominador"""
    den = int(QQ.denom(value))
    num = int(QQ.numer(value))
    return str(num) if den == 1 else f"{num}/{den}"


def rational_to_float(value: Rational) -> float:
    return int(QQ.numer(value)) / int(QQ.denom(value))


@dataclass(frozen=True, eq=False)
class RatMatrix:
    """Matriz quadrada densa de racionais exatos"""

    rep: DomainMatrix

    def __post_init__(self):
        rows, cols = self.rep.shape
        if rows != cols or rows < 1:
            raise DimensionError(f"Matriz deve ser quadrada e não vazia, recebido {rows}x{cols}")
        rep = self.rep if self.rep.domain == QQ else self.rep.convert_to(QQ)
        object.__setattr__(self, 'rep', rep.to_dense())

    # ---------- Construtores ----------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]]) -> 'RatMatrix':
        data = [[to_rational(x) for x in row] for row in rows]
        order = len(data)
        if any(len(row) != order for row in data):
            raise DimensionError("Linhas com comprimentos diferentes da ordem da matriz")
        return cls(DomainMatrix(data, (order, order), QQ))

    @classmethod
    def from_entries(cls, order: int, entries: Mapping[Tuple[int, int], RationalLike]) -> 'RatMatrix':
        """Constrói a partir de um dicionário esparso {(linha, coluna): valor}, índices 0-based"""
        dod = {}
        for (row, col), value in entries.items():
            if not (0 <= row < order and 0 <= col < order):
                raise DimensionError(f"Entrada ({row}, {col}) fora da ordem {order}")
            value = to_rational(value)
            if value:
                dod.setdefault(row, {})[col] = value
        return cls(DomainMatrix(dod, (order, order), QQ))

    @classmethod
    def from_object_array(cls, array: np.ndarray) -> 'RatMatrix':
        return cls.from_rows(array.tolist())

    @classmethod
    def identity(cls, order: int) -> 'RatMatrix':
        """I_n"""
        return cls(DomainMatrix.eye(order, QQ))

    @classmethod
    def ones(cls, order: int) -> 'RatMatrix':
        """J_n"""
        return cls(DomainMatrix.ones((order, order), QQ))

    @classmethod
    def zeros(cls, order: int) -> 'RatMatrix':
        return cls(DomainMatrix.zeros((order, order), QQ))

    @classmethod
    def diag(cls, values: Sequence[RationalLike]) -> 'RatMatrix':
        return cls(DomainMatrix.diag([to_rational(v) for v in values], QQ))

    # ---------- Acesso ----------
    @property
    def order(self) -> int:
        return self.rep.shape[0]

    def entry(self, row: int, col: int) -> Rational:
        """Entrada (linha, coluna) com índices 0-based"""
        return self.rep.rep.getitem(row, col)

    def rows(self) -> List[List[Rational]]:
        return self.rep.to_list()

    def diagonal(self) -> List[Rational]:
        return [self.entry(i, i) for i in range(self.order)]

    def to_object_array(self) -> np.ndarray:
        return np.array(self.rows(), dtype=object)

    def to_numpy(self) -> np.ndarray:
        return np.array([[rational_to_float(x) for x in row] for row in self.rows()], dtype=float)

    # ---------- Aritmética ----------
    def _check_same_order(self, other: 'RatMatrix'):
        if self.order != other.order:
            raise DimensionError(f"Ordens incompatíveis: {self.order} e {other.order}")

    def __add__(self, other: 'RatMatrix') -> 'RatMatrix':
        self._check_same_order(other)
        return RatMatrix(self.rep + other.rep)

    def __sub__(self, other: 'RatMatrix') -> 'RatMatrix':
        self._check_same_order(other)
        return RatMatrix(self.rep - other.rep)

    def __neg__(self) -> 'RatMatrix':
        return RatMatrix(-self.rep)

    def __matmul__(self, other: 'RatMatrix') -> 'RatMatrix':
        self._check_same_order(other)
        return RatMatrix(self.rep.matmul(other.rep))

    def scale(self, factor: RationalLike) -> 'RatMatrix':
        return RatMatrix(self.rep * to_rational(factor))

    def transpose(self) -> 'RatMatrix':
        return RatMatrix(self.rep.transpose())

    def kron(self, other: 'RatMatrix') -> 'RatMatrix':
        """Produto de Kronecker (a ordem do resultado é o produto das ordens)"""
        return RatMatrix.from_object_array(np.kron(self.to_object_array(), other.to_object_array()))

    def submatrix(self, indices: Sequence[int]) -> 'RatMatrix':
        """Submatriz principal nos índices 0-based dados"""
        return RatMatrix(self.rep.extract(list(indices), list(indices)))

    # ---------- Propriedades ----------
    def trace(self) -> Rational:
        return sum(self.diagonal(), QQ.zero)

    def is_symmetric(self) -> bool:
        return self == self.transpose()

    def is_zero(self) -> bool:
        return self.rep.is_zero_matrix

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.order == other.order and self.rows() == other.rows()

    __hash__ = None

    def __repr__(self) -> str:
        body = '; '.join(' '.join(format_rational_short(x) for x in row) for row in self.rows())
        return f"RatMatrix({self.order}: [{body}])"


def kron3(a: RatMatrix, b: RatMatrix, c: RatMatrix) -> RatMatrix:
    return a.kron(b).kron(c)


@dataclass(frozen=True)
class CharPoly:
    """Coeficientes de det(λI - A), do maior para o menor grau"""

    coefficients: Tuple[Rational, ...]

    def __post_init__(self):
        coeffs = tuple(to_rational(c) for c in self.coefficients)
        if not coeffs:
            raise ValueError("Polinômio sem coeficientes")
        object.__setattr__(self, 'coefficients', coeffs)

    @classmethod
    def from_poly(cls, poly: Poly) -> 'CharPoly':
        return cls(tuple(QQ.from_sympy(c) for c in poly.all_coeffs()))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_monic(self) -> bool:
        return self.coefficients[0] == QQ.one

    def is_zero(self) -> bool:
        return all(not c for c in self.coefficients)

    def to_poly(self) -> Poly:
        return Poly([QQ.to_sympy(c) for c in self.coefficients], LAMBDA, domain=QQ)

    def evaluate(self, x: float) -> float:
        return float(np.polyval([rational_to_float(c) for c in self.coefficients], x))

    def formatted(self) -> List[str]:
        return [format_rational(c) for c in self.coefficients]

    def __str__(self) -> str:
        return str(self.to_poly().as_expr())


def char_poly(a: RatMatrix) -> CharPoly:
    """Polinômio característico exato (algoritmo livre de divisões do sympy)"""
    return CharPoly(tuple(a.rep.charpoly()))


def is_psd_exact(a: RatMatrix) -> bool:
    """Decide A >= 0 exatamente pelos sinais dos coeficientes do polinômio característico.

    Escrevendo det(λI - A) = λ^n - e1 λ^(n-1) + e2 λ^(n-2) - ..., uma matriz
    simétrica (espectro real) é semidefinida positiva se e somente se todo
    e_k >= 0.
    """
    if not a.is_symmetric():
        raise PreconditionError("is_psd_exact exige matriz simétrica")
    return charpoly_is_psd(char_poly(a))


def charpoly_is_psd(p: CharPoly) -> bool:
    """Critério de sinais sobre um polinômio característico já calculado"""
    return all(c * (-1) ** k >= 0 for k, c in enumerate(p.coefficients))


def _sign(value) -> int:
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0


def _sign_changes(signs: Sequence[int]) -> int:
    nonzero = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(nonzero, nonzero[1:]) if a != b)


def _strip_content(poly: Poly) -> Poly:
    # escala positiva: preserva sinais, controla o crescimento dos coeficientes
    return poly.quo_ground(abs(poly.LC()))


def sturm_sequence(poly: Poly) -> List[Poly]:
    """Sequência de Sturm com restos exatos normalizados"""
    seq = [_strip_content(poly), _strip_content(poly.diff())]
    while seq[-1].degree() > 0:
        remainder = seq[-2].rem(seq[-1])
        if remainder.is_zero:
            break
        seq.append(_strip_content(-remainder))
    return seq


def _distinct_negative_roots(poly: Poly) -> int:
    """Raízes distintas em (-inf, 0) de um polinômio livre de quadrados"""
    if poly.degree() < 1:
        return 0
    seq = sturm_sequence(poly)
    at_minus_inf = [_sign(g.LC()) * (-1) ** g.degree() for g in seq]
    at_zero = [_sign(g.eval(0)) for g in seq]
    count = _sign_changes(at_minus_inf) - _sign_changes(at_zero)
    # Sturm conta raízes em (a, b]; descarta a raiz em zero
    if poly.eval(0) == 0:
        count -= 1
    return count


def count_negative_roots(p: Union[CharPoly, Poly]) -> int:
    """Número exato de raízes negativas, com multiplicidade.

    Supõe raízes todas reais (polinômios característicos de matrizes
    simétricas ou seus fatores).
    """
    poly = p.to_poly() if isinstance(p, CharPoly) else p
    if poly.is_zero:
        raise ValueError("Polinômio nulo não tem raízes contáveis")
    _, factors = poly.sqf_list()
    total = sum(mult * _distinct_negative_roots(factor) for factor, mult in factors)
    logger.debug(f"Raízes negativas: {total} (fatores livres de quadrados: {len(factors)})")
    return total


def eigenvalues_float(a: RatMatrix, tol: Optional[float] = None) -> List[float]:
    """Autovalores aproximados e ordenados (somente para relatório)"""
    tol = Config.EIGEN_TOLERANCE if tol is None else tol
    if not a.is_symmetric():
        raise PreconditionError("eigenvalues_float exige matriz simétrica")
    values = np.linalg.eigvalsh(a.to_numpy())
    return sorted(0.0 if abs(v) < tol else float(v) for v in values)
