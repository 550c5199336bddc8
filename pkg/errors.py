"""
Exceções do projeto de separabilidade tripartida de grafos
"""

from typing import Optional, Sequence, Tuple


class SeparabilityError(Exception):
    """Erro base de todos os módulos"""


class DimensionError(SeparabilityError, ValueError):
    """Coordenada fora do intervalo ou dimensões incompatíveis"""


class GraphValidationError(SeparabilityError, ValueError):
    """Grafo inválido (laço, vértice fora do intervalo, permutação inválida)"""


class GraphParseError(SeparabilityError, ValueError):
    """Linha malformada em um arquivo de grafo"""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"linha {line_no}: {message}")


class DensityUndefinedError(SeparabilityError, ValueError):
    """Matriz densidade indefinida (grafo sem arestas, d_G = 0)"""


class PreconditionError(SeparabilityError, ValueError):
    """Pré-condição de uma operação não satisfeita"""


class OrbitPairingError(SeparabilityError):
    """Aresta parceira ausente ao montar as órbitas de arestas"""

    def __init__(self, edge: Tuple[int, int], missing: Sequence[Tuple[int, int]]):
        self.edge = edge
        self.missing = tuple(missing)
        super().__init__(
            f"falha no pareamento de órbitas: aresta {edge} sem parceiras {list(self.missing)}"
        )


class CertificateError(SeparabilityError, ValueError):
    """Certificado malformado ou que não reproduz a matriz densidade"""

    def __init__(self, message: str, location: Optional[str] = None):
        self.location = location
        super().__init__(message if location is None else f"{message} ({location})")
