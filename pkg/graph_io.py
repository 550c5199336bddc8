"""
Leitura e escrita de arquivos de grafo e payloads JSON

Formato de texto:
    dims m p q
    edge i j k  r s t      # coordenadas 1-based u_i v_j w_k
    e a b                  # índices planos
Linhas em branco e comentários iniciados por '#' são ignorados.
"""

import json
import logging
from typing import Any, Dict, Iterable, List, Optional

from errors import CertificateError, DimensionError, GraphParseError, GraphValidationError
from exact_linalg import (
    CharPoly,
    RatMatrix,
    format_rational,
    format_rational_short,
    parse_rational,
)
from graph_core import Graph, Subsystem, TripartiteDims, VertexCoord, canonical_edge, vertex_coord, vertex_index
from separability import (
    InconclusiveVerdict,
    NptVerdict,
    PureProductState,
    SeparableDecomposition,
    SeparableVerdict,
    StarWitness,
    Verdict,
)
from transpose_ops import DegreeReport

logger = logging.getLogger(__name__)

MIN_EIG_DIGITS = 12


def _parse_ints(tokens: List[str], count: int, line_no: int, what: str) -> List[int]:
    if len(tokens) != count:
        raise GraphParseError(line_no, f"'{what}' espera {count} inteiros, recebido {len(tokens)}")
    try:
        return [int(tok) for tok in tokens]
    except ValueError:
        raise GraphParseError(line_no, f"'{what}' com valor não inteiro: {' '.join(tokens)}")


def parse_graph(text: str) -> Graph:
    """Converte o texto de um arquivo de grafo em Graph.

    Arestas duplicadas são descartadas com aviso; laços e vértices fora do
    intervalo geram GraphValidationError.
    """
    dims: Optional[TripartiteDims] = None
    edges = []
    seen = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        keyword, *tokens = line.split()
        if keyword == 'dims':
            if dims is not None:
                raise GraphParseError(line_no, "linha 'dims' repetida")
            m, p, q = _parse_ints(tokens, 3, line_no, 'dims')
            try:
                dims = TripartiteDims(m, p, q)
            except DimensionError as e:
                raise GraphParseError(line_no, str(e))
            continue
        if dims is None:
            raise GraphParseError(line_no, "a primeira linha útil deve ser 'dims m p q'")
        if keyword == 'edge':
            i, j, k, r, s, t = _parse_ints(tokens, 6, line_no, 'edge')
            edge = (_index_or_raise(VertexCoord(i, j, k), dims, line_no),
                    _index_or_raise(VertexCoord(r, s, t), dims, line_no))
        elif keyword == 'e':
            edge = tuple(_parse_ints(tokens, 2, line_no, 'e'))
        else:
            raise GraphParseError(line_no, f"palavra-chave desconhecida: {keyword!r}")

        key = canonical_edge(*edge)
        if key in seen:
            logger.warning(f"Aresta duplicada ignorada na linha {line_no}: {key}")
            continue
        seen.add(key)
        edges.append(edge)

    if dims is None:
        raise GraphParseError(0, "arquivo sem linha 'dims'")
    return Graph.from_edges(dims, edges)


def _index_or_raise(c: VertexCoord, dims: TripartiteDims, line_no: int) -> int:
    try:
        return vertex_index(c, dims)
    except DimensionError as e:
        raise GraphValidationError(f"linha {line_no}: {e}")


def write_graph(g: Graph, comments: Iterable[str] = ()) -> str:
    """Texto canônico: comentários, 'dims' e uma linha 'edge' por aresta em ordem canônica"""
    lines = [f"# {c}" for c in comments]
    lines.append(f"dims {g.dims.m} {g.dims.p} {g.dims.q}")
    for a, b in g.sorted_edges():
        x, y = vertex_coord(a, g.dims), vertex_coord(b, g.dims)
        lines.append(f"edge {x.i} {x.j} {x.k}  {y.i} {y.j} {y.k}")
    return '\n'.join(lines) + '\n'


def dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False)


# ---------- Payloads ----------

def graph_payload(g: Graph) -> Dict[str, Any]:
    return {'dims': list(g.dims.as_tuple()), 'edges': [list(e) for e in g.sorted_edges()]}


def graph_from_payload(payload: Dict[str, Any]) -> Graph:
    try:
        dims = TripartiteDims(*[int(x) for x in payload['dims']])
        return Graph.from_edges(dims, (tuple(int(v) for v in e) for e in payload['edges']))
    except (KeyError, TypeError) as e:
        raise CertificateError(f"grafo embutido malformado: {e}", 'graph')


def matrix_payload(mat: RatMatrix, dims: Optional[TripartiteDims] = None) -> Dict[str, Any]:
    payload = {}
    if dims is not None:
        payload['dims'] = list(dims.as_tuple())
    payload['order'] = mat.order
    payload['entries'] = [[format_rational(x) for x in row] for row in mat.rows()]
    return payload


def matrix_text(mat: RatMatrix) -> str:
    cells = [[format_rational_short(x) for x in row] for row in mat.rows()]
    width = max(len(c) for row in cells for c in row)
    return '\n'.join(' '.join(c.rjust(width) for c in row) for row in cells)


def degree_report_payload(report: DegreeReport) -> Dict[str, Any]:
    return {
        'holds': report.holds,
        'mismatches': {sub.name: [list(m) for m in report.mismatches.get(sub, ())] for sub in Subsystem},
    }


def charpoly_payload(p: CharPoly) -> List[str]:
    return p.formatted()


def state_payload(weight, state: PureProductState) -> Dict[str, Any]:
    return {'weight': format_rational(weight), 'a': list(state.a), 'b': list(state.b), 'c': list(state.c)}


def decomposition_payload(d: SeparableDecomposition) -> List[Dict[str, Any]]:
    return [state_payload(w, s) for w, s in d.terms]


def decomposition_from_payload(items: Any) -> SeparableDecomposition:
    if not isinstance(items, list):
        raise CertificateError("decomposição deve ser uma lista de termos", 'decomposition')
    terms = []
    for idx, item in enumerate(items, start=1):
        try:
            weight = parse_rational(str(item['weight']))
            vectors = [item[name] for name in ('a', 'b', 'c')]
            if not all(isinstance(vec, list) and all(type(x) is int for x in vec) for vec in vectors):
                raise CertificateError(f"vetores devem conter apenas inteiros: {vectors}", f"termo {idx}")
            state = PureProductState(*(tuple(vec) for vec in vectors))
        except (KeyError, TypeError, ValueError) as e:
            raise CertificateError(f"termo malformado: {e}", f"termo {idx}")
        terms.append((weight, state))
    return SeparableDecomposition(tuple(terms))


def verdict_payload(verdict: Verdict, g: Optional[Graph] = None) -> Dict[str, Any]:
    payload: Dict[str, Any] = {'verdict': verdict.verdict}
    if isinstance(verdict, NptVerdict):
        payload['witness'] = {
            'subsystem': verdict.subsystem.name,
            'charpoly': charpoly_payload(verdict.charpoly),
            'min_eig_approx': round(verdict.min_eig_approx, MIN_EIG_DIGITS),
            'negative_roots': verdict.negative_roots,
        }
    elif isinstance(verdict, SeparableVerdict):
        payload['decomposition'] = decomposition_payload(verdict.decomposition)
    elif isinstance(verdict, InconclusiveVerdict):
        payload['reason'] = verdict.reason
        payload['diagnostics'] = list(verdict.diagnostics)
    if g is not None:
        payload['graph'] = graph_payload(g)
    return payload


def verdict_text(verdict: Verdict) -> str:
    if isinstance(verdict, NptVerdict):
        return '\n'.join([
            'verdict: npt',
            f"subsystem: {verdict.subsystem.name}",
            f"charpoly: {verdict.charpoly}",
            f"negative roots: {verdict.negative_roots}",
            f"min eigenvalue ~ {verdict.min_eig_approx:.12g}",
        ])
    if isinstance(verdict, SeparableVerdict):
        lines = ['verdict: separable', f"terms: {len(verdict.decomposition)}"]
        for w, s in verdict.decomposition.terms:
            lines.append(f"  {format_rational_short(w)}  a={list(s.a)} b={list(s.b)} c={list(s.c)}")
        return '\n'.join(lines)
    lines = ['verdict: inconclusive', f"reason: {verdict.reason}"]
    lines.extend(f"  {d}" for d in verdict.diagnostics)
    return '\n'.join(lines)


def star_witness_payload(w: StarWitness) -> Dict[str, Any]:
    return {
        'n': w.n,
        'dims': list(w.dims.as_tuple()),
        'charpoly': charpoly_payload(w.charpoly),
        'repeated_root': format_rational(w.repeated_root),
        'multiplicity': w.multiplicity,
        'cubic': charpoly_payload(w.cubic),
        'matches_closed_form': w.matches_closed_form,
        'negative_roots': w.negative_roots,
        'root_product': format_rational(w.root_product),
        'min_eig_approx': round(w.min_eig_approx, MIN_EIG_DIGITS),
        'verdict': 'entangled' if w.entangled else 'inconclusive',
    }


def star_witness_text(w: StarWitness) -> str:
    return '\n'.join([
        f"n: {w.n}  dims: {' '.join(str(x) for x in w.dims.as_tuple())}",
        f"charpoly: {w.charpoly}",
        f"repeated root: {format_rational_short(w.repeated_root)} (multiplicity {w.multiplicity})",
        "cubic: " + ' '.join(format_rational_short(c) for c in w.cubic.coefficients),
        f"matches closed form: {'yes' if w.matches_closed_form else 'no'}",
        f"negative roots: {w.negative_roots}",
        f"root product: {format_rational_short(w.root_product)}",
        f"verdict: {'entangled' if w.entangled else 'inconclusive'}",
    ])
