"""
Linha de comando da análise de separabilidade de grafos

Cada subcomando expõe um estágio: ρ(G), ρ₊(G), transpostas parciais,
condição de grau, teste PPT, classificação, decomposição, verificação de
certificados, testemunha do grafo estrela, gerador de grafos e autovalores.

Códigos de saída: 0 sucesso, 1 veredicto 'npt' em classify, 2 erro de entrada.
"""

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional, Sequence, TextIO

from config import Config
from density_ops import density_matrix, partial_transpose, rho_plus
from errors import CertificateError, SeparabilityError
from exact_linalg import char_poly, charpoly_is_psd, count_negative_roots, eigenvalues_float
from generator import GraphGenerator
from graph_core import Graph, Subsystem, TripartiteDims
from graph_io import (
    decomposition_from_payload,
    degree_report_payload,
    dumps,
    graph_from_payload,
    graph_payload,
    matrix_payload,
    matrix_text,
    parse_graph,
    star_witness_payload,
    star_witness_text,
    verdict_payload,
    verdict_text,
    write_graph,
)
from separability import (
    NptVerdict,
    SeparableVerdict,
    classify,
    decompose_by_edge_orbits,
    find_decomposition_mismatch,
    ppt_test,
    star_witness,
    verdict_summary,
)
from transpose_ops import degree_condition, partial_transpose_graph

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NPT = 1
EXIT_INPUT_ERROR = 2

FILE_COMMANDS = ('rho', 'rho-plus', 'ptrans', 'degree', 'ppt', 'classify', 'decompose', 'eig')

# Erros de entrada: viram status 'error' e código de saída 2
INPUT_ERRORS = (SeparabilityError, ValueError, OSError)


def _success(payload: Any, text: str, exit_code: int = EXIT_OK, summary: Optional[str] = None) -> Dict[str, Any]:
    return {'status': 'success', 'payload': payload, 'text': text, 'exit_code': exit_code,
            'summary': summary}


def _error(message: str, location: Optional[str] = None) -> Dict[str, Any]:
    return {'status': 'error', 'error': message, 'location': location, 'exit_code': EXIT_INPUT_ERROR}


class SeparabilityPipeline:
    """Executa os estágios de análise sobre um grafo e devolve dicionários de status"""

    def __init__(self, options: Optional[Dict[str, Any]] = None):
        self.options = options or {}
        self.stats = {
            'start_time': None,
            'total_time': 0,
            'graphs_processed': 0,
            'errors': [],
        }

    # ---------- Entrada ----------
    @staticmethod
    def load_graph(path: str) -> Graph:
        if path == '-':
            return parse_graph(sys.stdin.read())
        with open(path, 'r', encoding='utf-8') as f:
            return parse_graph(f.read())

    # ---------- Estágios ----------
    def run_file(self, command: str, path: str) -> Dict[str, Any]:
        """Carrega o grafo e executa o estágio pedido, capturando erros de entrada"""
        self.stats['start_time'] = time.time()
        try:
            logger.info(f"{'=' * 10} {command}: {path} {'=' * 10}")
            graph = self.load_graph(path)
            logger.info(f"Grafo: dims {graph.dims.as_tuple()}, {graph.edge_count} arestas")
            result = self.run_stage(command, graph)
            self.stats['graphs_processed'] += 1
        except CertificateError as e:
            result = _error(str(e), e.location)
        except INPUT_ERRORS as e:
            logger.error(f"Erro em {path}: {e}")
            self.stats['errors'].append(str(e))
            result = _error(str(e))
        self.stats['total_time'] = time.time() - self.stats['start_time']
        logger.info(f"⏱️ Tempo: {self.stats['total_time']:.2f}s")
        return result

    def run_stage(self, command: str, graph: Graph) -> Dict[str, Any]:
        handlers = {
            'rho': self.run_rho,
            'rho-plus': self.run_rho_plus,
            'ptrans': self.run_ptrans,
            'degree': self.run_degree,
            'ppt': self.run_ppt,
            'classify': self.run_classify,
            'decompose': self.run_decompose,
            'eig': self.run_eig,
        }
        return handlers[command](graph)

    def run_rho(self, graph: Graph) -> Dict[str, Any]:
        rho = density_matrix(graph)
        return _success(matrix_payload(rho.mat, rho.dims), matrix_text(rho.mat))

    def run_rho_plus(self, graph: Graph) -> Dict[str, Any]:
        rho = rho_plus(graph)
        return _success(matrix_payload(rho.mat, rho.dims), matrix_text(rho.mat))

    def run_ptrans(self, graph: Graph) -> Dict[str, Any]:
        sub = Subsystem.parse(self.options.get('sub', 'A'))
        if self.options.get('level', 'graph') == 'graph':
            transposed = partial_transpose_graph(graph, sub)
            return _success(graph_payload(transposed), write_graph(transposed).rstrip('\n'))
        rho = density_matrix(graph)
        mat = partial_transpose(rho, sub)
        return _success(matrix_payload(mat, rho.dims), matrix_text(mat))

    def run_degree(self, graph: Graph) -> Dict[str, Any]:
        report = degree_condition(graph)
        lines = [f"holds: {'yes' if report.holds else 'no'}"]
        for sub in report.failing_subsystems():
            lines.append(f"{sub.name}: " + ' '.join(f"{v}({d}->{dt})" for v, d, dt in report.mismatches[sub]))
        return _success(degree_report_payload(report), '\n'.join(lines))

    def run_ppt(self, graph: Graph) -> Dict[str, Any]:
        verdict = ppt_test(density_matrix(graph))
        return _success(verdict_payload(verdict), verdict_text(verdict))

    def run_classify(self, graph: Graph) -> Dict[str, Any]:
        verdict = classify(graph)
        summary = verdict_summary(verdict)
        logger.info(f"Veredicto: {summary}")
        code = EXIT_NPT if isinstance(verdict, NptVerdict) else EXIT_OK
        return _success(verdict_payload(verdict, graph), verdict_text(verdict), code, summary)

    def run_decompose(self, graph: Graph) -> Dict[str, Any]:
        verdict = SeparableVerdict(decompose_by_edge_orbits(graph))
        return _success(verdict_payload(verdict, graph), verdict_text(verdict))

    def run_eig(self, graph: Graph) -> Dict[str, Any]:
        rho = density_matrix(graph)
        sub = self.options.get('sub')
        mat = rho.mat if sub is None else partial_transpose(rho, Subsystem.parse(sub))
        values = eigenvalues_float(mat, self.options.get('tol'))
        return _success(values, '\n'.join(f"{v:.12g}" for v in values))

    # ---------- Estágios sem arquivo de grafo ----------
    def run_verify(self, cert_path: str, graph_path: Optional[str] = None) -> Dict[str, Any]:
        """Verifica um certificado de decomposição ou uma testemunha NPT"""
        try:
            with open(cert_path, 'r', encoding='utf-8') as f:
                cert = json.load(f)
            if not isinstance(cert, dict):
                raise CertificateError("certificado deve ser um objeto JSON")
            if graph_path is not None:
                graph = self.load_graph(graph_path)
            elif 'graph' in cert:
                graph = graph_from_payload(cert['graph'])
            else:
                raise CertificateError("certificado sem grafo embutido e nenhum arquivo de grafo informado", 'graph')

            rho = density_matrix(graph)
            kind = cert.get('verdict', 'separable')
            if kind == 'npt':
                return self._verify_witness(rho, cert.get('witness'))
            if kind != 'separable':
                raise CertificateError(f"veredicto não verificável: {kind!r}", 'verdict')
            if 'decomposition' not in cert:
                raise CertificateError("certificado sem decomposição", 'decomposition')

            decomposition = decomposition_from_payload(cert['decomposition'])
            mismatch = find_decomposition_mismatch(rho, decomposition)
            if mismatch is not None:
                raise CertificateError(mismatch.message, mismatch.location)
            logger.info(f"✅ Certificado válido: {len(decomposition)} termos")
            return _success({'valid': True, 'verdict': 'separable', 'terms': len(decomposition)},
                            f"valid: yes\nterms: {len(decomposition)}")
        except CertificateError as e:
            logger.error(f"Certificado rejeitado: {e}")
            return _error(str(e), e.location)
        except INPUT_ERRORS as e:
            return _error(str(e))

    def _verify_witness(self, rho, witness: Any) -> Dict[str, Any]:
        if not isinstance(witness, dict) or 'subsystem' not in witness or 'charpoly' not in witness:
            raise CertificateError("testemunha NPT malformada", 'witness')
        sub = Subsystem.parse(str(witness['subsystem']))
        poly = char_poly(partial_transpose(rho, sub))
        if poly.formatted() != list(witness['charpoly']):
            raise CertificateError("polinômio característico não confere", 'witness.charpoly')
        if charpoly_is_psd(poly):
            raise CertificateError(f"ρ^T_{sub.name} é semidefinida positiva", 'witness.subsystem')
        negative = count_negative_roots(poly)
        return _success({'valid': True, 'verdict': 'npt', 'subsystem': sub.name, 'negative_roots': negative},
                        f"valid: yes\nsubsystem: {sub.name}\nnegative roots: {negative}")

    def run_star_witness(self, n: int, dims: TripartiteDims) -> Dict[str, Any]:
        try:
            witness = star_witness(n, dims)
        except INPUT_ERRORS as e:
            return _error(str(e))
        return _success(star_witness_payload(witness), star_witness_text(witness))

    def run_gen(self, family: str, dims: TripartiteDims, seed: int, noise: int) -> Dict[str, Any]:
        try:
            generated = GraphGenerator(seed).generate(family, dims, noise=noise)
        except INPUT_ERRORS as e:
            return _error(str(e))
        payload = graph_payload(generated.graph)
        payload['comments'] = list(generated.comments)
        return _success(payload, write_graph(generated.graph, generated.comments).rstrip('\n'))


def _process_file_job(command: str, path: str, options: Dict[str, Any]) -> Dict[str, Any]:
    """Unidade de trabalho do modo em lote (precisa ser serializável para o pool de processos)"""
    return SeparabilityPipeline(options).run_file(command, path)


def _run_batch(command: str, paths: Sequence[str], options: Dict[str, Any], jobs: int) -> List[Dict[str, Any]]:
    if jobs <= 1 or len(paths) <= 1:
        return [_process_file_job(command, path, options) for path in paths]
    logger.info(f"Processando {len(paths)} arquivos com {jobs} processos")
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map preserva a ordem de entrada
        return list(pool.map(_process_file_job, [command] * len(paths), paths, [options] * len(paths)))


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"esperado inteiro positivo, recebido {text}")
    return value


def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"esperado inteiro não negativo, recebido {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=Config.OUTPUT_FORMATS, default=Config.DEFAULT_FORMAT,
                        help='Formato de saída')
    common.add_argument('--jobs', type=_positive_int, default=Config.DEFAULT_JOBS,
                        help='Processos paralelos no modo em lote')
    common.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Sobrescreve LOG_LEVEL')

    parser = argparse.ArgumentParser(prog='pipeline', description='Separabilidade tripartida de grafos')
    sub = parser.add_subparsers(dest='command', required=True)

    for name, help_text in (
        ('rho', 'Matriz densidade ρ(G) = L(G)/d_G'),
        ('rho-plus', 'Companheira ρ₊(G) = (Δ+M)/d_G'),
        ('degree', 'Condição de grau'),
        ('ppt', 'Teste PPT exato'),
        ('classify', 'Veredicto completo (código 1 se npt)'),
        ('decompose', 'Decomposição separável por órbitas de arestas'),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument('files', nargs='+', help="Arquivos de grafo ('-' para stdin)")

    p = sub.add_parser('ptrans', parents=[common], help='Transposta parcial')
    p.add_argument('files', nargs='+')
    p.add_argument('--sub', choices=['A', 'B', 'C'], required=True)
    p.add_argument('--level', choices=['graph', 'matrix'], default='graph')

    p = sub.add_parser('eig', parents=[common], help='Autovalores aproximados de ρ(G) ou de ρ^T')
    p.add_argument('files', nargs='+')
    p.add_argument('--tol', type=float, default=Config.EIGEN_TOLERANCE)
    p.add_argument('--sub', choices=['A', 'B', 'C'])

    p = sub.add_parser('verify', parents=[common], help='Verifica um certificado')
    p.add_argument('--cert', required=True)
    p.add_argument('graph', nargs='?', help='Arquivo de grafo (opcional se embutido no certificado)')

    p = sub.add_parser('star-witness', parents=[common], help='Testemunha do grafo estrela')
    p.add_argument('--n', type=_positive_int, required=True)
    p.add_argument('--dims', type=_positive_int, nargs=3, required=True, metavar=('M', 'P', 'Q'))

    p = sub.add_parser('gen', parents=[common], help='Gera um grafo de uma família')
    p.add_argument('--family', choices=Config.GRAPH_FAMILIES, required=True)
    p.add_argument('--dims', type=_positive_int, nargs=3, required=True, metavar=('M', 'P', 'Q'))
    p.add_argument('--seed', type=int, default=Config.DEFAULT_SEED)
    p.add_argument('--noise', type=_non_negative_int, default=0)
    return parser


def _emit(results: List[Dict[str, Any]], labels: Optional[List[str]], fmt: str,
          stdout: TextIO, stderr: TextIO) -> int:
    """Escreve resultados na ordem de entrada e devolve o código de saída agregado"""
    for label, result in zip(labels or [None] * len(results), results):
        if result['status'] == 'error':
            where = f" ({result['location']})" if result.get('location') else ''
            prefix = f"{label}: " if label else ''
            print(f"erro: {prefix}{result['error']}{where}", file=stderr)

    if labels is None:
        result = results[0]
        if result['status'] == 'success':
            if fmt == 'json':
                stdout.write(dumps(result['payload']) + '\n')
            else:
                stdout.write(result['text'] + '\n')
    elif fmt == 'json':
        items = []
        for label, result in zip(labels, results):
            if result['status'] == 'success':
                payload = result['payload']
                item = {'file': label, **payload} if isinstance(payload, dict) else {'file': label, 'result': payload}
            else:
                item = {'file': label, 'error': result['error']}
            items.append(item)
        stdout.write(dumps(items) + '\n')
    else:
        for label, result in zip(labels, results):
            if result['status'] == 'success':
                header = f"{label}: {result['summary']}" if result.get('summary') else label
                stdout.write(f"== {header} ==\n{result['text']}\n")

    return max(r['exit_code'] for r in results)


def run(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None,
        stderr: Optional[TextIO] = None) -> int:
    """Executa a linha de comando e devolve o código de saída"""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse sai com 2 em erro de uso e com 0 em --help
        return e.code if isinstance(e.code, int) else EXIT_INPUT_ERROR

    Config.configure_logging(args.log_level)
    pipeline = SeparabilityPipeline()

    if args.command in FILE_COMMANDS:
        options = {
            'sub': getattr(args, 'sub', None),
            'level': getattr(args, 'level', 'graph'),
            'tol': getattr(args, 'tol', None),
        }
        results = _run_batch(args.command, args.files, options, args.jobs)
        labels = list(args.files) if len(args.files) > 1 else None
        return _emit(results, labels, args.format, stdout, stderr)

    if args.command == 'verify':
        result = pipeline.run_verify(args.cert, args.graph)
    elif args.command == 'star-witness':
        try:
            dims = TripartiteDims(*args.dims)
        except INPUT_ERRORS as e:
            result = _error(str(e))
        else:
            result = pipeline.run_star_witness(args.n, dims)
    else:
        result = pipeline.run_gen(args.family, TripartiteDims(*args.dims), args.seed, args.noise)
    return _emit([result], None, args.format, stdout, stderr)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
