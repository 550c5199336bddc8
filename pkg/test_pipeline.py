import importlib.util
import io
import json

import pytest

from conftest import FIXTURES_DIR
from graph_core import Graph, TripartiteDims
from graph_io import parse_graph, write_graph
from pipeline import EXIT_INPUT_ERROR, EXIT_NPT, EXIT_OK, run

ENTANGLED = str(FIXTURES_DIR / 'entangled_edge.graph')
LOCAL = str(FIXTURES_DIR / 'local_edge.graph')


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def invoke_json(*argv):
    code, out, err = invoke(*argv, '--format', 'json')
    return code, (json.loads(out) if out else None), err


def load_build_golden():
    path = FIXTURES_DIR.parent / 'scripts' / 'build_golden.py'
    spec = importlib.util.spec_from_file_location('build_golden', path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def test_classify_entangled_fixture_exits_with_npt():
    code, payload, _ = invoke_json('classify', ENTANGLED)
    assert code == EXIT_NPT
    assert payload['verdict'] == 'npt'
    assert payload['witness']['subsystem'] == 'A'
    assert payload['witness']['negative_roots'] == 1


def test_classify_local_fixture_is_separable():
    code, payload, _ = invoke_json('classify', LOCAL)
    assert code == EXIT_OK
    assert payload['verdict'] == 'separable'
    assert len(payload['decomposition']) == 1


def test_classify_text_output():
    code, out, _ = invoke('classify', ENTANGLED)
    assert code == EXIT_NPT
    assert out.splitlines()[:2] == ['verdict: npt', 'subsystem: A']


def test_star_witness_command():
    code, payload, _ = invoke_json('star-witness', '--n', '8', '--dims', '2', '2', '2')
    assert code == EXIT_OK
    assert payload['cubic'] == ['1/1', '-9/14', '2/49', '3/343']
    assert payload['verdict'] == 'entangled'


def test_star_witness_rejects_small_factor():
    code, out, err = invoke('star-witness', '--n', '8', '--dims', '4', '2', '1')
    assert code == EXIT_INPUT_ERROR
    assert out == ''
    assert err.startswith('erro:')


def test_decompose_then_verify(tmp_path):
    code, out, _ = invoke('decompose', LOCAL, '--format', 'json')
    assert code == EXIT_OK
    cert = tmp_path / 'cert.json'
    cert.write_text(out, encoding='utf-8')

    code, payload, _ = invoke_json('verify', '--cert', str(cert))
    assert code == EXIT_OK
    assert payload == {'valid': True, 'verdict': 'separable', 'terms': 1}

    code, _, _ = invoke('verify', '--cert', str(cert), LOCAL)
    assert code == EXIT_OK


def test_verify_reports_tampered_weight_and_entry(tmp_path):
    _, payload, _ = invoke_json('decompose', LOCAL)

    heavier = json.loads(json.dumps(payload))
    heavier['decomposition'][0]['weight'] = '1/2'
    cert = tmp_path / 'heavier.json'
    cert.write_text(json.dumps(heavier), encoding='utf-8')
    code, out, err = invoke('verify', '--cert', str(cert))
    assert code == EXIT_INPUT_ERROR
    assert out == ''
    assert '(pesos)' in err

    flipped = json.loads(json.dumps(payload))
    flipped['decomposition'][0]['c'] = [1, 1]
    cert = tmp_path / 'flipped.json'
    cert.write_text(json.dumps(flipped), encoding='utf-8')
    code, _, err = invoke('verify', '--cert', str(cert))
    assert code == EXIT_INPUT_ERROR
    assert '(entrada (' in err


@pytest.mark.parametrize('entries', [[1, -1.9], [1, -1.0], [True, -1]])
def test_verify_rejects_non_integer_vector_entries(tmp_path, entries):
    _, payload, _ = invoke_json('decompose', LOCAL)
    payload['decomposition'][0]['c'] = entries
    cert = tmp_path / 'fractional.json'
    cert.write_text(json.dumps(payload), encoding='utf-8')
    code, out, err = invoke('verify', '--cert', str(cert))
    assert code == EXIT_INPUT_ERROR
    assert out == ''
    assert '(termo 1)' in err


def test_verify_against_other_graph_fails(tmp_path):
    _, out, _ = invoke('decompose', LOCAL, '--format', 'json')
    cert = tmp_path / 'cert.json'
    cert.write_text(out, encoding='utf-8')
    code, _, err = invoke('verify', '--cert', str(cert), ENTANGLED)
    assert code == EXIT_INPUT_ERROR
    assert 'entrada' in err


def test_verify_npt_witness(tmp_path):
    _, out, _ = invoke('classify', ENTANGLED, '--format', 'json')
    cert = tmp_path / 'npt.json'
    cert.write_text(out, encoding='utf-8')
    code, payload, _ = invoke_json('verify', '--cert', str(cert))
    assert code == EXIT_OK
    assert payload['verdict'] == 'npt'
    assert payload['subsystem'] == 'A'

    tampered = json.loads(out)
    tampered['witness']['charpoly'][1] = '0/1'
    cert.write_text(json.dumps(tampered), encoding='utf-8')
    code, _, err = invoke('verify', '--cert', str(cert))
    assert code == EXIT_INPUT_ERROR
    assert 'witness.charpoly' in err


def test_decompose_rejects_degree_failure():
    code, out, err = invoke('decompose', ENTANGLED)
    assert code == EXIT_INPUT_ERROR
    assert out == ''
    assert 'grau' in err


def test_usage_errors_exit_with_two():
    assert invoke('classify', '--bogus', LOCAL)[0] == EXIT_INPUT_ERROR
    assert invoke('ptrans', LOCAL)[0] == EXIT_INPUT_ERROR
    assert invoke('gen', '--family', 'cycle', '--dims', '2', '2', '2')[0] == EXIT_INPUT_ERROR


def test_edgeless_graph_is_an_input_error(tmp_path):
    empty = tmp_path / 'empty.graph'
    empty.write_text('dims 2 2 2\n', encoding='utf-8')
    code, out, err = invoke('rho', str(empty))
    assert code == EXIT_INPUT_ERROR
    assert out == ''
    assert err.startswith('erro:')


def test_missing_file_is_an_input_error(tmp_path):
    code, _, err = invoke('degree', str(tmp_path / 'nope.graph'))
    assert code == EXIT_INPUT_ERROR
    assert err.startswith('erro:')


def test_rho_json_payload():
    code, payload, _ = invoke_json('rho', LOCAL)
    assert code == EXIT_OK
    assert payload['dims'] == [3, 2, 2]
    assert payload['order'] == 12
    assert payload['entries'][0][:2] == ['1/2', '-1/2']


def test_rho_plus_text_output():
    code, out, _ = invoke('rho-plus', LOCAL)
    assert code == EXIT_OK
    assert out.splitlines()[0].split()[:3] == ['1/2', '1/2', '0']


def test_ptrans_graph_and_matrix_levels():
    code, out, _ = invoke('ptrans', ENTANGLED, '--sub', 'A')
    assert code == EXIT_OK
    assert parse_graph(out).sorted_edges() == [(4, 5)]

    code, payload, _ = invoke_json('ptrans', ENTANGLED, '--sub', 'A', '--level', 'matrix')
    assert code == EXIT_OK
    assert payload['entries'][3][4] == '-1/2'
    assert payload['entries'][0][7] == '0/1'


def test_degree_and_eig_commands():
    code, payload, _ = invoke_json('degree', ENTANGLED)
    assert code == EXIT_OK
    assert payload['holds'] is False

    code, values, _ = invoke_json('eig', ENTANGLED, '--sub', 'A')
    assert code == EXIT_OK
    assert len(values) == 12
    assert values[0] == pytest.approx(-0.5)


def test_graph_from_stdin(monkeypatch, local_graph):
    monkeypatch.setattr('sys.stdin', io.StringIO(write_graph(local_graph)))
    code, payload, _ = invoke_json('classify', '-')
    assert code == EXIT_OK
    assert payload['verdict'] == 'separable'


def test_gen_is_reproducible():
    argv = ('gen', '--family', 'nearest-random', '--dims', '3', '2', '2', '--seed', '5', '--noise', '1')
    first, second = invoke(*argv), invoke(*argv)
    assert first == second
    assert first[0] == EXIT_OK
    assert parse_graph(first[1]).dims == TripartiteDims(3, 2, 2)

    code, payload, _ = invoke_json('gen', '--family', 'complete', '--dims', '2', '2', '2')
    assert code == EXIT_OK
    assert Graph.from_edges(TripartiteDims(2, 2, 2), [tuple(e) for e in payload['edges']]).edge_count == 28


def test_batch_mode_is_independent_of_jobs():
    serial = invoke_json('classify', ENTANGLED, LOCAL, '--jobs', '1')
    parallel = invoke_json('classify', ENTANGLED, LOCAL, '--jobs', '4')
    assert serial == parallel
    code, items, _ = serial
    assert code == EXIT_NPT
    assert [item['file'] for item in items] == [ENTANGLED, LOCAL]
    assert [item['verdict'] for item in items] == ['npt', 'separable']


def test_batch_mode_keeps_going_after_errors(tmp_path):
    broken = tmp_path / 'broken.graph'
    broken.write_text('dims 2 2\n', encoding='utf-8')
    code, items, err = invoke_json('degree', str(broken), LOCAL)
    assert code == EXIT_INPUT_ERROR
    assert 'error' in items[0]
    assert items[1]['holds'] is True
    assert 'linha 1' in err


def test_build_golden_is_deterministic(tmp_path):
    module = load_build_golden()
    first, second = tmp_path / 'a', tmp_path / 'b'
    assert module.build_golden(str(first)) == 3
    module.build_golden(str(second))
    for name in module.GOLDEN_COMMANDS:
        assert (first / name).read_bytes() == (second / name).read_bytes()
    star = json.loads((first / 'star_n8.json').read_text(encoding='utf-8'))
    assert star['root_product'] == '-3/343'


def without_min_eig(payload):
    """Separa min_eig_approx (aproximado) do restante do payload (exato)"""
    payload = json.loads(json.dumps(payload))
    holder = payload['witness'] if 'witness' in payload else payload
    return payload, holder.pop('min_eig_approx', None)


def test_outputs_match_committed_golden_files():
    module = load_build_golden()
    golden_dir = FIXTURES_DIR.parent / 'outputs' / 'golden'
    for name, argv in module.GOLDEN_COMMANDS.items():
        expected, expected_eig = without_min_eig(json.loads((golden_dir / name).read_text(encoding='utf-8')))
        fresh, fresh_eig = without_min_eig(json.loads(module.render(argv)))
        assert fresh == expected, name
        if expected_eig is not None:
            assert fresh_eig == pytest.approx(expected_eig, abs=1e-11), name


def test_batch_text_headers_carry_verdict_summary():
    code, out, _ = invoke('classify', ENTANGLED, LOCAL)
    assert code == EXIT_NPT
    headers = [line for line in out.splitlines() if line.startswith('== ')]
    assert headers == [
        f'== {ENTANGLED}: npt (corte A, mínimo ≈ -0.5) ==',
        f'== {LOCAL}: separable (1 termos) ==',
    ]


def test_batch_text_headers_without_summary():
    code, out, _ = invoke('degree', ENTANGLED, LOCAL)
    assert code == EXIT_OK
    assert [line for line in out.splitlines() if line.startswith('== ')] == [f'== {ENTANGLED} ==', f'== {LOCAL} ==']


def test_create_directories_under_root(tmp_path):
    from config import Config

    Config.create_directories(str(tmp_path))
    assert (tmp_path / Config.OUTPUT_DIR).is_dir()
    assert (tmp_path / Config.GOLDEN_DIR).is_dir()
