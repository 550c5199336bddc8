"""
Regenera os arquivos golden de saída JSON.

Saídas:
- outputs/golden/entangled_edge.classify.json
- outputs/golden/local_edge.classify.json
- outputs/golden/star_n8.json
"""

import io
import logging
import os
import sys
from pathlib import Path

# Garante que o diretório raiz do projeto esteja no PYTHONPATH ao rodar como script
ROOT_DIR = Path(__file__).resolve().parents[1]
if str(ROOT_DIR) not in sys.path:
    sys.path.insert(0, str(ROOT_DIR))

from config import Config
from pipeline import run

Config.configure_logging()
logger = logging.getLogger("build_golden")

FIXTURES_DIR = ROOT_DIR / 'fixtures'

GOLDEN_COMMANDS = {
    'entangled_edge.classify.json': ['classify', str(FIXTURES_DIR / 'entangled_edge.graph'), '--format', 'json'],
    'local_edge.classify.json': ['classify', str(FIXTURES_DIR / 'local_edge.graph'), '--format', 'json'],
    'star_n8.json': ['star-witness', '--n', '8', '--dims', '2', '2', '2', '--format', 'json'],
}


def render(argv) -> str:
    buffer = io.StringIO()
    code = run(argv, stdout=buffer)
    if code == 2:
        raise RuntimeError(f"Falha ao executar {' '.join(argv)}")
    return buffer.getvalue()


def build_golden(target_dir: str = None) -> int:
    if target_dir is None:
        Config.create_directories(str(ROOT_DIR))
        target_dir = str(ROOT_DIR / Config.GOLDEN_DIR)
    else:
        os.makedirs(target_dir, exist_ok=True)
    for name, argv in GOLDEN_COMMANDS.items():
        path = os.path.join(target_dir, name)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(render(argv))
        logger.info(f"Golden gravado: {path}")
    return len(GOLDEN_COMMANDS)


if __name__ == '__main__':
    written = build_golden()
    print(f"{written} arquivos golden gravados em {Config.GOLDEN_DIR}")
