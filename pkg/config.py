"""
Configurações centralizadas do projeto de separabilidade de grafos
"""

import logging
import os
import sys

from dotenv import load_dotenv

# Carrega .env automaticamente (não versionado)
load_dotenv()


class Config:
    """Classe de configurações centralizadas"""

    # Tolerâncias numéricas (somente para exibição; veredictos são exatos)
    EIGEN_TOLERANCE = 1e-10
    PSD_FLOAT_TOLERANCE = 1e-9

    # Saída da linha de comando
    DEFAULT_FORMAT = 'text'
    OUTPUT_FORMATS = ('text', 'json')
    DEFAULT_JOBS = 1

    # Gerador de grafos
    DEFAULT_SEED = 0
    NEAREST_ORBIT_PROBABILITY = 0.5
    GRAPH_FAMILIES = ('complete', 'star', 'tensor', 'nearest-random')

    # Grafo estrela: n = mpq >= 8 e m, p, q >= 2
    MIN_STAR_ORDER = 8
    MIN_STAR_FACTOR = 2

    # Configurações de logging (lidas do ambiente; não afetam resultados)
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'WARNING').upper()
    LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    LOG_TO_FILE = os.getenv('LOG_TO_FILE', '').lower() in ('1', 'true', 'yes')

    # Diretórios
    OUTPUT_DIR = 'outputs'
    GOLDEN_DIR = os.path.join('outputs', 'golden')
    LOGS_DIR = os.getenv('LOGS_DIR', 'logs')
    LOG_FILE = 'separability.log'

    _logging_configured = False

    @classmethod
    def validate_config(cls) -> bool:
        """Valida se as configurações estão corretas"""
        try:
            if cls.EIGEN_TOLERANCE <= 0 or cls.PSD_FLOAT_TOLERANCE <= 0:
                raise ValueError("Tolerâncias devem ser positivas")

            if cls.DEFAULT_FORMAT not in cls.OUTPUT_FORMATS:
                raise ValueError(f"Formato padrão inválido: {cls.DEFAULT_FORMAT}")

            if not isinstance(logging.getLevelName(cls.LOG_LEVEL), int):
                raise ValueError(f"LOG_LEVEL inválido: {cls.LOG_LEVEL}")

            if not 0.0 <= cls.NEAREST_ORBIT_PROBABILITY <= 1.0:
                raise ValueError("NEAREST_ORBIT_PROBABILITY fora de [0, 1]")

            return True
        except Exception as e:
            print(f"Erro na configuração: {e}", file=sys.stderr)
            return False

    @classmethod
    def create_directories(cls, root: str = '.'):
        """Cria diretórios de saída (e de logs, se LOG_TO_FILE) sob root"""
        os.makedirs(os.path.join(root, cls.OUTPUT_DIR), exist_ok=True)
        os.makedirs(os.path.join(root, cls.GOLDEN_DIR), exist_ok=True)
        if cls.LOG_TO_FILE:
            os.makedirs(os.path.join(root, cls.LOGS_DIR), exist_ok=True)

    @classmethod
    def configure_logging(cls, level: str = None):
        """Configura logging uma única vez (stderr e, opcionalmente, arquivo)"""
        if cls._logging_configured:
            return
        handlers = [logging.StreamHandler(sys.stderr)]
        if cls.LOG_TO_FILE:
            os.makedirs(cls.LOGS_DIR, exist_ok=True)
            handlers.append(logging.FileHandler(os.path.join(cls.LOGS_DIR, cls.LOG_FILE)))
        logging.basicConfig(
            level=getattr(logging, level or cls.LOG_LEVEL, logging.WARNING),
            format=cls.LOG_FORMAT,
            handlers=handlers
        )
        cls._logging_configured = True
