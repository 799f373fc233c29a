import os
import logging
from dotenv import load_dotenv

from schemas import RunConfig

# Carrega variáveis de ambiente
load_dotenv()

# Orçamentos de enumeração
ENUMERATION_BUDGET = int(os.getenv("RANKCOLOR_BUDGET", str(2 ** 20)))
EXPORT_VERTEX_BUDGET = int(os.getenv("RANKCOLOR_EXPORT_BUDGET", str(2 ** 16)))
FIELD_TABLE_LIMIT = int(os.getenv("RANKCOLOR_TABLE_LIMIT", str(2 ** 16)))
FORBIDDEN_MAX_ORDER = int(os.getenv("RANKCOLOR_FORBIDDEN_MAX_ORDER", "64"))

# Busca aleatória e paralelismo
DEFAULT_SEED = int(os.getenv("RANKCOLOR_SEED", "0"))
DEFAULT_THREADS = int(os.getenv("RANKCOLOR_THREADS", "1"))
SEARCH_RESTARTS = int(os.getenv("RANKCOLOR_RESTARTS", "64"))
COLUMN_TRIES = int(os.getenv("RANKCOLOR_COLUMN_TRIES", "32"))

# Logs
LOG_LEVEL = os.getenv("RANKCOLOR_LOG_LEVEL", "WARNING")
LOG_DIR = os.getenv("RANKCOLOR_LOG_DIR", ".")
LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


def configure_logging(level: str = None) -> None:
    """
    Configura o logging da aplicação

    Args:
        level: Nível de log (padrão: RANKCOLOR_LOG_LEVEL)
    """
    logging.basicConfig(
        level=getattr(logging, (level or LOG_LEVEL).upper(), logging.WARNING),
        format=LOG_FORMAT,
    )


def get_run_config(**overrides) -> RunConfig:
    """
    Cria a configuração de execução a partir do ambiente

    Args:
        overrides: Valores explícitos (flags da CLI) que substituem o ambiente

    Returns:
        Um RunConfig validado
    """
    values = {
        "budget": ENUMERATION_BUDGET,
        "seed": DEFAULT_SEED,
        "threads": DEFAULT_THREADS,
        "log_level": LOG_LEVEL,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**values)
