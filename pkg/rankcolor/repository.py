from typing import List, Optional, TypeVar, Generic, Type
from pathlib import Path
import json
import logging

from pydantic import BaseModel, ValidationError

from errors import UsageError

T = TypeVar('T', bound=BaseModel)

logger = logging.getLogger(__name__)


class JsonFileRepository(Generic[T]):
    """
    Classe genérica de repositório para arquivos JSON validados por schemas
    """
    def __init__(self, model_class: Type[T], directory: Optional[str] = None):
        """
        Inicializa o repositório

        Args:
            model_class: Classe do modelo Pydantic
            directory: Diretório base para caminhos relativos
        """
        self.model_class = model_class
        self.directory = Path(directory) if directory else None

    def _path(self, path: str) -> Path:
        target = Path(path)
        if self.directory is not None and not target.is_absolute():
            target = self.directory / target
        return target

    def exists(self, path: str) -> bool:
        return self._path(path).is_file()

    def load(self, path: str) -> T:
        """
        Lê e valida um arquivo

        Args:
            path: Caminho do arquivo

        Returns:
            Registro validado
        """
        target = self._path(path)
        try:
            raw = json.loads(target.read_text(encoding="utf-8"))
            return self.model_class.model_validate(raw)
        except FileNotFoundError:
            raise UsageError(f"Arquivo não encontrado: {target}")
        except (json.JSONDecodeError, ValidationError) as e:
            raise UsageError(f"Arquivo inválido {target}: {e}")

    def save(self, path: str, record: T) -> Path:
        """
        Grava um registro como JSON determinístico

        Args:
            path: Caminho do arquivo
            record: Registro a gravar

        Returns:
            Caminho gravado
        """
        target = self._path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        payload = json.dumps(record.model_dump(mode="json"), sort_keys=True, indent=2)
        target.write_text(payload + "\n", encoding="utf-8")
        logger.info(f"Registro {self.model_class.__name__} gravado em {target}")
        return target

    def list(self, pattern: str = "*.json") -> List[T]:
        """
        Lista os registros válidos do diretório base

        Args:
            pattern: Padrão glob dos arquivos

        Returns:
            Lista de registros, em ordem de nome de arquivo
        """
        if self.directory is None:
            return []
        result = []
        for target in sorted(self.directory.glob(pattern)):
            try:
                result.append(self.load(str(target)))
            except UsageError as e:
                logger.warning(e.detail)
        return result
