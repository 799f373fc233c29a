import json

import pytest

from errors import UsageError
from gf_tower import tower_for_order
from repository import JsonFileRepository
from schemas import TowerSchema


def test_salvar_e_carregar(tmp_path):
    repository = JsonFileRepository(TowerSchema, str(tmp_path))
    schema = tower_for_order(2, 3).to_schema()
    path = repository.save("torres/f8.json", schema)
    assert path == tmp_path / "torres" / "f8.json"
    assert repository.exists("torres/f8.json")
    assert repository.load("torres/f8.json") == schema
    # JSON determinístico com chaves ordenadas
    assert list(json.loads(path.read_text())) == sorted(schema.model_dump())


def test_listar_ignora_invalidos(tmp_path):
    repository = JsonFileRepository(TowerSchema, str(tmp_path))
    repository.save("a.json", tower_for_order(2, 2).to_schema())
    repository.save("b.json", tower_for_order(3, 2).to_schema())
    (tmp_path / "c.json").write_text("{nao e json")
    assert [schema.p for schema in repository.list()] == [2, 3]


def test_arquivo_ausente_ou_invalido(tmp_path):
    repository = JsonFileRepository(TowerSchema, str(tmp_path))
    with pytest.raises(UsageError):
        repository.load("ausente.json")
    (tmp_path / "ruim.json").write_text(json.dumps({"p": 2}))
    with pytest.raises(UsageError):
        repository.load("ruim.json")
