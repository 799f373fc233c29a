import pytest
from pydantic import ValidationError

from config import ENUMERATION_BUDGET, get_run_config
from errors import BudgetExceededError, RankColorError, SearchFailedError, UsageError, check_budget
from workers import chunk_ranges, parallel_map


def test_configuracao_padrao():
    config = get_run_config()
    assert config.budget == ENUMERATION_BUDGET
    assert config.format == "json"


def test_flags_substituem_o_ambiente():
    config = get_run_config(budget=10, seed=3, threads=2, format="csv", out=None)
    assert (config.budget, config.seed, config.threads, config.format) == (10, 3, 2, "csv")


def test_configuracao_invalida():
    with pytest.raises(ValidationError):
        get_run_config(threads=0)
    with pytest.raises(ValidationError):
        get_run_config(format="xml")
    with pytest.raises(ValidationError):
        get_run_config(unknown=1)


def test_codigos_de_saida():
    assert UsageError("x").exit_code == 1
    assert BudgetExceededError("x").exit_code == 3
    assert SearchFailedError("x").exit_code == 3
    assert RankColorError("x").exit_code == 4
    assert isinstance(UsageError("x"), ValueError)


def test_orcamento():
    check_budget(10, 10, "teste")
    with pytest.raises(BudgetExceededError) as excinfo:
        check_budget(11, 10, "teste")
    assert "teste" in excinfo.value.detail


def test_blocos_e_mapa_paralelo():
    assert chunk_ranges(10, 4) == [(0, 4), (4, 8), (8, 10)]
    assert chunk_ranges(0, 4) == []
    items = list(range(20))
    assert parallel_map(lambda x: x * x, items, threads=4) == [x * x for x in items]
