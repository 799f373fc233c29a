import csv
import io
import json

import pytest

from bounds import (
    CSV_HEADER, TABLE1, bounds_row, ceil_log, chi_exact_upper, chi_lower_singleton, chi_prime,
    forbidden_row_count, known_chi_exact, known_values, row_csv, row_json, table1,
)
from errors import UsageError


def test_chi_prime():
    assert chi_prime(2, 2, 2, 1) == 4
    assert chi_prime(6, 4, 2, 2) == 2 ** 12
    # cláusula de fronteira d > n
    assert chi_prime(2, 2, 2, 3) == 1


def test_cota_inferior_igual_a_chi_prime():
    assert chi_lower_singleton(2, 2, 2, 1) == 4
    assert chi_lower_singleton(3, 3, 2, 3) == 2 ** 9
    for N in range(1, 5):
        for n in range(1, N + 1):
            for d in range(1, n + 1):
                for q in (2, 3, 4):
                    assert chi_lower_singleton(N, n, q, d) == chi_prime(N, n, q, d)


def test_cota_superior_de_existencia():
    assert chi_exact_upper(6, 4, 2, 2) == 2 ** 8
    assert chi_exact_upper(6, 4, 2, 3) == 2 ** 14
    assert chi_exact_upper(6, 4, 3, 2) == 3 ** 7
    assert forbidden_row_count(2, 2, 2, 2) == (3, 2)
    assert forbidden_row_count(6, 4, 2, 3) == (14, 3)


def test_ceil_log_exato():
    assert ceil_log(2, 1) == 0
    assert ceil_log(2, 5) == 3
    assert ceil_log(3, 2187) == 7
    assert ceil_log(3, 2188) == 8
    assert ceil_log(2, 2 ** 200 + 1) == 201
    with pytest.raises(UsageError):
        ceil_log(1, 5)


def test_valores_conhecidos():
    assert known_chi_exact(5, 3, 2, 1).value == 2 ** 5
    assert known_chi_exact(3, 3, 2, 3).value == 2 ** 3
    lower = known_chi_exact(3, 3, 2, 2)
    assert (lower.value, lower.kind) == (7, "lower")
    assert known_values(6, 4, 3, 2) == []


def test_linhas_da_tabela():
    for N, n, d, q, (b12, e12), (b8, e8) in TABLE1[:7]:
        row = bounds_row(N, n, d, q)
        assert row.chi_exact_upper_thm == b12 ** e12
        assert row.chi_exact_upper_nat == b8 ** e8
        assert row.note == ""


def test_linha_anotada():
    row = bounds_row(10, 7, 4, 3)
    assert row.chi_exact_upper_nat == 3 ** 40
    assert row.chi_exact_upper_thm == 3 ** row.chi_exact_upper_exponent
    assert "base 2" in row.note


def test_fronteira_d_igual_a_n():
    row = bounds_row(3, 3, 3, 2)
    assert row.chi_prime_exact == 2 ** 9
    assert "d = n" in row.boundary_note
    assert row.note == ""
    assert row.known_exact.value == 8


def test_entradas_invalidas():
    with pytest.raises(UsageError):
        bounds_row(3, 3, 4, 2)
    with pytest.raises(UsageError):
        bounds_row(2, 3, 1, 2)
    with pytest.raises(UsageError):
        chi_prime(2, 2, 2, 0)


def test_formatos():
    row = bounds_row(6, 4, 2, 2)
    lines = row_csv(row).strip().split("\n")
    assert lines[0] == ",".join(CSV_HEADER)
    assert lines[1].startswith("6,4,2,2,2^8,2^12")
    payload = json.loads(row_json(row))
    assert payload["chi_exact_upper_thm"] == 256
    assert payload["chi_prime_exact"] == 4096


def test_tabela_completa():
    rows = list(csv.reader(io.StringIO(table1())))
    assert rows[0] == CSV_HEADER
    assert len(rows) == 9
    assert [r[:4] for r in rows[1:]] == [[str(x) for x in entry[:4]] for entry in TABLE1]
    assert rows[-1][-1] != ""


def test_tabela_anota_so_a_linha_divergente():
    rows = list(csv.reader(io.StringIO(table1())))[1:]
    annotated = [tuple(int(x) for x in r[:4]) for r in rows if r[-1]]
    assert annotated == [(10, 7, 4, 3)]
    boundary = bounds_row(5, 3, 3, 3)
    assert boundary.note == "" and boundary.boundary_note != ""
