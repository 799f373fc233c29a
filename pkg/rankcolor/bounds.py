"""
Calculadora das cotas para χ'_d e χ_d do grafo matricial.

Todos os logaritmos são calculados por varredura de limiar com inteiros de
precisão arbitrária, nunca em ponto flutuante.
"""
import csv
import io
import json
import logging
from math import comb
from typing import List, Optional, Tuple

from errors import UsageError
from schemas import BoundsRow, KnownValue

logger = logging.getLogger(__name__)

CSV_HEADER = ["N", "n", "d", "q", "bound12", "bound8", "known_exact", "lower_bounds", "note"]

# Linhas impressas da tabela de comparação: (N, n, d, q, cota q^e, cota q^{Nd}),
# cada cota como (base, expoente) exatamente como impressa
TABLE1 = [
    (6, 4, 2, 2, (2, 8), (2, 12)),
    (6, 4, 3, 2, (2, 14), (2, 18)),
    (6, 4, 2, 3, (3, 7), (3, 12)),
    (6, 4, 3, 3, (3, 13), (3, 18)),
    (5, 3, 2, 2, (2, 6), (2, 10)),
    (5, 3, 3, 3, (3, 10), (3, 15)),
    (10, 7, 4, 2, (2, 35), (2, 40)),
    (10, 7, 4, 3, (2, 33), (2, 40)),
]

# Pares (N, n) com χ_n(N×n, 2) = 2^N conhecido; (N, 1) vale para todo N
EQUIDISTANT_PAIRS = {(2, 2), (3, 2), (3, 3)}


def _check(N: int, n: int, q: int, d: int) -> None:
    if min(N, n, q, d) < 1:
        raise UsageError("N, n, q e d devem ser positivos")
    if n > N:
        raise UsageError(f"É preciso n ≤ N; recebido n = {n}, N = {N}")


def ceil_log(q: int, V: int) -> int:
    """Menor e ≥ 0 com q^e ≥ V"""
    if q < 2:
        raise UsageError("A base deve ser ≥ 2")
    e, power = 0, 1
    while power < V:
        power *= q
        e += 1
    return e


def forbidden_row_count(N: int, n: int, q: int, d: int) -> Tuple[int, int]:
    """
    Expoente da cota de existência e número de linhas da construção

    Returns:
        (e, m) com e = ⌈log_q(2 + C(n−1, d−1)(q^N − 1)^{d−1})⌉ e m = ⌈e/N⌉
    """
    _check(N, n, q, d)
    if d > n:
        raise UsageError(f"É preciso d ≤ n; recebido d = {d}, n = {n}")
    e = ceil_log(q, 2 + comb(n - 1, d - 1) * (q ** N - 1) ** (d - 1))
    return e, -(-e // N)


def chi_prime(N: int, n: int, q: int, d: int) -> int:
    """χ'_d(N×n, q) = q^{Nd} para d ≤ n; 1 para d > n"""
    _check(N, n, q, d)
    if d > n:
        return 1
    return q ** (N * d)


def chi_lower_singleton(N: int, n: int, q: int, d: int) -> int:
    """⌈q^{Nn} / A_q(N×n, d + 1)⌉ com A_q no valor de Singleton q^{N(n−d)}"""
    _check(N, n, q, d)
    if d > n:
        raise UsageError(f"É preciso d ≤ n; recebido d = {d}, n = {n}")
    return -(-q ** (N * n) // q ** (N * (n - d)))


def chi_exact_upper(N: int, n: int, q: int, d: int) -> int:
    """q^{⌈log_q[2 + C(n−1, d−1)(q^N − 1)^{d−1}]⌉}"""
    e, _ = forbidden_row_count(N, n, q, d)
    return q ** e


def known_values(N: int, n: int, q: int, d: int) -> List[KnownValue]:
    """Valores exatos e cotas inferiores conhecidas para χ_d(N×n, q)"""
    _check(N, n, q, d)
    values = []
    if d == 1:
        values.append(KnownValue(value=q ** N, kind="exact", provenance="clique de matrizes de uma coluna"))
    elif q == 2 and d == n and (n == 1 or (N, n) in EQUIDISTANT_PAIRS):
        values.append(KnownValue(value=2 ** N, kind="exact", provenance=f"código equidistante ({N},{n})"))
    if n >= 3 and N == comb(n, 2) and d == n - 1:
        values.append(KnownValue(value=q ** n - 1, kind="lower", provenance="código equidistante de posto constante"))
    return values


def known_chi_exact(N: int, n: int, q: int, d: int) -> Optional[KnownValue]:
    """Valor exato conhecido ou, na falta dele, uma cota inferior conhecida"""
    values = known_values(N, n, q, d)
    exact = [v for v in values if v.kind == "exact"]
    if exact:
        return exact[0]
    return values[0] if values else None


def _printed(row: Tuple) -> Optional[Tuple]:
    for entry in TABLE1:
        if entry[:4] == tuple(row):
            return entry
    return None


def bounds_row(N: int, n: int, d: int, q: int) -> BoundsRow:
    """
    Uma linha da comparação de cotas, com notas

    Args:
        N, n, d, q: Parâmetros (1 ≤ d ≤ n ≤ N)

    Returns:
        BoundsRow com os valores exatos e as discrepâncias anotadas
    """
    _check(N, n, q, d)
    if d > n:
        raise UsageError(f"É preciso d ≤ n; recebido d = {d}, n = {n}")
    exponent, _ = forbidden_row_count(N, n, q, d)
    values = known_values(N, n, q, d)
    notes = []
    boundary = ""
    if d == n:
        boundary = "d = n: vale q^{Nn}, não a cláusula χ'_d = 1 para d ≥ n"
        logger.warning(f"({N},{n},{d},{q}): fronteira d = n segue q^(Nd)")
    printed = _printed((N, n, d, q))
    if printed is not None:
        (b12, e12), (b8, e8) = printed[4], printed[5]
        if (b12, e12) != (q, exponent) or (b8, e8) != (q, N * d):
            if b12 != q or b8 != q:
                notes.append(f"tabela impressa em base {b12}")
            else:
                notes.append(f"impresso {b12}^{e12} / {b8}^{e8}")
            logger.warning(f"Tabela de comparação ({N},{n},{d},{q}): {notes[-1]}")
    return BoundsRow(
        N=N, n=n, d=d, q=q,
        chi_prime_exact=chi_prime(N, n, q, d),
        chi_lower_eq1=chi_lower_singleton(N, n, q, d),
        chi_exact_upper_thm=q ** exponent,
        chi_exact_upper_exponent=exponent,
        chi_exact_upper_nat=q ** (N * d),
        known_exact=next((v for v in values if v.kind == "exact"), None),
        lower_bounds=[v for v in values if v.kind == "lower"],
        note="; ".join(notes),
        boundary_note=boundary,
    )


def _csv_fields(row: BoundsRow) -> List[str]:
    q = row.q
    known = f"{q}^{row.N}" if row.known_exact and row.known_exact.value == q ** row.N else (
        str(row.known_exact.value) if row.known_exact else ""
    )
    return [
        str(row.N), str(row.n), str(row.d), str(q),
        f"{q}^{row.chi_exact_upper_exponent}",
        f"{q}^{row.N * row.d}",
        known,
        ";".join(str(v.value) for v in row.lower_bounds),
        row.note,
    ]


def rows_csv(rows: List[BoundsRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(_csv_fields(row))
    return buffer.getvalue()


def row_csv(row: BoundsRow) -> str:
    return rows_csv([row])


def row_json(row: BoundsRow) -> str:
    return json.dumps(row.model_dump(mode="json"), sort_keys=True, indent=2)


def table1_rows() -> List[BoundsRow]:
    return [bounds_row(N, n, d, q) for N, n, d, q, _, _ in TABLE1]


def table1() -> str:
    """As oito linhas da tabela de comparação, recalculadas, em CSV"""
    return rows_csv(table1_rows())
