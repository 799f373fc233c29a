"""
Varreduras paralelas determinísticas.

Os intervalos de índices são divididos em blocos e os resultados são sempre
recombinados na ordem dos blocos, então a saída não depende do número de threads.
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, Tuple, TypeVar

T = TypeVar('T')
R = TypeVar('R')


def chunk_ranges(total: int, chunk: int) -> List[Tuple[int, int]]:
    """
    Divide [0, total) em intervalos consecutivos

    Args:
        total: Tamanho do intervalo
        chunk: Tamanho máximo de cada bloco

    Returns:
        Lista de pares (início, fim)
    """
    chunk = max(1, chunk)
    return [(start, min(start + chunk, total)) for start in range(0, total, chunk)]


def parallel_map(fn: Callable[[T], R], items: Sequence[T], threads: int = 1) -> List[R]:
    """
    Aplica fn a cada item, em paralelo quando threads > 1

    Returns:
        Resultados na mesma ordem dos itens
    """
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(fn, items))
