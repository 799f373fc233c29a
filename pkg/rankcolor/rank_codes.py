"""
Códigos lineares na métrica do posto sobre F_{q^N}.

Um código é guardado pela matriz geradora (k×n) e pela matriz de paridade
((n−k)×n), ambas como arrays de códigos de F_{q^N}. A distância entre palavras
é o posto-coluna sobre F_q da diferença.
"""
import logging
from itertools import combinations
from math import comb, gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config import DEFAULT_THREADS, ENUMERATION_BUDGET
from errors import FieldError, RankDeficientError, ShapeError, UsageError, check_budget
from gf_tower import FieldTower, build_tower, field_for_order
from rank_linalg import (
    MatFq, VecExt, batch_rank, column_rank, column_ranks, ext_null_space, ext_rank,
    ext_syndromes, require_full_rank,
)
from schemas import CodeSchema
from workers import chunk_ranges, parallel_map

logger = logging.getLogger(__name__)

SPECTRUM_CHUNK = 4096

# Módulo x^3 + x + 1 (α^3 = α + 1), coeficientes do grau baixo para o alto
C23_MODULUS = [[1], [1], [0], [1]]


def _matrix(rows) -> Tuple[Tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row) for row in np.asarray(rows, dtype=np.int64))


class LinearRankCode(BaseModel):
    """Código linear [n, k] sobre F_{q^N} com geradora e paridade"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    tower: FieldTower = Field(exclude=True)
    n: int
    k: int
    generator: Tuple[Tuple[int, ...], ...]
    parity: Tuple[Tuple[int, ...], ...]
    tag: str = "explicit"
    s: Optional[int] = None
    h: Optional[Tuple[int, ...]] = None
    min_distance: Optional[int] = None

    @property
    def generator_array(self) -> np.ndarray:
        return np.array(self.generator, dtype=np.int64).reshape(self.k, self.n)

    @property
    def parity_array(self) -> np.ndarray:
        return np.array(self.parity, dtype=np.int64).reshape(self.n - self.k, self.n)

    @property
    def size(self) -> int:
        return self.tower.order ** self.k


# --- Dualidade geradora / paridade ---
def generator_from_parity(tower: FieldTower, parity, n: Optional[int] = None) -> np.ndarray:
    """Base do núcleo {v : v·H^T = 0}"""
    parity = np.asarray(parity, dtype=np.int64)
    require_full_rank(tower, parity, "Matriz de paridade")
    return ext_null_space(tower, parity, cols=n)


def parity_from_generator(tower: FieldTower, generator, n: Optional[int] = None) -> np.ndarray:
    """Matriz de paridade de posto completo com G·H^T = 0"""
    generator = np.asarray(generator, dtype=np.int64)
    require_full_rank(tower, generator, "Matriz geradora")
    return ext_null_space(tower, generator, cols=n)


def code_from_parity(tower: FieldTower, parity, n: int, tag: str = "explicit") -> LinearRankCode:
    parity = np.asarray(parity, dtype=np.int64).reshape(-1, n)
    generator = generator_from_parity(tower, parity, n)
    return LinearRankCode(
        tower=tower, n=n, k=generator.shape[0],
        generator=_matrix(generator), parity=_matrix(parity), tag=tag,
    )


def code_from_generator(tower: FieldTower, generator, n: int, tag: str = "explicit") -> LinearRankCode:
    generator = np.asarray(generator, dtype=np.int64).reshape(-1, n)
    parity = parity_from_generator(tower, generator, n)
    return LinearRankCode(
        tower=tower, n=n, k=generator.shape[0],
        generator=_matrix(generator), parity=_matrix(parity), tag=tag,
    )


# --- Gabidulin ---
def gabidulin(tower: FieldTower, n: int, k: int, s: int = 1, h: Optional[Sequence[int]] = None) -> LinearRankCode:
    """
    Código de Gabidulin (MRD) de distância d = n − k + 1

    Args:
        tower: Torre F_p ⊂ F_q ⊂ F_{q^N}
        n: Comprimento (n ≤ N)
        k: Dimensão (0 ≤ k ≤ n; k = 0 é o código nulo)
        s: Potência de Frobenius, com gcd(s, N) = 1
        h: n elementos de F_{q^N} independentes sobre F_q (padrão: os n primeiros da base)

    Returns:
        O código, com paridade de linhas h_j^{q^{s·i}}, i = 0, ..., n − k − 1
    """
    if not 1 <= n <= tower.N:
        raise UsageError(f"É preciso 1 ≤ n ≤ N; recebido n = {n}, N = {tower.N}")
    if not 0 <= k <= n:
        raise UsageError(f"Dimensão k = {k} fora de [0, {n}]")
    if s < 1 or gcd(s, tower.N) != 1:
        raise UsageError(f"É preciso gcd(s, N) = 1; recebido s = {s}, N = {tower.N}")
    h = list(tower.basis[:n]) if h is None else [int(x) for x in h]
    if len(h) != n:
        raise ShapeError(f"O vetor h deve ter {n} elementos")
    if column_rank(VecExt.from_codes(tower, h)) != n:
        raise RankDeficientError("Os elementos h_i não são linearmente independentes sobre F_q")

    parity = np.array(
        [[tower.frobenius(x, s * i) for x in h] for i in range(n - k)], dtype=np.int64
    ).reshape(n - k, n)
    generator = generator_from_parity(tower, parity, n)
    code = LinearRankCode(
        tower=tower, n=n, k=k, generator=_matrix(generator), parity=_matrix(parity),
        tag="gabidulin", s=s, h=tuple(h),
    )
    logger.info(f"Gabidulin [{n}, {k}] sobre GF({tower.q}^{tower.N}), s = {s}")
    return code


# --- Enumeração ---
def codeword_array(code: LinearRankCode, start: int, stop: int) -> np.ndarray:
    """Palavras de índice [start, stop): combinações dos k vetores da geradora"""
    tower = code.tower
    G = code.generator_array
    indices = np.arange(start, stop, dtype=np.int64)
    words = np.zeros((indices.size, code.n), dtype=np.int64)
    for i in range(code.k):
        coefficient = (indices // tower.order ** (code.k - 1 - i)) % tower.order
        words = tower.vadd(words, tower.vmul(coefficient[:, None], G[i][None, :]))
    return words


def enumerate_codewords(code: LinearRankCode, budget: Optional[int] = None) -> Iterator[VecExt]:
    """As q^{Nk} palavras do código, em ordem de índice"""
    check_budget(code.size, budget or ENUMERATION_BUDGET, "enumeração de palavras")
    for start, stop in chunk_ranges(code.size, SPECTRUM_CHUNK):
        for word in codeword_array(code, start, stop):
            yield VecExt.from_codes(code.tower, word)


def rank_spectrum(code: LinearRankCode, budget: Optional[int] = None, threads: Optional[int] = None) -> Dict[int, int]:
    """
    Distribuição de postos das palavras

    Returns:
        Mapa posto -> quantidade (somente postos com quantidade não nula)
    """
    check_budget(code.size, budget or ENUMERATION_BUDGET, "espectro de posto")

    def histogram(bounds: Tuple[int, int]) -> np.ndarray:
        words = codeword_array(code, *bounds)
        return np.bincount(column_ranks(code.tower, words), minlength=code.n + 1)

    counts = parallel_map(histogram, chunk_ranges(code.size, SPECTRUM_CHUNK), threads or DEFAULT_THREADS)
    total = np.sum(counts, axis=0)
    return {w: int(c) for w, c in enumerate(total) if c}


def min_rank_distance(code: LinearRankCode, budget: Optional[int] = None, threads: Optional[int] = None) -> Optional[int]:
    """Menor posto de palavra não nula (None para o código nulo)"""
    if code.min_distance is None:
        weights = [w for w in rank_spectrum(code, budget, threads) if w >= 1]
        code.min_distance = min(weights) if weights else None
    return code.min_distance


def is_mrd(code: LinearRankCode, budget: Optional[int] = None) -> bool:
    """|C| = q^{N(n − d + 1)} com d a distância mínima enumerada"""
    d = min_rank_distance(code, budget)
    return d is not None and code.size == code.tower.order ** (code.n - d + 1)


def annihilates(code: LinearRankCode, words) -> bool:
    """Toda palavra satisfaz v·H^T = 0"""
    return not np.any(ext_syndromes(code.tower, words, code.parity_array))


def check_parity_columns(tower: FieldTower, H, d: int) -> bool:
    """
    Critério por colunas da matriz de paridade

    Verdadeiro quando quaisquer d − 1 colunas de H são independentes sobre
    F_{q^N} e existem d colunas dependentes.
    """
    H = np.asarray(H, dtype=np.int64)
    n = H.shape[1]
    if not 1 <= d <= n:
        raise UsageError(f"d = {d} fora de [1, {n}]")

    def independent(columns) -> bool:
        return ext_rank(tower, H[:, list(columns)]) == len(columns)

    if not all(independent(S) for S in combinations(range(n), d - 1)):
        return False
    return any(not independent(S) for S in combinations(range(n), d))


# --- Códigos equidistantes ---
class EquidistantCode(BaseModel):
    """Lista explícita de palavras (vetores ou matrizes) com distância declarada"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    tower: FieldTower = Field(exclude=True)
    n: int
    words: List[Union[VecExt, MatFq]]
    d: int


def _require_alpha_modulus(tower: FieldTower) -> None:
    if (tower.p, tower.m, tower.N) != (2, 1, 3) or tower.to_schema().modulus_qN != C23_MODULUS:
        raise FieldError("C2 e C3 exigem F_8 com α^3 = α + 1 (módulo x^3 + x + 1)")


def builtin_code(name: str, tower: Optional[FieldTower] = None) -> EquidistantCode:
    """
    Códigos equidistantes explícitos

    C1: quatro matrizes 2×2 binárias, distância 2.
    C2: oito vetores de comprimento 2 sobre F_8, distância 2.
    C3: oito vetores de comprimento 3 sobre F_8, distância 3.
    Em F_8 os códigos são Σ c_i α^i, ou seja 1 → 1, α → 2, α^2 → 4.
    """
    if name == "C1":
        field = field_for_order(2)
        matrices = [[[1, 0], [0, 1]], [[0, 0], [1, 0]], [[0, 1], [0, 0]], [[1, 1], [1, 1]]]
        words = [MatFq.from_array(field, M, orient=False) for M in matrices]
        return EquidistantCode(name=name, tower=tower or build_tower(2, 1, 2), n=2, words=words, d=2)
    if name in ("C2", "C3"):
        tower = tower or build_tower(2, 1, 3)
        _require_alpha_modulus(tower)
        if name == "C2":
            rows = [(1, 2), (2, 3), (7, 1), (0, 5), (3, 4), (5, 7), (6, 6), (4, 0)]
            n, d = 2, 2
        else:
            rows = [(4, 0, 0), (1, 2, 4), (0, 1, 2), (5, 3, 6), (6, 6, 1), (3, 4, 5), (2, 7, 3), (7, 5, 7)]
            n, d = 3, 3
        words = [VecExt.from_codes(tower, row) for row in rows]
        return EquidistantCode(name=name, tower=tower, n=n, words=words, d=d)
    raise UsageError(f"Código embutido desconhecido: {name}")


def pairwise_distances(words: Sequence[Union[VecExt, MatFq]], budget: Optional[int] = None) -> np.ndarray:
    """Distâncias de posto de todos os pares i < j, na ordem de combinations"""
    pairs = list(combinations(range(len(words)), 2))
    check_budget(len(pairs), budget or ENUMERATION_BUDGET, "pares de palavras")
    if not pairs:
        return np.zeros(0, dtype=np.int64)
    left = [i for i, _ in pairs]
    right = [j for _, j in pairs]
    if isinstance(words[0], MatFq):
        field = words[0].field
        stack = field(np.stack([w.array for w in words]))
        return batch_rank(field, (stack[left] - stack[right]).view(np.ndarray))
    tower = words[0].tower
    vectors = np.stack([w.array for w in words])
    return column_ranks(tower, tower.vsub(vectors[left], vectors[right]))


def is_equidistant(words: Union[EquidistantCode, Sequence], budget: Optional[int] = None) -> Optional[int]:
    """Distância comum de todos os pares distintos, ou None"""
    if isinstance(words, EquidistantCode):
        words = words.words
    if len(words) < 2:
        raise UsageError("É preciso ao menos duas palavras")
    distances = np.unique(pairwise_distances(words, budget))
    if distances.size == 1 and distances[0] > 0:
        return int(distances[0])
    return None


def equidistant_parameters(n: int, q: int) -> Dict[str, int]:
    """Parâmetros do código equidistante de posto constante citado (só aritmética)"""
    if n < 2:
        raise UsageError("É preciso n ≥ 2")
    return {"size": q ** n - 1, "rows": comb(n, 2), "cols": n, "rank": n - 1, "distance": n - 1}


# --- Serialização ---
def _elements(tower: FieldTower, matrix: np.ndarray) -> List[List[List[int]]]:
    return [[tower.digits(x) for x in row] for row in matrix]


def code_to_schema(code: LinearRankCode) -> CodeSchema:
    return CodeSchema(
        tower=code.tower.to_schema(),
        n=code.n,
        k=code.k,
        generator=_elements(code.tower, code.generator_array),
        parity=_elements(code.tower, code.parity_array),
        tag=code.tag,
        s=code.s,
        h=[code.tower.digits(x) for x in code.h] if code.h is not None else None,
    )


def code_from_schema(schema: CodeSchema) -> LinearRankCode:
    """Reconstrói o código e confere G·H^T = 0"""
    tower = FieldTower.from_schema(schema.tower)
    generator = np.array(
        [[tower.from_digits(x) for x in row] for row in schema.generator], dtype=np.int64
    ).reshape(schema.k, schema.n)
    parity = np.array(
        [[tower.from_digits(x) for x in row] for row in schema.parity], dtype=np.int64
    ).reshape(schema.n - schema.k, schema.n)
    require_full_rank(tower, generator, "Matriz geradora")
    require_full_rank(tower, parity, "Matriz de paridade")
    if np.any(ext_syndromes(tower, generator, parity)):
        raise UsageError("Arquivo de código inconsistente: G·H^T ≠ 0")
    h = tuple(tower.from_digits(x) for x in schema.h) if schema.h is not None else None
    return LinearRankCode(
        tower=tower, n=schema.n, k=schema.k, generator=_matrix(generator),
        parity=_matrix(parity), tag=schema.tag, s=schema.s, h=h,
    )
