"""
Álgebra linear sobre F_q e sobre F_{q^N}.

Matrizes sobre F_q são arrays galois; vetores sobre F_{q^N} são arrays de
códigos inteiros (ver gf_tower). O posto de uma matriz é sempre o posto
algébrico sobre F_q, calculado por eliminação gaussiana.
"""
import logging
from typing import Any, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config import ENUMERATION_BUDGET
from errors import FieldError, RankDeficientError, ShapeError, UsageError, check_budget
from gf_tower import FieldTower, field_for_order
from schemas import MatrixSchema

logger = logging.getLogger(__name__)


def _field_order(field) -> int:
    return int(field.order)


class MatFq(BaseModel):
    """
    Matriz N×n com entradas em F_q (vértice do grafo matricial)

    As entradas são as representações inteiras do galois, por linha. A
    convenção n ≤ N é imposta por from_array, que transpõe quando necessário
    e registra a transposição.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    field: Any = Field(exclude=True)
    entries: Tuple[Tuple[int, ...], ...]
    transposed: bool = False

    @classmethod
    def from_array(cls, field, array, orient: bool = True) -> "MatFq":
        """
        Cria a matriz a partir de um array 2-D

        Args:
            field: Classe galois de F_q
            array: Entradas (linhas × colunas)
            orient: Transpor quando colunas > linhas

        Returns:
            A matriz validada
        """
        array = np.asarray(array, dtype=np.int64)
        if array.ndim != 2:
            raise ShapeError(f"Esperada matriz 2-D, recebido array {array.ndim}-D")
        if array.size and (array.min() < 0 or array.max() >= _field_order(field)):
            raise FieldError(f"Entradas fora de GF({field.order})")
        transposed = False
        if orient and array.shape[1] > array.shape[0]:
            array = array.T
            transposed = True
        entries = tuple(tuple(int(x) for x in row) for row in array)
        return cls(field=field, entries=entries, transposed=transposed)

    @property
    def q(self) -> int:
        return _field_order(self.field)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(self.rows, self.cols)

    @property
    def field_array(self):
        return self.field(self.array)

    def _check_shape(self, other: "MatFq") -> None:
        if self.shape != other.shape or self.field is not other.field:
            raise ShapeError(f"Formas incompatíveis: {self.shape} e {other.shape}")

    def __add__(self, other: "MatFq") -> "MatFq":
        self._check_shape(other)
        return MatFq.from_array(self.field, self.field_array + other.field_array, orient=False)

    def __sub__(self, other: "MatFq") -> "MatFq":
        self._check_shape(other)
        return MatFq.from_array(self.field, self.field_array - other.field_array, orient=False)

    def transpose(self) -> "MatFq":
        return MatFq.from_array(self.field, self.array.T, orient=False)

    def index(self) -> int:
        return matrix_index(self)

    def label(self) -> str:
        return matrix_label(self)

    def to_schema(self) -> MatrixSchema:
        p = int(self.field.characteristic)
        m = int(self.field.degree)
        rows = [[[(x // p ** j) % p for j in range(m)] for x in row] for row in self.entries]
        return MatrixSchema(q=self.q, rows=rows, transposed=self.transposed)

    @classmethod
    def from_schema(cls, schema: MatrixSchema) -> "MatFq":
        field = field_for_order(schema.q)
        p = int(field.characteristic)
        rows = [[sum(d * p ** j for j, d in enumerate(x)) for x in row] for row in schema.rows]
        matrix = cls.from_array(field, rows, orient=False)
        return matrix.model_copy(update={"transposed": schema.transposed})


class VecExt(BaseModel):
    """Vetor de comprimento n com entradas em F_{q^N}"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    tower: FieldTower = Field(exclude=True)
    entries: Tuple[int, ...]

    @classmethod
    def from_codes(cls, tower: FieldTower, codes: Sequence[int]) -> "VecExt":
        values = tuple(int(c) for c in codes)
        for value in values:
            if not 0 <= value < tower.order:
                raise FieldError(f"{value} não é um elemento de GF({tower.q}^{tower.N})")
        return cls(tower=tower, entries=values)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def __sub__(self, other: "VecExt") -> "VecExt":
        if other.tower != self.tower or other.n != self.n:
            raise ShapeError("Vetores de comprimentos ou torres diferentes")
        return VecExt.from_codes(self.tower, self.tower.vsub(self.array, other.array))

    def __add__(self, other: "VecExt") -> "VecExt":
        if other.tower != self.tower or other.n != self.n:
            raise ShapeError("Vetores de comprimentos ou torres diferentes")
        return VecExt.from_codes(self.tower, self.tower.vadd(self.array, other.array))


# --- Posto sobre F_q ---
def array_rank(field, array) -> int:
    return int(np.linalg.matrix_rank(field(np.asarray(array, dtype=np.int64))))


def rank(M: MatFq) -> int:
    """Posto algébrico de M sobre F_q"""
    if M.rows == 0 or M.cols == 0:
        return 0
    return array_rank(M.field, M.array)


def rank_distance(M1: MatFq, M2: MatFq) -> int:
    """d_R(M1, M2) = posto de M1 - M2"""
    M1._check_shape(M2)
    return rank(M1 - M2)


def batch_rank(field, stack) -> np.ndarray:
    """
    Postos de uma pilha (B, r, c) de matrizes sobre F_q

    Eliminação gaussiana vetorizada: em cada coluna, todas as matrizes que
    ainda têm pivô disponível avançam juntas.

    Args:
        field: Classe galois de F_q
        stack: Array (B, r, c) de representações inteiras

    Returns:
        Array (B,) com os postos
    """
    stack = np.asarray(stack, dtype=np.int64)
    if stack.ndim != 3:
        raise ShapeError("batch_rank espera um array (B, r, c)")
    count, rows, cols = stack.shape
    ranks = np.zeros(count, dtype=np.int64)
    if count == 0 or rows == 0 or cols == 0:
        return ranks
    A = field(stack.copy())
    row_ids = np.arange(rows)
    for col in range(cols):
        mask = (A[:, :, col].view(np.ndarray) != 0) & (row_ids[None, :] >= ranks[:, None])
        active = mask.any(axis=1)
        if not active.any():
            continue
        sel = np.flatnonzero(active)
        pivot = np.argmax(mask[sel], axis=1)
        target = ranks[sel]

        pivot_rows = A[sel, pivot].copy()
        A[sel, pivot] = A[sel, target]
        A[sel, target] = pivot_rows

        pivots = A[sel, target, col]
        A[sel, target] = A[sel, target] / pivots[:, None]
        factors = A[sel, :, col].copy()
        factors[np.arange(sel.size), target] = 0
        A[sel] = A[sel] - factors[:, :, None] * A[sel, target][:, None, :]
        ranks[sel] += 1
    return ranks


# --- Representação vetorial ↔ matricial ---
def vector_to_matrix(v: VecExt) -> MatFq:
    """Matriz N×n cuja coluna j é a expansão de v_j na base fixada"""
    if v.n > v.tower.N:
        raise ShapeError(f"Comprimento {v.n} maior que N = {v.tower.N}")
    columns = v.tower.expand_many(v.array)
    return MatFq.from_array(v.tower.Fq, columns.T, orient=False)


def matrix_to_vector(tower: FieldTower, M: MatFq) -> VecExt:
    """Inverso de vector_to_matrix"""
    if M.rows != tower.N or M.field is not tower.Fq:
        raise ShapeError(f"Esperada matriz com {tower.N} linhas sobre GF({tower.q})")
    return VecExt.from_codes(tower, tower.contract_many(M.array.T))


def column_ranks(tower: FieldTower, vectors) -> np.ndarray:
    """Postos-coluna de um array (B, n) de vetores sobre F_{q^N}"""
    vectors = np.asarray(vectors, dtype=np.int64)
    return batch_rank(tower.Fq, tower.expand_many(vectors))


def column_rank(v: VecExt) -> int:
    """Número máximo de coordenadas de v linearmente independentes sobre F_q"""
    if v.n == 0:
        return 0
    return array_rank(v.tower.Fq, v.tower.expand_many(v.array))


# --- Contagens ---
def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Coeficiente q-binomial [n k]_q, inteiro exato"""
    if k < 0 or k > n:
        return 0
    numerator, denominator = 1, 1
    for i in range(k):
        numerator *= q ** (n - i) - 1
        denominator *= q ** (i + 1) - 1
    return numerator // denominator


def count_rank_k(N: int, n: int, q: int, k: int) -> int:
    """
    Número de matrizes N×n de posto k sobre F_q

    Args:
        N: Linhas
        n: Colunas (n ≤ N)
        q: Ordem do corpo
        k: Posto (0 ≤ k ≤ n)

    Returns:
        ∏_{i<k}(q^N−q^i)(q^n−q^i) / ∏_{i<k}(q^k−q^i)
    """
    if not 0 <= k <= n or n > N:
        raise UsageError(f"Posto k = {k} fora de [0, {n}] (N = {N})")
    numerator, denominator = 1, 1
    for i in range(k):
        numerator *= (q ** N - q ** i) * (q ** n - q ** i)
        denominator *= q ** k - q ** i
    return numerator // denominator


def rank_one_count(N: int, n: int, q: int) -> int:
    return (q ** N - 1) * (q ** n - 1) // (q - 1)


# --- Codificação por índice e rótulo ---
def matrix_index(M: MatFq) -> int:
    """Dígitos base q em ordem de linha, o mais significativo primeiro"""
    index = 0
    for row in M.entries:
        for x in row:
            index = index * M.q + x
    return index


def matrix_from_index(field, index: int, N: int, n: int) -> MatFq:
    q = _field_order(field)
    if not 0 <= index < q ** (N * n):
        raise UsageError(f"Índice {index} fora de [0, {q}^{N * n})")
    digits = []
    for _ in range(N * n):
        index, digit = divmod(index, q)
        digits.append(digit)
    return MatFq.from_array(field, np.array(digits[::-1], dtype=np.int64).reshape(N, n), orient=False)


def matrix_label(M: MatFq) -> str:
    if M.q > 36:
        raise UsageError("Rótulos base q exigem q ≤ 36")
    return np.base_repr(matrix_index(M), base=M.q).zfill(M.rows * M.cols).lower()


def matrix_from_label(field, label: str, N: int, n: int) -> MatFq:
    q = _field_order(field)
    if len(label) != N * n:
        raise UsageError(f"Rótulo '{label}' deve ter {N * n} dígitos base {q}")
    try:
        index = int(label, q)
    except ValueError:
        raise UsageError(f"Rótulo '{label}' não é um número base {q}")
    return matrix_from_index(field, index, N, n)


def indices_to_arrays(indices, N: int, n: int, q: int) -> np.ndarray:
    """Versão vetorizada de matrix_from_index: (B,) -> (B, N, n)"""
    indices = np.asarray(indices, dtype=np.int64)
    powers = q ** np.arange(N * n - 1, -1, -1, dtype=np.int64)
    digits = (indices[:, None] // powers) % q
    return digits.reshape(-1, N, n)


def arrays_to_indices(stack, q: int) -> np.ndarray:
    stack = np.asarray(stack, dtype=np.int64)
    flat = stack.reshape(stack.shape[0], int(np.prod(stack.shape[1:])))
    powers = q ** np.arange(flat.shape[1] - 1, -1, -1, dtype=np.int64)
    return (flat * powers).sum(axis=1)


# --- Enumeração ---
def enumerate_matrices(N: int, n: int, q: int, budget: Optional[int] = None) -> Iterator[MatFq]:
    """Todas as matrizes N×n sobre F_q, em ordem de índice"""
    total = q ** (N * n)
    check_budget(total, budget or ENUMERATION_BUDGET, f"matrizes {N}×{n} sobre GF({q})")
    field = field_for_order(q)
    for index in range(total):
        yield matrix_from_index(field, index, N, n)


def _nonzero_vectors(length: int, q: int, normalized: bool) -> np.ndarray:
    indices = np.arange(1, q ** length, dtype=np.int64)
    powers = q ** np.arange(length - 1, -1, -1, dtype=np.int64)
    vectors = (indices[:, None] // powers) % q
    if normalized:
        first = vectors[np.arange(len(vectors)), np.argmax(vectors != 0, axis=1)]
        vectors = vectors[first == 1]
    return vectors


def rank_one_stack(field, N: int, n: int, budget: Optional[int] = None) -> np.ndarray:
    """
    Todas as matrizes de posto 1, como array (D, N, n)

    Cada uma é u·w^T com u ≠ 0 e a primeira entrada não nula de w igual a 1.
    """
    q = _field_order(field)
    check_budget(rank_one_count(N, n, q), budget or ENUMERATION_BUDGET, "matrizes de posto 1")
    U = field(_nonzero_vectors(N, q, normalized=False))
    W = field(_nonzero_vectors(n, q, normalized=True))
    stack = U[:, None, :, None] * W[None, :, None, :]
    return stack.view(np.ndarray).astype(np.int64).reshape(-1, N, n)


def enumerate_rank_one(N: int, n: int, q: int, budget: Optional[int] = None) -> Iterator[MatFq]:
    field = field_for_order(q)
    for array in rank_one_stack(field, N, n, budget):
        yield MatFq.from_array(field, array, orient=False)


def random_invertible(field, size: int, rng: np.random.Generator):
    """Matriz invertível uniforme (por rejeição) sobre F_q"""
    while True:
        candidate = field.Random((size, size), seed=rng)
        if int(np.linalg.matrix_rank(candidate)) == size:
            return candidate


# --- Álgebra linear sobre F_{q^N} (matrizes de códigos) ---
def ext_row_reduce(tower: FieldTower, matrix) -> Tuple[np.ndarray, List[int]]:
    """
    Forma escalonada reduzida sobre F_{q^N}

    Returns:
        Par (matriz reduzida, colunas pivô)
    """
    A = np.array(matrix, dtype=np.int64).copy()
    if A.ndim != 2:
        raise ShapeError("Esperada matriz 2-D")
    rows, cols = A.shape
    pivots: List[int] = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        candidates = np.flatnonzero(A[row:, col] != 0)
        if candidates.size == 0:
            continue
        i = row + int(candidates[0])
        if i != row:
            A[[row, i]] = A[[i, row]]
        A[row] = tower.vmul(A[row], tower.inv(int(A[row, col])))
        for j in range(rows):
            factor = int(A[j, col])
            if j != row and factor != 0:
                A[j] = tower.vsub(A[j], tower.vmul(A[row], factor))
        pivots.append(col)
        row += 1
    return A, pivots


def ext_rank(tower: FieldTower, matrix) -> int:
    matrix = np.asarray(matrix, dtype=np.int64)
    if matrix.size == 0:
        return 0
    return len(ext_row_reduce(tower, matrix)[1])


def ext_null_space(tower: FieldTower, matrix, cols: Optional[int] = None) -> np.ndarray:
    """
    Base do núcleo à direita {x : A x^T = 0} sobre F_{q^N}

    Args:
        tower: Torre
        matrix: Matriz r×c de códigos (r pode ser 0)
        cols: Número de colunas quando a matriz não tem linhas

    Returns:
        Matriz (c - posto)×c cujas linhas formam a base
    """
    A = np.asarray(matrix, dtype=np.int64)
    c = cols if A.size == 0 and cols is not None else A.shape[-1]
    if A.size == 0:
        return np.eye(c, dtype=np.int64)
    R, pivots = ext_row_reduce(tower, A)
    free = [j for j in range(c) if j not in pivots]
    basis = np.zeros((len(free), c), dtype=np.int64)
    for b, f in enumerate(free):
        basis[b, f] = 1
        for i, pc in enumerate(pivots):
            basis[b, pc] = tower.neg(int(R[i, f]))
    return basis


def ext_syndromes(tower: FieldTower, vectors, H) -> np.ndarray:
    """Síndromes v·H^T de um array (B, n) de vetores; resultado (B, r)"""
    V = np.asarray(vectors, dtype=np.int64)
    H = np.asarray(H, dtype=np.int64)
    if H.size == 0:
        return np.zeros((V.shape[0], 0), dtype=np.int64)
    if V.shape[-1] != H.shape[1]:
        raise ShapeError(f"Vetores de comprimento {V.shape[-1]} e H com {H.shape[1]} colunas")
    result = np.zeros((V.shape[0], H.shape[0]), dtype=np.int64)
    for j in range(H.shape[1]):
        result = tower.vadd(result, tower.vmul(V[:, j][:, None], H[:, j][None, :]))
    return result


def ext_matmul(tower: FieldTower, A, B) -> np.ndarray:
    """Produto A·B sobre F_{q^N}"""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[1] != B.shape[0]:
        raise ShapeError(f"Produto {A.shape} · {B.shape} inválido")
    return ext_syndromes(tower, A, B.T)


def require_full_rank(tower: FieldTower, matrix, what: str) -> None:
    matrix = np.asarray(matrix, dtype=np.int64)
    if matrix.size and ext_rank(tower, matrix) != matrix.shape[0]:
        raise RankDeficientError(f"{what} não tem posto completo")
