import numpy as np
import pytest

from errors import BudgetExceededError, FieldError, RankDeficientError, ShapeError, UsageError
from gf_tower import build_tower, field_for_order
from rank_linalg import (
    MatFq, VecExt, array_rank, batch_rank, column_rank, column_ranks, count_rank_k,
    enumerate_matrices, enumerate_rank_one, ext_matmul, ext_null_space, ext_rank,
    gaussian_binomial, indices_to_arrays, matrix_from_index, matrix_from_label, matrix_index,
    matrix_label, matrix_to_vector, random_invertible, rank, rank_distance, rank_one_count,
    rank_one_stack, require_full_rank, vector_to_matrix,
)

GF2 = field_for_order(2)
GF3 = field_for_order(3)

C1 = [[[1, 0], [0, 1]], [[0, 0], [1, 0]], [[0, 1], [0, 0]], [[1, 1], [1, 1]]]


def test_posto_basico():
    assert rank(MatFq.from_array(GF2, np.zeros((3, 2)))) == 0
    assert rank(MatFq.from_array(GF2, [[1, 0], [0, 1], [0, 0]])) == 2
    assert rank(MatFq.from_array(GF2, [[1, 1], [1, 1]])) == 1
    assert rank(MatFq.from_array(GF3, [[1, 2], [2, 1]])) == 1
    M = MatFq.from_array(GF3, [[1, 0, 2], [0, 1, 1]], orient=False)
    assert M.transpose().shape == (3, 2)
    assert rank(M.transpose()) == rank(M) == 2


def test_distancia_de_posto_em_c1():
    words = [MatFq.from_array(GF2, M) for M in C1]
    for i, A in enumerate(words):
        assert rank_distance(A, A) == 0
        for B in words[i + 1:]:
            assert rank_distance(A, B) == 2


def test_orientacao_transpoe_matriz_larga():
    M = MatFq.from_array(GF2, [[1, 0, 1], [0, 1, 1]])
    assert M.shape == (3, 2)
    assert M.transposed
    assert rank(M) == 2
    assert not MatFq.from_array(GF2, [[1, 0, 1]], orient=False).transposed


def test_entradas_e_formas_invalidas():
    with pytest.raises(FieldError):
        MatFq.from_array(GF2, [[2, 0], [0, 1]])
    with pytest.raises(ShapeError):
        MatFq.from_array(GF2, [1, 0])
    A = MatFq.from_array(GF2, [[1, 0], [0, 1]])
    B = MatFq.from_array(GF2, [[1], [0]])
    with pytest.raises(ShapeError):
        rank_distance(A, B)


def test_batch_rank_confere_com_galois():
    rng = np.random.default_rng(7)
    stack = rng.integers(0, 3, size=(200, 4, 3))
    expected = [array_rank(GF3, M) for M in stack]
    assert batch_rank(GF3, stack).tolist() == expected


def test_contagem_por_posto():
    assert count_rank_k(2, 2, 2, 0) == 1
    assert count_rank_k(2, 2, 2, 1) == 9
    assert count_rank_k(3, 2, 2, 2) == 42
    with pytest.raises(UsageError):
        count_rank_k(2, 2, 2, 3)


@pytest.mark.parametrize("N,n,q", [(2, 2, 2), (3, 2, 2), (2, 2, 3), (3, 3, 2)])
def test_contagem_por_posto_contra_enumeracao(N, n, q):
    field = field_for_order(q)
    stack = indices_to_arrays(np.arange(q ** (N * n)), N, n, q)
    counts = np.bincount(batch_rank(field, stack), minlength=n + 1)
    assert counts.tolist() == [count_rank_k(N, n, q, k) for k in range(n + 1)]


def test_contagem_por_posto_via_binomial_gaussiano():
    for N, n, q in ((3, 2, 2), (4, 3, 3), (5, 5, 2)):
        for k in range(n + 1):
            falling = 1
            for i in range(k):
                falling *= q ** N - q ** i
            assert count_rank_k(N, n, q, k) == gaussian_binomial(n, k, q) * falling


def test_binomial_gaussiano():
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(3, 0, 5) == 1
    assert gaussian_binomial(3, 4, 2) == 0


def test_matrizes_de_posto_1():
    assert rank_one_count(2, 2, 2) == 9
    assert rank_one_count(2, 1, 2) == 3
    assert rank_one_count(1, 1, 5) == 4
    ones = rank_one_stack(GF3, 2, 2)
    assert len(ones) == rank_one_count(2, 2, 3) == 32
    assert np.all(batch_rank(GF3, ones) == 1)
    assert len({matrix_index(M) for M in enumerate_rank_one(2, 2, 2)}) == 9


def test_vetor_para_matriz(f8):
    zero = vector_to_matrix(VecExt.from_codes(f8, [0, 0]))
    assert zero.shape == (3, 2) and not np.any(zero.array)
    M = vector_to_matrix(VecExt.from_codes(f8, [2, 0]))
    assert M.array[:, 0].tolist() == f8.expand(2)
    assert M.array[:, 1].tolist() == [0, 0, 0]
    assert rank(M) == 1
    v = VecExt.from_codes(f8, [5, 3])
    assert matrix_to_vector(f8, vector_to_matrix(v)) == v
    with pytest.raises(ShapeError):
        vector_to_matrix(VecExt.from_codes(f8, [1, 2, 3, 4]))


def test_posto_coluna(f8, f9):
    assert column_rank(VecExt.from_codes(f8, [1, 2, 4])) == 3
    for x in range(1, f9.order):
        for c in range(1, f9.q):
            assert column_rank(VecExt.from_codes(f9, [f9.mul(c, x)])) == 1
        assert column_rank(VecExt.from_codes(f9, [x, x])) == 1
    assert column_ranks(f8, [[1, 2, 4], [0, 0, 0], [3, 3, 0]]).tolist() == [3, 0, 1]


def test_rotulos_base_q():
    identity = MatFq.from_array(GF2, [[1, 0], [0, 1]])
    assert matrix_label(identity) == "1001"
    assert matrix_from_label(GF2, "1001", 2, 2) == identity
    assert matrix_index(identity) == 9
    assert matrix_from_index(GF2, 9, 2, 2) == identity
    M = MatFq.from_array(GF3, [[2, 1], [0, 1]])
    assert matrix_from_label(GF3, matrix_label(M), 2, 2) == M
    with pytest.raises(UsageError):
        matrix_from_label(GF2, "100", 2, 2)
    with pytest.raises(UsageError):
        matrix_from_label(GF2, "1002", 2, 2)
    with pytest.raises(UsageError):
        matrix_from_index(GF2, 16, 2, 2)


def test_schema_de_matriz_sobre_f4():
    GF4 = field_for_order(4)
    M = MatFq.from_array(GF4, [[3, 1], [2, 0]])
    schema = M.to_schema()
    assert schema.rows[0][0] == [1, 1]
    assert MatFq.from_schema(schema) == M


def test_orcamento_de_enumeracao():
    assert len(list(enumerate_matrices(2, 2, 2))) == 16
    with pytest.raises(BudgetExceededError):
        list(enumerate_matrices(3, 3, 2, budget=100))


def test_algebra_sobre_a_extensao(f8):
    A = np.array([[1, 2], [2, 4]])
    assert ext_rank(f8, A) == 1
    with pytest.raises(RankDeficientError):
        require_full_rank(f8, A, "A")
    kernel = ext_null_space(f8, A)
    assert kernel.shape == (1, 2)
    assert not np.any(ext_matmul(f8, A, kernel.T))
    assert ext_null_space(f8, np.zeros((0, 3)), cols=3).tolist() == np.eye(3, dtype=int).tolist()


def test_inversivel_aleatorio():
    rng = np.random.default_rng(0)
    M = random_invertible(GF3, 3, rng)
    assert array_rank(GF3, M) == 3


def test_posto_invariante_por_equivalencia():
    rng = np.random.default_rng(3)
    stack = rng.integers(0, 3, size=(20, 3, 3))
    for M in stack:
        P = random_invertible(GF3, 3, rng)
        Q = random_invertible(GF3, 3, rng)
        assert array_rank(GF3, P @ GF3(M) @ Q) == array_rank(GF3, M)


def test_posto_coluna_independe_da_base(f8):
    custom = build_tower(2, 1, 3, basis=[1, 3, 5])
    vectors = np.random.default_rng(4).integers(0, 8, size=(50, 3))
    assert column_ranks(custom, vectors).tolist() == column_ranks(f8, vectors).tolist()
