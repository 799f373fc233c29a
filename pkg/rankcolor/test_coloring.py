import numpy as np
import pytest

import coloring as coloring_module
from bounds import chi_prime
from coloring import (
    all_vertex_colors, clique_d1, color_many, color_of_matrix, coloring_from_schema,
    coloring_to_schema, d_distance_coloring, exact_d_coloring, find_violation,
    find_violation_in_assignment, first_column_coloring, is_clique, max_forbidden_code_size,
    partition_from_equidistant, require_proper, search_forbidden_H, verification_report,
    verify_at_most_d, verify_exactly_d, vertex_vectors,
)
from errors import BudgetExceededError, SearchFailedError, UsageError, VerificationError
from rank_codes import builtin_code
from rank_linalg import matrix_from_index, rank, rank_distance


def test_coloracao_d1_em_m22(m22):
    coloring = d_distance_coloring(m22, 1)
    assert coloring.num_colors == 4
    assert verify_at_most_d(coloring)
    assert verify_at_most_d(coloring, pairwise=True)
    assert len(np.unique(all_vertex_colors(coloring))) == 4


def test_coloracao_d1_em_m32(m32):
    coloring = d_distance_coloring(m32, 1)
    assert coloring.num_colors == 8
    assert verify_at_most_d(coloring, pairwise=True)
    colors = all_vertex_colors(coloring)
    assert colors.min() >= 0 and colors.max() < 8


def test_d_igual_a_n_separa_todos(m22):
    coloring = d_distance_coloring(m22, 2)
    assert coloring.num_colors == 16
    assert len(np.unique(all_vertex_colors(coloring))) == 16
    assert verify_at_most_d(coloring, pairwise=True)


def test_d_maior_que_n_repete_d_igual_a_n(m22):
    coloring = d_distance_coloring(m22, 3)
    assert coloring.num_colors == 16
    assert "d > n" in coloring.provenance
    assert verify_at_most_d(coloring)
    # chi_prime segue a cláusula de fronteira; a coloração não
    assert chi_prime(m22.N, m22.n, m22.q, 3) == 1


def test_duas_cores_nao_bastam(m22):
    rng = np.random.default_rng(1)
    colors = rng.integers(0, 2, size=m22.order)
    pair = find_violation_in_assignment(m22, colors, 1, exact=False)
    assert pair is not None
    assert rank_distance(*pair) == 1


def test_uma_cor_e_exatamente_d_propria_para_d_maior_que_n(m22):
    coloring = exact_d_coloring(m22, 3)
    assert coloring.num_colors == 1
    assert verify_exactly_d(coloring, pairwise=True)
    assert not verify_at_most_d(coloring, 3)


def test_primeira_coluna(m22):
    coloring = first_column_coloring(m22)
    assert coloring.num_colors == 4
    assert verify_exactly_d(coloring, pairwise=True)
    pair = find_violation(coloring, d=1, exact=False)
    assert pair is not None and rank(pair[1]) == 1
    assert find_violation(coloring, d=1, exact=False, pairwise=True) is not None


def test_clique_de_uma_coluna(m22, m32):
    for params in (m22, m32):
        witness = clique_d1(params)
        assert len(witness.matrices) == params.q ** params.N
        assert is_clique(witness)
    assert not is_clique(type(witness)(matrices=[matrix_from_index(m22.field, i, 2, 2) for i in (0, 9)]))


def test_busca_de_codigo_de_distancia_proibida(f4):
    found = search_forbidden_H(f4, 2, 2, 1, seed=0)
    assert found.verified
    assert sum(found.spectrum.values()) == 4
    assert found.spectrum.get(2, 0) == 0


def test_busca_com_h_quadrada(f8):
    found = search_forbidden_H(f8, 2, 1, 2, seed=5)
    assert found.spectrum == {0: 1}


def test_coloracao_exatamente_2(m22):
    coloring = exact_d_coloring(m22, 2, seed=0, m=1)
    assert coloring.num_colors == 4
    assert coloring.bound_exponent == 3
    assert verify_exactly_d(coloring)
    assert verify_exactly_d(coloring, pairwise=True)


def test_coloracao_exatamente_d_linhas_padrao(m22):
    coloring = exact_d_coloring(m22, 2, seed=0)
    assert coloring.num_colors == 16
    assert verify_exactly_d(coloring, pairwise=True)


def test_coloracao_exatamente_1_usa_q_elevado_a_N(m22):
    coloring = exact_d_coloring(m22, 1, seed=0)
    assert coloring.num_colors >= m22.q ** m22.N
    assert verify_exactly_d(coloring, pairwise=True)
    assert verify_at_most_d(coloring, pairwise=True)


def test_busca_deterministica_por_semente(m32):
    first = exact_d_coloring(m32, 2, seed=11)
    second = exact_d_coloring(m32, 2, seed=11, threads=3)
    assert first.H_col == second.H_col


def test_busca_esgotada(monkeypatch, f4):
    monkeypatch.setattr(coloring_module, "_search_restart", lambda *args: (None, {}, 0))
    with pytest.raises(SearchFailedError) as excinfo:
        search_forbidden_H(f4, 2, 2, 1, seed=0, restarts=3)
    assert excinfo.value.restarts == 3


def test_busca_respeita_orcamento(f8):
    with pytest.raises(BudgetExceededError):
        search_forbidden_H(f8, 3, 2, 1, budget=10)
    with pytest.raises(UsageError):
        search_forbidden_H(f8, 3, 2, 4)


def test_violacao_independe_de_threads(m32):
    coloring = first_column_coloring(m32)
    one = find_violation(coloring, d=1, exact=False, threads=1)
    many = find_violation(coloring, d=1, exact=False, threads=4)
    assert one == many


def test_cores_de_vertices(m22):
    coloring = d_distance_coloring(m22, 1)
    zero = matrix_from_index(m22.field, 0, 2, 2)
    assert color_of_matrix(coloring, zero) == 0
    vectors = vertex_vectors(m22, np.arange(m22.order))
    assert np.array_equal(color_many(coloring, vectors), all_vertex_colors(coloring))


def test_relatorio_de_verificacao(m22):
    report = verification_report(d_distance_coloring(m22, 1))
    assert report.status == "ok"
    assert report.num_colors == "4"
    bad = first_column_coloring(m22).model_copy(update={"mode": "at-most-d", "d": 1})
    report = verification_report(bad, pairwise=True)
    assert report.status == "violation"
    assert len(report.pair) == 2


def test_maior_codigo_de_distancia_proibida(m22):
    assert max_forbidden_code_size(m22, 1) == 4
    assert max_forbidden_code_size(m22, 2) == 4


def test_particao_a_partir_de_codigos_equidistantes():
    for name, colors in (("C1", 4), ("C2", 8), ("C3", 8)):
        report = partition_from_equidistant(builtin_code(name))
        assert report["status"] == "ok"
        assert report["chi_exact"] == colors


def test_schema_de_coloracao(m22):
    coloring = exact_d_coloring(m22, 2, seed=0, m=1)
    schema = coloring_to_schema(coloring)
    assert schema.num_colors == "4"
    loaded = coloring_from_schema(schema)
    assert loaded.H_col == coloring.H_col
    assert loaded.mode == "exactly-d"
    schema.num_colors = "5"
    with pytest.raises(UsageError):
        coloring_from_schema(schema)


def test_exige_coloracao_propria(m22):
    require_proper(d_distance_coloring(m22, 1), pairwise=True)
    bad = first_column_coloring(m22).model_copy(update={"mode": "at-most-d", "d": 1})
    with pytest.raises(VerificationError) as excinfo:
        require_proper(bad)
    assert len(excinfo.value.witness) == 2
