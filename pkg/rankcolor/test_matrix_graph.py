import networkx as nx
import numpy as np
import pytest

import matrix_graph
from errors import BudgetExceededError, ShapeError
from gf_tower import tower_for_order
from matrix_graph import (
    GraphParams, bfs_distances, check_non_bipartite, check_translation_automorphism,
    check_vertex_transitivity, clique_number, degree, eccentricity, edge_array, export_dot,
    export_edgelist_csv, find_triangle, graph_distance_bfs, graph_stats, neighbor_indices,
    neighbors, to_networkx,
)
from rank_linalg import batch_rank, indices_to_arrays, matrix_from_index, rank, rank_distance


def _params(N, n, q):
    return GraphParams.create(tower_for_order(q, N), n)


def test_grau(m22, m32):
    assert degree(m22) == 9
    assert degree(m32) == 21
    assert degree(_params(1, 1, 5)) == 4


def test_vizinhos_do_zero(m22):
    zero = matrix_from_index(m22.field, 0, 2, 2)
    found = list(neighbors(m22, zero))
    assert len({M.index() for M in found}) == 9
    assert all(rank(M) == 1 for M in found)


def test_todo_vertice_tem_grau_distinto(m32):
    heads = neighbor_indices(m32, np.arange(m32.order))
    assert heads.shape == (64, 21)
    assert all(len(set(row)) == 21 for row in heads.tolist())


def test_bfs_igual_a_distancia_de_posto(m22):
    field = m22.field
    stack = field(indices_to_arrays(np.arange(16), 2, 2, 2))
    for i in range(16):
        source = matrix_from_index(field, i, 2, 2)
        expected = batch_rank(field, (stack - stack[i]).view(np.ndarray))
        assert np.array_equal(bfs_distances(m22, source), expected)


def test_excentricidade_e_o_diametro(m22, m32):
    assert eccentricity(m22, matrix_from_index(m22.field, 0, 2, 2)) == 2
    assert eccentricity(m32, matrix_from_index(m32.field, 37, 3, 2)) == 2
    params = _params(3, 3, 2)
    assert eccentricity(params, matrix_from_index(params.field, 0, 3, 3)) == 3


def test_distancia_entre_pares_aleatorios(m32):
    rng = np.random.default_rng(3)
    for a, b in rng.integers(0, m32.order, size=(10, 2)):
        M1 = matrix_from_index(m32.field, int(a), 3, 2)
        M2 = matrix_from_index(m32.field, int(b), 3, 2)
        assert graph_distance_bfs(m32, M1, M2) == rank_distance(M1, M2)
    M = matrix_from_index(m32.field, 5, 3, 2)
    assert graph_distance_bfs(m32, M, M) == 0


def test_translacoes_sao_automorfismos(m22):
    field = m22.field
    for index in (0, 6, 15):
        assert check_translation_automorphism(m22, matrix_from_index(field, index, 2, 2))
    sample = [matrix_from_index(field, index, 2, 2) for index in (0, 3, 9, 14)]
    assert check_vertex_transitivity(m22, sample)


def test_transitividade_compara_vizinhancas(m22, monkeypatch):
    sample = [matrix_from_index(m22.field, index, 2, 2) for index in (0, 9)]
    monkeypatch.setattr(matrix_graph, "translate_indices", lambda params, indices, T: indices)
    assert not check_vertex_transitivity(m22, sample)


def test_numero_de_arestas():
    assert len(edge_array(_params(1, 1, 2))) == 1
    assert len(edge_array(_params(1, 1, 3))) == 3
    params = _params(2, 2, 2)
    assert len(edge_array(params)) == 72
    G = to_networkx(params)
    assert G.number_of_nodes() == 16
    assert G.number_of_edges() == 72
    assert nx.is_regular(G)


def test_exportacoes(m22):
    dot = export_dot(m22)
    assert dot.startswith('graph "M_2x2(2)" {')
    assert dot.count(" -- ") == 72
    rows = export_edgelist_csv(m22).strip().split("\n")
    assert rows[0] == "u_label,v_label"
    assert len(rows) == 73
    u, v = rows[1].split(",")
    assert len(u) == len(v) == 4


def test_orcamento_de_exportacao(m32):
    with pytest.raises(BudgetExceededError):
        to_networkx(m32, budget=10)


def test_nao_bipartido(m22):
    report = check_non_bipartite(m22)
    assert report["status"] == "ok"
    assert not report["bipartite"]
    assert len(report["triangle"]) == 3


def test_k2_e_bipartido():
    params = _params(1, 1, 2)
    assert find_triangle(params) is None
    assert check_non_bipartite(params)["bipartite"]


def test_clique_maxima(m22):
    assert clique_number(m22) == 4


def test_estatisticas(m22):
    stats = graph_stats(m22)
    assert stats["order"] == 16
    assert stats["degree"] == 9
    assert stats["diameter"] == 2
    assert stats["edges"] == 72
    assert stats["edge_connectivity"] == nx.edge_connectivity(to_networkx(m22))


def test_n_maior_que_N():
    with pytest.raises(ShapeError):
        _params(2, 3, 2)
