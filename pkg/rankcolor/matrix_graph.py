"""
O grafo matricial M_{N×n}(q) como grafo implícito.

Vértices são as matrizes N×n sobre F_q, identificadas pelo índice base q em
ordem de linha; duas matrizes são adjacentes quando a diferença tem posto 1.
O grafo só é materializado (networkx) para exportação e verificações em
instâncias pequenas, sempre sob orçamento.
"""
import logging
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config import ENUMERATION_BUDGET, EXPORT_VERTEX_BUDGET, FORBIDDEN_MAX_ORDER
from errors import ShapeError, check_budget
from gf_tower import FieldTower
from rank_linalg import (
    MatFq, arrays_to_indices, batch_rank, indices_to_arrays, matrix_from_index,
    matrix_index, matrix_label, rank_one_count, rank_one_stack,
)
from workers import chunk_ranges

logger = logging.getLogger(__name__)

FRONTIER_CHUNK = 2048


class GraphParams(BaseModel):
    """Parâmetros de M_{N×n}(q); N é o grau da torre"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    tower: FieldTower = Field(exclude=True)
    n: int

    @classmethod
    def create(cls, tower: FieldTower, n: int) -> "GraphParams":
        if not 1 <= n <= tower.N:
            raise ShapeError(f"É preciso 1 ≤ n ≤ N; recebido n = {n}, N = {tower.N}")
        return cls(tower=tower, n=n)

    @property
    def N(self) -> int:
        return self.tower.N

    @property
    def q(self) -> int:
        return self.tower.q

    @property
    def field(self):
        return self.tower.Fq

    @property
    def order(self) -> int:
        return self.q ** (self.N * self.n)

    @property
    def degree(self) -> int:
        return rank_one_count(self.N, self.n, self.q)


@lru_cache(maxsize=32)
def _rank_one_field(field, N: int, n: int):
    return field(rank_one_stack(field, N, n))


def degree(params: GraphParams) -> int:
    """(q^N − 1)(q^n − 1)/(q − 1)"""
    return params.degree


def _check_vertex(params: GraphParams, M: MatFq) -> None:
    if M.shape != (params.N, params.n) or M.field is not params.field:
        raise ShapeError(f"Vértice {M.shape} não pertence a M_{params.N}x{params.n}({params.q})")


def translate_indices(params: GraphParams, indices, T: MatFq) -> np.ndarray:
    """Índices de v + T para cada índice v"""
    stack = params.field(indices_to_arrays(indices, params.N, params.n, params.q))
    moved = stack + T.field_array[None]
    return arrays_to_indices(moved.view(np.ndarray), params.q)


def neighbor_indices(params: GraphParams, indices) -> np.ndarray:
    """
    Vizinhos de cada vértice, como array (B, grau) de índices

    Args:
        params: Parâmetros do grafo
        indices: Índices dos vértices

    Returns:
        Linha b = índices de v_b + R para toda matriz R de posto 1
    """
    indices = np.asarray(indices, dtype=np.int64)
    ones = _rank_one_field(params.field, params.N, params.n)
    blocks = []
    for start, stop in chunk_ranges(len(indices), FRONTIER_CHUNK):
        stack = params.field(indices_to_arrays(indices[start:stop], params.N, params.n, params.q))
        sums = stack[:, None] + ones[None]
        flat = sums.view(np.ndarray).reshape(-1, params.N, params.n)
        blocks.append(arrays_to_indices(flat, params.q).reshape(stop - start, -1))
    if not blocks:
        return np.zeros((0, len(ones)), dtype=np.int64)
    return np.concatenate(blocks)


def neighbors(params: GraphParams, M: MatFq) -> Iterator[MatFq]:
    """M + R para toda R de posto 1"""
    _check_vertex(params, M)
    for index in neighbor_indices(params, [matrix_index(M)])[0]:
        yield matrix_from_index(params.field, int(index), params.N, params.n)


def _bfs(params: GraphParams, source: int, target: Optional[int], budget: Optional[int]) -> np.ndarray:
    check_budget(params.order, budget or ENUMERATION_BUDGET, f"BFS em {params.order} vértices")
    level = np.full(params.order, -1, dtype=np.int64)
    level[source] = 0
    frontier = np.array([source], dtype=np.int64)
    horizon = 0
    while frontier.size and (target is None or level[target] < 0):
        horizon += 1
        reached = np.unique(neighbor_indices(params, frontier).ravel())
        frontier = reached[level[reached] < 0]
        level[frontier] = horizon
        logger.debug(f"BFS nível {horizon}: {frontier.size} novos vértices")
    return level


def bfs_distances(params: GraphParams, source: MatFq, budget: Optional[int] = None) -> np.ndarray:
    """Distâncias de source a todos os vértices, indexadas pelo índice do vértice"""
    _check_vertex(params, source)
    return _bfs(params, matrix_index(source), None, budget)


def graph_distance_bfs(params: GraphParams, M1: MatFq, M2: MatFq, budget: Optional[int] = None) -> int:
    """Comprimento do menor caminho entre M1 e M2"""
    _check_vertex(params, M1)
    _check_vertex(params, M2)
    target = matrix_index(M2)
    return int(_bfs(params, matrix_index(M1), target, budget)[target])


def eccentricity(params: GraphParams, M: MatFq, budget: Optional[int] = None) -> int:
    return int(bfs_distances(params, M, budget).max())


def check_vertex_transitivity(params: GraphParams, sample: Sequence[MatFq]) -> bool:
    """
    Verifica as translações ρ(A) = A + (M2 − M1) nos pares da amostra

    Para cada par, ρ leva M1 em M2 e a vizinhança de M1 exatamente na
    vizinhança de M2.
    """
    for M in sample:
        _check_vertex(params, M)
    indices = np.array([matrix_index(M) for M in sample], dtype=np.int64)
    neighborhoods = np.sort(neighbor_indices(params, indices), axis=1)
    for i, M1 in enumerate(sample):
        for j, M2 in enumerate(sample):
            T = M2 - M1
            if M1 + T != M2:
                return False
            moved = np.sort(translate_indices(params, neighborhoods[i], T))
            if not np.array_equal(moved, neighborhoods[j]):
                return False
    return True


def check_translation_automorphism(params: GraphParams, T: MatFq, budget: Optional[int] = None) -> bool:
    """Verifica exaustivamente que A ↦ A + T preserva o conjunto de arestas"""
    _check_vertex(params, T)
    check_budget(params.order, budget or EXPORT_VERTEX_BUDGET, "verificação de automorfismo")
    vertices = np.arange(params.order, dtype=np.int64)
    moved_neighbors = neighbor_indices(params, translate_indices(params, vertices, T))
    neighbors_moved = translate_indices(params, neighbor_indices(params, vertices).ravel(), T)
    neighbors_moved = neighbors_moved.reshape(moved_neighbors.shape)
    return bool(np.array_equal(np.sort(moved_neighbors, axis=1), np.sort(neighbors_moved, axis=1)))


# --- Grafo explícito ---
def edge_array(params: GraphParams, budget: Optional[int] = None) -> np.ndarray:
    """Arestas (u, v) com u < v, ordenadas"""
    check_budget(params.order, budget or EXPORT_VERTEX_BUDGET, "exportação do grafo")
    vertices = np.arange(params.order, dtype=np.int64)
    heads = neighbor_indices(params, vertices)
    tails = np.repeat(vertices, heads.shape[1])
    heads = heads.ravel()
    keep = tails < heads
    edges = np.stack([tails[keep], heads[keep]], axis=1)
    return edges[np.lexsort((edges[:, 1], edges[:, 0]))]


def vertex_labels(params: GraphParams) -> List[str]:
    return [
        matrix_label(matrix_from_index(params.field, index, params.N, params.n))
        for index in range(params.order)
    ]


def to_networkx(params: GraphParams, budget: Optional[int] = None) -> nx.Graph:
    """Grafo networkx com vértices rotulados pelos dígitos base q"""
    edges = edge_array(params, budget)
    labels = vertex_labels(params)
    G = nx.Graph(name=f"M_{params.N}x{params.n}({params.q})")
    G.add_nodes_from(labels)
    G.add_edges_from((labels[u], labels[v]) for u, v in edges)
    logger.info(f"Grafo explícito: {G.number_of_nodes()} vértices, {G.number_of_edges()} arestas")
    return G


def export_dot(params: GraphParams, budget: Optional[int] = None) -> str:
    """Grafo não direcionado em DOT, cada aresta uma vez"""
    edges = edge_array(params, budget)
    labels = vertex_labels(params)
    lines = [f'graph "M_{params.N}x{params.n}({params.q})" {{']
    lines.extend(f'  "{label}";' for label in labels)
    lines.extend(f'  "{labels[u]}" -- "{labels[v]}";' for u, v in edges)
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_edgelist_csv(params: GraphParams, budget: Optional[int] = None) -> str:
    """Lista de arestas CSV 'u_label,v_label'"""
    G = to_networkx(params, budget)
    rows = ["u_label,v_label"]
    rows.extend(nx.generate_edgelist(G, delimiter=",", data=False))
    return "\n".join(rows) + "\n"


def find_triangle(params: GraphParams) -> Optional[List[str]]:
    """Um triângulo 0, R1, R2 (R1, R2 e R2 − R1 de posto 1), se existir"""
    ones = _rank_one_field(params.field, params.N, params.n)
    if len(ones) < 2:
        return None
    ranks = batch_rank(params.field, (ones[1:] - ones[0][None]).view(np.ndarray))
    hits = np.flatnonzero(ranks == 1)
    if hits.size == 0:
        return None
    zero = matrix_from_index(params.field, 0, params.N, params.n)
    first = MatFq.from_array(params.field, ones[0].view(np.ndarray), orient=False)
    second = MatFq.from_array(params.field, ones[1 + int(hits[0])].view(np.ndarray), orient=False)
    return [matrix_label(zero), matrix_label(first), matrix_label(second)]


def check_non_bipartite(params: GraphParams, budget: Optional[int] = None) -> Dict:
    """Falha da 2-coloração (networkx) e um triângulo testemunha"""
    G = to_networkx(params, budget)
    bipartite = nx.is_bipartite(G)
    return {
        "status": "ok" if not bipartite else "violation",
        "message": "grafo não bipartido" if not bipartite else "grafo bipartido",
        "bipartite": bipartite,
        "triangle": find_triangle(params),
    }


def clique_number(params: GraphParams, budget: Optional[int] = None) -> int:
    """Clique máxima exata (somente instâncias minúsculas)"""
    G = to_networkx(params, budget or FORBIDDEN_MAX_ORDER)
    clique, size = nx.max_weight_clique(G, weight=None)
    logger.info(f"Clique máxima de {G.graph['name']}: {size}")
    return int(size)


def graph_stats(params: GraphParams) -> Dict:
    """Ordem, grau, diâmetro, conectividade de arestas (= grau) e número de arestas"""
    return {
        "N": params.N,
        "n": params.n,
        "q": params.q,
        "order": params.order,
        "degree": params.degree,
        "diameter": params.n,
        "edge_connectivity": params.degree,
        "edges": params.order * params.degree // 2,
    }
