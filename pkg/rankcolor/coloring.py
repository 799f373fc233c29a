"""
Colorações por síndrome do grafo matricial.

A cor de um vértice v ∈ F_{q^N}^n é a síndrome v·H^T, expandida na base fixada
e lida como número base q (dígito mais significativo primeiro). Dois vértices
têm a mesma cor exatamente quando a diferença está no núcleo de H, então a
verificação pode varrer só o núcleo (modo padrão) ou comparar todos os pares
de mesma cor (modo pareado).
"""
import logging
from itertools import combinations
from typing import Any, Dict, List, Literal, Optional, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from bounds import forbidden_row_count
from config import (
    COLUMN_TRIES, DEFAULT_SEED, DEFAULT_THREADS, ENUMERATION_BUDGET,
    FORBIDDEN_MAX_ORDER, SEARCH_RESTARTS,
)
from errors import (
    InvariantBreachError, SearchFailedError, ShapeError, UsageError, VerificationError, check_budget,
)
from gf_tower import FieldTower
from matrix_graph import GraphParams
from rank_codes import (
    EquidistantCode, LinearRankCode, SPECTRUM_CHUNK, code_from_generator, codeword_array,
    gabidulin, is_equidistant, rank_spectrum,
)
from rank_linalg import (
    MatFq, VecExt, batch_rank, column_ranks, ext_null_space, ext_rank,
    ext_syndromes, indices_to_arrays, matrix_from_index, matrix_label, matrix_to_vector,
    vector_to_matrix,
)
from schemas import ColoringSchema, VerificationReport
from workers import chunk_ranges, parallel_map

logger = logging.getLogger(__name__)

PAIR_CHUNK = 65536

Mode = Literal["at-most-d", "exactly-d"]


class Coloring(BaseModel):
    """Coloração v ↦ v·H^T com seus parâmetros e procedência"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    params: GraphParams = Field(exclude=True)
    mode: Mode
    d: int
    H_col: Tuple[Tuple[int, ...], ...]
    num_colors: int
    seed: Optional[int] = None
    provenance: str = ""
    bound_exponent: Optional[int] = None

    @property
    def tower(self) -> FieldTower:
        return self.params.tower

    @property
    def H(self) -> np.ndarray:
        return np.array(self.H_col, dtype=np.int64).reshape(-1, self.params.n)


class ForbiddenDistanceCode(BaseModel):
    """Matriz H m×n cujo núcleo não tem palavra de posto exatamente d"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    tower: FieldTower = Field(exclude=True)
    n: int
    m: int
    d: int
    H: Tuple[Tuple[int, ...], ...]
    verified: bool = False
    seed: int = 0
    restart: int = 0
    relaxed_columns: int = 0
    spectrum: Dict[int, int] = Field(default_factory=dict)


class CliqueWitness(BaseModel):
    """Conjunto de vértices dois a dois adjacentes"""
    matrices: List[MatFq]


def _make_coloring(params: GraphParams, mode: Mode, d: int, H, **extra) -> Coloring:
    H = np.asarray(H, dtype=np.int64).reshape(-1, params.n)
    rows = ext_rank(params.tower, H) if H.size else 0
    return Coloring(
        params=params, mode=mode, d=d,
        H_col=tuple(tuple(int(x) for x in row) for row in H),
        num_colors=params.tower.order ** rows,
        **extra,
    )


# --- Cores ---
def color_many(coloring: Coloring, vectors) -> np.ndarray:
    """Índices de cor de um array (B, n) de vetores"""
    tower = coloring.tower
    vectors = np.asarray(vectors, dtype=np.int64)
    syndromes = ext_syndromes(tower, vectors, coloring.H)
    digits = tower.expand_many(syndromes).reshape(vectors.shape[0], syndromes.shape[1] * tower.N)
    if tower.q ** digits.shape[1] < 2 ** 62:
        powers = tower.q ** np.arange(digits.shape[1] - 1, -1, -1, dtype=np.int64)
        return (digits * powers).sum(axis=1)
    colors = np.empty(vectors.shape[0], dtype=object)
    for b, row in enumerate(digits):
        value = 0
        for digit in row:
            value = value * tower.q + int(digit)
        colors[b] = value
    return colors


def color_of(coloring: Coloring, v: VecExt) -> int:
    return int(color_many(coloring, v.array[None])[0])


def color_of_matrix(coloring: Coloring, M: MatFq) -> int:
    return color_of(coloring, matrix_to_vector(coloring.tower, M))


def vertex_vectors(params: GraphParams, indices) -> np.ndarray:
    """Representação vetorial (B, n) dos vértices de índices dados"""
    arrays = indices_to_arrays(indices, params.N, params.n, params.q)
    return params.tower.contract_many(np.swapaxes(arrays, 1, 2))


# --- Construções ---
def d_distance_coloring(params: GraphParams, d: int) -> Coloring:
    """
    Coloração d-distância com q^{Nd} cores

    Usa a paridade do Gabidulin [n, n − d] (distância d + 1). Para d > n todo
    par de vértices distintos está a distância ≤ n < d, então vale a mesma
    coloração de d = n, com q^{Nn} cores. Não confundir com bounds.chi_prime,
    que devolve 1 para d > n pela cláusula de fronteira; aqui a coloração
    continua separando todos os vértices.
    """
    if d < 1:
        raise UsageError(f"d = {d} deve ser positivo")
    effective = min(d, params.n)
    code = gabidulin(params.tower, params.n, params.n - effective)
    provenance = f"gabidulin k={params.n - effective}"
    if d > params.n:
        provenance += f" (d > n: igual a d = {params.n})"
    coloring = _make_coloring(params, "at-most-d", d, code.parity_array, provenance=provenance)
    logger.info(f"Coloração {d}-distância: {coloring.num_colors} cores")
    return coloring


def first_column_coloring(params: GraphParams) -> Coloring:
    """Cor = primeira coordenada (primeira coluna): q^N cores, exatamente-n própria"""
    H = np.zeros((1, params.n), dtype=np.int64)
    H[0, 0] = 1
    return _make_coloring(params, "exactly-d", params.n, H, provenance="first-column")


def clique_d1(params: GraphParams) -> CliqueWitness:
    """As q^N matrizes nulas fora da primeira coluna"""
    matrices = []
    for index in range(params.q ** params.N):
        digits = [(index // params.q ** (params.N - 1 - i)) % params.q for i in range(params.N)]
        array = np.zeros((params.N, params.n), dtype=np.int64)
        array[:, 0] = digits
        matrices.append(MatFq.from_array(params.field, array, orient=False))
    return CliqueWitness(matrices=matrices)


def is_clique(witness: CliqueWitness) -> bool:
    """Todos os pares distintos a distância de posto 1"""
    matrices = witness.matrices
    if len(matrices) < 2:
        return True
    field = matrices[0].field
    stack = field(np.stack([M.array for M in matrices]))
    left, right = np.triu_indices(len(matrices), k=1)
    ranks = batch_rank(field, (stack[left] - stack[right]).view(np.ndarray))
    return bool(np.all(ranks == 1))


# --- Verificação ---
def kernel_code(coloring: Coloring) -> LinearRankCode:
    """Código núcleo {v : v·H^T = 0}"""
    tower = coloring.tower
    generator = ext_null_space(tower, coloring.H, cols=coloring.params.n)
    return code_from_generator(tower, generator, coloring.params.n, tag="kernel")


def _bad(ranks: np.ndarray, d: int, exact: bool) -> np.ndarray:
    return (ranks == d) if exact else ((ranks >= 1) & (ranks <= d))


def _kernel_scan(coloring: Coloring, d: int, exact: bool, budget: int, threads: int):
    kernel = kernel_code(coloring)
    check_budget(kernel.size, budget, "varredura do núcleo")
    tower = coloring.tower

    def scan(bounds):
        words = codeword_array(kernel, *bounds)
        hits = np.flatnonzero(_bad(column_ranks(tower, words), d, exact))
        return words[hits[0]] if hits.size else None

    for word in parallel_map(scan, chunk_ranges(kernel.size, SPECTRUM_CHUNK), threads):
        if word is not None:
            zero = VecExt.from_codes(tower, [0] * coloring.params.n)
            return vector_to_matrix(zero), vector_to_matrix(VecExt.from_codes(tower, word))
    return None


def find_violation_in_assignment(
    params: GraphParams, colors, d: int, exact: bool, budget: Optional[int] = None
) -> Optional[Tuple[MatFq, MatFq]]:
    """
    Procura dois vértices de mesma cor a distância proibida

    Args:
        params: Parâmetros do grafo
        colors: Cor de cada vértice, indexada pelo índice do vértice
        d: Distância
        exact: Proíbe só distância exatamente d (senão, toda distância ≤ d)
        budget: Máximo de pares comparados

    Returns:
        Um par violador ou None
    """
    colors = np.asarray(colors)
    if colors.shape != (params.order,):
        raise ShapeError(f"Esperadas {params.order} cores")
    order = np.argsort(colors, kind="stable")
    groups = np.split(order, np.flatnonzero(colors[order][1:] != colors[order][:-1]) + 1)
    pairs = sum(len(g) * (len(g) - 1) // 2 for g in groups)
    check_budget(pairs, budget or ENUMERATION_BUDGET, "pares de mesma cor")
    field = params.field
    for group in groups:
        if len(group) < 2:
            continue
        left_all, right_all = np.triu_indices(len(group), k=1)
        for start, stop in chunk_ranges(len(left_all), PAIR_CHUNK):
            left = group[left_all[start:stop]]
            right = group[right_all[start:stop]]
            A = field(indices_to_arrays(left, params.N, params.n, params.q))
            B = field(indices_to_arrays(right, params.N, params.n, params.q))
            hits = np.flatnonzero(_bad(batch_rank(field, (A - B).view(np.ndarray)), d, exact))
            if hits.size:
                k = int(hits[0])
                return (
                    matrix_from_index(field, int(left[k]), params.N, params.n),
                    matrix_from_index(field, int(right[k]), params.N, params.n),
                )
    return None


def all_vertex_colors(coloring: Coloring, budget: Optional[int] = None) -> np.ndarray:
    params = coloring.params
    check_budget(params.order, budget or ENUMERATION_BUDGET, "coloração de todos os vértices")
    vertices = np.arange(params.order, dtype=np.int64)
    return np.concatenate([
        color_many(coloring, vertex_vectors(params, vertices[start:stop]))
        for start, stop in chunk_ranges(params.order, SPECTRUM_CHUNK)
    ])


def find_violation(
    coloring: Coloring,
    d: Optional[int] = None,
    exact: Optional[bool] = None,
    pairwise: bool = False,
    budget: Optional[int] = None,
    threads: Optional[int] = None,
) -> Optional[Tuple[MatFq, MatFq]]:
    """
    Par de vértices distintos de mesma cor a distância proibida, ou None

    O modo padrão varre o núcleo de H; pairwise=True compara todos os pares
    de vértices de mesma cor.
    """
    d = coloring.d if d is None else d
    exact = (coloring.mode == "exactly-d") if exact is None else exact
    if d < 1:
        raise UsageError(f"d = {d} deve ser positivo")
    budget = budget or ENUMERATION_BUDGET
    if pairwise:
        colors = all_vertex_colors(coloring, budget)
        return find_violation_in_assignment(coloring.params, colors, d, exact, budget)
    return _kernel_scan(coloring, d, exact, budget, threads or DEFAULT_THREADS)


def verify_at_most_d(coloring: Coloring, d: Optional[int] = None, pairwise: bool = False,
                     budget: Optional[int] = None, threads: Optional[int] = None) -> bool:
    return find_violation(coloring, d, False, pairwise, budget, threads) is None


def verify_exactly_d(coloring: Coloring, d: Optional[int] = None, pairwise: bool = False,
                     budget: Optional[int] = None, threads: Optional[int] = None) -> bool:
    return find_violation(coloring, d, True, pairwise, budget, threads) is None


def require_proper(coloring: Coloring, pairwise: bool = False, budget: Optional[int] = None,
                   threads: Optional[int] = None) -> None:
    """Levanta VerificationError com o par violador, se houver"""
    pair = find_violation(coloring, pairwise=pairwise, budget=budget, threads=threads)
    if pair is not None:
        labels = [matrix_label(M) for M in pair]
        raise VerificationError(
            f"Coloração {coloring.mode} d={coloring.d}: {labels[0]} e {labels[1]} com a mesma cor",
            witness=labels,
        )


def verification_report(coloring: Coloring, pairwise: bool = False, budget: Optional[int] = None,
                        threads: Optional[int] = None) -> VerificationReport:
    """Relatório {"status", "message", ...} da verificação no modo da coloração"""
    pair = find_violation(coloring, pairwise=pairwise, budget=budget, threads=threads)
    method = "pareada" if pairwise else "varredura do núcleo"
    if pair is None:
        status, message, labels = "ok", f"coloração própria ({method})", None
    else:
        labels = [matrix_label(M) for M in pair]
        status, message = "violation", f"vértices {labels[0]} e {labels[1]} com a mesma cor"
    logger.info(f"Verificação {coloring.mode} d={coloring.d}: {status}")
    return VerificationReport(
        status=status, message=message, mode=coloring.mode, d=coloring.d,
        num_colors=str(coloring.num_colors), pair=labels,
    )


# --- Busca de código de distância proibida ---
def _in_small_span(tower: FieldTower, candidate: np.ndarray, chosen: List[np.ndarray], size: int) -> bool:
    """candidate é combinação F_{q^N}-linear de algum subconjunto de `size` colunas escolhidas"""
    if not np.any(candidate):
        return True
    size = min(size, len(chosen))
    for subset in combinations(range(len(chosen)), size):
        base = np.array([chosen[i] for i in subset], dtype=np.int64).reshape(len(subset), candidate.size)
        base_rank = ext_rank(tower, base) if base.size else 0
        if ext_rank(tower, np.vstack([base, candidate[None]])) == base_rank:
            return True
    return False


def _search_restart(tower: FieldTower, n: int, d: int, m: int, seed: int, restart: int,
                    budget: int) -> Tuple[Optional[np.ndarray], Dict[int, int], int]:
    rng = np.random.default_rng(seed + restart)
    chosen: List[np.ndarray] = []
    relaxed = 0
    for _ in range(n):
        for _ in range(COLUMN_TRIES):
            candidate = rng.integers(0, tower.order, size=m, dtype=np.int64)
            if not _in_small_span(tower, candidate, chosen, d - 1):
                break
        else:
            candidate = np.zeros(m, dtype=np.int64)
            while not np.any(candidate):
                candidate = rng.integers(0, tower.order, size=m, dtype=np.int64)
            relaxed += 1
        chosen.append(candidate)
    H = np.stack(chosen, axis=1)
    if ext_rank(tower, H) != m:
        return None, {}, relaxed
    kernel = code_from_generator(tower, ext_null_space(tower, H, cols=n), n, tag="kernel")
    spectrum = rank_spectrum(kernel, budget)
    return H, spectrum, relaxed


def search_forbidden_H(
    tower: FieldTower,
    n: int,
    d: int,
    m: int,
    seed: Optional[int] = None,
    budget: Optional[int] = None,
    restarts: Optional[int] = None,
    threads: Optional[int] = None,
) -> ForbiddenDistanceCode:
    """
    Busca gulosa aleatória de H (m×n) com núcleo sem palavras de posto d

    Cada coluna é sorteada até não ser combinação de d − 1 colunas já
    escolhidas; após COLUMN_TRIES rejeições aceita-se um sorteio não nulo. O
    núcleo é sempre enumerado: a contagem de palavras de posto d decide.
    Reinicializações usam a semente seed + índice e vence a de menor índice.

    Raises:
        SearchFailedError: reinicializações esgotadas (com o melhor espectro)
    """
    if not 1 <= m <= n:
        raise UsageError(f"É preciso 1 ≤ m ≤ n; recebido m = {m}")
    if d < 1:
        raise UsageError(f"d = {d} deve ser positivo")
    seed = DEFAULT_SEED if seed is None else seed
    budget = budget or ENUMERATION_BUDGET
    restarts = restarts or SEARCH_RESTARTS
    threads = threads or DEFAULT_THREADS
    check_budget(tower.order ** (n - m), budget, "núcleo da matriz H")

    best: Dict[int, int] = {}
    for start, stop in chunk_ranges(restarts, threads):
        outcomes = parallel_map(
            lambda r: (r, _search_restart(tower, n, d, m, seed, r, budget)),
            list(range(start, stop)),
            threads,
        )
        for restart, (H, spectrum, relaxed) in outcomes:
            if H is None:
                logger.debug(f"Reinício {restart}: H sem posto {m}")
                continue
            if spectrum.get(d, 0) == 0:
                logger.info(f"H encontrada no reinício {restart} (seed {seed})")
                return ForbiddenDistanceCode(
                    tower=tower, n=n, m=m, d=d,
                    H=tuple(tuple(int(x) for x in row) for row in H),
                    verified=True, seed=seed, restart=restart,
                    relaxed_columns=relaxed, spectrum=spectrum,
                )
            if not best or spectrum.get(d, 0) < best.get(d, 0):
                best = spectrum
            logger.debug(f"Reinício {restart}: {spectrum.get(d, 0)} palavras de posto {d}")
    raise SearchFailedError(
        f"Nenhuma H {m}×{n} sem palavras de posto {d} em {restarts} reinícios",
        restarts=restarts, best_spectrum=best,
    )


def exact_d_coloring(
    params: GraphParams,
    d: int,
    seed: Optional[int] = None,
    m: Optional[int] = None,
    budget: Optional[int] = None,
    restarts: Optional[int] = None,
    threads: Optional[int] = None,
) -> Coloring:
    """
    Coloração exatamente-d pelas classes laterais de um código de distância proibida

    O expoente e = ⌈log_q(2 + C(n−1, d−1)(q^N − 1)^{d−1})⌉ da cota é reportado
    em bound_exponent; a construção usa m = ⌈e/N⌉ linhas (no máximo n), logo
    q^{Nm} cores.
    """
    if d < 1:
        raise UsageError(f"d = {d} deve ser positivo")
    if d > params.n:
        return _make_coloring(
            params, "exactly-d", d, np.zeros((0, params.n), dtype=np.int64),
            provenance="d > n: uma cor",
        )
    exponent, rows = forbidden_row_count(params.N, params.n, params.q, d)
    m = min(rows, params.n) if m is None else m
    found = search_forbidden_H(params.tower, params.n, d, m, seed, budget, restarts, threads)
    coloring = _make_coloring(
        params, "exactly-d", d, found.H, seed=found.seed, bound_exponent=exponent,
        provenance=f"search restart={found.restart} relaxed={found.relaxed_columns}",
    )
    logger.info(f"Coloração exatamente-{d}: {coloring.num_colors} cores (cota q^{exponent})")
    return coloring


# --- Estatísticas e testemunhas ---
def max_forbidden_code_size(params: GraphParams, d: int, budget: Optional[int] = None) -> int:
    """
    Maior conjunto de vértices sem par a distância exatamente d

    Clique máxima exata (networkx) no complemento do grafo de distância d;
    só para ordens minúsculas.
    """
    limit = budget or FORBIDDEN_MAX_ORDER
    check_budget(params.order, limit, "busca de código de distância proibida")
    vertices = np.arange(params.order, dtype=np.int64)
    left, right = np.triu_indices(params.order, k=1)
    field = params.field
    arrays = field(indices_to_arrays(vertices, params.N, params.n, params.q))
    ranks = batch_rank(field, (arrays[left] - arrays[right]).view(np.ndarray))
    G = nx.Graph()
    G.add_nodes_from(range(params.order))
    keep = ranks != d
    G.add_edges_from(zip(left[keep].tolist(), right[keep].tolist()))
    _, size = nx.max_weight_clique(G, weight=None)
    return int(size)


def partition_from_equidistant(code: EquidistantCode, budget: Optional[int] = None) -> Dict[str, Any]:
    """
    Testemunha de χ_n = q^N a partir de um código equidistante

    Um código de q^N palavras com distâncias todas iguais a n é uma clique do
    grafo de distância n (cota inferior q^N); a partição pela primeira coluna
    é exatamente-n própria com q^N cores (cota superior).
    """
    tower = code.tower
    params = GraphParams.create(tower, code.n)
    vectors = [
        matrix_to_vector(tower, w) if isinstance(w, MatFq) else w for w in code.words
    ]
    distance = is_equidistant(vectors, budget)
    coloring = first_column_coloring(params)
    proper = verify_exactly_d(coloring, code.n, budget=budget)
    if not proper:
        logger.error("Partição pela primeira coluna falhou em %s", code.name)
        raise InvariantBreachError("A partição pela primeira coluna não é exatamente-n própria")
    colors = color_many(coloring, np.stack([v.array for v in vectors]))
    distinct = len(set(int(c) for c in colors)) == len(vectors)
    witness = distance == code.n and len(vectors) == params.q ** params.N and distinct
    return {
        "status": "ok" if witness else "violation",
        "message": (
            f"{code.name}: χ_{code.n}({params.N}x{code.n},{params.q}) = {params.q ** params.N}"
            if witness else f"{code.name} não é testemunha de χ_n = q^N"
        ),
        "code": code.name,
        "size": len(vectors),
        "distance": distance,
        "colors": coloring.num_colors,
        "chi_exact": coloring.num_colors if witness else None,
    }


# --- Serialização ---
def coloring_to_schema(coloring: Coloring) -> ColoringSchema:
    tower = coloring.tower
    return ColoringSchema(
        tower=tower.to_schema(),
        n=coloring.params.n,
        mode=coloring.mode,
        d=coloring.d,
        H_col=[[tower.digits(x) for x in row] for row in coloring.H_col],
        num_colors=str(coloring.num_colors),
        seed=coloring.seed,
        provenance=coloring.provenance,
        bound_exponent=coloring.bound_exponent,
    )


def coloring_from_schema(schema: ColoringSchema) -> Coloring:
    tower = FieldTower.from_schema(schema.tower)
    params = GraphParams.create(tower, schema.n)
    H = np.array(
        [[tower.from_digits(x) for x in row] for row in schema.H_col], dtype=np.int64
    ).reshape(-1, schema.n)
    coloring = _make_coloring(
        params, schema.mode, schema.d, H, seed=schema.seed,
        provenance=schema.provenance, bound_exponent=schema.bound_exponent,
    )
    if str(coloring.num_colors) != schema.num_colors:
        raise UsageError(
            f"num_colors = {schema.num_colors} não confere com H ({coloring.num_colors})"
        )
    return coloring
