"""
Interface de linha de comando do rankcolor.

Famílias: field, graph, code, color, bounds e sweep. Toda saída é JSON
determinístico (ou CSV/DOT/texto quando pedido); erros saem em stderr como
{"status": "error", "message": ...} com o código de saída da exceção.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ValidationError

from bounds import bounds_row, row_csv, row_json, rows_csv, table1_rows
from coloring import (
    Coloring, color_of_matrix, coloring_from_schema, coloring_to_schema, d_distance_coloring,
    exact_d_coloring, max_forbidden_code_size, partition_from_equidistant, search_forbidden_H,
    verification_report,
)
from config import configure_logging, get_run_config
from errors import InvariantBreachError, RankColorError, SearchFailedError, UsageError
from gf_tower import FieldTower, build_tower, tower_for_order
from matrix_graph import (
    GraphParams, check_non_bipartite, check_translation_automorphism,
    check_vertex_transitivity, export_dot, export_edgelist_csv, graph_distance_bfs, graph_stats,
)
from rank_codes import (
    builtin_code, code_from_schema, code_to_schema, gabidulin, is_equidistant, is_mrd,
    min_rank_distance, rank_spectrum,
)
from rank_linalg import MatFq, matrix_from_index, matrix_from_label, matrix_label, rank_distance
from repository import JsonFileRepository
from schemas import CodeSchema, ColoringSchema, RunConfig
from sweep import CHECK_NAMES, SweepManager

logger = logging.getLogger(__name__)


class CliParser(argparse.ArgumentParser):
    """Erros de argumentos viram UsageError (código de saída 1)"""

    def error(self, message: str):
        raise UsageError(message)


# --- Saída ---
def _dump(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(config: RunConfig, text: str) -> None:
    """Escreve em --out quando informado, senão na saída padrão"""
    if config.out:
        target = Path(config.out)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
        logger.info(f"Saída gravada em {target}")
    else:
        sys.stdout.write(text)


def _emit_artifact(config: RunConfig, summary: Dict[str, Any], key: str, record: BaseModel) -> None:
    """Grava o artefato em --out (via repositório) ou o embute no resumo"""
    if config.out:
        repository = JsonFileRepository(type(record))
        if repository.exists(config.out):
            logger.warning(f"Sobrescrevendo {config.out}")
        path = repository.save(config.out, record)
        summary["file"] = str(path)
    else:
        summary[key] = record.model_dump(mode="json")
    sys.stdout.write(_dump(summary))


def _verdict(status: str) -> int:
    return 0 if status == "ok" else 2


# --- Parâmetros ---
def _tower(args: argparse.Namespace) -> FieldTower:
    if args.q is not None:
        return tower_for_order(args.q, args.N, args.m)
    if args.p is not None:
        return build_tower(args.p, args.m or 1, args.N)
    raise UsageError("Informe --q (ou --p e --m)")


def _params(args: argparse.Namespace) -> GraphParams:
    return GraphParams.create(_tower(args), args.n)


def _vertex(params: GraphParams, label: str) -> MatFq:
    return matrix_from_label(params.field, label, params.N, params.n)


def _coloring_summary(coloring: Coloring, args: argparse.Namespace, config: RunConfig) -> int:
    summary: Dict[str, Any] = {
        "status": "ok",
        "message": f"coloração {coloring.mode} d={coloring.d} com {coloring.num_colors} cores",
        "num_colors": str(coloring.num_colors),
    }
    if args.verify:
        report = verification_report(coloring, args.pairwise, args.budget, config.threads)
        summary["status"] = report.status
        summary["verification"] = report.model_dump(mode="json")
    _emit_artifact(config, summary, "coloring", coloring_to_schema(coloring))
    return _verdict(summary["status"])


# --- field ---
def cmd_field_build(args: argparse.Namespace, config: RunConfig) -> int:
    tower = _tower(args)
    primitive = tower.primitive_code
    payload = {
        "status": "ok",
        "message": f"GF({tower.q}^{tower.N}) sobre GF({tower.p})",
        "q": tower.q,
        "order": tower.order,
        "tower": tower.to_schema().model_dump(mode="json"),
        "primitive_element": tower.digits(primitive),
        "primitive_code": primitive,
    }
    _emit(config, _dump(payload))
    return 0


# --- graph ---
def cmd_graph_stats(args: argparse.Namespace, config: RunConfig) -> int:
    stats = graph_stats(_params(args))
    _emit(config, _dump({"status": "ok", "message": f"M_{stats['N']}x{stats['n']}({stats['q']})", **stats}))
    return 0


def cmd_graph_export(args: argparse.Namespace, config: RunConfig) -> int:
    params = _params(args)
    fmt = args.format or "dot"
    if fmt == "dot":
        _emit(config, export_dot(params, args.budget))
    elif fmt == "csv":
        _emit(config, export_edgelist_csv(params, args.budget))
    else:
        raise UsageError(f"graph export aceita --format dot|csv, não {fmt}")
    return 0


def cmd_graph_bfs(args: argparse.Namespace, config: RunConfig) -> int:
    params = _params(args)
    M1, M2 = _vertex(params, args.source), _vertex(params, args.target)
    distance = graph_distance_bfs(params, M1, M2, args.budget)
    expected = rank_distance(M1, M2)
    if distance != expected:
        logger.error("BFS divergiu do posto: %s != %s", distance, expected)
        raise InvariantBreachError(f"BFS = {distance} mas rank(M1 − M2) = {expected}")
    payload = {
        "status": "ok",
        "message": f"d({matrix_label(M1)}, {matrix_label(M2)}) = {distance}",
        "distance": distance,
        "rank_distance": expected,
    }
    _emit(config, _dump(payload))
    return 0


def cmd_graph_check(args: argparse.Namespace, config: RunConfig) -> int:
    params = _params(args)
    if args.sample < 1:
        raise UsageError(f"--sample deve ser positivo; recebido {args.sample}")
    bipartite = check_non_bipartite(params, args.budget)
    rng = np.random.default_rng(config.seed)
    sample = [
        matrix_from_index(params.field, int(i), params.N, params.n)
        for i in rng.integers(0, params.order, size=args.sample)
    ]
    transitive = check_vertex_transitivity(params, sample)
    automorphism = check_translation_automorphism(params, sample[-1], args.budget)
    ok = transitive and automorphism and bipartite["status"] == "ok"
    payload = {
        "status": "ok" if ok else "violation",
        "message": "translações são automorfismos; grafo não bipartido" if ok else "verificação estrutural falhou",
        "vertex_transitive": transitive,
        "translation_automorphism": automorphism,
        "bipartite": bipartite["bipartite"],
        "triangle": bipartite["triangle"],
        "sample": [matrix_label(M) for M in sample],
    }
    _emit(config, _dump(payload))
    return _verdict(payload["status"])


# --- code ---
def cmd_code_gabidulin(args: argparse.Namespace, config: RunConfig) -> int:
    tower = _tower(args)
    code = gabidulin(tower, args.n, args.k, args.s, args.h)
    summary: Dict[str, Any] = {
        "status": "ok",
        "message": f"Gabidulin [{code.n}, {code.k}] sobre GF({tower.q}^{tower.N})",
        "designed_distance": code.n - code.k + 1,
        "size": code.size,
    }
    if args.verify:
        d = min_rank_distance(code, args.budget, config.threads)
        mrd = is_mrd(code, args.budget)
        summary["min_distance"] = d
        summary["mrd"] = mrd
        if code.k > 0 and not mrd:
            summary["status"] = "violation"
            summary["message"] = f"distância mínima {d} ≠ {code.n - code.k + 1}"
    _emit_artifact(config, summary, "code", code_to_schema(code))
    return _verdict(summary["status"])


def cmd_code_spectrum(args: argparse.Namespace, config: RunConfig) -> int:
    code = code_from_schema(JsonFileRepository(CodeSchema).load(args.file))
    spectrum = rank_spectrum(code, args.budget, config.threads)
    d = min_rank_distance(code, args.budget, config.threads)
    payload = {
        "status": "ok",
        "message": f"{code.size} palavras, distância mínima {d}",
        "spectrum": {str(w): c for w, c in spectrum.items()},
        "min_distance": d,
        "mrd": is_mrd(code, args.budget),
    }
    _emit(config, _dump(payload))
    return 0


def cmd_code_builtin(args: argparse.Namespace, config: RunConfig) -> int:
    code = builtin_code(args.name)
    words: List[Any] = [
        matrix_label(w) if isinstance(w, MatFq) else list(w.entries) for w in code.words
    ]
    payload: Dict[str, Any] = {
        "status": "ok",
        "message": f"{code.name}: {len(words)} palavras, distância declarada {code.d}",
        "name": code.name,
        "n": code.n,
        "d": code.d,
        "words": words,
    }
    if args.verify:
        distance = is_equidistant(code, args.budget)
        partition = partition_from_equidistant(code, args.budget)
        payload["distance"] = distance
        payload["partition"] = partition
        if distance != code.d:
            payload["status"] = "violation"
            payload["message"] = f"{code.name} não é equidistante com distância {code.d}"
        else:
            payload["message"] = f"{code.name} equidistante, d = {distance}"
    _emit(config, _dump(payload))
    return _verdict(payload["status"])


# --- color ---
def cmd_color_dist(args: argparse.Namespace, config: RunConfig) -> int:
    return _coloring_summary(d_distance_coloring(_params(args), args.d), args, config)


def cmd_color_exact(args: argparse.Namespace, config: RunConfig) -> int:
    coloring = exact_d_coloring(
        _params(args), args.d, config.seed, args.rows, args.budget, args.restarts, config.threads
    )
    return _coloring_summary(coloring, args, config)


def cmd_color_verify(args: argparse.Namespace, config: RunConfig) -> int:
    if Path(args.file).is_dir():
        return _verify_directory(args, config)
    coloring = coloring_from_schema(JsonFileRepository(ColoringSchema).load(args.file))
    report = verification_report(coloring, args.pairwise, args.budget, config.threads)
    _emit(config, _dump(report.model_dump(mode="json")))
    return _verdict(report.status)


def _verify_directory(args: argparse.Namespace, config: RunConfig) -> int:
    """Verifica todos os arquivos de coloração válidos de um diretório"""
    records = JsonFileRepository(ColoringSchema, args.file).list()
    if not records:
        raise UsageError(f"Nenhum arquivo de coloração em {args.file}")
    reports = [
        verification_report(coloring_from_schema(record), args.pairwise, args.budget, config.threads)
        for record in records
    ]
    failed = sum(report.status != "ok" for report in reports)
    payload = {
        "status": "violation" if failed else "ok",
        "message": f"{len(reports) - failed} de {len(reports)} colorações próprias",
        "reports": [report.model_dump(mode="json") for report in reports],
    }
    _emit(config, _dump(payload))
    return _verdict(payload["status"])


def cmd_color_assign(args: argparse.Namespace, config: RunConfig) -> int:
    coloring = coloring_from_schema(JsonFileRepository(ColoringSchema).load(args.file))
    color = color_of_matrix(coloring, _vertex(coloring.params, args.vertex))
    if args.format == "text":
        _emit(config, f"{color}\n")
    else:
        _emit(config, _dump({"status": "ok", "message": f"cor de {args.vertex}", "vertex": args.vertex, "color": color}))
    return 0


def cmd_color_forbidden_max(args: argparse.Namespace, config: RunConfig) -> int:
    params = _params(args)
    size = max_forbidden_code_size(params, args.d, args.budget)
    payload = {
        "status": "ok",
        "message": f"maior conjunto sem distância {args.d}: {size} vértices",
        "max_size": size,
        "chi_lower": -(-params.order // size),
    }
    _emit(config, _dump(payload))
    return 0


def cmd_color_search(args: argparse.Namespace, config: RunConfig) -> int:
    params = _params(args)
    tower = params.tower
    found = search_forbidden_H(
        tower, params.n, args.d, args.rows, config.seed, args.budget, args.restarts, config.threads
    )
    payload = {
        "status": "ok",
        "message": f"H {found.m}×{found.n} sem palavras de posto {found.d} no núcleo",
        "H": [list(row) for row in found.H],
        "restart": found.restart,
        "relaxed_columns": found.relaxed_columns,
        "spectrum": {str(w): c for w, c in found.spectrum.items()},
        "num_colors": str(tower.order ** found.m),
    }
    _emit(config, _dump(payload))
    return 0


# --- bounds ---
def cmd_bounds_row(args: argparse.Namespace, config: RunConfig) -> int:
    row = bounds_row(args.N, args.n, args.d, args.q)
    _emit(config, row_csv(row) if args.format == "csv" else row_json(row) + "\n")
    return 0


def cmd_bounds_table1(args: argparse.Namespace, config: RunConfig) -> int:
    rows = table1_rows()
    if args.format == "json":
        _emit(config, _dump([row.model_dump(mode="json") for row in rows]))
    else:
        _emit(config, rows_csv(rows))
    return 0


# --- sweep ---
def cmd_sweep(args: argparse.Namespace, config: RunConfig) -> int:
    manager = SweepManager(args.log_dir, args.budget, config.threads)
    results = manager.run(args.check)
    failed = [name for name, result in results.items() if result["status"] != "ok"]
    payload = {
        "status": "ok" if not failed else "violation",
        "message": "todas as verificações passaram" if not failed else f"falharam: {', '.join(failed)}",
        "checks": results,
        "log_file": manager.log_file,
    }
    _emit(config, _dump(payload))
    return _verdict(payload["status"])


# --- Parser ---
def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, help="Orçamento de enumeração")
    common.add_argument("--seed", type=int, help="Semente da busca aleatória")
    common.add_argument("--threads", type=int, help="Número máximo de threads")
    common.add_argument("--out", help="Arquivo de saída")
    common.add_argument("--format", choices=["json", "csv", "dot", "text"], help="Formato de saída")
    common.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return common


def _field_args() -> argparse.ArgumentParser:
    field = argparse.ArgumentParser(add_help=False)
    field.add_argument("--q", type=int, help="Ordem do corpo base")
    field.add_argument("--p", type=int, help="Característica")
    field.add_argument("--m", type=int, help="Grau de F_q sobre F_p")
    field.add_argument("--N", type=int, required=True, help="Grau da extensão")
    return field


def _graph_args() -> argparse.ArgumentParser:
    graph = argparse.ArgumentParser(add_help=False, parents=[_field_args()])
    graph.add_argument("--n", type=int, required=True, help="Número de colunas")
    return graph


def _verify_args() -> argparse.ArgumentParser:
    verify = argparse.ArgumentParser(add_help=False)
    verify.add_argument("--verify", action="store_true", help="Verifica exaustivamente")
    verify.add_argument("--pairwise", action="store_true", help="Compara todos os pares de mesma cor")
    return verify


def build_parser() -> CliParser:
    common, field, graph, verify = _common(), _field_args(), _graph_args(), _verify_args()
    parser = CliParser(prog="rankcolor", description="Colorações de distância em grafos matriciais")
    families = parser.add_subparsers(dest="family", required=True)

    def command(group, name: str, handler, parents, help_text: str):
        sub = group.add_parser(name, parents=[common, *parents], help=help_text, allow_abbrev=False)
        sub.set_defaults(handler=handler)
        return sub

    commands = families.add_parser("field").add_subparsers(dest="command", required=True)
    command(commands, "build", cmd_field_build, [field], "Constrói a torre de corpos")

    commands = families.add_parser("graph").add_subparsers(dest="command", required=True)
    command(commands, "stats", cmd_graph_stats, [graph], "Ordem, grau, diâmetro e conectividade")
    command(commands, "export", cmd_graph_export, [graph], "Exporta o grafo em DOT ou CSV")
    sub = command(commands, "bfs", cmd_graph_bfs, [graph], "Distância por busca em largura")
    sub.add_argument("--from", dest="source", required=True, help="Rótulo base q do primeiro vértice")
    sub.add_argument("--to", dest="target", required=True, help="Rótulo base q do segundo vértice")
    sub = command(commands, "check", cmd_graph_check, [graph], "Transitividade e bipartição")
    sub.add_argument("--sample", type=int, default=4, help="Tamanho da amostra de vértices")

    commands = families.add_parser("code").add_subparsers(dest="command", required=True)
    sub = command(commands, "gabidulin", cmd_code_gabidulin, [field, verify], "Código de Gabidulin")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--k", type=int, required=True)
    sub.add_argument("--s", type=int, default=1)
    sub.add_argument("--h", type=int, nargs="+", help="Códigos de h_1, ..., h_n em F_{q^N}")
    sub = command(commands, "spectrum", cmd_code_spectrum, [], "Espectro de posto de um arquivo de código")
    sub.add_argument("file")
    sub = command(commands, "builtin", cmd_code_builtin, [verify], "Códigos equidistantes embutidos")
    sub.add_argument("name", choices=["C1", "C2", "C3"])

    commands = families.add_parser("color").add_subparsers(dest="command", required=True)
    sub = command(commands, "dist", cmd_color_dist, [graph, verify], "Coloração d-distância")
    sub.add_argument("--d", type=int, required=True)
    sub = command(commands, "exact", cmd_color_exact, [graph, verify], "Coloração exatamente-d")
    sub.add_argument("--d", type=int, required=True)
    sub.add_argument("--rows", type=int, help="Linhas de H (padrão ⌈e/N⌉)")
    sub.add_argument("--restarts", type=int)
    sub = command(commands, "verify", cmd_color_verify, [], "Verifica um arquivo (ou diretório) de coloração")
    sub.add_argument("file")
    sub.add_argument("--pairwise", action="store_true")
    sub = command(commands, "assign", cmd_color_assign, [], "Cor de um vértice")
    sub.add_argument("file")
    sub.add_argument("--vertex", required=True, help="Rótulo base q do vértice")
    sub = command(commands, "forbidden-max", cmd_color_forbidden_max, [graph], "Maior código sem distância d")
    sub.add_argument("--d", type=int, required=True)
    sub = command(commands, "search", cmd_color_search, [graph], "Busca de H de distância proibida")
    sub.add_argument("--d", type=int, required=True)
    sub.add_argument("--rows", type=int, required=True, help="Linhas de H")
    sub.add_argument("--restarts", type=int)

    commands = families.add_parser("bounds").add_subparsers(dest="command", required=True)
    sub = command(commands, "row", cmd_bounds_row, [], "Uma linha de cotas")
    for name in ("N", "n", "d", "q"):
        sub.add_argument(f"--{name}", type=int, required=True)
    sub.add_argument("--json", dest="format", action="store_const", const="json")
    sub.add_argument("--csv", dest="format", action="store_const", const="csv")
    command(commands, "table1", cmd_bounds_table1, [], "Tabela de comparação recalculada")

    sub = families.add_parser("sweep", parents=[common], help="Varreduras de aceitação", allow_abbrev=False)
    sub.set_defaults(handler=cmd_sweep)
    sub.add_argument("--check", nargs="+", choices=CHECK_NAMES)
    sub.add_argument("--log-dir", help="Diretório do arquivo de log")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Ponto de entrada da CLI

    Returns:
        0 sucesso, 1 uso, 2 violação, 3 orçamento/busca, 4 invariante interno
    """
    try:
        args = build_parser().parse_args(argv)
        config = get_run_config(
            command=" ".join(filter(None, (args.family, getattr(args, "command", None)))),
            budget=args.budget, seed=args.seed, threads=args.threads,
            format=args.format, out=args.out, log_level=args.log_level,
        )
        configure_logging(config.log_level)
        logger.info(f"Executando {config.command}")
        return args.handler(args, config)
    except ValidationError as e:
        error = UsageError(f"Configuração inválida: {e}")
    except RankColorError as e:
        error = e
    except Exception as e:
        logger.debug("Erro inesperado", exc_info=True)
        error = InvariantBreachError(f"Erro interno: {type(e).__name__}: {e}")
    payload: Dict[str, Any] = {"status": "error", "message": error.detail}
    if isinstance(error, SearchFailedError):
        payload["restarts"] = error.restarts
        payload["best_spectrum"] = {str(w): c for w, c in error.best_spectrum.items()}
    logger.debug(f"Falha: {error.detail}")
    sys.stderr.write(_dump(payload))
    return error.exit_code


if __name__ == "__main__":
    sys.exit(main())
