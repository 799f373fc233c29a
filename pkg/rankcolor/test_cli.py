import json

import pytest

import cli
from cli import main

M22 = ["--q", "2", "--m", "1", "--N", "2", "--n", "2"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def error_payload(err):
    return json.loads(err[err.index("{"):])


def test_color_dist_verificada(capsys):
    code, out, _ = run(capsys, "color", "dist", *M22, "--d", "1", "--verify")
    payload = json.loads(out)
    assert code == 0
    assert payload["num_colors"] == "4"
    assert payload["verification"]["status"] == "ok"
    assert payload["coloring"]["mode"] == "at-most-d"


def test_code_builtin_c3(capsys):
    code, out, _ = run(capsys, "code", "builtin", "C3", "--verify")
    payload = json.loads(out)
    assert code == 0
    assert payload["distance"] == 3
    assert payload["partition"]["chi_exact"] == 8


def test_bounds_table1(capsys, tmp_path):
    target = tmp_path / "table1.csv"
    code, out, _ = run(capsys, "bounds", "table1", "--out", str(target))
    lines = target.read_text().strip().split("\n")
    assert code == 0 and out == ""
    assert lines[0] == "N,n,d,q,bound12,bound8,known_exact,lower_bounds,note"
    assert len(lines) == 9


def test_bounds_row(capsys):
    code, out, _ = run(capsys, "bounds", "row", "--N", "6", "--n", "4", "--d", "2", "--q", "3", "--csv")
    assert code == 0
    assert out.strip().split("\n")[1].startswith("6,4,2,3,3^7,3^12")
    code, out, _ = run(capsys, "bounds", "row", "--N", "6", "--n", "4", "--d", "2", "--q", "2", "--json")
    assert json.loads(out)["chi_exact_upper_thm"] == 256


def test_codigo_em_arquivo_e_espectro(capsys, tmp_path):
    path = tmp_path / "gab.json"
    code, out, _ = run(capsys, "code", "gabidulin", "--q", "2", "--N", "3", "--n", "3", "--k", "1",
                       "--out", str(path), "--verify")
    assert code == 0
    assert json.loads(out)["min_distance"] == 3
    assert json.loads(path.read_text())["tag"] == "gabidulin"
    code, out, _ = run(capsys, "code", "spectrum", str(path))
    payload = json.loads(out)
    assert code == 0
    assert payload["spectrum"] == {"0": 1, "3": 7}
    assert payload["mrd"]


def test_coloracao_em_arquivo(capsys, tmp_path):
    path = tmp_path / "dist.json"
    code, _, _ = run(capsys, "color", "dist", *M22, "--d", "1", "--out", str(path))
    assert code == 0
    assert json.loads(path.read_text())["num_colors"] == "4"

    code, out, _ = run(capsys, "color", "verify", str(path), "--pairwise")
    assert code == 0
    assert json.loads(out)["status"] == "ok"

    code, out, _ = run(capsys, "color", "assign", str(path), "--vertex", "0000", "--format", "text")
    assert code == 0
    assert out.strip() == "0"


def test_violacao_sai_com_codigo_2(capsys, tmp_path):
    path = tmp_path / "dist.json"
    run(capsys, "color", "dist", *M22, "--d", "1", "--out", str(path))
    record = json.loads(path.read_text())
    record["d"] = 2
    path.write_text(json.dumps(record))
    code, out, _ = run(capsys, "color", "verify", str(path))
    payload = json.loads(out)
    assert code == 2
    assert payload["status"] == "violation"
    assert len(payload["pair"]) == 2


def test_coloracao_exata(capsys):
    code, out, _ = run(capsys, "color", "exact", *M22, "--d", "2", "--rows", "1", "--seed", "0", "--verify")
    payload = json.loads(out)
    assert code == 0
    assert payload["num_colors"] == "4"
    assert payload["coloring"]["bound_exponent"] == 3


def test_busca_e_codigo_proibido_maximo(capsys):
    code, out, _ = run(capsys, "color", "search", *M22, "--d", "2", "--rows", "1", "--seed", "0")
    payload = json.loads(out)
    assert code == 0
    assert "2" not in payload["spectrum"]
    code, out, _ = run(capsys, "color", "forbidden-max", *M22, "--d", "1")
    payload = json.loads(out)
    assert (payload["max_size"], payload["chi_lower"]) == (4, 4)


def test_comandos_de_grafo(capsys):
    code, out, _ = run(capsys, "graph", "stats", *M22)
    assert code == 0 and json.loads(out)["degree"] == 9
    code, out, _ = run(capsys, "graph", "bfs", *M22, "--from", "0000", "--to", "1001")
    assert code == 0 and json.loads(out)["distance"] == 2
    code, out, _ = run(capsys, "graph", "check", *M22)
    assert code == 0 and not json.loads(out)["bipartite"]
    code, out, _ = run(capsys, "graph", "export", *M22, "--format", "csv")
    assert code == 0 and len(out.strip().split("\n")) == 73


def test_field_build(capsys):
    code, out, _ = run(capsys, "field", "build", "--p", "2", "--m", "1", "--N", "3")
    payload = json.loads(out)
    assert code == 0
    assert payload["primitive_code"] == 2
    assert payload["tower"]["modulus_qN"] == [[1], [1], [0], [1]]


def test_sweep(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep", "--check", "rank_counts", "table1", "--log-dir", str(tmp_path))
    payload = json.loads(out)
    assert code == 0
    assert set(payload["checks"]) == {"rank_counts", "table1"}


@pytest.mark.parametrize("argv", [
    ["graph"],
    ["color", "dist", "--q", "6", "--N", "2", "--n", "2", "--d", "1"],
    ["bounds", "row", "--N", "2", "--n", "3", "--d", "1", "--q", "2"],
    ["graph", "stats", *M22, "--threads", "0"],
    ["graph", "check", *M22, "--sample", "0"],
    ["code", "spectrum", "nao_existe.json"],
])
def test_erros_de_uso(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert error_payload(err)["status"] == "error"


def test_orcamento_excedido(capsys):
    code, _, err = run(capsys, "graph", "export", "--q", "2", "--N", "3", "--n", "3", "--budget", "10")
    assert code == 3
    assert "orçamento" in error_payload(err)["message"]


def test_erro_inesperado_vira_payload(capsys, monkeypatch):
    def broken(params):
        raise RuntimeError("falha")

    monkeypatch.setattr(cli, "graph_stats", broken)
    code, out, err = run(capsys, "graph", "stats", *M22)
    assert code == 4
    assert out == ""
    assert "RuntimeError" in error_payload(err)["message"]


@pytest.mark.parametrize("argv", [
    ["color", "exact", "--q", "2", "--N", "3", "--n", "2", "--d", "2", "--seed", "7", "--verify"],
    ["code", "gabidulin", "--q", "2", "--N", "4", "--n", "4", "--k", "2", "--verify"],
])
def test_saida_identica_entre_execucoes_e_threads(capsys, argv):
    outputs = []
    for threads in ("1", "4", "1", "4"):
        code, out, _ = run(capsys, *argv, "--threads", threads)
        assert code == 0
        outputs.append(out)
    assert len(set(outputs)) == 1


def test_verifica_diretorio_de_coloracoes(capsys, tmp_path, caplog):
    run(capsys, "color", "dist", *M22, "--d", "1", "--out", str(tmp_path / "ok.json"))
    run(capsys, "color", "dist", *M22, "--d", "1", "--out", str(tmp_path / "ruim.json"))
    assert "Sobrescrevendo" not in caplog.text
    run(capsys, "color", "dist", *M22, "--d", "1", "--out", str(tmp_path / "ruim.json"))
    assert "Sobrescrevendo" in caplog.text
    record = json.loads((tmp_path / "ruim.json").read_text())
    record["d"] = 2
    (tmp_path / "ruim.json").write_text(json.dumps(record))

    code, out, _ = run(capsys, "color", "verify", str(tmp_path))
    payload = json.loads(out)
    assert code == 2
    assert [r["status"] for r in payload["reports"]] == ["ok", "violation"]

    empty = tmp_path / "vazio"
    empty.mkdir()
    code, _, err = run(capsys, "color", "verify", str(empty))
    assert code == 1 and error_payload(err)["status"] == "error"
