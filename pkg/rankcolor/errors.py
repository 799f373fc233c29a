"""
Exceções do rankcolor.

Cada exceção carrega um `detail` legível e o código de saída que a CLI
devolve, no mesmo espírito do HTTPException(status_code, detail) das APIs.
"""


class RankColorError(Exception):
    """Erro base; o código de saída padrão indica violação de invariante interno"""
    exit_code = 4

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class UsageError(RankColorError, ValueError):
    """Parâmetros inválidos vindos do usuário"""
    exit_code = 1


class FieldError(UsageError):
    """Erro de aritmética ou de construção da torre de corpos"""


class ShapeError(UsageError):
    """Dimensões incompatíveis entre matrizes ou vetores"""


class RankDeficientError(UsageError):
    """Matriz geradora ou de paridade sem posto completo"""


class VerificationError(RankColorError):
    """Uma verificação exaustiva encontrou um contraexemplo"""
    exit_code = 2

    def __init__(self, detail: str, witness=None):
        super().__init__(detail)
        self.witness = witness


class BudgetExceededError(RankColorError):
    """A enumeração pedida excede o orçamento configurado"""
    exit_code = 3


class SearchFailedError(RankColorError):
    """A busca aleatória esgotou as reinicializações sem sucesso verificado"""
    exit_code = 3

    def __init__(self, detail: str, restarts: int = 0, best_spectrum=None):
        super().__init__(detail)
        self.restarts = restarts
        self.best_spectrum = best_spectrum or {}


class InvariantBreachError(RankColorError):
    """Um invariante interno foi violado (bug ou discordância entre oráculos)"""
    exit_code = 4


def check_budget(required: int, budget: int, what: str) -> None:
    """
    Falha ruidosamente quando uma enumeração não cabe no orçamento

    Args:
        required: Quantidade de elementos a enumerar
        budget: Orçamento máximo
        what: Descrição do que seria enumerado
    """
    if required > budget:
        raise BudgetExceededError(
            f"{what}: {required} elementos excedem o orçamento de {budget}"
        )
