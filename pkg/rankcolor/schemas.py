from pydantic import BaseModel, ConfigDict, Field
from typing import Optional, List, Literal

# Modelos base
class BaseSchema(BaseModel):
    """Modelo base para todos os schemas"""
    model_config = ConfigDict(from_attributes=True)

# Modelos para FieldTower
class TowerSchema(BaseSchema):
    """Descrição serializável da torre F_p ⊂ F_q ⊂ F_{q^N}"""
    p: int
    m: int
    N: int
    modulus_q: List[int]  # coeficientes em F_p, grau baixo primeiro
    modulus_qN: List[List[int]]  # cada coeficiente em F_q como vetor sobre F_p
    basis: Optional[List[List[int]]] = None  # elementos de F_{q^N}, grau baixo primeiro

# Modelos para matrizes
class MatrixSchema(BaseSchema):
    """Matriz sobre F_q: linhas de entradas, cada entrada como vetor sobre F_p"""
    q: int
    rows: List[List[List[int]]]
    transposed: bool = False

# Modelos para códigos
class CodeSchema(BaseSchema):
    """Arquivo de código linear em métrica do posto"""
    tower: TowerSchema
    n: int
    k: int
    generator: List[List[List[int]]]
    parity: List[List[List[int]]]
    tag: str = "explicit"
    s: Optional[int] = None
    h: Optional[List[List[int]]] = None

# Modelos para colorações
class ColoringSchema(BaseSchema):
    """Arquivo de coloração por síndrome"""
    tower: TowerSchema
    n: int
    mode: Literal["at-most-d", "exactly-d"]
    d: int
    H_col: List[List[List[int]]]
    num_colors: str  # inteiro decimal de precisão arbitrária
    seed: Optional[int] = None
    provenance: str = ""
    bound_exponent: Optional[int] = None

# Modelos para limitantes
class KnownValue(BaseSchema):
    """Valor conhecido (exato ou cota inferior) de chi_d"""
    value: int
    kind: Literal["exact", "lower"]
    provenance: str

class BoundsRow(BaseSchema):
    """Uma linha da comparação de limitantes"""
    N: int
    n: int
    d: int
    q: int
    chi_prime_exact: int
    chi_lower_eq1: int
    chi_exact_upper_thm: int
    chi_exact_upper_exponent: int
    chi_exact_upper_nat: int
    known_exact: Optional[KnownValue] = None
    lower_bounds: List[KnownValue] = Field(default_factory=list)
    note: str = ""
    boundary_note: str = ""

# Modelos para relatórios
class VerificationReport(BaseSchema):
    """Resultado de uma verificação exaustiva"""
    status: Literal["ok", "violation", "error"]
    message: str
    mode: Optional[str] = None
    d: Optional[int] = None
    num_colors: Optional[str] = None
    pair: Optional[List[str]] = None

class RunConfig(BaseSchema):
    """Configuração de uma execução da CLI"""
    model_config = ConfigDict(from_attributes=True, extra="forbid")

    command: str = ""
    budget: int = Field(2 ** 20, ge=1)
    seed: int = Field(0, ge=0, lt=2 ** 64)
    threads: int = Field(1, ge=1)
    format: Literal["json", "csv", "dot", "text"] = "json"
    out: Optional[str] = None
    log_level: str = "WARNING"
