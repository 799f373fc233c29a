"""
Aritmética exata na torre de corpos F_p ⊂ F_q = F_{p^m} ⊂ F_{q^N}.

Elementos de F_q usam a representação inteira do galois (dígitos base p, grau
baixo no dígito menos significativo). Elementos de F_{q^N} são codificados como
inteiros Σ c_i q^i, onde c_i ∈ F_q são os coeficientes do resíduo polinomial
na base 1, β, ..., β^{N-1} (β = classe do x módulo modulus_qN). A soma em
F_{q^N} é, portanto, a soma dígito a dígito na base p.
"""
import logging
from enum import Enum
from functools import cached_property, lru_cache
from typing import Callable, List, Optional, Sequence, Union

import galois
import numpy as np

from config import FIELD_TABLE_LIMIT
from errors import FieldError, ShapeError
from schemas import TowerSchema

logger = logging.getLogger(__name__)

PolyLike = Union[galois.Poly, Sequence[int]]


class Level(str, Enum):
    PRIME = "F_p"
    BASE = "F_q"
    TOP = "F_q^N"


def smallest_irreducible(field, degree: int) -> galois.Poly:
    """
    Menor polinômio mônico irredutível de um grau dado

    A ordem é a da representação inteira Σ c_i |F|^i (coeficientes listados do
    grau baixo para o alto), a mesma ordem usada pelo galois.

    Args:
        field: Classe galois do corpo dos coeficientes
        degree: Grau desejado

    Returns:
        O polinômio escolhido
    """
    if degree < 1:
        raise FieldError("O grau do módulo deve ser positivo")
    order = field.order
    for code in range(order ** degree, 2 * order ** degree):
        poly = galois.Poly.Int(code, field=field)
        if poly.is_irreducible():
            return poly
    raise FieldError(f"Nenhum irredutível de grau {degree} sobre GF({order})")


def _square_and_multiply(mul: Callable[[int, int], int], x: int, exponent: int) -> int:
    result, base = 1, x
    while exponent > 0:
        if exponent & 1:
            result = mul(result, base)
        base = mul(base, base)
        exponent >>= 1
    return result


def _poly_coeffs(poly: galois.Poly, degree: int) -> List[int]:
    coeffs = [int(c) for c in poly.coeffs[::-1]]
    return coeffs + [0] * (degree + 1 - len(coeffs))


def split_prime_power(q: int, m: Optional[int] = None):
    """
    Decompõe q = p^m

    Returns:
        Par (p, m)
    """
    if q < 2:
        raise FieldError(f"q = {q} não é potência de primo")
    primes, multiplicities = galois.factors(q)
    if len(primes) != 1:
        raise FieldError(f"q = {q} não é potência de primo")
    p, degree = int(primes[0]), int(multiplicities[0])
    if m is not None and m != degree:
        raise FieldError(f"q = {q} não é {p}^{m}")
    return p, degree


class FieldTower:
    """
    Torre F_p ⊂ F_q ⊂ F_{q^N} com módulos e base de F_{q^N} sobre F_q fixados
    """
    def __init__(
        self,
        p: int,
        m: int,
        N: int,
        modulus_q: Optional[PolyLike] = None,
        modulus_qN: Optional[PolyLike] = None,
        basis: Optional[Sequence[int]] = None,
    ):
        """
        Inicializa a torre

        Args:
            p: Característica (primo)
            m: Grau de F_q sobre F_p
            N: Grau de F_{q^N} sobre F_q
            modulus_q: Módulo de F_q (padrão: menor irredutível)
            modulus_qN: Módulo de F_{q^N} sobre F_q (padrão: menor irredutível)
            basis: Base de F_{q^N} sobre F_q como códigos (padrão: base polinomial)
        """
        if int(p) < 2 or not galois.is_prime(int(p)):
            raise FieldError(f"p = {p} não é primo")
        if int(m) < 1 or int(N) < 1:
            raise FieldError("Os graus de extensão devem ser positivos")
        self.p, self.m, self.N = int(p), int(m), int(N)
        self.q = self.p ** self.m
        self.order = self.q ** self.N

        self.prime_field = galois.GF(self.p)
        if modulus_q is None:
            modulus_q = smallest_irreducible(self.prime_field, self.m)
        self.modulus_q = self._check_modulus(modulus_q, self.prime_field, self.m, "modulus_q")
        if self.m == 1:
            self.Fq = self.prime_field
        else:
            self.Fq = galois.GF(self.q, irreducible_poly=self.modulus_q)

        if modulus_qN is None:
            modulus_qN = smallest_irreducible(self.Fq, self.N)
        self.modulus_qN = self._check_modulus(modulus_qN, self.Fq, self.N, "modulus_qN")

        self._powers = np.array([self.q ** i for i in range(self.N)], dtype=np.int64)
        polynomial_basis = tuple(int(x) for x in self._powers)
        self.basis = tuple(int(b) for b in basis) if basis is not None else polynomial_basis
        self.polynomial_basis = self.basis == polynomial_basis
        self._basis_matrix = None
        self._basis_inverse = None
        if not self.polynomial_basis:
            if len(self.basis) != self.N:
                raise FieldError(f"A base deve ter {self.N} elementos")
            for b in self.basis:
                self._check_code(b)
            B = self.Fq(np.array([self.digits(b) for b in self.basis], dtype=np.int64))
            if int(np.linalg.matrix_rank(B)) != self.N:
                raise FieldError("A base não é linearmente independente sobre F_q")
            self._basis_matrix = B
            self._basis_inverse = np.linalg.inv(B)

        self._key = (
            self.p, self.m, self.N,
            tuple(_poly_coeffs(self.modulus_q, self.m)),
            tuple(_poly_coeffs(self.modulus_qN, self.N)),
            self.basis,
        )
        logger.info(f"Torre construída: {self}")

    @staticmethod
    def _check_modulus(modulus: PolyLike, field, degree: int, name: str) -> galois.Poly:
        if not isinstance(modulus, galois.Poly):
            modulus = galois.Poly(list(reversed([int(c) for c in modulus])), field=field)
        elif modulus.field is not field:
            modulus = galois.Poly(modulus.coeffs.view(np.ndarray), field=field)
        if modulus.degree != degree or int(modulus.coeffs[0]) != 1:
            raise FieldError(f"{name} deve ser mônico de grau {degree}")
        if not modulus.is_irreducible():
            raise FieldError(f"{name} = {modulus} não é irredutível")
        return modulus

    def __repr__(self) -> str:
        return f"FieldTower(p={self.p}, m={self.m}, N={self.N}, modulus_qN={self.modulus_qN})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldTower) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    # --- Codificação ---
    def _check_code(self, code: int) -> int:
        code = int(code)
        if not 0 <= code < self.order:
            raise FieldError(f"{code} não é um elemento de GF({self.q}^{self.N})")
        return code

    def digits(self, code: int) -> List[int]:
        """Coeficientes em F_q (grau baixo primeiro) de um elemento de F_{q^N}"""
        code = int(code)
        return [(code // self.q ** i) % self.q for i in range(self.N)]

    def from_digits(self, coeffs: Sequence[int]) -> int:
        """Elemento de F_{q^N} a partir dos coeficientes em F_q"""
        if len(coeffs) != self.N:
            raise ShapeError(f"Esperados {self.N} coeficientes, recebidos {len(coeffs)}")
        return int(sum(int(c) * self.q ** i for i, c in enumerate(coeffs)))

    def codes_to_digits(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        return (codes[..., None] // self._powers) % self.q

    def digits_to_codes(self, digits) -> np.ndarray:
        digits = np.asarray(digits, dtype=np.int64)
        return (digits * self._powers).sum(axis=-1)

    def base_digits(self, value: int) -> List[int]:
        """Coeficientes em F_p (grau baixo primeiro) de um elemento de F_q"""
        return [(int(value) // self.p ** j) % self.p for j in range(self.m)]

    # --- Expansão na base ---
    def expand(self, code: int) -> List[int]:
        """Coordenadas de x ∈ F_{q^N} na base fixada de F_{q^N} sobre F_q"""
        code = self._check_code(code)
        if self.polynomial_basis:
            return self.digits(code)
        row = self.Fq(np.array(self.digits(code), dtype=np.int64)) @ self._basis_inverse
        return [int(c) for c in row]

    def contract(self, coords: Sequence[int]) -> int:
        """Elemento de F_{q^N} com as coordenadas dadas na base fixada"""
        if len(coords) != self.N:
            raise ShapeError(f"Esperadas {self.N} coordenadas, recebidas {len(coords)}")
        if self.polynomial_basis:
            return self.from_digits(coords)
        row = self.Fq(np.array([int(c) for c in coords], dtype=np.int64)) @ self._basis_matrix
        return self.from_digits([int(c) for c in row])

    def expand_many(self, codes) -> np.ndarray:
        """Versão vetorizada de expand: forma (...) -> (..., N)"""
        digits = self.codes_to_digits(codes)
        if self.polynomial_basis:
            return digits
        flat = self.Fq(digits.reshape(-1, self.N)) @ self._basis_inverse
        return flat.view(np.ndarray).astype(np.int64).reshape(digits.shape)

    def contract_many(self, coords) -> np.ndarray:
        """Versão vetorizada de contract: forma (..., N) -> (...)"""
        coords = np.asarray(coords, dtype=np.int64)
        if coords.shape[-1] != self.N:
            raise ShapeError(f"A última dimensão deve ser {self.N}")
        if not self.polynomial_basis:
            flat = self.Fq(coords.reshape(-1, self.N)) @ self._basis_matrix
            coords = flat.view(np.ndarray).astype(np.int64).reshape(coords.shape)
        return self.digits_to_codes(coords)

    # --- Aritmética vetorizada em F_{q^N} ---
    def _digitwise(self, a, b, sign: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        result = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        place = 1
        for _ in range(self.m * self.N):
            result = result + ((a // place + sign * (b // place)) % self.p) * place
            place *= self.p
        return result

    def vadd(self, a, b) -> np.ndarray:
        return self._digitwise(a, b, 1)

    def vsub(self, a, b) -> np.ndarray:
        return self._digitwise(a, b, -1)

    def vneg(self, a) -> np.ndarray:
        return self._digitwise(0, a, -1)

    @cached_property
    def _tables(self):
        # exp/log em relação ao elemento primitivo; None acima do limite configurado
        if self.order > FIELD_TABLE_LIMIT:
            logger.info(f"GF({self.q}^{self.N}) acima do limite de tabelas; usando polinômios")
            return None
        g = self.primitive_code
        step = self.Fq(np.array(
            [self.digits(self._poly_mul(int(self._powers[i]), g)) for i in range(self.N)],
            dtype=np.int64,
        ))
        exp = np.zeros(self.order - 1, dtype=np.int64)
        vec = self.Fq(np.array(self.digits(1), dtype=np.int64))
        for i in range(self.order - 1):
            exp[i] = int(np.dot(vec.view(np.ndarray).astype(np.int64), self._powers))
            vec = vec @ step
        log = np.zeros(self.order, dtype=np.int64)
        log[exp] = np.arange(self.order - 1, dtype=np.int64)
        return exp, log

    def vmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        tables = self._tables
        if tables is None:
            return np.vectorize(self._poly_mul, otypes=[np.int64])(a, b)
        exp, log = tables
        product = exp[(log[a] + log[b]) % (self.order - 1)]
        return np.where((a == 0) | (b == 0), 0, product)

    def vinv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise FieldError("Inversão do zero")
        tables = self._tables
        if tables is None:
            return np.vectorize(lambda x: self._poly_pow(x, self.order - 2), otypes=[np.int64])(a)
        exp, log = tables
        return exp[(-log[a]) % (self.order - 1)]

    # --- Aritmética escalar em F_{q^N} ---
    def add(self, a: int, b: int) -> int:
        return int(self.vadd(a, b))

    def sub(self, a: int, b: int) -> int:
        return int(self.vsub(a, b))

    def neg(self, a: int) -> int:
        return int(self.vneg(a))

    def mul(self, a: int, b: int) -> int:
        return int(self.vmul(a, b))

    def inv(self, a: int) -> int:
        return int(self.vinv(a))

    def power(self, x: int, exponent: int) -> int:
        """x^e por quadrados sucessivos (e negativo usa o inverso)"""
        if exponent < 0:
            return self.power(self.inv(x), -exponent)
        return _square_and_multiply(self.mul, int(x), int(exponent))

    def frobenius(self, x: int, j: int) -> int:
        """x^{q^j}; como x^{q^N} = x, o expoente é reduzido módulo N"""
        return self.power(x, self.q ** (int(j) % self.N))

    # Caminho polinomial de referência (sem tabelas)
    def _as_poly(self, code: int) -> galois.Poly:
        return galois.Poly(self.digits(code)[::-1], field=self.Fq)

    def _poly_mul(self, a: int, b: int) -> int:
        product = (self._as_poly(a) * self._as_poly(b)) % self.modulus_qN
        return self.from_digits(_poly_coeffs(product, self.N - 1))

    def _poly_pow(self, x: int, exponent: int) -> int:
        return _square_and_multiply(self._poly_mul, int(x), int(exponent))

    @cached_property
    def primitive_code(self) -> int:
        """Menor código de ordem multiplicativa q^N - 1"""
        if self.order == 2:
            return 1
        primes, _ = galois.factors(self.order - 1)
        for code in range(1, self.order):
            if all(self._poly_pow(code, (self.order - 1) // int(r)) != 1 for r in primes):
                logger.info(f"Elemento primitivo de GF({self.q}^{self.N}): {code}")
                return code
        raise FieldError("Elemento primitivo não encontrado")

    def element_order(self, x: int) -> int:
        """Ordem multiplicativa de x ≠ 0"""
        x = self._check_code(x)
        if x == 0:
            raise FieldError("O zero não tem ordem multiplicativa")
        for divisor in galois.divisors(self.order - 1):
            if self.power(x, int(divisor)) == 1:
                return int(divisor)
        raise FieldError(f"Ordem de {x} não encontrada")

    # --- Serialização ---
    def to_schema(self) -> TowerSchema:
        return TowerSchema(
            p=self.p,
            m=self.m,
            N=self.N,
            modulus_q=_poly_coeffs(self.modulus_q, self.m),
            modulus_qN=[self.base_digits(c) for c in _poly_coeffs(self.modulus_qN, self.N)],
            basis=None if self.polynomial_basis else [self.digits(b) for b in self.basis],
        )

    @classmethod
    def from_schema(cls, schema: TowerSchema) -> "FieldTower":
        p = schema.p
        modulus_qN = [
            sum(int(d) * p ** j for j, d in enumerate(coeff)) for coeff in schema.modulus_qN
        ]
        q = p ** schema.m
        basis = None
        if schema.basis is not None:
            basis = [sum(int(c) * q ** i for i, c in enumerate(b)) for b in schema.basis]
        default = build_tower(schema.p, schema.m, schema.N)
        if basis is None and default.to_schema() == schema:
            return default
        return cls(schema.p, schema.m, schema.N, schema.modulus_q, modulus_qN, basis)


@lru_cache(maxsize=None)
def _cached_tower(p: int, m: int, N: int) -> FieldTower:
    return FieldTower(p, m, N)


def build_tower(p: int, m: int, N: int, basis: Optional[Sequence[int]] = None) -> FieldTower:
    """
    Constrói a torre com módulos determinísticos

    Args:
        p: Característica
        m: Grau de F_q sobre F_p
        N: Grau de F_{q^N} sobre F_q
        basis: Base opcional de F_{q^N} sobre F_q

    Returns:
        A torre (mesmas entradas produzem sempre a mesma torre)
    """
    if basis is None:
        return _cached_tower(int(p), int(m), int(N))
    return FieldTower(p, m, N, basis=basis)


def tower_for_order(q: int, N: int, m: Optional[int] = None) -> FieldTower:
    """Constrói a torre a partir de q = p^m"""
    p, degree = split_prime_power(int(q), m)
    return build_tower(p, degree, N)


class FieldElem:
    """
    Elemento de um dos três níveis da torre

    O valor é o código inteiro do nível: resíduo módulo p, representação
    inteira do galois em F_q ou o código Σ c_i q^i em F_{q^N}.
    """
    __slots__ = ("tower", "level", "value")

    def __init__(self, tower: FieldTower, level: Level, value: int):
        limit = {Level.PRIME: tower.p, Level.BASE: tower.q, Level.TOP: tower.order}[level]
        value = int(value)
        if not 0 <= value < limit:
            raise FieldError(f"{value} fora de {level.value}")
        self.tower = tower
        self.level = level
        self.value = value

    @classmethod
    def top(cls, tower: FieldTower, value: int) -> "FieldElem":
        return cls(tower, Level.TOP, value)

    @classmethod
    def base(cls, tower: FieldTower, value: int) -> "FieldElem":
        return cls(tower, Level.BASE, value)

    @classmethod
    def prime(cls, tower: FieldTower, value: int) -> "FieldElem":
        return cls(tower, Level.PRIME, value)

    @classmethod
    def from_coefficients(cls, tower: FieldTower, coeffs: Sequence[int], level: Level = Level.TOP) -> "FieldElem":
        if level is Level.TOP:
            return cls(tower, level, tower.from_digits(coeffs))
        if level is Level.BASE:
            if len(coeffs) != tower.m:
                raise ShapeError(f"Esperados {tower.m} coeficientes")
            return cls(tower, level, sum(int(c) * tower.p ** j for j, c in enumerate(coeffs)))
        return cls(tower, level, int(coeffs[0]) % tower.p)

    def coefficients(self) -> List[int]:
        """Vetor de coeficientes sobre o nível de baixo, grau baixo primeiro"""
        if self.level is Level.TOP:
            return self.tower.digits(self.value)
        if self.level is Level.BASE:
            return self.tower.base_digits(self.value)
        return [self.value]

    def _same(self, other: "FieldElem") -> None:
        if not isinstance(other, FieldElem) or other.tower != self.tower or other.level is not self.level:
            raise FieldError("Operandos em níveis ou torres diferentes")

    def _new(self, value) -> "FieldElem":
        return FieldElem(self.tower, self.level, int(value))

    def __add__(self, other: "FieldElem") -> "FieldElem":
        self._same(other)
        if self.level is Level.TOP:
            return self._new(self.tower.add(self.value, other.value))
        if self.level is Level.BASE:
            return self._new(self.tower.Fq(self.value) + self.tower.Fq(other.value))
        return self._new((self.value + other.value) % self.tower.p)

    def __neg__(self) -> "FieldElem":
        if self.level is Level.TOP:
            return self._new(self.tower.neg(self.value))
        if self.level is Level.BASE:
            return self._new(-self.tower.Fq(self.value))
        return self._new((-self.value) % self.tower.p)

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        self._same(other)
        return self + (-other)

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        self._same(other)
        if self.level is Level.TOP:
            return self._new(self.tower.mul(self.value, other.value))
        if self.level is Level.BASE:
            return self._new(self.tower.Fq(self.value) * self.tower.Fq(other.value))
        return self._new((self.value * other.value) % self.tower.p)

    def inverse(self) -> "FieldElem":
        if self.value == 0:
            raise FieldError("Inversão do zero")
        if self.level is Level.TOP:
            return self._new(self.tower.inv(self.value))
        if self.level is Level.BASE:
            return self._new(self.tower.Fq(self.value) ** -1)
        return self._new(pow(self.value, -1, self.tower.p))

    def __truediv__(self, other: "FieldElem") -> "FieldElem":
        self._same(other)
        return self * other.inverse()

    def __pow__(self, exponent: int) -> "FieldElem":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        if self.level is Level.TOP:
            return self._new(self.tower.power(self.value, exponent))
        return _elem_power(self, exponent)

    def is_zero(self) -> bool:
        return self.value == 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldElem)
            and other.level is self.level
            and other.value == self.value
            and other.tower == self.tower
        )

    def __hash__(self) -> int:
        return hash((self.level, self.value, self.tower))

    def __repr__(self) -> str:
        return f"FieldElem({self.level.value}, {self.coefficients()})"


def _elem_power(x: FieldElem, exponent: int) -> FieldElem:
    result, base = x._new(1), x
    while exponent > 0:
        if exponent & 1:
            result = result * base
        base = base * base
        exponent >>= 1
    return result


# --- Operações no estilo funcional ---
def add(a: FieldElem, b: FieldElem) -> FieldElem:
    return a + b


def sub(a: FieldElem, b: FieldElem) -> FieldElem:
    return a - b


def mul(a: FieldElem, b: FieldElem) -> FieldElem:
    return a * b


def inv(a: FieldElem) -> FieldElem:
    return a.inverse()


def power(a: FieldElem, exponent: int) -> FieldElem:
    return a ** exponent


def frobenius(x: FieldElem, j: int) -> FieldElem:
    """x^{q^j} para x ∈ F_{q^N}"""
    if x.level is not Level.TOP:
        raise FieldError("Frobenius definido para elementos de F_{q^N}")
    return FieldElem.top(x.tower, x.tower.frobenius(x.value, j))


def expand(x: FieldElem) -> List[FieldElem]:
    """Coordenadas de x na base fixada, como elementos de F_q"""
    if x.level is not Level.TOP:
        raise FieldError("expand recebe elementos de F_{q^N}")
    return [FieldElem.base(x.tower, c) for c in x.tower.expand(x.value)]


def contract(tower: FieldTower, coords: Sequence[Union[FieldElem, int]]) -> FieldElem:
    """Inverso de expand"""
    values = []
    for c in coords:
        if isinstance(c, FieldElem):
            if c.level is not Level.BASE:
                raise FieldError("contract recebe coordenadas em F_q")
            values.append(c.value)
        else:
            values.append(int(c))
    return FieldElem.top(tower, tower.contract(values))


def primitive_element(tower: FieldTower) -> FieldElem:
    return FieldElem.top(tower, tower.primitive_code)


def field_for_order(q: int):
    """Classe galois de F_q com o mesmo módulo usado pelas torres"""
    return tower_for_order(q, 1).Fq
