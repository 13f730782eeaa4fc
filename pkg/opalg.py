"""
Symbolic ladder-operator algebra.

Expressions are sums of products of ladder operators with exact Gaussian
rational coefficients and Kronecker delta factors. The DSL is parsed with
lark; normal ordering is a term-rewriting pass that bubbles creators to the
left, emitting a contraction term for each (annihilate, create) swap of a
matching pair.
"""

import itertools
import logging
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Tuple, Union

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedInput, VisitError
from sympy.polys.domains import QQ
from sympy.polys.domains.gaussiandomains import GaussianRational

from exceptions import (
    DSLSyntaxError,
    MalformedIndexError,
    UnknownSpeciesError,
    UnsupportedPatternError,
)
from models import SPECIES_ORDER, Kind, Species, StatisticsConfig, StatisticsKind

logger = logging.getLogger(__name__)

Coefficient = GaussianRational


def coefficient(real=0, imag=0) -> Coefficient:
    """Build an exact complex rational from ints, QQ elements or (num, den) pairs"""
    return GaussianRational(_rational(real), _rational(imag))


def _rational(value):
    if isinstance(value, tuple):
        return QQ(int(value[0]), int(value[1]))
    return QQ.convert(value)


ZERO = coefficient(0)
ONE = coefficient(1)
IMAGINARY_UNIT = coefficient(0, 1)


def conjugate(c: Coefficient) -> Coefficient:
    return GaussianRational(c.x, -c.y)


def _q_to_float(q) -> float:
    return int(q.numerator) / int(q.denominator)


def is_zero(c: Coefficient) -> bool:
    return c.x == 0 and c.y == 0


def to_complex(c: Coefficient) -> complex:
    return complex(_q_to_float(c.x), _q_to_float(c.y))


# Domain types

@dataclass(frozen=True, order=True)
class ModeLabel:
    """A mode: an optional identifier followed by small integer indices"""

    name: str = ""
    indices: Tuple[int, ...] = ()

    def __post_init__(self):
        if not self.name and not self.indices:
            raise MalformedIndexError("a mode label needs a name or at least one index")

    @property
    def is_concrete(self) -> bool:
        # Pure integer labels denote fixed modes; named labels are free symbols
        return not self.name

    def __str__(self) -> str:
        parts = ([self.name] if self.name else []) + [str(i) for i in self.indices]
        return ",".join(parts)


DeltaFactor = Tuple[ModeLabel, ModeLabel]


@dataclass(frozen=True)
class LadderSymbol:
    species: Species
    kind: Kind
    mode: ModeLabel
    green: Optional[int] = None

    @cached_property
    def sort_key(self):
        kind_rank = 0 if self.kind == Kind.CREATE else 1
        return (kind_rank, SPECIES_ORDER[self.species], self.green or 0, self.mode)

    def dagger(self) -> "LadderSymbol":
        kind = Kind.ANNIHILATE if self.kind == Kind.CREATE else Kind.CREATE
        return LadderSymbol(self.species, kind, self.mode, self.green)

    def __str__(self) -> str:
        green = f"[{self.green}]" if self.green is not None else ""
        dagger = "+" if self.kind == Kind.CREATE else ""
        return f"{self.species.value}{green}{dagger}({self.mode})"


@dataclass(frozen=True)
class Term:
    coefficient: Coefficient
    deltas: Tuple[DeltaFactor, ...]
    factors: Tuple[LadderSymbol, ...]

    @property
    def key(self):
        return (self.deltas, self.factors)

    @property
    def sort_key(self):
        return (
            len(self.factors),
            tuple(f.sort_key for f in self.factors),
            len(self.deltas),
            self.deltas,
        )


_TRIVIAL = "one"
_VANISHING = "zero"


def _delta(m1: ModeLabel, m2: ModeLabel) -> Union[str, DeltaFactor]:
    if m1 == m2:
        return _TRIVIAL
    if m1.is_concrete and m2.is_concrete:
        return _VANISHING
    return (m1, m2) if m1 < m2 else (m2, m1)


def _canonical_deltas(deltas: Iterable) -> Optional[Tuple[DeltaFactor, ...]]:
    """Drop trivial deltas, dedupe (δ² = δ); None when a delta vanishes"""
    kept = set()
    for m1, m2 in deltas:
        resolved = _delta(m1, m2)
        if resolved is _VANISHING:
            return None
        if resolved is not _TRIVIAL:
            kept.add(resolved)
    return tuple(sorted(kept))


class OperatorExpr:
    """An immutable, canonicalized sum of terms"""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable[Term] = ()):
        merged: Dict[tuple, Coefficient] = {}
        shapes: Dict[tuple, Tuple[tuple, tuple]] = {}
        for term in terms:
            deltas = _canonical_deltas(term.deltas)
            if deltas is None or is_zero(term.coefficient):
                continue
            key = (deltas, term.factors)
            merged[key] = merged.get(key, ZERO) + term.coefficient
            shapes[key] = (deltas, term.factors)
        kept = [
            Term(c, shapes[key][0], shapes[key][1])
            for key, c in merged.items()
            if not is_zero(c)
        ]
        self.terms: Tuple[Term, ...] = tuple(sorted(kept, key=lambda t: t.sort_key))
        self._hash = None

    @classmethod
    def scalar(cls, value) -> "OperatorExpr":
        c = value if isinstance(value, GaussianRational) else coefficient(value)
        return cls([Term(c, (), ())])

    @classmethod
    def identity(cls) -> "OperatorExpr":
        return cls.scalar(1)

    @classmethod
    def zero(cls) -> "OperatorExpr":
        return cls()

    @classmethod
    def symbol(cls, symbol: LadderSymbol) -> "OperatorExpr":
        return cls([Term(ONE, (), (symbol,))])

    @classmethod
    def delta(cls, m1: ModeLabel, m2: ModeLabel) -> "OperatorExpr":
        return cls([Term(ONE, ((m1, m2),), ())])

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def identity_coefficient(self) -> Coefficient:
        for term in self.terms:
            if not term.factors and not term.deltas:
                return term.coefficient
        return ZERO

    def __add__(self, other):
        if not isinstance(other, OperatorExpr):
            other = OperatorExpr.scalar(other)
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return OperatorExpr(Term(-t.coefficient, t.deltas, t.factors) for t in self.terms)

    def __sub__(self, other):
        if not isinstance(other, OperatorExpr):
            other = OperatorExpr.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, OperatorExpr):
            return multiply(self, other)
        c = other if isinstance(other, GaussianRational) else coefficient(other)
        return OperatorExpr(Term(t.coefficient * c, t.deltas, t.factors) for t in self.terms)

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        if not isinstance(other, OperatorExpr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __str__(self):
        return format_expr(self)

    def __repr__(self):
        return f"OperatorExpr({format_expr(self)!r})"


def add(x: OperatorExpr, y: OperatorExpr) -> OperatorExpr:
    return OperatorExpr(x.terms + y.terms)


def scale(expr: OperatorExpr, c) -> OperatorExpr:
    return expr * c


def multiply(x: OperatorExpr, y: OperatorExpr) -> OperatorExpr:
    return OperatorExpr(
        Term(a.coefficient * b.coefficient, a.deltas + b.deltas, a.factors + b.factors)
        for a in x.terms
        for b in y.terms
    )


def commutator(x: OperatorExpr, y: OperatorExpr, anti: bool = False) -> OperatorExpr:
    if anti:
        return x * y + y * x
    return x * y - y * x


def adjoint(expr: OperatorExpr) -> OperatorExpr:
    return OperatorExpr(
        Term(
            conjugate(t.coefficient),
            t.deltas,
            tuple(f.dagger() for f in reversed(t.factors)),
        )
        for t in expr.terms
    )


def modes_of(expr: OperatorExpr) -> List[Tuple[Species, ModeLabel]]:
    seen = []
    for term in expr.terms:
        for f in term.factors:
            if (f.species, f.mode) not in seen:
                seen.append((f.species, f.mode))
    return seen


def expand_green(expr: OperatorExpr, order: int, species: Species = Species.UR) -> OperatorExpr:
    """Replace every bare parabose factor by the sum of its Green components"""
    expanded = []
    for term in expr.terms:
        choices = []
        for f in term.factors:
            if f.species == species and f.green is None:
                choices.append([LadderSymbol(f.species, f.kind, f.mode, alpha) for alpha in range(1, order + 1)])
            else:
                choices.append([f])
        for factors in itertools.product(*choices):
            expanded.append(Term(term.coefficient, term.deltas, tuple(factors)))
    return OperatorExpr(expanded)


# Normal ordering

def _check_supported(expr: OperatorExpr, stats: StatisticsConfig) -> None:
    for term in expr.terms:
        for f in term.factors:
            statistics = stats.for_species(f.species)
            if statistics.kind != StatisticsKind.PARABOSE:
                if f.green is not None:
                    raise UnsupportedPatternError(
                        f"Green component on {f} but species '{f.species.value}' is {statistics.label}"
                    )
                continue
            if f.green is None and statistics.order > 1:
                raise UnsupportedPatternError(
                    f"bare parabose factor {f} under {statistics.label}; expand into Green components first"
                )
            if f.green is not None and not 1 <= f.green <= statistics.order:
                raise UnsupportedPatternError(
                    f"Green component {f.green} out of range for {statistics.label}"
                )


def _exchange_sign(left: LadderSymbol, right: LadderSymbol, stats: StatisticsConfig) -> int:
    left_stats = stats.for_species(left.species)
    right_stats = stats.for_species(right.species)
    if left_stats.is_fermionic and right_stats.is_fermionic:
        return -1
    if (
        left.species == right.species
        and left_stats.kind == StatisticsKind.PARABOSE
        and (left.green or 1) != (right.green or 1)
    ):
        return -1
    return 1


def _first_inversion(factors, stats: StatisticsConfig):
    for i in range(len(factors) - 1):
        left, right = factors[i], factors[i + 1]
        if left.sort_key > right.sort_key:
            return i
        if left == right and stats.for_species(left.species).is_fermionic:
            return _VANISHING
    return None


def normal_order(expr: OperatorExpr, stats: Optional[StatisticsConfig] = None) -> OperatorExpr:
    """Rewrite into canonical normal-ordered form under the given statistics"""
    stats = stats or StatisticsConfig()
    _check_supported(expr, stats)

    done: List[Term] = []
    pending = [(t.coefficient, t.deltas, t.factors) for t in expr.terms]
    while pending:
        coeff, deltas, factors = pending.pop()
        i = _first_inversion(factors, stats)
        if i is None:
            done.append(Term(coeff, deltas, factors))
            continue
        if i is _VANISHING:
            continue

        left, right = factors[i], factors[i + 1]
        sign = _exchange_sign(left, right, stats)
        swapped = factors[:i] + (right, left) + factors[i + 2:]
        pending.append((coeff * sign, deltas, swapped))

        contracts = (
            left.kind == Kind.ANNIHILATE
            and right.kind == Kind.CREATE
            and left.species == right.species
            and (left.green or 1) == (right.green or 1)
        )
        if contracts:
            resolved = _delta(left.mode, right.mode)
            if resolved is _VANISHING:
                continue
            extra = () if resolved is _TRIVIAL else (resolved,)
            pending.append((coeff, deltas + extra, factors[:i] + factors[i + 2:]))

    return OperatorExpr(done)


def vacuum_expectation_exact(expr: OperatorExpr, stats: Optional[StatisticsConfig] = None) -> Coefficient:
    # Deltas surviving canonicalization join distinct labels and evaluate to 0
    return normal_order(expr, stats).identity_coefficient()


def vacuum_expectation(expr: OperatorExpr, stats: Optional[StatisticsConfig] = None) -> complex:
    return to_complex(vacuum_expectation_exact(expr, stats))


# Pretty printer

def _format_rational(q) -> str:
    n, d = int(q.numerator), int(q.denominator)
    return str(n) if d == 1 else f"{n}/{d}"


def _format_coefficient(c: Coefficient, has_factors: bool) -> Tuple[bool, str]:
    x, y = c.x, c.y
    negative = x < 0 if x != 0 else y < 0
    if negative:
        x, y = -x, -y
    if y == 0:
        text = _format_rational(x)
        if text == "1" and has_factors:
            text = ""
    elif x == 0:
        text = f"{_format_rational(y)}i"
    else:
        op = "+" if y > 0 else "-"
        text = f"({_format_rational(x)} {op} {_format_rational(abs(y))}i)"
    return negative, text


def format_term(term: Term) -> Tuple[bool, str]:
    parts = [f"delta({m1}; {m2})" for m1, m2 in term.deltas]
    parts += [str(f) for f in term.factors]
    negative, text = _format_coefficient(term.coefficient, bool(parts))
    return negative, " ".join(([text] if text else []) + parts)


def format_expr(expr: OperatorExpr) -> str:
    if expr.is_zero:
        return "0"
    pieces = []
    for position, term in enumerate(expr.terms):
        negative, text = format_term(term)
        if position == 0:
            pieces.append(f"-{text}" if negative else text)
        else:
            pieces.append(f"{'-' if negative else '+'} {text}")
    return " ".join(pieces)


# Parser

_GRAMMAR = r"""
    start: expr

    expr: [SIGN] term (SIGN term)*

    term: coeff "*"? factor+  -> scaled
        | factor+             -> bare
        | coeff               -> scalar

    coeff: NUMBER                                  -> real_coeff
         | [NUMBER] IMAG                           -> imag_coeff
         | "(" [SIGN] NUMBER SIGN [NUMBER] IMAG ")" -> complex_coeff

    ?factor: ladder | delta

    ladder: SYMBOL "(" index_list ")"
    delta: "delta" "(" index_list ";" index_list ")"

    index_list: index ("," index)*
    index: IDENT -> name_index
         | INT   -> int_index

    SYMBOL: /[bdau](\[[0-9]+\])?\+?(?=\()/
    SIGN: "+" | "-"
    IMAG: "i"
    NUMBER: /[0-9]+(\/[0-9]+)?/
    INT: /-?[0-9]+/
    IDENT: /[A-Za-z_][A-Za-z0-9_']*/

    %import common.WS
    %ignore WS
"""

_SYMBOL_RE = re.compile(r"([bdau])(?:\[([0-9]+)\])?(\+)?")
_SPECIES_LIKE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(\[[0-9]+\])?\+?\(")


def _number(token) -> object:
    text = str(token)
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise MalformedIndexError(
                f"zero denominator in coefficient {text}", getattr(token, "line", None), getattr(token, "column", None)
            )
        return QQ(int(num), int(den))
    return QQ(int(text))


def _signed(sign, value):
    return -value if sign is not None and str(sign) == "-" else value


@v_args(inline=True)
class _ExprBuilder(Transformer):
    def start(self, expr):
        return expr

    def expr(self, first_sign, *rest):
        terms = []
        signs = [first_sign] + list(rest[1::2])
        for sign, (coeff, deltas, factors) in zip(signs, rest[0::2]):
            terms.append(Term(_signed(sign, coeff), tuple(deltas), tuple(factors)))
        return OperatorExpr(terms)

    def scaled(self, coeff, *factors):
        return self._split(coeff, factors)

    def bare(self, *factors):
        return self._split(ONE, factors)

    def scalar(self, coeff):
        return (coeff, (), ())

    @staticmethod
    def _split(coeff, factors):
        deltas = [f for f in factors if isinstance(f, tuple)]
        ladders = [f for f in factors if isinstance(f, LadderSymbol)]
        return (coeff, deltas, ladders)

    def real_coeff(self, number):
        return GaussianRational(_number(number), 0)

    def imag_coeff(self, number, _imag):
        return GaussianRational(0, _number(number) if number is not None else 1)

    def complex_coeff(self, real_sign, real, imag_sign, imag, _imag):
        imag_value = _number(imag) if imag is not None else QQ(1)
        return GaussianRational(_signed(real_sign, _number(real)), _signed(imag_sign, imag_value))

    def ladder(self, symbol, mode):
        match = _SYMBOL_RE.fullmatch(str(symbol))
        species_char, green, dagger = match.groups()
        green_index = int(green) if green is not None else None
        if green_index is not None and green_index < 1:
            raise MalformedIndexError(f"Green component must be positive in {symbol}", symbol.line, symbol.column)
        kind = Kind.CREATE if dagger else Kind.ANNIHILATE
        return LadderSymbol(Species(species_char), kind, mode, green_index)

    def delta(self, m1, m2):
        return (m1, m2)

    def index_list(self, *indices):
        name = ""
        values = list(indices)
        if isinstance(values[0], str):
            name = values.pop(0)
        if any(isinstance(v, str) for v in values):
            raise MalformedIndexError(
                f"malformed index list ({','.join(str(v) for v in indices)}): "
                "an identifier may only stand in first position"
            )
        return ModeLabel(name, tuple(values))

    def name_index(self, token):
        return str(token)

    def int_index(self, token):
        return int(token)


_PARSER = Lark(_GRAMMAR, parser="lalr", lexer="contextual", maybe_placeholders=True)


def _position(text: str, pos: int) -> Tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    column = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, column


def parse_expr(text: str) -> OperatorExpr:
    """Parse DSL text into a canonicalized OperatorExpr"""
    try:
        tree = _PARSER.parse(text)
    except UnexpectedInput as e:
        pos = e.pos_in_stream if e.pos_in_stream is not None and e.pos_in_stream >= 0 else len(text)
        line, column = _position(text, pos)
        word = _SPECIES_LIKE.match(text, pos)
        if word:
            name = re.match(r"[A-Za-z_][A-Za-z0-9_]*", word.group(0)).group(0)
            if name not in {s.value for s in Species}:
                raise UnknownSpeciesError(f"unknown species '{name}'", line, column)
        if isinstance(e, UnexpectedCharacters):
            raise DSLSyntaxError(f"unexpected character {e.char!r}", line, column)
        token = getattr(e, "token", None)
        detail = f"unexpected token {str(token)!r}" if token else "unexpected end of input"
        raise DSLSyntaxError(detail, line, column)

    try:
        return _ExprBuilder().transform(tree)
    except VisitError as e:
        raise e.orig_exc
