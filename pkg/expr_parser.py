# Author: Ozy
"""
Identity expressions: the AST for LHS - RHS and the text notation the catalog
is written in.

    phi10(q) - q^-1 psi10(-q^4) + q^-2 chi10(q^8) = Tb(1,2) J(-q^2; -q^10) / T(2,8)

Calls: J(a1, ..., ak; B) theta product, T(a,m) / T(m) / Tb(a,m) abbreviations,
P(a; B) infinite Pochhammer, m(x, z; p) Appell, Dn(x, z, zp; p) and
Sn(x, z, zp; p) for n in 2..4, g(x; p), and the Eulerian series by name.
Symbols: q, the phases w, w2 and I, and any other name as a free variable.
Chained sides A = B = C give the sub-identities A - C and B - C.
"""

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Set, Tuple

from errors import ExpressionSyntaxError
from exact_arith import CycloRational, Scalar, canon, cyclo_inv, parse_scalar, scalar_parts
from qring import Monomial

HALF = Fraction(1, 2)

EULERIAN_NAMES = ("phi10", "psi10", "X10", "chi10", "phi6", "psi6", "f0", "f1", "F0")
PHASE_SYMBOLS = {"w": Fraction(1, 3), "w2": Fraction(2, 3), "I": Fraction(1, 4)}


class PrimitiveKind(Enum):
    """Series-valued building blocks of an expression."""
    THETA = "theta"
    POCH = "poch"
    APPELL = "appell"
    DN = "dn"
    SPLIT = "split"
    G = "g"
    EULERIAN = "eulerian"


@dataclass(frozen=True)
class SymMono:
    """sign * exp(2 pi i turn) * q^q * prod(symbol^exp)."""

    sign: int = 1
    turn: Fraction = Fraction(0)
    q: int = 0
    powers: Tuple[Tuple[str, int], ...] = ()

    @staticmethod
    def make(sign: int = 1, turn=0, q: int = 0, powers: Optional[Dict[str, int]] = None) -> 'SymMono':
        t = Fraction(turn) % 1
        if t >= HALF:
            t -= HALF
            sign = -sign
        items = tuple(sorted((k, v) for k, v in (powers or {}).items() if v))
        return SymMono(sign, t, q, items)

    @staticmethod
    def symbol(name: str) -> 'SymMono':
        if name == "q":
            return SymMono(q=1)
        if name in PHASE_SYMBOLS:
            return SymMono.make(turn=PHASE_SYMBOLS[name])
        return SymMono(powers=((name, 1),))

    def __mul__(self, other: 'SymMono') -> 'SymMono':
        powers = dict(self.powers)
        for k, v in other.powers:
            powers[k] = powers.get(k, 0) + v
        return SymMono.make(self.sign * other.sign, self.turn + other.turn, self.q + other.q, powers)

    def __pow__(self, k: int) -> 'SymMono':
        return SymMono.make(self.sign if k % 2 else 1, self.turn * k, self.q * k,
                            {name: e * k for name, e in self.powers})

    def __neg__(self):
        return SymMono(-self.sign, self.turn, self.q, self.powers)

    def symbols(self) -> Set[str]:
        return {name for name, _ in self.powers}

    def is_pure_q(self) -> bool:
        return not self.powers

    def specialize(self, assignment: Dict[str, Monomial], scale: int = 1) -> Monomial:
        """Substitute Monomials (in q and z) for the free symbols; q itself becomes q^scale."""
        out = Monomial.make(self.sign, self.q * scale, 0, self.turn)
        for name, e in self.powers:
            if name not in assignment:
                raise KeyError(f"symbol {name!r} is not bound")
            out = out * assignment[name] ** e
        return out

    def to_dict(self) -> Dict[str, Any]:
        return {
            'sign': self.sign,
            'turn': str(self.turn),
            'q': self.q,
            'powers': {name: e for name, e in self.powers},
        }

    @staticmethod
    def from_dict(data: Dict[str, Any]) -> 'SymMono':
        return SymMono.make(data['sign'], Fraction(data['turn']), data['q'], data.get('powers', {}))

    def __str__(self):
        parts = []
        if self.turn == Fraction(1, 3):
            parts.append("w")
        elif self.turn == Fraction(1, 6):
            parts.append("-w2")
        elif self.turn == Fraction(1, 4):
            parts.append("I")
        elif self.turn:
            parts.append(f"e({self.turn})")
        for name, e in (("q", self.q),) + self.powers:
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        body = " ".join(parts) or "1"
        if body.startswith("-"):
            return body[1:] if self.sign < 0 else body
        return ("-" if self.sign < 0 else "") + body


ONE_SYM = SymMono()


@dataclass(frozen=True)
class Primitive:
    """One series-valued factor; the last argument is the base unless kind is EULERIAN."""

    kind: PrimitiveKind
    args: Tuple[SymMono, ...]
    n: Optional[int] = None
    name: Optional[str] = None

    @property
    def base(self) -> SymMono:
        return self.args[-1]

    def symbols(self) -> Set[str]:
        out = set()
        for a in self.args:
            out |= a.symbols()
        return out

    def is_series_type(self) -> bool:
        """Appell-type primitives have no product form and cannot be inverted factorwise."""
        return self.kind in (PrimitiveKind.APPELL, PrimitiveKind.DN, PrimitiveKind.SPLIT,
                             PrimitiveKind.G, PrimitiveKind.EULERIAN)

    def to_dict(self) -> Dict[str, Any]:
        out = {'kind': self.kind.value, 'args': [a.to_dict() for a in self.args]}
        if self.n is not None:
            out['n'] = self.n
        if self.name is not None:
            out['name'] = self.name
        return out

    @staticmethod
    def from_dict(data: Dict[str, Any]) -> 'Primitive':
        prim = Primitive(PrimitiveKind(data['kind']), tuple(SymMono.from_dict(a) for a in data['args']),
                         data.get('n'), data.get('name'))
        if prim.kind is not PrimitiveKind.EULERIAN and (prim.base.powers or prim.base.q < 1):
            raise ValueError(f"{prim} has base {prim.base}, not a positive power of q")
        return prim

    def __str__(self):
        a = [str(x) for x in self.args]
        if self.kind is PrimitiveKind.THETA:
            return f"J({a[0]}; {a[1]})"
        if self.kind is PrimitiveKind.POCH:
            return f"P({a[0]}; {a[1]})"
        if self.kind is PrimitiveKind.APPELL:
            return f"m({a[0]}, {a[1]}; {a[2]})"
        if self.kind is PrimitiveKind.DN:
            return f"D{self.n}({a[0]}, {a[1]}, {a[2]}; {a[3]})"
        if self.kind is PrimitiveKind.SPLIT:
            return f"S{self.n}({a[0]}, {a[1]}, {a[2]}; {a[3]})"
        if self.kind is PrimitiveKind.G:
            return f"g({a[0]}; {a[1]})"
        return f"{self.name}({a[0]})"


@dataclass(frozen=True)
class Term:
    scalar: Scalar
    mono: SymMono = ONE_SYM
    factors: Tuple[Tuple[Primitive, int], ...] = ()

    def negated(self) -> 'Term':
        return replace(self, scalar=canon(-self.scalar))

    def symbols(self) -> Set[str]:
        out = self.mono.symbols()
        for prim, _ in self.factors:
            out |= prim.symbols()
        return out

    def to_dict(self) -> Dict[str, Any]:
        re_part, wc_part = scalar_parts(self.scalar)
        return {
            'scalar': {'re': str(re_part), 'wc': str(wc_part)},
            'mono': self.mono.to_dict(),
            'factors': [{'prim': p.to_dict(), 'exp': e} for p, e in self.factors],
        }

    @staticmethod
    def from_dict(data: Dict[str, Any]) -> 'Term':
        s = data['scalar']
        scalar = canon(CycloRational(Fraction(s['re']), Fraction(s['wc'])))
        return Term(scalar, SymMono.from_dict(data['mono']),
                    tuple((Primitive.from_dict(f['prim']), f['exp']) for f in data['factors']))

    def __str__(self):
        parts = []
        if self.scalar != 1:
            parts.append(f"[{self.scalar}]" if isinstance(self.scalar, CycloRational) else str(self.scalar))
        if self.mono != ONE_SYM:
            parts.append(str(self.mono))
        num = [str(p) + (f"^{e}" if e != 1 else "") for p, e in self.factors if e > 0]
        den = [str(p) + (f"^{-e}" if e != -1 else "") for p, e in self.factors if e < 0]
        text = " ".join(parts + num) or "1"
        if den:
            text += " / (" + " ".join(den) + ")"
        return text


@dataclass(frozen=True)
class Expr:
    """Sum of terms; an identity is stored as Expr(LHS - RHS)."""

    terms: Tuple[Term, ...] = field(default_factory=tuple)

    def __sub__(self, other: 'Expr') -> 'Expr':
        return Expr(self.terms + tuple(t.negated() for t in other.terms))

    def symbols(self) -> Set[str]:
        out = set()
        for t in self.terms:
            out |= t.symbols()
        return out

    def to_dict(self) -> Dict[str, Any]:
        return {'terms': [t.to_dict() for t in self.terms]}

    @staticmethod
    def from_dict(data: Dict[str, Any]) -> 'Expr':
        return Expr(tuple(Term.from_dict(t) for t in data['terms']))

    def __str__(self):
        if not self.terms:
            return "0"
        out = str(self.terms[0])
        for t in self.terms[1:]:
            text = str(t)
            out += " - " + text[1:] if text.startswith("-") else " + " + text
        return out


class ExpressionParser:
    """Tokenizes and parses identity text into Expr values."""

    TOKEN_PATTERN = re.compile(r'''
        (?P<SCALAR>\[[^\]]*\])
      | (?P<NUMBER>\d+)
      | (?P<NAME>[A-Za-z][A-Za-z0-9]*)
      | (?P<POW>\^-?\d+)
      | (?P<OP>[-+*/=(),;])
      | (?P<WS>\s+)
      | (?P<ERR>.)
    ''', re.VERBOSE)

    # Calls whose arguments are integers rather than monomials
    ABBREVIATIONS = ("T", "Tb")
    SPLITTING_PATTERN = re.compile(r'^([DS])([234])$')

    def __init__(self):
        self.text = ""
        self.tokens: List[Tuple[str, str, int]] = []
        self.pos = 0

    # Tokens ---------------------------------------------------------------

    def tokenize(self, text: str) -> List[Tuple[str, str, int]]:
        tokens = []
        for match in self.TOKEN_PATTERN.finditer(text):
            kind = match.lastgroup
            if kind == 'WS':
                continue
            if kind == 'ERR':
                raise ExpressionSyntaxError(f"unexpected character {match.group()!r}", text, match.start())
            tokens.append((kind, match.group(), match.start()))
        return tokens

    def _peek(self, offset: int = 0) -> Tuple[str, str, int]:
        i = self.pos + offset
        if i < len(self.tokens):
            return self.tokens[i]
        return ('EOF', '', len(self.text))

    def _next(self) -> Tuple[str, str, int]:
        tok = self._peek()
        self.pos += 1
        return tok

    def _is_op(self, *ops: str) -> bool:
        kind, value, _ = self._peek()
        return kind == 'OP' and value in ops

    def _expect(self, op: str):
        kind, value, at = self._next()
        if kind != 'OP' or value != op:
            self._fail(f"expected {op!r}, found {value or 'end of input'!r}", at)

    def _fail(self, message: str, at: Optional[int] = None):
        if at is None:
            at = self._peek()[2]
        raise ExpressionSyntaxError(message, self.text, at)

    # Grammar --------------------------------------------------------------

    def parse(self, text: str) -> List[Expr]:
        """Parse `A = B [= C ...]` into the sub-identities (each side minus the last)."""
        self.text = text
        self.tokens = self.tokenize(text)
        self.pos = 0
        sides = [self._side()]
        while self._is_op('='):
            self._next()
            sides.append(self._side())
        if self._peek()[0] != 'EOF':
            self._fail(f"unexpected {self._peek()[1]!r}")
        if len(sides) < 2:
            self._fail("an identity needs at least one '='", 0)
        last = sides[-1]
        return [side - last for side in sides[:-1]]

    def _side(self) -> Expr:
        terms = []
        sign = 1
        if self._is_op('-', '+'):
            sign = -1 if self._next()[1] == '-' else 1
        terms.append(self._term(sign))
        while self._is_op('-', '+'):
            sign = -1 if self._next()[1] == '-' else 1
            terms.append(self._term(sign))
        return Expr(tuple(t for t in terms if t.scalar != 0))

    def _term(self, sign: int) -> Term:
        acc = {'scalar': sign, 'mono': ONE_SYM, 'factors': []}
        count = 0
        while not self._at_term_end():
            self._item(acc, 1)
            count += 1
        if count == 0:
            self._fail("expected a term")
        if self._is_op('/'):
            self._next()
            if self._is_op('('):
                self._next()
                inner = 0
                while not self._is_op(')'):
                    if self._peek()[0] == 'EOF':
                        self._fail("unclosed '('")
                    self._item(acc, -1)
                    inner += 1
                self._next()
                if inner == 0:
                    self._fail("empty denominator")
            else:
                self._item(acc, -1)
        return Term(canon(acc['scalar']), acc['mono'], tuple(acc['factors']))

    def _at_term_end(self) -> bool:
        kind, value, _ = self._peek()
        return kind == 'EOF' or (kind == 'OP' and value in '+-=/)')

    def _power(self) -> int:
        if self._peek()[0] == 'POW':
            return int(self._next()[1][1:])
        return 1

    def _item(self, acc: Dict[str, Any], direction: int):
        kind, value, at = self._next()
        if kind == 'OP' and value == '*':
            return
        if kind == 'NUMBER':
            n = int(value)
            acc['scalar'] = acc['scalar'] * n if direction > 0 else acc['scalar'] * cyclo_inv(n)
            return
        if kind == 'SCALAR':
            try:
                s = parse_scalar(value)
            except (ValueError, ZeroDivisionError) as exc:
                self._fail(f"bad scalar {value}: {exc}", at)
            acc['scalar'] = acc['scalar'] * s if direction > 0 else acc['scalar'] * cyclo_inv(s)
            return
        if kind == 'NAME':
            if self._is_op('('):
                prims = self._call(value, at)
                k = self._power() * direction
                acc['factors'].extend((p, k) for p in prims)
                return
            k = self._power() * direction
            acc['mono'] = acc['mono'] * SymMono.symbol(value) ** k
            return
        self._fail(f"unexpected {value or 'end of input'!r}", at)

    def _int(self) -> int:
        sign = 1
        if self._is_op('-'):
            self._next()
            sign = -1
        kind, value, at = self._next()
        if kind != 'NUMBER':
            self._fail("expected an integer", at)
        return sign * int(value)

    def _arg(self) -> SymMono:
        """['-'] atoms ['/' atoms]"""
        mono = ONE_SYM
        if self._is_op('-'):
            self._next()
            mono = -mono
        mono = mono * self._atoms()
        if self._is_op('/'):
            self._next()
            mono = mono * self._atoms() ** -1
        return mono

    def _atoms(self) -> SymMono:
        mono = ONE_SYM
        count = 0
        while True:
            kind, value, at = self._peek()
            if kind == 'NUMBER':
                self._next()
                if value != '1':
                    self._fail("only 1 may appear as a number inside an argument", at)
            elif kind == 'NAME':
                self._next()
                if self._is_op('('):
                    self._fail(f"call {value}(...) is not allowed inside an argument", at)
                mono = mono * SymMono.symbol(value) ** self._power()
            else:
                break
            count += 1
        if count == 0:
            self._fail("expected an argument")
        return mono

    def _base(self) -> SymMono:
        at = self._peek()[2]
        base = self._arg()
        if base.powers or base.q < 1:
            self._fail("a base must be a positive power of q", at)
        return base

    def _args_then_base(self) -> Tuple[List[SymMono], SymMono]:
        args = [self._arg()]
        while self._is_op(','):
            self._next()
            args.append(self._arg())
        self._expect(';')
        base = self._base()
        self._expect(')')
        return args, base

    def _call(self, name: str, at: int) -> List[Primitive]:
        self._expect('(')
        if name in self.ABBREVIATIONS:
            nums = [self._int()]
            while self._is_op(','):
                self._next()
                nums.append(self._int())
            self._expect(')')
            return [self._abbreviation(name, nums, at)]
        if name in EULERIAN_NAMES:
            arg = self._arg()
            self._expect(')')
            if not arg.is_pure_q() or arg.q < 1:
                self._fail(f"{name} takes a pure q argument", at)
            return [Primitive(PrimitiveKind.EULERIAN, (arg,), name=name)]
        args, base = self._args_then_base()
        if name == "J":
            return [Primitive(PrimitiveKind.THETA, (a, base)) for a in args]
        expected = {"P": 1, "m": 2, "g": 1}
        if name in expected:
            if len(args) != expected[name]:
                self._fail(f"{name} takes {expected[name]} argument(s) before ';'", at)
            kind = {"P": PrimitiveKind.POCH, "m": PrimitiveKind.APPELL, "g": PrimitiveKind.G}[name]
            return [Primitive(kind, tuple(args) + (base,))]
        match = self.SPLITTING_PATTERN.match(name)
        if match:
            if len(args) != 3:
                self._fail(f"{name} takes 3 arguments before ';'", at)
            kind = PrimitiveKind.DN if match.group(1) == 'D' else PrimitiveKind.SPLIT
            return [Primitive(kind, tuple(args) + (base,), n=int(match.group(2)))]
        self._fail(f"unknown function {name!r}", at)

    def _abbreviation(self, name: str, nums: List[int], at: int) -> Primitive:
        if name == "T" and len(nums) == 1:
            m = nums[0]
            if m < 1:
                self._fail("T(m) needs m >= 1", at)
            return Primitive(PrimitiveKind.THETA, (SymMono(q=m), SymMono(q=3 * m)))
        if len(nums) != 2 or nums[1] < 1:
            self._fail(f"{name}(a,m) needs two integers with m >= 1", at)
        a, m = nums
        arg = SymMono(q=a) if name == "T" else SymMono(sign=-1, q=a)
        return Primitive(PrimitiveKind.THETA, (arg, SymMono(q=m)))


def parse_identity(text: str) -> List[Expr]:
    return ExpressionParser().parse(text)


def parse_monomial(text: str) -> SymMono:
    """A single argument-style monomial such as '-q z^-5'."""
    parser = ExpressionParser()
    parser.text = text
    parser.tokens = parser.tokenize(text)
    parser.pos = 0
    mono = parser._arg()
    if parser._peek()[0] != 'EOF':
        parser._fail(f"unexpected {parser._peek()[1]!r}")
    return mono
