# Author: Ozy
"""
Identity catalog: every verified identity as a record holding its expression
(LHS - RHS), free-variable roles, specialization suite and provenance.

Records are authored in the expression notation of expr_parser and
serialized to a sorted-key JSON document checked against catalog_schema.json.
"""

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import jsonschema

from errors import CatalogError, ExpressionSyntaxError
from expr_parser import Expr, parse_identity, parse_monomial
from qring import Monomial

SCHEMA_PATH = Path(__file__).parent / "catalog_schema.json"
CATALOG_VERSION = 1

FORMAL = "formal"
BOUND = "bound"
FIELDS = ("Q", "Q(w)")
ENGINES = ("exact", "numeric", "both")

Z_MONO = Monomial(1, 0, 1)

# Families named by the source but not encoded; `list` reports them.
OUT_OF_SCOPE = (
    ("THM-SIXTH-LOST-NOTEBOOK",
     "sixth-order rho, sigma, lambda, mu identities: the functions are cited, never defined"),
)

FAMILY_ORDER = ("TENTH", "MTC", "SIXTH", "G", "HM-COR", "SPLIT", "N2", "N3", "N4", "PRELIM",
                "JLAW", "QUINTUPLE", "PROD", "WEIER", "WR-COR", "ASD-COR", "DN-FE", "TH8")


@dataclass(frozen=True)
class IdentityRecord:
    """One catalog entry; `expr` and `variants` are the sub-identities (each must vanish)."""

    id: str
    family: str
    expr: Expr
    variants: Tuple[Expr, ...] = ()
    free_vars: Tuple[Tuple[str, str], ...] = ()
    spec_suite: Tuple[Tuple[Tuple[str, str], ...], ...] = ((),)
    field: str = "Q"
    engines: str = "both"
    scale: int = 1
    provenance: Tuple[str, str] = ("", "")
    notes: Tuple[str, ...] = ()
    tags: Tuple[str, ...] = ()
    display: Tuple[str, ...] = ()

    def sub_identities(self) -> Tuple[Expr, ...]:
        return (self.expr,) + self.variants

    def formal_var(self) -> Optional[str]:
        for name, role in self.free_vars:
            if role == FORMAL:
                return name
        return None

    def bound_vars(self) -> List[str]:
        return [name for name, role in self.free_vars if role == BOUND]

    def runs_exact(self) -> bool:
        return self.engines in ("exact", "both")

    def runs_numeric(self) -> bool:
        return self.engines in ("numeric", "both")

    def assignment(self, entry: Tuple[Tuple[str, str], ...]) -> Dict[str, Monomial]:
        """Monomials for every free symbol under one suite entry; z is the formal variable."""
        out = {'z': Z_MONO}
        formal = self.formal_var()
        if formal:
            out[formal] = Z_MONO
        for name, text in entry:
            out[name] = parse_monomial(text).specialize({'z': Z_MONO})
        return out

    def to_dict(self) -> Dict[str, Any]:
        return {
            'id': self.id,
            'family': self.family,
            'expr': self.expr.to_dict(),
            'variants': [v.to_dict() for v in self.variants],
            'free_vars': [{'name': n, 'role': r} for n, r in self.free_vars],
            'spec_suite': [{k: v for k, v in entry} for entry in self.spec_suite],
            'field': self.field,
            'engines': self.engines,
            'scale': self.scale,
            'provenance': {'section': self.provenance[0], 'quote': self.provenance[1]},
            'notes': list(self.notes),
            'tags': list(self.tags),
            'display': list(self.display),
        }

    @staticmethod
    def from_dict(data: Dict[str, Any]) -> 'IdentityRecord':
        return IdentityRecord(
            id=data['id'],
            family=data['family'],
            expr=Expr.from_dict(data['expr']),
            variants=tuple(Expr.from_dict(v) for v in data.get('variants', [])),
            free_vars=tuple((v['name'], v['role']) for v in data.get('free_vars', [])),
            spec_suite=tuple(tuple(sorted(entry.items())) for entry in data.get('spec_suite', [{}])),
            field=data['field'],
            engines=data['engines'],
            scale=data.get('scale', 1),
            provenance=(data['provenance']['section'], data['provenance']['quote']),
            notes=tuple(data.get('notes', [])),
            tags=tuple(data.get('tags', [])),
            display=tuple(data.get('display', [])),
        )


def natural_key(record_id: str):
    """Sort key that orders N3-2 before N3-10."""
    return [int(part) if part.isdigit() else part for part in re.split(r'(\d+)', record_id)]


def make_record(rid: str, family: str, texts: Union[str, Sequence[str]], *,
                formal: Optional[str] = None,
                suite: Optional[Sequence[Dict[str, str]]] = None,
                field: str = "Q", engines: str = "both", scale: int = 1,
                section: str = "", quote: str = "",
                notes: Iterable[str] = (), tags: Iterable[str] = ()) -> IdentityRecord:
    """Parse the identity text(s) and check the free-variable bookkeeping."""
    if isinstance(texts, str):
        texts = [texts]
    subs: List[Expr] = []
    for text in texts:
        try:
            subs.extend(parse_identity(text))
        except ExpressionSyntaxError as exc:
            raise CatalogError(str(exc), rid, "expr") from exc
    symbols = set()
    for expr in subs:
        symbols |= expr.symbols()
    suite = list(suite or [{}])
    bound = sorted(symbols - {formal})
    for entry in suite:
        missing = [name for name in bound if name not in entry]
        if missing:
            raise CatalogError(f"suite entry {entry} leaves {missing} unbound", rid, "spec_suite")
    free_vars = tuple(sorted([(formal, FORMAL)] if formal in symbols else [])) + \
        tuple((name, BOUND) for name in bound)
    return IdentityRecord(
        id=rid, family=family, expr=subs[0], variants=tuple(subs[1:]),
        free_vars=free_vars,
        spec_suite=tuple(tuple(sorted(entry.items())) for entry in suite),
        field=field, engines=engines, scale=scale,
        provenance=(section, quote), notes=tuple(notes), tags=tuple(tags),
        display=tuple(texts),
    )


# Catalog content --------------------------------------------------------------

Q_TENTH = r"Letting $\omega$ be a primitive third root"
Q_TENTH_PLAIN = r"and \cite{C3, RLN}"
Q_MTC = "Two of the ten mock theta conjectures then read"
Q_MTC7 = "Hickerson found mock theta conjecture analogs"
Q_SIXTH_RLN = "there is only one relationship like those of the tenth-orders"
Q_SIXTH = "two of Ramanujan's sixth-order mock theta functions"
Q_G_APPELL = "The universal mock theta function can be expressed in terms of Appell functions"
Q_HM = "We already have two examples"
Q_N2 = "families of specializations that yield single quotients"
Q_N2_SPLIT = "We point out the $n=2$ specialization"
Q_N3_SPLIT = "the $n=3$ specialization"
Q_N4 = "a family of specializations that evaluates to a single quotient"
Q_PRELIM = "We will frequently use the following identities without mention"
Q_JLAW = "Also following from the definitions"
Q_QUINT = "is the quintuple product identity"
Q_WEIER = "three-term Weierstrass relation for theta functions then reads"
Q_WR = r"we set $q\to q^6$"
Q_ASD = "We let the left-hand side be $f(z)$"
Q_FE = "several easily shown functional equations"
Q_TH8 = "we have the following theta function identities"
Q_TH8_FORMS = "several ways to write the left-hand"

X_SUITE = [{'x': "q z^2"}, {'x': "z^3"}, {'x': "-q z^-3"}]
U_SUITE = [{'u': "q z^2"}, {'u': "-z^3"}, {'u': "q^2 z^-1"}]
XY_SUITE = [{'x': "q z^2"}, {'x': "-z^3"}, {'x': "q^2 z^-1"}]
SPLIT_SUITES = {
    2: [{'x': "q z^2", 'zp': "q z^3"}, {'x': "z^3", 'zp': "-z^-5"}, {'x': "-q z^-2", 'zp': "q^2 z"}],
    3: [{'x': "q z^2", 'zp': "-q z"}, {'x': "-z^-2", 'zp': "q^2 z"}, {'x': "q^2 z", 'zp': "-z^-1"}],
    4: [{'x': "q z", 'zp': "-q^3 z"}, {'x': "-z^2", 'zp': "q z^-1"}, {'x': "q z^-2", 'zp': "-q^2 z"}],
}
WEIER_SUITE = [
    {'a': "q z^2", 'b': "-z^3", 'c': "q^2 z^-1"},
    {'a': "z^2", 'b': "q z^-1", 'c': "-q z^3"},
    {'a': "-q z", 'b': "z^-2", 'c': "q^3 z^2"},
]

# the bracketed theta-quotient displays for D_2, D_3 and D_4
SPLIT_DEFINITIONS = {
    2: "m(x, z; q) - m(-q x^2, zp; q^4) + q^-1 x m(-q^-1 x^2, zp; q^4)",
    3: ("m(x, z; q) - m(q^3 x^3, zp; q^9) + q^-1 x m(x^3, zp; q^9)"
        " - q^-3 x^2 m(q^-3 x^3, zp; q^9)"),
    4: ("m(x, z; q) - m(-q^6 x^4, zp; q^16) + q^-1 x m(-q^2 x^4, zp; q^16)"
        " - q^-3 x^2 m(-q^-2 x^4, zp; q^16) + q^-6 x^3 m(-q^-6 x^4, zp; q^16)"),
}
SPLIT_DISPLAYS = {
    2: ("zp T(2)^3 J(-q x^2 z zp; q^2) J(z^2 zp^-1; q^4)"
        " / (J(x z; q) J(zp; q^4) J(-q x^2 zp; q^2) J(z; q^2))"
        " - x z zp T(2)^3 J(-q^2 x^2 z zp; q^2) J(q^2 z^2 zp^-1; q^4)"
        " / (J(x z; q) J(zp; q^4) J(-q x^2 zp; q^2) J(q z; q^2))"),
    3: ("zp z^-1 T(3)^3 J(x^3 z zp; q^3) J(z^3 zp^-1; q^9)"
        " / (J(x z; q) J(zp; q^9) J(x^3 zp; q^3) J(z; q^3))"
        " - q^-1 x zp T(3)^3 J(q x^3 z zp; q^3) J(q^3 z^3 zp^-1; q^9)"
        " / (J(x z; q) J(zp; q^9) J(x^3 zp; q^3) J(q z; q^3))"
        " + q^-1 x^2 z zp T(3)^3 J(q^2 x^3 z zp; q^3) J(q^6 z^3 zp^-1; q^9)"
        " / (J(x z; q) J(zp; q^9) J(x^3 zp; q^3) J(q^2 z; q^3))"),
    4: ("zp T(4)^3 J(-q^6 x^4 z zp; q^4) J(z^4 zp^-1; q^16)"
        " / (J(x z; q) J(zp; q^16) J(-q^6 x^4 zp; q^4) J(z; q^4))"
        " - x z zp T(4)^3 J(-q^7 x^4 z zp; q^4) J(q^4 z^4 zp^-1; q^16)"
        " / (J(x z; q) J(zp; q^16) J(-q^6 x^4 zp; q^4) J(q z; q^4))"
        " + q x^2 z^2 zp T(4)^3 J(-q^8 x^4 z zp; q^4) J(q^8 z^4 zp^-1; q^16)"
        " / (J(x z; q) J(zp; q^16) J(-q^6 x^4 zp; q^4) J(q^2 z; q^4))"
        " - q^3 x^3 z^3 zp T(4)^3 J(-q^9 x^4 z zp; q^4) J(q^12 z^4 zp^-1; q^16)"
        " / (J(x z; q) J(zp; q^16) J(-q^6 x^4 zp; q^4) J(q^3 z; q^4))"),
}

TENTH = [
    ("phi10(q^9) stands against psi10 at w q and w2 q",
     "q^2 phi10(q^9) + [1/3,2/3] psi10(w q) - [1/3,2/3] psi10(w2 q)"
     " = - q T(1,2) T(3,15) T(6) / (T(3,6) T(3))"),
    ("psi10(q^9) stands against phi10 at w q and w2 q",
     "q^-2 psi10(q^9) + [2/3,1/3] phi10(w q) - [-1/3,1/3] phi10(w2 q)"
     " = T(1,2) T(6,15) T(6) / (T(3,6) T(3))"),
    ("X10(q^9) stands against chi10 at w q and w2 q",
     "X10(q^9) - [2/3,1/3] chi10(w q) + [-1/3,1/3] chi10(w2 q)"
     " = Tb(1,4) T(18,30) T(3) / (Tb(3,12) T(6))"),
    ("chi10(q^9) stands against X10 at w q and w2 q",
     "chi10(q^9) + [-1/3,-2/3] q^2 X10(w q) - [-1/3,-2/3] q^2 X10(w2 q)"
     " = - q^3 Tb(1,4) T(6,30) T(3) / (Tb(3,12) T(6))"),
    ("phi10, psi10 and chi10 with a negative base",
     "phi10(q) - q^-1 psi10(-q^4) + q^-2 chi10(q^8) = Tb(1,2) J(-q^2; -q^10) / T(2,8)"),
    ("psi10, phi10 and X10 with a negative base",
     "psi10(q) + q phi10(-q^4) + X10(q^8) = Tb(1,2) J(-q^6; -q^10) / T(2,8)"),
]

N2 = [
    ("D2(x, z, z^2; q) = - x z^3 T(2)^3 J(-q^2 x^2 z^3; q^2) J(q^2; q^4)"
     " / (J(x z; q) J(z^2; q^4) J(-q x^2 z^2; q^2) J(q z; q^2))", X_SUITE, ()),
    ("D2(x, z, z^4; q) = - T(2) T(4) J(-x z^2, -x z^3; q)"
     " / (x J(x z; q) J(z^4; q^4) J(-q x^2 z^4; q^2))", X_SUITE, ()),
    ("D2(x, z, x^-1; q) = - z T(1)^3 J(-q x z^2; q^2) / (J(x z; q) J(-q x; q^2) J(z; q))",
     X_SUITE, ()),
    ("D2(x, z, x^-2; q) = - T(1)^3 J(-x z^2; q^2) / (J(x z; q) J(-x; q^2) J(z; q))",
     X_SUITE, ()),
    ("D2(u^3, z, u^-4; q) = - T(2) T(4) J(-u^2 z, u, -z u; q)"
     " / (J(u^3 z; q) J(u^4; q^4) J(-q u^2; q^2) J(z; q))", U_SUITE, ()),
    ("D2(q z^-2, z, z^3; q^3) = - q^-1 z^2 T(3)^4 T(6) J(z; q^4)"
     " / (T(1) J(q^2 z; q^3) J(z^3; q^12) J(-q z; q^6) J(z; q^3))", None, ()),
    ("D2(q^2 z^-2, z, z^3; q^3) = - q^-1 z T(3)^4 T(6) J(z; q^4)"
     " / (T(1) J(q z; q^3) J(z^3; q^12) J(-q^5 z; q^6) J(z; q^3))", None, ()),
    ("D2(x, z, -q x^-2 z^-2; q) = - x^-1 T(2)^3 J(-x z^2; q)"
     " / (J(x z; q) J(-q^3 x^2 z^2; q^4) J(z^2; q^2))", X_SUITE, ()),
]

N3 = [
    ("D3(z^-4, z, q^3 z^9; q) = D3(z^-4, z^3, q^3 z^9; q) = z^5 T(1) T(3)^4"
     " / (J(z; q) J(z^3; q^3) J(q^2 z^3; q^3) J(q^3 z^9; q^9))", 'z', ()),
    ("D3(z^-4, z, q^6 z^9; q) = D3(z^-4, z^3, q^6 z^9; q) = z^3 T(1) T(3)^4"
     " / (J(z; q) J(z^3; q^3) J(q z^3; q^3) J(q^6 z^9; q^9))", 'z', ()),
    ("D3(u^-5, u^2, q^3 u^9; q) = D3(u^-5, u^3, q^3 u^9; q) = u^7 T(1) T(3)^4"
     " / (J(u; q) J(u^6; q^3) J(q^2 u^3; q^3) J(q^3 u^9; q^9))", 'u', ()),
    ("D3(u^-5, u^2, q^6 u^9; q) = D3(u^-5, u^3, q^6 u^9; q) = u^5 T(1) T(3)^4"
     " / (J(u; q) J(u^6; q^3) J(q u^3; q^3) J(q^6 u^9; q^9))", 'u', ()),
    ("D3(q z^-4, z, z^9; q^2) = D3(q z^-4, q z^3, z^9; q^2) = - q^-1 z^4 T(2)^2 J(q^3; q^18) J(-z; q)"
     " / (T(1) J(q z^3; q^2) J(z^9; q^18))", 'z', ()),
    ("D3(x, q, q^3 x^-3; q^2) = D3(x, q^-1 x^-1, q^3 x^-3; q^2) = - x^-1 T(6)^3 J(x; q^2) J(q^4 x^2; q^6)"
     " / (T(3) J(x; q) J(q^2 x; q^6) J(q^3 x^-3; q^18))", 'x',
     ("there is no companion among the additional theta identities",)),
    ("D3(q z^-2, z, z^3; q^2) = D3(q z^-2, q z, z^3; q^2) = - q^-1 z T(3) T(6)^2 J(q z; q^2) J(z^2; q^6)"
     " / (J(z; q) J(q^3 z; q^6) J(q^3 z^3; q^6) J(z^3; q^18))", 'z', ()),
    ("D3(x, q, q^9; q^2) = D3(x, q x^-1, q^9; q^2) = - q x^-1 J(-q; q^4) T(3) T(6)^2 J(x^2; q)"
     " / (J(q^9; q^18) J(x; q) J(q x^2; q^2) J(q^3 x^3; q^6))", 'x',
     ("the display ends without sentence punctuation",)),
    ("D3(q z^-3, z, q^9 z^6; q^2) = D3(q z^-3, q z^2, q^9 z^6; q^2) = - z J(-q; q^4) T(3) T(6)^2 J(z^2; q^3)"
     " / (J(q z^2; q^2) J(z; q^3) J(z^3; q^6) J(q^9 z^6; q^18))", 'z', ()),
    ("D3(q u^-5, u^3, u^9; q^2) = D3(q u^-5, q u^2, u^9; q^2)"
     " = - q^-1 u^4 T(1) T(2) T(6)^3 J(u^2; q) J(u^3; q^6)"
     " / (T(3) J(u; q) J(q u^2; q^2) J(q^3 u^6; q^6) J(u^3; q^2) J(u^9; q^18))", 'u',
     ("a stray infinite-product subscript on Theta(u^3; q^6) is read as the theta function",)),
    ("D3(q z^-4, z, q^9 z^9; q^2) = D3(q z^-4, q z^3, q^9 z^9; q^2)"
     " = - z T(1) T(2) T(6)^3 J(z^2; q) J(q^3 z^3; q^6)"
     " / (T(3) J(z; q) J(q z^2; q^2) J(z^3; q^6) J(q z^3; q^2) J(q^9 z^9; q^18))", 'z', ()),
]

PRELIM = [
    "Tb(0,1) = 2 Tb(1,4) = 2 T(2)^2 / T(1)",
    "Tb(1,2) = T(2)^5 / (T(1)^2 T(4)^2)",
    "T(1,2) = T(1)^2 / T(2)",
    "Tb(1,3) = T(2) T(3)^2 / (T(1) T(6))",
    "T(1,4) = T(1) T(4) / T(2)",
    "T(1,6) = T(1) T(6)^2 / (T(2) T(3))",
    "Tb(1,6) = T(2)^2 T(3) T(12) / (T(1) T(4) T(6))",
]

TH8 = [
    ("TH8A-1", 'z', "z J(z^2; q^3) J(q^3 z^6; q^9) / J(z; q^3) + q J(q^2 z^2; q^3) J(z^6; q^9) / J(q z; q^3)"
     " + z^3 J(q z^2; q^3) J(q^6 z^6; q^9) / J(q^2 z; q^3)"
     " = z T(1) T(3) J(z^3; q) / (J(z; q) J(q^2 z^3; q^3))"),
    ("TH8A-2", 'z', "z^4 J(z^2; q^3) J(q^6 z^6; q^9) / J(z; q^3) + z^3 J(q^2 z^2; q^3) J(q^3 z^6; q^9) / J(q z; q^3)"
     " - q J(q z^2; q^3) J(z^6; q^9) / J(q^2 z; q^3)"
     " = z^3 T(1) T(3) J(z^3; q) / (J(z; q) J(q z^3; q^3))"),
    ("TH8A-3", 'u', "J(u^4; q^3) J(q^3 u^3; q^9) / J(u^2; q^3) + u q J(q^2 u^4; q^3) J(u^3; q^9) / J(q u^2; q^3)"
     " + u J(q u^4; q^3) J(q^6 u^3; q^9) / J(q^2 u^2; q^3)"
     " = T(1) T(3) J(u^3; q) / (J(u; q) J(q^2 u^3; q^3))"),
    ("TH8A-4", 'u', "u^2 J(u^4; q^3) J(q^6 u^3; q^9) / J(u^2; q^3) + u^3 J(q^2 u^4; q^3) J(q^3 u^3; q^9) / J(q u^2; q^3)"
     " - q J(q u^4; q^3) J(u^3; q^9) / J(q^2 u^2; q^3)"
     " = u^2 T(1) T(3) J(u^3; q) / (J(u; q) J(q u^3; q^3))"),
    ("TH8A-5", 'z', "q J(q^3 z^2; q^6) J(z^6; q^18) / J(z; q^6) + z^3 J(q z^2; q^6) J(q^12 z^6; q^18) / J(q^2 z; q^6)"
     " + z^2 J(q^5 z^2; q^6) J(q^6 z^6; q^18) / J(q^4 z; q^6)"
     " = z^2 T(2)^2 J(q^3; q^18) J(-z; q) J(q^3 z^3; q^6) / (T(1) T(6)^3)"),
    ("TH8B-1", 'z', "z J(q^2 z^2; q^6) J(q^3; q^18) / J(q z; q^6) - J(z^2; q^6) J(q^9; q^18) / J(q^3 z; q^6)"
     " - z J(q^4 z^2; q^6) J(q^3; q^18) / J(q^5 z; q^6)"
     " = - T(3) T(2)^2 J(z^2; q^6) / (J(q^3 z; q^6) T(6) T(1))"),
    ("TH8B-2", 'x', "J(q^4 x^2; q^6) J(q^6 x^3; q^18) / J(q^5 x; q^6)"
     " + q^3 x^-2 J(x^2; q^6) J(x^3; q^18) / J(q^3 x; q^6)"
     " + x J(q^2 x^2; q^6) J(q^12 x^3; q^18) / J(q x; q^6)"
     " = T(3) J(-x; q) / T(6)"),
    ("TH8B-3", 'z', "J(z^2; q^6) J(q^9 z^3; q^18) / J(z; q^6) + q J(q^4 z^2; q^6) J(q^3 z^3; q^18) / J(q^2 z; q^6)"
     " + q z J(q^2 z^2; q^6) J(q^15 z^3; q^18) / J(q^4 z; q^6)"
     " = J(-q; q^4) T(3) J(z^2; q^3) / (J(z; q^3) T(6))"),
    ("TH8B-4", 'u', "- u^3 J(q^2 u^4; q^6) J(q^15 u^3; q^18) / J(q u^2; q^6) + J(u^4; q^6) J(q^9 u^3; q^18) / J(q^3 u^2; q^6)"
     " + u J(q^4 u^4; q^6) J(q^3 u^3; q^18) / J(q^5 u^2; q^6)"
     " = J(-u; q) J(u^3; q^6) / T(3)"),
    ("TH8B-5", 'z', "J(z^2; q^6) J(q^9 z^6; q^18) / J(z; q^6) + q z^-1 J(q^4 z^2; q^6) J(q^3 z^6; q^18) / J(q^2 z; q^6)"
     " + q z^2 J(q^2 z^2; q^6) J(q^15 z^6; q^18) / J(q^4 z; q^6)"
     " = J(-z; q) J(q^3 z^3; q^6) / T(3)"),
    ("TH8C-1", 'z', "- q z^-3 J(-q^2 z^3; q^4) J(z^12; q^16) / J(z; q^4)"
     " + z^5 J(-q z^3; q^4) J(q^12 z^12; q^16) / J(q z; q^4)"
     " + z J(-z^3; q^4) J(q^8 z^12; q^16) / J(q^2 z; q^4)"
     " + J(-q^3 z^3; q^4) J(q^4 z^12; q^16) / J(q^3 z; q^4)"
     " = T(1) T(16) J(-z^4; q^2) J(q z^2; q^2) J(-z; q) / (T(8) T(2)^3)"),
]


def _fe_texts(template: str) -> List[str]:
    """Instantiate a D_n functional equation at n = 2 and n = 3."""
    return [template.format(n=n, sq=n * n) for n in (2, 3)]


def build_catalog() -> List[IdentityRecord]:
    """Every encoded identity, in natural id order."""
    records: List[IdentityRecord] = []
    add = records.append

    for i, (note, text) in enumerate(TENTH, start=1):
        omega = i <= 4
        add(make_record(
            f"TENTH-{i}", "TENTH", text, field="Q(w)" if omega else "Q",
            section="introduction, tenth-order identities" + (" with a cube root of unity" if omega else ""),
            quote=Q_TENTH if omega else Q_TENTH_PLAIN, notes=(note,),
            tags=("eulerian", "omega-combination") if omega else ("eulerian", "negative-base")))

    add(make_record("MTC-F0", "MTC", "f0(q) = T(5,10) T(2,5) / T(1) - 2 q^2 g(q^2; q^10)",
                    section="introduction, fifth-order mock theta conjectures", quote=Q_MTC,
                    tags=("eulerian", "universal-g")))
    add(make_record("MTC-F1", "MTC", "f1(q) = T(5,10) T(1,5) / T(1) - 2 q^3 g(q^4; q^10)",
                    section="introduction, fifth-order mock theta conjectures", quote=Q_MTC,
                    notes=("the source writes J_1 in the denominator; every sibling display uses Theta_1",),
                    tags=("eulerian", "universal-g")))
    add(make_record("MTC7-F0", "MTC", "F0(q) = 2 + 2 q g(q; q^7) - T(3,7)^2 / T(1)",
                    section="introduction, seventh-order analog", quote=Q_MTC7,
                    tags=("eulerian", "universal-g")))

    add(make_record("SIXTH-RLN", "SIXTH",
                    "phi6(q^9) - psi6(q) - q^-3 psi6(q^9) = Tb(3,12) T(6)^2 / (Tb(1,4) Tb(9,36))",
                    section="introduction, sixth-order relation", quote=Q_SIXTH_RLN, tags=("eulerian",)))
    add(make_record("SIXTH-APPELL-PHI", "SIXTH", "phi6(q) = 2 m(q, -1; q^3)",
                    section="introduction, sixth-order Appell forms", quote=Q_SIXTH,
                    tags=("eulerian", "appell")))
    add(make_record("SIXTH-APPELL-PSI", "SIXTH", "psi6(q) = m(1, -q; q^3)",
                    section="introduction, sixth-order Appell forms", quote=Q_SIXTH,
                    tags=("eulerian", "appell")))

    add(make_record("G-APPELL", "G",
                    "g(x; q) = - x^-1 m(q^2 x^-3, x^2; q^3) - x^-2 m(q x^-3, x^2; q^3)",
                    formal='x', section="introduction, universal mock theta function", quote=Q_G_APPELL,
                    tags=("universal-g", "appell")))
    add(make_record("G-RLN-1", "G",
                    "g(x; q) = - x^-1 + q x^-3 g(-q x^-2; q^4) - q g(-q x^2; q^4)"
                    " + T(2)^5 / (x T(4)^2 J(x; q) J(-q x^2; q^2))",
                    suite=[{'x': "q z"}], scale=2,
                    section="introduction, lost-notebook identities for g",
                    quote="resembles a special case of Theorem",
                    notes=("q is replaced by q^2 and x by q z so every exponent stays integral",),
                    tags=("universal-g", "base-scaled")))
    add(make_record("G-RLN-2", "G",
                    "g(x; q) + g(-x; q) = - 2 q g(-q x^2; q^4)"
                    " + 2 T(2)^5 / (T(1)^2 J(-q x^2; q^4) J(x^2; q^2))",
                    suite=[{'x': "q z"}], scale=2,
                    section="introduction, lost-notebook identities for g",
                    quote="where one sums Appell functions over roots of unity",
                    notes=("q is replaced by q^2 and x by q z so every exponent stays integral",),
                    tags=("universal-g", "base-scaled")))

    add(make_record("HM-COR-D2", "HM-COR",
                    "D2(x, z, z^4; q) = D2(x, x^-1 z^-1, z^4; q) = - T(2) T(4) J(-x z^2, -x z^3; q)"
                    " / (x J(x z; q) J(z^4; q^4) J(-q x^2 z^4; q^2))",
                    formal='z', suite=X_SUITE, section="introduction, quoted closed forms", quote=Q_HM,
                    tags=("splitting",)))
    add(make_record("HM-COR-D3", "HM-COR",
                    "D3(x, -1, -1; q) = D3(x, -x^-1, -1; q) = x T(1) T(3)^2 T(6) T(9) J(q x^2; q^2)"
                    " / (2 q T(2)^2 T(18)^2 J(-x^3; q^3))",
                    formal='x', section="introduction, quoted closed forms", quote=Q_HM,
                    notes=("the middle member is printed as D_2(x, x^-1, -1; q); read as D_3(x, -x^-1, -1; q),"
                           " the image of D_3(x, -1, -1; q) under z -> x^-1 z^-1",),
                    tags=("splitting",)))

    for n, quote in ((2, Q_N2_SPLIT), (3, Q_N3_SPLIT), (4, Q_N4)):
        add(make_record(
            f"N{n}-SPLIT", "SPLIT",
            f"D{n}(x, z, zp; q) = {SPLIT_DEFINITIONS[n]} = {SPLIT_DISPLAYS[n]} = S{n}(x, z, zp; q)",
            formal='z', suite=SPLIT_SUITES[n], section=f"n={n} splitting corollary", quote=quote,
            tags=("splitting", "appell")))

    for i, (text, suite, notes) in enumerate(N2, start=1):
        add(make_record(f"N2-{i}", "N2", text, formal='z', suite=suite,
                        section="n=2 specializations theorem", quote=Q_N2, notes=notes,
                        tags=("splitting",)))

    for i, (text, var, notes) in enumerate(N3, start=1):
        add(make_record(f"N3-{i}", "N3", text, formal=var,
                        section="n=3 specializations theorem", quote=Q_N3_SPLIT, notes=notes,
                        tags=("splitting", "two-forms")))

    add(make_record("N4-1", "N4",
                    "D4(-z^-5, z, z^16; q) = D4(-z^-5, -z^4, z^16; q) = q^-1 z^10 T(1) T(4)^3 T(16) J(z^2; q)"
                    " / (T(8) J(z; q) J(-q z^4; q^2) J(-q^2 z^4; q^4) J(z^16; q^16))",
                    formal='z', section="n=4 specialization theorem", quote=Q_N4,
                    tags=("splitting", "two-forms")))

    for i, text in enumerate(PRELIM, start=1):
        add(make_record(f"PRELIM-{i}", "PRELIM", text,
                        section="preliminaries, shorthand product identities", quote=Q_PRELIM,
                        tags=("theta",)))

    add(make_record("JLAW-ELLIPTIC", "JLAW", [
        "J(q^-3 x; q) = - q^-6 x^3 J(x; q)",
        "J(q^-2 x; q) = q^-3 x^2 J(x; q)",
        "J(q^-1 x; q) = - q^-1 x J(x; q)",
        "J(q x; q) = - x^-1 J(x; q)",
        "J(q^2 x; q) = q^-1 x^-2 J(x; q)",
        "J(q^3 x; q) = - q^-3 x^-3 J(x; q)",
    ], formal='x', section="preliminaries, theta transformation laws", quote=Q_JLAW,
        notes=("the shift n = 0 is the trivial identity and is not encoded",), tags=("theta",)))
    add(make_record("JLAW-FLIP", "JLAW", "J(x; q) = J(q x^-1; q)", formal='x',
                    section="preliminaries, theta transformation laws", quote=Q_JLAW, tags=("theta",)))
    add(make_record("JLAW-MOD", "JLAW", [
        "J(x; q) = T(1) J(x, q x; q^2) / T(2)^2",
        "J(x; q) = T(1) J(x, q x, q^2 x; q^3) / T(3)^3",
    ], formal='x', section="preliminaries, theta transformation laws", quote=Q_JLAW, tags=("theta",)))
    add(make_record("JLAW-SPLIT", "JLAW", [
        "J(x; q) = J(-q x^2; q^4) - x J(-q^3 x^2; q^4)",
        "J(x; q) = J(q^3 x^3; q^9) - x J(q^6 x^3; q^9) + q x^2 J(q^9 x^3; q^9)",
    ], formal='x', section="preliminaries, theta transformation laws", quote=Q_JLAW, tags=("theta",)))
    add(make_record("JLAW-ROOTS", "JLAW", [
        "J(x^2; q^2) = T(2) J(x, -x; q) / T(1)^2",
        "J(x^3; q^3) = T(3) J(x, w x, w2 x; q) / T(1)^3",
        "J(x^4; q^4) = T(4) J(x, I x, -x, -I x; q) / T(1)^4",
    ], formal='x', field="Q(w)", section="preliminaries, theta transformation laws", quote=Q_JLAW,
        notes=("the n = 4 member needs i and is checked by the numeric engine only",
               "the source displays the right-hand sides with base q^n; the law holds with base q"),
        tags=("theta", "roots-of-unity")))

    add(make_record("QUINTUPLE-A", "QUINTUPLE",
                    "J(q x^3; q^3) + x J(q^2 x^3; q^3) = J(-x; q) J(q x^2; q^2) / T(2)",
                    formal='x', section="preliminaries, product propositions", quote=Q_QUINT, tags=("theta",)))
    add(make_record("QUINTUPLE-B", "QUINTUPLE",
                    "J(q x^3; q^3) + x J(q^2 x^3; q^3) = T(1) J(x^2; q) / J(x; q)",
                    formal='x', section="preliminaries, product propositions", quote=Q_QUINT, tags=("theta",)))
    add(make_record("PROD-1", "PROD",
                    "J(x, y; q) = J(-x y, -q x^-1 y; q^2) - x J(-q x y, -x^-1 y; q^2)",
                    formal='y', suite=XY_SUITE, section="preliminaries, product propositions",
                    quote=Q_QUINT, tags=("theta",)))
    add(make_record("PROD-2A", "PROD",
                    "J(-x, y; q) - J(x, -y; q) = 2 x J(x^-1 y, q x y; q^2)",
                    formal='y', suite=XY_SUITE, section="preliminaries, product propositions",
                    quote=Q_QUINT, tags=("theta",)))
    add(make_record("PROD-2B", "PROD",
                    "J(-x, y; q) + J(x, -y; q) = 2 J(x y, q x^-1 y; q^2)",
                    formal='y', suite=XY_SUITE, section="preliminaries, product propositions",
                    quote=Q_QUINT, tags=("theta",)))

    add(make_record("WEIER", "WEIER",
                    "J(a c, a c^-1, b d, b d^-1; q) = J(a d, a d^-1, b c, b c^-1; q)"
                    " + b c^-1 J(a b, a b^-1, c d, c d^-1; q)",
                    formal='d', suite=WEIER_SUITE, section="preliminaries, Weierstrass relation",
                    quote=Q_WEIER, tags=("theta",)))
    add(make_record("WR-COR-1", "WR-COR",
                    "J(q^2, z^2, q z, q z^-1; q^6) = J(q z^2, q, q^2 z^-1, z; q^6)"
                    " + z J(q^2 z, z, q, q z^-2; q^6)",
                    formal='z', section="preliminaries, Weierstrass corollaries", quote=Q_WR, tags=("theta",)))
    add(make_record("WR-COR-2", "WR-COR",
                    "J(q^5 z^-1, q^3 z, q z^2, q; q^6) = J(q^4 z, q^4 z^-1, q^2, z^2; q^6)"
                    " + z^2 J(q^5 z, q^3 z^-1, q, q z^-2; q^6)",
                    formal='z', section="preliminaries, Weierstrass corollaries", quote=Q_WR, tags=("theta",)))
    add(make_record("ASD-COR-1", "ASD-COR",
                    "J(-q^2; q^6) J(q^6 z; q^12) J(z; q^6) + q J(-q; q^6) J(z; q^12) J(q^3 z; q^6)"
                    " - J(z; q^4) T(3)^3 / T(1) = 0",
                    formal='z', section="preliminaries, annulus zero-counting corollary", quote=Q_ASD,
                    tags=("theta",)))

    fe_section = "preliminaries, D_n functional equations"
    fe = [
        ("DN-FE-1", "D{n}(x, z, zp; q) = D{n}(x, q z, zp; q)"),
        ("DN-FE-2", "D{n}(x, z, zp; q) = D{n}(x, x^-1 z^-1, zp; q)"),
        ("DN-FE-3", "D{n}(x, z, zp; q) = D{n}(x, z, q^{sq} zp; q)"),
        ("DN-FE-4", "D{n}(x, x^-1 z^-1, zp; q) = D{n}(x, z, q^{sq} zp; q)"),
        ("DN-FE-THETA", "J(x; q) D{n}(x, z, zp; q) = J(q x; q) D{n}(q x, z, zp; q)"),
    ]
    for rid, template in fe:
        notes = ("the middle equality of the chained display",) if rid == "DN-FE-4" else ()
        add(make_record(rid, "DN-FE", _fe_texts(template), formal='z', suite=SPLIT_SUITES[2],
                        section=fe_section, quote=Q_FE, notes=notes, tags=("functional-equation",)))

    for rid, var, text in TH8:
        add(make_record(rid, "TH8", text, formal=var, section="additional theta function identities",
                        quote=Q_TH8_FORMS if rid.startswith("TH8B") else Q_TH8, tags=("theta",)))

    return sorted(records, key=lambda r: natural_key(r.id))


# Lookup and filtering -------------------------------------------------------

def lookup(records: Sequence[IdentityRecord], record_id: str) -> IdentityRecord:
    for record in records:
        if record.id == record_id:
            return record
    raise KeyError(f"unknown identity id: {record_id}")


def filter_records(records: Sequence[IdentityRecord], family: Optional[str] = None,
                   tag: Optional[str] = None) -> List[IdentityRecord]:
    if family is not None and family not in FAMILY_ORDER:
        raise ValueError(f"unknown family: {family}")
    out = list(records)
    if family is not None:
        out = [r for r in out if r.family == family]
    if tag is not None:
        if not any(tag in r.tags for r in records):
            raise ValueError(f"unknown tag: {tag}")
        out = [r for r in out if tag in r.tags]
    return out


# Serialization ----------------------------------------------------------------

_schema_cache: Dict[str, Any] = {}


def load_schema(path: Path = SCHEMA_PATH) -> Dict[str, Any]:
    key = str(path)
    if key not in _schema_cache:
        with open(path, 'r', encoding='utf-8') as f:
            _schema_cache[key] = json.load(f)
    return _schema_cache[key]


def catalog_document(records: Sequence[IdentityRecord]) -> Dict[str, Any]:
    ordered = sorted(records, key=lambda r: natural_key(r.id))
    return {'catalog_version': CATALOG_VERSION, 'records': [r.to_dict() for r in ordered]}


def serialize(records: Sequence[IdentityRecord]) -> str:
    """Deterministic UTF-8 JSON: sorted keys, records in id order, trailing newline."""
    return json.dumps(catalog_document(records), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _error_path(error: jsonschema.ValidationError) -> Tuple[str, list]:
    path = list(error.absolute_path)
    return ".".join(str(p) for p in path) or "<root>", path


def parse(text: str) -> List[IdentityRecord]:
    """Inverse of serialize; schema violations raise CatalogError with the record id and field path."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    try:
        jsonschema.validate(instance=data, schema=load_schema())
    except jsonschema.ValidationError as exc:
        field_path, path = _error_path(exc)
        record_id = None
        if len(path) >= 2 and path[0] == 'records' and isinstance(path[1], int):
            try:
                record_id = data['records'][path[1]].get('id')
            except (IndexError, AttributeError):
                record_id = None
        raise CatalogError(exc.message, record_id, field_path) from exc
    records = []
    seen = set()
    for item in data['records']:
        try:
            record = IdentityRecord.from_dict(item)
        except (KeyError, ValueError) as exc:
            raise CatalogError(f"malformed record: {exc}", item.get('id')) from exc
        if record.id in seen:
            raise CatalogError("duplicate id", record.id, "id")
        seen.add(record.id)
        records.append(record)
    return records


def save_catalog(records: Sequence[IdentityRecord], path: str) -> None:
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(serialize(records))


def load_catalog(path: str) -> List[IdentityRecord]:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as exc:
        raise CatalogError(f"cannot read catalog {path}: {exc.strerror or exc}") from exc
    return parse(text)
