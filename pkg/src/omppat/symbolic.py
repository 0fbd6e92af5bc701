"""Integer polynomials over program atoms.

A :class:`Poly` is a canonical sum of integer-weighted monomials, where each
atom is the printed text of an expression the algebra does not decompose
(a scalar name, an array element such as ``grid_points[2]``, a call...).
Structural equality of two Polys is equality after constant folding and term
sorting, which is all the symbolic comparison the analyses rely on.
"""

from __future__ import annotations

from functools import lru_cache

from .frontend import nodes as n
from .frontend.printer import format_expr


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    # construction ---------------------------------------------------------

    @classmethod
    def const(cls, value: int) -> "Poly":
        return cls({(): int(value)})

    @classmethod
    def atom(cls, name: str) -> "Poly":
        return cls({(name,): 1})

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = _lift(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return Poly(terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        terms = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(sorted(k1 + k2))
                terms[k] = terms.get(k, 0) + v1 * v2
        return Poly(terms)

    __rmul__ = __mul__

    def exact_div(self, d: int):
        """Divide by an integer when every coefficient is divisible, else None."""
        if d == 0 or any(v % d for v in self.terms.values()):
            return None
        return Poly({k: v // d for k, v in self.terms.items()})

    # inspection -----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(other)
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_const(self):
        return all(k == () for k in self.terms)

    def constant(self):
        """The value when the polynomial has no atoms, else None."""
        if self.is_const():
            return self.terms.get((), 0)
        return None

    @property
    def const_term(self):
        return self.terms.get((), 0)

    def atoms(self):
        return {a for k in self.terms for a in k}

    def degree(self):
        return max((len(k) for k in self.terms), default=0)

    def coeff(self, atom):
        """Coefficient of the linear term ``atom`` (0 if absent)."""
        return self.terms.get((atom,), 0)

    def without(self, atoms):
        """Terms that do not mention any of ``atoms``."""
        atoms = set(atoms)
        return Poly({k: v for k, v in self.terms.items() if not atoms.intersection(k)})

    def substitute(self, atom, value: "Poly"):
        out = Poly()
        for k, v in self.terms.items():
            term = Poly.const(v)
            for a in k:
                term = term * (value if a == atom else Poly.atom(a))
            out = out + term
        return out

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (-len(kv[0]), kv[0]))

    def __repr__(self):
        return f"Poly({self.to_c()})"

    # rendering ------------------------------------------------------------

    def to_expr(self) -> n.Expr:
        result = None
        for mono, coeff in self.sorted_terms():
            mag = abs(coeff)
            factors = [_atom_expr(a) for a in mono]
            if not factors:
                term = n.Const(str(mag))
            else:
                term = factors[0]
                for f in factors[1:]:
                    term = n.Binary("*", term, f)
                if mag != 1:
                    term = n.Binary("*", n.Const(str(mag)), term) if len(factors) == 1 else _prepend(mag, factors)
            if result is None:
                result = n.Unary("-", term) if coeff < 0 else term
            else:
                result = n.Binary("-" if coeff < 0 else "+", result, term)
        return result if result is not None else n.Const("0")

    def to_c(self) -> str:
        return format_expr(self.to_expr())


def _prepend(mag, factors):
    term = n.Binary("*", n.Const(str(mag)), factors[0])
    for f in factors[1:]:
        term = n.Binary("*", term, f)
    return term


def _lift(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, int):
        return Poly.const(x)
    raise TypeError(f"cannot lift {type(x).__name__} to Poly")


@lru_cache(maxsize=4096)
def _parse_atom(text):
    from .frontend.parser import parse_expression

    return parse_expression(text)


def _atom_expr(text):
    import copy

    return copy.deepcopy(_parse_atom(text))


def to_poly(e: n.Expr, env=None) -> Poly:
    """Lower an expression to a Poly, turning undecomposable parts into atoms.

    ``env`` optionally maps names to Polys (used to substitute loop bounds).
    """
    if isinstance(e, n.Const) and e.kind == "int":
        return Poly.const(e.value)
    if isinstance(e, n.Id):
        if env and e.name in env:
            return env[e.name]
        return Poly.atom(e.name)
    if isinstance(e, n.Unary) and e.op in ("-", "+"):
        p = to_poly(e.operand, env)
        return -p if e.op == "-" else p
    if isinstance(e, n.Binary) and e.op in ("+", "-", "*"):
        a, b = to_poly(e.left, env), to_poly(e.right, env)
        return a + b if e.op == "+" else a - b if e.op == "-" else a * b
    if isinstance(e, n.Binary) and e.op == "/":
        a, b = to_poly(e.left, env), to_poly(e.right, env)
        d = b.constant()
        if d is not None and d != 0:
            ca = a.constant()
            if ca is not None:
                return Poly.const(int(ca / d))  # C truncation
            q = a.exact_div(d)
            if q is not None:
                return q
    if isinstance(e, n.Binary) and e.op == "%":
        a, b = to_poly(e.left, env), to_poly(e.right, env)
        ca, cb = a.constant(), b.constant()
        if ca is not None and cb:
            return Poly.const(int(ca - cb * int(ca / cb)))
    if isinstance(e, n.Cast) and e.type.base in ("int", "long", "long int") and not e.type.pointer:
        inner = to_poly(e.operand, env)
        if _is_integral(e.operand):
            return inner
    return Poly.atom(format_expr(e))


def _is_integral(e):
    return not any(isinstance(x, n.Const) and x.kind == "float" for x in e.walk())


def fold(e: n.Expr):
    """Integer value of ``e`` under constant folding, or None."""
    return to_poly(e).constant()
