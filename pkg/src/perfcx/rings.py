"""Exact base rings and their scalar text grammar.

A ring object is a small immutable description (hashable, comparable) that
also knows how to do arithmetic on raw values.  Raw value types:

* ``Rationals``            -> ``fractions.Fraction``
* ``PrimeField(p)``        -> ``int`` in ``[0, p)``
* ``PolynomialRing``       -> sympy ``PolyElement`` (sparse, no zero terms)
* ``RationalFunctionField``-> sympy ``FracElement`` (cancelled)
* ``DualNumbers``          -> ``(a, b)`` meaning ``a + b*eps`` with ``eps**2 = 0``

Matrices store raw values; :class:`Scalar` pairs a value with its ring for
use at API boundaries.
"""

from __future__ import annotations

import ast
import operator
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, ClassVar, Sequence

import sympy
from sympy.polys.fields import field as _sym_field
from sympy.polys.rings import ring as _sym_ring

from .errors import InvalidRing, NonFieldRing, ScalarSyntaxError

MAX_SCALAR_TEXT = 20_000
MAX_EXPONENT = 1_000
EPS = "eps"


class Ring:
    kind: ClassVar[str]
    is_field: ClassVar[bool]

    # -- arithmetic on raw values -------------------------------------------
    @property
    def zero(self) -> Any:
        raise NotImplementedError

    @property
    def one(self) -> Any:
        raise NotImplementedError

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a) -> bool:
        return not a

    def dot(self, xs: Sequence, ys: Sequence):
        return sum(map(operator.mul, xs, ys), self.zero)

    def inv(self, a):
        raise NonFieldRing(f"{self} is not a field")

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def from_int(self, n: int):
        raise NotImplementedError

    def variable(self, name: str):
        raise ScalarSyntaxError(f"unknown name {name!r} in {self}")

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    @property
    def size(self) -> int | None:
        """Number of elements, ``None`` when infinite."""
        return None

    def coerce(self, x):
        """Accept a raw value, an int, a Fraction, a string or a Scalar."""
        if isinstance(x, Scalar):
            if x.ring != self:
                raise InvalidRing(f"scalar over {x.ring} used in {self}")
            return x.value
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, bool):
            raise TypeError("bool is not a scalar")
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            return self.div(self.from_int(x.numerator), self.from_int(x.denominator))
        return self._coerce_raw(x)

    def _coerce_raw(self, x):
        return x

    def random_element(self, rng: random.Random, bound: int):
        """Uniform draw from the integers ``0..bound-1`` embedded in the ring."""
        return self.from_int(rng.randrange(bound))

    # -- text grammar --------------------------------------------------------
    def render(self, v) -> str:
        raise NotImplementedError

    def parse(self, text: str):
        if not isinstance(text, str):
            raise ScalarSyntaxError(f"expected a string, got {type(text).__name__}")
        if len(text) > MAX_SCALAR_TEXT:
            raise ScalarSyntaxError("scalar text too long")
        src = text.strip().replace("^", "**")
        if not src:
            raise ScalarSyntaxError("empty scalar")
        try:
            tree = ast.parse(src, mode="eval")
            return _Evaluator(self).visit(tree.body)
        except ScalarSyntaxError:
            raise
        except (SyntaxError, ValueError, TypeError, ZeroDivisionError,
                RecursionError, OverflowError, MemoryError, ArithmeticError,
                NonFieldRing, InvalidRing) as exc:
            raise ScalarSyntaxError(f"cannot parse {text[:60]!r}: {exc}") from None

    def to_json(self) -> dict:
        raise NotImplementedError


class _Evaluator(ast.NodeVisitor):
    """Evaluate a restricted arithmetic expression directly in a ring."""

    def __init__(self, ring: Ring):
        self.ring = ring

    def generic_visit(self, node):
        raise ScalarSyntaxError(f"unsupported syntax: {type(node).__name__}")

    def visit_Constant(self, node):
        if type(node.value) is not int:
            raise ScalarSyntaxError(f"unsupported literal {node.value!r}")
        return self.ring.from_int(node.value)

    def visit_Name(self, node):
        return self.ring.variable(node.id)

    def visit_UnaryOp(self, node):
        v = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return self.ring.neg(v)
        if isinstance(node.op, ast.UAdd):
            return v
        raise ScalarSyntaxError("unsupported unary operator")

    def visit_BinOp(self, node):
        R = self.ring
        if isinstance(node.op, ast.Pow):
            exp = node.right
            sign = 1
            if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                sign, exp = -1, exp.operand
            if not (isinstance(exp, ast.Constant) and type(exp.value) is int):
                raise ScalarSyntaxError("exponent must be an integer literal")
            if exp.value > MAX_EXPONENT:
                raise ScalarSyntaxError("exponent too large")
            return R.pow(self.visit(node.left), sign * exp.value)
        a, b = self.visit(node.left), self.visit(node.right)
        if isinstance(node.op, ast.Add):
            return R.add(a, b)
        if isinstance(node.op, ast.Sub):
            return R.sub(a, b)
        if isinstance(node.op, ast.Mult):
            return R.mul(a, b)
        if isinstance(node.op, ast.Div):
            if R.is_zero(b):
                raise ScalarSyntaxError("division by zero")
            return R.div(a, b)
        raise ScalarSyntaxError("unsupported operator")


def _join_terms(terms: list[str]) -> str:
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def _scaled(coeff: str, mono: str) -> str:
    if not mono:
        return coeff
    if coeff == "1":
        return mono
    if coeff == "-1":
        return "-" + mono
    return f"{coeff}*{mono}"


# ---------------------------------------------------------------------------
# base fields


@dataclass(frozen=True)
class Rationals(Ring):
    kind: ClassVar[str] = "RATIONALS"
    is_field: ClassVar[bool] = True

    zero = Fraction(0)
    one = Fraction(1)

    def is_zero(self, a):
        return a == 0

    def inv(self, a):
        return 1 / a

    def div(self, a, b):
        return a / b

    def from_int(self, n):
        return Fraction(n)

    def _coerce_raw(self, x):
        return Fraction(x)

    def render(self, v):
        return str(v)

    def to_json(self):
        return {"kind": self.kind}

    def __str__(self):
        return "QQ"

    # sympy bridge for polynomial coefficients
    @property
    def sympy_domain(self):
        return sympy.QQ

    def to_sympy(self, v):
        return sympy.QQ(v.numerator, v.denominator)

    def from_sympy(self, c):
        return Fraction(int(c.numerator), int(c.denominator))


@dataclass(frozen=True)
class PrimeField(Ring):
    p: int
    kind: ClassVar[str] = "PRIME_FIELD"
    is_field: ClassVar[bool] = True

    def __post_init__(self):
        if type(self.p) is not int or not sympy.isprime(self.p):
            raise InvalidRing(f"{self.p!r} is not prime")

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def dot(self, xs, ys):
        return sum(map(operator.mul, xs, ys)) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        return pow(a, e, self.p)

    def from_int(self, n):
        return n % self.p

    def _coerce_raw(self, x):
        return int(x) % self.p

    @property
    def size(self):
        return self.p

    def random_element(self, rng, bound):
        return rng.randrange(min(bound, self.p))

    def render(self, v):
        return str(v)

    _MOD = re.compile(r"^\s*(.+?)\s+mod\s+(\d+)\s*$", re.S)

    def parse(self, text):
        if isinstance(text, str):
            m = self._MOD.match(text)
            if m:
                if int(m.group(2)) != self.p:
                    raise ScalarSyntaxError(f"modulus {m.group(2)} does not match p={self.p}")
                text = m.group(1)
        return super().parse(text)

    def to_json(self):
        return {"kind": self.kind, "p": self.p}

    def __str__(self):
        return f"GF({self.p})"

    @property
    def sympy_domain(self):
        return sympy.GF(self.p)

    def to_sympy(self, v):
        return self.sympy_domain(v)

    def from_sympy(self, c):
        return int(c) % self.p


BASE_FIELDS = (Rationals, PrimeField)


def _check_vars(vars: tuple) -> None:
    if not isinstance(vars, tuple) or not vars:
        raise InvalidRing("variable list must be a nonempty tuple")
    for v in vars:
        if not isinstance(v, str) or not v.isidentifier() or v == EPS:
            raise InvalidRing(f"bad variable name {v!r}")
    if len(set(vars)) != len(vars):
        raise InvalidRing("variable names must be distinct")


# ---------------------------------------------------------------------------
# polynomial rings and rational function fields


@dataclass(frozen=True)
class PolynomialRing(Ring):
    base: Ring
    vars: tuple[str, ...]
    kind: ClassVar[str] = "POLYNOMIAL"
    is_field: ClassVar[bool] = False

    def __post_init__(self):
        if not isinstance(self.base, BASE_FIELDS):
            raise InvalidRing("polynomial coefficients must be QQ or GF(p)")
        _check_vars(self.vars)

    @cached_property
    def sym(self):
        return _sym_ring(",".join(self.vars), self.base.sympy_domain)[0]

    @property
    def zero(self):
        return self.sym.zero

    @property
    def one(self):
        return self.sym.one

    def from_int(self, n):
        return self.sym(n)

    def from_base(self, c):
        return self.sym.ground_new(self.base.to_sympy(c))

    def variable(self, name):
        if name in self.vars:
            return self.sym.gens[self.vars.index(name)]
        return super().variable(name)

    def monomial(self, exponents: tuple[int, ...], coeff=None):
        c = self.base.one if coeff is None else coeff
        return self.sym({exponents: self.base.to_sympy(c)})

    def inv(self, a):
        if a.is_ground and a:
            return self.from_base(self.base.inv(self.constant_term(a)))
        raise NonFieldRing(f"{a} is not invertible in {self}")

    def _coerce_raw(self, x):
        if getattr(x, "ring", None) is not self.sym:
            raise InvalidRing(f"{x!r} is not an element of {self}")
        return x

    def constant_term(self, a):
        return self.base.from_sympy(a.coeff(1)) if a else self.base.zero

    def terms(self, a) -> list[tuple[tuple[int, ...], Any]]:
        """(exponents, base coefficient) pairs in graded-lex descending order."""
        items = [(e, self.base.from_sympy(c)) for e, c in a.items()]
        items.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)
        return items

    def is_constant(self, a) -> bool:
        return all(not any(e) for e in a.keys())

    def evaluate(self, a, point: Sequence):
        """Substitute base-field values (in ``vars`` order)."""
        B = self.base
        total = B.zero
        for exps, c in a.items():
            term = B.from_sympy(c)
            for x, e in zip(point, exps):
                if e:
                    term = B.mul(term, B.pow(x, e))
            total = B.add(total, term)
        return total

    def render_monomial(self, exps: tuple[int, ...]) -> str:
        parts = []
        for name, e in zip(self.vars, exps):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def render(self, v):
        return _join_terms([
            _scaled(self.base.render(c), self.render_monomial(e)) for e, c in self.terms(v)
        ])

    def to_json(self):
        return {"kind": self.kind, "base": self.base.to_json(), "vars": list(self.vars)}

    def __str__(self):
        return f"{self.base}[{','.join(self.vars)}]"


@dataclass(frozen=True)
class RationalFunctionField(Ring):
    base: Ring
    vars: tuple[str, ...]
    kind: ClassVar[str] = "RATIONAL_FUNCTIONS"
    is_field: ClassVar[bool] = True

    def __post_init__(self):
        if not isinstance(self.base, BASE_FIELDS):
            raise InvalidRing("rational function coefficients must be QQ or GF(p)")
        _check_vars(self.vars)

    @cached_property
    def sym(self):
        return _sym_field(",".join(self.vars), self.base.sympy_domain)[0]

    @cached_property
    def polynomials(self) -> PolynomialRing:
        return PolynomialRing(self.base, self.vars)

    @property
    def zero(self):
        return self.sym.zero

    @property
    def one(self):
        return self.sym.one

    def from_int(self, n):
        return self.sym(n)

    def from_base(self, c):
        return self.sym(self.polynomials.from_base(c))

    def from_polynomial(self, p):
        return self.sym(p.set_ring(self.sym.ring))

    def variable(self, name):
        if name in self.vars:
            return self.sym.gens[self.vars.index(name)]
        return super().variable(name)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        if not b:
            raise ZeroDivisionError("division by zero")
        return a / b

    def _coerce_raw(self, x):
        if getattr(x, "field", None) is self.sym:
            return x
        if getattr(x, "ring", None) is self.polynomials.sym:
            return self.from_polynomial(x)
        raise InvalidRing(f"{x!r} is not an element of {self}")

    def numer_denom(self, a):
        """Numerator and monic denominator as polynomials over ``base``."""
        P = self.polynomials.sym
        num, den = a.numer.set_ring(P), a.denom.set_ring(P)
        lc = den.LC
        return num.quo_ground(lc), den.quo_ground(lc)

    def render(self, v):
        P = self.polynomials
        num, den = self.numer_denom(v)
        if den == P.one:
            return P.render(num)
        return f"({P.render(num)})/({P.render(den)})"

    def to_json(self):
        return {"kind": self.kind, "base": self.base.to_json(), "vars": list(self.vars)}

    def __str__(self):
        return f"{self.base}({','.join(self.vars)})"


# ---------------------------------------------------------------------------
# dual numbers k[eps]/eps^2


@dataclass(frozen=True)
class DualNumbers(Ring):
    base: Ring
    kind: ClassVar[str] = "DUAL_NUMBERS"
    is_field: ClassVar[bool] = False

    def __post_init__(self):
        if not isinstance(self.base, BASE_FIELDS):
            raise InvalidRing("dual numbers are supported over QQ or GF(p)")

    @property
    def zero(self):
        z = self.base.zero
        return (z, z)

    @property
    def one(self):
        return (self.base.one, self.base.zero)

    @property
    def eps(self):
        return (self.base.zero, self.base.one)

    def add(self, a, b):
        B = self.base
        return (B.add(a[0], b[0]), B.add(a[1], b[1]))

    def sub(self, a, b):
        B = self.base
        return (B.sub(a[0], b[0]), B.sub(a[1], b[1]))

    def neg(self, a):
        return (self.base.neg(a[0]), self.base.neg(a[1]))

    def mul(self, a, b):
        B = self.base
        return (B.mul(a[0], b[0]), B.add(B.mul(a[0], b[1]), B.mul(a[1], b[0])))

    def is_zero(self, a):
        return self.base.is_zero(a[0]) and self.base.is_zero(a[1])

    def dot(self, xs, ys):
        B = self.base
        a0 = [x[0] for x in xs]
        b0 = [y[0] for y in ys]
        lin = B.add(B.dot(a0, [y[1] for y in ys]), B.dot([x[1] for x in xs], b0))
        return (B.dot(a0, b0), lin)

    def inv(self, a):
        B = self.base
        if B.is_zero(a[0]):
            raise NonFieldRing(f"{self.render(a)} is not a unit")
        i = B.inv(a[0])
        return (i, B.neg(B.mul(a[1], B.mul(i, i))))

    def from_int(self, n):
        return (self.base.from_int(n), self.base.zero)

    def lift(self, c, e=None):
        """``c + e*eps`` from base values."""
        return (c, self.base.zero if e is None else e)

    def variable(self, name):
        if name == EPS:
            return self.eps
        return super().variable(name)

    def _coerce_raw(self, x):
        if not (isinstance(x, tuple) and len(x) == 2):
            raise InvalidRing(f"{x!r} is not a dual number")
        return (self.base.coerce(x[0]), self.base.coerce(x[1]))

    @property
    def size(self):
        s = self.base.size
        return None if s is None else s * s

    def render(self, v):
        B = self.base
        terms = []
        if not B.is_zero(v[0]):
            terms.append(B.render(v[0]))
        if not B.is_zero(v[1]):
            terms.append(_scaled(B.render(v[1]), EPS))
        return _join_terms(terms)

    def to_json(self):
        return {"kind": self.kind, "base": self.base.to_json()}

    def __str__(self):
        return f"{self.base}[eps]/(eps^2)"


QQ = Rationals()


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Scalar:
    """A ring element tagged with its ring."""

    ring: Ring
    value: Any

    @classmethod
    def of(cls, ring: Ring, x) -> "Scalar":
        return cls(ring, ring.coerce(x))

    def _other(self, other):
        return self.ring.coerce(other)

    def __add__(self, other):
        return Scalar(self.ring, self.ring.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.ring, self.ring.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return Scalar(self.ring, self.ring.sub(self._other(other), self.value))

    def __mul__(self, other):
        return Scalar(self.ring, self.ring.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Scalar(self.ring, self.ring.div(self.value, self._other(other)))

    def __neg__(self):
        return Scalar(self.ring, self.ring.neg(self.value))

    def __bool__(self):
        return not self.ring.is_zero(self.value)

    def __str__(self):
        return self.ring.render(self.value)

    def __repr__(self):
        return f"Scalar({self.ring}, {self})"


def random_scalar(ring: Ring, sample_bound: int, seed: int | random.Random) -> Scalar:
    """Uniform draw from ``{0, ..., sample_bound-1}`` embedded in ``ring``.

    Over GF(p) the subset is all residues once ``sample_bound >= p``.  A
    ``random.Random`` may be passed instead of an integer seed to draw from a
    stream.
    """
    if sample_bound < 1:
        raise ValueError("sample_bound must be >= 1")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    return Scalar(ring, ring.random_element(rng, sample_bound))
