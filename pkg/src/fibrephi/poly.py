"""Exact sparse multivariate polynomials over the rationals.

A ring splits its variables into a target block (the ``y`` variables of the
projection target) followed by a source block (the ``x`` variables of the
fibre directions).  Polynomials are immutable maps from exponent tuples to
nonzero ``Fraction`` coefficients; equality is structural and all arithmetic
is exact.  Floating point never enters: every downstream verdict is an exact
claim about a variety.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import FibrephiError, ResourceLimitError, RingMismatchError, ZeroPolynomialError
from .orders import (
    GREVLEX,
    Block,
    Monomial,
    MonomialOrder,
    monomial_mul,
)

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")

Scalar = Fraction | int


class PolynomialRing:
    """An ordered tuple of variable names split into target and source blocks.

    Rings are immutable; two rings are equal iff they carry the same names in
    the same blocks.  Optional degree and term-count caps abort oversized
    results with :class:`ResourceLimitError` instead of truncating.
    """

    __slots__ = ("target_vars", "source_vars", "variables", "max_degree", "max_terms", "_index")

    def __init__(
        self,
        target_vars: Sequence[str],
        source_vars: Sequence[str],
        max_degree: int | None = None,
        max_terms: int | None = None,
    ):
        target = tuple(target_vars)
        source = tuple(source_vars)
        names = target + source
        if not names:
            raise FibrephiError("a ring needs at least one variable")
        seen = set()
        for name in names:
            if not _NAME_RE.match(name):
                raise FibrephiError(f"invalid variable name {name!r}")
            if name in seen:
                raise FibrephiError(f"duplicate variable name {name!r}")
            seen.add(name)
        object.__setattr__(self, "target_vars", target)
        object.__setattr__(self, "source_vars", source)
        object.__setattr__(self, "variables", names)
        object.__setattr__(self, "max_degree", max_degree)
        object.__setattr__(self, "max_terms", max_terms)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    def __setattr__(self, name, value):
        raise AttributeError("PolynomialRing is immutable")

    @property
    def arity(self) -> int:
        return len(self.variables)

    @property
    def split(self) -> int:
        """Index of the first source variable."""
        return len(self.target_vars)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise FibrephiError(f"unknown variable {name!r}") from None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolynomialRing)
            and self.target_vars == other.target_vars
            and self.source_vars == other.source_vars
        )

    def __hash__(self) -> int:
        return hash((self.target_vars, self.source_vars))

    def __repr__(self) -> str:
        return f"PolynomialRing({list(self.target_vars)} | {list(self.source_vars)})"

    # -- derived rings -------------------------------------------------

    def source_block_order(self) -> Block:
        """Block order with the source variables dominant (x >> y)."""
        return Block(self.split)

    def extend(self, names: Sequence[str]) -> "PolynomialRing":
        """Append auxiliary variables to the source block."""
        return PolynomialRing(self.target_vars, self.source_vars + tuple(names),
                              self.max_degree, self.max_terms)

    def target_ring(self) -> "PolynomialRing":
        if not self.target_vars:
            raise FibrephiError("ring has no target block")
        return PolynomialRing(self.target_vars, ())

    def source_ring(self) -> "PolynomialRing":
        if not self.source_vars:
            raise FibrephiError("ring has no source block")
        return PolynomialRing((), self.source_vars)

    def fresh_name(self, base: str) -> str:
        name = base
        while name in self._index:
            name += "_"
        return name

    # -- element constructors ------------------------------------------

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return self.zero()
        return Polynomial(self, {(0,) * self.arity: c})

    def variable(self, name: str) -> "Polynomial":
        exp = [0] * self.arity
        exp[self.index(name)] = 1
        return Polynomial(self, {tuple(exp): Fraction(1)})

    def monomial(self, exponents: Monomial, coefficient: Scalar = 1) -> "Polynomial":
        return Polynomial(self, {tuple(exponents): Fraction(coefficient)})


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: PolynomialRing, terms: Mapping[Monomial, Scalar]):
        clean: dict[Monomial, Fraction] = {}
        arity = ring.arity
        for mono, coeff in terms.items():
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            if len(mono) != arity:
                raise FibrephiError(f"exponent tuple {mono} has wrong arity for {ring!r}")
            if any(e < 0 for e in mono):
                raise FibrephiError(f"negative exponent in {mono}")
            clean[tuple(mono)] = coeff
        if ring.max_terms is not None and len(clean) > ring.max_terms:
            raise ResourceLimitError(f"term count {len(clean)} exceeds cap {ring.max_terms}")
        if ring.max_degree is not None:
            for mono in clean:
                if sum(mono) > ring.max_degree:
                    raise ResourceLimitError(f"degree {sum(mono)} exceeds cap {ring.max_degree}")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- structure -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def terms(self, order: MonomialOrder = GREVLEX) -> list[tuple[Monomial, Fraction]]:
        """Terms sorted descending under ``order``."""
        return sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def monomials(self) -> Iterable[Monomial]:
        return self._terms.keys()

    def as_dict(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def total_degree(self) -> int:
        """Total degree; the zero polynomial reports -1."""
        if not self._terms:
            return -1
        return max(sum(m) for m in self._terms)

    def degree_in(self, name: str) -> int:
        i = self.ring.index(name)
        if not self._terms:
            return -1
        return max(m[i] for m in self._terms)

    def variables_used(self) -> set[str]:
        used: set[int] = set()
        for mono in self._terms:
            used.update(i for i, e in enumerate(mono) if e)
        return {self.ring.variables[i] for i in used}

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self._terms)

    def constant_value(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        if not self.is_constant():
            raise FibrephiError("polynomial is not constant")
        return next(iter(self._terms.values()))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.ring, frozenset(self._terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- arithmetic --------------------------------------------------------

    def _check_ring(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatchError(f"{self.ring!r} vs {other.ring!r}")

    def __add__(self, other: "Polynomial | Scalar") -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = self.ring.constant(other)
        self._check_ring(other)
        out = dict(self._terms)
        for mono, coeff in other._terms.items():
            out[mono] = out.get(mono, Fraction(0)) + coeff
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ring, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "Polynomial | Scalar") -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = self.ring.constant(other)
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "Polynomial":
        return self.ring.constant(other) - self

    def __mul__(self, other: "Polynomial | Scalar") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check_ring(other)
        out: dict[Monomial, Fraction] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = monomial_mul(ma, mb)
                out[m] = out.get(m, Fraction(0)) + ca * cb
        return Polynomial(self.ring, out)

    def __rmul__(self, other: Scalar) -> "Polynomial":
        return self.scale(other)

    def scale(self, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return self.ring.zero()
        return Polynomial(self.ring, {m: c * co for m, co in self._terms.items()})

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise FibrephiError("negative power of a polynomial")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    # -- leading data ------------------------------------------------------

    def leading_term(self, order: MonomialOrder = GREVLEX) -> tuple[Monomial, Fraction]:
        """Order-maximal (monomial, coefficient); raises on the zero polynomial."""
        if not self._terms:
            raise ZeroPolynomialError("zero polynomial has no leading term")
        mono = max(self._terms, key=order.key)
        return mono, self._terms[mono]

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> Monomial:
        return self.leading_term(order)[0]

    def monic(self, order: MonomialOrder = GREVLEX) -> "Polynomial":
        if not self._terms:
            raise ZeroPolynomialError("cannot normalize the zero polynomial")
        _, lc = self.leading_term(order)
        if lc == 1:
            return self
        return self.scale(Fraction(1) / lc)

    # -- substitution --------------------------------------------------------

    def specialize(self, assignment: Mapping[str, Scalar]) -> "Polynomial":
        """Substitute values for some variables; stays in the same ring."""
        if not assignment:
            return self
        idx = {self.ring.index(name): Fraction(v) for name, v in assignment.items()}
        out: dict[Monomial, Fraction] = {}
        for mono, coeff in self._terms.items():
            c = coeff
            new = list(mono)
            for i, v in idx.items():
                e = mono[i]
                if e:
                    c *= v**e
                    new[i] = 0
            if c == 0:
                continue
            key = tuple(new)
            total = out.get(key, Fraction(0)) + c
            if total:
                out[key] = total
            elif key in out:
                del out[key]
        return Polynomial(self.ring, out)

    def evaluate(self, assignment: Mapping[str, Scalar]) -> Fraction:
        """Full evaluation to a rational number."""
        missing = self.variables_used() - set(assignment)
        if missing:
            raise FibrephiError(f"evaluation misses variables {sorted(missing)}")
        return self.specialize(assignment).constant_value()

    # -- printing ---------------------------------------------------------

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)})"


def arith(op: str, p: Polynomial, q: "Polynomial | Scalar") -> Polynomial:
    """Dispatching wrapper over the four documented arithmetic operations."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "scale":
        if isinstance(q, Polynomial):
            raise FibrephiError("scale expects a rational scalar")
        return p.scale(q)
    raise FibrephiError(f"unknown arithmetic op {op!r}")


def _format_coefficient(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_monomial(ring: PolynomialRing, mono: Monomial) -> str:
    factors = []
    for name, e in zip(ring.variables, mono):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return "*".join(factors)


def format_polynomial(p: Polynomial, order: MonomialOrder = GREVLEX) -> str:
    """Canonical text form: terms sorted descending under ``order``."""
    if p.is_zero:
        return "0"
    chunks: list[str] = []
    for mono, coeff in p.terms(order):
        mono_s = _format_monomial(p.ring, mono)
        mag = abs(coeff)
        if not mono_s:
            body = _format_coefficient(mag)
        elif mag == 1:
            body = mono_s
        else:
            body = f"{_format_coefficient(mag)}*{mono_s}"
        if not chunks:
            chunks.append(body if coeff > 0 else f"-{body}")
        else:
            chunks.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(chunks)


def transport(p: Polynomial, ring: PolynomialRing, rename: Mapping[str, str] | None = None) -> Polynomial:
    """Re-express ``p`` in another ring, optionally renaming variables.

    Every variable actually used must map to a variable of the new ring;
    dropping a used variable is an error.
    """
    rename = rename or {}
    old = p.ring
    out: dict[Monomial, Fraction] = {}
    column: list[int | None] = []
    for name in old.variables:
        target = rename.get(name, name)
        column.append(ring._index.get(target))
    for mono, coeff in p.as_dict().items():
        new = [0] * ring.arity
        for i, e in enumerate(mono):
            if not e:
                continue
            j = column[i]
            if j is None:
                raise FibrephiError(
                    f"variable {old.variables[i]!r} cannot be transported to {ring!r}"
                )
            new[j] += e
        key = tuple(new)
        out[key] = out.get(key, Fraction(0)) + coeff
    return Polynomial(ring, out)
