"""Ideal-theoretic primitives: reduced Groebner bases, normal forms, membership,
radical membership, elimination, saturation, intersection and Krull dimension.

The engine is a Buchberger completion with the Gebauer-Moeller pair criteria
and monic reducers, working on plain ``{exponent-tuple: Fraction}`` dicts for
speed.  Exactness first: no modular tricks, no floats.  The reduced basis for
a given (ideal, order) pair is unique, so it doubles as a canonical form.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    DEFAULT_LIMITS,
    FibrephiError,
    Limits,
    ResourceLimitError,
    RingMismatchError,
    ZeroPolynomialError,
)
from .orders import (
    GREVLEX,
    Block,
    Monomial,
    MonomialOrder,
    monomial_div,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
)
from .poly import Polynomial, PolynomialRing, transport

PolyDict = dict[Monomial, Fraction]


# ---------------------------------------------------------------------------
# dict-level engine
# ---------------------------------------------------------------------------


def _monic_dict(f: PolyDict, key) -> tuple[Monomial, PolyDict]:
    lm = max(f, key=key)
    lc = f[lm]
    if lc != 1:
        f = {m: c / lc for m, c in f.items()}
    return lm, f


def _spoly_dict(lmf: Monomial, f: PolyDict, lmg: Monomial, g: PolyDict) -> PolyDict:
    """S-polynomial of two monic polynomials given with their leading monomials."""
    lcm = monomial_lcm(lmf, lmg)
    qf = monomial_div(lcm, lmf)
    qg = monomial_div(lcm, lmg)
    out: PolyDict = {}
    for m, c in f.items():
        out[monomial_mul(m, qf)] = c
    for m, c in g.items():
        mm = monomial_mul(m, qg)
        nc = out.get(mm, Fraction(0)) - c
        if nc:
            out[mm] = nc
        elif mm in out:
            del out[mm]
    return out


class _ReductionBudget:
    __slots__ = ("left",)

    def __init__(self, limit: int):
        self.left = limit

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise ResourceLimitError("Groebner reduction budget exhausted")


def _normal_form_dict(
    f: PolyDict,
    divisors: Sequence[tuple[Monomial, PolyDict]],
    key,
    budget: _ReductionBudget | None = None,
) -> PolyDict:
    """Full normal form of ``f`` against monic ``divisors``."""
    rem: PolyDict = {}
    work = dict(f)
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        for lm, g in divisors:
            if monomial_divides(lm, m):
                if budget is not None:
                    budget.spend()
                q = monomial_div(m, lm)
                for mg, cg in g.items():
                    if mg == lm:
                        continue
                    mm = monomial_mul(mg, q)
                    nc = work.get(mm)
                    if nc is None:
                        work[mm] = -c * cg
                    else:
                        nc -= c * cg
                        if nc:
                            work[mm] = nc
                        else:
                            del work[mm]
                break
        else:
            rem[m] = c
    return rem


def _buchberger(seq: list[PolyDict], key, limits: Limits) -> list[PolyDict]:
    """Reduced Groebner basis of the ideal generated by ``seq``.

    Pair handling follows the Gebauer-Moeller update criteria; the result is
    monic, self-reduced and sorted descending by leading monomial, hence
    canonical for the (ideal, order) pair.
    """
    budget = _ReductionBudget(limits.groebner_max_reductions)

    polys = [dict(p) for p in seq if p]
    if not polys:
        return []

    # inter-reduce the input to a fixpoint first
    current = polys
    while True:
        nxt: list[PolyDict] = []
        for i, p in enumerate(current):
            entries = [_monic_dict(q, key) for q in nxt]
            r = _normal_form_dict(p, entries, key, budget)
            if r:
                nxt.append(_monic_dict(r, key)[1])
        if nxt == current:
            break
        current = nxt
    if not current:
        return []

    f: list[PolyDict] = []
    lms: list[Monomial] = []
    index: dict[frozenset, int] = {}

    def install(p: PolyDict) -> int:
        lm, p = _monic_dict(p, key)
        frozen = frozenset(p.items())
        if frozen in index:
            return index[frozen]
        f.append(p)
        lms.append(lm)
        index[frozen] = len(f) - 1
        if len(f) > limits.groebner_max_basis:
            raise ResourceLimitError("Groebner basis size cap exceeded")
        return len(f) - 1

    def update(G: set[int], B: set[tuple[int, int]], ih: int):
        # Gebauer-Moeller pair filtering, after Becker-Weispfenning p.230
        mh = lms[ih]
        C = set(G)
        D: set[tuple[int, int]] = set()
        while C:
            ig = C.pop()
            mg = lms[ig]
            lcm_hg = monomial_lcm(mh, mg)

            def lcm_divides(ip: int) -> bool:
                return monomial_divides(monomial_lcm(mh, lms[ip]), lcm_hg)

            if monomial_mul(mh, mg) == lcm_hg or (
                not any(lcm_divides(ip) for ip in C)
                and not any(lcm_divides(pair[1]) for pair in D)
            ):
                D.add((ih, ig))
        E = set()
        while D:
            ih2, ig = D.pop()
            if monomial_mul(mh, lms[ig]) != monomial_lcm(mh, lms[ig]):
                E.add((ih2, ig))
        B_new: set[tuple[int, int]] = set()
        while B:
            ig1, ig2 = B.pop()
            lcm_12 = monomial_lcm(lms[ig1], lms[ig2])
            if (
                not monomial_divides(mh, lcm_12)
                or monomial_lcm(lms[ig1], mh) == lcm_12
                or monomial_lcm(lms[ig2], mh) == lcm_12
            ):
                B_new.add((ig1, ig2))
        B_new |= E
        G_new = {ig for ig in G if not monomial_divides(mh, lms[ig])}
        G_new.add(ih)
        return G_new, B_new

    G: set[int] = set()
    CP: set[tuple[int, int]] = set()
    order_of_arrival = [install(p) for p in current]
    for ih in sorted(set(order_of_arrival), key=lambda i: key(lms[i])):
        G, CP = update(G, CP, ih)

    while CP:
        pair = min(CP, key=lambda p: key(monomial_lcm(lms[p[0]], lms[p[1]])))
        CP.remove(pair)
        i, j = pair
        s = _spoly_dict(lms[i], f[i], lms[j], f[j])
        if not s:
            continue
        reducers = sorted(G, key=lambda g: key(lms[g]))
        h = _normal_form_dict(s, [(lms[g], f[g]) for g in reducers], key, budget)
        if h:
            ih = install(h)
            G, CP = update(G, CP, ih)

    # minimal LM set is maintained by update(); one reduction pass finishes it
    ids = sorted(G, key=lambda g: key(lms[g]), reverse=True)
    reduced: list[PolyDict] = []
    for g in ids:
        others = [(lms[o], f[o]) for o in ids if o != g]
        r = _normal_form_dict(f[g], others, key, budget)
        if r:
            reduced.append(_monic_dict(r, key)[1])
    reduced.sort(key=lambda p: key(max(p, key=key)), reverse=True)
    return reduced


# ---------------------------------------------------------------------------
# public polynomial-level surface
# ---------------------------------------------------------------------------


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    """Standard S-polynomial; the leading terms of the two inputs cancel."""
    if f.is_zero or g.is_zero:
        raise ZeroPolynomialError("S-polynomial needs nonzero inputs")
    if f.ring != g.ring:
        raise RingMismatchError("S-polynomial operands must share a ring")
    key = order.key
    lmf, fd = _monic_dict(f.as_dict(), key)
    lmg, gd = _monic_dict(g.as_dict(), key)
    return Polynomial(f.ring, _spoly_dict(lmf, fd, lmg, gd))


def division(
    f: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder = GREVLEX
) -> tuple[list[Polynomial], Polynomial]:
    """Multivariate division: ``f = sum(q_i * b_i) + r`` with quotients recorded.

    No term of the remainder is divisible by any basis leading monomial.
    """
    ring = f.ring
    key = order.key
    entries = []
    for b in basis:
        if b.is_zero:
            raise ZeroPolynomialError("division by a zero basis element")
        if b.ring != ring:
            raise RingMismatchError("division basis must share the ring")
        lm, lc = b.leading_term(order)
        entries.append((lm, lc, b.as_dict()))
    quots: list[PolyDict] = [{} for _ in basis]
    rem: PolyDict = {}
    work = f.as_dict()
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        for i, (lm, lc, b) in enumerate(entries):
            if monomial_divides(lm, m):
                q = monomial_div(m, lm)
                factor = c / lc
                quots[i][q] = quots[i].get(q, Fraction(0)) + factor
                for mb, cb in b.items():
                    if mb == lm:
                        continue
                    mm = monomial_mul(mb, q)
                    nc = work.get(mm, Fraction(0)) - factor * cb
                    if nc:
                        work[mm] = nc
                    elif mm in work:
                        del work[mm]
                break
        else:
            rem[m] = c
    return [Polynomial(ring, q) for q in quots], Polynomial(ring, rem)


def normal_form(f: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> Polynomial:
    """Remainder of ``f`` on division by ``basis``."""
    return division(f, basis, order)[1]


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced, monic Groebner basis; unique for its (ideal, order) pair."""

    order: MonomialOrder
    elements: tuple[Polynomial, ...]

    def leading_monomials(self) -> list[Monomial]:
        return [g.leading_monomial(self.order) for g in self.elements]

    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_constant()

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


class Ideal:
    """A polynomial ideal: generator list plus cached reduced bases per order.

    Ideals are immutable values; the basis cache is populated lazily under a
    lock, and a recomputation installs the identical (canonical) result.
    """

    __slots__ = ("ring", "generators", "_cache", "_lock")

    def __init__(self, ring: PolynomialRing, generators: Iterable[Polynomial] = ()):
        gens: list[Polynomial] = []
        seen: set[Polynomial] = set()
        for g in generators:
            if not isinstance(g, Polynomial):
                raise FibrephiError("ideal generators must be polynomials")
            if g.ring != ring:
                raise RingMismatchError("generator ring differs from ideal ring")
            if g.is_zero or g in seen:
                continue
            seen.add(g)
            gens.append(g)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "_cache", {})
        object.__setattr__(self, "_lock", threading.Lock())

    def __setattr__(self, name, value):
        raise AttributeError("Ideal is immutable")

    def __repr__(self) -> str:
        inner = ", ".join(str(g) for g in self.generators) or "0"
        return f"Ideal({inner})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Ideal)
            and self.ring == other.ring
            and self.generators == other.generators
        )

    def __hash__(self) -> int:
        return hash((self.ring, self.generators))

    @property
    def is_zero_ideal(self) -> bool:
        return not self.generators

    def added(self, extra: Iterable[Polynomial]) -> "Ideal":
        return Ideal(self.ring, self.generators + tuple(extra))

    def groebner_basis(
        self, order: MonomialOrder = GREVLEX, limits: Limits = DEFAULT_LIMITS
    ) -> GroebnerBasis:
        with self._lock:
            cached = self._cache.get(order)
            if cached is not None:
                return cached
            dicts = _buchberger([g.as_dict() for g in self.generators], order.key, limits)
            basis = GroebnerBasis(order, tuple(Polynomial(self.ring, d) for d in dicts))
            self._cache[order] = basis
            return basis

    def contains(self, f: Polynomial, limits: Limits = DEFAULT_LIMITS) -> bool:
        if f.is_zero:
            return True
        basis = self.groebner_basis(GREVLEX, limits)
        return normal_form(f, basis.elements, GREVLEX).is_zero

    def is_unit(self, limits: Limits = DEFAULT_LIMITS) -> bool:
        if any(g.is_constant() for g in self.generators):
            return True
        return self.groebner_basis(GREVLEX, limits).is_unit()

    def is_proper(self, limits: Limits = DEFAULT_LIMITS) -> bool:
        return not self.is_unit(limits)

    def equals(self, other: "Ideal", limits: Limits = DEFAULT_LIMITS) -> bool:
        """Mathematical equality via the canonical reduced bases."""
        if self.ring != other.ring:
            return False
        return (
            self.groebner_basis(GREVLEX, limits).elements
            == other.groebner_basis(GREVLEX, limits).elements
        )

    def dimension(self, limits: Limits = DEFAULT_LIMITS) -> int:
        return krull_dimension(self, limits)


def reduced_groebner(
    ideal: Ideal, order: MonomialOrder = GREVLEX, limits: Limits = DEFAULT_LIMITS
) -> GroebnerBasis:
    """Reduced Groebner basis of ``ideal`` under ``order`` (cached on the ideal)."""
    return ideal.groebner_basis(order, limits)


def ideal_member(f: Polynomial, ideal: Ideal, limits: Limits = DEFAULT_LIMITS) -> bool:
    """True iff ``f`` reduces to zero against the basis."""
    return ideal.contains(f, limits)


def is_unit_ideal(ideal: Ideal, limits: Limits = DEFAULT_LIMITS) -> bool:
    return ideal.is_unit(limits)


def _lift_to(ring: PolynomialRing, polys: Iterable[Polynomial]) -> list[Polynomial]:
    return [transport(p, ring) for p in polys]


def radical_member(f: Polynomial, ideal: Ideal, limits: Limits = DEFAULT_LIMITS) -> bool:
    """True iff some power of ``f`` lies in ``ideal``.

    Uses the auxiliary-variable trick: f is in the radical iff
    1 belongs to ideal + (1 - t*f) in the ring extended by t.
    """
    if f.ring != ideal.ring:
        raise RingMismatchError("radical membership operands must share a ring")
    if f.is_zero:
        return True
    if ideal.contains(f, limits):
        return True
    ext = ideal.ring.extend([ideal.ring.fresh_name("t")])
    t = ext.variable(ext.variables[-1])
    gens = _lift_to(ext, ideal.generators)
    gens.append(ext.one() - t * transport(f, ext))
    return Ideal(ext, gens).is_unit(limits)


def elimination_ideal(
    ideal: Ideal, keep: int | Sequence[str], limits: Limits = DEFAULT_LIMITS
) -> Ideal:
    """Intersection of ``ideal`` with the subring of the first ``keep`` variables.

    ``keep`` must be a prefix block: the target variables, or the target
    variables plus an initial segment of the source block.  The result lives
    in the correspondingly restricted ring.
    """
    ring = ideal.ring
    if isinstance(keep, int):
        count = keep
    else:
        names = tuple(keep)
        if names != ring.variables[: len(names)]:
            raise FibrephiError("keep must be a prefix of the ring's variables")
        count = len(names)
    if count <= 0 or count > ring.arity:
        raise FibrephiError(f"cannot keep {count} of {ring.arity} variables")
    if count == ring.arity:
        return ideal
    split = ring.split
    if count <= split:
        small = PolynomialRing(ring.target_vars[:count], ())
    else:
        small = PolynomialRing(ring.target_vars, ring.source_vars[: count - split])
    basis = ideal.groebner_basis(Block(count), limits)
    kept = [
        transport(g, small)
        for g in basis.elements
        if all(not any(m[count:]) for m in g.monomials())
    ]
    return Ideal(small, kept)


class SaturationStats:
    """Counters letting the test suite confirm every saturation certified."""

    __slots__ = ("calls", "certified")

    def __init__(self):
        self.calls = 0
        self.certified = 0

    def reset(self):
        self.calls = 0
        self.certified = 0


SATURATION_STATS = SaturationStats()


def saturation(
    ideal: Ideal, h: Polynomial, limits: Limits = DEFAULT_LIMITS
) -> tuple[Ideal, int]:
    """Saturation ``ideal : h^infinity`` with a certified exponent.

    Returns ``(sat, s)`` where ``h^s * g`` lies in ``ideal`` for every
    generator ``g`` of the result.  Geometrically the saturation cuts out the
    closure of ``V(ideal)`` minus ``V(h)``.
    """
    if h.ring != ideal.ring:
        raise RingMismatchError("saturation operands must share a ring")
    if h.is_zero:
        raise ZeroPolynomialError("cannot saturate by the zero polynomial")
    SATURATION_STATS.calls += 1
    if h.is_constant():
        SATURATION_STATS.certified += 1
        return ideal, 0
    ring = ideal.ring
    ext = ring.extend([ring.fresh_name("t")])
    t = ext.variable(ext.variables[-1])
    gens = _lift_to(ext, ideal.generators)
    gens.append(ext.one() - t * transport(h, ext))
    extended = Ideal(ext, gens)
    basis = extended.groebner_basis(Block(ring.arity), limits)
    kept = [
        transport(g, ring)
        for g in basis.elements
        if all(not m[ring.arity] for m in g.monomials())
    ]
    sat = Ideal(ring, kept)
    exponent = 0
    power = ideal.ring.one()
    for s in range(limits.saturation_exponent_cap + 1):
        if all(ideal.contains(power * g, limits) for g in sat.generators):
            exponent = s
            break
        power = power * h
    else:
        raise ResourceLimitError(
            f"saturation exponent exceeds cap {limits.saturation_exponent_cap}"
        )
    SATURATION_STATS.certified += 1
    return sat, exponent


def ideal_intersection(a: Ideal, b: Ideal, limits: Limits = DEFAULT_LIMITS) -> Ideal:
    """Intersection via the auxiliary-variable trick: eliminate t from t*a + (1-t)*b."""
    if a.ring != b.ring:
        raise RingMismatchError("intersection operands must share a ring")
    if a.is_zero_ideal or b.is_zero_ideal:
        return Ideal(a.ring, ())
    ring = a.ring
    ext = ring.extend([ring.fresh_name("t")])
    t = ext.variable(ext.variables[-1])
    one_minus_t = ext.one() - t
    gens = [t * g for g in _lift_to(ext, a.generators)]
    gens += [one_minus_t * g for g in _lift_to(ext, b.generators)]
    extended = Ideal(ext, gens)
    basis = extended.groebner_basis(Block(ring.arity), limits)
    kept = [
        transport(g, ring)
        for g in basis.elements
        if all(not m[ring.arity] for m in g.monomials())
    ]
    return Ideal(ring, kept)


def independent_set_dimension(monomials: Iterable[Monomial], nvars: int) -> int:
    """Largest size of a variable set touched by no monomial's support.

    This is the combinatorial (Krull) dimension of the monomial ideal the
    inputs generate; the unit ideal (a constant monomial present) gives -1
    and an empty input gives ``nvars``.
    """
    supports: list[frozenset[int]] = []
    for m in monomials:
        s = frozenset(i for i, e in enumerate(m) if e)
        if not s:
            return -1
        supports.append(s)
    if not supports:
        return nvars
    # only inclusion-minimal supports constrain the search
    supports = sorted(set(supports), key=len)
    minimal: list[frozenset[int]] = []
    for s in supports:
        if not any(t <= s for t in minimal):
            minimal.append(s)

    best = 0
    n = nvars

    def extend(start: int, chosen: set[int]):
        nonlocal best
        if len(chosen) + (n - start) <= best:
            return
        for v in range(start, n):
            nxt = chosen | {v}
            if any(s <= nxt for s in minimal):
                continue
            if len(nxt) > best:
                best = len(nxt)
            extend(v + 1, nxt)

    extend(0, set())
    return best


def krull_dimension(ideal: Ideal, limits: Limits = DEFAULT_LIMITS) -> int:
    """Dimension of the vanishing set, read off the grevlex leading-term ideal.

    The unit ideal reports -1 (empty variety sentinel); the zero ideal
    reports the full ambient dimension.
    """
    basis = ideal.groebner_basis(GREVLEX, limits)
    return independent_set_dimension(basis.leading_monomials(), ideal.ring.arity)
