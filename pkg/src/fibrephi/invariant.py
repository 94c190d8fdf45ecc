"""Bounds and exact values for the invariant phi of a polynomial projection.

phi(f) counts how many points of an arbitrary fibre can be approximated
simultaneously from nearby general fibres; equivalently it is the largest i
such that the i-fold fibred power of f has no vertical component, with 0 when
the source itself has one and infinity exactly for open maps.

This module evaluates the two closed-form bounds read off the fibre-dimension
stratification, decides exactness from structural side conditions, and
cross-validates through fibred powers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import (
    DEFAULT_LIMITS,
    FibrephiError,
    InternalInconsistencyError,
    Limits,
    PreconditionError,
)
from .geometry import (
    ProjectionSetup,
    PurityResult,
    Stratification,
    VerticalResult,
    fibred_power,
    has_vertical_component,
    single_rational_point,
)


def no_vertical_certificate(vertical: VerticalResult) -> bool | None:
    """Translate a vertical-component verdict into the certified no-vertical flag."""
    if vertical.verdict is None:
        return None
    return not vertical.verdict


@dataclass(frozen=True, order=True)
class ExtendedNat:
    """A natural number or infinity; infinity compares above every natural."""

    sort_index: tuple[int, int] = field(init=False, repr=False)
    value: int | None = None  # None encodes infinity

    def __post_init__(self):
        if self.value is not None and self.value < 0:
            raise FibrephiError("ExtendedNat takes naturals or None (= infinity)")
        key = (1, 0) if self.value is None else (0, self.value)
        object.__setattr__(self, "sort_index", key)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        return "infinity" if self.value is None else str(self.value)

    def json_value(self) -> int | str:
        return "infinity" if self.value is None else self.value


INFINITY = ExtendedNat(None)


def _floor_min(values: Sequence[int]) -> ExtendedNat:
    """Minimum of a list of naturals, infinity over the empty list."""
    if not values:
        return INFINITY
    return ExtendedNat(min(values))


def phi_upper(
    strat: Stratification,
    m: int,
    n: int,
    purity: PurityResult | None = None,
    pure_attested: bool = False,
) -> ExtendedNat:
    """Upper bound from the stratification of a pure-dimensional source.

    For every stratum of fibre dimension j exceeding the generic value m - n,
    take the integer part of (n - image_dim - 1) / (j - (m - n)); the bound is
    the minimum, and an empty minimand set (an equidimensional map) gives
    infinity.
    """
    confirmed = purity is not None and purity.pure is True
    if not (confirmed or pure_attested):
        raise PreconditionError(
            "the upper bound needs the source confirmed or attested pure-dimensional"
        )
    values = []
    for stratum in strat.strata:
        j = stratum.fibre_dim
        if j <= m - n:
            continue
        numerator = n - stratum.image_dim - 1
        if numerator < 0:
            raise InternalInconsistencyError(
                f"stratum j={j} has image dimension {stratum.image_dim} on an n={n} target"
            )
        values.append(numerator // (j - (m - n)))
    return _floor_min(values)


def phi_lower(
    strat: Stratification,
    ambient_dim: int,
    k: int,
    r: int,
    no_vertical: bool | None,
) -> ExtendedNat | None:
    """Lower bound for phi from the presentation data (ambient_dim, k, r).

    Valid when the source has no vertical components (certified by the
    caller): minimize the integer part of (N - image_dim - 1) / (j - (k - r))
    over the non-minimal fibre dimensions j.  When a vertical component is
    certified instead, phi is exactly 0, so 0 is returned as the (tight)
    lower bound.  An uncertified verdict yields None: not applicable.
    """
    if no_vertical is None:
        return None
    if no_vertical is False:
        return ExtendedNat(0)
    lam = strat.min_fibre_dim
    if lam < k - r:
        raise InternalInconsistencyError(
            f"minimal fibre dimension {lam} below the codimension floor {k - r}"
        )
    values = []
    for stratum in strat.strata:
        j = stratum.fibre_dim
        if j == lam:
            continue
        denominator = j - (k - r)
        if denominator <= 0:
            raise InternalInconsistencyError(
                f"non-positive denominator for stratum j={j} with k={k}, r={r}"
            )
        numerator = ambient_dim - stratum.image_dim - 1
        if numerator < 0:
            raise InternalInconsistencyError(
                f"stratum j={j} image dimension exceeds the ambient dimension"
            )
        values.append(numerator // denominator)
    return _floor_min(values)


EXACTNESS_TAGS = (
    "smooth-target",
    "bounds-meet",
    "complete-intersection",
    "curve-target",
    "fibred-power-determined",
)


@dataclass(frozen=True)
class PhiReport:
    """Everything the analysis established about phi, with provenance flags."""

    phi_upper: ExtendedNat | None
    phi_lower: ExtendedNat | None
    phi_exact: ExtendedNat | None
    exactness_tag: str | None
    vertical: VerticalResult
    purity: PurityResult
    stratification: Stratification
    fibred_power_verdicts: tuple[tuple[int, bool | None], ...]
    attestations: dict[str, bool]
    warnings: tuple[str, ...]
    notes: tuple[str, ...]

    def __post_init__(self):
        if (
            self.phi_upper is not None
            and self.phi_lower is not None
            and self.phi_upper < self.phi_lower
        ):
            raise InternalInconsistencyError("lower bound exceeds upper bound")
        if self.phi_exact is not None and self.phi_upper is not None:
            if self.phi_upper < self.phi_exact:
                raise InternalInconsistencyError("exact value above the upper bound")
        if self.phi_exact is not None and self.phi_lower is not None:
            if self.phi_exact < self.phi_lower:
                raise InternalInconsistencyError("exact value below the lower bound")
        if self.exactness_tag is not None and self.exactness_tag not in EXACTNESS_TAGS:
            raise FibrephiError(f"unknown exactness tag {self.exactness_tag!r}")


def exactness_rules(
    setup: ProjectionSetup,
    strat: Stratification,
    upper: ExtendedNat | None,
    lower: ExtendedNat | None,
    vertical: VerticalResult,
    purity: PurityResult,
) -> tuple[ExtendedNat | None, str | None]:
    """Decide whether phi is known exactly, and under which rule.

    Rules, in the priority used for the reported tag:
      smooth-target          the target ideal is zero, so the target is affine
                             space; the upper bound is attained.
      bounds-meet            lower equals upper (phi >= 0 stands in for an
                             inapplicable lower bound).
      complete-intersection  r equals codimension and source and target are
                             pure-dimensional with an irreducible target.
      curve-target           one-dimensional attested-irreducible target.
      fibred-power-determined a vertical component in the source pins phi = 0.
    """
    if upper is None:
        return None, None
    fired: list[tuple[str, ExtendedNat]] = []
    if setup.target_ideal.is_zero_ideal:
        fired.append(("smooth-target", upper))
    effective_lower = lower if lower is not None else ExtendedNat(0)
    if effective_lower == upper:
        fired.append(("bounds-meet", upper))
    if (
        purity.pure is True
        and setup.r == (setup.n + setup.k) - setup.m
        and setup.assert_target_locally_irreducible
        and setup.assert_target_pure_dimensional
    ):
        fired.append(("complete-intersection", upper))
    if setup.n == 1 and setup.assert_target_locally_irreducible:
        fired.append(("curve-target", upper))
    if vertical.verdict is True:
        fired.append(("fibred-power-determined", ExtendedNat(0)))
    if not fired:
        return None, None
    values = {value for _, value in fired}
    if len(values) > 1:
        raise InternalInconsistencyError(f"exactness rules disagree: {fired}")
    tags = [tag for tag, _ in fired]
    for tag in EXACTNESS_TAGS:
        if tag in tags:
            return fired[tags.index(tag)][1], tag
    raise AssertionError("unreachable")


def assemble_report(
    setup: ProjectionSetup,
    strat: Stratification,
    purity: PurityResult,
    vertical: VerticalResult,
    upper: ExtendedNat | None,
    lower: ExtendedNat | None,
    exact: ExtendedNat | None,
    tag: str | None,
    power_verdicts: Sequence[tuple[int, bool | None]] = (),
    warnings: Sequence[str] = (),
    notes: Sequence[str] = (),
) -> PhiReport:
    """Bundle the analysis into a PhiReport, enforcing its consistency rules."""
    return PhiReport(
        phi_upper=upper,
        phi_lower=lower,
        phi_exact=exact,
        exactness_tag=tag,
        vertical=vertical,
        purity=purity,
        stratification=strat,
        fibred_power_verdicts=tuple(power_verdicts),
        attestations={
            "target_locally_irreducible": setup.assert_target_locally_irreducible,
            "target_pure_dimensional": setup.assert_target_pure_dimensional,
        },
        warnings=tuple(warnings),
        notes=tuple(notes),
    )


def phi_by_fibred_powers(
    setup: ProjectionSetup,
    i_max: int,
    depth: int | None = None,
    limits: Limits = DEFAULT_LIMITS,
) -> list[tuple[int, bool | None]]:
    """Vertical-component verdicts on the fibred powers, in increasing order.

    phi is the largest i whose i-fold power is vertical-free, so the verdict
    sequence False,...,False,True pins it exactly; the scan stops at the
    first non-False verdict.
    """
    if i_max < 1:
        raise FibrephiError("i_max must be at least 1")
    verdicts: list[tuple[int, bool | None]] = []
    for i in range(1, i_max + 1):
        power = fibred_power(setup, i)
        result = has_vertical_component(power.ideal, setup, depth, limits)
        verdicts.append((i, result.verdict))
        if result.verdict is not False:
            break
    return verdicts


def summarize_power_verdicts(
    verdicts: Sequence[tuple[int, bool | None]],
) -> tuple[ExtendedNat | None, str]:
    """Exact phi (or None) plus a human summary from a verdict sequence."""
    if not verdicts:
        return None, "no fibred powers checked"
    last_clear = 0
    for i, verdict in verdicts:
        if verdict is False:
            last_clear = i
        elif verdict is True:
            if i == last_clear + 1:
                return ExtendedNat(last_clear), f"phi = {last_clear} (vertical at power {i})"
            return None, f"vertical at power {i} but power {i - 1} unchecked"
        else:
            return None, f"power {i} inconclusive; phi >= {last_clear} known"
    return None, f"no vertical component up to power {last_clear}; phi >= {last_clear}"


@dataclass(frozen=True)
class MultiplicityQuery:
    """Certified data for the generic fibre-cardinality bound.

    ``common_dim`` is the shared pure dimension of source and target and
    ``special_fibre_dim`` the (positive) fibre dimension over the single
    special point; ``premises`` records which certifications succeeded.
    """

    common_dim: int
    special_fibre_dim: int
    premises: tuple[str, ...]

    def __post_init__(self):
        if self.common_dim < 1 or self.special_fibre_dim < 1:
            raise FibrephiError("multiplicity query needs positive dimensions")


_MULTIPLICITY_PREMISES = (
    "source-pure",
    "dimensions-match",
    "single-positive-stratum",
    "point-image",
    "route",
)


def certify_multiplicity_query(
    setup: ProjectionSetup,
    strat: Stratification,
    purity: PurityResult,
    limits: Limits = DEFAULT_LIMITS,
) -> MultiplicityQuery | None:
    """Check the premises of the fibre-cardinality bound against computed data.

    Needs source and target of one common pure dimension, exactly one stratum
    of positive fibre dimension whose image is a single rational point, and
    one of the exactness routes (smooth target, curve target, or complete
    intersection).  Returns None when any premise fails.
    """
    premises: list[str] = []
    if purity.pure is True and setup.assert_target_pure_dimensional:
        premises.append("source-pure")
    else:
        return None
    if setup.m == setup.n and setup.m >= 1:
        premises.append("dimensions-match")
    else:
        return None
    positive = [s for s in strat.strata if s.fibre_dim > 0]
    if len(positive) != 1 or positive[0].image_dim != 0:
        return None
    premises.append("single-positive-stratum")
    special = positive[0]
    if single_rational_point(special.image_ideal, limits) is None:
        return None  # the special image is not certified to be one rational point
    premises.append("point-image")
    smooth = setup.target_ideal.is_zero_ideal
    curve = setup.n == 1 and setup.assert_target_locally_irreducible
    complete = (
        setup.r == (setup.n + setup.k) - setup.m
        and setup.assert_target_locally_irreducible
        and setup.assert_target_pure_dimensional
    )
    if not (smooth or curve or complete):
        return None
    premises.append("route")
    return MultiplicityQuery(
        common_dim=setup.m,
        special_fibre_dim=special.fibre_dim,
        premises=tuple(premises),
    )


def multiplicity_bound(query: MultiplicityQuery) -> int:
    """Generic fibres have at least [(d - 1) / q] points under the certified premises."""
    missing = set(_MULTIPLICITY_PREMISES) - set(query.premises)
    if missing:
        raise PreconditionError(f"uncertified premises: {sorted(missing)}")
    return (query.common_dim - 1) // query.special_fibre_dim
