"""Shared rings, setups and helpers for the test suite."""

from __future__ import annotations

from pathlib import Path

import pytest

from fibrephi import PolynomialRing, make_setup, parse_polynomial

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURES


def ring_xy() -> PolynomialRing:
    """Two source variables, no target block: plain Q[x, y]."""
    return PolynomialRing((), ("x", "y"))


def ring_y_x() -> PolynomialRing:
    """One target and one source variable: the smallest projection ring."""
    return PolynomialRing(("y",), ("x",))


def quadric_cone_setup():
    """Projection of a quadratic-in-x family over the determinantal cone."""
    ring = PolynomialRing(("y1", "y2", "y3", "y4"), ("x",))
    return make_setup(
        ring,
        ambient_target_generators=[parse_polynomial("y1*y4 - y2*y3", ring)],
        source_generators=[parse_polynomial("y1*x^2 + y4*x + y2 - y3", ring)],
        assert_target_locally_irreducible=True,
        assert_target_pure_dimensional=True,
    )


def cyclic_family_setup(n: int, l: int):
    """The two-form family over C^n whose invariant is l - 1 by hand."""
    ring = PolynomialRing(
        tuple(f"y{i}" for i in range(1, n + 1)),
        tuple(f"x{i}" for i in range(1, n + 2)),
    )
    g1 = " + ".join(f"y{i}*x{i}" for i in range(1, l + 1)) + f" + x{n + 1}^2"
    if l == 1:
        g2 = "y1*x1"
    else:
        g2 = " + ".join([f"y{i + 1}*x{i}" for i in range(1, l)] + [f"y1*x{l}"])
    return make_setup(
        ring,
        ambient_target_generators=[],
        source_generators=[parse_polynomial(g1, ring), parse_polynomial(g2, ring)],
        assert_target_locally_irreducible=True,
        assert_target_pure_dimensional=True,
    )


def simple_setup(source_text: str, target_vars=("y",), source_vars=("x",)):
    """A setup over affine target space from one source equation string."""
    ring = PolynomialRing(target_vars, source_vars)
    return make_setup(
        ring,
        ambient_target_generators=[],
        source_generators=[parse_polynomial(chunk, ring) for chunk in source_text.split(",")],
        assert_target_locally_irreducible=True,
        assert_target_pure_dimensional=True,
    )
