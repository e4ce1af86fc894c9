"""Unit tests for exact reconstruction and numeric spot-checking."""

from __future__ import annotations

from fractions import Fraction

import pytest

from socrep import (
    Configuration,
    InvalidInputError,
    WeightTuple,
    numeric_check,
    reconstruct,
)


class TestReconstruct:
    def test_known_witness(self):
        w = WeightTuple((3, 8))
        cfg = Configuration.from_raw_triples(
            2, [(2, 6, 3), (1, 3, 4), (3, 4, 5), (4, 5, 6)]
        )
        r = reconstruct(w, cfg)
        assert r.valid and r.reason is None
        assert [pt[0] for pt in r.points] == [3, 7, 5, 6]

    def test_designated_point_mismatch(self):
        r = reconstruct(WeightTuple((1, 2)), Configuration(2, ((1, 2, 3),)))
        assert not r.valid
        assert r.reason == "designated-point-mismatch"
        assert r.points[0] == (Fraction(3, 2),)

    def test_cyclic_dependency(self):
        cfg = Configuration(2, ((4, 5, 3), (3, 5, 4), (3, 4, 5)))
        r = reconstruct(WeightTuple((1, 2)), cfg)
        assert not r.valid
        assert r.reason == "cyclic-dependency"
        assert r.points == ()

    def test_cyclic_references_can_still_be_valid(self):
        # the chained variables reference each other in a loop, yet the
        # system is nonsingular and lands exactly on the required points
        w = WeightTuple((7, 5))
        cfg = Configuration.from_raw_triples(2, [(1, 4, 3), (2, 5, 4), (4, 6, 5), (1, 2, 6)])
        r = reconstruct(w, cfg)
        assert r.valid
        assert [pt[0] for pt in r.points] == [7, 2, 4, 6]

    def test_boundary_warning(self):
        w = WeightTuple((2, 1, 1))
        cfg = Configuration.from_raw_triples(3, [(1, 5, 4), (2, 3, 5)])
        r = reconstruct(w, cfg)
        assert r.valid
        assert r.points[1] == (Fraction(0), Fraction(2))
        assert any("boundary" in msg for msg in r.warnings)

    def test_two_dimensional_points(self):
        w = WeightTuple((1, 1, 2))
        cfg = Configuration.from_raw_triples(3, [(3, 5, 4), (1, 2, 5)])
        r = reconstruct(w, cfg)
        assert r.valid
        assert r.points[0] == (Fraction(1), Fraction(1))

    def test_m_mismatch(self):
        with pytest.raises(InvalidInputError):
            reconstruct(WeightTuple((1, 1, 1)), Configuration(2, ((1, 2, 3),)))

    def test_json_shape(self):
        r = reconstruct(WeightTuple((1, 1)), Configuration(2, ((1, 2, 3),)))
        doc = r.to_json()
        assert doc["valid"] is True
        assert doc["points"] == [["1"]]


class TestNumericCheck:
    def test_valid_chain_passes(self):
        w = WeightTuple((3, 8))
        cfg = Configuration.from_raw_triples(
            2, [(2, 6, 3), (1, 3, 4), (3, 4, 5), (4, 5, 6)]
        )
        res = numeric_check(w, cfg)
        assert res.passed and res.trials == 4

    def test_cyclic_chain_passes(self):
        w = WeightTuple((7, 5))
        cfg = Configuration.from_raw_triples(2, [(1, 4, 3), (2, 5, 4), (4, 6, 5), (1, 2, 6)])
        assert numeric_check(w, cfg).passed

    def test_example_chain_with_forward_references(self):
        # regression: a chain whose later variables feed earlier constraints;
        # it reconstructs interior points (1,2), (2,4), (4,2)
        w = WeightTuple((1, 2, 3))
        cfg = Configuration.from_raw_triples(3, [(3, 5, 4), (2, 6, 5), (1, 5, 6)])
        r = reconstruct(w, cfg)
        assert r.valid
        assert r.points == (
            (Fraction(1), Fraction(2)),
            (Fraction(2), Fraction(4)),
            (Fraction(4), Fraction(2)),
        )
        assert numeric_check(w, cfg).passed

    def test_invalid_chain_fails(self):
        # designated point off target: the bound side will not behave like a
        # geometric mean, so some probe must fail
        w = WeightTuple((1, 2))
        cfg = Configuration(2, ((1, 2, 3),))
        res = numeric_check(w, cfg)
        assert not res.passed
        assert res.failures

    def test_deterministic_under_seed(self):
        w = WeightTuple((3, 8))
        cfg = Configuration.from_raw_triples(
            2, [(2, 6, 3), (1, 3, 4), (3, 4, 5), (4, 5, 6)]
        )
        a = numeric_check(w, cfg, trials=3, seed=7)
        b = numeric_check(w, cfg, trials=3, seed=7)
        assert a == b

    def test_m_mismatch(self):
        with pytest.raises(InvalidInputError):
            numeric_check(WeightTuple((1, 1, 1)), Configuration(2, ((1, 2, 3),)))
