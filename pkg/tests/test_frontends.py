"""Unit tests for modeling-primitive reductions and constraint emission."""

from __future__ import annotations

import json
from fractions import Fraction

import pytest

from socrep import (
    Configuration,
    InvalidInputError,
    WeightTuple,
    as_rational,
    emit_constraints,
    to_negative_power,
    to_negative_power_multi,
    to_pnorm,
    to_power,
    to_power_cone,
    to_sub_unit_wgm,
    to_wgm,
)


class TestAsRational:
    def test_forms(self):
        assert as_rational(3) == 3
        assert as_rational("2/3") == Fraction(2, 3)
        assert as_rational((5, 10)) == Fraction(1, 2)
        assert as_rational(Fraction(7, 2)) == Fraction(7, 2)

    def test_rejects(self):
        for bad in ["x", (1, 0), 1.5, True, None]:
            with pytest.raises(InvalidInputError):
                as_rational(bad)


class TestToWgm:
    def test_clears_denominators(self):
        res = to_wgm(["1/2", "1/3", "1/6"])
        inst = res.instances[0]
        assert inst.weights.s == (3, 2, 1)
        assert inst.target == "t"
        assert res.sides == ()

    def test_exponent_fractions_round_trip(self):
        exps = [Fraction(2, 5), Fraction(1, 3), Fraction(4, 15)]
        inst = to_wgm(exps).instances[0]
        total = sum(exps)
        got = [Fraction(e, inst.weights.s_hat) for e in inst.weights.s]
        assert got == [e / total for e in exps]


class TestSubUnit:
    def test_slack_carries_missing_weight(self):
        res = to_sub_unit_wgm(["1/2", "1/3"])
        inst = res.instances[0]
        assert inst.weights.s == (3, 2, 1)
        assert inst.variables[-1] == "z"
        assert res.sides == tuple([res.sides[0]])
        assert res.sides[0].kind == "fix-one"

    def test_exact_fractions_preserved(self):
        exps = [Fraction(1, 4), Fraction(1, 3)]
        inst = to_sub_unit_wgm(exps).instances[0]
        for e, s in zip(exps, inst.weights.s):
            assert Fraction(s, inst.weights.s_hat) == e

    def test_rejects_sum_at_least_one(self):
        with pytest.raises(InvalidInputError):
            to_sub_unit_wgm(["1/2", "1/2"])


class TestPowers:
    def test_power_up(self):
        res = to_power("3/2")
        inst = res.instances[0]
        assert res.family == "power-up"
        assert inst.weights.s == (2, 1)
        assert inst.variables == ("t", "z")
        assert inst.target == "x"

    def test_power_down(self):
        res = to_power("2/3")
        inst = res.instances[0]
        assert res.family == "power-down"
        assert inst.weights.s == (2, 1)
        assert inst.variables == ("x", "z")
        assert inst.target == "t"

    def test_power_one_is_linear(self):
        res = to_power(1)
        assert res.instances[0].weights.s == (1,)
        assert res.notes

    def test_negative_power(self):
        res = to_negative_power("2/5")
        inst = res.instances[0]
        assert inst.weights.s == (2, 5)
        assert inst.variables == ("x", "t")

    def test_negative_power_multi(self):
        res = to_negative_power_multi(["1/2", "1/3"])
        inst = res.instances[0]
        # exponents (1/2, 1/3) with denominator 6: weights (3, 2, 6), gcd 1
        assert inst.weights.s == (3, 2, 6)
        assert inst.variables[-1] == "t"

    def test_power_rejects_nonpositive(self):
        with pytest.raises(InvalidInputError):
            to_power(0)
        with pytest.raises(InvalidInputError):
            to_negative_power("-1/2")


class TestPnorm:
    def test_three_halves(self):
        res = to_pnorm("3/2", 2)
        assert len(res.instances) == 2
        for inst in res.instances:
            assert inst.weights.s == (1, 2)
        kinds = [sc.kind for sc in res.sides]
        assert kinds.count("abs-le") == 2 and kinds.count("sum-eq") == 1

    def test_integer_p(self):
        res = to_pnorm(3, 4)
        assert all(inst.weights.s == (2, 1) for inst in res.instances)
        assert len(res.instances) == 4

    def test_p_one_degenerates(self):
        res = to_pnorm(1, 3)
        assert res.notes
        assert all(inst.weights.s == (1,) for inst in res.instances)

    def test_rejects_p_below_one(self):
        with pytest.raises(InvalidInputError):
            to_pnorm("1/2", 2)


class TestPowerCone:
    def test_balanced(self):
        res = to_power_cone(["1/2", "1/2"])
        inst = res.instances[0]
        assert inst.weights.s == (1, 1)
        assert res.sides[0].kind == "abs-le"

    def test_rejects_bad_sum(self):
        with pytest.raises(InvalidInputError):
            to_power_cone(["1/2", "1/3"])


class TestEmitConstraints:
    def setup_method(self):
        self.w = WeightTuple((3, 8))
        self.cfg = Configuration.from_raw_triples(
            2, [(2, 6, 3), (1, 3, 4), (3, 4, 5), (4, 5, 6)]
        )

    def test_text(self):
        out = emit_constraints(self.w, self.cfg, fmt="text")
        lines = out.splitlines()
        assert lines[0] == "x_2 * x_6 >= x_3^2"
        assert len(lines) == 4

    def test_json_cone_count_matches_size(self):
        doc = json.loads(emit_constraints(self.w, self.cfg, fmt="json"))
        assert doc["schema"] == "socrep-v1"
        assert len(doc["cones"]) == self.cfg.n

    def test_custom_names(self):
        out = emit_constraints(
            self.w, self.cfg, fmt="text", names=tuple("abcdef")
        )
        assert out.splitlines()[0] == "b * f >= c^2"

    def test_rejects_invalid_chain(self):
        with pytest.raises(InvalidInputError):
            emit_constraints(WeightTuple((1, 2)), Configuration(2, ((1, 2, 3),)))

    def test_rejects_wrong_name_count(self):
        with pytest.raises(InvalidInputError):
            emit_constraints(self.w, self.cfg, names=("a", "b"))
