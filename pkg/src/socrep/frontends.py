"""Reductions from common convex-modeling primitives to weighted
geometric-mean instances, plus constraint emission.

Each ``to_*`` helper maps one modeling primitive (rational powers, p-norms,
power cones, ...) onto one or more normalized weight tuples whose quadratic
chains realize it, together with the side constraints (variable fixing,
sum equalities, absolute-value dominations) that glue the pieces back to the
original variables.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .core import Configuration, InvalidInputError, WeightTuple
from .verify import reconstruct


@dataclass(frozen=True)
class WgmInstance:
    """One weighted geometric-mean inequality over named variables.

    ``weights[k]`` is the exponent of ``variables[k]``; ``target`` is the
    variable bounded by the weighted geometric mean of the others.
    """

    weights: WeightTuple
    variables: tuple[str, ...]
    target: str

    def __post_init__(self) -> None:
        if len(self.variables) != self.weights.m:
            raise InvalidInputError(
                f"{self.weights.m} weights but {len(self.variables)} variables"
            )

    def to_json(self) -> dict:
        return {
            "s": list(self.weights.s),
            "variables": list(self.variables),
            "target": self.target,
        }


@dataclass(frozen=True)
class SideConstraint:
    """Auxiliary constraint accompanying a reduction.

    kind is one of:
      - "fix-one":  args = (var,)            var == 1
      - "sum-eq":   args = (v1, ..., vk, r)  v1 + ... + vk == r
      - "abs-le":   args = (a, b)            |a| <= b
    """

    kind: str
    args: tuple[str, ...]

    def render(self) -> str:
        if self.kind == "fix-one":
            return f"{self.args[0]} == 1"
        if self.kind == "sum-eq":
            return " + ".join(self.args[:-1]) + f" == {self.args[-1]}"
        if self.kind == "abs-le":
            return f"|{self.args[0]}| <= {self.args[1]}"
        raise InvalidInputError(f"unknown side-constraint kind {self.kind!r}")

    def to_json(self) -> dict:
        return {"kind": self.kind, "args": list(self.args)}


@dataclass(frozen=True)
class FrontendResult:
    family: str
    instances: tuple[WgmInstance, ...]
    sides: tuple[SideConstraint, ...] = ()
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "schema": "socrep-v1",
            "family": self.family,
            "instances": [inst.to_json() for inst in self.instances],
            "side_constraints": [sc.to_json() for sc in self.sides],
            "notes": list(self.notes),
        }


def as_rational(value) -> Fraction:
    """Parse an exact rational from int, Fraction, (num, den) or 'a/b' text."""
    if isinstance(value, bool):
        raise InvalidInputError(f"expected a rational number, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, tuple) and len(value) == 2:
        num, den = value
        if not (isinstance(num, int) and isinstance(den, int)):
            raise InvalidInputError(f"expected integer numerator/denominator, got {value!r}")
        if den == 0:
            raise InvalidInputError("zero denominator")
        return Fraction(num, den)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInputError(f"cannot parse rational from {value!r}") from exc
    raise InvalidInputError(f"expected a rational number, got {value!r}")


def _normalized(entries: list[int]) -> WeightTuple:
    g = math.gcd(*entries)
    return WeightTuple(tuple(e // g for e in entries))


def to_wgm(exponents, variables=None, target: str = "t") -> FrontendResult:
    """Weighted geometric mean with rational exponents summing to anything:
    t <= prod_i x_i^{c_i} becomes one integer-weight instance after clearing
    denominators."""
    fracs = [as_rational(e) for e in exponents]
    if not fracs or any(f <= 0 for f in fracs):
        raise InvalidInputError("exponents must be positive rationals")
    if variables is None:
        variables = tuple(f"x{k + 1}" for k in range(len(fracs)))
    variables = tuple(variables)
    if len(variables) != len(fracs):
        raise InvalidInputError("one variable name per exponent required")
    denom = math.lcm(*(f.denominator for f in fracs))
    ints = [int(f * denom) for f in fracs]
    w = _normalized(ints)
    return FrontendResult("wgm", (WgmInstance(w, variables, target),))


def to_sub_unit_wgm(exponents, variables=None, target: str = "t") -> FrontendResult:
    """Monomial with positive rational exponents summing to less than one:
    pad with a slack variable fixed to 1 carrying the missing weight."""
    fracs = [as_rational(e) for e in exponents]
    if not fracs or any(f <= 0 for f in fracs):
        raise InvalidInputError("exponents must be positive rationals")
    total = sum(fracs)
    if total >= 1:
        raise InvalidInputError(f"exponents sum to {total}, expected less than 1")
    if variables is None:
        variables = tuple(f"x{k + 1}" for k in range(len(fracs)))
    variables = tuple(variables)
    if len(variables) != len(fracs):
        raise InvalidInputError("one variable name per exponent required")
    denom = math.lcm(*(f.denominator for f in fracs))
    ints = [int(f * denom) for f in fracs]
    slack = denom - sum(ints)
    w = _normalized(ints + [slack])
    return FrontendResult(
        "sub-unit-wgm",
        (WgmInstance(w, variables + ("z",), target),),
        (SideConstraint("fix-one", ("z",)),),
    )


def to_power(lam, x: str = "x", t: str = "t") -> FrontendResult:
    """Rational power t >= x^lam (lam > 1) or t <= x^lam (0 < lam < 1).

    lam = a/b > 1:  x^a <= t^b * 1^(a-b)  -> x <= t^{b/a} z^{(a-b)/a}, z == 1.
    lam in (0,1):   t <= x^{a/b}          -> t <= x^{a/b} z^{(b-a)/b}, z == 1.
    """
    f = as_rational(lam)
    if f <= 0:
        raise InvalidInputError(f"power must be positive, got {f}")
    a, b = f.numerator, f.denominator
    if f > 1:
        w = _normalized([b, a - b])
        return FrontendResult(
            "power-up",
            (WgmInstance(w, (t, "z"), x),),
            (SideConstraint("fix-one", ("z",)),),
            (f"epigraph of x^{f}: x <= t^{Fraction(b, a)} z^{Fraction(a - b, a)}",),
        )
    if f == 1:
        return FrontendResult(
            "power-up",
            (WgmInstance(WeightTuple((1,)), (x,), t),),
            (),
            ("power 1 is linear; single-variable instance records t <= x",),
        )
    w = _normalized([a, b - a])
    return FrontendResult(
        "power-down",
        (WgmInstance(w, (x, "z"), t),),
        (SideConstraint("fix-one", ("z",)),),
        (f"hypograph of x^{f}: t <= x^{Fraction(a, b)} z^{Fraction(b - a, b)}",),
    )


def to_negative_power(lam, x: str = "x", t: str = "t") -> FrontendResult:
    """t >= x^{-lam} with lam = a/b > 0:  1 <= t^{b/(a+b)} x^{a/(a+b)}."""
    f = as_rational(lam)
    if f <= 0:
        raise InvalidInputError(f"negative-power exponent must be positive, got {f}")
    a, b = f.numerator, f.denominator
    w = _normalized([a, b])
    return FrontendResult(
        "neg-power",
        (WgmInstance(w, (x, t), "z"),),
        (SideConstraint("fix-one", ("z",)),),
        (f"epigraph of x^-{f}: 1 <= x^{Fraction(a, a + b)} t^{Fraction(b, a + b)}",),
    )


def to_negative_power_multi(exponents, variables=None, t: str = "t") -> FrontendResult:
    """t >= prod_i x_i^{-c_i} with positive rational c_i:
    1 <= (prod x_i^{c_i} * t)^{1/(1+sum c_i)} after clearing denominators."""
    fracs = [as_rational(e) for e in exponents]
    if not fracs or any(f <= 0 for f in fracs):
        raise InvalidInputError("exponents must be positive rationals")
    if variables is None:
        variables = tuple(f"x{k + 1}" for k in range(len(fracs)))
    variables = tuple(variables)
    if len(variables) != len(fracs):
        raise InvalidInputError("one variable name per exponent required")
    denom = math.lcm(*(f.denominator for f in fracs))
    ints = [int(f * denom) for f in fracs]
    w = _normalized(ints + [denom])
    return FrontendResult(
        "neg-power-multi",
        (WgmInstance(w, variables + (t,), "z"),),
        (SideConstraint("fix-one", ("z",)),),
    )


def to_pnorm(p, dim: int, prefix: str = "x", t: str = "t") -> FrontendResult:
    """Epigraph of the p-norm, p = a/b >= 1 rational, in ``dim`` coordinates.

    t >= ||x||_p holds iff there are w_i >= |x_i| with
    w_i <= z^{(a-b)/a} y_i^{b/a}, sum y_i == z, z == t.  Each coordinate
    contributes one geometric-mean instance over (z, y_i)."""
    f = as_rational(p)
    if f < 1:
        raise InvalidInputError(f"p-norms need p >= 1, got {f}")
    if dim < 1:
        raise InvalidInputError("dimension must be positive")
    if f == 1:
        instances = tuple(
            WgmInstance(WeightTuple((1,)), (f"w{k + 1}",), f"{prefix}{k + 1}_bound")
            for k in range(dim)
        )
        sides = tuple(
            SideConstraint("abs-le", (f"{prefix}{k + 1}", f"w{k + 1}")) for k in range(dim)
        ) + (SideConstraint("sum-eq", tuple(f"w{k + 1}" for k in range(dim)) + (t,)),)
        return FrontendResult(
            "p-norm",
            instances,
            sides,
            ("p = 1 is the linear sum of absolute values; no quadratic chain needed",),
        )
    a, b = f.numerator, f.denominator
    w = _normalized([a - b, b])
    instances = []
    sides = []
    for k in range(dim):
        yk, wk, xk = f"y{k + 1}", f"w{k + 1}", f"{prefix}{k + 1}"
        instances.append(WgmInstance(w, (t, yk), wk))
        sides.append(SideConstraint("abs-le", (xk, wk)))
    sides.append(SideConstraint("sum-eq", tuple(f"y{k + 1}" for k in range(dim)) + (t,)))
    return FrontendResult("p-norm", tuple(instances), tuple(sides))


def to_power_cone(alphas, variables=None, z: str = "z") -> FrontendResult:
    """(m+1)-variable power cone: |z| <= prod_i x_i^{alpha_i} with positive
    rational alpha_i summing to one."""
    fracs = [as_rational(al) for al in alphas]
    if not fracs or any(f <= 0 for f in fracs):
        raise InvalidInputError("cone exponents must be positive rationals")
    if sum(fracs) != 1:
        raise InvalidInputError(f"cone exponents must sum to 1, got {sum(fracs)}")
    if variables is None:
        variables = tuple(f"x{k + 1}" for k in range(len(fracs)))
    variables = tuple(variables)
    if len(variables) != len(fracs):
        raise InvalidInputError("one variable name per exponent required")
    denom = math.lcm(*(f.denominator for f in fracs))
    ints = [int(f * denom) for f in fracs]
    w = _normalized(ints)
    return FrontendResult(
        "power-cone",
        (WgmInstance(w, variables, "y"),),
        (SideConstraint("abs-le", (z, "y")),),
    )


def emit_constraints(
    w: WeightTuple,
    cfg: Configuration,
    fmt: str = "text",
    names: tuple[str, ...] | None = None,
    sides: tuple[SideConstraint, ...] = (),
) -> str:
    """Render a configuration as explicit quadratic constraints.

    The configuration is validated by exact reconstruction first; rendering
    an inequality chain that does not actually bound the target would be
    silently wrong."""
    recon = reconstruct(w, cfg)
    if not recon.valid:
        raise InvalidInputError(
            f"configuration does not realize the inequality ({recon.reason})"
        )
    total = cfg.m + cfg.n
    if names is None:
        names = tuple(f"x_{v}" for v in range(1, total + 1))
    if len(names) != total:
        raise InvalidInputError(f"need {total} variable names, got {len(names)}")
    if fmt == "text":
        lines = [f"{names[i - 1]} * {names[j - 1]} >= {names[t - 1]}^2" for i, j, t in cfg.triples]
        lines.extend(sc.render() for sc in sides)
        return "\n".join(lines)
    if fmt == "json":
        doc = {
            "schema": "socrep-v1",
            "m": cfg.m,
            "s": list(w.s),
            "variables": list(names),
            "cones": [
                {"a1": names[i - 1], "a2": names[j - 1], "a3": names[t - 1]}
                for i, j, t in cfg.triples
            ],
            "side_constraints": [sc.to_json() for sc in sides],
        }
        return json.dumps(doc, indent=2)
    raise InvalidInputError(f"unknown format {fmt!r} (expected 'text' or 'json')")
