"""The extension side: dual jumping sequences under u = x^t * delta, v = y,
chunk descent, the stable-form ladder and the toroidal classifier.

Everything here treats the stable monomial form as an *input assumption*:
when the gcd conditions it implies fail, the contradiction witness is
emitted as a certificate, with no attempt to re-derive the stable form
itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd
from typing import List, Optional, Tuple

from .blowup import Chart, initial_chart, single_quadratic_transform, strict_transform
from .engine import (
    IndependentData,
    JumpingSequence,
    ValuationSpec,
    build_jumping_sequence,
    extract_independent,
)
from .errors import InvalidSpecError, ResourceLimitError
from .fields import GroundField
from .poly import BivarPoly, RatExpr, exact_divide


@dataclass(frozen=True)
class MonomialExtension:
    """The stable monomial inclusion u = x^t * delta, v = y.

    ``delta`` is a polynomial unit in (x, y) with constant term 1 and
    ``base_spec`` defines the downstairs valuation on (u, v).  The
    upstairs value group is normalized by the factor t, so the upstairs
    engine computes t times the genuine upstairs values.
    """

    t: int
    delta: BivarPoly
    base_spec: ValuationSpec

    def __post_init__(self):
        if self.t < 1:
            raise InvalidSpecError("extension exponent t must be positive")
        if self.delta.constant_term() != self.base_spec.field.one:
            raise InvalidSpecError("delta must have constant term 1")

    @property
    def field(self) -> GroundField:
        return self.base_spec.field

    def substitution(self) -> Tuple[BivarPoly, BivarPoly]:
        """(x^t * delta, y): the images of u and v in the upstairs ring."""
        x, y = BivarPoly.gens(self.field, ("x", "y"))
        return (x ** self.t * self.delta, y)

    def to_json(self):
        return {"t": self.t, "delta": self.delta.to_json(), "spec": self.base_spec.to_json()}

    @classmethod
    def from_json(cls, obj) -> "MonomialExtension":
        spec = ValuationSpec.from_json(obj["spec"])
        delta = BivarPoly.from_json(spec.field, obj.get("delta", "1"), vars=("x", "y"))
        return cls(int(obj["t"]), delta, spec)


# ---------------------------------------------------------------------------
# dual sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DualSequences:
    ext: MonomialExtension
    down: JumpingSequence
    up: Optional[JumpingSequence]
    ok: bool
    failing_index: Optional[int]
    table: Tuple[dict, ...] = ()

    def to_json(self):
        return {
            "ok": self.ok,
            "failing_index": self.failing_index,
            "table": list(self.table),
        }


def first_gcd_failure(t: int, pairs, upto: Optional[int] = None) -> Optional[int]:
    """The minimal index M with gcd(t, q_M) != 1, or None."""
    for i, (_, q) in enumerate(pairs, start=1):
        if upto is not None and i > upto:
            break
        if gcd(t, q) != 1:
            return i
    return None


def build_dual_sequences(ext: MonomialExtension, k: Optional[int] = None) -> DualSequences:
    """Build the upstairs jumping sequence and verify it against the
    downstairs one term by term.

    Requires trivial downstairs units.  When gcd(t, Q_k) != 1 the result
    carries the first failing index instead of an upstairs sequence.
    """
    spec = ext.base_spec
    fld = ext.field
    if k is None:
        k = spec.depth
    if k > spec.depth:
        raise InvalidSpecError("requested depth %d exceeds spec depth %d" % (k, spec.depth))
    one = BivarPoly.const(fld, 1, ("u", "v"))
    if any(u != one for u in spec.units):
        raise InvalidSpecError("dual sequences require trivial downstairs units")

    down = build_jumping_sequence(spec)
    M = first_gcd_failure(ext.t, spec.pairs, upto=k)
    if M is not None:
        return DualSequences(ext, down, None, False, M)

    up_pairs = tuple((ext.t * p, q) for p, q in spec.pairs[:k])
    up_units = tuple(ext.delta ** down.n[i][0] for i in range(1, k + 1))
    up_spec = ValuationSpec(fld, up_pairs, spec.lambdas[:k], up_units, spec.mode)
    up = build_jumping_sequence(up_spec, vars=("x", "y"))

    sub = ext.substitution()
    table = []
    ok = True
    for i in range(1, k + 2):
        identical = down.T[i].subs(*sub) == up.T[i]
        row = {"i": i, "T_equal": identical}
        if i <= k:
            row["p_prime"] = up.p(i)
            row["q_prime"] = up.q(i)
            row["pq_ok"] = up.p(i) == ext.t * down.p(i) and up.q(i) == down.q(i)
            row["beta_ok"] = up.beta[i] == ext.t * down.beta[i]
            row["n_ok"] = (up.n[i][0] == ext.t * down.n[i][0]
                           and up.n[i][1:] == down.n[i][1:])
            ok = ok and row["pq_ok"] and row["beta_ok"] and row["n_ok"]
        ok = ok and identical
        table.append(row)
    return DualSequences(ext, down, up, ok, None, tuple(table))


# ---------------------------------------------------------------------------
# chunk descent
# ---------------------------------------------------------------------------


def chunk_descend(t: int, p_prime: int, q_prime: int, characteristic: int,
                  c_prime=None, fld: Optional[GroundField] = None) -> dict:
    """Arithmetic of one chunk descent from upstairs data (p', q').

    With g = gcd(t, p'), t~ = t/g the downstairs chunk traverses
    (p, q) = (p'/g, q'*t~); the residues relate by c = (c')^{t~} and the
    p-adic split t~ = char^n * t' governs the shape of the new second
    parameter.  The Bezout identity q'*t*a - p'*b = g is checked exactly.
    """
    if gcd(p_prime, q_prime) != 1:
        raise ValueError("(p', q') must be coprime")
    g = gcd(t, p_prime)
    t_tilde = t // g
    p = p_prime // g
    q = q_prime * t_tilde
    from .euclid import bezout

    a, b = bezout(p, q)
    assert q_prime * t * a - p_prime * b == g
    n = 0
    t_rest = t_tilde
    if characteristic > 0:
        while t_rest % characteristic == 0:
            t_rest //= characteristic
            n += 1
    out = {
        "g": g,
        "t_tilde": t_tilde,
        "p": p,
        "q": q,
        "a": a,
        "b": b,
        "n": n,
        "t_prime": t_rest,
        "stable": g == t,
    }
    if c_prime is not None and fld is not None:
        out["c"] = fld.render(fld(c_prime) ** t_tilde)
    return out


# ---------------------------------------------------------------------------
# prepared pairs
# ---------------------------------------------------------------------------


def prepared_pair_check(ext: MonomialExtension, chart_R: Chart, chart_S: Chart) -> dict:
    """The computable prepared-pair conditions for a pair of charts.

    Checks freeness flags, positivity of the parameter values
    (domination), and the monomial relation between the exceptional
    parameters with a certified unit.  The critical-locus condition has
    no computational carrier and is recorded as assumed.
    """
    diagnostics = []
    ok = True
    if not chart_R.free or not chart_S.free:
        ok = False
        diagnostics.append("a chart in the pair is not free")
    for ch in (chart_R, chart_S):
        for v in ch.values:
            if v is not None and v <= 0:
                ok = False
                diagnostics.append("nonpositive parameter value %s" % v)
    unit = _stable_unit(ext, chart_R, chart_S)
    if unit is None or not unit.is_local_unit():
        ok = False
        diagnostics.append("delta not a unit")
    return {
        "prepared": ok,
        "critical_locus": "assumed",
        "diagnostics": diagnostics,
        "delta_constant": ext.field.render(unit.constant_term()) if unit is not None else None,
    }


def _to_upstairs(ext: MonomialExtension, r: RatExpr) -> RatExpr:
    """Substitute u = x^t*delta, v = y into a rational expression in (u, v)."""
    sx, sy = ext.substitution()
    return RatExpr(r.num.subs(sx, sy), r.den.subs(sx, sy))


def _stable_unit(ext: MonomialExtension, chart_R: Chart, chart_S: Chart) -> Optional[BivarPoly]:
    """The unit Delta with u_i = x_i^t * Delta, as a polynomial in the
    S-chart coordinates; None when the exact division fails."""
    u_i = _to_upstairs(ext, chart_R.backward[0])
    x_i = chart_S.backward[0]
    quot = u_i / x_i ** ext.t
    fx, fy = chart_S.forward
    num = quot.num.subs(fx, fy)
    den = quot.den.subs(fx, fy)
    try:
        return exact_divide(num, den)
    except Exception:
        return None


def _second_param_certificate(ext: MonomialExtension, chart_R: Chart, chart_S: Chart) -> dict:
    """Certify that the R-side second parameter pulls back to a regular
    parameter completing the S-chart exceptional coordinate.

    The pullback is W = num/den with den a unit; the certificate is:
    den has nonzero constant term, W vanishes at the origin, and the
    restriction of num to the exceptional locus (first coordinate = 0)
    has order exactly 1 in the second coordinate.
    """
    V = _to_upstairs(ext, chart_R.backward[1])
    fx, fy = chart_S.forward
    num = V.num.subs(fx, fy)
    den = V.den.subs(fx, fy)
    # strip the common exceptional monomial
    r = RatExpr(num, den)
    num, den = r.num, r.den
    den_unit = den.is_local_unit()
    vanishes = num.constant_term() == ext.field.zero
    restricted = {b for (a, b) in num.terms if a == 0}
    order_one = bool(restricted) and min(restricted) == 1
    return {
        "den_unit": den_unit,
        "vanishes_at_origin": vanishes,
        "exceptional_order_one": order_one,
        "pass": den_unit and vanishes and order_one,
    }


def prepared_pair_step(ext: MonomialExtension, chart_R: Chart, chart_S: Chart,
                       f_n: BivarPoly, js_up: JumpingSequence,
                       js_down: JumpingSequence, ceiling: int = 64) -> dict:
    """One step of the prepared-pair resolution.

    Advances the S-chain until it is free and the strict transform of
    f_n is empty (a local unit), then advances the R-chain to the
    maximal ring the new S-ring dominates.  Both searches are bounded by
    ``ceiling`` quadratic transforms.
    """
    if f_n.is_local_unit():
        raise ValueError("f_n is already a unit; the pair needs no step")
    steps = 0
    while True:
        chart_S = single_quadratic_transform(chart_S, js=js_up)
        steps += 1
        if steps > ceiling:
            raise ResourceLimitError("S-side search exceeded %d transforms" % ceiling)
        g, _ = strict_transform(f_n, chart_S)
        if chart_S.free and g.is_local_unit():
            break
    s_next = chart_S.step_index
    # maximal r with the new S-ring dominating R_r
    best = chart_R
    steps = 0
    while True:
        nxt = single_quadratic_transform(chart_R, js=js_down)
        steps += 1
        if steps > ceiling:
            raise ResourceLimitError("R-side search exceeded %d transforms" % ceiling)
        if not _dominates(ext, nxt, chart_S):
            break
        chart_R = nxt
        best = nxt
    return {"s_next": s_next, "r_next": best.step_index,
            "chart_R": best, "chart_S": chart_S}


def _dominates(ext: MonomialExtension, chart_R: Chart, chart_S: Chart) -> bool:
    """True when the S-chart local ring contains the R-chart parameters
    with positive values (bounded computable domination test)."""
    for r in chart_R.backward:
        up = _to_upstairs(ext, r)
        fx, fy = chart_S.forward
        num = up.num.subs(fx, fy)
        den = up.den.subs(fx, fy)
        rr = RatExpr(num, den)
        if not rr.den.is_local_unit():
            return False
        if rr.num.constant_term() != ext.field.zero:
            return False
    return True


# ---------------------------------------------------------------------------
# the ladder
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LadderCertificate:
    rungs: Tuple[dict, ...]
    outcome: dict           # {"kind": "toroidal"} or {"kind": "contradiction", ...}
    ok: bool

    def to_json(self):
        return {"rungs": list(self.rungs), "outcome": self.outcome, "ok": self.ok}


def ladder(ext: MonomialExtension, depth: Optional[int] = None) -> LadderCertificate:
    """Walk the chunk-wise ladder of the stable form.

    Rung i (0-based) certifies the stable relation u_i = x_i^t * delta_i,
    the regular-parameter property of v_i = y_i on the S side, the
    residue compatibility c_i = c'_i, and the value ratio
    p'_{i+1}/q'_{i+1}.  On the first index M with gcd(t, q_M) != 1 the
    walk stops with the contradiction witness (M, l, g).
    """
    spec = ext.base_spec
    if depth is None:
        depth = spec.depth
    if depth > spec.depth:
        raise InvalidSpecError("ladder depth %d exceeds spec depth %d" % (depth, spec.depth))
    t = ext.t
    down = build_jumping_sequence(spec)
    ind = extract_independent(down)

    M = first_gcd_failure(t, spec.pairs, upto=depth)
    if M is not None:
        # the contradiction witness of the stable-form argument
        l = list(ind.indices).index(M) + 1
        pbar = ind.pbar[l - 1]
        qbar = ind.qbar[l - 1]
        pbar_prime = t * pbar // gcd(t * pbar, qbar)
        g = gcd(pbar_prime, t)
        outcome = {"kind": "contradiction", "M": M, "l": l, "g": g,
                   "pbar_prime": pbar_prime}
        return LadderCertificate((), outcome, False)

    duals = build_dual_sequences(ext, k=depth)
    assert duals.ok and duals.up is not None
    up = duals.up

    fld = ext.field
    chart_R = initial_chart(fld, (Fraction(1), down.beta[1]),
                            forward=BivarPoly.gens(fld, ("U", "V")))
    x, y = BivarPoly.gens(fld, ("x", "y"))
    chart_S = initial_chart(fld, (Fraction(1), up.beta[1]),
                            forward=BivarPoly.gens(fld, ("X", "Y")),
                            backward=(RatExpr.from_poly(x), RatExpr.from_poly(y)))

    def strict_param_ratio(js_side: JumpingSequence, idx: int) -> RatExpr:
        """v_idx = T_{idx+1} / prod_j T_j^{n_{idx,j}} as a rational expression."""
        r = RatExpr.from_poly(js_side.T[idx + 1])
        if idx >= 1:
            for j, e in enumerate(js_side.n[idx]):
                if e:
                    r = r / RatExpr.from_poly(js_side.T[j]) ** e
        return r

    from .engine import residue as engine_residue
    from .blowup import value_in_original

    rungs = []
    for i in range(depth):
        prev_R, prev_S = chart_R, chart_S
        if i > 0:
            # advance both chains through chunk i; the upstairs chain may
            # traverse it in several short permissible sub-chunks, but the
            # ring sequence (one blow-up per step) is intrinsic
            target_R = chart_R.step_index + _eps(down.p(i), down.q(i))
            while chart_R.step_index < target_R:
                chart_R = single_quadratic_transform(chart_R, js=down)
            target_S = chart_S.step_index + _eps(up.p(i), up.q(i))
            while chart_S.step_index < target_S:
                chart_S = single_quadratic_transform(chart_S, js=up)
        rec = {"i": i, "t": t,
               "step_R": chart_R.step_index, "step_S": chart_S.step_index}
        if i == 0:
            delta_i = ext.delta
            rec["delta_constant"] = fld.render(delta_i.constant_term())
            rec["delta_unit"] = delta_i.is_local_unit()
            rec["second_param"] = {"pass": True}
            rec["residue_match"] = True
        else:
            unit = _stable_unit(ext, chart_R, chart_S)
            rec["delta_unit"] = unit is not None and unit.is_local_unit()
            rec["delta_constant"] = fld.render(unit.constant_term()) if unit is not None else None
            rec["second_param"] = _second_param_certificate(ext, chart_R, chart_S)
            # goodchunk residue compatibility: t~ = 1, so c_i = c'_i; both
            # residues are taken on the admissible parameters entering the
            # chunk (the strict-transform second parameter)
            vr = strict_param_ratio(down, i - 1) ** down.q(i) / prev_R.backward[0] ** down.p(i)
            c = engine_residue(vr.num, vr.den, down)
            vs = strict_param_ratio(up, i - 1) ** up.q(i) / prev_S.backward[0] ** up.p(i)
            c_prime = engine_residue(vs.num, vs.den, up)
            rec["residue_match"] = c == c_prime
            rec["c"] = fld.render(c)
        # the rung value ratio belongs to the admissible pair
        # (x_i, y_i = v_i): the exceptional chain parameter and the strict
        # transform of T'_{i+1}
        g, m = strict_transform(up.T[i + 1], chart_S)
        vx = chart_S.values[0]
        vg = value_in_original(g, chart_S, up)
        ratio = Fraction(vg) / vx
        rec["x_value_ok"] = vx == Fraction(1, up.Q[i])
        rec["exceptional_exponent"] = m
        rec["value_ratio"] = [ratio.numerator, ratio.denominator]
        rec["ratio_ok"] = (ratio.numerator, ratio.denominator) == (up.p(i + 1), up.q(i + 1))
        rec["pass"] = (rec["delta_unit"] and rec["second_param"]["pass"]
                       and rec["residue_match"] and rec["ratio_ok"]
                       and rec["x_value_ok"])
        rungs.append(rec)
    ok = all(r["pass"] for r in rungs)
    return LadderCertificate(tuple(rungs), {"kind": "toroidal"}, ok)


def _eps(p: int, q: int) -> int:
    from .euclid import euclid_data

    return euclid_data(p, q).epsilon


# ---------------------------------------------------------------------------
# discrete branch and classification
# ---------------------------------------------------------------------------


def discrete_branch_report(ext: MonomialExtension) -> dict:
    """Verify that 1/t generates the upstairs value group in discrete mode.

    Upstairs values of x and of every T'_i must be integer multiples of
    1/t, with 1/t itself attained.
    """
    duals = build_dual_sequences(ext)
    assert duals.up is not None
    t = ext.t
    values = [Fraction(1, t)] + [b / t for b in duals.up.beta[1:]]
    multiples = all((v * t).denominator == 1 for v in values)
    return {
        "values": [str(v) for v in values],
        "all_multiples_of_1_over_t": multiples,
        "one_over_t_attained": Fraction(1, t) in values,
        "pass": multiples and Fraction(1, t) in values,
    }


@dataclass(frozen=True)
class ToroidalForm:
    case: int
    shape: str
    minimal: Optional[bool]
    notes: str = ""

    def to_json(self):
        return {"case": self.case, "shape": self.shape,
                "minimal": self.minimal, "notes": self.notes}


def classify_toroidal_form(flags: dict, ladder_outcome: Optional[dict] = None,
                           minimality: Optional[bool] = None) -> ToroidalForm:
    """Map valuation-type flags and a ladder outcome to one of the five
    toroidal shapes.  Cases 1-3 are declarative reports from the flags;
    cases 4 and 5 come with the computed certificates.
    """
    if flags.get("divisorial"):
        return ToroidalForm(1, "u = x^a * unit", True,
                            "single-element minimal generating sequences")
    if flags.get("rank") == 2:
        return ToroidalForm(2, "u = x^a y^b * unit, v = y^d * unit", True,
                            "shape report only")
    if flags.get("rational_rank") == 2:
        return ToroidalForm(3, "u = x^a y^b * unit, v = x^c y^d * unit", True,
                            "shape report only")
    if flags.get("discrete"):
        return ToroidalForm(5, "u = x^t * unit; sequences {u,{T_i}} and {x,{T_i}}",
                            False, "discrete non-divisorial: non-minimal by construction")
    if ladder_outcome is not None and ladder_outcome.get("kind") == "contradiction":
        raise InvalidSpecError(
            "inputs inconsistent with stable form: witness %s" % (ladder_outcome,)
        )
    return ToroidalForm(4, "H_0 = x^a * unit, H_1 = y; sequences {H_l} and {x,{H_l}}",
                        minimality,
                        "minimal iff pbar_1 != 1")
