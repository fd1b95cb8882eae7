"""Quadratic transforms along a valuation: charts, chunks, strict transforms.

A :class:`Chart` records one local model in the blow-up chain.  The
forward map (original parameters as polynomials in the current ones) is
the source of truth; backward rational expressions exist only so that
values and residues of the current parameters can be computed through
the valuation engine.

Conventions for a single transform of parameters (U, V):

* value(U) < value(V): new parameters (U, V/U), substitution
  U -> X, V -> X*Y;
* value(U) > value(V): new parameters (U/V, V), substitution
  U -> X*Y, V -> Y;
* equal values: the chunk closes; with c the residue of V/U the new
  parameters are (U, V/U - c) and the substitution is U -> X,
  V -> X*(Y + c).

Composing epsilon(p, q) such steps reproduces the closed-form chunk
chart x = X^q (Y+c)^b, y = X^p (Y+c)^a exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd
from typing import List, Optional, Tuple

from .errors import InsufficientDepthError, InvalidSpecError
from .euclid import bezout, euclid_data
from .engine import IndependentData, JumpingSequence, residue, value
from .fields import GroundField
from .poly import BivarPoly, RatExpr, eval_rat, exact_divide


def is_admissible(p: int, q: int) -> bool:
    """Permissible parameters with value ratio p/q are admissible iff q != 1."""
    return q != 1


@dataclass(frozen=True)
class Chart:
    """A local chart after ``step_index`` quadratic transforms.

    ``forward`` expresses the original parameters as polynomials in the
    current parameters; ``backward`` the current parameters as rational
    expressions in the original ones.  The first current parameter is
    the exceptional one at every free ring.  ``chunk_pos`` counts steps
    inside the current Euclidean chunk and ``chunk_pq`` is the value
    ratio that chunk traverses; ``residues`` collects the constants c
    used at the chunk closings passed so far.
    """

    field: GroundField
    forward: Tuple[BivarPoly, BivarPoly]
    backward: Tuple[RatExpr, RatExpr]
    values: Tuple[Fraction, Optional[Fraction]]
    free: bool
    step_index: int
    chunk_pos: int
    chunk_pq: Optional[Tuple[int, int]]
    residues: tuple = ()

    def ratio(self) -> Tuple[int, int]:
        """The value ratio value(V)/value(U) = p/q in lowest terms."""
        r = Fraction(self.values[1]) / Fraction(self.values[0])
        return (r.numerator, r.denominator)

    def to_json(self):
        return {
            "forward": [f.to_json() for f in self.forward],
            "values": [str(v) if v is not None else None for v in self.values],
            "free": self.free,
            "step": self.step_index,
        }


def initial_chart(field: GroundField, values: Tuple[Fraction, Fraction],
                  forward: Optional[Tuple[BivarPoly, BivarPoly]] = None,
                  backward: Optional[Tuple[RatExpr, RatExpr]] = None,
                  cur_vars: Tuple[str, str] = ("x", "y")) -> Chart:
    if forward is None:
        forward = BivarPoly.gens(field, cur_vars)
    if backward is None:
        u, v = BivarPoly.gens(field, ("u", "v"))
        backward = (RatExpr.from_poly(u), RatExpr.from_poly(v))
    values = (Fraction(values[0]), Fraction(values[1]) if values[1] is not None else None)
    r = Fraction(values[1]) / values[0]
    return Chart(field, forward, backward, values, True, 0, 0,
                 (r.numerator, r.denominator), ())


def _chunk_flags(chunk_pq: Tuple[int, int], pos: int) -> bool:
    """Freeness from chunk position: free at steps 0..f_1 and at epsilon."""
    p, q = chunk_pq
    ed = euclid_data(p, q)
    return pos <= ed.f[0] or pos == ed.epsilon


def single_quadratic_transform(chart: Chart, js: Optional[JumpingSequence] = None,
                               c=None) -> Chart:
    """One quadratic transform along the valuation.

    The residue constant at a chunk-closing (equal values) step is taken
    from ``c`` if supplied, otherwise computed through the engine; the
    engine is also used to re-derive the new second value at closings.
    """
    vU, vV = chart.values
    fu, fv = chart.forward
    bu, bv = chart.backward
    fld = chart.field
    X, Y = BivarPoly.gens(fld, fu.vars)
    pos = chart.chunk_pos + 1

    if vU < vV:
        new_forward = (fu.subs(X, X * Y), fv.subs(X, X * Y))
        new_backward = (bu, bv / bu)
        new_values = (vU, vV - vU)
        free = _chunk_flags(chart.chunk_pq, pos)
        return replace(chart, forward=new_forward, backward=new_backward,
                       values=new_values, free=free,
                       step_index=chart.step_index + 1, chunk_pos=pos)

    if vU > vV:
        new_forward = (fu.subs(X * Y, Y), fv.subs(X * Y, Y))
        new_backward = (bu / bv, bv)
        new_values = (vU - vV, vV)
        free = _chunk_flags(chart.chunk_pq, pos)
        return replace(chart, forward=new_forward, backward=new_backward,
                       values=new_values, free=free,
                       step_index=chart.step_index + 1, chunk_pos=pos)

    # equal values: the chunk closes with a residue translation
    ratio = bv / bu
    if c is None:
        if js is None:
            raise ValueError("closing a chunk requires either c or a jumping sequence")
        c = residue(ratio.num, ratio.den, js)
    new_y = ratio.sub_scalar(c)
    shift = BivarPoly(fld, {(0, 0): fld(c), (0, 1): fld.one}, X.vars)  # Y + c
    new_forward = (fu.subs(X, X * shift), fv.subs(X, X * shift))
    new_backward = (bu, new_y)
    assert pos == euclid_data(*chart.chunk_pq).epsilon, \
        "chunk closed at step %d, expected epsilon%s" % (pos, chart.chunk_pq)
    vY = None
    if js is not None:
        # the new second value needs the next defining pair; at the last
        # certifiable chunk it stays unknown
        try:
            vY = value(new_y.num, js) - value(new_y.den, js)
        except InsufficientDepthError:
            vY = None
    new_pq = None
    if vY is not None:
        r = Fraction(vY) / vU
        new_pq = (r.numerator, r.denominator)
    return replace(chart, forward=new_forward, backward=new_backward,
                   values=(vU, vY), free=True,
                   step_index=chart.step_index + 1, chunk_pos=0,
                   chunk_pq=new_pq, residues=chart.residues + (c,))


@dataclass(frozen=True)
class ChunkResult:
    chart: Chart
    a: int
    b: int
    c: object
    per_step_trace: Tuple[Chart, ...]


def chunk_transform(p: int, q: int, c, chart: Chart,
                    js: Optional[JumpingSequence] = None) -> ChunkResult:
    """The closed-form chart after one full Euclidean chunk.

    From permissible parameters (x, y) with value ratio p/q the chunk
    ends in parameters (X, Y) with x = X^q (Y+c)^b, y = X^p (Y+c)^a
    where a*q - b*p = 1, a <= p, b < q.  The per-step trace is produced
    by the single-transform simulator with the same residue constant.
    """
    if gcd(p, q) != 1:
        raise ValueError("chunk_transform requires coprime (p, q)")
    rp, rq = chart.ratio()
    if (rp, rq) != (p, q):
        raise ValueError("chart value ratio is %s, expected (%d, %d)" % ((rp, rq), p, q))
    fld = chart.field
    a, b = bezout(p, q)
    fu, fv = chart.forward
    bu, bv = chart.backward
    X, Y = BivarPoly.gens(fld, fu.vars)
    shift = BivarPoly(fld, {(0, 0): fld(c), (0, 1): fld.one}, X.vars)  # Y + c
    sub_x = X ** q * shift ** b
    sub_y = X ** p * shift ** a
    new_forward = (fu.subs(sub_x, sub_y), fv.subs(sub_x, sub_y))
    new_backward = (bu ** a / bv ** b, (bv ** q / bu ** p).sub_scalar(c))
    vU = chart.values[0] / q
    vY = None
    if js is not None:
        ny = new_backward[1]
        try:
            vY = value(ny.num, js) - value(ny.den, js)
        except InsufficientDepthError:
            vY = None
    new_pq = None
    if vY is not None:
        r = Fraction(vY) / vU
        new_pq = (r.numerator, r.denominator)
    closed = Chart(fld, new_forward, new_backward, (vU, vY), True,
                   chart.step_index + euclid_data(p, q).epsilon, 0, new_pq,
                   chart.residues + (fld(c),))
    trace = []
    cur = chart
    for _ in range(euclid_data(p, q).epsilon):
        cur = single_quadratic_transform(cur, js=js, c=fld(c) if cur.values[0] == cur.values[1] else None)
        trace.append(cur)
    return ChunkResult(closed, a, b, fld(c), tuple(trace))


def strict_transform(f: BivarPoly, chart: Chart) -> Tuple[BivarPoly, int]:
    """Pull f back through the chart and strip the exceptional factor.

    Returns (g, m) with f(forward) = X^m * g and g not divisible by the
    exceptional coordinate X (the first current parameter).
    """
    if f.is_zero():
        raise ValueError("strict transform of the zero polynomial")
    pulled = f.subs(*chart.forward)
    m = pulled.min_exp_first()
    g = BivarPoly(pulled.field,
                  {(a - m, b): cc for (a, b), cc in pulled.terms.items()},
                  pulled.vars)
    return g, m


def value_in_original(g: BivarPoly, chart: Chart, js: JumpingSequence) -> Fraction:
    """The value of a polynomial in current chart coordinates, computed
    independently through the backward expressions and the engine."""
    r = eval_rat(g, chart.backward[0], chart.backward[1])
    return value(r.num, js) - value(r.den, js)


def monoidal_sequence(js: JumpingSequence, ind: IndependentData, L: int) -> List[dict]:
    """Advance to the chunk boundaries kbar_1, ..., kbar_L and certify
    the monomial structure of the independent polynomials there.

    At each level l the report records: the chart, the value of the
    exceptional parameter (expected 1/Qbar_l), the factorizations
    H_j = u_l^{Qbar_l betabar_j} * unit for j <= l (unit certified by a
    nonzero constant term after exact exponent stripping), the strict
    transform of H_{l+1} with its independently computed value, and the
    residue cross-check lambda_{i_l} = c_l * t_l.
    """
    if L > ind.levels:
        raise ValueError("spec depth provides only %d independent levels" % ind.levels)
    fld = js.field
    H = [js.T[0]] + [js.T[il] for il in ind.indices]

    # the starting system of parameters is (u, H_1); this chart is
    # polynomial only when H_1 - v depends on u alone
    if ind.levels == 0:
        raise ValueError("monoidal sequence requires at least one independent index")
    corr = js.T[1] - H[1]  # v - H_1
    if any(b != 0 for (_, b) in corr.terms):
        raise InvalidSpecError(
            "initial parameter H_1 requires corrections depending on u alone"
        )
    x, y = BivarPoly.gens(fld, ("x", "y"))
    u, v = BivarPoly.gens(fld, ("u", "v"))
    fwd = (x, y + corr.subs(x, y))
    bwd = (RatExpr.from_poly(u), RatExpr.from_poly(H[1]))
    chart = initial_chart(fld, (Fraction(1), ind.betabar[1]), fwd, bwd)

    def nbar(m: int, j: int) -> int:
        # n_{i_m, i_j} with i_0 = 0
        row = js.n[ind.indices[m - 1]]
        pos = 0 if j == 0 else ind.indices[j - 1]
        return row[pos] if pos < len(row) else 0

    reports = []
    prev_gamma_consts = None  # constant terms of gamma_{j, l-1}
    levels_charts = {0: chart}
    for l in range(1, L + 1):
        while chart.step_index < ind.kbar[l]:
            chart = single_quadratic_transform(chart, js=js)
        levels_charts[l] = chart
        rec = {"level": l, "step": chart.step_index}
        rec["u_value"] = chart.values[0]
        rec["u_value_ok"] = chart.values[0] == Fraction(1, ind.Qbar[l])

        # conclusion 3): H_j = u_l^{Qbar_l betabar_j} * unit
        gammas = []
        factor_ok = True
        for j in range(0, l + 1):
            g, m = strict_transform(H[j], chart)
            expected = ind.Qbar[l] * ind.betabar[j]
            ok = (Fraction(m) == expected) and g.is_local_unit()
            factor_ok = factor_ok and ok
            gammas.append({"j": j, "exponent": m, "expected": expected,
                           "unit_constant": fld.render(g.constant_term()), "pass": ok,
                           "_g": g})
        rec["H_factorizations"] = [
            {k: vv for k, vv in gg.items() if k != "_g"} for gg in gammas
        ]
        rec["H_factorizations_ok"] = factor_ok

        # conclusion 2): the strict transform of H_{l+1} carries the value
        # (1/Qbar_l)(pbar_{l+1}/qbar_{l+1}) and the exceptional exponent
        # matches the denominator monomial of v_l
        if l < ind.levels:
            g, m = strict_transform(H[l + 1], chart)
            expected_m = ind.Qbar[l] * ind.qbar[l - 1] * ind.betabar[l]
            mono_exp = sum(nbar(l, j) * ind.Qbar[l] * ind.betabar[j] for j in range(l))
            vg = value_in_original(g, chart, js)
            expected_v = Fraction(ind.pbar[l], ind.qbar[l]) / ind.Qbar[l]
            rec["v_strict"] = {
                "exceptional_exponent": m,
                "expected_exponent": expected_m,
                "denominator_exponent": mono_exp,
                "value": vg,
                "expected_value": expected_v,
                "pass": Fraction(m) == expected_m == mono_exp and vg == expected_v
                and not g.is_local_unit(),
            }

        # residue cross-check lambda_{i_l} = c_l * t_l, with t_l computed
        # from the unit constant terms at level l-1
        c_l = chart.residues[l - 1]
        prev_chart = levels_charts[l - 1]
        consts = []
        for j in range(0, l):
            g, m = strict_transform(H[j], prev_chart)
            consts.append(g.constant_term())
        tau = fld.one
        for j in range(0, l - 1):
            tau = tau * consts[j] ** nbar(l - 1, j)
        tau = tau ** js.q(ind.indices[l - 1])
        tau_den = fld.one
        for j in range(0, l):
            tau_den = tau_den * consts[j] ** nbar(l, j)
        t_l = tau / tau_den
        lam = fld(js.spec.lambdas[ind.indices[l - 1] - 1])
        rec["residue_check"] = {
            "c": fld.render(c_l),
            "t": fld.render(t_l),
            "lambda": fld.render(lam),
            "pass": c_l * t_l == lam,
        }
        rec["chart"] = chart
        rec["pass"] = (rec["u_value_ok"] and factor_ok
                       and rec.get("v_strict", {"pass": True})["pass"]
                       and rec["residue_check"]["pass"])
        reports.append(rec)
    return reports
