import itertools
from fractions import Fraction

import pytest

from jumpseq.engine import (
    ValuationSpec,
    build_jumping_sequence,
    expand,
    exponent_solve,
    extract_independent,
    residue,
    rewrite_in_independent,
    semigroup_below,
    semigroup_member,
    value,
    verify_generating_sequence,
    verify_minimality,
)
from jumpseq.errors import InsufficientDepthError, InvalidSpecError
from jumpseq.fields import QQ
from jumpseq.poly import BivarPoly

from conftest import make_spec


def U_V(fld=QQ):
    return BivarPoly.gens(fld, ("u", "v"))


# ---------------------------------------------------------------------------
# spec validation
# ---------------------------------------------------------------------------


def test_spec_rejects_non_coprime():
    with pytest.raises(InvalidSpecError):
        make_spec(QQ, [(4, 2)])


def test_spec_rejects_zero_lambda():
    with pytest.raises(InvalidSpecError):
        make_spec(QQ, [(3, 2)], lambdas=(QQ(0),))


def test_spec_discrete_requires_q_one():
    with pytest.raises(InvalidSpecError):
        make_spec(QQ, [(3, 2)], mode="discrete")


def test_spec_json_roundtrip(spec_a):
    assert ValuationSpec.from_json(spec_a.to_json()) == spec_a


# ---------------------------------------------------------------------------
# construction oracles
# ---------------------------------------------------------------------------


def test_spec_a_sequence(js_a):
    u, v = U_V()
    assert js_a.T[0] == u and js_a.T[1] == v
    assert js_a.T[2] == v ** 2 - u ** 3
    assert js_a.T[3] == (v ** 2 - u ** 3) ** 3 - u ** 10 * v
    assert js_a.beta == (Fraction(1), Fraction(3, 2), Fraction(23, 6))
    assert js_a.Q == (1, 2, 6)
    assert js_a.n[1] == (3,)
    assert js_a.n[2] == (10, 1)
    assert js_a.vdeg()[:4] == [0, 1, 2, 6]


def test_spec_b_sequence(js_b):
    u, v = U_V()
    assert js_b.T[2] == v - u ** 2
    assert js_b.T[3] == v - u ** 2 - u ** 5
    assert js_b.beta == (Fraction(1), Fraction(2), Fraction(5))
    assert js_b.n[1] == (2,)
    assert js_b.n[2] == (5, 0)


def test_exponent_solve_oracles(js_a):
    beta = [Fraction(1), Fraction(3, 2), Fraction(23, 6)]
    q = [0, 2, 3]
    Q = [1, 2, 6]
    assert exponent_solve(1, beta, q, Q) == (3,)
    assert exponent_solve(2, beta, q, Q) == (10, 1)


def test_tower_sequence():
    js = build_jumping_sequence(make_spec(QQ, [(3, 2), (4, 1), (5, 3)]))
    # beta_2 = 2*(3/2) + (1/2)(4/1) = 5; beta_3 = 1*5 + (1/2)(5/3) = 35/6
    assert js.beta == (Fraction(1), Fraction(3, 2), Fraction(5), Fraction(35, 6))
    assert js.Q == (1, 2, 2, 6)


def test_monic_in_v(battery):
    for _, spec in battery:
        js = build_jumping_sequence(spec)
        for i in range(1, spec.depth + 2):
            T = js.T[i]
            d = T.deg_v()
            lead = T.v_coefficient(d)
            assert lead == BivarPoly.const(spec.field, 1, T.vars), \
                "T_%d of %s not monic in v" % (i, spec.pairs)


# ---------------------------------------------------------------------------
# independent data
# ---------------------------------------------------------------------------


def test_spec_a_independent(ind_a):
    assert ind_a.indices == (1, 2)
    assert ind_a.pbar == (3, 5)
    assert ind_a.qbar == (2, 3)
    assert ind_a.Qbar == (1, 2, 6)
    assert ind_a.betabar == (Fraction(1), Fraction(3, 2), Fraction(23, 6))
    assert ind_a.k == (0, 3, 7)
    assert ind_a.kbar == (0, 3, 7)


def test_tower_independent():
    js = build_jumping_sequence(make_spec(QQ, [(3, 2), (4, 1), (5, 3)]))
    ind = extract_independent(js)
    assert ind.indices == (1, 3)
    # pbar_2 = (p_2) * qbar_2 + p_3 = 4*3 + 5 = 17
    assert ind.pbar == (3, 17)
    assert ind.qbar == (2, 3)


# ---------------------------------------------------------------------------
# expansion, value, residue
# ---------------------------------------------------------------------------


def test_expansion_roundtrip_simple(js_a):
    u, v = U_V()
    f = v ** 4 + u * v ** 2 + u ** 7
    exp = expand(f, js_a)
    assert exp.resubstitute() == f
    for _, e in exp.terms:
        # interior digits stay below the defining denominators
        assert e[1] < 2 and e[2] < 3


def test_values(js_a):
    u, v = U_V()
    assert value(u, js_a) == 1
    assert value(v, js_a) == Fraction(3, 2)
    assert value(v ** 2 - u ** 3, js_a) == Fraction(23, 6)
    assert value(u * v, js_a) == Fraction(5, 2)
    assert value(v ** 2, js_a) == 3


def test_value_additivity_sample(js_a):
    u, v = U_V()
    f = v ** 2 + u ** 2
    g = v - u
    assert value(f * g, js_a) == value(f, js_a) + value(g, js_a)


def test_value_insufficient_depth(js_a):
    # the value of T_3 needs the (unspecified) next defining pair
    with pytest.raises(InsufficientDepthError) as ei:
        value(js_a.T[3], js_a)
    assert ei.value.extra_depth == 1


def test_residue(js_a):
    u, v = U_V()
    assert residue(v ** 2, u ** 3, js_a) == QQ(1)
    assert residue(u ** 2 * v ** 2, u ** 5, js_a) == QQ(1)
    assert residue(v ** 2 + v ** 3, u ** 3, js_a) == QQ(1)


def test_residue_requires_equal_values(js_a):
    u, v = U_V()
    with pytest.raises(ValueError):
        residue(v, u, js_a)


def test_reduced_exponent_uniqueness(js_a):
    """No nontrivial bounded integer relation among the j-values."""
    beta = js_a.beta
    qs = [js_a.q(i) for i in range(1, js_a.depth + 1)]
    for cs in itertools.product(*[range(-(q - 1), q) for q in qs]):
        if all(c == 0 for c in cs):
            continue
        s = sum(c * b for c, b in zip(cs, beta[1:]))
        assert s.denominator != 1, "relation %s" % (cs,)


# ---------------------------------------------------------------------------
# semigroup and minimality
# ---------------------------------------------------------------------------


def test_semigroup_below():
    vals = semigroup_below([Fraction(1), Fraction(3, 2)], Fraction(3))
    assert vals == [Fraction(0), Fraction(1), Fraction(3, 2), Fraction(2),
                    Fraction(5, 2), Fraction(3)]


def test_semigroup_member():
    rep = semigroup_member(Fraction(7, 2), [Fraction(1), Fraction(3, 2)])
    assert rep is not None
    assert sum(c * g for g, c in zip([Fraction(1), Fraction(3, 2)],
                                     [rep.get(0, 0), rep.get(1, 0)])) == Fraction(7, 2)
    assert semigroup_member(Fraction(1, 2), [Fraction(1), Fraction(3, 2)]) is None


def test_minimality_spec_a(ind_a):
    for k in range(3):
        assert verify_minimality(ind_a, k)["minimal"], "betabar_%d" % k


def test_minimality_redundant_h0():
    js = build_jumping_sequence(make_spec(QQ, [(1, 2)]))
    ind = extract_independent(js)
    assert ind.pbar == (1,)
    out = verify_minimality(ind, 0)
    assert not out["minimal"]
    assert out["witness"] == {0: 2}  # 1 = 2 * (1/2)


# ---------------------------------------------------------------------------
# rewriting in the independent polynomials
# ---------------------------------------------------------------------------


def test_rewrite_trivial_for_independent(js_a, ind_a):
    out = rewrite_in_independent(2, js_a, ind_a)
    assert out["identity_checked"] and out["terms"] == []


def test_rewrite_with_intermediate_index():
    js = build_jumping_sequence(make_spec(QQ, [(3, 2), (4, 1), (5, 3)]))
    ind = extract_independent(js)
    out = rewrite_in_independent(2, js, ind)
    assert out["identity_checked"]
    assert len(out["terms"]) == 1


def test_rewrite_discrete_insufficient(js_b):
    ind = extract_independent(js_b)
    with pytest.raises(InsufficientDepthError):
        rewrite_in_independent(1, js_b, ind)


# ---------------------------------------------------------------------------
# generating-sequence verification (small smoke; the full run is in
# test_acceptance)
# ---------------------------------------------------------------------------


def test_verify_generating_smoke(js_a):
    report = verify_generating_sequence(js_a, Fraction(3), 4)
    assert report and all(r["pass"] for r in report)
