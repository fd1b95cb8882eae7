from fractions import Fraction

import pytest

from jumpseq.blowup import (
    chunk_transform,
    initial_chart,
    is_admissible,
    monoidal_sequence,
    single_quadratic_transform,
    strict_transform,
    value_in_original,
)
from jumpseq.engine import build_jumping_sequence, extract_independent
from jumpseq.euclid import euclid_data
from jumpseq.fields import QQ
from jumpseq.poly import BivarPoly

from conftest import make_spec


def test_admissibility():
    assert is_admissible(3, 2)
    assert not is_admissible(5, 1)


def test_initial_chart():
    ch = initial_chart(QQ, (Fraction(1), Fraction(3, 2)))
    assert ch.step_index == 0 and ch.free
    assert ch.ratio() == (3, 2)


def test_single_steps_spec_a(js_a):
    ch = initial_chart(QQ, (Fraction(1), js_a.beta[1]))
    ch = single_quadratic_transform(ch, js=js_a)
    assert ch.values == (Fraction(1), Fraction(1, 2))
    assert ch.free  # position 1 <= f_1 = 1
    ch = single_quadratic_transform(ch, js=js_a)
    assert ch.values == (Fraction(1, 2), Fraction(1, 2))
    assert not ch.free  # interior of the chunk
    ch = single_quadratic_transform(ch, js=js_a)
    # the chunk closes: residue 1, new ratio 5/3
    assert ch.free and ch.chunk_pos == 0
    assert ch.values == (Fraction(1, 2), Fraction(5, 6))
    assert ch.chunk_pq == (5, 3)
    assert ch.residues == (QQ(1),)


def test_chunk_closed_form_matches_steps(js_a):
    ch0 = initial_chart(QQ, (Fraction(1), js_a.beta[1]))
    res = chunk_transform(3, 2, 1, ch0, js=js_a)
    stepped = ch0
    for _ in range(euclid_data(3, 2).epsilon):
        stepped = single_quadratic_transform(stepped, js=js_a)
    closed = res.chart
    assert closed.forward == stepped.forward
    assert closed.values == stepped.values
    assert closed.step_index == stepped.step_index
    assert closed.free == stepped.free
    # closed form: u = X^2 (Y+1), v = X^3 (Y+1)^2 with bezout(3,2) = (2,1)
    X, Y = BivarPoly.gens(QQ, ("x", "y"))
    shift = Y + BivarPoly.const(QQ, 1, ("x", "y"))
    assert closed.forward[0] == X ** 2 * shift
    assert closed.forward[1] == X ** 3 * shift ** 2
    assert (res.a, res.b) == (2, 1)
    # value of the exceptional parameter drops by the factor q
    assert closed.values[0] == Fraction(1, 2)


def test_chunk_validates_ratio(js_a):
    ch0 = initial_chart(QQ, (Fraction(1), js_a.beta[1]))
    with pytest.raises(ValueError):
        chunk_transform(5, 3, 1, ch0, js=js_a)


def test_freeness_pattern_3_2(js_a):
    """free at positions 1..f_1 and at epsilon, not free in between."""
    ed = euclid_data(3, 2)
    ch = initial_chart(QQ, (Fraction(1), js_a.beta[1]))
    flags = []
    for _ in range(ed.epsilon):
        ch = single_quadratic_transform(ch, js=js_a)
        flags.append(ch.free)
    expected = [pos <= ed.f[0] or pos == ed.epsilon for pos in range(1, ed.epsilon + 1)]
    assert flags == expected


def test_last_chunk_value_unknown(js_a):
    """After the final certifiable chunk the new second value is unknown
    rather than guessed."""
    ch = initial_chart(QQ, (Fraction(1), js_a.beta[1]))
    for _ in range(7):  # epsilon(3,2) + epsilon(5,3)
        ch = single_quadratic_transform(ch, js=js_a)
    assert ch.values[0] == Fraction(1, 6)
    assert ch.values[1] is None and ch.chunk_pq is None


def test_strict_transform(js_a):
    ch0 = initial_chart(QQ, (Fraction(1), js_a.beta[1]))
    ch = chunk_transform(3, 2, 1, ch0, js=js_a).chart
    g, m = strict_transform(js_a.T[2], ch)
    # T_2 = v^2 - u^3 pulls back to X^6 ((Y+1)^4 - (Y+1)^3)
    assert m == 6
    assert not g.is_local_unit()
    assert value_in_original(g, ch, js_a) == Fraction(23, 6) - 6 * Fraction(1, 2)


def test_monoidal_spec_a(js_a, ind_a):
    reports = monoidal_sequence(js_a, ind_a, 2)
    assert [r["pass"] for r in reports] == [True, True]
    assert [r["step"] for r in reports] == [3, 7]
    assert [r["u_value"] for r in reports] == [Fraction(1, 2), Fraction(1, 6)]
    lvl2 = reports[1]
    exps = [f["exponent"] for f in lvl2["H_factorizations"]]
    # Qbar_2 * betabar_j for j = 0, 1, 2
    assert exps == [6, 9, 23]
    assert lvl2["residue_check"]["pass"]


def test_monoidal_level_one_v_strict(js_a, ind_a):
    rec = monoidal_sequence(js_a, ind_a, 1)[0]
    vs = rec["v_strict"]
    assert vs["pass"]
    assert vs["exceptional_exponent"] == 6  # Qbar_1 * qbar_1 * betabar_1
    assert vs["value"] == Fraction(5, 6)    # (1/Qbar_1)(pbar_2/qbar_2)


def test_monoidal_depth_limited(js_a, ind_a):
    with pytest.raises(ValueError):
        monoidal_sequence(js_a, ind_a, 3)


def test_monoidal_tower():
    js = build_jumping_sequence(make_spec(QQ, [(3, 2), (4, 1), (5, 3)]))
    ind = extract_independent(js)
    reports = monoidal_sequence(js, ind, 2)
    assert all(r["pass"] for r in reports)
