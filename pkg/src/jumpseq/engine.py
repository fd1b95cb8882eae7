"""Jumping-polynomial sequences, expansions, values and residues.

The central object is :class:`JumpingSequence`: from finite defining data
(coprime pairs, constants, units) it builds the tower

    T_0 = u,  T_1 = v,  T_{i+1} = T_i^{q_i} - lambda_i * delta_i * prod_j T_j^{n_{i,j}}

with values beta_i normalized so that the value of u is 1.  Expansions of
arbitrary polynomials in the T-monomials then give exact values and
residues, with an explicit insufficient-depth error whenever the defining
data does not pin the answer down.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Tuple

from .errors import InsufficientDepthError, InvalidSpecError
from .euclid import euclid_data
from .fields import GroundField
from .poly import BivarPoly, divmod_in_v


# ---------------------------------------------------------------------------
# defining data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ValuationSpec:
    """Finite defining data of a rank-1 rational valuation on k[[u,v]].

    ``pairs`` are the coprime value increments (p_i, q_i), ``lambdas`` the
    nonzero constants, ``units`` polynomials with constant term 1.  In
    ``discrete`` mode all q_i must equal 1.
    """

    field: GroundField
    pairs: Tuple[Tuple[int, int], ...]
    lambdas: tuple
    units: Tuple[BivarPoly, ...]
    mode: str = "nondiscrete"

    def __post_init__(self):
        if self.mode not in ("nondiscrete", "discrete"):
            raise InvalidSpecError("unknown mode %r" % (self.mode,))
        d = self.depth
        if not (len(self.lambdas) == len(self.units) == d):
            raise InvalidSpecError("pairs, lambdas and units must have equal length")
        for i, (p, q) in enumerate(self.pairs, start=1):
            if p <= 0 or q <= 0:
                raise InvalidSpecError("pair %d is not positive: (%d, %d)" % (i, p, q))
            if gcd(p, q) != 1:
                raise InvalidSpecError("pair %d is not coprime: (%d, %d)" % (i, p, q))
            if self.mode == "discrete" and q != 1:
                raise InvalidSpecError("discrete mode requires q_i = 1, got q_%d = %d" % (i, q))
        for i, lam in enumerate(self.lambdas, start=1):
            if self.field(lam) == self.field.zero:
                raise InvalidSpecError("lambda_%d is zero" % i)
        for i, u in enumerate(self.units, start=1):
            if u.constant_term() != self.field.one:
                raise InvalidSpecError("unit delta_%d does not have constant term 1" % i)

    @property
    def depth(self) -> int:
        return len(self.pairs)

    def to_json(self):
        return {
            "field": self.field.to_json(),
            "pairs": [list(pq) for pq in self.pairs],
            "lambdas": [self.field.render(l) for l in self.lambdas],
            "units": [u.to_json() for u in self.units],
            "mode": self.mode,
        }

    @classmethod
    def from_json(cls, obj) -> "ValuationSpec":
        fld = GroundField.from_json(obj["field"])
        pairs = tuple((int(p), int(q)) for p, q in obj["pairs"])
        lambdas = tuple(fld.parse(str(l)) for l in obj["lambdas"])
        units = tuple(
            BivarPoly.from_json(fld, u, vars=("u", "v")) for u in obj.get("units", ["1"] * len(pairs))
        )
        return cls(fld, pairs, lambdas, units, obj.get("mode", "nondiscrete"))


# ---------------------------------------------------------------------------
# the jumping sequence
# ---------------------------------------------------------------------------


def exponent_solve(i: int, beta: List[Fraction], q: List[int], Q: List[int]) -> Tuple[int, ...]:
    """Solve q_i*beta_i = sum_j n_{i,j}*beta_j with 0 <= n_{i,j} < q_j for j >= 1.

    Greedy from j = i-1 down: n_{i,j} is the unique residue mod q_j making
    the partial remainder land in (1/Q_{j-1})Z; what is left over must be
    the nonnegative integer n_{i,0}.  ``beta``/``q``/``Q`` are indexed so
    that beta[j], q[j], Q[j] carry the subscript-j data (q[0]/Q[0] unused
    except Q[0] = 1).
    """
    rem = Fraction(q[i]) * beta[i]
    n = [0] * i
    for j in range(i - 1, 0, -1):
        found = None
        for cand in range(q[j]):
            t = rem - cand * beta[j]
            if (t * Q[j - 1]).denominator == 1:
                found = cand
                break
        if found is None:
            raise InvalidSpecError(
                "no exponent n_{%d,%d} in [0, %d) satisfies the value relation" % (i, j, q[j])
            )
        n[j] = found
        rem -= found * beta[j]
    if rem.denominator != 1 or rem < 0:
        raise InvalidSpecError(
            "value relation at level %d leaves n_{%d,0} = %s, not a nonnegative integer"
            % (i, i, rem)
        )
    n[0] = int(rem)
    return tuple(n)


@dataclass(frozen=True)
class JumpingSequence:
    spec: ValuationSpec
    T: Tuple[BivarPoly, ...]          # T_0 .. T_{depth+1}
    beta: Tuple[Fraction, ...]        # beta_0 .. beta_depth
    Q: Tuple[int, ...]                # Q_0 = 1, Q_i = q_1 ... q_i
    n: Tuple[Tuple[int, ...], ...]    # n[i] = (n_{i,0}, ..., n_{i,i-1}), i >= 1

    @property
    def depth(self) -> int:
        return self.spec.depth

    @property
    def field(self) -> GroundField:
        return self.spec.field

    def q(self, i: int) -> int:
        return self.spec.pairs[i - 1][1]

    def p(self, i: int) -> int:
        return self.spec.pairs[i - 1][0]

    def vdeg(self) -> List[int]:
        return [t.deg_v() for t in self.T]

    def to_json(self):
        f = self.field
        return {
            "T": [t.to_json() for t in self.T],
            "beta": ["%d/%d" % (b.numerator, b.denominator) if b.denominator != 1 else str(b.numerator) for b in self.beta],
            "Q": list(self.Q),
            "n": [list(row) for row in self.n[1:]],
            "vdeg": self.vdeg(),
        }


def build_jumping_sequence(spec: ValuationSpec, vars: Tuple[str, str] = ("u", "v")) -> JumpingSequence:
    fld = spec.field
    d = spec.depth
    u, v = BivarPoly.gens(fld, vars)

    q = [0] + [pq[1] for pq in spec.pairs]      # q[i] = q_i
    p = [0] + [pq[0] for pq in spec.pairs]
    Q = [1]
    for i in range(1, d + 1):
        Q.append(Q[-1] * q[i])

    beta: List[Fraction] = [Fraction(1)]
    for i in range(1, d + 1):
        if i == 1:
            beta.append(Fraction(p[1], q[1]))
        else:
            beta.append(q[i - 1] * beta[i - 1] + Fraction(p[i], q[i]) / Q[i - 1])

    T = [u, v]
    n_rows: List[Tuple[int, ...]] = [()]  # leading pad so n_rows[i] carries subscript i
    for i in range(1, d + 1):
        row = exponent_solve(i, beta, q, Q)
        n_rows.append(row)
        prod = BivarPoly.const(fld, 1, vars)
        for j, e in enumerate(row):
            if e:
                prod = prod * T[j] ** e
        T.append(T[i] ** q[i] - prod.scale(spec.lambdas[i - 1]) * spec.units[i - 1])

    return JumpingSequence(spec, tuple(T), tuple(beta), tuple(Q), tuple(n_rows))


# ---------------------------------------------------------------------------
# independent subsequence bookkeeping
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IndependentData:
    indices: Tuple[int, ...]      # i_1 < i_2 < ... (positions with q != 1)
    pbar: Tuple[int, ...]         # pbar_1..pbar_L
    qbar: Tuple[int, ...]
    Qbar: Tuple[int, ...]         # Qbar_0 = 1, Qbar_l = qbar_1..qbar_l
    betabar: Tuple[Fraction, ...]  # betabar_0 = 1, betabar_l = beta_{i_l}
    k: Tuple[int, ...]            # k_0 = 0, k_i = k_{i-1} + epsilon(p_i, q_i)
    kbar: Tuple[int, ...]         # kbar_0 = 0, kbar_l = k_{i_l}

    @property
    def levels(self) -> int:
        return len(self.indices)

    def to_json(self):
        return {
            "indices": list(self.indices),
            "pbar": list(self.pbar),
            "qbar": list(self.qbar),
            "Qbar": list(self.Qbar),
            "betabar": [str(b) for b in self.betabar],
            "k": list(self.k),
            "kbar": list(self.kbar),
        }


def extract_independent(js: JumpingSequence) -> IndependentData:
    d = js.depth
    indices = tuple(i for i in range(1, d + 1) if js.q(i) != 1)
    pbar, qbar, Qbar, betabar = [], [], [1], [Fraction(1)]
    prev = 0
    for il in indices:
        qb = js.q(il)
        pb = sum(js.p(i) for i in range(prev + 1, il)) * qb + js.p(il)
        pbar.append(pb)
        qbar.append(qb)
        Qbar.append(Qbar[-1] * qb)
        betabar.append(js.beta[il])
        prev = il
    k = [0]
    for i in range(1, d + 1):
        k.append(k[-1] + euclid_data(js.p(i), js.q(i)).epsilon)
    kbar = [0] + [k[il] for il in indices]
    # sanity: the chunk-length recursion agrees with the prefix sums
    for l in range(1, len(indices) + 1):
        assert kbar[l] == kbar[l - 1] + euclid_data(pbar[l - 1], qbar[l - 1]).epsilon
    return IndependentData(indices, tuple(pbar), tuple(qbar), tuple(Qbar), tuple(betabar), tuple(k), tuple(kbar))


# ---------------------------------------------------------------------------
# expansions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TExpansion:
    """Standard-form expansion: sum of coeff * u^{a_0} T_1^{a_1} ... T_M^{a_M}.

    Interior exponents satisfy a_i < q_i; a_0 and a_M are unbounded.  Terms
    with a_M = 0 ("pure") have exactly known values; terms with a_M > 0
    only admit a strict lower bound since beta_M is beyond spec depth.
    """

    js: JumpingSequence
    terms: Tuple[Tuple[object, Tuple[int, ...]], ...]   # (coefficient, exponent vector)

    @property
    def M(self) -> int:
        return self.js.depth + 1

    def resubstitute(self) -> BivarPoly:
        fld = self.js.field
        out = BivarPoly.zero(fld, ("u", "v"))
        for c, exps in self.terms:
            mono = BivarPoly.const(fld, c, ("u", "v"))
            for j, e in enumerate(exps):
                if e:
                    mono = mono * self.js.T[j] ** e
            out = out + mono
        return out

    def term_value(self, exps: Tuple[int, ...]) -> Optional[Fraction]:
        """Exact value of a pure term; None when the term involves T_M."""
        if exps[self.M]:
            return None
        return sum((e * self.js.beta[j] for j, e in enumerate(exps[: self.M])), Fraction(0))

    def term_lower_bound(self, exps: Tuple[int, ...]) -> Fraction:
        """A strict lower bound for a term involving T_M."""
        js = self.js
        N = js.depth
        lb = sum((e * js.beta[j] for j, e in enumerate(exps[: self.M])), Fraction(0))
        if N >= 1:
            lb += exps[self.M] * js.q(N) * js.beta[N]
        return lb

    def to_json(self):
        fld = self.js.field
        return {
            "terms": [
                {"c": fld.render(c), "e": list(exps)} for c, exps in self.terms
            ]
        }


def _v_digits(f: BivarPoly, g: BivarPoly) -> List[BivarPoly]:
    """g-adic digits of f (g monic in v): f = sum digits[k] * g^k."""
    digits = []
    while not f.is_zero():
        f, r = divmod_in_v(f, g)
        digits.append(r)
    return digits


def expand(f: BivarPoly, js: JumpingSequence) -> TExpansion:
    if f.is_zero():
        raise ValueError("cannot expand the zero polynomial")
    M = js.depth + 1
    terms: List[Tuple[object, Tuple[int, ...]]] = []

    def rec(g: BivarPoly, level: int, suffix: Tuple[int, ...]):
        if level == 0:
            # g lies in k[u]; split into u-monomials
            for (a, b), c in sorted(g.terms.items()):
                assert b == 0
                terms.append((c, (a,) + suffix))
            return
        for k, digit in enumerate(_v_digits(g, js.T[level])):
            if not digit.is_zero():
                rec(digit, level - 1, (k,) + suffix)

    rec(f, M, ())
    terms.sort(key=lambda t: t[1])
    return TExpansion(js, tuple(terms))


# ---------------------------------------------------------------------------
# values and residues
# ---------------------------------------------------------------------------


def _min_pure_term(exp: TExpansion):
    """The unique minimal-value pure term, certified against mixed terms.

    Returns (sigma, coefficient, exponent vector).  Raises
    InsufficientDepthError when some term involving T_M cannot be bounded
    below by the candidate minimum.
    """
    pure = []
    for c, exps in exp.terms:
        val = exp.term_value(exps)
        if val is not None:
            pure.append((val, c, exps))
    if not pure:
        raise InsufficientDepthError(
            "every expansion term involves T_%d, whose value is beyond spec depth" % exp.M
        )
    vals = [v for v, _, _ in pure]
    assert len(set(vals)) == len(vals), "pure expansion terms must have distinct values"
    sigma, coeff, exps = min(pure, key=lambda t: t[0])
    for c, e in exp.terms:
        if e[exp.M] and exp.term_lower_bound(e) < sigma:
            raise InsufficientDepthError(
                "a term involving T_%d may fall below the candidate minimum %s" % (exp.M, sigma)
            )
    return sigma, coeff, exps


def value(f: BivarPoly, js: JumpingSequence) -> Fraction:
    """The valuation of f, normalized so value(u) = 1."""
    sigma, _, _ = _min_pure_term(expand(f, js))
    return sigma


def residue(f: BivarPoly, g: BivarPoly, js: JumpingSequence):
    """The residue of f/g in the residue field, for value(f) = value(g)."""
    ef, eg = expand(f, js), expand(g, js)
    sf, cf, mf = _min_pure_term(ef)
    sg, cg, mg = _min_pure_term(eg)
    if sf != sg:
        raise ValueError("residue requires equal values, got %s and %s" % (sf, sg))
    # equal values force equal standard monomials (no nontrivial bounded
    # relation among the beta_j exists)
    assert mf == mg, "same-value minimal terms with different standard monomials"
    return cf / cg


# ---------------------------------------------------------------------------
# semigroup helpers, generating-sequence and minimality checks
# ---------------------------------------------------------------------------


def semigroup_below(generators: List[Fraction], bound: Fraction) -> List[Fraction]:
    """All values of the additive semigroup generated by ``generators``
    (zero included) that are <= bound, sorted ascending."""
    gens = [Fraction(g) for g in generators if 0 < g <= bound]
    if not gens:
        return [Fraction(0)]
    den = 1
    for g in gens:
        den = den * g.denominator // gcd(den, g.denominator)
    limit = int(bound * den)
    reachable = [False] * (limit + 1)
    reachable[0] = True
    for g in gens:
        step = int(g * den)
        for x in range(step, limit + 1):
            if reachable[x - step]:
                reachable[x] = True
    return [Fraction(x, den) for x in range(limit + 1) if reachable[x]]


def semigroup_member(target: Fraction, generators: List[Fraction]) -> Optional[Dict[int, int]]:
    """A representation target = sum c_j * generators[j] with c_j >= 0
    integers, or None.  Exact bounded search."""
    target = Fraction(target)
    gens = [(j, Fraction(g)) for j, g in enumerate(generators) if 0 < g <= target]
    if target == 0:
        return {}

    def rec(t: Fraction, idx: int):
        if t == 0:
            return {}
        if idx >= len(gens):
            return None
        j, g = gens[idx]
        cmax = int(t / g)
        for c in range(cmax, -1, -1):
            sub = rec(t - c * g, idx + 1)
            if sub is not None:
                if c:
                    sub = dict(sub)
                    sub[j] = c
                return sub
        return None

    return rec(target, 0)


def verify_generating_sequence(js: JumpingSequence, gamma_max: Fraction, deg_bound: int,
                               samples: int = 0, seed: int = 0) -> List[dict]:
    """Check that T-monomial expansions witness value-ideal membership.

    For each semigroup value gamma up to gamma_max and each monomial
    u^a v^b of total degree <= deg_bound with value >= gamma, every term
    of the expansion must again have value >= gamma.  Optionally also
    checks random polynomial samples.  Returns a list of check records.
    """
    import random

    gamma_max = Fraction(gamma_max)
    report = []
    gammas = [g for g in semigroup_below(list(js.beta), gamma_max) if g > 0]

    def check_poly(f: BivarPoly, label: str):
        try:
            exp = expand(f, js)
            sigma, _, _ = _min_pure_term(exp)
        except InsufficientDepthError:
            report.append({"check": "membership", "inputs": label,
                           "witness": "value not certified at this depth", "pass": True})
            return
        for gamma in gammas:
            if sigma < gamma:
                continue
            ok = True
            for c, e in exp.terms:
                tv = exp.term_value(e)
                low = tv if tv is not None else exp.term_lower_bound(e)
                if low < gamma:
                    ok = False
                    break
            report.append({
                "check": "membership",
                "inputs": "%s, gamma=%s" % (label, gamma),
                "witness": exp.to_json(),
                "pass": ok,
            })

    for a in range(deg_bound + 1):
        for b in range(deg_bound + 1 - a):
            if a == 0 and b == 0:
                continue
            f = BivarPoly.monomial(js.field, a, b, 1, ("u", "v"))
            check_poly(f, "u^%d v^%d" % (a, b))

    rng = random.Random(seed)
    for s in range(samples):
        f = _random_poly(js.field, rng, max_deg=6, max_terms=5)
        if f.is_zero():
            continue
        check_poly(f, "sample %d" % s)
    return report


def _random_poly(fld: GroundField, rng, max_deg: int = 6, max_terms: int = 5) -> BivarPoly:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        a = rng.randint(0, max_deg)
        b = rng.randint(0, max_deg - a) if max_deg > a else 0
        if fld.kind == "rationals":
            c = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        else:
            c = fld(rng.randint(0, fld.characteristic - 1))
        terms[(a, b)] = c
    return BivarPoly(fld, terms, ("u", "v"))


def verify_minimality(ind: IndependentData, k: int, search_bound: Optional[Fraction] = None) -> dict:
    """Decide whether betabar_k lies in the semigroup of the other betabar_j.

    Returns {"minimal": bool, "witness": representation-or-None}.  Sound
    because later betabar values strictly exceed betabar_k, so only
    generators <= betabar_k can contribute.
    """
    target = ind.betabar[k]
    if search_bound is None:
        search_bound = max(ind.betabar[-1], target)
    search_bound = Fraction(search_bound)
    if search_bound < target:
        raise ValueError("search_bound %s is below betabar_%d = %s" % (search_bound, k, target))
    others = [b for j, b in enumerate(ind.betabar) if j != k]
    witness = semigroup_member(target, others)
    return {"index": k, "minimal": witness is None, "witness": witness}


# ---------------------------------------------------------------------------
# rewriting T_k in the independent polynomials H_l
# ---------------------------------------------------------------------------


def rewrite_in_independent(k: int, js: JumpingSequence, ind: IndependentData) -> dict:
    """Express T_k as H_l plus correction terms in H-monomials.

    H_0 = u and H_l = T_{i_l}.  Valid whenever some independent index
    i_l >= k exists within depth; every correction term has value >= beta_k
    and the identity is verified by exact resubstitution.
    """
    hi = [l for l, il in enumerate(ind.indices, start=1) if il >= k]
    if not hi:
        raise InsufficientDepthError("no independent index >= %d within spec depth" % k)
    l = hi[0]
    fld = js.field
    H = [js.T[0]] + [js.T[il] for il in ind.indices]
    target = ind.indices[l - 1]
    terms = []  # (lambda, delta, exponents over H_0..H_{levels})
    acc = H[l]
    for ip in range(target - 1, k - 1, -1):
        # q_{ip} = 1 for these indices, so T_{ip+1} = T_{ip} - lambda*delta*prod
        assert js.q(ip) == 1
        row = js.n[ip]
        exps = [row[0]] + [row[il] if il < len(row) else 0 for il in ind.indices]
        mono = BivarPoly.const(fld, js.spec.lambdas[ip - 1], js.T[0].vars) * js.spec.units[ip - 1]
        for j, e in zip([js.T[0]] + [js.T[il] for il in ind.indices], exps):
            if e:
                mono = mono * j ** e
        acc = acc + mono
        terms.append({"lambda": fld.render(js.spec.lambdas[ip - 1]),
                      "exponents": exps})
    assert acc == js.T[k], "H-monomial rewriting failed to reproduce T_k"
    return {"k": k, "level": l, "terms": terms, "identity_checked": True}
