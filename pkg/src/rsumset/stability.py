"""Instance-level evaluators for the five-interval partition and the two
expectation claims behind the three-point stability step, plus calculators for
the explicit constants of the main theorems.

Averages are exact Fractions. Constants far below float range are carried as
exact Fractions when they are rational, and as base-10 logarithms (mpmath, fixed
precision, serialised as fixed-digit strings) when they are not.
"""
from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any

import mpmath

from .core import ResidueSet, is_prime

LOG_DPS = 60
LOG_DIGITS = 40


@dataclass(frozen=True)
class Interval:
    """Cyclic interval [start, start + length - 1] of F_p."""

    start: int
    length: int
    p: int

    @property
    def end(self) -> int:
        return (self.start + self.length - 1) % self.p

    def members(self) -> list[int]:
        return [(self.start + i) % self.p for i in range(self.length)]

    def as_set(self) -> ResidueSet:
        return ResidueSet.of(self.p, self.members())

    @classmethod
    def from_ends(cls, lo: int, hi: int, p: int) -> "Interval":
        return cls(lo % p, (hi - lo) % p + 1, p)


@dataclass
class IntervalPartition:
    I: Interval
    J: Interval
    parts: dict[int, Interval]  # keys -2..2
    class_sizes: dict[str, int]

    def part_set(self, keys) -> ResidueSet:
        out = ResidueSet(self.I.p, 0)
        for key in keys:
            if key == "inf":
                out = out | self.I.as_set().complement()
            else:
                out = out | self.parts[key].as_set()
        return out

    def structural_ok(self, A: ResidueSet) -> bool:
        order = [self.parts[k] for k in (-2, -1, 0, 1, 2)]
        cursor = self.I.start
        for part in order:
            if part.length and part.start != cursor:
                return False
            cursor = (cursor + part.length) % self.I.p
        if sum(part.length for part in order) != self.I.length:
            return False
        if self.I.start not in self.parts[-2].members() or self.I.end not in self.parts[2].members():
            return False
        L = self.J.length
        if not (self.parts[0].length == self.parts[-2].length == self.parts[2].length == L):
            return False
        mid = len(A & self.part_set([-1, 0, 1]))
        return 16 * len(A & self.parts[0].as_set()) <= mid


class PartitionFailure(Exception):
    def __init__(self, best_density: Fraction, message: str):
        super().__init__(message)
        self.best_density = best_density


def partition_interval(A: ResidueSet, I: Interval, J: Interval) -> IntervalPartition:
    """I_{-2}, I_2 at the ends of I, I_0 the leftmost |J|-window of the middle
    minimising |I_0 & A|. Raises PartitionFailure if the density condition
    |I_0 & A| <= 2^-4 |(I_{-1} u I_0 u I_1) & A| fails even for the best window."""
    p = A.modulus
    if I.p != p or J.p != p:
        raise ValueError("interval modulus differs")
    L = J.length
    if L < 1 or I.length < 3 * L or I.length > p:
        raise ValueError("need 3|J| <= |I| <= p")
    mid_len = I.length - 2 * L
    mid_start = (I.start + L) % p
    inside = [1 if (mid_start + i) % p in A else 0 for i in range(mid_len)]
    mid_count = sum(inside)
    window = sum(inside[:L])
    best, best_at = window, 0
    for s in range(1, mid_len - L + 1):
        window += inside[s + L - 1] - inside[s - 1]
        if window < best:
            best, best_at = window, s
    if 16 * best > mid_count:
        raise PartitionFailure(
            Fraction(best, mid_count), f"best window holds {best} of {mid_count} middle elements"
        )
    parts = {
        -2: Interval(I.start, L, p),
        -1: Interval(mid_start, best_at, p),
        0: Interval((mid_start + best_at) % p, L, p),
        1: Interval((mid_start + best_at + L) % p, mid_len - best_at - L, p),
        2: Interval((I.start + I.length - L) % p, L, p),
    }
    sizes = {str(k): len(A & v.as_set()) for k, v in parts.items()}
    sizes["inf"] = len(A - I.as_set())
    return IntervalPartition(I, J, parts, sizes)


def _avg(values) -> Fraction:
    values = list(values)
    return Fraction(sum(values), len(values))


def _plus(X: set[int], T, p: int) -> set[int]:
    return {(x + t) % p for x in X for t in T}


def hypothesis_audit(A: ResidueSet, B: ResidueSet, I: Interval, J: Interval, r: int, q_l: int, q_r: int) -> dict[str, bool]:
    p = A.modulus
    nb = len(B)
    return {
        "|A|>=8r": len(A) >= 8 * r,
        "2<=|B|<=min(|A|-2r,p/2^11)": 2 <= nb and nb <= len(A) - 2 * r and nb * 2**11 <= p,
        "|I|=(2^10+2r)|B|": I.length == (2**10 + 2 * r) * nb,
        "|J|<=(1+2^-10)|B|": J.length * 1024 <= 1025 * nb,
        "|A&I|<=2^-10|B|": len(A & I.as_set()) * 1024 <= nb,
        "{q_l,q_r}<=B<=J": q_l in B and q_r in B and B <= J.as_set(),
    }


def claim_expectations(
    A: ResidueSet,
    part: IntervalPartition,
    B: ResidueSet,
    q_l: int,
    q_r: int,
    r: int | None = None,
) -> dict[str, Any]:
    """Exact averages in the two expectation claims on one instance.

    Averages over b run uniformly over B minus {q_r}; pairs (b2, b3) are
    ordered and drawn independently from the same set.
    """
    if q_l not in B or q_r not in B:
        raise ValueError("q_l and q_r must lie in B")
    p = A.modulus
    outer = set(A & part.part_set([-2, "inf", 2]))
    inner = set(A & part.part_set([-1, 0, 1]))
    pool = [b for b in B if b != q_r]
    n_out, n_in, nb = len(outer), len(inner), len(B)

    def new_elems(T):
        return len(_plus(inner, T, p) - _plus(outer, T, p))

    e_a1 = _avg(len(_plus(outer, {q_l, q_r, b}, p)) for b in pool)
    e_a2 = _avg(len(_plus(outer, {q_l, b2, b3}, p)) for b2, b3 in product(pool, repeat=2))
    e_b1 = _avg(new_elems({q_l, q_r, b}) for b in pool)
    e_b2 = _avg(new_elems({q_l, b2, b3}) for b2, b3 in product(pool, repeat=2))

    if n_out >= nb - 1:
        claim_a = e_a1 >= n_out + nb - 1
        branch = "large"
    else:
        claim_a = e_a1 >= 2 * n_out + Fraction(nb - 1 - n_out, 8) or e_a2 >= Fraction(5, 2) * n_out
        branch = "small"
    need_b = Fraction(15, 8) * n_in
    report: dict[str, Any] = {
        "sizeOuter": n_out,
        "sizeInner": n_in,
        "E_A_triple": str(e_a1),
        "E_A_pair": str(e_a2),
        "E_B_triple": str(e_b1),
        "E_B_pair": str(e_b2),
        "claimA_branch": branch,
        "claimA": claim_a,
        "claimB_triple": e_b1 >= need_b,
        "claimB_pair": e_b2 >= need_b,
    }
    # disjointness facts the claims rest on
    a_m1 = set(A & part.parts[-1].as_set())
    a_p1 = set(A & part.parts[1].as_set())
    a_inf = set(A - part.I.as_set())
    report["disjoint_edges"] = all(
        not (_plus(a_m1, [q_r], p) & _plus(a_p1, [q_l], p))
        and not (_plus(a_m1, [q_r], p) & _plus(outer, [y], p))
        and not (_plus(a_p1, [q_l], p) & _plus(outer, [y], p))
        for y in B
    )
    report["disjoint_inner_inf"] = all(not (_plus(inner, [x], p) & _plus(a_inf, [y], p)) for x in B for y in B)
    report["I0_density"] = 16 * int(part.class_sizes["0"]) <= n_in
    report["claims_hold"] = claim_a and report["claimB_triple"] and report["claimB_pair"]
    if r is not None:
        audit = hypothesis_audit(A, B, part.I, part.J, r, q_l, q_r)
        report["hypotheses"] = audit
        report["hypothesis_violated"] = not all(audit.values())
    return report


@dataclass
class SyntheticInstance:
    A: ResidueSet
    B: ResidueSet
    I: Interval
    J: Interval
    r: int
    q_l: int
    q_r: int


def synthesize_instance(p: int, b_size: int, r: int, rng: random.Random) -> SyntheticInstance:
    """Random (A, B, I, J) meeting the interval hypotheses: B fills J (|J| = |B|
    with q_l, q_r its ends), |I| = (2^10 + 2r)|B| away from J, and A has at most
    floor(2^-10 |B|) elements in I."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if b_size < 2 or b_size * 2**11 > p:
        raise ValueError("need 2 <= |B| <= p / 2^11")
    il = (2**10 + 2 * r) * b_size
    if il + b_size > p:
        raise ValueError("p too small for |I|")
    j0 = rng.randrange(p)
    J = Interval(j0, b_size, p)
    B = J.as_set()
    i0 = (j0 + b_size + rng.randrange(p - il - b_size + 1)) % p
    I = Interval(i0, il, p)
    outside = sorted(set(range(p)) - set(I.members()))
    n_out = rng.randint(max(8 * r, b_size + 2 * r, 1), max(8 * r, b_size + 2 * r, 1) + 200)
    members = rng.sample(outside, n_out)
    inside_cap = b_size // 1024
    if inside_cap:
        members += rng.sample(I.members(), rng.randint(0, inside_cap))
    A = ResidueSet.of(p, members)
    return SyntheticInstance(A, B, I, J, r, j0, J.end)


# ---- constants ------------------------------------------------------------

BLT_DELTA_CONST = Fraction(31, 10) * Fraction(1, 2**13) * Fraction(1, 10**1549)
MAIN_ALPHA_CONST = Fraction(31, 10) * Fraction(1, 2**18) * Fraction(1, 10**1549)


def _log10_fraction(x: Fraction) -> mpmath.mpf:
    return mpmath.log10(mpmath.mpf(x.numerator)) - mpmath.log10(mpmath.mpf(x.denominator))


def _s(x: mpmath.mpf) -> str:
    return mpmath.nstr(x, LOG_DIGITS, strip_zeros=False, min_fixed=-1, max_fixed=-1)


def _sci(x: Fraction) -> str:
    """Fraction as 'mantissa e exponent' with 30 significant digits, computed exactly."""
    if x == 0:
        return "0"
    sign = "-" if x < 0 else ""
    x = abs(x)
    e = len(str(x.numerator)) - len(str(x.denominator))
    if x >= Fraction(10) ** e * 10:
        e += 1
    while x < Fraction(10) ** e:
        e -= 1
    m = x / Fraction(10) ** e
    digits = (m * 10**29).__floor__()
    ds = str(digits)
    return f"{sign}{ds[0]}.{ds[1:]}e{e}"


@dataclass
class ConstantLedger:
    eps: Fraction
    gamma: Fraction
    t: int
    D: int
    delta: Fraction
    alpha_stab: Fraction
    alpha_main: Fraction
    alpha_consistent: bool
    p0: int
    log10_delta: str
    log10_alpha_main: str
    log10_c_eps: str
    log10_c_eps_corollary: str
    log10_beta_over_c_div_delta27: str
    delta_sci: str
    alpha_main_sci: str
    cross_check_ok: bool

    def to_json(self) -> dict[str, Any]:
        d = asdict(self)
        d["eps"], d["gamma"] = str(self.eps), str(self.gamma)
        # exact values run to ~1550 digits; the JSON view keeps 30-digit forms
        d["alpha_stab"] = _sci(self.alpha_stab)
        del d["delta"], d["alpha_main"]
        d["p0"] = str(self.p0)
        return d


def constant_ledger(eps, gamma, t: int, D: int) -> ConstantLedger:
    """Evaluate delta, alpha (two-point stability), the main theorem's alpha,
    c_eps, p_0 = 4^(10D) and 1/alpha (the factor of beta = c/(delta alpha)
    that is explicit here; c and delta of the strong stability theorem are not)."""
    eps, gamma = Fraction(eps), Fraction(gamma)
    if not (0 < eps < 1):
        raise ValueError("need 0 < eps < 1")
    if gamma <= 0:
        raise ValueError("need gamma > 0")
    if t < 2**10:
        raise ValueError("need t >= 2^10")
    if D < 1:
        raise ValueError("need D >= 1")
    delta = min(BLT_DELTA_CONST, gamma / 8)
    alpha_stab = eps * min(delta / 32, gamma / (32 * t * t))
    alpha_main = MAIN_ALPHA_CONST * eps
    # the main proof feeds gamma = 2^-10, t = 2^10 + 2D into the stability theorem
    d0 = min(BLT_DELTA_CONST, Fraction(1, 2**13))
    a0 = eps * min(d0 / 32, Fraction(1, 2**10) / (32 * (2**10 + 2 * D) ** 2))
    with mpmath.workdps(LOG_DPS):
        l_delta = _log10_fraction(delta)
        l_alpha = _log10_fraction(alpha_main)
        inv_alpha = mpmath.mpf(alpha_main.denominator) / alpha_main.numerator
        x = 2 * D + 3 + inv_alpha
        l_c = -mpmath.log10(1 + inv_alpha) - 24 * x**4 * mpmath.log10(8 * x)
        l_cor = (mpmath.mpf(10) ** 6400 / mpmath.mpf(eps.numerator) ** 4 * mpmath.mpf(eps.denominator) ** 4) * (
            _log10_fraction(eps) - 1600
        )
        l_beta = -l_alpha
        # exact cross-check: the 40-digit log of the exact rational
        direct = mpmath.log10(mpmath.mpf(31) / 10) - 13 * mpmath.log10(2) - 1549
        cross = abs(_log10_fraction(BLT_DELTA_CONST) - direct) < mpmath.mpf(10) ** (-40)
        return ConstantLedger(
            eps=eps,
            gamma=gamma,
            t=t,
            D=D,
            delta=delta,
            alpha_stab=alpha_stab,
            alpha_main=alpha_main,
            alpha_consistent=alpha_main == a0,
            p0=4 ** (10 * D),
            log10_delta=_s(l_delta),
            log10_alpha_main=_s(l_alpha),
            log10_c_eps=_s(l_c),
            log10_c_eps_corollary=_s(l_cor),
            log10_beta_over_c_div_delta27=_s(l_beta),
            delta_sci=_sci(delta),
            alpha_main_sci=_sci(alpha_main),
            cross_check_ok=bool(cross),
        )
