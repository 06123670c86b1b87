import random
from decimal import Decimal, localcontext
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rsumset.core import ResidueSet
from rsumset.stability import (
    Interval,
    PartitionFailure,
    claim_expectations,
    constant_ledger,
    partition_interval,
    synthesize_instance,
)


def _dec(x: Fraction) -> Decimal:
    return Decimal(x.numerator) / Decimal(x.denominator)


def _close(s: str, d: Decimal, digits=35) -> bool:
    a = Decimal(s)
    return abs(a - d) <= abs(d) * Decimal(10) ** -digits


def test_partition_empty_intersection():
    p = 101
    I, J = Interval(0, 30, p), Interval(50, 5, p)
    A = ResidueSet.of(p, [40, 60, 70])
    part = partition_interval(A, I, J)
    assert part.parts[0].start == 5  # leftmost window of the middle
    assert part.class_sizes["0"] == 0
    assert part.structural_ok(A)


def test_partition_lands_on_gap():
    p = 211
    I, J = Interval(10, 60, p), Interval(150, 6, p)
    inside = [x for x in range(16, 64) if not 30 <= x < 36]
    A = ResidueSet.of(p, inside + [100, 120])
    part = partition_interval(A, I, J)
    assert part.parts[0].start == 30 and part.class_sizes["0"] == 0
    assert part.structural_ok(A)


def test_partition_failure_when_dense():
    p = 101
    I, J = Interval(0, 30, p), Interval(50, 5, p)
    with pytest.raises(PartitionFailure) as exc:
        partition_interval(ResidueSet.of(p, range(30)), I, J)
    assert exc.value.best_density == Fraction(5, 20)


def test_partition_rejects_short_interval():
    with pytest.raises(ValueError):
        partition_interval(ResidueSet.of(11, [0]), Interval(0, 5, 11), Interval(6, 2, 11))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.sets(st.integers(0, 210), max_size=60))
def test_partition_structure_random(seed, xs):
    p = 211
    rng = random.Random(seed)
    L = rng.randint(1, 20)
    I = Interval(rng.randrange(p), rng.randint(3 * L, 150), p)
    J = Interval(0, L, p)
    A = ResidueSet.of(p, xs)
    try:
        part = partition_interval(A, I, J)
    except PartitionFailure as e:
        assert 16 * e.best_density > 1
        return
    assert part.structural_ok(A)
    assert sum(part.parts[k].length for k in (-2, -1, 0, 1, 2)) == I.length


def test_claims_degenerate_b():
    p = 101
    I, J = Interval(0, 30, p), Interval(50, 2, p)
    A = ResidueSet.of(p, [40, 60, 70, 80])
    B = J.as_set()
    part = partition_interval(A, I, J)
    rep = claim_expectations(A, part, B, 50, 51)
    # the only admissible b is q_l itself
    assert rep["E_A_triple"] == "8"
    assert rep["claimA"] and rep["claims_hold"]


def test_synthesized_instance_meets_hypotheses():
    s = synthesize_instance(8209, 2, 0, random.Random(1))
    part = partition_interval(s.A, s.I, s.J)
    rep = claim_expectations(s.A, part, s.B, s.q_l, s.q_r, r=s.r)
    assert not rep["hypothesis_violated"]
    assert rep["claims_hold"] and rep["disjoint_edges"] and rep["disjoint_inner_inf"]


def test_hypothesis_violation_flagged():
    p = 8209
    s = synthesize_instance(p, 2, 0, random.Random(2))
    dense = s.A | ResidueSet.of(p, s.I.members()[2:40:3])
    part = partition_interval(dense, s.I, s.J)
    rep = claim_expectations(dense, part, s.B, s.q_l, s.q_r, r=0)
    assert rep["hypothesis_violated"]
    assert not rep["hypotheses"]["|A&I|<=2^-10|B|"]


def test_ledger_p0():
    assert constant_ledger(Fraction(1, 2), Fraction(1, 1024), 1026, 1).p0 == 1048576
    assert constant_ledger(Fraction(1, 2), Fraction(1, 1024), 1028, 2).p0 == 4 ** 20


def test_ledger_delta_takes_small_branch():
    L = constant_ledger(Fraction(1, 2), Fraction(1, 1024), 1026, 1)
    assert L.delta == Fraction(31, 10) / 2**13 / 10**1549
    assert L.alpha_consistent and L.cross_check_ok


def test_ledger_logs_match_decimal_route():
    L = constant_ledger(Fraction(1, 2), Fraction(1, 1024), 1026, 1)
    with localcontext() as ctx:
        ctx.prec = 90
        assert _close(L.log10_delta, _dec(L.delta).log10())
        assert _close(L.log10_alpha_main, _dec(L.alpha_main).log10())
        inv = 1 / _dec(L.alpha_main)
        x = 2 * 1 + 3 + inv
        lc = -(1 + inv).log10() - 24 * x ** 4 * (8 * x).log10()
        assert _close(L.log10_c_eps, lc)
        assert Decimal(L.log10_c_eps) < -1000


def test_ledger_rejects_bad_inputs():
    with pytest.raises(ValueError):
        constant_ledger(Fraction(3, 2), Fraction(1, 1024), 1026, 1)
    with pytest.raises(ValueError):
        constant_ledger(Fraction(1, 2), Fraction(1, 1024), 10, 1)
