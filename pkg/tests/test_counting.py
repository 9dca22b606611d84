import math
import random
from fractions import Fraction

import numpy as np
import pytest

from heisquat.counting import (CountTable, brute_force_psi, count_table,
                               equidist_histogram, fit_and_compare,
                               histogram_report, psi_count, scan, scan_summary)
from heisquat.heisenberg import (FundamentalDomain, Triple, canonicalize,
                                 in_fundamental_domain, is_admissible,
                                 is_primitive)
from heisquat.orders import builtin_order


@pytest.fixture(scope="module")
def hur():
    return builtin_order("hurwitz")


@pytest.fixture(scope="module")
def fd(hur):
    return FundamentalDomain(hur)


def test_psi_below_one_is_zero(hur):
    assert psi_count(hur, Fraction(1, 2))[0] == 0
    assert psi_count(hur, 0)[0] == 0


def test_psi_one_is_24(hur):
    count, triples = psi_count(hur, 1)
    assert count == 24
    # one orbit per unit c, with a = alpha = 0 forced
    assert all(not any(t.a.coords) and not any(t.alpha.coords) for t in triples)
    assert len({t.c.coords for t in triples}) == 24


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_oracle_equality_small(hur, s):
    assert psi_count(hur, s, with_triples=False)[0] == brute_force_psi(hur, s)


def test_oracle_equality_d3():
    d3 = builtin_order("d3")
    for s in (1, 2, 3):
        assert psi_count(d3, s, with_triples=False)[0] == brute_force_psi(d3, s)


def test_emitted_triples_satisfy_predicates(hur, fd):
    _, triples = psi_count(hur, 4)
    assert len(triples) == 3264
    rng = random.Random(1)
    sample = rng.sample(triples, 150)
    for t in sample:
        assert is_admissible(hur, t)
        assert is_primitive(hur, t)
        assert in_fundamental_domain(hur, t, fd)
    # distinct canonical triples = distinct orbits
    assert len({t.coords() for t in triples}) == len(triples)


def test_monotone_in_s(hur):
    counts = [psi_count(hur, s, with_triples=False)[0] for s in (1, 2, 3, 4, 5)]
    assert counts == sorted(counts)


def test_unit_scaling_multiplicity(hur, fd):
    # for each emitted triple and each unit lambda, the canonical form of
    # the scaled triple is emitted as well (the |O^x| fiber structure)
    _, triples = psi_count(hur, 2)
    emitted = {t.coords() for t in triples}
    rng = random.Random(4)
    for t in rng.sample(triples, 20):
        for lam in hur.units[:8]:
            scaled = Triple(hur.element(hur.mul(t.a, lam)),
                            hur.element(hur.mul(t.alpha, lam)),
                            hur.element(hur.mul(t.c, lam)))
            canon, _ = canonicalize(hur, scaled, fd)
            assert canon.coords() in emitted


def test_scan_partition_invariance(hur):
    # counts are per-c additive: any partition of the c range gives the sum
    recs = list(scan(hur, 4))
    total = sum(r.count for r in recs)
    assert total == psi_count(hur, 4, with_triples=False)[0]
    half1 = sum(r.count for r in recs[::2])
    half2 = sum(r.count for r in recs[1::2])
    assert half1 + half2 == total


def test_scan_summary_threads_match(hur):
    a = scan_summary(hur, [2, 4], hist_levels=[4], threads=1)
    b = scan_summary(hur, [2, 4], hist_levels=[4], threads=2)
    assert a.counts == b.counts
    assert (a.hists[Fraction(4)] == b.hists[Fraction(4)]).all()


def test_scan_summary_checkpoint_resume(hur, tmp_path):
    ck = tmp_path / "chk.jsonl"
    a = scan_summary(hur, [3], checkpoint_path=str(ck))
    assert ck.exists() and ck.read_text().strip()
    # truncate the checkpoint to simulate an interrupted run, then resume
    lines = ck.read_text().strip().splitlines()
    ck.write_text("\n".join(lines[: len(lines) // 2]) + "\n")
    b = scan_summary(hur, [3], checkpoint_path=str(ck))
    assert a.counts == b.counts


def test_scale_parameter(hur):
    # alpha, c in 2O: fewer orbits than the unrestricted count at the same s
    full = psi_count(hur, 4, with_triples=False)[0]
    scaled, triples = psi_count(hur, 4, scale=2)
    assert 0 < scaled < full
    for t in triples[:50]:
        assert all(v % 2 == 0 for v in t.alpha.coords)
        assert all(v % 2 == 0 for v in t.c.coords)
        assert is_admissible(hur, t) and is_primitive(hur, t)
    # hand count: c = 2u (24 units); cell4 forces alpha = 0; the a-classes
    # run over Im(O)u / 2 Im(O)u (8 residues) of which the 4 odd-norm ones
    # give a full ideal <a, 2u> = O
    assert scaled == 24 * 4


def test_fit_synthetic_slope():
    C = 0.005
    rows = [(Fraction(s), round(C * s ** 5)) for s in (4, 8, 16, 32, 64)]
    table = CountTable("synthetic", 2, rows, C)
    fit = fit_and_compare(table, C)
    assert abs(fit["slope"] - 5.0) < 0.02
    assert all(abs(r - 1) < 0.03 for r in fit["ratios"])  # rounding at s = 4


def test_fit_requires_enough_rows():
    table = CountTable("synthetic", 2, [(Fraction(4), 10), (Fraction(8), 300)], 1.0)
    with pytest.raises(ValueError):
        fit_and_compare(table, 1.0)


def test_histogram_uniform_synthetic():
    rng = np.random.default_rng(1)
    buckets = rng.integers(0, 128, size=128000)
    hist = np.bincount(buckets, minlength=128)
    rep = histogram_report(1, hist)
    assert rep.total == 128000
    assert rep.discrepancy <= 0.01


def test_histogram_degenerate_s1(hur):
    rep = equidist_histogram(hur, 1)
    # all 24 representatives sit in the origin cell
    assert rep.total == 24
    assert abs(rep.discrepancy - (1 - 1 / 128)) < 1e-12


def test_histogram_sums_to_count(hur):
    rep = equidist_histogram(hur, 4)
    assert sum(rep.observed) == rep.total == psi_count(hur, 4, with_triples=False)[0]
    assert rep.to_json_dict()["cells"] == 128


def test_empty_histogram_raises(hur):
    with pytest.raises(ValueError, match="empty sample"):
        equidist_histogram(hur, Fraction(1, 2))


def test_count_table_fields(hur):
    table = count_table(hur, [1, 2, 4], reference_constant=54 / math.pi ** 8,
                        reference_symbolic="54*pi^-8")
    d = table.to_json_dict()
    assert d["rows"][0] == {"s": "1", "count": 24}
    assert d["rows"][1] == {"s": "2", "count": 96}
    assert len(d["ratios"]) == 3
    assert d["reference_symbolic"] == "54*pi^-8"
