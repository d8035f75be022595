from fractions import Fraction
from itertools import product
from math import comb

import pytest

import cellprobe as cp


def test_build_and_verify():
    s = cp.build_scheme("precomputed_sums", 6, 7)
    assert (s.n, s.u, s.q) == (6, 6, 1)
    v = s.verify()
    assert v["pass"] and v["counterexample"] is None
    assert v["checked"] == 6 * 2**6
    assert s.answer("101101", 4) == 3


def test_two_level_and_redundancy():
    s = cp.build_scheme("two_level_rank", 8, 9, block=2, superblock=4)
    assert s.verify()["pass"]
    assert cp.redundancy_bits(4, 4, 16) == pytest.approx(4.0)


def test_text_round_trip():
    s = cp.build_scheme("raw_identity", 8, 4)
    assert cp.parse_scheme(s.to_text()) == s
    assert cp.parse_scheme(s.materialize().to_text()).verify()["pass"]


def test_bad_parameters_raise():
    with pytest.raises(cp.Error):
        cp.build_scheme("precomputed_sums", 6, 3)
    with pytest.raises(cp.FormatError):
        cp.read_scheme("/nonexistent/scheme.scm")


def test_separator_disjoint():
    sets = [[i % 5, (i * 3) % 7 + 5] for i in range(40)]
    r = cp.separator(sets, 2)
    blocked = set(r["B"])
    seen = set()
    for v in r["V"]:
        cells = set(sets[v - 1]) - blocked
        assert not cells & seen
        seen |= cells
    assert r["w"] == len(r["V"])


def test_stretcher_pairs():
    idx = list(range(1, 257, 3))
    r = cp.stretcher(idx, 256, 2)
    vp = r["V_prime"]
    prev = 0
    for a, b in zip(vp[::2], vp[1::2]):
        assert a - prev >= 2 * (b - a)
        prev = b
    assert len(vp) >= r["guaranteed_size"]


def test_entropy_and_tv():
    pmf = {"00": Fraction(1, 2), "01": Fraction(1, 4), "10": Fraction(1, 4)}
    assert cp.entropy([2, 2], pmf) == pytest.approx(1.5)
    assert cp.tv_to_uniform([2, 2], pmf) == Fraction(1, 4)


def test_binomial_tail_and_uniform_instance():
    assert cp.binomial_tail(4, 3) == Fraction(5, 16)
    w = cp.entropy_sum_uniform(261, 1, 257, 261, 64)
    assert w["P_joint"] == 0
    assert w["P_upper"] == Fraction(sum(comb(261, k) for k in range(139, 262)), 2**261)
    assert w["holds"]


def test_brackets():
    assert cp.catalan_count(8) == 14
    assert len(cp.enumerate_bal(8)) == 14
    assert cp.match("(()())", 1) == 6
    assert cp.unmatched_open_prob(2) == Fraction(1, 4)
    assert cp.unmatched_open_prob(3) == Fraction(1, 4)
    for d in range(1, 11):
        assert cp.unmatched_open_prob(d) == cp.unmatched_close_prob(d)


def test_good_blocks():
    xs = ["".join(b) for b in product("01", repeat=6)][:48]
    r = cp.good_blocks(xs, [2, 2, 2], 0.5)
    assert sum(r["deficiency"]) == pytest.approx(r["a"])
    assert r["size_bound_satisfied"] and r["tv_clause_holds"]


def test_prefix_pipeline_deterministic():
    s = cp.build_scheme("two_level_rank", 16, 17, block=2, superblock=2)
    a = cp.run_prefix_pipeline(s, 2)
    b = cp.run_prefix_pipeline(s, 2)
    assert a["text"] == b["text"]
    assert a["scale_independent_ok"]


def test_bracket_pipeline_left_side_zero():
    s = cp.build_scheme("bracket_table", 8, 9)
    r = cp.run_bracket_pipeline(s, 4)
    assert r["scale_independent_ok"]
    assert r["chain"][0][1] == 0


def test_cli():
    code, out, err = cp.run_cli(["brackets", "count", "--n", "8"])
    assert code == 0 and "count: 14" in out
    code, _, err = cp.run_cli(["verify", "--scheme", "/nonexistent.scm"])
    assert code == 2 and err
