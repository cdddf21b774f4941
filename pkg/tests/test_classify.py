import itertools
import random

import pytest

from riccati.algebra import STRICT, TOLERANT, Discriminants, discriminants
from riccati.classify import (P38_PRINTED, TABLE_KEYS, TABLES, Catalog, Line, classify, first_row_lines,
                              line_contact_analysis, line_through, skeletons_match,
                              subcase_family_i_row1, table_row, trace_summary)
from riccati.errors import LemmaViolation, NoMatch
from riccati.fixtures import load_fixtures
from riccati.normalform import normal_form

P1 = normal_form("I", (0, 0, 0, 3.75, -0.25))
NAMES = ("dF1", "dF2", "dI1", "dI2")


def disc_with(signs: dict) -> Discriminants:
    return Discriminants(*(float(signs.get(k, 1)) for k in NAMES))


@pytest.mark.parametrize("family", list(TABLE_KEYS))
def test_tables_are_total(family):
    keys = TABLE_KEYS[family]
    seen = set()
    for pat in itertools.product((1, 0, -1), repeat=len(keys)):
        row = table_row(family, disc_with(dict(zip(keys, pat))), TOLERANT)
        seen.add(row.pattern)
    assert len(seen) == 3 ** len(keys) == len(TABLES[family])


def test_table_row_examples():
    assert table_row("I", disc_with({"dI1": 1, "dF1": 1, "dF2": 1})).candidates == (1, 2, 3, 4, 5)
    assert table_row("IV", disc_with({"dI2": -1})).candidates == (41,)
    assert table_row("II", disc_with({"dI1": -1, "dF1": -1})).candidates == (41,)


def test_p38_row_is_the_free_pattern():
    assert [k for k, _ in P38_PRINTED].count("dI1") == 2
    row = table_row("I", discriminants((1, 0, 1, -1, 0)), STRICT)
    assert row.candidates == (38,)
    assert dict(row.pattern) == {"dI1": -1, "dF1": 0, "dF2": -1}


@pytest.mark.parametrize("params, pid, diff", [
    ((0, 0, -0.75, -0.75, -0.25), 3, -1.0),
    ((0, 0, -2, -2, -0.25), 4, 0.0),
    ((0, 0, -3.75, -3.75, -0.25), 5, 1.0),
])
def test_slope_subcase(params, pid, diff):
    got, ev = subcase_family_i_row1(params)
    assert got == pid
    assert ev.lhs == pytest.approx(-2.0, abs=1e-12)
    assert ev.slope_difference == pytest.approx(diff, abs=1e-12)


def test_p1_p2_cases():
    assert subcase_family_i_row1(P1.params)[0] == 1
    p2 = next(f for f in load_fixtures() if f.id == 2)
    assert subcase_family_i_row1(p2.params)[0] == 2


def test_excluded_case_needs_no_realisable_system():
    # r1(q1) > 0 and r2(p2) < 0 would need sqrt dF1 > 1 + sqrt dI1 + sqrt dF2
    # and sqrt dF2 > 1 + sqrt dI1 + sqrt dF1 at once, whatever the values
    rng = random.Random(4)
    for _ in range(2000):
        d = Discriminants(*(rng.uniform(1e-3, 50) for _ in range(4)))
        assert subcase_family_i_row1((0, 0, 0, 0, 0), d, TOLERANT)[0] in (1, 2, 3, 4, 5)


def test_impossible_case_never_happens():
    rng = random.Random(17)
    hits = 0
    while hits < 500:
        prm = tuple(round(rng.uniform(-4, 4), 2) for _ in range(5))
        s = discriminants(prm).signs(STRICT)
        if not (s["dI1"] > 0 and s["dF1"] > 0 and s["dF2"] > 0):
            continue
        hits += 1
        assert subcase_family_i_row1(prm)[0] in (1, 2, 3, 4, 5)


def test_contacts_of_r1_and_r2():
    lines = first_row_lines(P1.params)
    r1 = line_contact_analysis(P1, lines["r1"], max_contacts=1)
    assert r1.contacts == pytest.approx([(-1.0, 2.0)])
    assert r1.crossings[0] == -r1.crossings[1]
    r2 = line_contact_analysis(P1, lines["r2"], max_contacts=1)
    assert len(r2.contacts) == 1 and r2.crossings[0] == -r2.crossings[1]


def test_invariant_line_is_integral():
    rep = line_contact_analysis(P1, Line.vertical(0.0))
    assert rep.integral and rep.contacts == ()


def test_generic_line_alternates():
    rep = line_contact_analysis(P1, line_through((0.0, 0.5), (-1.0, -2.0)))
    assert not rep.integral and len(rep.contacts) == 2
    assert rep.crossings in ((1, -1, 1), (-1, 1, -1))
    with pytest.raises(LemmaViolation):
        line_contact_analysis(P1, line_through((0.0, 0.5), (-1.0, -2.0)), max_contacts=1)


def test_classify_by_table_and_subcase(catalog):
    c = classify(P1, catalog=catalog)
    assert (c.portrait, c.method) == (1, "subcase")
    assert classify(normal_form("V", (0, 0, 1, 0, 0)), catalog=catalog).portrait == 41


def test_classify_examples(catalog):
    c = classify(normal_form("II", (1, 1, 0, 0, 1)), catalog=catalog)
    assert (c.portrait, c.method) == (55, "table")
    c = classify(normal_form("II", (1, 1, -1, 4, -1)), catalog=catalog)
    assert (c.portrait, c.method) == (42, "skeleton")
    assert c.evidence()["matched"] == ["P42"]


def test_family_iv_row_of_the_p74_tuple(catalog):
    # with x' = 1 this tuple has dI2 = 1 and belongs to the P70/P71 row
    nf = normal_form("IV", (1, 1, 0, 0, -1))
    assert table_row("IV", discriminants(nf.params), STRICT).candidates == (70, 71)
    assert classify(nf, catalog=catalog).portrait == 71


def test_family_iv_outside_the_catalog(catalog):
    # y' = tan(x + C): no separatrix reaches the finite plane
    with pytest.raises(NoMatch, match="nilpotent"):
        classify(normal_form("IV", (0, 0, 0, 0, 1)), catalog=catalog)


def test_family_iv_inside_the_catalog(catalog):
    assert classify(normal_form("IV", (0, 2, 0, 0, 1)), catalog=catalog).portrait == 72


def test_catalog_round_trip(catalog, tmp_path):
    path = tmp_path / "c.json"
    catalog.save(path)
    back = Catalog.load(path)
    assert back.to_json() == catalog.to_json()
    assert catalog.gaps() == []


def test_searched_representatives(catalog):
    for pid in (8, 61, 64):
        e = catalog.entries[pid]
        assert e.source == "search" and e.skeleton is not None
        assert pid in table_row(e.family, discriminants(e.params), STRICT).candidates


def test_skeleton_match_is_reflexive_and_separates():
    a = trace_summary(P1)
    assert skeletons_match(a, a)
    b = trace_summary(normal_form("I", (0, 0, -3.75, -3.75, -0.25)))
    assert not skeletons_match(a, b)
