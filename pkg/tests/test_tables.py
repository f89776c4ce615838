import pytest

from latticemap import tables


@pytest.fixture(scope="module")
def rows():
    return {m: tables.hubbard_weight_table(m, 3) for m in tables.MAPPINGS}


@pytest.mark.parametrize("mapping", ["aqm", "vct"])
def test_rows_match_published(rows, mapping):
    c, p = rows[mapping].cells, tables.PAPER_TABLE[mapping]
    for key in ("stabilizer", "vertical", "horizontal", "hubbard", "onsite"):
        assert c[key] == p[key], key


def test_bksf_row(rows):
    c, p = rows["bksf"].cells, tables.PAPER_TABLE["bksf"]
    assert c["horizontal"] == p["horizontal"]
    assert (c["hubbard"], c["hubbard_penalty"], c["onsite"], c["stabilizer"]) == (6, 2, 4, 6)
    assert c["vertical"][:3] == p["vertical"][:3]
    assert c["vertical"][3] == 3


def test_format_row(rows):
    assert rows["bksf"].format_row() == "6 | 2|6|5|3 | 8|4|5|7 | 6(+2) | 4"
    assert rows["aqm"].format_row() == "6 | 3|3|5|1 | 5|5|5|5 | 6 | 3"


def test_fallback_sizes(rows):
    assert rows["aqm"].source_L["vertical"] == 5
    assert rows["bksf"].source_L["vertical"] == 4
    assert rows["vct"].source_L["horizontal"] == 3


def test_histograms_cover_all_terms(rows):
    classes = tables.hubbard_classes(3)
    for t in rows.values():
        for cls, hist in t.histograms.items():
            assert sum(hist.values()) == len(classes[cls])


def test_json(rows):
    d = rows["vct"].to_json()
    assert d["cells"]["vertical"] == [5, 5, 5, 5]
    assert d["mapping"] == "vct"


def test_unknown_mapping():
    with pytest.raises(ValueError):
        tables.hubbard_weight_table("jw", 3)


@pytest.mark.parametrize("l1, l2, period, expected", [
    (4, 4, 1, {"aqm-e": 4, "aqm-square": 12, "aqm-sparse": 12, "vct": 16, "bksf": 8}),
    (6, 6, 1, {"aqm-e": 6, "aqm-square": 30, "vct": 36, "bksf": 24}),
    (7, 6, 2, {"aqm-sparse": 20}),
    (7, 6, 3, {"aqm-sparse": 15}),
])
def test_qubit_counts(l1, l2, period, expected):
    got = tables.qubit_counts(l1, l2, period)
    for k, v in expected.items():
        assert got[k]["aux"] == v
        assert got[k]["total"] == v + l1 * l2


@pytest.mark.parametrize("L, vct, bksf", [(1, 6, 1), (2, 20, 10), (3, 42, 27)])
def test_hubbard_totals(L, vct, bksf):
    assert tables.hubbard_qubit_totals(L) == {"vct": vct, "bksf": bksf}
