"""Full catalog replay against the golden reports."""

import json

from dehnfill.cli import _slug
from dehnfill.enumeration import load_catalog, replay_eliminations


def test_every_case_matches_its_golden_report(data_dir):
    reports = replay_eliminations(load_catalog(data_dir / "cases"), workers=4)
    assert [r.case_id for r in reports if not r.matches] == []
    for r in reports:
        golden = json.loads((data_dir / "expected" / (_slug(r.case_id) + ".json")).read_text())
        assert golden == r.to_dict()
    survivors = [r for r in reports if r.verdict == "survives"]
    assert survivors and all(r.lemma_tag == "homology.finite" for r in survivors)
