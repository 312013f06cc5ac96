from __future__ import annotations

import pytest

from cfporecon.lemmas import PASS, REGISTRY, Settings, run_lemma

LABELS = {
    "A5Behaves", "ECC", "RestrictionSubgroups", "nocancellingorbits", "noflipping", "longorbits",
    "no60", "30splits", "indec", "disjbehaves", "FormalSubsetsEq", "SamePDBehaves", "RepPoint",
    "EqRepPoint", "Temp-lemmas", "Related", "B", "faithful", "lessdot", "order0", "order1",
    "orderN", "orderOmega",
}


def test_registry_covers_every_label():
    assert set(REGISTRY) == LABELS
    with pytest.raises(KeyError):
        run_lemma("bogus")


@pytest.mark.parametrize("name", ["A5Behaves", "no60", "30splits", "order0"])
def test_quick_lemmas_pass(name):
    rep = run_lemma(name)
    assert rep.status == PASS, [c for c in rep.checks if c.status != PASS]


def test_instance_override_is_respected():
    rep = run_lemma("A5Behaves", Settings(instances=("star:5,0",)))
    assert rep.status == PASS
    assert all("star:5,0" in c.name for c in rep.checks)
