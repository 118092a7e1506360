"""Choice functions: the greedy quota rule, tables, renamings, axiom checks."""

import itertools
import random

import pytest

from stablepartners import BudgetError, InputError
from stablepartners.choice import (
    LinearOrderQuotaCF,
    RenamedCF,
    TableCF,
    check_axiom,
    choice_from_dict,
    is_acceptable,
    is_interesting,
    prefers,
)
from stablepartners.core import EdgeSpace, EdgeVector

from conftest import gated_instance


def quota_cf(caps, quota, order=None):
    ids = tuple("e{}".format(i + 1) for i in range(len(caps)))
    return LinearOrderQuotaCF(
        "v", EdgeSpace(ids), tuple(caps), quota, list(order or ids)
    )


def vec(cf, *vals):
    return EdgeVector(cf.space, vals)


def full_box(cf):
    return itertools.product(*[range(c + 1) for c in cf.caps])


# -- the greedy quota rule ----------------------------------------------------


def test_greedy_rule_cuts_at_the_overflowing_edge():
    cf = quota_cf((3, 2, 1), quota=4)
    assert cf.choose(vec(cf, 3, 2, 1)) == vec(cf, 3, 1, 0)


def test_vectors_within_quota_are_kept():
    cf = quota_cf((3, 2), quota=5)
    assert cf.choose(vec(cf, 2, 1)) == vec(cf, 2, 1)


def test_zero_maps_to_zero():
    cf = quota_cf((3, 2, 1), quota=2)
    assert cf.choose(vec(cf, 0, 0, 0)) == vec(cf, 0, 0, 0)


def test_greedy_rule_follows_the_order_not_the_ids():
    cf = quota_cf((2, 2), quota=2, order=("e2", "e1"))
    assert cf.choose(vec(cf, 2, 2)) == vec(cf, 0, 2)


def test_quota_zero_rejects_everything():
    cf = quota_cf((2, 2), quota=0)
    for vals in full_box(cf):
        assert cf.choose_vals(vals) == (0, 0)


def test_choose_validates_box_and_space():
    cf = quota_cf((1, 1), quota=1)
    with pytest.raises(InputError):
        cf.choose(vec(cf, 2, 0))
    other = EdgeVector(EdgeSpace(("x",)), (0,))
    with pytest.raises(InputError):
        cf.choose(other)


def test_order_must_be_a_permutation_of_the_star():
    with pytest.raises(InputError):
        quota_cf((1, 1), quota=1, order=("e1", "e1"))
    with pytest.raises(InputError):
        quota_cf((1, 1), quota=1, order=("e1",))
    with pytest.raises(InputError):
        quota_cf((1, 1), quota=-1)


def test_batch_matches_scalar_on_random_quota_functions():
    rng = random.Random(7)
    for _ in range(25):
        k = rng.randint(1, 4)
        caps = [rng.randint(1, 3) for _ in range(k)]
        order = ["e{}".format(i + 1) for i in range(k)]
        rng.shuffle(order)
        cf = quota_cf(caps, rng.randint(0, sum(caps) + 1), order)
        rows = list(full_box(cf))
        batch = cf.batch_vals(rows)
        for row, got in zip(rows, batch):
            assert tuple(got) == cf.choose_vals(row)


def test_choosing_twice_changes_nothing():
    rng = random.Random(21)
    for _ in range(10):
        caps = [rng.randint(1, 3) for _ in range(rng.randint(1, 3))]
        cf = quota_cf(caps, rng.randint(0, sum(caps)))
        for vals in full_box(cf):
            once = cf.choose_vals(vals)
            assert cf.choose_vals(once) == once


# -- tables and renamings -----------------------------------------------------


def sub_violating_table():
    """The two-edge table that regrets a unit when its menu shrinks."""
    sp = EdgeSpace(("e1", "e2"))
    entries = [
        ((0, 0), (0, 0)),
        ((0, 1), (0, 1)),
        ((1, 0), (0, 0)),
        ((1, 1), (1, 0)),
    ]
    return TableCF("v", sp, (1, 1), entries)


def test_table_requires_full_coverage():
    sp = EdgeSpace(("e1", "e2"))
    with pytest.raises(InputError):
        TableCF("v", sp, (1, 1), [((0, 0), (0, 0))])


def test_table_rejects_selections_above_the_argument():
    sp = EdgeSpace(("e1",))
    with pytest.raises(InputError):
        TableCF("v", sp, (1,), [((0,), (1,)), ((1,), (1,))])


def test_table_rejects_duplicate_rows():
    sp = EdgeSpace(("e1",))
    with pytest.raises(InputError):
        TableCF("v", sp, (1,), [((0,), (0,)), ((0,), (0,)), ((1,), (1,))])


def test_renamed_function_tracks_its_base():
    base = quota_cf((2, 1), quota=2)
    sp = EdgeSpace(("a", "b"))
    renamed = RenamedCF("v'", sp, (2, 1), base, {"a": "e1", "b": "e2"})
    for vals in full_box(base):
        assert renamed.choose_vals(vals) == base.choose_vals(vals)
    doc = renamed.to_dict()
    assert set(doc["order"]) == {"a", "b"}


def test_renaming_must_preserve_capacities():
    base = quota_cf((2, 1), quota=2)
    sp = EdgeSpace(("a", "b"))
    with pytest.raises(InputError):
        RenamedCF("v'", sp, (1, 2), base, {"a": "e1", "b": "e2"})


def test_choice_from_dict_builds_both_kinds():
    sp = EdgeSpace(("e1", "e2"))
    quota = choice_from_dict(
        "v", sp, (1, 1), {"type": "linear_order_quota", "quota": 1, "order": ["e2", "e1"]}
    )
    assert quota.choose_vals((1, 1)) == (0, 1)
    table = choice_from_dict(
        "v",
        sp,
        (1, 1),
        {
            "type": "table",
            "entries": [
                {"z": {}, "c": {}},
                {"z": {"e1": 1}, "c": {"e1": 1}},
                {"z": {"e2": 1}, "c": {}},
                {"z": {"e1": 1, "e2": 1}, "c": {"e1": 1}},
            ],
        },
    )
    assert table.choose_vals((1, 1)) == (1, 0)
    with pytest.raises(InputError):
        choice_from_dict("v", sp, (1, 1), {"type": "mystery"})


# -- predicates ---------------------------------------------------------------


def test_acceptability_is_fixedpointness():
    cf = quota_cf((1, 1), quota=1)
    assert is_acceptable(cf, vec(cf, 1, 0))
    assert not is_acceptable(cf, vec(cf, 1, 1))
    assert is_acceptable(cf, vec(cf, 0, 0))


def test_preference_is_resolved_by_the_joint_menu():
    cf = quota_cf((1, 1), quota=1)
    better, worse = vec(cf, 1, 0), vec(cf, 0, 1)
    assert prefers(cf, better, worse)
    assert not prefers(cf, worse, better)
    assert not prefers(cf, better, better)
    with pytest.raises(InputError):
        prefers(cf, vec(cf, 1, 1), better)


def test_incomparable_vectors_prefer_neither_way():
    sp = EdgeSpace(("e1", "e2", "e3"))
    entries = {z: z for z in itertools.product(range(2), repeat=3)}
    entries[(1, 1, 0)] = (1, 0, 0)
    entries[(1, 0, 1)] = (1, 0, 0)
    entries[(0, 1, 1)] = (0, 0, 0)
    entries[(1, 1, 1)] = (1, 0, 0)
    cf = TableCF("v", sp, (1, 1, 1), sorted(entries.items()))
    x = EdgeVector(sp, (0, 1, 0))
    y = EdgeVector(sp, (0, 0, 1))
    assert not prefers(cf, x, y) and not prefers(cf, y, x)


def test_interest_means_a_unit_would_be_kept():
    cf = quota_cf((2, 2), quota=2)
    held = vec(cf, 1, 1)
    assert is_interesting(cf, held, "e1", 2)
    assert not is_interesting(cf, held, "e2", 2)
    assert not is_interesting(cf, vec(cf, 2, 0), "e1", 2)
    with pytest.raises(InputError):
        is_interesting(cf, held, "zz", 2)
    with pytest.raises(InputError):
        is_interesting(cf, vec(cf, 2, 2), "e1", 2)


# -- axiom checking -----------------------------------------------------------


def test_quota_functions_pass_all_axioms_exhaustively():
    rng = random.Random(5150)
    for _ in range(12):
        k = rng.randint(1, 4)
        caps = [rng.randint(1, 3) for _ in range(k)]
        order = ["e{}".format(i + 1) for i in range(k)]
        rng.shuffle(order)
        cf = quota_cf(caps, rng.randint(0, sum(caps) + 1), order)
        for axiom in ("sub", "mon", "con", "gl"):
            report = check_axiom(cf, axiom)
            assert report.holds, (axiom, caps, cf.quota, report.witness)


def test_documented_table_fails_sub_with_a_live_witness():
    cf = sub_violating_table()
    report = check_axiom(cf, "sub")
    assert not report.holds
    assert report.witness["z"].vals == (1, 1)
    assert report.witness["zp"].vals == (1, 0)
    assert report.reevaluate(cf)
    doc = report.to_dict()
    assert doc["witness"]["z"] == {"e1": 1, "e2": 1}


def test_documented_table_also_fails_consistence_but_not_monotonicity():
    cf = sub_violating_table()
    assert check_axiom(cf, "mon").holds
    report = check_axiom(cf, "con")
    assert not report.holds
    assert report.reevaluate(cf)


def test_size_drop_is_caught_by_the_monotonicity_check():
    sp = EdgeSpace(("e1", "e2"))
    entries = [
        ((0, 0), (0, 0)),
        ((0, 1), (0, 1)),
        ((1, 0), (1, 0)),
        ((1, 1), (0, 0)),
    ]
    cf = TableCF("v", sp, (1, 1), entries)
    report = check_axiom(cf, "mon")
    assert not report.holds
    assert report.reevaluate(cf)


def gl_violating_table():
    """Unit rejections that flip away from an edge and back along a chain."""
    sp = EdgeSpace(("a", "b", "t"))
    entries = {z: z for z in itertools.product(range(2), repeat=3)}
    entries[(0, 0, 1)] = (0, 0, 0)
    entries[(1, 0, 1)] = (0, 0, 1)
    entries[(1, 1, 1)] = (1, 1, 0)
    return TableCF("v", sp, (1, 1, 1), sorted(entries.items()))


def test_rejection_flip_is_caught_by_the_gapless_check():
    cf = gl_violating_table()
    report = check_axiom(cf, "gl")
    assert not report.holds
    assert report.witness["edge"] == "t"
    assert report.witness["rejected"] == ("t", "a", "t")
    assert report.reevaluate(cf)


def test_gapless_holds_for_the_documented_sub_violator():
    assert check_axiom(sub_violating_table(), "gl").holds


def test_conditional_order_table_passes_pairwise_axioms():
    inst = gated_instance()
    cf = inst.choice["w1"]
    for axiom in ("sub", "mon", "con"):
        assert check_axiom(cf, axiom).holds, axiom


def test_stationarity_of_quota_and_conditional_tables():
    functions = [
        quota_cf((2, 1, 2), quota=3),
        quota_cf((1, 1, 1), quota=2, order=("e3", "e1", "e2")),
        gated_instance().choice["w1"],
    ]
    for cf in functions:
        box = list(full_box(cf))
        for z in box:
            cz = cf.choose_vals(z)
            for zp in box:
                join = tuple(max(a, b) for a, b in zip(z, zp))
                inner = tuple(max(a, b) for a, b in zip(cz, zp))
                assert cf.choose_vals(join) == cf.choose_vals(inner)


def test_preference_is_transitive_under_the_axioms():
    cf = quota_cf((1, 1, 1), quota=2, order=("e2", "e3", "e1"))
    box = [EdgeVector(cf.space, vals) for vals in full_box(cf)]
    acceptable = [z for z in box if is_acceptable(cf, z)]
    for x, y, z in itertools.permutations(acceptable, 3):
        if prefers(cf, y, x) and prefers(cf, z, y):
            assert prefers(cf, z, x)


def test_pairwise_budget_is_enforced_before_work_starts():
    cf = quota_cf((9, 9, 9), quota=10)
    with pytest.raises(BudgetError):
        check_axiom(cf, "sub", budget=10)


def test_gapless_budget_is_enforced():
    cf = quota_cf((3, 3, 3), quota=2)
    with pytest.raises(BudgetError):
        check_axiom(cf, "gl", budget=1)


def test_unknown_axiom_is_rejected():
    cf = quota_cf((1,), quota=1)
    with pytest.raises(InputError):
        check_axiom(cf, "zzz")
