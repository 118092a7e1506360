"""
The lattice of stable assignments in a two-sided market
=======================================================

A labeled bipartite instance splits its vertices into a W side and an F
side.  Stable assignments then form a distributive lattice under the F
side's shared preference, with deferred acceptance landing on the two ends.
"""

from stablepartners import (
    deferred_acceptance,
    enumerate_stable,
    instance_from_dict,
    is_stable,
    lattice_extremes,
    precedes_F,
)

# The smallest market with two stable outcomes: two workers, two firms,
# everyone ranked by somebody, nobody agreeing.  w1 wants f1, who wants w2,
# who wants f2, who wants w1.
doc = {
    "vertices": ["w1", "w2", "f1", "f2"],
    "edges": [
        {"id": "w1f1", "ends": ["w1", "f1"], "cap": 1},
        {"id": "w1f2", "ends": ["w1", "f2"], "cap": 1},
        {"id": "w2f1", "ends": ["w2", "f1"], "cap": 1},
        {"id": "w2f2", "ends": ["w2", "f2"], "cap": 1},
    ],
    "choice": {
        "w1": {"type": "linear_order_quota", "quota": 1, "order": ["w1f1", "w1f2"]},
        "w2": {"type": "linear_order_quota", "quota": 1, "order": ["w2f2", "w2f1"]},
        "f1": {"type": "linear_order_quota", "quota": 1, "order": ["w2f1", "w1f1"]},
        "f2": {"type": "linear_order_quota", "quota": 1, "order": ["w1f2", "w2f2"]},
    },
    "bipartition": {"W": ["w1", "w2"], "F": ["f1", "f2"]},
}
market = instance_from_dict(doc)

# Brute force first.  The capacity box is tiny, so we can afford to test
# every integer vector in it for stability.
stable = enumerate_stable(market)
print("stable vectors:", len(stable))
for x in stable:
    print("  ", {e: v for e, v in x.to_mapping().items() if v})

# Deferred acceptance with the W side proposing returns the outcome every
# worker likes best; letting the F side propose returns the other end.
w_best = deferred_acceptance(market, "W")
f_best = deferred_acceptance(market, "F")
print("W proposes:", {e: v for e, v in w_best.to_mapping().items() if v})
print("F proposes:", {e: v for e, v in f_best.to_mapping().items() if v})

lo, hi = lattice_extremes(market, stable=stable)
print("W-proposal is the F-side minimum:", w_best == lo)
print("F-proposal is the F-side maximum:", f_best == hi)
print("the ends are ordered:", precedes_F(market, lo, hi))

# Stability of an arbitrary vector can be queried directly; the report
# names any vertex that would drop units or any edge both ends would add.
probe = is_stable(market, w_best)
print("minimum is stable:", probe.stable)
