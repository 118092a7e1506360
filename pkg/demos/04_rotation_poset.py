"""
The precedence order on rotations and its closed weight functions
=================================================================

Across all full routes of a market, each rotation occurrence has a fixed
weight and a fixed set of occurrences that must act before it.  That
precedence order is a compact certificate for the whole stable set: stable
vectors correspond one to one with its closed weight functions.
"""

from stablepartners import (
    closed_from_vector,
    enumerate_stable,
    instance_from_dict,
    is_closed,
    rotation_order,
    vector_from_closed,
)

# A cyclic three-by-three market.  Each m ranks its own firm first and the
# rest in cycle order; each firm leads with the next m around the cycle.
# The stable set is a three-element chain climbed by two rotations.
edges = []
for i in (1, 2, 3):
    for j in (1, 2, 3):
        edges.append({"id": "e{}{}".format(i, j), "ends": ["m{}".format(i), "f{}".format(j)], "cap": 1})
orders = {
    "m1": ["e11", "e12", "e13"],
    "m2": ["e22", "e23", "e21"],
    "m3": ["e33", "e31", "e32"],
    "f1": ["e21", "e31", "e11"],
    "f2": ["e32", "e12", "e22"],
    "f3": ["e13", "e23", "e33"],
}
market = instance_from_dict(
    {
        "vertices": sorted(orders),
        "edges": edges,
        "choice": {
            v: {"type": "linear_order_quota", "quota": 1, "order": orders[v]}
            for v in orders
        },
        "bipartition": {"W": ["m1", "m2", "m3"], "F": ["f1", "f2", "f3"]},
    }
)

order = rotation_order(market)
print("occurrences:", len(order.occurrences))
for occ in order.occurrences:
    print("  ordinal {} weight {} walk {}".format(occ.ordinal, order.tau[occ], occ.rotation.steps))

# The second rotation frees the edges the first one filled, so it cannot
# act first; the covering relation records exactly that.
for a, b in order.covers():
    print("must precede:", a.rotation.steps[0], "<", b.rotation.steps[0])

# A closed weight function assigns each occurrence a weight up to its
# maximum, never using an occurrence without finishing everything below
# it.  Evaluating the order at a stable vector produces one, and the
# inversion returns the vector, so the census matches exactly.
stable = enumerate_stable(market)
print("stable vectors:", len(stable))
for x in stable:
    lam = closed_from_vector(market, order, x)
    weights = [lam.weights[occ] for occ in order.occurrences]
    back = vector_from_closed(market, order, lam)
    print("  weights {} invert correctly: {}".format(weights, back == x))

# Weight maps that skip a prerequisite are rejected.
first, second = order.occurrences
print("using only the later rotation is closed:", is_closed(order, {second: 1}))
