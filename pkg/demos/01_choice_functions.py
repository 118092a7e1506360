"""
Choice functions on a capacitated star
======================================

Every vertex in a partnership instance owns a choice function: given any
menu of unit offers along its incident edges, it says which units it keeps.
This script builds the workhorse implementation, exercises it on a few
menus, and then verifies its axioms exhaustively over the whole box.
"""

from stablepartners import LinearOrderQuotaCF, TableCF, check_axiom
from stablepartners.core import EdgeSpace

# A hub with three incident edges.  Capacities bound how many units each
# edge can carry; the quota bounds how many units the hub keeps in total.
space = EdgeSpace(["north", "east", "south"])
caps = (2, 2, 1)
hub = LinearOrderQuotaCF("hub", space, caps, quota=3, order=["north", "east", "south"])

print("box size:", hub.box_size())

# The hub fills its quota greedily down its preference list.  Offer it a
# full menu and it keeps both north units, both east units would overflow
# the quota, so east gets one and south gets nothing.
for menu in [(2, 2, 1), (1, 2, 1), (0, 0, 1), (2, 0, 0)]:
    print("choose{} = {}".format(menu, hub.choose_vals(menu)))

# The solver's guarantees rest on four axioms.  Informally: keeping a unit
# never depends on offers you would reject anyway (SUB), larger menus never
# shrink what you keep in total (MON), removing rejected units changes
# nothing (CON), and rejections are consistent with a ranking of single
# units (GL).  The checker walks every comparable pair in the box.
for axiom in ("SUB", "MON", "CON", "GL"):
    report = check_axiom(hub, axiom)
    print("{}: holds={} after {} pairs".format(axiom, report.holds, report.pairs_checked))

# Arbitrary tables are allowed as choice functions, but nothing forces them
# to be lawful.  This one keeps the second edge's unit only while the first
# edge is also offering, which breaks substitutability, and the checker
# hands back the offending pair of menus as a witness.
bad_space = EdgeSpace(["e1", "e2"])
entries = [
    ((0, 0), (0, 0)),
    ((0, 1), (0, 1)),
    ((1, 0), (0, 0)),
    ((1, 1), (1, 0)),
]
shifty = TableCF("hub", bad_space, (1, 1), entries)
report = check_axiom(shifty, "SUB")
print("table SUB holds:", report.holds)
print("witness menus:", report.witness["z"].to_mapping(), report.witness["zp"].to_mapping())
