"""Two-sided stability: checks, proposal rounds, rotations, and routes.

Everything in this module requires an instance with a bipartition.  The
two sides are conventionally called workers (W) and firms (F); vectors are
compared from the firms' side, so the worker-optimal stable vector is the
minimum and the firm-optimal one is the maximum.
"""

import random

import networkx as nx

from .core import EdgeVector, InputError, InternalError, VerificationError
from .choice import is_acceptable, is_interesting, prefers


class StabilityReport:
    """Verdict of a stability check with the offending items, if any."""

    __slots__ = ("stable", "blocking", "unacceptable")

    def __init__(self, stable, blocking, unacceptable):
        self.stable = stable
        self.blocking = blocking
        self.unacceptable = unacceptable

    def __repr__(self):
        if self.stable:
            return "StabilityReport(stable)"
        return "StabilityReport(blocking={}, unacceptable={})".format(
            list(self.blocking), list(self.unacceptable)
        )


def is_stable(inst, x):
    """Check that ``x`` is acceptable everywhere and blocked by no edge.

    An edge blocks when both of its ends would take one more unit of it.
    Blocking is only probed at edges whose two ends find ``x`` acceptable;
    unacceptable vertices already disqualify the vector and are reported
    separately.
    """
    if not inst.in_box(x):
        raise InputError("vector is outside the capacity box")
    star = {v: inst.star_vector(x, v) for v in inst.vertices}
    unacceptable = tuple(
        v for v in inst.vertices if not is_acceptable(inst.choice[v], star[v])
    )
    bad = set(unacceptable)
    blocking = []
    for e in inst.space.ids:
        u, v = inst.ends(e)
        if u in bad or v in bad:
            continue
        if x[e] >= inst.caps[e]:
            continue
        if is_interesting(inst.choice[u], star[u], e, inst.caps[e]) and is_interesting(
            inst.choice[v], star[v], e, inst.caps[e]
        ):
            blocking.append(e)
    stable = not unacceptable and not blocking
    return StabilityReport(stable, tuple(blocking), unacceptable)


def precedes(inst, x, y, side):
    """Strict one-sided comparison: every ``side`` vertex weakly prefers ``y``.

    True iff ``x != y`` and each vertex on the chosen side either sees the
    same star in both vectors or strictly prefers its star in ``y``.  Both
    vectors must be acceptable at every vertex of that side.
    """
    if not inst.is_bipartite_labeled:
        raise InputError("one-sided comparison needs a bipartition")
    if side not in ("W", "F"):
        raise InputError("side must be W or F")
    if not inst.in_box(x) or not inst.in_box(y):
        raise InputError("vectors must lie in the capacity box")
    if x == y:
        return False
    group = inst.parts[0] if side == "W" else inst.parts[1]
    for v in sorted(group):
        xv = inst.star_vector(x, v)
        yv = inst.star_vector(y, v)
        if xv == yv:
            continue
        if not prefers(inst.choice[v], yv, xv):
            return False
    return True


def precedes_F(inst, x, y):
    """Strict firm-side comparison; the order all route machinery uses."""
    return precedes(inst, x, y, "F")


def precedes_W(inst, x, y):
    return precedes(inst, x, y, "W")


def deferred_acceptance(inst, side):
    """Run proposal rounds from one side and return the stable outcome.

    ``side`` names the proposing side; the result is optimal for it.  With
    firm-side comparison this means ``side="W"`` yields the minimum stable
    vector and ``side="F"`` the maximum.  The outcome is verified stable
    before being returned; failure to converge or verify signals a choice
    function that breaks the axioms.
    """
    if not inst.is_bipartite_labeled:
        raise InputError("proposal rounds need a bipartition")
    if side not in ("W", "F"):
        raise InputError("side must be W or F")
    proposers = inst.parts[0] if side == "W" else inst.parts[1]
    receivers = inst.parts[1] if side == "W" else inst.parts[0]

    bound = {e: inst.caps[e] for e in inst.space.ids}
    offer = {e: 0 for e in inst.space.ids}
    rounds_left = inst.caps.total() + 2
    while True:
        for p in sorted(proposers):
            zb = EdgeVector(
                inst.star_space[p], (bound[e] for e in inst.star_ids[p])
            )
            sel = inst.choice[p].choose(zb)
            for e in inst.star_ids[p]:
                offer[e] = sel[e]
        rejected = False
        for r in sorted(receivers):
            zo = EdgeVector(
                inst.star_space[r], (offer[e] for e in inst.star_ids[r])
            )
            kept = inst.choice[r].choose(zo)
            for e in inst.star_ids[r]:
                if kept[e] < offer[e]:
                    bound[e] = kept[e]
                    rejected = True
        if not rejected:
            break
        rounds_left -= 1
        if rounds_left < 0:
            raise VerificationError(
                "proposal rounds did not converge; choice axioms are suspect"
            )

    x = EdgeVector(inst.space, (offer[e] for e in inst.space.ids))
    report = is_stable(inst, x)
    if not report.stable:
        raise VerificationError(
            "proposal rounds produced an unstable vector: {!r}".format(report)
        )
    return x


class Rotation:
    """A closed alternating walk along which stable vectors can be shifted.

    The walk is stored as steps ``(v, e)``: stand at ``v``, traverse ``e``
    to the other end.  Edges at odd positions run from the W side and are
    positive (gain a unit), edges at even positions run back and are
    negative (lose a unit).  Edges are pairwise distinct; vertices may
    repeat.  Steps are kept in a canonical cyclic shift so equal rotations
    compare equal.
    """

    __slots__ = ("steps", "edges", "sign", "chi", "_space")

    def __init__(self, inst, steps):
        if not inst.is_bipartite_labeled:
            raise InputError("rotations need a bipartition")
        steps = tuple((str(v), str(e)) for v, e in steps)
        if len(steps) < 2 or len(steps) % 2:
            raise InputError("a rotation walk has an even number of steps")
        edge_ids = tuple(e for _, e in steps)
        if len(set(edge_ids)) != len(edge_ids):
            raise InputError("a rotation traverses each edge at most once")
        here = steps[0][0]
        sign = {}
        for i, (v, e) in enumerate(steps):
            if v != here:
                raise InputError("walk steps do not chain")
            expected = "W" if i % 2 == 0 else "F"
            if inst.side(v) != expected:
                raise InputError("walk does not alternate sides")
            here = inst.other_end(e, v)
            sign[e] = 1 if i % 2 == 0 else -1
        if here != steps[0][0]:
            raise InputError("walk does not close")

        shifts = [
            steps[i:] + steps[:i] for i in range(0, len(steps), 2)
        ]
        self.steps = min(shifts)
        self.edges = tuple(e for _, e in self.steps)
        self.sign = sign
        vals = [0] * len(inst.space)
        for e, s in sign.items():
            vals[inst.space.index[e]] = s
        self.chi = EdgeVector(inst.space, vals)
        self._space = inst.space

    @property
    def positive_edges(self):
        return tuple(e for e in self.edges if self.sign[e] > 0)

    @property
    def negative_edges(self):
        return tuple(e for e in self.edges if self.sign[e] < 0)

    def __len__(self):
        return len(self.steps)

    def __eq__(self, other):
        return isinstance(other, Rotation) and self.steps == other.steps

    def __hash__(self):
        return hash(self.steps)

    def __lt__(self, other):
        return self.steps < other.steps

    def __repr__(self):
        return "Rotation({})".format(
            " ".join("{}-{}".format(v, e) for v, e in self.steps)
        )

    def to_dict(self):
        return {
            "steps": [{"v": v, "e": e} for v, e in self.steps],
            "chi": {e: s for e, s in sorted(self.sign.items())},
        }

    @classmethod
    def from_dict(cls, inst, doc):
        if not isinstance(doc, dict) or "steps" not in doc:
            raise InputError("rotation document needs steps")
        steps = [(s["v"], s["e"]) for s in doc["steps"]]
        rot = cls(inst, steps)
        if "chi" in doc:
            declared = EdgeVector.from_mapping(inst.space, doc["chi"])
            if declared != rot.chi:
                raise InputError("declared incidence disagrees with the walk")
        return rot


def _candidate_walks(inst, x):
    """Closed alternating walks assembled from single-unit exchange links.

    A positive link follows a firm that would accept one more unit of an
    edge while bumping exactly one unit of another; a negative link follows
    a worker holding a unit it could drop, toward an edge whose extra unit
    the worker would refuse outright.  Cycles of links that traverse
    distinct edges are the rotation candidates.
    """
    w_side, f_side = inst.parts
    digraph = nx.DiGraph()
    star = {v: inst.star_vector(x, v) for v in inst.vertices}

    for e in inst.space.ids:
        u, v = inst.ends(e)
        f = v if v in f_side else u
        if x[e] >= inst.caps[e]:
            continue
        cf = inst.choice[f]
        if not is_interesting(cf, star[f], e, inst.caps[e]):
            continue
        menu = star[f].add_unit(e)
        deficit = menu.minus(cf.choose(menu))
        dropped = deficit.support()
        if len(dropped) == 1 and deficit[dropped[0]] == 1 and dropped[0] != e:
            digraph.add_edge(("+", e), ("-", dropped[0]))

    for w in sorted(w_side):
        ids = inst.star_ids[w]
        cw = inst.choice[w]
        droppable = [e for e in ids if x[e] >= 1]
        refusable = [
            e
            for e in ids
            if x[e] < inst.caps[e] and cw.choose(star[w].add_unit(e)) == star[w]
        ]
        for e1 in droppable:
            for e2 in refusable:
                if e1 != e2:
                    digraph.add_edge(("-", e1), ("+", e2))

    walks = []
    for cycle in nx.simple_cycles(digraph):
        edge_ids = [e for _, e in cycle]
        if len(set(edge_ids)) != len(edge_ids):
            continue
        starts = [i for i, (s, _) in enumerate(cycle) if s == "+"]
        if len(starts) * 2 != len(cycle):
            continue
        seq = cycle[starts[0]:] + cycle[: starts[0]]
        steps = []
        w0 = min(inst.ends(seq[0][1]), key=lambda v: inst.side(v) != "W")
        here = w0
        ok = True
        for s, e in seq:
            if here not in inst.ends(e):
                ok = False
                break
            steps.append((here, e))
            here = inst.other_end(e, here)
        if ok and here == w0:
            walks.append(steps)
    return walks


def find_rotations(inst, x):
    """All rotations applicable at the stable vector ``x``.

    Each returned rotation R satisfies: ``x + chi(R)`` is stable, strictly
    above ``x`` on the firm side, and no other returned rotation lands
    strictly between.  The returned family is verified pairwise
    edge-disjoint and each firm's aggregate exchange is verified to match
    its choice function; failures of either raise
    :class:`VerificationError` since they indicate broken axioms.
    """
    report = is_stable(inst, x)
    if not report.stable:
        raise VerificationError(
            "rotations are only defined at stable vectors: {!r}".format(report)
        )

    candidates = []
    for steps in _candidate_walks(inst, x):
        rot = Rotation(inst, steps)
        y = x.plus(rot.chi)
        if not inst.in_box(y):
            continue
        if not is_stable(inst, y).stable:
            continue
        if not precedes_F(inst, x, y):
            continue
        candidates.append(rot)

    by_chi = {}
    for rot in candidates:
        prev = by_chi.get(rot.chi.vals)
        if prev is None or rot.steps < prev.steps:
            by_chi[rot.chi.vals] = rot
    reps = sorted(by_chi.values())

    landings = {rot: x.plus(rot.chi) for rot in reps}
    found = []
    for rot in reps:
        y = landings[rot]
        if any(
            other is not rot and precedes_F(inst, landings[other], y)
            for other in reps
        ):
            continue
        found.append(rot)

    used_edges = set()
    for rot in found:
        overlap = used_edges & set(rot.edges)
        if overlap:
            raise VerificationError(
                "rotations at one vector share edges {}".format(sorted(overlap))
            )
        used_edges.update(rot.edges)

    for rot in found:
        _verify_aggregate_exchange(inst, x, rot)
    return found


def _verify_aggregate_exchange(inst, x, rot):
    """Each firm must swap the rotation's gains exactly for its losses."""
    _, f_side = inst.parts
    for f in sorted(f_side):
        positions = inst.star_positions[f]
        sub = rot.chi.restrict(inst.star_space[f], positions)
        if not sub.support():
            continue
        gains = EdgeVector(sub.space, (max(v, 0) for v in sub.vals))
        losses = EdgeVector(sub.space, (max(-v, 0) for v in sub.vals))
        menu = inst.star_vector(x, f).plus(gains)
        want = menu.minus(losses)
        if inst.choice[f].choose(menu) != want:
            raise VerificationError(
                "firm {!r} does not exchange along the rotation".format(f)
            )


def max_feasible_weight(inst, x, rot):
    """Largest multiple of the rotation's shift that stays stable from ``x``.

    Raises :class:`InputError` when even a single application fails, i.e.
    the rotation is not applicable at ``x``.
    """
    inst.check_vector(x)
    weight = 0
    here = x
    while True:
        nxt = here.plus(rot.chi)
        if not inst.in_box(nxt):
            break
        if not is_stable(inst, nxt).stable:
            break
        if not precedes_F(inst, here, nxt):
            break
        weight += 1
        here = nxt
    if weight == 0:
        raise InputError("rotation is not applicable at this vector")
    return weight


def apply_rotation(inst, x, rot, weight):
    """Shift ``x`` along the rotation ``weight`` times, verifying each step."""
    if not isinstance(weight, int) or isinstance(weight, bool) or weight < 1:
        raise InputError("weight must be a positive integer")
    here = x
    for _ in range(weight):
        nxt = here.plus(rot.chi)
        if (
            not inst.in_box(nxt)
            or not is_stable(inst, nxt).stable
            or not precedes_F(inst, here, nxt)
        ):
            raise InputError("weight exceeds the feasible range of this rotation")
        here = nxt
    return here


class RouteStep:
    """One application of a rotation with a positive integer weight."""

    __slots__ = ("rotation", "weight", "source", "target")

    def __init__(self, rotation, weight, source, target):
        self.rotation = rotation
        self.weight = weight
        self.source = source
        self.target = target

    def __repr__(self):
        return "RouteStep(weight={}, {})".format(self.weight, self.rotation)


class Route:
    """A sequence of weighted rotation applications between stable vectors."""

    __slots__ = ("start", "steps")

    def __init__(self, start, steps):
        self.start = start
        self.steps = tuple(steps)

    @property
    def end(self):
        return self.steps[-1].target if self.steps else self.start

    def vectors(self):
        """The visited stable vectors, endpoints included."""
        out = [self.start]
        out.extend(step.target for step in self.steps)
        return out

    def __len__(self):
        return len(self.steps)

    def __repr__(self):
        return "Route({} steps)".format(len(self.steps))


def build_full_route(inst, seed=0):
    """A principal route from the minimum stable vector to the maximum.

    At every visited vector one applicable rotation is chosen (seeded, so
    different seeds explore different full routes) and applied with its
    maximum feasible weight.  The endpoint is verified to be the
    firm-optimal vector.
    """
    rng = random.Random(seed)
    x = deferred_acceptance(inst, "W")
    steps = []
    fuel = max(1, inst.caps.total()) * max(1, len(inst.space)) + 2
    while True:
        rots = find_rotations(inst, x)
        if not rots:
            break
        rot = rots[rng.randrange(len(rots))]
        weight = max_feasible_weight(inst, x, rot)
        y = apply_rotation(inst, x, rot, weight)
        steps.append(RouteStep(rot, weight, x, y))
        x = y
        fuel -= 1
        if fuel < 0:
            raise InternalError("route construction failed to terminate")
    top = deferred_acceptance(inst, "F")
    if x != top:
        raise VerificationError(
            "route stalled before the firm-optimal vector"
        )
    route = Route(deferred_acceptance(inst, "W"), steps)
    return route
