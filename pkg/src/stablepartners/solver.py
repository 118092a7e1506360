"""End-to-end solving of partnership instances.

A partnership instance either has a stable vector or it does not; in the
latter case the obstruction is a vector plus a family of pairwise
edge-disjoint odd cycles satisfying three local exchange conditions.  The
solver always produces one of the two outcomes by doubling the instance,
balancing, and projecting back.  An independent checker verifies the
conditions directly on the original instance, without reference to the
doubling, so a solver bug cannot silently certify a wrong answer.
"""

from .core import EdgeVector, InputError, InternalError, VerificationError
from .bipartite import Rotation, is_stable
from .symmetric import is_singular, run_qb, symmetrize


class OddCycle:
    """An oriented, edge-simple cycle with an odd number of edges.

    Stored as steps ``(v, e)``: stand at ``v``, traverse ``e`` to the next
    vertex.  Vertices may repeat, edges may not.  The orientation matters
    to the exchange conditions, but two traversal directions of the same
    cycle compare equal through :meth:`undirected_key`.
    """

    __slots__ = ("steps", "edges")

    def __init__(self, inst, steps):
        steps = tuple((str(v), str(e)) for v, e in steps)
        if len(steps) < 3 or len(steps) % 2 == 0:
            raise InputError("an odd cycle needs an odd number of edges, three or more")
        edge_ids = tuple(e for _, e in steps)
        if len(set(edge_ids)) != len(edge_ids):
            raise InputError("a cycle traverses each edge at most once")
        here = steps[0][0]
        for v, e in steps:
            if v != here:
                raise InputError("cycle steps do not chain")
            here = inst.other_end(e, v)
        if here != steps[0][0]:
            raise InputError("cycle does not close")
        shifts = [steps[i:] + steps[:i] for i in range(len(steps))]
        self.steps = min(shifts)
        self.edges = tuple(e for _, e in self.steps)

    def vertices(self):
        return tuple(v for v, _ in self.steps)

    def reversed_steps(self):
        vs = [v for v, _ in self.steps]
        es = [e for _, e in self.steps]
        k = len(es)
        out = [(vs[0], es[-1])]
        out.extend((vs[k - 1 - j], es[k - 2 - j]) for j in range(k - 1))
        return tuple(out)

    def undirected_key(self):
        """Canonical form ignoring traversal direction."""
        rev = self.reversed_steps()
        shifts = [rev[i:] + rev[:i] for i in range(len(rev))]
        return min(self.steps, min(shifts))

    def __eq__(self, other):
        return isinstance(other, OddCycle) and self.steps == other.steps

    def __hash__(self):
        return hash(self.steps)

    def __lt__(self, other):
        return self.steps < other.steps

    def __len__(self):
        return len(self.steps)

    def __repr__(self):
        return "OddCycle({})".format(
            " ".join("{}-{}".format(v, e) for v, e in self.steps)
        )

    def to_list(self):
        out = []
        for v, e in self.steps:
            out.append(v)
            out.append(e)
        return out

    @classmethod
    def from_list(cls, inst, items):
        if not isinstance(items, list) or len(items) % 2:
            raise InputError("a cycle document alternates vertex and edge ids")
        steps = [(items[i], items[i + 1]) for i in range(0, len(items), 2)]
        return cls(inst, steps)


class HalfPartnership:
    """A vector within capacities plus disjoint odd cycles: a solver outcome."""

    __slots__ = ("x", "cycles")

    def __init__(self, x, cycles):
        self.x = x
        self.cycles = tuple(sorted(cycles))

    def __repr__(self):
        return "HalfPartnership({} cycles)".format(len(self.cycles))

    def to_dict(self):
        return {
            "x": self.x.to_mapping(),
            "K": [c.to_list() for c in self.cycles],
        }

    @classmethod
    def from_dict(cls, inst, doc):
        if not isinstance(doc, dict) or "x" not in doc or "K" not in doc:
            raise InputError("solution document needs x and K")
        x = EdgeVector.from_mapping(inst.space, doc["x"])
        cycles = [OddCycle.from_list(inst, item) for item in doc["K"]]
        return cls(x, cycles)


class VertexContext:
    """What one vertex sees of a half-partnership.

    ``incoming`` and ``outgoing`` hold one unit per cycle edge that enters
    or leaves the vertex; ``visits`` lists, per cycle, the consecutive
    (entering, leaving) edge pairs at this vertex.
    """

    __slots__ = ("vertex", "base", "incoming", "outgoing", "visits")

    def __init__(self, vertex, base, incoming, outgoing, visits):
        self.vertex = vertex
        self.base = base
        self.incoming = incoming
        self.outgoing = outgoing
        self.visits = visits

    @property
    def with_incoming(self):
        return self.base.plus(self.incoming)

    @property
    def with_outgoing(self):
        return self.base.plus(self.outgoing)


def vertex_contexts(inst, hp):
    """Per-vertex view of ``hp``; also validates its well-formedness."""
    inst.check_vector(hp.x)
    if not inst.in_box(hp.x):
        raise InputError("solution vector is outside the capacity box")
    seen = set()
    for cyc in hp.cycles:
        OddCycle(inst, cyc.steps)
        overlap = seen & set(cyc.edges)
        if overlap:
            raise InputError(
                "cycles share edges {}".format(sorted(overlap))
            )
        seen.update(cyc.edges)

    contexts = {}
    for v in inst.vertices:
        space = inst.star_space[v]
        contexts[v] = VertexContext(
            v,
            inst.star_vector(hp.x, v),
            EdgeVector.zero(space),
            EdgeVector.zero(space),
            [],
        )
    for cyc in hp.cycles:
        per_vertex = {}
        for j, (v, e_out) in enumerate(cyc.steps):
            e_in = cyc.steps[j - 1][1]
            per_vertex.setdefault(v, []).append((e_in, e_out))
        for v, pairs in per_vertex.items():
            ctx = contexts[v]
            for e_in, e_out in pairs:
                ctx.incoming = ctx.incoming.add_unit(e_in)
                ctx.outgoing = ctx.outgoing.add_unit(e_out)
            ctx.visits.append((cyc, tuple(pairs)))
    return contexts


def verify_half_partnership(inst, hp):
    """Check the exchange conditions of a half-partnership, one by one.

    Returns a report with a list of violations; an empty list means the
    pair is genuine.  Malformed input (overlapping cycles, values outside
    the box) raises :class:`InputError` instead of reporting violations.

    The conditions, per vertex v with cycle-adjusted stars ``in(v)`` and
    ``out(v)``:

    * C1: both adjusted stars are acceptable, and for each cycle through
      v the choice on ``out(v)`` plus the cycle's entering units returns
      exactly the star with the cycle's leaving units removed;
    * C2: each single entering unit bumps exactly its successor unit on
      the cycle;
    * C3: no edge below capacity is wanted from both of its ends, where
      each end is probed on its own adjusted star whenever the probe
      stays within capacity.
    """
    contexts = vertex_contexts(inst, hp)
    violations = []

    def attempt(v, menu):
        if not menu.is_nonnegative() or any(
            menu[e] > inst.caps[e] for e in menu.space.ids
        ):
            return None
        return inst.choice[v].choose(menu)

    for v in sorted(contexts):
        ctx = contexts[v]
        for part, menu in (("in", ctx.with_incoming), ("out", ctx.with_outgoing)):
            sel = attempt(v, menu)
            if sel != menu:
                violations.append(
                    {"condition": "C1", "vertex": v, "part": part}
                )
        for cyc, pairs in ctx.visits:
            gains = EdgeVector.zero(ctx.base.space)
            losses = EdgeVector.zero(ctx.base.space)
            for e_in, e_out in pairs:
                gains = gains.add_unit(e_in)
                losses = losses.add_unit(e_out)
            menu = ctx.with_outgoing.plus(gains)
            sel = attempt(v, menu)
            if sel != menu.minus(losses):
                violations.append(
                    {
                        "condition": "C1",
                        "vertex": v,
                        "part": "exchange",
                        "cycle": cyc.to_list(),
                    }
                )
            for e_in, e_out in pairs:
                menu = ctx.with_outgoing.add_unit(e_in)
                sel = attempt(v, menu)
                if sel != menu.add_unit(e_out, -1):
                    violations.append(
                        {
                            "condition": "C2",
                            "vertex": v,
                            "cycle": cyc.to_list(),
                            "enter": e_in,
                            "leave": e_out,
                        }
                    )

    for e in inst.space.ids:
        if hp.x[e] >= inst.caps[e]:
            continue
        u, w = inst.ends(e)
        for taker, keeper in ((u, w), (w, u)):
            menu_t = contexts[taker].with_incoming
            menu_k = contexts[keeper].with_outgoing
            if menu_t[e] != menu_k[e]:
                raise InternalError(
                    "cycle bookkeeping split edge {!r}".format(e)
                )
            if menu_t[e] >= inst.caps[e]:
                continue
            sel_t = attempt(taker, menu_t.add_unit(e))
            sel_k = attempt(keeper, menu_k.add_unit(e))
            refused_t = sel_t == menu_t
            refused_k = sel_k == menu_k
            if not (refused_t or refused_k):
                violations.append(
                    {
                        "condition": "C3",
                        "edge": e,
                        "ends": [taker, keeper],
                    }
                )

    return VerificationReport(not violations, tuple(violations))


class VerificationReport:
    __slots__ = ("ok", "violations")

    def __init__(self, ok, violations):
        self.ok = ok
        self.violations = violations

    def __repr__(self):
        if self.ok:
            return "VerificationReport(ok)"
        return "VerificationReport({} violations)".format(len(self.violations))

    def to_dict(self):
        return {"ok": self.ok, "violations": list(self.violations)}


# -- projection and lifting between the instance and its double -------------


def project_cycle(si, rot):
    """Collapse a singular rotation of the double to an odd cycle below.

    Walks the rotation's positive edges: after each one, the mirror of the
    following negative edge is the next positive edge.  Their images in
    the base graph form the cycle; consecutive images share exactly one
    vertex, which fixes the orientation.
    """
    if not is_singular(si, rot):
        raise InputError("projection needs a singular rotation")
    steps = rot.steps
    length = len(steps)
    pos_index = {e: i for i, (_, e) in enumerate(steps) if i % 2 == 0}
    seq = [steps[0][1]]
    idx = 0
    for _ in range(length // 2 - 1):
        nxt = si.sigma_edge[steps[idx + 1][1]]
        if nxt not in pos_index or nxt in seq:
            raise InternalError("singular walk does not chain through mirrors")
        idx = pos_index[nxt]
        seq.append(nxt)
    if si.sigma_edge[steps[idx + 1][1]] != seq[0]:
        raise InternalError("singular walk does not close through mirrors")

    base = si.base
    base_seq = [si.base_edge[e] for e in seq]
    if len(set(base_seq)) != len(base_seq):
        raise InternalError("projected edges collide")
    walk = []
    for j, e in enumerate(base_seq):
        prev = base_seq[j - 1]
        shared = set(base.ends(prev)) & set(base.ends(e))
        if len(shared) != 1:
            raise InternalError("projected edges do not chain")
        walk.append((shared.pop(), e))
    return OddCycle(base, walk)


def cycle_rotation(si, cyc):
    """Lift an odd cycle to a singular rotation of the double.

    The doubled walk runs around the cycle twice, alternating vertex
    copies; odd length makes the parity flip between laps, so the walk
    closes after two.
    """
    base = si.base
    es = [e for _, e in cyc.steps]
    start = cyc.steps[0][0]
    here, parity = start, 0
    steps = []
    for t in range(2 * len(es)):
        e = es[t % len(es)]
        steps.append((si.copy_vertex(here, parity), si.copy_at(e, here, parity)))
        here = base.other_end(e, here)
        parity = 1 - parity
    if (here, parity) != (start, 0):
        raise InternalError("doubled cycle walk does not close")
    rot = Rotation(si.graph, steps)
    if not is_singular(si, rot):
        raise InternalError("doubled cycle walk is not singular")
    return rot


def lift_vector(si, hp):
    """The doubled vector of a half-partnership, one unit high along cycles.

    Edges off the cycles double symmetrically; a cycle edge's copy taken
    in the traversal direction keeps the low value and its mirror sits one
    unit higher.
    """
    base = si.base
    vals = {}
    for e in base.space.ids:
        lo, hi = si.copies[e]
        vals[lo] = vals[hi] = hp.x[e]
    for cyc in hp.cycles:
        for v, e in cyc.steps:
            lo = si.copy_at(e, v, 0)
            vals[si.sigma_edge[lo]] = hp.x[e] + 1
    return EdgeVector(si.graph.space, (vals[e] for e in si.graph.space.ids))


def project_solution(si, outcome):
    """Fold a balancing outcome back onto the base instance.

    The two copies of each edge must agree except across the odd core's
    cycles, where they differ by exactly one unit; the folded value is the
    smaller one.  Any other gap means the sweep was not quasi-balanced and
    raises :class:`VerificationError`.
    """
    cycles = [project_cycle(si, rot) for rot in outcome.odd_core]
    covered = set()
    for cyc in cycles:
        overlap = covered & set(cyc.edges)
        if overlap:
            raise VerificationError(
                "odd core cycles overlap on {}".format(sorted(overlap))
            )
        covered.update(cyc.edges)

    base = si.base
    folded = []
    for e in base.space.ids:
        lo_id, hi_id = si.copies[e]
        a, b = outcome.vector[lo_id], outcome.vector[hi_id]
        want = 1 if e in covered else 0
        if abs(a - b) != want:
            raise VerificationError(
                "projected values are unbalanced at edge {!r}".format(e)
            )
        folded.append(min(a, b))
    return HalfPartnership(EdgeVector(base.space, folded), cycles)


class SolveResult:
    """Everything the solver produced: outcome, certificates, verdicts."""

    __slots__ = ("hp", "solvable", "outcome", "symmetric", "report")

    def __init__(self, hp, solvable, outcome, symmetric, report):
        self.hp = hp
        self.solvable = solvable
        self.outcome = outcome
        self.symmetric = symmetric
        self.report = report

    def __repr__(self):
        verdict = "solvable" if self.solvable else "unsolvable"
        return "SolveResult({}, {} cycles)".format(verdict, len(self.hp.cycles))

    def to_dict(self):
        doc = self.hp.to_dict()
        return {
            "solvable": self.solvable,
            "x": doc["x"],
            "K": doc["K"],
            "verified": self.report.ok,
        }


def solve(inst, seed=0):
    """Produce and verify a half-partnership for any instance.

    Doubles the instance, runs the balancing sweep, projects the result,
    and verifies the exchange conditions with the independent checker.
    An empty cycle family means ``hp.x`` is a stable vector, which is
    additionally checked directly.  All verification failures raise
    :class:`VerificationError`; the returned result is always verified.
    """
    si = symmetrize(inst)
    outcome = run_qb(si, seed)
    hp = project_solution(si, outcome)
    report = verify_half_partnership(inst, hp)
    if not report.ok:
        raise VerificationError(
            "projected solution fails verification: {!r}".format(
                report.violations[:3]
            )
        )
    solvable = not hp.cycles
    if solvable:
        stability = is_stable(inst, hp.x)
        if not stability.stable:
            raise VerificationError(
                "empty cycle family but vector is unstable: {!r}".format(stability)
            )
    return SolveResult(hp, solvable, outcome, si, report)
