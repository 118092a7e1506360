"""Bipartite doubling of an instance, its mirror involution, and balancing.

Any instance can be doubled: each vertex ``v`` becomes a worker copy
``v^0`` and a firm copy ``v^1``, and each edge becomes two copies joining
opposite sides.  The doubled instance is bipartite, so the whole rotation
machinery applies, and swapping the superscripts is an involution that
reverses the firm-side order.  Vectors fixed by the involution are exactly
the doubles of plain vectors, which is what makes the doubling useful.
"""

import random
from collections import Counter

from .core import (
    EdgeSpace,
    EdgeVector,
    InputError,
    Instance,
    InternalError,
    VerificationError,
)
from .choice import RenamedCF
from .bipartite import (
    Rotation,
    apply_rotation,
    deferred_acceptance,
    find_rotations,
    max_feasible_weight,
)


def _copy_name(name, i):
    return "{}^{}".format(name, i)


class SymmetricInstance:
    """An instance together with its bipartite double and the mirror maps."""

    __slots__ = ("base", "graph", "sigma_vertex", "sigma_edge", "base_edge", "copies")

    def __init__(self, base, graph, sigma_vertex, sigma_edge, base_edge, copies):
        self.base = base
        self.graph = graph
        self.sigma_vertex = sigma_vertex
        self.sigma_edge = sigma_edge
        self.base_edge = base_edge
        self.copies = copies

    def copy_vertex(self, v, i):
        return _copy_name(v, i)

    def copy_at(self, e, v, i):
        """The copy of base edge ``e`` incident to the copy ``v^i``."""
        a, _ = self.base.ends(e)
        return self.copies[e][0 if (v == a) == (i == 0) else 1]

    def reflect_vector(self, x):
        self.graph.check_vector(x)
        return EdgeVector(
            self.graph.space, (x[self.sigma_edge[e]] for e in self.graph.space.ids)
        )

    def reflect_rotation(self, rot):
        mapped = [
            (self.sigma_vertex[v], self.sigma_edge[e]) for v, e in rot.steps
        ]
        return Rotation(self.graph, mapped[1:] + mapped[:1])

    def double_vector(self, x):
        """The symmetric doubled image of a vector on the base edges."""
        self.base.check_vector(x)
        return EdgeVector(
            self.graph.space, (x[self.base_edge[e]] for e in self.graph.space.ids)
        )

    def halve_vector(self, x):
        """Inverse of :meth:`double_vector`; requires a symmetric vector."""
        if self.reflect_vector(x) != x:
            raise InputError("vector is not symmetric")
        return EdgeVector(
            self.base.space, (x[self.copies[e][0]] for e in self.base.space.ids)
        )


def symmetrize(inst):
    """Build the bipartite double of ``inst`` with copied choice functions."""
    vertices = [
        _copy_name(v, i) for v in inst.vertices for i in (0, 1)
    ]
    edges = {}
    caps = {}
    copies = {}
    sigma_edge = {}
    base_edge = {}
    for e in inst.space.ids:
        a, b = inst.ends(e)
        e0, e1 = _copy_name(e, 0), _copy_name(e, 1)
        edges[e0] = (_copy_name(a, 0), _copy_name(b, 1))
        edges[e1] = (_copy_name(b, 0), _copy_name(a, 1))
        caps[e0] = caps[e1] = inst.caps[e]
        copies[e] = (e0, e1)
        sigma_edge[e0], sigma_edge[e1] = e1, e0
        base_edge[e0] = base_edge[e1] = e

    sigma_vertex = {}
    for v in inst.vertices:
        sigma_vertex[_copy_name(v, 0)] = _copy_name(v, 1)
        sigma_vertex[_copy_name(v, 1)] = _copy_name(v, 0)

    parts = (
        [_copy_name(v, 0) for v in inst.vertices],
        [_copy_name(v, 1) for v in inst.vertices],
    )

    choice = {}
    for v in inst.vertices:
        a_end_of = {e: inst.ends(e)[0] for e in inst.star_ids[v]}
        for i in (0, 1):
            ids = sorted(
                copies[e][0 if (v == a_end_of[e]) == (i == 0) else 1]
                for e in inst.star_ids[v]
            )
            space = EdgeSpace(ids)
            id_map = {s: base_edge[s] for s in ids}
            star_caps = [caps[s] for s in ids]
            choice[_copy_name(v, i)] = RenamedCF(
                _copy_name(v, i), space, star_caps, inst.choice[v], id_map
            )

    graph = Instance(vertices, edges, caps, choice, parts)
    return SymmetricInstance(inst, graph, sigma_vertex, sigma_edge, base_edge, copies)


def reflect(si, obj):
    """Mirror a vector or a rotation of the doubled instance."""
    if isinstance(obj, Rotation):
        return si.reflect_rotation(obj)
    if isinstance(obj, EdgeVector):
        return si.reflect_vector(obj)
    raise InputError("reflection applies to vectors and rotations")


def is_singular(si, rot):
    """True iff the rotation is its own mirror image.

    Checked two independent ways: by comparing canonical walks, and by
    checking that the mirror of the positive edge set is exactly the
    negative edge set.  A single shared mirror pair is not enough; a
    rotation may cross its reflection on one edge without being
    self-mirrored.  The two tests must agree, and a singular rotation's
    length must be twice an odd number; disagreement is an internal error.
    """
    by_walk = si.reflect_rotation(rot) == rot
    positives = {e for e in rot.edges if rot.sign[e] == 1}
    negatives = {e for e in rot.edges if rot.sign[e] == -1}
    by_edges = {si.sigma_edge[e] for e in positives} == negatives
    if by_walk != by_edges:
        raise InternalError("singularity tests disagree on {!r}".format(rot))
    if by_walk and len(rot.steps) % 4 != 2:
        raise InternalError("singular rotation of impossible length")
    return by_walk


class QBOutcome:
    """Result of the balancing sweep.

    ``vector`` is the reached stable vector of the double; ``odd_core``
    holds the singular rotations that were applied with a rounded-down
    half weight because their full weight was odd.  The vector is
    symmetric exactly when the odd core is empty; in general its mirror
    differs by one application of each odd-core rotation, and that
    identity is verified before the outcome is returned.
    """

    __slots__ = ("vector", "picks", "odd_core", "singular_used", "start")

    def __init__(self, vector, picks, odd_core, singular_used, start):
        self.vector = vector
        self.picks = picks
        self.odd_core = odd_core
        self.singular_used = singular_used
        self.start = start

    @property
    def symmetric(self):
        return not self.odd_core

    def __repr__(self):
        return "QBOutcome({} picks, odd core of {})".format(
            len(self.picks), len(self.odd_core)
        )


def run_qb(si, seed=0):
    """Sweep rotations upward, never using both a rotation and its mirror.

    Starting at the minimum stable vector of the double, repeatedly pick
    an applicable rotation whose mirror has not been used: singular ones
    (self-mirrored) advance by half their feasible weight rounded down,
    all others by their full feasible weight.  The sweep stops when every
    applicable rotation's mirror is used up.
    """
    graph = si.graph
    x = deferred_acceptance(graph, "W")
    start = x
    rng = random.Random(seed)
    used = set()
    picks = []
    odd = {}
    singular_used = {}
    fuel = (graph.caps.total() + 2) * max(1, len(graph.space)) + 2
    while True:
        rots = find_rotations(graph, x)
        fresh = [
            r for r in rots if si.reflect_rotation(r).steps not in used
        ]
        if not fresh:
            break
        rot = fresh[rng.randrange(len(fresh))]
        tau = max_feasible_weight(graph, x, rot)
        if is_singular(si, rot):
            weight = tau // 2
            singular_used[rot.steps] = rot
            if tau % 2:
                odd[rot.steps] = rot
        else:
            weight = tau
        if weight:
            x = apply_rotation(graph, x, rot, weight)
        used.add(rot.steps)
        picks.append((rot, weight, tau))
        fuel -= 1
        if fuel < 0:
            raise InternalError("balancing sweep failed to terminate")

    odd_core = tuple(sorted(odd.values()))
    expected = x
    for rot in odd_core:
        expected = expected.plus(rot.chi)
    if si.reflect_vector(x) != expected:
        raise VerificationError(
            "balancing sweep failed its reflection identity"
        )
    return QBOutcome(
        x, tuple(picks), odd_core, tuple(sorted(singular_used.values())), start
    )


def mirror_occurrences(si, order):
    """Pair each rotation occurrence with its mirror occurrence.

    The i-th occurrence of a rotation corresponds to the i-th from last
    occurrence of its mirror, with the same weight.  Count or weight
    mismatches mean the doubled instance violates its symmetry and raise
    :class:`VerificationError`.
    """
    counts = Counter(occ.rotation.steps for occ in order.occurrences)
    by_key = {}
    for occ in order.occurrences:
        by_key[(occ.rotation.steps, occ.ordinal)] = occ
    mapping = {}
    for occ in order.occurrences:
        mirror_rot = si.reflect_rotation(occ.rotation)
        m = counts.get(mirror_rot.steps, 0)
        if counts[occ.rotation.steps] != m:
            raise VerificationError(
                "rotation and mirror differ in occurrence count"
            )
        partner = by_key.get((mirror_rot.steps, m - 1 - occ.ordinal))
        if partner is None:
            raise VerificationError("mirror occurrence is missing")
        if order.tau[occ] != order.tau[partner]:
            raise VerificationError("mirror occurrences differ in weight")
        mapping[occ] = partner
    return mapping
