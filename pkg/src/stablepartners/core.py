"""Graphs with integer edge capacities, edge vectors, and instance documents.

The structures here are deliberately small and immutable.  An
:class:`EdgeSpace` fixes an ordered universe of edge ids, an
:class:`EdgeVector` assigns an integer to every id of one space, and an
:class:`Instance` bundles a multigraph-free graph, per-edge capacities and
one choice function per vertex.  Everything downstream (stability checks,
rotations, the symmetrization machinery) works in terms of these types.
"""

import json


class InputError(ValueError):
    """Malformed documents, ill-typed arguments, or violated preconditions."""


class VerificationError(RuntimeError):
    """A certified property failed to verify.

    Raised when data that is supposed to satisfy a checked guarantee (a
    stable vector, a choice function obeying its axioms, a reconstruction
    identity) turns out not to.  Callers treat this as "the inputs lied",
    not as a bug in the caller.
    """


class BudgetError(RuntimeError):
    """An enumeration or check would exceed its configured work budget."""


class InternalError(RuntimeError):
    """An internal consistency assertion failed; indicates a genuine bug."""


class EdgeSpace:
    """An ordered tuple of distinct edge ids; the domain of edge vectors."""

    __slots__ = ("ids", "index")

    def __init__(self, ids):
        self.ids = tuple(ids)
        if len(set(self.ids)) != len(self.ids):
            raise InputError("edge ids must be distinct")
        self.index = {e: i for i, e in enumerate(self.ids)}

    def __len__(self):
        return len(self.ids)

    def __contains__(self, e):
        return e in self.index

    def __eq__(self, other):
        return isinstance(other, EdgeSpace) and self.ids == other.ids

    def __hash__(self):
        return hash(self.ids)

    def __repr__(self):
        return "EdgeSpace({!r})".format(list(self.ids))


class EdgeVector:
    """An integer vector indexed by the ids of one :class:`EdgeSpace`.

    Values may be negative; incidence vectors of rotations use both signs.
    Instances are immutable and hashable, so they can key dictionaries and
    sets during enumeration.
    """

    __slots__ = ("space", "vals", "_hash")

    def __init__(self, space, vals):
        self.space = space
        self.vals = tuple(int(v) for v in vals)
        if len(self.vals) != len(space):
            raise InputError("vector length does not match its edge space")
        self._hash = None

    @classmethod
    def zero(cls, space):
        return cls(space, (0,) * len(space))

    @classmethod
    def from_mapping(cls, space, mapping, default=0):
        unknown = set(mapping) - set(space.ids)
        if unknown:
            raise InputError("unknown edge ids: {}".format(sorted(unknown)))
        return cls(space, (int(mapping.get(e, default)) for e in space.ids))

    def to_mapping(self):
        return {e: v for e, v in zip(self.space.ids, self.vals)}

    def __getitem__(self, e):
        return self.vals[self.space.index[e]]

    def __eq__(self, other):
        return (
            isinstance(other, EdgeVector)
            and self.space == other.space
            and self.vals == other.vals
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.space.ids, self.vals))
        return self._hash

    def __repr__(self):
        return "EdgeVector({})".format(
            {e: v for e, v in zip(self.space.ids, self.vals) if v}
        )

    def _need_same_space(self, other):
        if not isinstance(other, EdgeVector) or other.space != self.space:
            raise InputError("vectors live on different edge spaces")

    def join(self, other):
        """Componentwise maximum."""
        self._need_same_space(other)
        return EdgeVector(self.space, map(max, self.vals, other.vals))

    def meet(self, other):
        """Componentwise minimum."""
        self._need_same_space(other)
        return EdgeVector(self.space, map(min, self.vals, other.vals))

    def plus(self, other):
        self._need_same_space(other)
        return EdgeVector(self.space, (a + b for a, b in zip(self.vals, other.vals)))

    def minus(self, other):
        self._need_same_space(other)
        return EdgeVector(self.space, (a - b for a, b in zip(self.vals, other.vals)))

    def scaled(self, k):
        return EdgeVector(self.space, (int(k) * v for v in self.vals))

    def le(self, other):
        """Componentwise order: true iff self <= other everywhere."""
        self._need_same_space(other)
        return all(a <= b for a, b in zip(self.vals, other.vals))

    def total(self):
        """Sum of all components (the size of a nonnegative vector)."""
        return sum(self.vals)

    def is_nonnegative(self):
        return all(v >= 0 for v in self.vals)

    def add_unit(self, e, amount=1):
        """Return a copy with ``amount`` added at edge ``e``."""
        i = self.space.index[e]
        vals = list(self.vals)
        vals[i] += amount
        return EdgeVector(self.space, vals)

    def with_value(self, e, value):
        i = self.space.index[e]
        vals = list(self.vals)
        vals[i] = int(value)
        return EdgeVector(self.space, vals)

    def support(self):
        """Edge ids with a nonzero value, in space order."""
        return tuple(e for e, v in zip(self.space.ids, self.vals) if v)

    def restrict(self, subspace, positions):
        """Project onto ``subspace`` using precomputed ``positions``."""
        return EdgeVector(subspace, (self.vals[p] for p in positions))


def vector_op(kind, x, y):
    """Apply a named componentwise operation to two vectors.

    ``kind`` is one of ``join``, ``meet``, ``plus``, ``minus``.  This is a
    thin dispatcher kept for symmetry with the serialized command surface;
    library code calls the methods directly.
    """
    try:
        method = {
            "join": EdgeVector.join,
            "meet": EdgeVector.meet,
            "plus": EdgeVector.plus,
            "minus": EdgeVector.minus,
        }[kind]
    except KeyError:
        raise InputError("unknown vector operation {!r}".format(kind)) from None
    return method(x, y)


class Instance:
    """A finite graph with integer capacities and one choice function per vertex.

    Parameters
    ----------
    vertices : iterable of str
        Vertex ids.  Stored sorted.
    edges : mapping id -> (u, v)
        Distinct endpoints per edge, no parallel edges.
    caps : mapping id -> int
        Nonnegative capacity per edge.
    choice : mapping vertex -> ChoiceFunction
        One choice function per vertex, acting on that vertex's star.
    parts : optional pair (W, F)
        A bipartition of the vertices.  When present, every edge must join
        the two sides, and two-sided machinery (proposal rounds, rotations)
        becomes available.
    """

    def __init__(self, vertices, edges, caps, choice, parts=None):
        self.vertices = tuple(sorted(vertices))
        if len(set(self.vertices)) != len(self.vertices):
            raise InputError("vertex ids must be distinct")
        vset = set(self.vertices)

        ends = {}
        seen_pairs = set()
        for e in sorted(edges):
            u, v = edges[e]
            if u not in vset or v not in vset:
                raise InputError("edge {!r} has an unknown endpoint".format(e))
            if u == v:
                raise InputError("edge {!r} is a loop".format(e))
            pair = frozenset((u, v))
            if pair in seen_pairs:
                raise InputError("parallel edge {!r}".format(e))
            seen_pairs.add(pair)
            ends[e] = tuple(sorted((u, v)))
        self.edge_ends = ends
        self.space = EdgeSpace(sorted(ends))

        if set(caps) != set(ends):
            raise InputError("capacities must cover exactly the edge set")
        for e, c in caps.items():
            if int(c) < 0:
                raise InputError("edge {!r} has negative capacity".format(e))
        self.caps = EdgeVector(self.space, (int(caps[e]) for e in self.space.ids))

        if parts is not None:
            w, f = parts
            w, f = frozenset(w), frozenset(f)
            if w & f:
                raise InputError("bipartition sides overlap")
            if w | f != vset:
                raise InputError("bipartition must cover every vertex")
            for e, (u, v) in ends.items():
                if (u in w) == (v in w):
                    raise InputError("edge {!r} does not join the two sides".format(e))
            self.parts = (w, f)
        else:
            self.parts = None

        star_ids = {v: [] for v in self.vertices}
        for e in self.space.ids:
            u, v = ends[e]
            star_ids[u].append(e)
            star_ids[v].append(e)
        self.star_ids = {v: tuple(ids) for v, ids in star_ids.items()}
        self.star_space = {v: EdgeSpace(ids) for v, ids in self.star_ids.items()}
        self.star_positions = {
            v: tuple(self.space.index[e] for e in ids)
            for v, ids in self.star_ids.items()
        }

        if set(choice) != vset:
            raise InputError("choice functions must cover exactly the vertex set")
        for v, cf in choice.items():
            if cf.space != self.star_space[v]:
                raise InputError(
                    "choice function at {!r} does not act on its star".format(v)
                )
            expected = tuple(self.caps[e] for e in self.star_ids[v])
            if tuple(cf.caps) != expected:
                raise InputError(
                    "choice function at {!r} disagrees with edge capacities".format(v)
                )
        self.choice = dict(choice)

    # -- basic queries ----------------------------------------------------

    def ends(self, e):
        try:
            return self.edge_ends[e]
        except KeyError:
            raise InputError("unknown edge {!r}".format(e)) from None

    def other_end(self, e, v):
        u, w = self.ends(e)
        if v == u:
            return w
        if v == w:
            return u
        raise InputError("vertex {!r} is not an end of edge {!r}".format(v, e))

    def side(self, v):
        if self.parts is None:
            raise InputError("instance carries no bipartition")
        return "W" if v in self.parts[0] else "F"

    @property
    def is_bipartite_labeled(self):
        return self.parts is not None

    def check_vector(self, x):
        if not isinstance(x, EdgeVector) or x.space != self.space:
            raise InputError("vector does not live on this instance's edges")

    def in_box(self, x):
        """True iff 0 <= x <= caps componentwise."""
        self.check_vector(x)
        return x.is_nonnegative() and x.le(self.caps)

    def star_vector(self, x, v):
        """Restriction of ``x`` to the star of ``v``."""
        return x.restrict(self.star_space[v], self.star_positions[v])

    def box_size(self):
        n = 1
        for c in self.caps.vals:
            n *= c + 1
        return n

    def __repr__(self):
        return "Instance({} vertices, {} edges)".format(
            len(self.vertices), len(self.space)
        )


# -- document parsing and serialization ------------------------------------


def parse_instance(text):
    """Parse a JSON instance document into an :class:`Instance`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("invalid JSON: {}".format(exc)) from None
    return instance_from_dict(doc)


def instance_from_dict(doc):
    """Build an :class:`Instance` from a decoded document."""
    from .choice import choice_from_dict

    if not isinstance(doc, dict):
        raise InputError("instance document must be an object")
    for key in ("vertices", "edges", "choice"):
        if key not in doc:
            raise InputError("instance document lacks {!r}".format(key))
    extra = set(doc) - {"vertices", "edges", "choice", "bipartition"}
    if extra:
        raise InputError("unknown document keys: {}".format(sorted(extra)))

    vertices = doc["vertices"]
    if not isinstance(vertices, list) or not all(
        isinstance(v, str) for v in vertices
    ):
        raise InputError("vertices must be a list of strings")

    edges = {}
    caps = {}
    if not isinstance(doc["edges"], list):
        raise InputError("edges must be a list")
    for entry in doc["edges"]:
        if not isinstance(entry, dict) or set(entry) != {"id", "ends", "cap"}:
            raise InputError("each edge needs exactly id, ends and cap")
        e = entry["id"]
        if not isinstance(e, str):
            raise InputError("edge ids must be strings")
        if e in edges:
            raise InputError("duplicate edge id {!r}".format(e))
        ends = entry["ends"]
        if not (isinstance(ends, list) and len(ends) == 2):
            raise InputError("edge {!r} needs two endpoints".format(e))
        if not isinstance(entry["cap"], int) or isinstance(entry["cap"], bool):
            raise InputError("edge {!r} needs an integer capacity".format(e))
        edges[e] = tuple(ends)
        caps[e] = entry["cap"]

    parts = None
    if "bipartition" in doc:
        bp = doc["bipartition"]
        if not isinstance(bp, dict) or set(bp) != {"W", "F"}:
            raise InputError("bipartition needs exactly the keys W and F")
        parts = (bp["W"], bp["F"])

    spec = doc["choice"]
    if not isinstance(spec, dict):
        raise InputError("choice must be an object keyed by vertex")

    # The stars are derivable before full validation; choice construction
    # needs them.  Build a skeleton star map mirroring Instance.__init__.
    star_ids = {v: [] for v in vertices}
    for e in sorted(edges):
        u, v = edges[e]
        if u in star_ids:
            star_ids[u].append(e)
        if v in star_ids:
            star_ids[v].append(e)

    choice = {}
    for v in vertices:
        if v not in spec:
            raise InputError("no choice function for vertex {!r}".format(v))
        ids = tuple(star_ids[v])
        star_caps = tuple(caps[e] for e in ids)
        choice[v] = choice_from_dict(v, EdgeSpace(ids), star_caps, spec[v])

    return Instance(vertices, edges, caps, choice, parts)


def instance_to_dict(inst):
    """Serialize an :class:`Instance` back to its document form."""
    doc = {
        "vertices": list(inst.vertices),
        "edges": [
            {"id": e, "ends": list(inst.ends(e)), "cap": inst.caps[e]}
            for e in inst.space.ids
        ],
        "choice": {v: inst.choice[v].to_dict() for v in inst.vertices},
    }
    if inst.parts is not None:
        w, f = inst.parts
        doc["bipartition"] = {"W": sorted(w), "F": sorted(f)}
    return doc


def serialize_instance(inst):
    return json.dumps(instance_to_dict(inst), sort_keys=True, indent=2) + "\n"
