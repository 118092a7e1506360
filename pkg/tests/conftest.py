"""Shared fixtures: frozen instances, corpus generators, independent oracles.

The frozen instances pin down hand-derived expectations; the generators
produce seeded random corpora small enough for brute-force enumeration.
Oracle helpers here deliberately avoid the library's stability and rotation
code paths so that tests compare two independent computations.
"""

import itertools
import random

import pytest

from stablepartners import (
    EdgeVector,
    Instance,
    enumerate_stable,
    find_rotations,
    instance_from_dict,
    rotation_order,
    symmetrize,
)
from stablepartners.choice import TableCF
from stablepartners.core import EdgeSpace


# -- document builders -------------------------------------------------------


def quota_doc(edges, quotas, orders, parts=None):
    """Build an instance document from edge tuples and per-vertex quotas.

    ``edges`` is a list of (id, u, v, cap); ``quotas`` maps vertex to its
    quota; ``orders`` maps vertex to its edge preference list (most
    preferred first).
    """
    vertices = {v for _, u, w, _ in edges for v in (u, w)}
    if parts is not None:
        vertices |= set(parts[0]) | set(parts[1])
    vertices = sorted(vertices)
    doc = {
        "vertices": vertices,
        "edges": [{"id": e, "ends": [u, w], "cap": cap} for e, u, w, cap in edges],
        "choice": {
            v: {
                "type": "linear_order_quota",
                "quota": quotas.get(v, 0),
                "order": orders.get(v, []),
            }
            for v in vertices
        },
    }
    if parts is not None:
        doc["bipartition"] = {"W": sorted(parts[0]), "F": sorted(parts[1])}
    return doc


def b4_doc(cap=1):
    """Crossed two-by-two block: each side ranks the other side oppositely."""
    return quota_doc(
        edges=[
            ("w1f1", "w1", "f1", cap),
            ("w1f2", "w1", "f2", cap),
            ("w2f1", "w2", "f1", cap),
            ("w2f2", "w2", "f2", cap),
        ],
        quotas={"w1": cap, "w2": cap, "f1": cap, "f2": cap},
        orders={
            "w1": ["w1f1", "w1f2"],
            "w2": ["w2f2", "w2f1"],
            "f1": ["w2f1", "w1f1"],
            "f2": ["w1f2", "w2f2"],
        },
        parts=(["w1", "w2"], ["f1", "f2"]),
    )


def triangle_doc():
    """Three parties in a cyclic tie: everyone prefers the next one around."""
    return quota_doc(
        edges=[("ab", "a", "b", 1), ("bc", "b", "c", 1), ("ca", "c", "a", 1)],
        quotas={"a": 1, "b": 1, "c": 1},
        orders={"a": ["ab", "ca"], "b": ["bc", "ab"], "c": ["ca", "bc"]},
    )


def path3_doc():
    """Path a - b - c where the middle vertex can hold both neighbors."""
    return quota_doc(
        edges=[("ab", "a", "b", 1), ("bc", "b", "c", 1)],
        quotas={"a": 1, "b": 2, "c": 1},
        orders={"a": ["ab"], "b": ["ab", "bc"], "c": ["bc"]},
        parts=(["a", "c"], ["b"]),
    )


def gated_instance():
    """Two coupled blocks whose bridge defeats route-family invariance.

    The big block is a crossed two-by-two with capacity 2 (rotation R), the
    small one a unit crossed block (rotation S), and the bridge w1f3 makes
    R's second unit conflict with the small block's start.  w1's choice is a
    conditional-order table: greedy a > b > bridge while any unit of a is
    held, greedy bridge > b once a is empty.  That table satisfies the
    pairwise axioms exhaustively, yet the maximal feasible weight of R jumps
    from 1 to 2 after S is applied, so different tie-breaks produce full
    routes with genuinely different weighted families.  Tests use this to
    pin the detector, not as a healthy example.
    """
    edges = {
        "a": ("w1", "f1", 2),
        "b": ("w1", "f2", 2),
        "c": ("w2", "f2", 2),
        "d": ("w2", "f1", 2),
        "estar": ("w1", "f3", 1),
        "e3": ("w3", "f3", 1),
        "e4": ("w4", "f3", 1),
        "bb3": ("w3", "f4", 1),
        "bb4": ("w4", "f4", 1),
    }

    def star(v):
        return sorted(e for e, (u, w, _) in edges.items() if v in (u, w))

    def w1_table():
        ids = star("w1")
        caps = tuple(edges[e][2] for e in ids)
        pos = {e: i for i, e in enumerate(ids)}

        def rule(z):
            order = ["a", "b", "estar"] if z[pos["a"]] >= 1 else ["estar", "b"]
            out = [0] * len(ids)
            run = 0
            for e in order:
                take = min(z[pos[e]], 2 - run)
                out[pos[e]] = take
                run += take
                if run == 2:
                    break
            return tuple(out)

        ranges = [range(c + 1) for c in caps]
        entries = [(z, rule(z)) for z in itertools.product(*ranges)]
        return TableCF("w1", EdgeSpace(ids), caps, entries)

    def quota_cf(v, q, order):
        from stablepartners.choice import LinearOrderQuotaCF

        ids = star(v)
        caps = tuple(edges[e][2] for e in ids)
        return LinearOrderQuotaCF(v, EdgeSpace(ids), caps, q, order)

    choice = {
        "w1": w1_table(),
        "w2": quota_cf("w2", 2, ["c", "d"]),
        "w3": quota_cf("w3", 1, ["e3", "bb3"]),
        "w4": quota_cf("w4", 1, ["bb4", "e4"]),
        "f1": quota_cf("f1", 2, ["d", "a"]),
        "f2": quota_cf("f2", 2, ["b", "c"]),
        "f3": quota_cf("f3", 1, ["e4", "estar", "e3"]),
        "f4": quota_cf("f4", 1, ["bb3", "bb4"]),
    }
    return Instance(
        ["w1", "w2", "w3", "w4", "f1", "f2", "f3", "f4"],
        {e: (u, w) for e, (u, w, _) in edges.items()},
        {e: cap for e, (_, _, cap) in edges.items()},
        choice,
        parts=(["w1", "w2", "w3", "w4"], ["f1", "f2", "f3", "f4"]),
    )


def cycle3_doc():
    """Cyclic three-by-three matching market with a two-rotation chain.

    Every m ranks its own f first and the rest cyclically; every f ranks
    the next m around the cycle first.  Three stable assignments form a
    chain, climbed by two six-step rotations that must act in order.
    """
    edges = [
        ("e%d%d" % (i, j), "m%d" % i, "f%d" % j, 1)
        for i in (1, 2, 3)
        for j in (1, 2, 3)
    ]
    quotas = {v: 1 for v in ("m1", "m2", "m3", "f1", "f2", "f3")}
    orders = {
        "m1": ["e11", "e12", "e13"],
        "m2": ["e22", "e23", "e21"],
        "m3": ["e33", "e31", "e32"],
        "f1": ["e21", "e31", "e11"],
        "f2": ["e32", "e12", "e22"],
        "f3": ["e13", "e23", "e33"],
    }
    return quota_doc(
        edges, quotas, orders, parts=(["m1", "m2", "m3"], ["f1", "f2", "f3"])
    )


def twin_doc():
    """Two vertex-disjoint crossed blocks in one instance.

    Each block carries its own rotation; the two occurrences are
    incomparable, so the principal graph is a diamond with two full routes.
    """
    edges, quotas, orders = [], {}, {}
    for p in ("p", "q"):
        for e, u, w in [
            ("w1f1", "w1", "f1"),
            ("w1f2", "w1", "f2"),
            ("w2f1", "w2", "f1"),
            ("w2f2", "w2", "f2"),
        ]:
            edges.append((p + e, p + u, p + w, 1))
        quotas.update({p + v: 1 for v in ("w1", "w2", "f1", "f2")})
        orders.update(
            {
                p + "w1": [p + "w1f1", p + "w1f2"],
                p + "w2": [p + "w2f2", p + "w2f1"],
                p + "f1": [p + "w2f1", p + "w1f1"],
                p + "f2": [p + "w1f2", p + "w2f2"],
            }
        )
    parts = (
        [p + v for p in "pq" for v in ("w1", "w2")],
        [p + v for p in "pq" for v in ("f1", "f2")],
    )
    return quota_doc(edges, quotas, orders, parts=parts)


# -- frozen instances --------------------------------------------------------


@pytest.fixture(scope="session")
def b4():
    return instance_from_dict(b4_doc())


@pytest.fixture(scope="session")
def b4_scaled():
    return instance_from_dict(b4_doc(cap=3))


@pytest.fixture(scope="session")
def triangle():
    return instance_from_dict(triangle_doc())


@pytest.fixture(scope="session")
def path3():
    return instance_from_dict(path3_doc())


@pytest.fixture(scope="session")
def gated():
    return gated_instance()


@pytest.fixture(scope="session")
def cycle3():
    return instance_from_dict(cycle3_doc())


@pytest.fixture(scope="session")
def twin():
    return instance_from_dict(twin_doc())


def edgevec(inst, mapping):
    return EdgeVector.from_mapping(inst.space, mapping)


# -- random corpora ----------------------------------------------------------


def box_size(doc):
    n = 1
    for e in doc["edges"]:
        n *= e["cap"] + 1
    return n


def random_bipartite_doc(rng, max_side=4, max_cap=3, box_limit=80_000):
    """A random labeled bipartite instance with an enumerable box.

    Three construction styles are mixed.  Purely random preference orders
    almost always admit a single stable vector, so most of the corpus uses
    cyclically shifted orders on a complete block (each side starts its
    list one step further around), which is the classic source of long
    stable chains and weighted rotations; a slice of vertex-disjoint block
    pairs adds incomparable rotations and therefore several routes per
    instance.  All styles get light random perturbation: dropped edges,
    occasional order swaps, varied quotas.
    """
    while True:
        style = rng.random()
        if style < 0.35:
            doc = _random_orders_doc(rng, max_side, max_cap)
        elif style < 0.75:
            doc = _cyclic_orders_doc(rng, max_side, max_cap)
        else:
            doc = _block_pair_doc(rng, max_cap)
        if doc is not None and box_size(doc) <= box_limit:
            return doc


def _random_orders_doc(rng, max_side, max_cap):
    nw = rng.randint(1, max_side)
    nf = rng.randint(1, max_side)
    ws = ["w{}".format(i) for i in range(1, nw + 1)]
    fs = ["f{}".format(i) for i in range(1, nf + 1)]
    edges = []
    for w, f in itertools.product(ws, fs):
        if rng.random() < 0.7:
            edges.append((w + f, w, f, rng.randint(1, max_cap)))
    if not edges:
        return None
    caps = {e: cap for e, _, _, cap in edges}
    quotas, orders = {}, {}
    for v in ws + fs:
        star = [e for e, u, w, _ in edges if v in (u, w)]
        rng.shuffle(star)
        orders[v] = star
        hi = sum(caps[e] for e in star)
        # A quota well below the star total keeps the vertex selective.
        quotas[v] = min(hi, rng.randint(1, max(1, hi // 2)))
    return quota_doc(edges, quotas, orders, parts=(ws, fs))


def _cyclic_orders_doc(rng, max_side, max_cap):
    n = rng.randint(2, max_side)
    cap = rng.randint(1, max_cap)
    ws = ["w{}".format(i) for i in range(1, n + 1)]
    fs = ["f{}".format(i) for i in range(1, n + 1)]
    kept = {}
    for i, j in itertools.product(range(n), range(n)):
        if rng.random() < 0.97:
            kept[(i, j)] = (ws[i] + fs[j], ws[i], fs[j], cap)
    if len(kept) < 2:
        return None
    edges = [kept[key] for key in sorted(kept)]
    quotas, orders = {}, {}
    for i, w in enumerate(ws):
        ranked = sorted(
            (j for k, j in kept if k == i), key=lambda j: (j - i) % n
        )
        orders[w] = [kept[(i, j)][0] for j in ranked]
        quotas[w] = cap if rng.random() < 0.95 else 2 * cap
    for j, f in enumerate(fs):
        ranked = sorted(
            (i for i, k in kept if k == j), key=lambda i: (i - j - 1) % n
        )
        orders[f] = [kept[(i, j)][0] for i in ranked]
        quotas[f] = cap if rng.random() < 0.95 else 2 * cap
    for v in ws + fs:
        if len(orders[v]) >= 2 and rng.random() < 0.15:
            k = rng.randrange(len(orders[v]) - 1)
            orders[v][k], orders[v][k + 1] = orders[v][k + 1], orders[v][k]
    return quota_doc(edges, quotas, orders, parts=(ws, fs))


def _block_pair_doc(rng, max_cap):
    """Two vertex-disjoint crossed blocks sharing one instance.

    Each block contributes its own rotation chain, and the chains are
    incomparable, so the lattice is a product and the full routes
    multiply.  Block sizes and caps are kept small enough to enumerate.
    """
    edges, quotas, orders = [], {}, {}
    all_ws, all_fs = [], []
    for tag in ("p", "q"):
        n = rng.randint(2, 3) if tag == "p" else 2
        cap = rng.randint(1, max_cap if n == 2 else 1)
        ws = ["{}w{}".format(tag, i) for i in range(1, n + 1)]
        fs = ["{}f{}".format(tag, i) for i in range(1, n + 1)]
        for i, j in itertools.product(range(n), range(n)):
            edges.append((ws[i] + fs[j], ws[i], fs[j], cap))
        for i, w in enumerate(ws):
            ranked = sorted(range(n), key=lambda j: (j - i) % n)
            orders[w] = [w + fs[j] for j in ranked]
            quotas[w] = cap
        for j, f in enumerate(fs):
            ranked = sorted(range(n), key=lambda i: (i - j - 1) % n)
            orders[f] = [ws[i] + f for i in ranked]
            quotas[f] = cap
        all_ws.extend(ws)
        all_fs.extend(fs)
    return quota_doc(edges, quotas, orders, parts=(all_ws, all_fs))


def random_general_doc(rng, max_n=6, max_cap=2, tight=False, double_box_limit=600_000):
    """A random unlabeled instance whose symmetrized box stays enumerable.

    With ``tight`` the caps and quotas are all 1, which is where unsolvable
    instances live; otherwise caps go up to ``max_cap`` and quotas vary.
    Both kinds are mixed with oriented rings, odd ones being the canonical
    unsolvable shape and even ones carrying a genuine rotation.
    """
    while True:
        if rng.random() < 0.4:
            doc = _ring_doc(rng, max_n, 1 if tight else max_cap)
        else:
            doc = _random_graph_doc(rng, max_n, max_cap, tight)
        if doc is not None and box_size(doc) ** 2 <= double_box_limit:
            return doc


def _random_graph_doc(rng, max_n, max_cap, tight):
    n = rng.randint(3, max_n)
    names = ["v{}".format(i) for i in range(1, n + 1)]
    edges = []
    for u, w in itertools.combinations(names, 2):
        if rng.random() < 0.55:
            cap = 1 if tight else rng.randint(1, max_cap)
            edges.append((u + w, u, w, cap))
    if len(edges) < 2:
        return None
    caps = {e: cap for e, _, _, cap in edges}
    quotas, orders = {}, {}
    for v in names:
        star = [e for e, u, w, _ in edges if v in (u, w)]
        rng.shuffle(star)
        orders[v] = star
        hi = sum(caps[e] for e in star)
        if not star:
            quotas[v] = 0
        elif tight:
            quotas[v] = 1
        else:
            quotas[v] = rng.randint(1, max(1, hi // 2))
    return quota_doc(edges, quotas, orders)


def _ring_doc(rng, max_n, max_cap):
    """A cycle where everyone prefers the next edge around, plus chords."""
    n = rng.randint(3, max_n)
    cap = rng.randint(1, max_cap)
    names = ["v{}".format(i) for i in range(1, n + 1)]
    ring = []
    for i in range(n):
        u, w = names[i], names[(i + 1) % n]
        ring.append(("r{}".format(i + 1), u, w, cap))
    edges = list(ring)
    quotas = {v: cap for v in names}
    orders = {}
    for i, v in enumerate(names):
        ahead = ring[i][0]
        behind = ring[(i - 1) % n][0]
        orders[v] = [ahead, behind]
    if n >= 4 and rng.random() < 0.4:
        i = rng.randrange(n)
        j = (i + 2) % n
        u, w = sorted((names[i], names[j]))
        chord = ("c" + u + w, u, w, 1)
        edges.append(chord)
        for v in (u, w):
            orders[v].insert(rng.randint(0, 2), chord[0])
            if rng.random() < 0.5:
                quotas[v] += 1
    return quota_doc(edges, quotas, orders)


@pytest.fixture(scope="session")
def bipartite_corpus():
    rng = random.Random(20260816)
    return [instance_from_dict(random_bipartite_doc(rng)) for _ in range(200)]


@pytest.fixture(scope="session")
def general_corpus():
    rng = random.Random(911)
    docs = [random_general_doc(rng, tight=(i % 2 == 0)) for i in range(100)]
    return [instance_from_dict(doc) for doc in docs]


@pytest.fixture(scope="session")
def bipartite_artifacts(bipartite_corpus):
    """Each corpus instance with its stable set and per-vector rotations.

    Enumerating two hundred boxes and probing every stable vector costs a
    dozen seconds, so the result is computed once and shared by the tests
    that sweep the corpus.
    """
    arts = []
    for inst in bipartite_corpus:
        stable = enumerate_stable(inst)
        rotations = [(x, find_rotations(inst, x)) for x in stable]
        arts.append((inst, stable, rotations))
    return arts


@pytest.fixture(scope="session")
def doubled_artifacts(general_corpus):
    """Each general instance symmetrized, with the double's order and stables.

    Building the rotation order of every double dominates the cost of the
    mirror-law tests, so it too is computed once per session.
    """
    arts = []
    for inst in general_corpus:
        si = symmetrize(inst)
        order = rotation_order(si.graph)
        dbl_stable = enumerate_stable(si.graph)
        arts.append((inst, si, order, dbl_stable))
    return arts


# -- independent oracles -----------------------------------------------------


def oracle_stable_set(inst):
    """Stability check from first principles: plain loops, choose_vals only.

    Walks the whole capacity box, so callers keep instances tiny.  Returns
    the stable vectors as a set of raw value tuples in space order.
    """
    ids = inst.space.ids
    caps = [inst.caps[e] for e in ids]
    stars = {v: [ids.index(e) for e in inst.star_ids[v]] for v in inst.vertices}
    out = set()
    for vals in itertools.product(*[range(c + 1) for c in caps]):
        ok = True
        chosen = {}
        for v in inst.vertices:
            zv = tuple(vals[i] for i in stars[v])
            chosen[v] = zv
            if inst.choice[v].choose_vals(zv) != zv:
                ok = False
                break
        if not ok:
            continue
        blocked = False
        for pos, e in enumerate(ids):
            if vals[pos] >= caps[pos]:
                continue
            u, w = inst.ends(e)
            take = True
            for v in (u, w):
                zv = chosen[v]
                bump = tuple(
                    x + (1 if ids[i] == e else 0) for x, i in zip(zv, stars[v])
                )
                spot = inst.star_ids[v].index(e)
                if inst.choice[v].choose_vals(bump)[spot] <= zv[spot]:
                    take = False
                    break
            if take:
                blocked = True
                break
        if not blocked:
            out.add(vals)
    return out


def oracle_precedes_F(inst, x_vals, y_vals):
    """Firm-side preference via raw choice calls, avoiding library predicates."""
    if x_vals == y_vals:
        return False
    ids = inst.space.ids
    for v in inst.vertices:
        if inst.side(v) != "F":
            continue
        spots = [ids.index(e) for e in inst.star_ids[v]]
        join = tuple(max(x_vals[i], y_vals[i]) for i in spots)
        if inst.choice[v].choose_vals(join) != tuple(y_vals[i] for i in spots):
            return False
    return True


def oracle_full_routes(inst, stable_vals, cap=2000):
    """All principal routes, derived from the stable set alone.

    A cover step is a minimal strictly firm-better stable vector; its unit
    difference identifies the rotation, and the step weight is the longest
    run of stable vectors along that difference.  Routes are returned as
    tuples of (difference vector, weight) pairs.  Independent of the
    library's rotation discovery, weights, and poset code.
    """
    stable = sorted(stable_vals)
    above = {
        x: [y for y in stable if oracle_precedes_F(inst, x, y)] for x in stable
    }

    def covers(x):
        out = []
        for y in above[x]:
            if not any(z in above[x] and y in above[z] for z in stable if z not in (x, y)):
                out.append(y)
        return out

    bottom = [x for x in stable if not any(x in above[y] for y in stable if y != x)]
    top = [x for x in stable if not above[x]]
    assert len(bottom) == 1 and len(top) == 1
    routes = []

    def walk(x, acc):
        if x == top[0]:
            routes.append(tuple(acc))
            return
        assert len(routes) < cap
        for y in covers(x):
            chi = _sub(y, x)
            weight = 1
            here = y
            while True:
                nxt = tuple(a + b for a, b in zip(here, chi))
                if nxt in stable_vals and oracle_precedes_F(inst, here, nxt):
                    weight += 1
                    here = nxt
                else:
                    break
            walk(here, acc + [(chi, weight)])

    walk(bottom[0], [])
    return routes


def _sub(y, x):
    return tuple(a - b for a, b in zip(y, x))


def oracle_family(routes):
    """Multiset of (difference, total-ordinal, weight) triples per route."""
    out = []
    for route in routes:
        seen = {}
        fam = []
        for chi, weight in route:
            k = seen.get(chi, 0)
            seen[chi] = k + 1
            fam.append((chi, k, weight))
        out.append(sorted(fam))
    return out
