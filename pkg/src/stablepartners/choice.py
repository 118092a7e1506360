"""Choice functions on vertex stars, preference tests, and axiom checkers.

A choice function maps every integer vector in the box of its star (all
``z`` with ``0 <= z <= caps``) to a selected subvector ``C(z) <= z``.  The
solvers in this package assume two axioms:

* substitutability: lowering the menu never resurrects rejected units,
  formally ``z >= z'`` implies ``min(C(z), z') <= C(z')``;
* size monotonicity: larger menus never select fewer units in total.

Both are checked, never assumed silently: :func:`check_axiom` enumerates
comparable pairs within a configurable work budget and returns a report
with a concrete witness when an axiom fails.
"""

import numpy as np

from .core import BudgetError, EdgeVector, InputError, InternalError

DEFAULT_AXIOM_BUDGET = 10**6


def box_array(caps):
    """All integer vectors of the box ``0 <= z <= caps`` in lexicographic order.

    Returns an ``(n, k)`` int16 array whose rows are sorted with the first
    coordinate most significant.
    """
    caps = tuple(int(c) for c in caps)
    n = 1
    for c in caps:
        n *= c + 1
    out = np.empty((n, len(caps)), dtype=np.int16)
    rep = n
    for j, c in enumerate(caps):
        rep //= c + 1
        cycle = np.repeat(np.arange(c + 1, dtype=np.int16), rep)
        out[:, j] = np.tile(cycle, n // (rep * (c + 1)))
    return out


class ChoiceFunction:
    """Base class: a memoized map from box vectors to selected subvectors.

    Subclasses implement ``_apply(vals) -> tuple``.  Results are cached per
    distinct input and checked to satisfy ``0 <= C(z) <= z`` once on first
    computation.
    """

    kind = "abstract"

    def __init__(self, vertex, space, caps):
        self.vertex = vertex
        self.space = space
        self.caps = tuple(int(c) for c in caps)
        if len(self.caps) != len(space):
            raise InputError("capacity list does not match the star")
        if any(c < 0 for c in self.caps):
            raise InputError("capacities must be nonnegative")
        self._memo = {}

    def box_size(self):
        n = 1
        for c in self.caps:
            n *= c + 1
        return n

    def in_box(self, vals):
        return all(0 <= v <= c for v, c in zip(vals, self.caps))

    def choose_vals(self, vals):
        """Selection on a raw value tuple.  Trusted input, memoized."""
        out = self._memo.get(vals)
        if out is None:
            out = tuple(self._apply(vals))
            if len(out) != len(vals) or any(
                not 0 <= o <= v for o, v in zip(out, vals)
            ):
                raise InternalError(
                    "choice at {!r} left the menu: C{!r} = {!r}".format(
                        self.vertex, vals, out
                    )
                )
            self._memo[vals] = out
        return out

    def choose(self, z):
        """Selection on an :class:`EdgeVector` over this star."""
        if not isinstance(z, EdgeVector) or z.space != self.space:
            raise InputError("vector does not live on this star")
        if not self.in_box(z.vals):
            raise InputError("vector is outside the box of {!r}".format(self.vertex))
        return EdgeVector(self.space, self.choose_vals(z.vals))

    def batch_vals(self, arr):
        """Row-wise selection on an ``(n, k)`` array.  Generic fallback."""
        arr = np.asarray(arr)
        out = np.empty_like(arr)
        for i, row in enumerate(arr.tolist()):
            out[i] = self.choose_vals(tuple(row))
        return out

    def _apply(self, vals):
        raise NotImplementedError

    def to_dict(self):
        raise NotImplementedError


class LinearOrderQuotaCF(ChoiceFunction):
    """Greedy selection along a strict preference order, capped by a quota.

    If the menu fits within the quota it is taken whole.  Otherwise units
    are taken greedily in preference order; the first edge that would
    overflow receives the remaining headroom and everything after it is
    rejected.
    """

    kind = "linear_order_quota"

    def __init__(self, vertex, space, caps, quota, order):
        super().__init__(vertex, space, caps)
        self.quota = int(quota)
        if self.quota < 0:
            raise InputError("quota must be nonnegative")
        self.order = tuple(order)
        if sorted(self.order) != sorted(space.ids):
            raise InputError(
                "order at {!r} must list the star exactly once".format(vertex)
            )
        self._perm = tuple(space.index[e] for e in self.order)

    def _apply(self, vals):
        if sum(vals) <= self.quota:
            return vals
        out = [0] * len(vals)
        run = 0
        for pos in self._perm:
            v = vals[pos]
            if run + v <= self.quota:
                out[pos] = v
                run += v
            else:
                out[pos] = self.quota - run
                break
        return out

    def batch_vals(self, arr):
        arr = np.asarray(arr)
        n, k = arr.shape
        if n == 0 or k == 0:
            return arr.copy()
        perm = np.asarray(self._perm)
        zp = arr[:, perm]
        prefix = np.cumsum(zp, axis=1, dtype=np.int64)
        q = self.quota
        out = np.where(prefix <= q, zp, 0).astype(arr.dtype)
        over = np.nonzero(prefix[:, -1] > q)[0]
        if len(over):
            jstar = (prefix[over] <= q).sum(axis=1)
            run = np.where(jstar > 0, prefix[over, np.maximum(jstar - 1, 0)], 0)
            out[over, jstar] = q - run
        res = np.empty_like(out)
        res[:, perm] = out
        return res

    def to_dict(self):
        return {
            "type": self.kind,
            "quota": self.quota,
            "order": list(self.order),
        }


class TableCF(ChoiceFunction):
    """A choice function given extensionally as a full table over the box.

    Useful for adversarial fixtures: the table is only required to stay
    within the menu, so it can deliberately break substitutability.
    """

    kind = "table"

    def __init__(self, vertex, space, caps, entries):
        super().__init__(vertex, space, caps)
        table = {}
        for z_vals, c_vals in entries:
            z_vals = tuple(int(v) for v in z_vals)
            c_vals = tuple(int(v) for v in c_vals)
            if not self.in_box(z_vals):
                raise InputError("table key outside the box at {!r}".format(vertex))
            if z_vals in table:
                raise InputError("duplicate table key at {!r}".format(vertex))
            if len(c_vals) != len(z_vals) or any(
                not 0 <= c <= z for c, z in zip(c_vals, z_vals)
            ):
                raise InputError("table value leaves the menu at {!r}".format(vertex))
            table[z_vals] = c_vals
        if len(table) != self.box_size():
            raise InputError(
                "table at {!r} must cover the whole box ({} of {} entries)".format(
                    vertex, len(table), self.box_size()
                )
            )
        self._table = table

    def _apply(self, vals):
        return self._table[vals]

    def to_dict(self):
        ids = self.space.ids
        entries = [
            {
                "z": {e: v for e, v in zip(ids, z)},
                "c": {e: v for e, v in zip(ids, c)},
            }
            for z, c in sorted(self._table.items())
        ]
        return {"type": self.kind, "entries": entries}


class RenamedCF(ChoiceFunction):
    """A choice function acting like ``base`` under a renaming of edge ids.

    Used when a vertex is copied into a derived graph: the copy's star has
    fresh edge ids but must select exactly as the original.
    """

    kind = "renamed"

    def __init__(self, vertex, space, caps, base, id_map):
        super().__init__(vertex, space, caps)
        if set(id_map) != set(space.ids) or set(id_map.values()) != set(
            base.space.ids
        ):
            raise InputError("renaming must be a bijection between the stars")
        self.base = base
        self.id_map = dict(id_map)
        self._pos = tuple(base.space.index[id_map[e]] for e in space.ids)
        for j, p in enumerate(self._pos):
            if self.caps[j] != base.caps[p]:
                raise InputError("renaming changes a capacity")

    def _apply(self, vals):
        base_vals = [0] * len(vals)
        for j, p in enumerate(self._pos):
            base_vals[p] = vals[j]
        res = self.base.choose_vals(tuple(base_vals))
        return tuple(res[p] for p in self._pos)

    def batch_vals(self, arr):
        arr = np.asarray(arr)
        if arr.shape[0] == 0 or arr.shape[1] == 0:
            return arr.copy()
        pos = np.asarray(self._pos)
        base_arr = np.empty_like(arr)
        base_arr[:, pos] = arr
        return self.base.batch_vals(base_arr)[:, pos]

    def to_dict(self):
        doc = self.base.to_dict()
        back = {v: k for k, v in self.id_map.items()}
        if doc["type"] == "linear_order_quota":
            doc["order"] = [back[e] for e in doc["order"]]
        elif doc["type"] == "table":
            base_ids = self.base.space.ids

            def rename(mapping):
                return {back[e]: mapping[e] for e in base_ids}

            doc["entries"] = [
                {"z": rename(entry["z"]), "c": rename(entry["c"])}
                for entry in doc["entries"]
            ]
        else:
            raise InternalError("cannot serialize renamed {!r}".format(doc["type"]))
        return doc


def choice_from_dict(vertex, space, caps, spec):
    """Build a choice function for one vertex from its document form."""
    if not isinstance(spec, dict) or "type" not in spec:
        raise InputError("choice spec at {!r} needs a type".format(vertex))
    kind = spec["type"]
    if kind == "linear_order_quota":
        if set(spec) != {"type", "quota", "order"}:
            raise InputError(
                "linear_order_quota at {!r} needs quota and order".format(vertex)
            )
        return LinearOrderQuotaCF(vertex, space, caps, spec["quota"], spec["order"])
    if kind == "table":
        if set(spec) != {"type", "entries"}:
            raise InputError("table at {!r} needs entries".format(vertex))
        entries = []
        for entry in spec["entries"]:
            if not isinstance(entry, dict) or set(entry) != {"z", "c"}:
                raise InputError("table entries at {!r} need z and c".format(vertex))
            z = EdgeVector.from_mapping(space, entry["z"])
            c = EdgeVector.from_mapping(space, entry["c"])
            entries.append((z.vals, c.vals))
        return TableCF(vertex, space, caps, entries)
    raise InputError("unknown choice type {!r} at {!r}".format(kind, vertex))


# -- preference predicates --------------------------------------------------


def is_acceptable(cf, z):
    """True iff the vertex keeps ``z`` unchanged."""
    return cf.choose(z) == z


def prefers(cf, z, other):
    """Strict preference: the vertex picks ``z`` out of the combined menu.

    Both vectors must be acceptable.  Equal vectors are never strictly
    preferred.
    """
    for w in (z, other):
        if not is_acceptable(cf, w):
            raise InputError(
                "preference is only defined between acceptable vectors"
            )
    if z == other:
        return False
    return cf.choose(z.join(other)) == z


def is_interesting(cf, z, e, cap):
    """True iff the vertex would take one more unit of ``e`` on top of ``z``.

    ``cap`` bounds the edge; at capacity the answer is False without
    consulting the choice function.
    """
    if e not in cf.space:
        raise InputError("edge {!r} is not in this star".format(e))
    if not is_acceptable(cf, z):
        raise InputError("interest is only defined at acceptable vectors")
    if z[e] >= cap:
        return False
    return cf.choose(z.add_unit(e))[e] > z[e]


# -- axiom checking ----------------------------------------------------------


class AxiomReport:
    """Outcome of one axiom check: verdict, work done, and a witness if any.

    The witness is a dict of named :class:`EdgeVector` and edge-id fields
    sufficient to re-evaluate the violated condition from scratch; see
    :meth:`reevaluate`.
    """

    def __init__(self, axiom, holds, witness, pairs_checked):
        self.axiom = axiom
        self.holds = holds
        self.witness = witness
        self.pairs_checked = pairs_checked

    def __repr__(self):
        state = "holds" if self.holds else "fails"
        return "AxiomReport({} {}, {} pairs)".format(
            self.axiom, state, self.pairs_checked
        )

    def reevaluate(self, cf):
        """Re-run the violated condition on the stored witness.

        Returns True iff the witness still exhibits a violation.  Reports
        with ``holds=True`` have nothing to re-evaluate and return False.
        """
        if self.holds or self.witness is None:
            return False
        w = self.witness
        if self.axiom == "SUB":
            z, zp = w["z"], w["zp"]
            return not cf.choose(z).meet(zp).le(cf.choose(zp))
        if self.axiom == "MON":
            z, zp = w["z"], w["zp"]
            return cf.choose(z).total() < cf.choose(zp).total()
        if self.axiom == "CON":
            z, zp = w["z"], w["zp"]
            if not (zp.le(z) and cf.choose(z).le(zp)):
                return False
            return cf.choose(zp) != cf.choose(z)
        if self.axiom == "GL":
            a = w["edge"]
            zs = (w["z1"], w["z2"], w["z3"])
            cs = w["rejected"]
            for z, c in zip(zs, cs):
                got = z.add_unit(a).minus(cf.choose(z.add_unit(a)))
                if got != EdgeVector.zero(z.space).add_unit(c):
                    return False
            if not (prefers(cf, zs[1], zs[0]) and prefers(cf, zs[2], zs[1])):
                return False
            return cs[0] == cs[2] and cs[1] != cs[0]
        raise InternalError("unknown axiom {!r}".format(self.axiom))

    def to_dict(self):
        doc = {
            "axiom": self.axiom,
            "holds": self.holds,
            "pairs_checked": self.pairs_checked,
        }
        if self.witness is not None:
            enc = {}
            for key, val in self.witness.items():
                if isinstance(val, EdgeVector):
                    enc[key] = val.to_mapping()
                elif isinstance(val, tuple):
                    enc[key] = list(val)
                else:
                    enc[key] = val
            doc["witness"] = enc
        return doc


def _comparable_pairs(caps):
    n = 1
    for c in caps:
        n *= (c + 1) * (c + 2) // 2
    return n


def check_axiom(cf, axiom, budget=DEFAULT_AXIOM_BUDGET):
    """Exhaustively check one axiom of ``cf`` within a pair budget.

    ``axiom`` is one of SUB, MON, CON, GL (case-insensitive).  The budget
    counts comparable ordered pairs for the first three and preference
    comparisons for GL; exceeding it raises :class:`BudgetError` rather
    than returning a partial verdict.
    """
    axiom = str(axiom).upper()
    if axiom in ("SUB", "MON", "CON"):
        return _check_pairwise(cf, axiom, budget)
    if axiom == "GL":
        return _check_gl(cf, budget)
    raise InputError("unknown axiom {!r}".format(axiom))


def _check_pairwise(cf, axiom, budget):
    est = _comparable_pairs(cf.caps)
    if est > budget:
        raise BudgetError(
            "axiom check needs {} pairs, budget is {}".format(est, budget)
        )
    box = box_array(cf.caps)
    chosen = cf.batch_vals(box)
    sizes = chosen.sum(axis=1, dtype=np.int64)
    space = cf.space
    checked = 0
    for i in range(len(box)):
        below = np.nonzero((box <= box[i]).all(axis=1))[0]
        checked += len(below)
        if axiom == "SUB":
            bad = (np.minimum(chosen[i], box[below]) > chosen[below]).any(axis=1)
        elif axiom == "MON":
            bad = sizes[below] > sizes[i]
        else:  # CON
            applies = (box[below] >= chosen[i]).all(axis=1)
            bad = applies & (chosen[below] != chosen[i]).any(axis=1)
        hits = np.nonzero(bad)[0]
        if len(hits):
            j = below[hits[0]]
            witness = {
                "z": EdgeVector(space, box[i]),
                "zp": EdgeVector(space, box[j]),
            }
            return AxiomReport(axiom, False, witness, checked)
    return AxiomReport(axiom, True, None, checked)


def _check_gl(cf, budget):
    """Check that repeated single-unit rejections are consistent.

    Along any strictly increasing chain of acceptable vectors, if adding a
    unit of edge ``a`` bumps exactly one unit at the chain's two ends and
    the bumped edge is the same, the middle must bump that edge too.
    """
    box = box_array(cf.caps)
    chosen = cf.batch_vals(box)
    acceptable = box[(chosen == box).all(axis=1)]
    space = cf.space
    checked = 0
    for a_pos, a_id in enumerate(space.ids):
        room = acceptable[acceptable[:, a_pos] < cf.caps[a_pos]]
        if len(room) == 0:
            continue
        bumped = room.copy()
        bumped[:, a_pos] += 1
        deficit = bumped - cf.batch_vals(bumped)
        single = deficit.sum(axis=1, dtype=np.int64) == 1
        rows = room[single]
        cpos = deficit[single].argmax(axis=1)
        m = len(rows)
        if m < 2 or len(set(cpos.tolist())) < 2:
            continue
        checked += m * m
        if checked > budget:
            raise BudgetError(
                "axiom check passed {} comparisons, budget is {}".format(
                    checked, budget
                )
            )
        joins = np.maximum(rows[:, None, :], rows[None, :, :]).reshape(-1, len(space.ids))
        cj = cf.batch_vals(joins).reshape(m, m, -1)
        prec = (cj == rows[None, :, :]).all(axis=2)
        prec &= (rows[:, None, :] != rows[None, :, :]).any(axis=2)
        for cval in sorted(set(cpos.tolist())):
            ingrp = np.nonzero(cpos == cval)[0]
            outgrp = np.nonzero(cpos != cval)[0]
            first_hop = prec[np.ix_(ingrp, outgrp)]
            second_hop = prec[np.ix_(outgrp, ingrp)]
            mid_ok = first_hop.any(axis=0) & second_hop.any(axis=1)
            hits = np.nonzero(mid_ok)[0]
            if len(hits) == 0:
                continue
            j = outgrp[hits[0]]
            i = ingrp[np.nonzero(first_hop[:, hits[0]])[0][0]]
            l = ingrp[np.nonzero(second_hop[hits[0]])[0][0]]
            witness = {
                "edge": a_id,
                "z1": EdgeVector(space, rows[i]),
                "z2": EdgeVector(space, rows[j]),
                "z3": EdgeVector(space, rows[l]),
                "rejected": (
                    space.ids[cpos[i]],
                    space.ids[cpos[j]],
                    space.ids[cpos[l]],
                ),
            }
            return AxiomReport("GL", False, witness, checked)
    return AxiomReport("GL", True, None, checked)
