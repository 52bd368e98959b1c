"""Finite groups stored as Cayley tables.

Element 0 is always the identity. Each family fixes its own element order:

- ``cyclic:n``      k is the residue k mod n.
- ``dihedral:n``    order 2n, index j*n + k is r^k s^j (r a rotation, s a reflection).
- ``symmetric:n``   permutations of range(n) in lexicographic order, n <= 4; the
                    product st is the composition x -> s(t(x)).
- ``quaternion``    order 8, indices 0..7 are 1, -1, i, -i, j, -j, k, -k.
- ``A*B``           direct product; (a, b) has index a*|B| + b.

Short aliases Zn, Dn, Sn and Q8 are accepted as well.
"""
import itertools
import json
from dataclasses import dataclass, field

import numpy as np

MAX_ORDER = 64


class GroupError(ValueError):
    pass


def _frozen(a):
    a = np.array(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its multiplication table.

    ``mult[s, t]`` is the index of st, ``inv[s]`` the index of s^-1.
    """
    mult: np.ndarray
    name: str = "group"
    labels: tuple = field(default=())
    identity: int = 0

    def __post_init__(self):
        mult = _frozen(self.mult)
        object.__setattr__(self, "mult", mult)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(k) for k in range(mult.shape[0])))
        _validate_table(mult, self.identity)
        inv = np.argmax(mult == self.identity, axis=1)
        object.__setattr__(self, "inv", _frozen(inv))

    @property
    def order(self):
        return self.mult.shape[0]

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and np.array_equal(self.mult, other.mult)

    def __hash__(self):
        return hash(self.mult.tobytes())

    def mul(self, s, t):
        return int(self.mult[s, t])

    def inverse(self, s):
        return int(self.inv[s])

    def conj(self, s, t):
        """s^-1 t s"""
        return int(self.mult[self.inv[s], self.mult[t, s]])

    def is_abelian(self):
        return bool(np.array_equal(self.mult, self.mult.T))

    def element_order(self, s):
        k, x = 1, s
        while x != self.identity:
            x = self.mult[x, s]
            k += 1
        return k

    def check_index(self, s):
        if not (0 <= int(s) < self.order):
            raise GroupError(f"element index {s} out of range for order {self.order}")
        return int(s)

    def to_dict(self):
        return {"order": self.order, "identity": self.identity,
                "mult": self.mult.tolist(), "labels": list(self.labels)}


def _validate_table(mult, identity):
    if mult.ndim != 2 or mult.shape[0] != mult.shape[1] or mult.shape[0] == 0:
        raise GroupError("multiplication table must be a non-empty square array")
    n = mult.shape[0]
    if n > MAX_ORDER:
        raise GroupError(f"order {n} exceeds the cap {MAX_ORDER}")
    if mult.min() < 0 or mult.max() >= n:
        raise GroupError("table entries must be element indices")
    rng = np.arange(n)
    if not (np.all(np.sort(mult, axis=1) == rng) and np.all(np.sort(mult, axis=0) == rng[:, None])):
        raise GroupError("table is not a Latin square")
    if not (0 <= identity < n):
        raise GroupError("missing identity")
    if not (np.array_equal(mult[identity], rng) and np.array_equal(mult[:, identity], rng)):
        raise GroupError(f"element {identity} is not a two-sided identity")
    # (st)u == s(tu) for every triple
    if not np.array_equal(mult[mult], mult[:, mult]):
        raise GroupError("table is not associative")


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------

def cyclic(n):
    if n < 1:
        raise GroupError("cyclic order must be positive")
    k = np.arange(n)
    return FiniteGroup((k[:, None] + k[None, :]) % n, name=f"cyclic:{n}",
                       labels=tuple(str(i) for i in range(n)))


def dihedral(n):
    if n < 1:
        raise GroupError("dihedral parameter must be positive")
    order = 2 * n
    mult = np.zeros((order, order), dtype=np.int64)
    for x in range(order):
        i, a = divmod(x, n)
        for y in range(order):
            j, b = divmod(y, n)
            mult[x, y] = ((i + j) % 2) * n + (a + (-1) ** i * b) % n
    labels = tuple(("r%d" % k) + ("s" if j else "") for j in range(2) for k in range(n))
    return FiniteGroup(mult, name=f"dihedral:{n}", labels=labels)


def symmetric(n):
    if not 1 <= n <= 4:
        raise GroupError("symmetric groups are supported for 1 <= n <= 4")
    perms = list(itertools.permutations(range(n)))
    index = {p: k for k, p in enumerate(perms)}
    mult = np.array([[index[tuple(s[t[x]] for x in range(n))] for t in perms] for s in perms])
    return FiniteGroup(mult, name=f"symmetric:{n}",
                       labels=tuple("".join(map(str, p)) for p in perms))


def quaternion():
    # unit quaternions as (sign, axis) with axis 0=1, 1=i, 2=j, 3=k
    table = {(1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
             (1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
             (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2)}
    elems = [(sg, ax) for ax in range(4) for sg in (1, -1)]
    index = {e: k for k, e in enumerate(elems)}

    def prod(p, q):
        (s1, a1), (s2, a2) = p, q
        if a1 == 0:
            return (s1 * s2, a2)
        if a2 == 0:
            return (s1 * s2, a1)
        s3, a3 = table[(a1, a2)]
        return (s1 * s2 * s3, a3)

    mult = np.array([[index[prod(p, q)] for q in elems] for p in elems])
    labels = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")
    return FiniteGroup(mult, name="quaternion", labels=labels)


def direct_product(G, H):
    if G.order * H.order > MAX_ORDER:
        raise GroupError(f"order {G.order * H.order} exceeds the cap {MAX_ORDER}")
    m, n = G.order, H.order
    mult = G.mult[:, None, :, None] * n + H.mult[None, :, None, :]
    labels = tuple(f"({a},{b})" for a in G.labels for b in H.labels)
    return FiniteGroup(mult.reshape(m * n, m * n), name=f"{G.name}*{H.name}", labels=labels)


_ALIASES = {"Z": "cyclic", "D": "dihedral", "S": "symmetric"}


def construct_group(spec):
    """Build a group from a descriptor such as ``"cyclic:4"``, ``"D4"`` or ``"Z2*Z3"``.

    A ``dict`` descriptor ``{"family": ..., "n": ...}`` is accepted too.
    """
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, dict):
        if "mult" in spec:
            return group_from_dict(spec)
        fam = spec.get("family")
        spec = fam if spec.get("n") is None else f"{fam}:{spec['n']}"
    if not isinstance(spec, str) or not spec.strip():
        raise GroupError(f"unsupported group descriptor {spec!r}")
    spec = spec.strip()
    if "*" in spec:
        parts = [construct_group(p) for p in spec.split("*")]
        out = parts[0]
        for p in parts[1:]:
            out = direct_product(out, p)
        return out
    if spec.lower() in ("quaternion", "quaternion:8", "q8"):
        return quaternion()
    if ":" in spec:
        fam, _, arg = spec.partition(":")
    elif spec[:1] in _ALIASES and spec[1:].isdigit():
        fam, arg = _ALIASES[spec[0]], spec[1:]
    else:
        raise GroupError(f"unsupported group family {spec!r}")
    try:
        n = int(arg)
    except ValueError:
        raise GroupError(f"bad parameter in {spec!r}") from None
    builders = {"cyclic": (cyclic, n), "dihedral": (dihedral, 2 * n), "symmetric": (symmetric, 1)}
    if fam not in builders:
        raise GroupError(f"unsupported group family {fam!r}")
    builder, order = builders[fam]
    if order > MAX_ORDER or n > MAX_ORDER:
        raise GroupError(f"order of {spec!r} exceeds the cap {MAX_ORDER}")
    return builder(n)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def group_from_dict(d, name="parsed"):
    if not isinstance(d, dict) or "mult" not in d:
        raise GroupError("group object needs a 'mult' table")
    try:
        mult = np.array(d["mult"], dtype=np.int64)
    except (TypeError, ValueError):
        raise GroupError("table entries must be integers") from None
    if mult.ndim != 2:
        raise GroupError("table must be two-dimensional")
    if "order" in d and d["order"] != mult.shape[0]:
        raise GroupError("declared order does not match the table")
    n = mult.shape[0]
    labels = tuple(str(x) for x in d.get("labels") or range(n))
    if len(labels) != n:
        raise GroupError("label count does not match the order")
    if "identity" in d:
        e = int(d["identity"])
    else:
        rows = [s for s in range(n) if np.array_equal(mult[s], np.arange(n))]
        if not rows:
            raise GroupError("missing identity")
        e = rows[0]
    if e != 0:
        # relabel so that the identity becomes index 0
        perm = np.arange(n)
        perm[[0, e]] = perm[[e, 0]]
        _validate_table(mult, e)
        mult = perm[mult[np.ix_(perm, perm)]]
        labels = tuple(labels[k] for k in perm)
    return FiniteGroup(mult, name=d.get("name", name), labels=labels)


def parse_group(text):
    """Parse the JSON group format ``{"order", "identity", "mult", "labels"}``."""
    try:
        d = json.loads(text)
    except json.JSONDecodeError as err:
        raise GroupError(f"malformed JSON: {err}") from None
    return group_from_dict(d)


def dump_group(G):
    return json.dumps(G.to_dict())


# ---------------------------------------------------------------------------
# subsets
# ---------------------------------------------------------------------------

def centralizer(G, g):
    g = G.check_index(g)
    return frozenset(int(s) for s in range(G.order) if G.mult[s, g] == G.mult[g, s])


def center(G):
    return frozenset(s for s in range(G.order) if np.array_equal(G.mult[s], G.mult[:, s]))


def generated_subgroup(G, gens):
    elems = {G.identity}
    frontier = [G.identity]
    gens = [G.check_index(g) for g in gens]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = int(G.mult[x, g])
                if y not in elems:
                    elems.add(y)
                    new.append(y)
        frontier = new
    return frozenset(elems)


def subgroups(G):
    """All subgroups, found by closing joins of cyclic subgroups."""
    found = {generated_subgroup(G, [s]) for s in range(G.order)}
    frontier = set(found)
    cyclic_ones = list(found)
    while frontier:
        new = set()
        for H in frontier:
            for C in cyclic_ones:
                if not C <= H:
                    K = generated_subgroup(G, sorted(H | C))
                    if K not in found:
                        new.add(K)
        found |= new
        frontier = new
    return sorted(found, key=lambda H: (len(H), sorted(H)))


def is_subgroup(G, H):
    H = set(H)
    return G.identity in H and all(G.mult[a, G.inv[b]] in H for a in H for b in H)
