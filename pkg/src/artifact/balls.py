"""Word-metric balls in a few finitely generated infinite groups.

Families and their normal forms:

``heisenberg-Z``
    (a, b, c) stands for x^a y^b z^c with z = x^-1 y^-1 x y central.  The product
    is (a, b, c)(a', b', c') = (a + a', b + b', c + c' - a'b).  Generators x, y.
``lamplighter-Z2``
    (lamps, p): a sorted tuple of lit lamp positions and the lamplighter position.
    (f, p)(f', p') = (f xor (f' + p), p + p').  Generators: move (), 1) and
    toggle ((0,), 0).
``free-abelian-Zd``
    integer d-tuples, standard basis generators.  ``free-abelian-Z2`` etc.

Balls are built breadth-first by right multiplication with the generators and
their inverses, so the recorded word length is exact.
"""
import re
from math import comb
from collections import deque
from dataclasses import dataclass, field

MAX_BALL_SIZE = 10 ** 6


class BallError(ValueError):
    pass


class Heisenberg:
    group_id = "heisenberg-Z"
    identity = (0, 0, 0)
    generator_names = {"x": (1, 0, 0), "y": (0, 1, 0)}
    max_radius = 36

    def mul(self, g, h):
        a, b, c = g
        a2, b2, c2 = h
        return (a + a2, b + b2, c + c2 - a2 * b)

    def inv(self, g):
        a, b, c = g
        return (-a, -b, -c - a * b)

    def generators(self):
        return list(self.generator_names.values())


class Lamplighter:
    group_id = "lamplighter-Z2"
    identity = ((), 0)
    generator_names = {"t": ((), 1), "a": ((0,), 0)}
    max_radius = 21

    def mul(self, g, h):
        f, p = g
        f2, p2 = h
        lamps = set(f) ^ {x + p for x in f2}
        return (tuple(sorted(lamps)), p + p2)

    def inv(self, g):
        f, p = g
        return (tuple(sorted(x - p for x in f)), -p)

    def generators(self):
        return list(self.generator_names.values())


class FreeAbelian:
    def __init__(self, d):
        if d < 1:
            raise BallError("rank must be positive")
        self.d = d
        self.group_id = f"free-abelian-Z{d}"
        self.identity = (0,) * d
        names = "xyzwuv"
        self.generator_names = {(names[i] if i < len(names) else f"e{i}"): self._e(i) for i in range(d)}
        r = 0
        while l1_ball_size(d, r + 1) <= MAX_BALL_SIZE:
            r += 1
        self.max_radius = r

    def _e(self, i):
        return tuple(int(k == i) for k in range(self.d))

    def mul(self, g, h):
        return tuple(x + y for x, y in zip(g, h))

    def inv(self, g):
        return tuple(-x for x in g)

    def generators(self):
        return [self._e(i) for i in range(self.d)]


def l1_ball_size(d, r):
    """Number of points of Z^d at l1 distance at most r from 0."""
    return sum(2 ** k * comb(d, k) * comb(r, k) for k in range(min(d, r) + 1))


def family(group_id):
    if group_id in ("heisenberg-Z", "heisenberg"):
        return Heisenberg()
    if group_id in ("lamplighter-Z2", "lamplighter"):
        return Lamplighter()
    m = re.fullmatch(r"(?:free-abelian-)?Z(\d+)", group_id)
    if m:
        return FreeAbelian(int(m.group(1)))
    raise BallError(f"unknown family {group_id!r}")


@dataclass(frozen=True, eq=False)
class FgBall:
    """The ball of given radius around the identity, with word lengths."""
    group_id: str
    radius: int
    elements: tuple
    metric: tuple
    fam: object = field(repr=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_index", {g: k for k, g in enumerate(self.elements)})

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in self._index

    def index(self, g):
        return self._index[g]

    def length(self, g):
        return self.metric[self._index[g]]

    def sub_ball(self, r):
        return frozenset(g for g, m in zip(self.elements, self.metric) if m <= r)

    @property
    def identity(self):
        return self.fam.identity

    def mul(self, g, h):
        return self.fam.mul(g, h)

    def inv(self, g):
        return self.fam.inv(g)

    def to_dict(self):
        return {"group_id": self.group_id, "radius": self.radius,
                "elements": [list(_plain(g)) for g in self.elements], "metric": list(self.metric)}


def _plain(g):
    return [list(x) if isinstance(x, tuple) else x for x in g]


def enumerate_ball(group_id, radius):
    fam = family(group_id)
    if radius < 0:
        raise BallError("radius must be non-negative")
    if radius > fam.max_radius:
        raise BallError(f"radius {radius} exceeds the cap {fam.max_radius} for {fam.group_id}")
    steps = fam.generators() + [fam.inv(g) for g in fam.generators()]
    seen = {fam.identity: 0}
    order = [fam.identity]
    queue = deque([fam.identity])
    while queue:
        g = queue.popleft()
        d = seen[g]
        if d == radius:
            continue
        for s in steps:
            h = fam.mul(g, s)
            if h not in seen:
                seen[h] = d + 1
                order.append(h)
                queue.append(h)
    return FgBall(fam.group_id, radius, tuple(order), tuple(seen[g] for g in order), fam)
