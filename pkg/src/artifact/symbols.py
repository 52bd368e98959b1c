"""Complex functions on G and on G x G."""
import json
from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup, construct_group


class SymbolError(ValueError):
    pass


def _freeze(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def same_group(*objs):
    G = objs[0].group
    for o in objs[1:]:
        if o.group != G:
            raise SymbolError("objects live on different groups")
    return G


@dataclass(frozen=True, eq=False)
class GroupSymbol:
    """phi: G -> C, values indexed by element."""
    group: FiniteGroup
    values: np.ndarray

    def __post_init__(self):
        v = _freeze(self.values).reshape(-1)
        if v.shape[0] != self.group.order:
            raise SymbolError(f"symbol has {v.shape[0]} values for a group of order {self.group.order}")
        object.__setattr__(self, "values", v)

    def __getitem__(self, s):
        return self.values[s]

    def __len__(self):
        return self.values.shape[0]

    @property
    def at_identity(self):
        return self.values[self.group.identity]

    def check(self):
        """s -> phi(s^-1)"""
        return GroupSymbol(self.group, self.values[self.group.inv])

    def conj(self):
        return GroupSymbol(self.group, self.values.conj())

    def circ(self):
        """s -> conj(phi(s^-1))"""
        return GroupSymbol(self.group, self.values[self.group.inv].conj())

    def inner(self, s):
        """t -> phi(s^-1 t s)"""
        G = self.group
        idx = [G.conj(s, t) for t in range(G.order)]
        return GroupSymbol(G, self.values[idx])

    def is_self_circ(self, tol=1e-10):
        return bool(np.abs(self.values - self.circ().values).max() <= tol)

    def gram(self):
        """[phi(s^-1 t)]_{s,t}"""
        G = self.group
        return self.values[G.mult[G.inv]]

    def __add__(self, other):
        same_group(self, other)
        return GroupSymbol(self.group, self.values + other.values)

    def __sub__(self, other):
        same_group(self, other)
        return GroupSymbol(self.group, self.values - other.values)

    def __mul__(self, other):
        if isinstance(other, GroupSymbol):
            same_group(self, other)
            return GroupSymbol(self.group, self.values * other.values)
        return GroupSymbol(self.group, self.values * other)

    __rmul__ = __mul__

    def __neg__(self):
        return GroupSymbol(self.group, -self.values)

    def allclose(self, other, tol=1e-10):
        return self.group == other.group and bool(np.abs(self.values - other.values).max() <= tol)

    def to_dict(self):
        return {"group": self.group.name if "parsed" not in self.group.name else self.group.to_dict(),
                "values": [[float(z.real), float(z.imag)] for z in self.values]}


@dataclass(frozen=True, eq=False)
class BiSymbol:
    """psi: G x G -> C, row index s, column index t."""
    group: FiniteGroup
    values: np.ndarray

    def __post_init__(self):
        v = _freeze(self.values)
        n = self.group.order
        if v.shape != (n, n):
            raise SymbolError(f"bi-symbol must have shape ({n}, {n}), got {v.shape}")
        object.__setattr__(self, "values", v)

    def __getitem__(self, st):
        return self.values[st]

    def is_herz_schur(self, tol=0.0):
        """psi(sr, tr) == psi(s, t) for all s, t, r."""
        G = self.group
        m = G.mult
        shifted = self.values[m[:, None, :], m[None, :, :]]      # [s, t, r] -> psi(sr, tr)
        return bool(np.abs(shifted - self.values[:, :, None]).max() <= tol)

    def __add__(self, other):
        same_group(self, other)
        return BiSymbol(self.group, self.values + other.values)

    def __sub__(self, other):
        same_group(self, other)
        return BiSymbol(self.group, self.values - other.values)

    def __mul__(self, c):
        return BiSymbol(self.group, self.values * c)

    __rmul__ = __mul__

    def allclose(self, other, tol=1e-10):
        return self.group == other.group and bool(np.abs(self.values - other.values).max() <= tol)

    def to_list(self):
        return [[[float(z.real), float(z.imag)] for z in row] for row in self.values]


def _parse_complex(v):
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise SymbolError(f"complex value must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, str):
        return complex(v.replace(" ", "").replace("i", "j"))
    return complex(v)


def parse_values(values):
    try:
        return np.array([_parse_complex(v) for v in values], dtype=complex)
    except (TypeError, ValueError) as err:
        raise SymbolError(f"bad symbol values: {err}") from None


def symbol_from_json(obj, group=None):
    """Accepts ``{"group": ..., "values": [...]}`` or a bare list of values."""
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as err:
            raise SymbolError(f"malformed symbol JSON: {err}") from None
    if isinstance(obj, dict):
        if group is None:
            if "group" not in obj:
                raise SymbolError("symbol file needs a group")
            group = construct_group(obj["group"])
        values = obj.get("values")
    else:
        values = obj
    if group is None:
        raise SymbolError("no group given for the symbol")
    if not isinstance(values, (list, tuple)):
        raise SymbolError("symbol values must be a list")
    return GroupSymbol(group, parse_values(values))


def bisymbol_from_json(obj, group):
    if isinstance(obj, str):
        obj = json.loads(obj)
    rows = [parse_values(r) for r in obj]
    return BiSymbol(group, np.array(rows))
