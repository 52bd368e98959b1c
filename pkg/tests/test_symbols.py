import numpy as np
import pytest

from artifact.groups import construct_group
from artifact.symbols import BiSymbol, GroupSymbol, SymbolError, bisymbol_from_json, symbol_from_json


def test_parse_forms():
    G = construct_group("Z3")
    a = symbol_from_json("[1, 2.5, -1]", G)
    assert np.array_equal(a.values, [1, 2.5, -1])
    b = symbol_from_json('[[1, 0], "2+3i", [0, -1]]', G)
    assert np.array_equal(b.values, [1, 2 + 3j, -1j])
    c = symbol_from_json({"group": "cyclic:3", "values": [0, 1, 0]})
    assert c.group == G


@pytest.mark.parametrize("bad", ["[1, 2]", "{", "[[1, 2, 3], 0, 0]", '"abc"', '["x", 1, 2]'])
def test_parse_errors(bad):
    with pytest.raises(SymbolError):
        symbol_from_json(bad, construct_group("Z3"))


def test_circ_and_check():
    G = construct_group("S3")
    rng = np.random.default_rng(0)
    phi = GroupSymbol(G, rng.standard_normal(6) + 1j * rng.standard_normal(6))
    assert phi.circ().circ().allclose(phi, 0)
    assert phi.check().check().allclose(phi, 0)
    assert np.abs(phi.circ().values - phi.check().conj().values).max() == 0
    assert ((phi + phi.circ()) * 0.5).is_self_circ()
    # Gram of phi° is the adjoint of Gram of phi
    assert np.abs(phi.circ().gram() - phi.gram().conj().T).max() == 0


def test_values_frozen():
    phi = GroupSymbol(construct_group("Z2"), [1.0, 2.0])
    with pytest.raises(ValueError):
        phi.values[0] = 3


def test_bisymbol_parse():
    G = construct_group("Z2")
    psi = bisymbol_from_json("[[1, 0], [0, 1]]", G)
    assert isinstance(psi, BiSymbol)
    assert psi.is_herz_schur()
    with pytest.raises(SymbolError):
        BiSymbol(G, np.ones((3, 3)))
