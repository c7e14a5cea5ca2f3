"""Catalog entries: structure constants, listing, and cross-checks."""

import pytest

from superbider import catalog
from superbider.core import (
    EVEN,
    AlgebraSpec,
    Element,
    GenId,
    adjoint_module,
    check_super_jacobi,
    element,
    window,
)
from superbider.scalars import Q, rat


def one(spec, fam, idx):
    g = spec.gen(fam, rat(idx))
    return Element({g: Q(1)}, spec.parity_of(g))


def test_virasoro_bracket():
    alg = catalog.get_algebra(catalog.key("virasoro"))
    assert alg.bracket(one(alg, "L", 1), one(alg, "L", -1)) == element(
        [(alg.gen("L", 0), 2)]
    )


def test_hv_super_bracket():
    alg = catalog.get_algebra(catalog.key("hv-super"))
    out = alg.bracket(one(alg, "L", 2), one(alg, "G", "1/2"))
    assert out == element([(alg.gen("G", "5/2"), rat("-1/2"))])


def test_n2_ramond_h_pairing():
    alg = catalog.get_algebra(catalog.key("n2-ramond"))
    out = alg.bracket(one(alg, "H", 1), one(alg, "H", -1))
    assert out == element([(alg.gen("C", 0), rat("1/3"))])


def test_density_f_action():
    mod = catalog.get_module(catalog.key("density-F", b=0), catalog.key("virasoro"))
    out = mod.act(one(mod.algebra, "L", 2), one(mod, "v", 3))
    assert out == element([(mod.gen("v", 5), -3)])


def test_density_fsuper_action():
    mod = catalog.get_module(
        catalog.key("density-Fsuper", b=1), catalog.key("svir-ramond")
    )
    out = mod.act(one(mod.algebra, "G", 1), one(mod, "I", 2))
    assert out == element([(mod.gen("J", 3), -2)])
    assert mod.act(one(mod.algebra, "C", 0), one(mod, "I", 5)).is_zero


def test_adjoint_module_examples():
    vir = catalog.get_algebra(catalog.key("virasoro"))
    adj = adjoint_module(vir)
    assert adj.act(one(vir, "L", 1), one(adj, "L", -1)) == element(
        [(vir.gen("L", 0), 2)]
    )
    s = catalog.get_algebra(catalog.key("hv-super"))
    adj_s = adjoint_module(s)
    assert adj_s.act(one(s, "G", "1/2"), one(adj_s, "G", "1/2")) == element(
        [(s.gen("H", 1), 2)]
    )
    sw = catalog.get_algebra(catalog.key("sw22"))
    adj_sw = adjoint_module(sw)
    assert adj_sw.act(one(sw, "L", 0), one(adj_sw, "Q", "3/2")) == element(
        [(sw.gen("Q", "3/2"), rat("-3/2"))]
    )


def test_list_catalog():
    entries = catalog.list_catalog()
    names = [e.name for e in entries]
    assert names == list(catalog.ALGEBRA_NAMES) + list(catalog.MODULE_NAMES)
    sw = next(e for e in entries if e.name == "sw22")
    odd = {(f, lat) for f, lat, par, c in sw.families if par == "odd"}
    assert odd == {("G", "Z+1/2"), ("Q", "Z+1/2")}
    n2 = next(e for e in entries if e.name == "n2-ramond")
    odd = {(f, lat) for f, lat, par, c in n2.families if par == "odd"}
    assert odd == {("G+", "Z"), ("G-", "Z")}


def test_key_validation():
    with pytest.raises(ValueError):
        catalog.key("nope")
    with pytest.raises(ValueError):
        catalog.key("w0b")  # missing b
    with pytest.raises(ValueError):
        catalog.key("virasoro", b=1)  # extra parameter
    with pytest.raises(ValueError):
        catalog.key("nsvir")  # reserved, not implemented
    with pytest.raises(ValueError):
        catalog.key("w0b", b=0.5)  # floats rejected
    with pytest.raises(ValueError):
        catalog.get_module(catalog.key("density-F", b=0), catalog.key("svir-ramond"))


def test_w0b_matches_semidirect_construction():
    """W(0,b) restricted to L x I must equal the density-module action, the
    L x L block must equal Vir, and I x I must vanish."""
    vir_key = catalog.key("virasoro")
    vir = catalog.get_algebra(vir_key)
    for b in ("-1", "0", "2/3", "1"):
        w0b = catalog.get_algebra(catalog.key("w0b", b=b))
        fb = catalog.get_module(catalog.key("density-F", b=b), vir_key)
        for m2 in w0b.indices("L", 8):
            for n2 in w0b.indices("L", 8):
                lhs = w0b.bracket_pairs(GenId("L", m2), GenId("I", n2))
                rhs = fb.act_pairs(GenId("L", m2), GenId("v", n2))
                assert [(g.index, c) for g, c in lhs] == [
                    (g.index, c) for g, c in rhs
                ]
                vv = vir.bracket_pairs(GenId("L", m2), GenId("L", n2))
                ww = w0b.bracket_pairs(GenId("L", m2), GenId("L", n2))
                assert [(g, c) for g, c in vv] == [(g, c) for g, c in ww]
                assert w0b.bracket_pairs(GenId("I", m2), GenId("I", n2)) == ()


def _even_part(alg: AlgebraSpec) -> AlgebraSpec:
    fams = {f: info for f, info in alg.families.items() if info.parity == EVEN}
    rules = {
        pair: rule for pair, rule in alg.rules.items()
        if pair[0] in fams and pair[1] in fams
    }
    return AlgebraSpec(f"{alg.name}-even", dict(alg.params), fams, rules)


@pytest.mark.parametrize("name", catalog.ALGEBRA_NAMES)
def test_even_part_is_lie_algebra(name):
    key = catalog.key(name, b="1/2") if name == "w0b" else catalog.key(name)
    even = _even_part(catalog.get_algebra(key))
    assert check_super_jacobi(even, window(5, 0, 1)).passed


def test_density_minus_one_admits_centroid_map_pointwise():
    """gamma(L_m) = v_m, gamma(C) = 0 satisfies gamma([x,y]) = x.gamma(y) at
    b = -1, checked generator by generator."""
    vir_key = catalog.key("virasoro")
    mod = catalog.get_module(catalog.key("density-F", b=-1), vir_key)
    alg = mod.algebra

    def gamma(x: Element) -> Element:
        return element(
            [(GenId("v", g.index), c) for g, c in x.terms.items() if g.family == "L"]
        )

    gens = alg.gens_within(12)
    for gx in gens:
        for gy in gens:
            ex = Element({gx: Q(1)}, alg.parity_of(gx))
            ey = Element({gy: Q(1)}, alg.parity_of(gy))
            assert gamma(alg.bracket(ex, ey)) == mod.act(ex, gamma(ey))
