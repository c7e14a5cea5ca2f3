"""Core algebra: brackets, actions, structural checks, graded invariants."""

import pytest
from hypothesis import given, settings, strategies as st

from superbider import catalog
from superbider.core import (
    EVEN,
    ODD,
    AlgebraSpec,
    Element,
    FamilyInfo,
    GenId,
    adjoint_module,
    check_module_axiom,
    check_super_jacobi,
    check_super_skew,
    element,
    window,
)
from superbider.scalars import Q, rat


def gen(alg, fam, idx):
    return alg.gen(fam, rat(idx))


def one(alg, fam, idx):
    g = gen(alg, fam, idx)
    return Element({g: Q(1)}, alg.parity_of(g))


def test_bracket_virasoro_central_charge():
    alg = catalog.get_algebra(catalog.key("virasoro"))
    out = alg.bracket(one(alg, "L", 2), one(alg, "L", -2))
    assert out == element([(gen(alg, "L", 0), 4), (gen(alg, "C", 0), rat("1/2"))])


def test_bracket_with_central_element_is_zero():
    alg = catalog.get_algebra(catalog.key("virasoro"))
    assert alg.bracket(one(alg, "C", 0), one(alg, "L", 5)).is_zero


def test_bracket_svir_odd_pair():
    alg = catalog.get_algebra(catalog.key("svir-ramond"))
    out = alg.bracket(one(alg, "G", 1), one(alg, "G", -1))
    assert out == element([(gen(alg, "L", 0), 2), (gen(alg, "C", 0), rat("1/4"))])


def test_act_density_module():
    vir = catalog.key("virasoro")
    mod = catalog.get_module(catalog.key("density-F", b=-1), vir)
    alg = mod.algebra
    out = mod.act(one(alg, "L", 1), Element({mod.gen("v", 0): Q(1)}, EVEN))
    assert out == element([(mod.gen("v", 1), 1)])
    assert mod.act(one(alg, "C", 0), Element({mod.gen("v", 7): Q(1)}, EVEN)).is_zero


def test_act_super_density_module():
    svir = catalog.key("svir-ramond")
    mod = catalog.get_module(catalog.key("density-Fsuper", b=0), svir)
    alg = mod.algebra
    out = mod.act(one(alg, "G", 1), Element({mod.gen("J", -1): Q(1)}, ODD))
    assert out == element([(mod.gen("I", 0), 2)])


def test_unknown_family_and_off_lattice_errors():
    alg = catalog.get_algebra(catalog.key("sw22"))
    with pytest.raises(ValueError):
        alg.gen("Z", 0)
    with pytest.raises(ValueError):
        alg.gen("G", 1)  # G lives on Z+1/2
    with pytest.raises(ValueError):
        alg.gen("C1", 1)  # central families carry index 0
    with pytest.raises(ValueError):
        alg.bracket(Element({GenId("L", 1): Q(1)}, EVEN), one(alg, "L", 0))


def test_zero_element_parity_indifferent():
    assert Element({}, EVEN) == Element({}, ODD)
    assert element([]) == Element({}, ODD)


def test_jacobi_passes_on_catalog_sample():
    alg = catalog.get_algebra(catalog.key("virasoro"))
    assert check_super_jacobi(alg, window(6, 0, 1)).passed
    sw = catalog.get_algebra(catalog.key("sw22"))
    assert check_super_jacobi(sw, window(4, 0, 1)).passed
    assert check_super_skew(sw, window(4, 0, 1)).passed


def _corrupted_virasoro():
    def bad_rule(m2, n2):
        return [(GenId("L", m2 + n2), Q(m2 - n2, 2) + 1)]

    fams = {
        "L": FamilyInfo("L", 0, EVEN),
        "C": FamilyInfo("C", 0, EVEN, central=True),
    }
    return AlgebraSpec("bad-vir", {}, fams, {("L", "L"): bad_rule})


def test_jacobi_catches_corrupted_bracket():
    alg = _corrupted_virasoro()
    report = check_super_jacobi(alg, window(2, 0, 1))
    assert not report.passed
    assert report.witness is not None
    # the documented counterexample triple indeed fails
    x, y, z = one(alg, "L", 1), one(alg, "L", 0), one(alg, "L", -1)
    j = (
        alg.bracket(x, alg.bracket(y, z))
        .plus(alg.bracket(y, alg.bracket(z, x)))
        .plus(alg.bracket(z, alg.bracket(x, y)))
    )
    assert not j.is_zero


def _sign_flipped_svir():
    base = catalog.get_algebra(catalog.key("svir-ramond"))

    def bad_gg(r2, s2):
        sign = 1 if r2 <= s2 else -1
        res = [(GenId("L", r2 + s2), Q(2 * sign))]
        if r2 + s2 == 0:
            res.append((GenId("C", 0), sign * (Q(r2, 2) ** 2 - Q(1, 4)) / 3))
        return res

    rules = dict(base.rules)
    rules[("G", "G")] = bad_gg
    return AlgebraSpec("bad-svir", {}, dict(base.families), rules)


def test_skew_catches_sign_flip():
    report = check_super_skew(_sign_flipped_svir(), window(4, 0, 1))
    assert not report.passed
    assert report.witness is not None


def test_skew_passes_n2_ramond_mixed_odd_pairs():
    alg = catalog.get_algebra(catalog.key("n2-ramond"))
    assert check_super_skew(alg, window(4, 0, 1)).passed


def test_module_axiom_all_catalog_pairs():
    w = window(4, 0, 1)
    for b in ("-1", "0", "1/2", "2"):
        m1 = catalog.get_module(catalog.key("density-F", b=b), catalog.key("virasoro"))
        assert check_module_axiom(m1, w).passed
        m2 = catalog.get_module(
            catalog.key("density-Fsuper", b=b), catalog.key("svir-ramond")
        )
        assert check_module_axiom(m2, w).passed


# -- property tests ----------------------------------------------------------

_ALGS = [
    catalog.get_algebra(catalog.key(n, b="2/3") if n == "w0b" else catalog.key(n))
    for n in catalog.ALGEBRA_NAMES
]


@st.composite
def algebra_and_elements(draw, nelems=2):
    alg = draw(st.sampled_from(_ALGS))
    elems = []
    for _ in range(nelems):
        fams = [f for f, info in alg.families.items() if not info.central]
        fam = draw(st.sampled_from(sorted(fams)))
        parity = alg.families[fam].parity
        same = [f for f in fams if alg.families[f].parity == parity]
        terms = {}
        for _ in range(draw(st.integers(0, 3))):
            f = draw(st.sampled_from(sorted(same)))
            idx = draw(st.sampled_from(alg.indices(f, 8)))
            c = Q(draw(st.integers(-6, 6)), draw(st.integers(1, 4)))
            if c:
                terms[GenId(f, idx)] = terms.get(GenId(f, idx), Q(0)) + c
        terms = {g: c for g, c in terms.items() if c}
        elems.append(Element(terms, parity))
    return alg, elems


@given(algebra_and_elements(nelems=3), st.integers(-5, 5), st.integers(-5, 5))
@settings(max_examples=60, deadline=None)
def test_bracket_bilinear(data, a, c):
    alg, (x, y, z) = data
    if x.parity != y.parity:
        return
    lhs = alg.bracket(x.scaled(a).plus(y.scaled(c)), z)
    rhs = alg.bracket(x, z).scaled(a).plus(alg.bracket(y, z).scaled(c))
    assert lhs == rhs


@given(algebra_and_elements(nelems=2))
@settings(max_examples=60, deadline=None)
def test_bracket_degree_and_parity_additive(data):
    alg, (x, y) = data
    for gx in x.terms:
        for gy in y.terms:
            out = alg.bracket_pairs(gx, gy)
            for g, _ in out:
                assert g.index == gx.index + gy.index
                assert alg.parity_of(g) == (alg.parity_of(gx) + alg.parity_of(gy)) % 2


@given(algebra_and_elements(nelems=2))
@settings(max_examples=40, deadline=None)
def test_adjoint_action_matches_bracket(data):
    alg, (x, y) = data
    adj = adjoint_module(alg)
    assert adj.act(x, y) == alg.bracket(x, y)
