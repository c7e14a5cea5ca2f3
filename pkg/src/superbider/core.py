"""Graded basis elements, structure-constant specs and structural checks.

Conventions used throughout the package:

* Generator indices live on the integer lattice or on the half-integer
  lattice and are stored *doubled*, as plain ``int``: the generator L_3 has
  stored index 6, G_{1/2} has stored index 1.  This keeps index arithmetic,
  hashing and comparison at machine-int speed while staying exact.
* A parity is 0 (even) or 1 (odd); the parity of a bracket or an action is
  the sum mod 2 of the input parities.
* A bracket/action rule is a function of the two doubled input indices
  returning the structure constants of the result.  Rules are listed for the
  family pairs that act nontrivially; every unlisted pair is zero, and a
  reversed pair is derived from the listed one through super
  skew-symmetry.  The Jacobi checker validates that convention instead of
  assuming it.
* Central generator families carry index 0 only and even parity; Kronecker
  delta terms (central charges) are produced inside the rules, so every
  output index of a rule equals the sum of the input indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Mapping, NamedTuple, Optional, Tuple

from .scalars import Q, ZERO, rat

EVEN = 0
ODD = 1

LATTICE_INT = 0  # doubled indices are even
LATTICE_HALF = 1  # doubled indices are odd

_LATTICE_NAMES = {LATTICE_INT: "Z", LATTICE_HALF: "Z+1/2"}
_PARITY_NAMES = {EVEN: "even", ODD: "odd"}


def twice(x) -> int:
    """Doubled-integer encoding of an index bound or index value.

    Accepts ints, rationals and strings such as ``"11/2"``; the value must be
    an integer or a half-integer.
    """
    if isinstance(x, int) and not isinstance(x, bool):
        return 2 * x
    q = rat(x)
    d = 2 * q
    if d.denominator != 1:
        raise ValueError(f"{x!r} is not an integer or half-integer")
    return int(d)


def index_value(i2: int) -> "Q":
    """Exact rational value of a doubled index."""
    return Q(i2, 2)


def index_str(i2: int) -> str:
    """Render a doubled index: 6 -> ``3``, -1 -> ``-1/2``."""
    if i2 % 2 == 0:
        return str(i2 // 2)
    return f"{i2}/2"


def lattice_name(lattice: int) -> str:
    return _LATTICE_NAMES[lattice]


def parity_name(parity: int) -> str:
    return _PARITY_NAMES[parity]


class GenId(NamedTuple):
    """A basis generator: family symbol plus doubled index."""

    family: str
    index: int

    def label(self) -> str:
        return f"{self.family}[{index_str(self.index)}]"


@dataclass(frozen=True)
class FamilyInfo:
    """Metadata of one generator family."""

    name: str
    lattice: int
    parity: int
    central: bool = False


# A rule maps doubled indices (i2, j2) of an input pair to the structure
# constants of the output, as (GenId, coefficient) pairs.
Rule = Callable[[int, int], Iterable[Tuple[GenId, "Q"]]]


@dataclass
class Element:
    """Sparse rational combination of generators with a stated parity.

    The zero element (empty term map) has indeterminate parity: equality is
    decided on the term map alone.
    """

    terms: Dict[GenId, "Q"]
    parity: int = EVEN

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):  # pragma: no cover - elements are not hashed
        raise TypeError("Element is not hashable")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, gen: GenId) -> "Q":
        return self.terms.get(gen, ZERO)

    def scaled(self, c) -> "Element":
        c = rat(c)
        if not c:
            return Element({}, self.parity)
        return Element({g: c * v for g, v in self.terms.items()}, self.parity)

    def plus(self, other: "Element") -> "Element":
        out = dict(self.terms)
        for g, v in other.terms.items():
            s = out.get(g, ZERO) + v
            if s:
                out[g] = s
            else:
                out.pop(g, None)
        parity = self.parity if self.terms else other.parity
        return Element(out, parity)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for g in sorted(self.terms):
            bits.append(f"{self.terms[g]}*{g.label()}")
        return " + ".join(bits)


def element(pairs: Iterable[Tuple[GenId, object]], parity: int = EVEN) -> Element:
    """Build an element, dropping zero coefficients."""
    terms: Dict[GenId, Q] = {}
    for g, c in pairs:
        c = rat(c)
        if not c:
            continue
        s = terms.get(g, ZERO) + c
        if s:
            terms[g] = s
        else:
            del terms[g]
    return Element(terms, parity)


def _sgn(e: int) -> int:
    return -1 if (e & 1) else 1


class _FamilyTable:
    """Shared family bookkeeping for algebra and module specs."""

    families: Mapping[str, FamilyInfo]

    def family(self, name: str) -> FamilyInfo:
        try:
            return self.families[name]
        except KeyError:
            raise ValueError(f"unknown family {name!r} in {self.name}") from None

    def check_gen(self, g: GenId) -> FamilyInfo:
        fam = self.family(g.family)
        if fam.central and g.index != 0:
            raise ValueError(f"central generator {g.label()} must have index 0")
        if g.index % 2 != fam.lattice:
            raise ValueError(
                f"index of {g.label()} is off the {lattice_name(fam.lattice)} lattice"
            )
        return fam

    def gen(self, family: str, index) -> GenId:
        g = GenId(family, twice(index))
        self.check_gen(g)
        return g

    def parity_of(self, g: GenId) -> int:
        return self.family(g.family).parity

    def indices(self, family: str, bound2: int) -> List[int]:
        """Doubled indices of ``family`` with absolute value <= bound2/2."""
        fam = self.family(family)
        if fam.central:
            return [0]
        start = -bound2 if (bound2 % 2 == fam.lattice) else -(bound2 - 1)
        return list(range(start, bound2 + 1, 2))

    def gens_within(self, bound2: int) -> List[GenId]:
        out = []
        for name in sorted(self.families):
            for i2 in self.indices(name, bound2):
                out.append(GenId(name, i2))
        return out

    def element_parity(self, x: Element) -> int:
        """Common parity of x's generators; raises on mixed parity."""
        if x.is_zero:
            return x.parity
        parities = {self.parity_of(g) for g in x.terms}
        if len(parities) != 1:
            raise ValueError("element mixes parities")
        return parities.pop()


@dataclass(eq=False)
class AlgebraSpec(_FamilyTable):
    """A Z-graded Lie superalgebra given by structure-constant rules."""

    name: str
    params: Mapping[str, "Q"]
    families: Mapping[str, FamilyInfo]
    rules: Mapping[Tuple[str, str], Rule]
    _cache: Dict[Tuple[str, int, str, int], Tuple[Tuple[GenId, "Q"], ...]] = field(
        default_factory=dict, repr=False
    )

    def bracket_pairs(self, x: GenId, y: GenId) -> Tuple[Tuple[GenId, "Q"], ...]:
        """[x, y] as structure-constant pairs (validated and cached)."""
        key = (x.family, x.index, y.family, y.index)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        fx = self.check_gen(x)
        fy = self.check_gen(y)
        rule = self.rules.get((x.family, y.family))
        if rule is not None:
            out = tuple((g, c) for g, c in rule(x.index, y.index) if c)
        else:
            rule = self.rules.get((y.family, x.family))
            if rule is not None:
                s = -_sgn(fx.parity & fy.parity)
                out = tuple((g, s * c) for g, c in rule(y.index, x.index) if c)
            else:
                out = ()
        self._cache[key] = out
        return out

    def bracket(self, x: Element, y: Element) -> Element:
        """Bilinear extension of the bracket rule; parity adds mod 2."""
        px = self.element_parity(x)
        py = self.element_parity(y)
        terms: Dict[GenId, Q] = {}
        for gx, cx in x.terms.items():
            for gy, cy in y.terms.items():
                c = cx * cy
                for g, v in self.bracket_pairs(gx, gy):
                    s = terms.get(g, ZERO) + c * v
                    if s:
                        terms[g] = s
                    else:
                        del terms[g]
        return Element(terms, (px + py) % 2)


@dataclass(eq=False)
class ModuleSpec(_FamilyTable):
    """A module over an AlgebraSpec, given by action rules.

    Central algebra generators act as zero; unlisted (algebra family, module
    family) pairs act as zero.
    """

    name: str
    params: Mapping[str, "Q"]
    algebra: AlgebraSpec
    families: Mapping[str, FamilyInfo]
    rules: Mapping[Tuple[str, str], Rule]
    _cache: Dict[Tuple[str, int, str, int], Tuple[Tuple[GenId, "Q"], ...]] = field(
        default_factory=dict, repr=False
    )

    def act_pairs(self, x: GenId, v: GenId) -> Tuple[Tuple[GenId, "Q"], ...]:
        """x . v as structure-constant pairs (validated and cached)."""
        key = (x.family, x.index, v.family, v.index)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        fx = self.algebra.check_gen(x)
        self.check_gen(v)
        if fx.central:
            out: Tuple[Tuple[GenId, Q], ...] = ()
        else:
            rule = self.rules.get((x.family, v.family))
            out = tuple((g, c) for g, c in rule(x.index, v.index) if c) if rule else ()
        self._cache[key] = out
        return out

    def act(self, x: Element, v: Element) -> Element:
        """Bilinear extension of the action; parity adds mod 2."""
        px = self.algebra.element_parity(x)
        pv = self.element_parity(v)
        terms: Dict[GenId, Q] = {}
        for gx, cx in x.terms.items():
            for gv, cv in v.terms.items():
                c = cx * cv
                for g, w in self.act_pairs(gx, gv):
                    s = terms.get(g, ZERO) + c * w
                    if s:
                        terms[g] = s
                    else:
                        del terms[g]
        return Element(terms, (px + pv) % 2)


def adjoint_module(alg: AlgebraSpec) -> ModuleSpec:
    """The algebra acting on itself through its own bracket."""

    class _BracketRules:
        def get(self, key, default=None):
            if key[0] in alg.families and key[1] in alg.families:
                fa, fb = key

                def rule(i2, j2, fa=fa, fb=fb):
                    return alg.bracket_pairs(GenId(fa, i2), GenId(fb, j2))

                return rule
            return default

    return ModuleSpec(
        name=f"adjoint({alg.name})",
        params=dict(alg.params),
        algebra=alg,
        families=alg.families,
        rules=_BracketRules(),
    )


def bracket(alg: AlgebraSpec, x: Element, y: Element) -> Element:
    return alg.bracket(x, y)


def act(mod: ModuleSpec, x: Element, v: Element) -> Element:
    return mod.act(x, v)


@dataclass(frozen=True)
class Window:
    """Finite truncation: generator bound N, shift bound K, interior N_int.

    All three are stored doubled.  The interior slice |m| <= N_int is where
    computed solution spaces are compared against closed-form families; the
    margin between N_int and N absorbs truncation artifacts at the window
    boundary.
    """

    n2: int
    k2: int
    nint2: int

    def __post_init__(self):
        if not (0 < self.nint2 <= self.n2):
            raise ValueError("window requires 0 < N_int <= N")
        if self.k2 < 0:
            raise ValueError("window requires K >= 0")

    @property
    def n_str(self) -> str:
        return index_str(self.n2)

    @property
    def k_str(self) -> str:
        return index_str(self.k2)

    @property
    def nint_str(self) -> str:
        return index_str(self.nint2)

    def grown(self, dn=2) -> "Window":
        """Same window with N enlarged (for stability checks)."""
        return Window(self.n2 + twice(dn), self.k2, self.nint2)


def window(N, K=2, N_int=2) -> Window:
    """Convenience constructor taking human-readable bounds."""
    return Window(twice(N), twice(K), twice(N_int))


@dataclass
class CheckReport:
    """Outcome of a structural check; failure carries a witness tuple."""

    check: str
    target: str
    passed: bool
    checked: int
    witness: Optional[Tuple[str, ...]] = None
    residual: Optional[str] = None

    def __str__(self) -> str:
        if self.passed:
            return f"{self.check}({self.target}): pass ({self.checked} instances)"
        w = ", ".join(self.witness or ())
        return f"{self.check}({self.target}): FAIL at ({w}); residual {self.residual}"


def _gen_element(table: _FamilyTable, g: GenId) -> Element:
    return Element({g: Q(1)}, table.parity_of(g))


def check_super_skew(alg: AlgebraSpec, window: Window) -> CheckReport:
    """[x,y] + (-1)^{|x||y|}[y,x] = 0 for all in-window generator pairs."""
    gens = alg.gens_within(window.n2)
    checked = 0
    for i, x in enumerate(gens):
        px = alg.parity_of(x)
        for y in gens[i:]:
            if abs(x.index + y.index) > window.n2:
                continue
            py = alg.parity_of(y)
            checked += 1
            lhs = element(alg.bracket_pairs(x, y))
            rhs = element(alg.bracket_pairs(y, x)).scaled(_sgn(px & py))
            res = lhs.plus(rhs)
            if not res.is_zero:
                return CheckReport(
                    "super-skew", alg.name, False, checked,
                    (x.label(), y.label()), str(res),
                )
    return CheckReport("super-skew", alg.name, True, checked)


def check_super_jacobi(alg: AlgebraSpec, window: Window) -> CheckReport:
    """Graded Jacobi identity on every in-window generator triple.

    Evaluates (-1)^{|x||z|}[x,[y,z]] + (-1)^{|y||x|}[y,[z,x]] +
    (-1)^{|z||y|}[z,[x,y]] for triples whose pairwise and total index sums
    stay inside the window bound.  Unordered triples suffice once
    check_super_skew has passed.
    """
    gens = alg.gens_within(window.n2)
    n2 = window.n2
    checked = 0
    for i, x in enumerate(gens):
        px = alg.parity_of(x)
        ex = _gen_element(alg, x)
        for j in range(i, len(gens)):
            y = gens[j]
            py = alg.parity_of(y)
            ey = _gen_element(alg, y)
            if abs(x.index + y.index) > n2:
                continue
            for z in gens[j:]:
                pz = alg.parity_of(z)
                if (
                    abs(y.index + z.index) > n2
                    or abs(x.index + z.index) > n2
                    or abs(x.index + y.index + z.index) > n2
                ):
                    continue
                checked += 1
                ez = _gen_element(alg, z)
                total = (
                    alg.bracket(ex, alg.bracket(ey, ez)).scaled(_sgn(px & pz))
                    .plus(alg.bracket(ey, alg.bracket(ez, ex)).scaled(_sgn(py & px)))
                    .plus(alg.bracket(ez, alg.bracket(ex, ey)).scaled(_sgn(pz & py)))
                )
                if not total.is_zero:
                    return CheckReport(
                        "super-jacobi", alg.name, False, checked,
                        (x.label(), y.label(), z.label()), str(total),
                    )
    return CheckReport("super-jacobi", alg.name, True, checked)


def check_module_axiom(mod: ModuleSpec, window: Window) -> CheckReport:
    """[x,y].v = x.(y.v) - (-1)^{|x||y|} y.(x.v) on the window."""
    alg = mod.algebra
    agens = alg.gens_within(window.n2)
    vgens = mod.gens_within(window.n2)
    checked = 0
    for x in agens:
        px = alg.parity_of(x)
        ex = _gen_element(alg, x)
        for y in agens:
            if abs(x.index + y.index) > window.n2:
                continue
            py = alg.parity_of(y)
            ey = _gen_element(alg, y)
            bxy = alg.bracket(ex, ey)
            for v in vgens:
                checked += 1
                ev = _gen_element(mod, v)
                lhs = mod.act(bxy, ev)
                rhs = mod.act(ex, mod.act(ey, ev)).plus(
                    mod.act(ey, mod.act(ex, ev)).scaled(-_sgn(px & py))
                )
                res = lhs.plus(rhs.scaled(-1))
                if not res.is_zero:
                    return CheckReport(
                        "module-axiom", mod.name, False, checked,
                        (x.label(), y.label(), v.label()), str(res),
                    )
    return CheckReport("module-axiom", mod.name, True, checked)
