"""Built-in algebras and modules, keyed by name and rational parameters.

Algebras: virasoro, w0b, svir-ramond, sw22, bms3-n1, n2-ramond, hv-super.
Modules: density-F (over virasoro), density-Fsuper (over svir-ramond);
the adjoint module of any catalog algebra is available through
:func:`superbider.core.adjoint_module`.

All structure constants are exact rationals.  The central-charge terms carry
the Kronecker delta on the index sum, so every rule is degree additive.
The name ``nsvir`` is reserved for the Neveu-Schwarz variant of the super
Virasoro algebra, which is not implemented.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .core import (
    EVEN,
    LATTICE_HALF,
    LATTICE_INT,
    ODD,
    AlgebraSpec,
    FamilyInfo,
    GenId,
    ModuleSpec,
    lattice_name,
    parity_name,
)
from .scalars import Q, rat

ALGEBRA_NAMES = (
    "virasoro",
    "w0b",
    "svir-ramond",
    "sw22",
    "bms3-n1",
    "n2-ramond",
    "hv-super",
)
MODULE_NAMES = ("density-F", "density-Fsuper")
RESERVED_NAMES = ("nsvir",)

_NEEDS_B = {"w0b", "density-F", "density-Fsuper"}


@dataclass(frozen=True)
class CatalogKey:
    """Name plus parameter assignment identifying one catalog entry."""

    name: str
    params: Tuple[Tuple[str, "Q"], ...] = ()

    def param(self, symbol: str) -> "Q":
        for k, v in self.params:
            if k == symbol:
                return v
        raise ValueError(f"{self.name} is missing parameter {symbol!r}")

    def label(self) -> str:
        if not self.params:
            return self.name
        ps = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.name}({ps})"


def key(name: str, **params) -> CatalogKey:
    """Build a validated catalog key; parameters are coerced to rationals."""
    if name in RESERVED_NAMES:
        raise ValueError(f"{name!r} is a reserved catalog name (not implemented)")
    if name not in ALGEBRA_NAMES and name not in MODULE_NAMES:
        raise ValueError(f"unknown catalog name {name!r}")
    wanted = {"b"} if name in _NEEDS_B else set()
    got = set(params)
    if got != wanted:
        raise ValueError(
            f"{name} takes parameters {sorted(wanted)}, got {sorted(got)}"
        )
    return CatalogKey(name, tuple((k, rat(v)) for k, v in sorted(params.items())))


def _half(i2: int) -> "Q":
    return Q(i2, 2)


def _vir_cocycle(m2: int) -> "Q":
    # (m^3 - m)/12 at m = m2/2
    m = _half(m2)
    return (m**3 - m) / 12


def _gg_cocycle(r2: int) -> "Q":
    # (r^2 - 1/4)/3 at r = r2/2
    r = _half(r2)
    return (r**2 - Q(1, 4)) / 3


def _witt_rule(out: str, central: Optional[str]):
    """(m - n) out_{m+n} plus the (m^3-m)/12 central term."""

    def rule(m2, n2):
        res = [(GenId(out, m2 + n2), _half(m2 - n2))]
        if central is not None and m2 + n2 == 0:
            res.append((GenId(central, 0), _vir_cocycle(m2)))
        return res

    return rule


def _half_weight_rule(out: str):
    """(m/2 - r) out_{m+r}."""

    def rule(m2, r2):
        return [(GenId(out, m2 + r2), _half(m2) / 2 - _half(r2))]

    return rule


def _pairing_rule(out: str, central: Optional[str]):
    """2 out_{r+s} plus the (r^2 - 1/4)/3 central term."""

    def rule(r2, s2):
        res = [(GenId(out, r2 + s2), Q(2))]
        if central is not None and r2 + s2 == 0:
            res.append((GenId(central, 0), _gg_cocycle(r2)))
        return res

    return rule


def _weight_rule(out: str, weight: "Q"):
    """-(n + weight*m) out_{m+n}."""

    def rule(m2, n2):
        return [(GenId(out, m2 + n2), -(_half(n2) + weight * _half(m2)))]

    return rule


def _minus_second_rule(out: str):
    """-r out_{m+r}."""

    def rule(m2, r2):
        return [(GenId(out, m2 + r2), -_half(r2))]

    return rule


def _fam(name, lattice, parity, central=False):
    return name, FamilyInfo(name, lattice, parity, central)


def _virasoro() -> AlgebraSpec:
    fams = dict([
        _fam("L", LATTICE_INT, EVEN),
        _fam("C", LATTICE_INT, EVEN, central=True),
    ])
    rules = {("L", "L"): _witt_rule("L", "C")}
    return AlgebraSpec("virasoro", {}, fams, rules)


def _w0b(b: "Q") -> AlgebraSpec:
    fams = dict([
        _fam("L", LATTICE_INT, EVEN),
        _fam("I", LATTICE_INT, EVEN),
        _fam("C", LATTICE_INT, EVEN, central=True),
    ])
    rules = {
        ("L", "L"): _witt_rule("L", "C"),
        ("L", "I"): _weight_rule("I", b),
    }
    return AlgebraSpec("w0b", {"b": b}, fams, rules)


def _svir_ramond() -> AlgebraSpec:
    fams = dict([
        _fam("L", LATTICE_INT, EVEN),
        _fam("G", LATTICE_INT, ODD),
        _fam("C", LATTICE_INT, EVEN, central=True),
    ])
    rules = {
        ("L", "L"): _witt_rule("L", "C"),
        ("L", "G"): _half_weight_rule("G"),
        ("G", "G"): _pairing_rule("L", "C"),
    }
    return AlgebraSpec("svir-ramond", {}, fams, rules)


def _sw22() -> AlgebraSpec:
    fams = dict([
        _fam("L", LATTICE_INT, EVEN),
        _fam("H", LATTICE_INT, EVEN),
        _fam("G", LATTICE_HALF, ODD),
        _fam("Q", LATTICE_HALF, ODD),
        _fam("C1", LATTICE_INT, EVEN, central=True),
        _fam("C2", LATTICE_INT, EVEN, central=True),
    ])
    rules = {
        ("L", "L"): _witt_rule("L", "C1"),
        ("L", "H"): _witt_rule("H", "C2"),
        ("L", "G"): _half_weight_rule("G"),
        ("L", "Q"): _half_weight_rule("Q"),
        ("G", "G"): _pairing_rule("L", "C1"),
        ("G", "Q"): _pairing_rule("H", "C2"),
        ("H", "G"): _half_weight_rule("Q"),
    }
    return AlgebraSpec("sw22", {}, fams, rules)


def _bms3_n1() -> AlgebraSpec:
    fams = dict([
        _fam("L", LATTICE_INT, EVEN),
        _fam("W", LATTICE_INT, EVEN),
        _fam("Q", LATTICE_HALF, ODD),
        _fam("C1", LATTICE_INT, EVEN, central=True),
        _fam("C2", LATTICE_INT, EVEN, central=True),
    ])
    rules = {
        ("L", "L"): _witt_rule("L", "C1"),
        ("L", "W"): _witt_rule("W", "C2"),
        ("L", "Q"): _half_weight_rule("Q"),
        ("Q", "Q"): _pairing_rule("W", "C2"),
    }
    return AlgebraSpec("bms3-n1", {}, fams, rules)


def _n2_ramond() -> AlgebraSpec:
    fams = dict([
        _fam("L", LATTICE_INT, EVEN),
        _fam("H", LATTICE_INT, EVEN),
        _fam("G+", LATTICE_INT, ODD),
        _fam("G-", LATTICE_INT, ODD),
        _fam("C", LATTICE_INT, EVEN, central=True),
    ])

    def hh(m2, n2):
        if m2 + n2 == 0:
            return [(GenId("C", 0), _half(m2) / 3)]
        return []

    def hgp(m2, p2):
        return [(GenId("G+", m2 + p2), Q(1))]

    def hgm(m2, p2):
        return [(GenId("G-", m2 + p2), Q(-1))]

    def gpgm(p2, q2):
        res = [
            (GenId("L", p2 + q2), Q(2)),
            (GenId("H", p2 + q2), _half(p2 - q2)),
        ]
        if p2 + q2 == 0:
            res.append((GenId("C", 0), _gg_cocycle(p2)))
        return res

    rules = {
        ("L", "L"): _witt_rule("L", "C"),
        ("H", "H"): hh,
        ("L", "H"): _minus_second_rule("H"),
        ("L", "G+"): _half_weight_rule("G+"),
        ("L", "G-"): _half_weight_rule("G-"),
        ("H", "G+"): hgp,
        ("H", "G-"): hgm,
        ("G+", "G-"): gpgm,
    }
    return AlgebraSpec("n2-ramond", {}, fams, rules)


def _hv_super() -> AlgebraSpec:
    fams = dict([
        _fam("L", LATTICE_INT, EVEN),
        _fam("H", LATTICE_INT, EVEN),
        _fam("G", LATTICE_HALF, ODD),
        _fam("C", LATTICE_INT, EVEN, central=True),
    ])
    rules = {
        ("L", "L"): _witt_rule("L", "C"),
        ("L", "H"): _minus_second_rule("H"),
        ("L", "G"): _minus_second_rule("G"),
        ("G", "G"): _pairing_rule("H", None),
    }
    return AlgebraSpec("hv-super", {}, fams, rules)


_ALGEBRAS = {
    "virasoro": lambda key: _virasoro(),
    "w0b": lambda key: _w0b(key.param("b")),
    "svir-ramond": lambda key: _svir_ramond(),
    "sw22": lambda key: _sw22(),
    "bms3-n1": lambda key: _bms3_n1(),
    "n2-ramond": lambda key: _n2_ramond(),
    "hv-super": lambda key: _hv_super(),
}


def get_algebra(k: CatalogKey) -> AlgebraSpec:
    """Instantiate a catalog algebra."""
    if k.name not in _ALGEBRAS:
        raise ValueError(f"{k.name!r} is not a catalog algebra")
    return _ALGEBRAS[k.name](k)


def _density_f(b: "Q", alg: AlgebraSpec) -> ModuleSpec:
    fams = dict([_fam("v", LATTICE_INT, EVEN)])

    def lv(m2, i2):
        return [(GenId("v", m2 + i2), -(_half(i2) + b * _half(m2)))]

    return ModuleSpec("density-F", {"b": b}, alg, fams, {("L", "v"): lv})


def _density_fsuper(b: "Q", alg: AlgebraSpec) -> ModuleSpec:
    fams = dict([
        _fam("I", LATTICE_INT, EVEN),
        _fam("J", LATTICE_INT, ODD),
    ])

    def li(m2, n2):
        return [(GenId("I", m2 + n2), -(_half(n2) + b * _half(m2)))]

    def lj(m2, r2):
        return [(GenId("J", m2 + r2), -(_half(r2) + (b + Q(1, 2)) * _half(m2)))]

    def gi(r2, m2):
        return [(GenId("J", m2 + r2), -(_half(m2) / 2 + b * _half(r2)))]

    def gj(r2, s2):
        return [(GenId("I", r2 + s2), Q(2))]

    rules = {("L", "I"): li, ("L", "J"): lj, ("G", "I"): gi, ("G", "J"): gj}
    return ModuleSpec("density-Fsuper", {"b": b}, alg, fams, rules)


def get_module(mod_key: CatalogKey, over: CatalogKey) -> ModuleSpec:
    """Instantiate a catalog module over the given algebra."""
    alg = get_algebra(over)
    if mod_key.name == "density-F":
        if alg.name != "virasoro":
            raise ValueError("density-F is a module over virasoro only")
        return _density_f(mod_key.param("b"), alg)
    if mod_key.name == "density-Fsuper":
        if alg.name != "svir-ramond":
            raise ValueError("density-Fsuper is a module over svir-ramond only")
        return _density_fsuper(mod_key.param("b"), alg)
    raise ValueError(f"{mod_key.name!r} is not a catalog module")


@dataclass(frozen=True)
class CatalogEntry:
    """Listing row: one algebra or module with its family metadata."""

    name: str
    kind: str  # "algebra" | "module"
    parameters: Tuple[str, ...]
    over: Optional[str]
    families: Tuple[Tuple[str, str, str, bool], ...]  # (family, lattice, parity, central)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "parameters": list(self.parameters),
            "over": self.over,
            "families": [
                {"family": f, "lattice": lat, "parity": par, "central": c}
                for f, lat, par, c in self.families
            ],
        }


def _entry(name: str, kind: str, over: Optional[str], spec) -> CatalogEntry:
    fams = tuple(
        (f.name, lattice_name(f.lattice), parity_name(f.parity), f.central)
        for f in (spec.families[n] for n in sorted(spec.families))
    )
    params = ("b",) if name in _NEEDS_B else ()
    return CatalogEntry(name, kind, params, over, fams)


def list_catalog() -> List[CatalogEntry]:
    """All catalog entries in stable, documented order (algebras then modules)."""
    b0 = rat(0)
    out = []
    for name in ALGEBRA_NAMES:
        k = key(name, b=b0) if name in _NEEDS_B else key(name)
        out.append(_entry(name, "algebra", None, get_algebra(k)))
    vir = key("virasoro")
    svir = key("svir-ramond")
    out.append(_entry("density-F", "module", "virasoro",
                      get_module(key("density-F", b=b0), vir)))
    out.append(_entry("density-Fsuper", "module", "svir-ramond",
                      get_module(key("density-Fsuper", b=b0), svir)))
    return out
