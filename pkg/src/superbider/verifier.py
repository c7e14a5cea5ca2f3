"""Machine checks of the classification claims on finite windows.

Each case pairs a computation (centroid, super-biderivation or post-Lie
space on a truncation window) with the closed-form family the classification
asserts, evaluated on the interior slice of the same window.  A case passes
when the interior dimensions agree and the two spans contain each other;
dimension equality alone would not catch a wrong family of the right size.

The case ids (L3.1, T3.2, ..., T6.3) are the stable vocabulary of the
``verify-paper`` command; each carries a self-contained description of the
claim it checks.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import catalog
from .core import Window, adjoint_module, index_str, window
from .engine import (
    BiderQuery,
    MapSpace,
    MapUnknowns,
    solve_bider,
    solve_centroid,
    solve_postlie,
)
from .scalars import Q, rat, rat_str
from .solver import space_from_vectors

#: parameter values at which the density-family claims split into cases,
#: plus one generic value.
B_SAMPLES: Tuple[str, ...] = ("-1", "-1/2", "0", "1/2", "1", "2")

#: minimal whole-unit margin between N and N_int for a meaningful interior.
_MIN_MARGIN2 = 4


@dataclass(frozen=True)
class ComponentRule:
    """One component of a closed-form family of maps.

    ``coeff`` maps doubled input indices and doubled shift to the exact
    coefficient of the output generator at index (sum of inputs) + shift.
    ``shifts`` is either "all" admissible shifts within the window bound or
    an explicit tuple of doubled shift values.
    """

    pair: Tuple[str, ...]
    out: str
    param: str
    coeff: Callable[..., "Q"]
    shifts: object = "all"  # "all" | tuple of doubled shifts


@dataclass(frozen=True)
class ExpectedFamily:
    """A parametric family: one basis vector per (parameter, shift)."""

    rules: Tuple[ComponentRule, ...]

    def vectors(self, unk: MapUnknowns, nint2: int) -> List[Tuple[str, int, Dict[int, "Q"]]]:
        """Evaluate on the interior slice: [(param, k2, vector), ...]."""
        alg = unk.alg
        mod = unk.mod
        k2max = unk.window.k2
        by_param: Dict[Tuple[str, int], Dict[int, Q]] = {}
        for rule in self.rules:
            lat_in = sum(alg.families[f].lattice for f in rule.pair)
            lat_out = mod.families[rule.out].lattice
            kpar = (lat_out - lat_in) % 2
            if rule.shifts == "all":
                k2s: Iterable[int] = (
                    k2 for k2 in range(-k2max, k2max + 1) if k2 % 2 == kpar
                )
            else:
                k2s = (k2 for k2 in rule.shifts if k2 % 2 == kpar and abs(k2) <= k2max)
            idx = [alg.indices(f, nint2) for f in rule.pair]
            for k2 in k2s:
                vec = by_param.setdefault((rule.param, k2), {})
                if unk.arity == 2:
                    for a2 in idx[0]:
                        for b2 in idx[1]:
                            c = rule.coeff(a2, b2, k2)
                            if c:
                                col = unk.col_of((rule.pair[0], a2, rule.pair[1], b2,
                                                  rule.out, a2 + b2 + k2))
                                if col is not None:
                                    vec[col] = c
                else:
                    for a2 in idx[0]:
                        c = rule.coeff(a2, k2)
                        if c:
                            col = unk.col_of((rule.pair[0], a2, rule.out, a2 + k2))
                            if col is not None:
                                vec[col] = c
        return [
            (param, k2, vec)
            for (param, k2), vec in sorted(by_param.items())
            if vec
        ]


@dataclass
class SampleReport:
    """Verification outcome for one parameter sample of a case."""

    label: str
    computed_dim: int
    expected_dim: int
    expected_in_computed: bool
    computed_in_expected: bool
    status: str  # "pass" | "fail"
    witness: Optional[str] = None
    detail: Optional[str] = None

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "computed_dim": self.computed_dim,
            "expected_dim": self.expected_dim,
            "expected_in_computed": self.expected_in_computed,
            "computed_in_expected": self.computed_in_expected,
            "status": self.status,
            "witness": self.witness,
            "detail": self.detail,
        }


@dataclass
class VerificationReport:
    """Aggregated outcome of one case."""

    case_id: str
    description: str
    window: Optional[Window]
    samples: List[SampleReport]
    status: str  # "pass" | "fail" | "window-too-small"
    witness: Optional[str] = None

    def as_dict(self) -> dict:
        return {
            "case": self.case_id,
            "description": self.description,
            "window": window_dict(self.window) if self.window else None,
            "samples": [s.as_dict() for s in self.samples],
            "status": self.status,
            "witness": self.witness,
        }


def window_dict(w: Window) -> dict:
    return {"N": w.n_str, "K": w.k_str, "N_int": w.nint_str}


def _q2(x2: int) -> "Q":
    return Q(x2, 2)


def _one(*_args) -> "Q":
    return Q(1)


def _family_mu(pair: Tuple[str, str], out: str) -> ExpectedFamily:
    """phi(pair) = mu_k out_{m+n+k}, one parameter per shift."""
    return ExpectedFamily((ComponentRule(pair, out, "mu", _one),))


def _family_weighted_mu(pair: Tuple[str, str], out: str) -> ExpectedFamily:
    """phi(pair) = (m+n+k) mu_k out_{m+n+k}."""
    return ExpectedFamily((
        ComponentRule(pair, out, "mu", lambda a2, b2, k2: _q2(a2 + b2 + k2)),
    ))


def _family_eps_bracket() -> ExpectedFamily:
    """delta(x,y) = lam eps([x,y]) on the super Virasoro density module."""
    return ExpectedFamily((
        ComponentRule(("L", "L"), "I", "lam",
                      lambda a2, b2, k2: _q2(a2 - b2), shifts=(0,)),
        ComponentRule(("L", "G"), "J", "lam",
                      lambda a2, b2, k2: _q2(a2) / 2 - _q2(b2), shifts=(0,)),
        ComponentRule(("G", "L"), "J", "lam",
                      lambda a2, b2, k2: _q2(a2) - _q2(b2) / 2, shifts=(0,)),
        ComponentRule(("G", "G"), "I", "lam",
                      lambda a2, b2, k2: Q(2), shifts=(0,)),
    ))


def _family_skew_lines() -> ExpectedFamily:
    """delta(L_m, L_n) = lam (m-n) v_{m+n}."""
    return ExpectedFamily((
        ComponentRule(("L", "L"), "v", "lam",
                      lambda a2, b2, k2: _q2(a2 - b2), shifts=(0,)),
    ))


def _family_centroid(rules: Sequence[Tuple[str, str]]) -> ExpectedFamily:
    """gamma(fam_m) = out_m for each (fam, out), one shared parameter."""
    return ExpectedFamily(tuple(
        ComponentRule((fam,), out, "lam", _one, shifts=(0,)) for fam, out in rules
    ))


@dataclass(frozen=True)
class TheoremCase:
    """One verifiable claim: a query plus its expected interior family."""

    case_id: str
    description: str
    kind: str  # "centroid" | "bider" | "postlie"
    algebra: str
    module: Optional[str]  # catalog module name, or None for adjoint
    parity: str
    symmetry: str
    samples: Tuple[Optional[str], ...]  # b values, or (None,) for none
    window: Window
    expected: Callable[[Optional["Q"]], Optional[ExpectedFamily]]
    postlie_plan: Tuple[Tuple[str, Optional[str], Window], ...] = ()

    def label(self) -> str:
        return f"{self.case_id}: {self.description}"


def _w(n, k=2, nint=2) -> Window:
    return window(n, k, nint)


def _t33_expected(b: Optional["Q"]) -> Optional[ExpectedFamily]:
    if b == 0:
        return _family_mu(("L", "L"), "v")
    if b == 1:
        return _family_weighted_mu(("L", "L"), "v")
    return None


def _c35_expected(b: Optional["Q"]) -> Optional[ExpectedFamily]:
    if b == 0:
        return _family_mu(("L", "L"), "I")
    if b == 1:
        return _family_weighted_mu(("L", "L"), "I")
    return None


CASES: Tuple[TheoremCase, ...] = (
    TheoremCase(
        "L3.1",
        "centroid of Vir in the density module F_b: the line gamma(L_m)=v_m, "
        "gamma(C)=0 at b=-1, zero otherwise",
        "centroid", "virasoro", "density-F", "even", "none",
        B_SAMPLES, _w(6),
        lambda b: _family_centroid((("L", "v"),)) if b == -1 else None,
    ),
    TheoremCase(
        "T3.2",
        "skew-symmetric biderivations Vir x Vir -> F_b: the line "
        "lam*(m-n) v_{m+n} at b=-1, zero otherwise",
        "bider", "virasoro", "density-F", "even", "skew",
        B_SAMPLES, _w(6),
        lambda b: _family_skew_lines() if b == -1 else None,
    ),
    TheoremCase(
        "T3.3",
        "symmetric biderivations Vir x Vir -> F_b: mu_k v_{m+n+k} at b=0, "
        "(m+n+k) mu_k v_{m+n+k} at b=1, zero otherwise",
        "bider", "virasoro", "density-F", "even", "symmetric",
        B_SAMPLES, _w(6), _t33_expected,
    ),
    TheoremCase(
        "C3.4",
        "symmetric biderivations of Vir itself are trivial",
        "bider", "virasoro", None, "even", "symmetric",
        (None,), _w(6), lambda b: None,
    ),
    TheoremCase(
        "C3.5",
        "symmetric biderivations of W(0,b): mu_k I_{m+n+k} at b=0, "
        "(m+n+k) mu_k I_{m+n+k} at b=1, zero otherwise; all other components zero",
        "bider", "w0b", None, "even", "symmetric",
        ("0", "1", "2"), _w(6), _c35_expected,
    ),
    TheoremCase(
        "L4.3",
        "centroid of the super Virasoro algebra in its density module: the "
        "line gamma(L_m)=I_m, gamma(G_m)=J_m at b=-1, zero otherwise",
        "centroid", "svir-ramond", "density-Fsuper", "even", "none",
        B_SAMPLES, _w(6),
        lambda b: _family_centroid((("L", "I"), ("G", "J"))) if b == -1 else None,
    ),
    TheoremCase(
        "T4.4",
        "skew-symmetric biderivations SVir x SVir -> density module: "
        "lam eps([x,y]) at b=-1, zero otherwise",
        "bider", "svir-ramond", "density-Fsuper", "both", "skew",
        B_SAMPLES, _w(5),
        lambda b: _family_eps_bracket() if b == -1 else None,
    ),
    TheoremCase(
        "T4.5",
        "symmetric biderivations SVir x SVir -> density module vanish for "
        "every b (both map parities)",
        "bider", "svir-ramond", "density-Fsuper", "both", "symmetric",
        B_SAMPLES, _w(5), lambda b: None,
    ),
    TheoremCase(
        "T5.1",
        "symmetric super-biderivations of the super Virasoro algebra are trivial",
        "bider", "svir-ramond", None, "both", "symmetric",
        (None,), _w(5), lambda b: None,
    ),
    TheoremCase(
        "T5.2",
        "symmetric super-biderivations of the super W(2,2) algebra are trivial",
        "bider", "sw22", None, "both", "symmetric",
        (None,), _w("11/2"), lambda b: None,
    ),
    TheoremCase(
        "T5.4",
        "symmetric super-biderivations of the N=1 super-BMS3 algebra are trivial",
        "bider", "bms3-n1", None, "both", "symmetric",
        (None,), _w("11/2"), lambda b: None,
    ),
    TheoremCase(
        "T5.6",
        "symmetric super-biderivations of the N=2 Ramond algebra are trivial",
        "bider", "n2-ramond", None, "both", "symmetric",
        (None,), _w(5), lambda b: None,
    ),
    TheoremCase(
        "T5.8",
        "symmetric super-biderivations of the Heisenberg-Virasoro superalgebra: "
        "phi(L_m,L_n) = mu_k H_{m+n+k}, all other components zero",
        "bider", "hv-super", None, "both", "symmetric",
        (None,), _w("11/2"),
        lambda b: _family_mu(("L", "L"), "H"),
    ),
    TheoremCase(
        "T6.3",
        "commutative post-Lie products on every catalog algebra are trivial "
        "(for the Heisenberg-Virasoro superalgebra via the obstruction from "
        "[L_2,L_1] o L_3)",
        "postlie", "hv-super", None, "both", "symmetric",
        (None,), _w(7),
        lambda b: None,
        postlie_plan=(
            ("virasoro", None, _w(6)),
            ("w0b", "0", _w(6)),
            ("w0b", "1", _w(6)),
            ("w0b", "2", _w(6)),
            ("svir-ramond", None, _w(5)),
            ("sw22", None, _w("11/2")),
            ("bms3-n1", None, _w("11/2")),
            ("n2-ramond", None, _w(5)),
            ("hv-super", None, _w(7)),
        ),
    ),
)

CASE_IDS: Tuple[str, ...] = tuple(c.case_id for c in CASES)
_CASE_BY_ID = {c.case_id: c for c in CASES}


def get_case(case_id: str) -> TheoremCase:
    try:
        return _CASE_BY_ID[case_id]
    except KeyError:
        raise ValueError(
            f"unknown case {case_id!r}; known cases: {', '.join(CASE_IDS)}"
        ) from None


def _algebra_key(name: str, b: Optional["Q"]) -> catalog.CatalogKey:
    if name in ("w0b",):
        return catalog.key(name, b=b)
    return catalog.key(name)


def _module_key(name: Optional[str], b: Optional["Q"]) -> Optional[catalog.CatalogKey]:
    if name is None:
        return None
    return catalog.key(name, b=b)


def _sample_label(b: Optional["Q"]) -> str:
    return "-" if b is None else f"b={rat_str(b)}"


def _verify_space(
    space: MapSpace, family: Optional[ExpectedFamily], label: str
) -> SampleReport:
    unk = space.unknowns
    nint2 = unk.window.nint2
    computed = space.interior()
    expected_vectors = family.vectors(unk, nint2) if family else []
    expected = space_from_vectors(unk.ncols, [v for _, _, v in expected_vectors])
    if expected.dimension != len(expected_vectors):
        raise AssertionError(f"{label}: expected family vectors are dependent")
    exp_in_comp = all(computed.contains(v) for _, _, v in expected_vectors)
    comp_in_exp = all(expected.contains(v) for v in computed.basis)
    ok = (
        exp_in_comp and comp_in_exp and computed.dimension == expected.dimension
    )
    witness = None
    if not ok:
        if not exp_in_comp:
            bad = next(
                (p, k2) for p, k2, v in expected_vectors if not computed.contains(v)
            )
            witness = (f"expected vector (param {bad[0]}, shift {index_str(bad[1])}) "
                       f"not in the computed interior space")
        elif not comp_in_exp:
            v = next(v for v in computed.basis if not expected.contains(v))
            cols = sorted(v)[:4]
            witness = ("computed interior vector outside the expected family; "
                       "leading cells: "
                       + ", ".join(f"{unk.describe_col(c)}={rat_str(v[c])}" for c in cols))
        else:
            witness = "interior dimensions differ"
    return SampleReport(
        label,
        computed.dimension,
        expected.dimension,
        exp_in_comp,
        comp_in_exp,
        "pass" if ok else "fail",
        witness,
    )


def _window_too_small(w: Window) -> bool:
    return w.n2 - w.nint2 < _MIN_MARGIN2


def _verify_postlie_case(case: TheoremCase, w: Optional[Window]) -> VerificationReport:
    samples: List[SampleReport] = []
    for name, b, plan_window in case.postlie_plan:
        use = w if w is not None else plan_window
        bq = rat(b) if b is not None else None
        result = solve_postlie(_algebra_key(name, bq), use)
        label = name if bq is None else f"{name}(b={rat_str(bq)})"
        if result.status != "linear":
            samples.append(SampleReport(label, -1, 0, False, False, "fail",
                                        "quadratic obstruction terms do not vanish"))
            continue
        dim = result.interior_dimension or 0
        detail = None
        witness = None
        ok = dim == 0
        if name == "hv-super":
            kill = _mu_killing_equations(result)
            detail = (f"obstruction from {{L_1,L_2}} o L_3: "
                      f"{len(kill)} parameter-killing equations")
            if len(kill) != result.bider.dimension:
                ok = False
                witness = ("expected one killing equation per parameter from the "
                           "triple {L_1,L_2} o L_3")
        if not ok and witness is None:
            survivors = []
            if result.parameter_space is not None:
                for t in result.parameter_space.basis:
                    survivors.append({result.obstruction.parameters[i]: rat_str(c)
                                      for i, c in t.items()})
            witness = f"surviving product parameters: {survivors}"
        samples.append(SampleReport(label, dim, 0, ok, ok,
                                    "pass" if ok else "fail", witness, detail))
    status = "pass" if all(s.status == "pass" for s in samples) else "fail"
    witness = next((s.witness for s in samples if s.status != "pass"), None)
    return VerificationReport(case.case_id, case.description, w, samples, status, witness)


def _mu_killing_equations(result) -> List:
    """Equations from the {L_1, L_2} o L_3 triple, each pinning one parameter."""
    triple = ("L[1]", "L[2]", "L[3]")
    out = []
    for eq in result.obstruction.equations:
        if eq.triple == triple and len(eq.linear) == 1 and not eq.quadratic:
            out.append(eq)
    return out


def verify(
    case: TheoremCase,
    w: Optional[Window] = None,
    b_filter: Optional["Q"] = None,
) -> VerificationReport:
    """Run one case and certify the computed space against its expected family."""
    if case.kind == "postlie":
        if w is not None and _window_too_small(w):
            return VerificationReport(case.case_id, case.description, w, [],
                                      "window-too-small", None)
        return _verify_postlie_case(case, w)
    use = w if w is not None else case.window
    if _window_too_small(use):
        return VerificationReport(case.case_id, case.description, use, [],
                                  "window-too-small",
                                  f"N={use.n_str} leaves no interior margin over "
                                  f"N_int={use.nint_str}")
    samples: List[SampleReport] = []
    for bs in case.samples:
        b = rat(bs) if bs is not None else None
        if b_filter is not None and b != b_filter:
            continue
        alg_key = _algebra_key(case.algebra, b)
        mod_key = _module_key(case.module, b)
        family = case.expected(b)
        if case.kind == "centroid":
            alg = catalog.get_algebra(alg_key)
            mod = (adjoint_module(alg) if mod_key is None
                   else catalog.get_module(mod_key, alg_key))
            space = solve_centroid(alg, mod, use, alg_key, mod_key)
        else:
            query = BiderQuery(alg_key, mod_key, case.parity, case.symmetry, use)
            space = solve_bider(query)
        samples.append(_verify_space(space, family, _sample_label(b)))
    if not samples:
        raise ValueError(f"{case.case_id}: no sample matches the parameter filter")
    status = "pass" if all(s.status == "pass" for s in samples) else "fail"
    witness = next((s.witness for s in samples if s.status != "pass"), None)
    return VerificationReport(case.case_id, case.description, use, samples,
                              status, witness)


def thread_cap() -> int:
    """Worker cap from SUPERBIDER_THREADS (default 1; floor 1)."""
    raw = os.environ.get("SUPERBIDER_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"SUPERBIDER_THREADS must be an integer, got {raw!r}")


def verify_all(
    case_ids: Optional[Sequence[str]] = None,
    w: Optional[Window] = None,
    b_filter: Optional["Q"] = None,
    grow: int = 0,
) -> List[VerificationReport]:
    """Run the selected (default: all) cases; reports in catalog order.

    ``grow`` enlarges every case window by that many whole units of N, which
    is how the stability-under-window-growth check is run.
    """
    chosen = [get_case(cid) for cid in case_ids] if case_ids else list(CASES)
    workers = thread_cap()

    def run(case: TheoremCase) -> VerificationReport:
        use = w
        if use is None and grow:
            use = None if case.kind == "postlie" else case.window.grown(grow)
        if case.kind == "postlie" and grow and w is None:
            grown_case = TheoremCase(
                case.case_id, case.description, case.kind, case.algebra,
                case.module, case.parity, case.symmetry, case.samples,
                case.window.grown(grow), case.expected,
                tuple((n, b, pw.grown(grow)) for n, b, pw in case.postlie_plan),
            )
            return verify(grown_case, None, b_filter)
        return verify(case, use, b_filter)

    if workers > 1 and len(chosen) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run, chosen))
    return [run(c) for c in chosen]


def annihilator_is_trivial(alg, mod, w: Window) -> bool:
    """Windowed module annihilator check: no in-window module generator is
    killed by every in-window algebra generator."""
    agens = [g for g in alg.gens_within(w.n2) if not alg.families[g.family].central]
    for v in mod.gens_within(w.n2):
        if all(not mod.act_pairs(x, v) for x in agens):
            return False
    return True
