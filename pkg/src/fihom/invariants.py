"""Numerical invariants of truncated FI-modules and the regularity theorems as checks.

A truncated computation sees only degrees n <= N, so every invariant is
carried as an :class:`Estimate`: an interval ``[lo, hi]`` of values it
provably lies in.  ``lo`` comes from what was observed in the window and
``hi`` from a degree bound the theory supplies; the value is certified when
the two meet.  A check ``lhs <= rhs`` then FAILs only when the observed data
already contradicts it (``lhs.lo > rhs.hi``) and PASSes only when it is
proved (``lhs.hi <= rhs.lo``).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from enum import Enum
from functools import cached_property
from typing import Any, Callable, Iterable

from .exactla import FieldSpec
from .fimodule import (
    NEG_INF,
    POS_INF,
    Presentation,
    TruncatedFIModule,
    WindowError,
    derivative_kernel,
    iterated_derivative,
    iterated_shift,
    presentation_parts,
    sub_generated_below,
    submodule,
)
from .io import presentation_to_json
from .koszul import HomologyTable, cone_phi_check, homology_dim, les_exactness_check

ExtDegree = int | float  # a Python int, or -inf / +inf


def ext_to_json(x: ExtDegree) -> Any:
    if x == POS_INF:
        return "inf"
    if x == NEG_INF:
        return "-inf"
    return int(x)


def ext_from_json(v: Any) -> ExtDegree:
    if v == "inf":
        return POS_INF
    if v == "-inf":
        return NEG_INF
    return int(v)


def _top_nonzero(values: Iterable[int]) -> ExtDegree:
    top = NEG_INF
    for n, x in enumerate(values):
        if x:
            top = n
    return top


@dataclass(frozen=True)
class Estimate:
    """A quantity known to lie in ``[lo, hi]``; ``value`` is what gets reported."""

    lo: ExtDegree
    hi: ExtDegree
    value: ExtDegree | None = None

    def __post_init__(self):
        if self.value is None:
            object.__setattr__(self, "value", self.lo)

    @classmethod
    def exact(cls, x: ExtDegree) -> "Estimate":
        return cls(x, x)

    @property
    def certified(self) -> bool:
        return self.lo == self.hi

    def __add__(self, c: int) -> "Estimate":
        return Estimate(self.lo + c, self.hi + c, self.value + c)

    def __sub__(self, c: int) -> "Estimate":
        return self + (-c)

    def to_json(self) -> dict:
        return {
            "value": ext_to_json(self.value),
            "certified": self.certified,
            "lo": ext_to_json(self.lo),
            "hi": ext_to_json(self.hi),
        }


def est_max(items: Iterable[Estimate]) -> Estimate:
    items = list(items)
    if not items:
        return Estimate.exact(NEG_INF)
    return Estimate(max(e.lo for e in items), max(e.hi for e in items), max(e.value for e in items))


def est_min(items: Iterable[Estimate]) -> Estimate:
    items = list(items)
    return Estimate(min(e.lo for e in items), min(e.hi for e in items), min(e.value for e in items))


def _as_estimate(x) -> Estimate:
    return x if isinstance(x, Estimate) else Estimate.exact(x)


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    UNCERTIFIED = "UNCERTIFIED"


def compare(lhs, rhs, strict: bool = False) -> Verdict:
    """Verdict for ``lhs <= rhs`` (or ``<`` when ``strict``)."""
    lhs, rhs = _as_estimate(lhs), _as_estimate(rhs)
    if strict:
        if lhs.lo >= rhs.hi:
            return Verdict.FAIL
        return Verdict.PASS if lhs.hi < rhs.lo else Verdict.UNCERTIFIED
    if lhs.lo > rhs.hi:
        return Verdict.FAIL
    return Verdict.PASS if lhs.hi <= rhs.lo else Verdict.UNCERTIFIED


def combine(verdicts: Iterable[Verdict]) -> Verdict:
    verdicts = list(verdicts)
    if Verdict.FAIL in verdicts:
        return Verdict.FAIL
    if Verdict.UNCERTIFIED in verdicts:
        return Verdict.UNCERTIFIED
    return Verdict.PASS


@dataclass(frozen=True)
class PresentationBounds:
    """Generation degree k and relation degree d of some presentation."""

    k: int
    d: int

    @property
    def reg_bound(self) -> int:
        return min(self.k, self.d) + self.d - 1

    @property
    def shift_bound(self) -> int:
        return min(self.k, self.d) + self.d

    def derivative(self, i: int) -> "PresentationBounds":
        return PresentationBounds(max(self.k - i, 0), max(self.d - i, 0))


# ---------------------------------------------------------------------------
# per-module invariants


class ModuleAnalysis:
    """Invariants of one truncated module with known presentation bounds.

    ``hd1_cap`` is an extra proven upper bound on hd_1, used for shifts of V
    (the exact sequence gives hd_1(SV) <= hd_1(V)).  ``reg_cap`` is an extra
    proven upper bound on reg, e.g. from the derivative or shift towers.
    """

    def __init__(self, V: TruncatedFIModule, bounds: PresentationBounds, a_max: int = 4,
                 hd1_cap: ExtDegree = POS_INF, reg_cap: ExtDegree = POS_INF, name: str = "V"):
        self.V = V
        self.bounds = bounds
        self.a_max = a_max
        self.hd1_cap = hd1_cap
        self.reg_cap = reg_cap
        self.name = name
        self._hd: dict[int, Estimate] = {}

    @property
    def N(self) -> int:
        return self.V.N

    def cell(self, a: int, n: int) -> int:
        return homology_dim(self.V, a, n)

    def row(self, a: int) -> list[int]:
        return [self.cell(a, n) for n in range(self.N + 1)]

    def table(self, a_max: int | None = None) -> HomologyTable:
        a_max = self.a_max if a_max is None else a_max
        h = {(a, n): self.cell(a, n) for a in range(a_max + 1) for n in range(self.N + 1)}
        return HomologyTable(a_max, self.N, h)

    @cached_property
    def deg_finite(self) -> ExtDegree | None:
        """deg(V) when a zero degree at or above k proves V vanishes from there on."""
        dims = self.V.dims
        for n in range(self.bounds.k, self.N + 1):
            if dims[n] == 0:
                return _top_nonzero(dims[:n])
        return None

    @cached_property
    def low(self) -> Estimate:
        nz = [n for n, x in enumerate(self.V.dims) if x]
        if nz:
            return Estimate.exact(nz[0])
        if self.N >= self.bounds.k:
            return Estimate.exact(POS_INF)
        return Estimate(self.N + 1, POS_INF)

    @cached_property
    def td(self) -> Estimate:
        """deg(KV), observed on the window N-1 where KV is computed exactly."""
        if self.N < 1:
            lo = NEG_INF
        else:
            lo = _top_nonzero(derivative_kernel(self.V)[1].dims)
        ub = self.bounds.reg_bound
        if self.deg_finite is not None:
            ub = min(ub, self.deg_finite)
        return Estimate(lo, lo if ub <= self.N - 1 else max(lo, ub))

    @cached_property
    def deg(self) -> Estimate:
        if self.deg_finite is not None:
            return Estimate.exact(self.deg_finite)
        dims = self.V.dims
        lo = _top_nonzero(dims)
        # past td the map iota is injective, so a nonzero V_N never dies
        if dims[self.N] and self.td.hi < self.N:
            return Estimate.exact(POS_INF)
        return Estimate(lo, POS_INF, POS_INF if dims[self.N] else lo)

    def _hd_upper(self, a: int) -> ExtDegree:
        ub = POS_INF if self.deg_finite is None else self.deg_finite + a
        if a == 0:
            return min(ub, self.bounds.k)
        ub = min(ub, min(self.bounds.reg_bound, self.reg_cap) + a)
        if a == 1:
            return min(ub, self.bounds.d, self.hd1_cap)
        h1 = self.hd(1)
        if h1.hi == NEG_INF:
            return NEG_INF
        h0 = self.hd(0)
        return min(ub, min(h0.hi, h1.hi) + h1.hi - 1 + a)

    def hd(self, a: int) -> Estimate:
        if a not in self._hd:
            lo = _top_nonzero(self.row(a))
            ub = self._hd_upper(a)
            self._hd[a] = Estimate(lo, lo if ub <= self.N else max(lo, ub))
        return self._hd[a]

    @property
    def acyclic(self) -> bool | None:
        """True/False when H_1 = 0 is proved/refuted, None when undecided."""
        h1 = self.hd(1)
        if h1.hi == NEG_INF:
            return True
        if h1.lo > NEG_INF:
            return False
        return None

    @cached_property
    def li_yu_bound(self) -> ExtDegree:
        h0, h1 = self.hd(0), self.hd(1)
        return min(h0.hi, h1.hi) + h1.hi - 1

    @cached_property
    def reg(self) -> Estimate:
        if self.acyclic:
            return Estimate.exact(NEG_INF)
        lo = max(self.hd(a).lo - a for a in range(1, self.a_max + 1))
        ub = min(self.bounds.reg_bound, self.li_yu_bound, self.reg_cap)
        if self.deg_finite is not None:
            ub = min(ub, self.deg_finite)
        return Estimate(lo, max(lo, ub))


# ---------------------------------------------------------------------------
# a module with its derived modules


def _try(fn: Callable[[], Any]):
    try:
        return fn()
    except WindowError:
        return None


class Study:
    """V together with the shifts, derivatives and Li-Yu pieces the theorems use."""

    def __init__(self, V: TruncatedFIModule, bounds: PresentationBounds, a_max: int = 4,
                 presentation: Presentation | None = None, reproduction: dict | None = None):
        self.V = V
        self.bounds = bounds
        self.a_max = a_max
        self.presentation = presentation
        self.reproduction = reproduction
        self.main = ModuleAnalysis(V, bounds, a_max)
        self._shifts: dict[int, ModuleAnalysis] = {0: self.main}
        self._derivs: dict[int, ModuleAnalysis] = {0: self.main}

    @property
    def N(self) -> int:
        return self.V.N

    @property
    def field(self) -> FieldSpec:
        return self.V.field

    def shifted(self, i: int) -> ModuleAnalysis:
        if i not in self._shifts:
            if i > self.N:
                raise WindowError(f"S^{i}V needs N >= {i}", required_N=i)
            self._shifts[i] = ModuleAnalysis(
                iterated_shift(self.V, i), self.bounds, self.a_max, hd1_cap=self.main.hd(1).hi, name=f"S^{i}V"
            )
        return self._shifts[i]

    def derived(self, i: int) -> ModuleAnalysis:
        if i not in self._derivs:
            if i > self.N:
                raise WindowError(f"D^{i}V needs N >= {i}", required_N=i)
            self._derivs[i] = ModuleAnalysis(
                iterated_derivative(self.V, i), self.bounds.derivative(i), self.a_max, name=f"D^{i}V"
            )
        return self._derivs[i]

    @cached_property
    def shift_index(self) -> Estimate:
        """N(V): least i with H_1(S^i V) = 0."""
        ub1 = self.main.hd(1).hi
        lo, hi = 0, POS_INF
        for i in range(self.N + 1):
            A = self.shifted(i)
            if any(A.row(1)):
                lo = i + 1
            elif A.N >= ub1:
                hi = i
                break
        return Estimate(lo, max(lo, hi))

    @cached_property
    def derivative_tower(self) -> tuple[Estimate, Estimate]:
        k = self.bounds.k
        if self.N < k + 1:
            raise WindowError(f"derivative tower needs N >= {k + 1}", required_N=k + 1)
        terms = [self.derived(i) for i in range(k + 1)]
        hd1_D = est_max(A.hd(1) + i for i, A in enumerate(terms))
        td_D = est_max(A.td + i for i, A in enumerate(terms))
        return hd1_D, td_D

    @cached_property
    def shift_tower(self) -> Estimate:
        NV = self.shift_index
        lo_terms = [self.shifted(i).hd(1) + i for i in range(min(NV.lo, self.N) + 1)]
        lo = max(e.lo for e in lo_terms)
        if NV.hi == POS_INF:
            return Estimate(lo, POS_INF)
        hi = max(self.shifted(i).hd(1).hi + i for i in range(NV.hi + 1))
        return Estimate(lo, max(lo, hi))

    @cached_property
    def tower_caps(self) -> dict[str, ExtDegree]:
        """Upper bounds on reg(V) from the derivative ("D") and shift ("S") towers."""
        caps = {"D": POS_INF, "S": POS_INF}
        tower = _try(lambda: self.derivative_tower)
        if tower is not None:
            caps["D"] = max(tower[0].hi - 1, tower[1].hi)
        shift_tower = _try(lambda: self.shift_tower)
        if shift_tower is not None:
            caps["S"] = shift_tower.hi - 1
        return caps

    def capped(self, *towers: str) -> ModuleAnalysis:
        """The analysis of V with reg also capped by the named tower bounds."""
        cap = min((self.tower_caps[t] for t in towers), default=POS_INF)
        if cap == POS_INF:
            return self.main
        return ModuleAnalysis(self.V, self.bounds, self.a_max, reg_cap=cap, name=self.main.name)

    @cached_property
    def refined(self) -> ModuleAnalysis:
        """The analysis of V with reg also capped by both tower bounds."""
        return self.capped("D", "S")

    @cached_property
    def li_yu(self) -> tuple[int, ModuleAnalysis, ModuleAnalysis] | None:
        """(r, U, W) for r = hd_1(V), when V is certified non-acyclic with hd_1 certified."""
        h1 = self.main.hd(1)
        if self.main.acyclic is not False or not h1.certified:
            return None
        r = h1.lo
        U, W = sub_generated_below(self.V, r)
        kU = min(self.bounds.k, r - 1)
        return (
            r,
            ModuleAnalysis(U, PresentationBounds(kU, r), self.a_max, name="U"),
            ModuleAnalysis(W, self.bounds, self.a_max, name="W"),
        )

    @cached_property
    def relation_module(self) -> ModuleAnalysis | None:
        if self.presentation is None:
            return None
        P, spans = presentation_parts(self.presentation, self.field, self.N)
        R, _ = submodule(P, spans, name="R")
        d = self.presentation.d
        return ModuleAnalysis(R, PresentationBounds(d, d), self.a_max, name="R")


# ---------------------------------------------------------------------------
# reports


@dataclass
class BoundCheckResult:
    theorem: str
    inputs: dict
    lhs: Estimate | None
    rhs: Estimate | None
    verdict: Verdict
    detail: str = ""
    payload: dict | None = None

    def to_json(self) -> dict:
        out = {
            "theorem": self.theorem,
            "verdict": self.verdict.value,
            "inputs": self.inputs,
            "lhs": self.lhs.to_json() if self.lhs else None,
            "rhs": self.rhs.to_json() if self.rhs else None,
            "detail": self.detail,
        }
        if self.payload is not None:
            out["payload"] = self.payload
        return out


@dataclass
class InvariantReport:
    k: int
    d: int
    N: int
    deg: Estimate
    low: Estimate
    td: Estimate
    hd: dict[int, Estimate]
    reg: Estimate
    N_of_V: Estimate
    hd1_D: Estimate | None
    td_D: Estimate | None
    hd1_S: Estimate | None
    checks: list[BoundCheckResult] = dc_field(default_factory=list)

    def violations(self) -> list[str]:
        """Certified hd_a above min{k,d}+d-1+a would make this report a counterexample."""
        c = PresentationBounds(self.k, self.d).reg_bound
        return [f"hd_{a} = {e.lo} > {c + a}" for a, e in self.hd.items() if a >= 1 and e.certified and e.lo > c + a]

    def to_json(self) -> dict:
        opt = lambda e: e.to_json() if e is not None else None  # noqa: E731
        return {
            "k": self.k,
            "d": self.d,
            "N": self.N,
            "deg": self.deg.to_json(),
            "low": self.low.to_json(),
            "td": self.td.to_json(),
            "hd0": self.hd[0].to_json(),
            "hd": [self.hd[a].to_json() for a in sorted(self.hd) if a >= 1],
            "reg": self.reg.to_json(),
            "N_of_V": self.N_of_V.to_json(),
            "hd1_D": opt(self.hd1_D),
            "td_D": opt(self.td_D),
            "hd1_S": opt(self.hd1_S),
            "checks": [c.to_json() for c in self.checks],
        }


def invariant_report(study: Study, with_checks: bool = False) -> InvariantReport:
    m = study.refined
    tower = _try(lambda: study.derivative_tower)
    return InvariantReport(
        k=study.bounds.k,
        d=study.bounds.d,
        N=study.N,
        deg=m.deg,
        low=m.low,
        td=m.td,
        hd={a: m.hd(a) for a in range(study.a_max + 1)},
        reg=m.reg,
        N_of_V=study.shift_index,
        hd1_D=tower[0] if tower else None,
        td_D=tower[1] if tower else None,
        hd1_S=study.shift_tower,
        checks=theorem_suite(study) if with_checks else [],
    )


# single-module convenience wrappers


def basic_degrees(V: TruncatedFIModule, bounds: PresentationBounds) -> tuple[Estimate, Estimate]:
    m = ModuleAnalysis(V, bounds)
    return m.deg, m.low


def torsion_degree(V: TruncatedFIModule, bounds: PresentationBounds) -> Estimate:
    return ModuleAnalysis(V, bounds).td


def homological_degrees(V: TruncatedFIModule, a_max: int, bounds: PresentationBounds) -> list[Estimate]:
    m = ModuleAnalysis(V, bounds, a_max)
    return [m.hd(a) for a in range(a_max + 1)]


def regularity(V: TruncatedFIModule, a_max: int, bounds: PresentationBounds) -> Estimate:
    return ModuleAnalysis(V, bounds, a_max).reg


def shift_acyclicity_index(V: TruncatedFIModule, bounds: PresentationBounds) -> Estimate:
    return Study(V, bounds).shift_index


def derivative_tower_stats(V: TruncatedFIModule, bounds: PresentationBounds) -> tuple[Estimate, Estimate]:
    return Study(V, bounds).derivative_tower


def shift_tower_stats(V: TruncatedFIModule, bounds: PresentationBounds) -> Estimate:
    return Study(V, bounds).shift_tower


# ---------------------------------------------------------------------------
# the theorem suite


class _Suite:
    def __init__(self, study: Study):
        self.s = study
        # checks read the sharpest certified values; the two tower checks
        # compare against the analysis that does not already use them
        self.m = study.refined
        self.results: list[BoundCheckResult] = []

    def inputs(self, **extra) -> dict:
        s = self.s
        out = {"k": s.bounds.k, "d": s.bounds.d, "N": s.N, "field": s.field.to_json()}
        out.update(extra)
        return out

    def emit(self, theorem: str, verdict: Verdict, lhs=None, rhs=None, detail: str = "", **extra):
        s = self.s
        payload = None
        if verdict is Verdict.FAIL:
            payload = {"reproduction": s.reproduction}
            if s.presentation is not None:
                payload["module"] = presentation_to_json(s.presentation, s.field, s.N)
        lhs = _as_estimate(lhs) if lhs is not None else None
        rhs = _as_estimate(rhs) if rhs is not None else None
        self.results.append(BoundCheckResult(theorem, self.inputs(**extra), lhs, rhs, verdict, detail, payload))

    def le(self, theorem: str, lhs, rhs, strict: bool = False, detail: str = "", **extra):
        self.emit(theorem, compare(lhs, rhs, strict), lhs, rhs, detail, **extra)

    def guarded(self, theorem: str, fn: Callable[[], None]):
        try:
            fn()
        except WindowError as exc:
            self.emit(theorem, Verdict.UNCERTIFIED, detail=f"window too small: {exc} (need N >= {exc.required_N})")

    # -- checks ------------------------------------------------------------

    def low_degree(self):
        m = self.m
        low = m.low.lo
        bad = [(a, n) for a in range(self.s.a_max + 1) for n in range(m.N + 1) if n < low + a and m.cell(a, n)]
        self.emit("low-vanishing", Verdict.FAIL if bad else Verdict.PASS,
                  detail=f"nonzero cells below low+a: {bad}" if bad else "")
        for a in range(self.s.a_max + 1):
            h = m.hd(a)
            if h.lo > NEG_INF:
                self.le("hd-lower", m.low + a, h, a=a)

    def presentation_degrees(self):
        m = self.m
        self.le("hd0-bound", m.hd(0), self.s.bounds.k)
        self.le("hd1-bound", m.hd(1), self.s.bounds.d)
        R = self.s.relation_module
        if R is not None:
            hd0R = R.hd(0)
            self.le("relation-hd1", m.hd(1), hd0R)
            self.le("relation-hd0", hd0R, est_max([Estimate.exact(self.s.presentation.k), m.hd(1)]))

    def regularity_bounds(self):
        m, c = self.m, self.s.bounds.reg_bound
        for a in range(1, self.s.a_max + 1):
            self.le("hd-bound", m.hd(a), c + a, a=a)
        self.le("td-bound", m.td, c)
        self.le("reg-bound", m.reg, c)
        if m.deg.hi < POS_INF:
            self.le("reg-le-deg", m.reg, m.deg)

    def derivative_checks(self):
        m, s = self.m, self.s

        def prop():
            DV = s.derived(1)
            self.le("reg-D-prop", m.reg, est_max([m.hd(1) - 1, m.td, DV.reg + 1]))

        def tower():
            hd1_D, td_D = s.derivative_tower
            rhs = est_max([hd1_D - 1, td_D])
            # reg may only be capped by the other tower, or the check would be circular
            self.le("reg-D-tower", s.capped("S").reg, rhs)
            self.le("D-tower-bound", rhs, s.bounds.reg_bound)

        def d_acyclic():
            DV = s.derived(1)
            torsion_free = m.td.hi == NEG_INF
            if m.td.lo > NEG_INF or DV.acyclic is False:
                self.emit("D-acyclic-lemma", Verdict.PASS, detail="premise fails")
            elif torsion_free and DV.acyclic:
                v = m.acyclic
                verdict = Verdict.PASS if v else Verdict.FAIL if v is False else Verdict.UNCERTIFIED
                self.emit("D-acyclic-lemma", verdict, m.hd(1), Estimate.exact(NEG_INF))
            else:
                self.emit("D-acyclic-lemma", Verdict.UNCERTIFIED, detail="premise undecided")

        self.guarded("reg-D-prop", prop)
        self.guarded("reg-D-tower", tower)
        self.guarded("D-acyclic-lemma", d_acyclic)

    def acyclicity_checks(self):
        m, s = self.m, self.s

        def shift_lemma():
            SV = s.shifted(1)
            for a in range(s.a_max + 1):
                h = m.hd(a)
                if h.lo > NEG_INF:
                    self.emit("shift-lemma", Verdict.PASS, detail="premise fails", a=a)
                elif h.hi == NEG_INF:
                    hs = SV.hd(a)
                    verdict = Verdict.PASS if hs.hi == NEG_INF else Verdict.FAIL if hs.lo > NEG_INF else Verdict.UNCERTIFIED
                    self.emit("shift-lemma", verdict, hs, Estimate.exact(NEG_INF), a=a)
                else:
                    self.emit("shift-lemma", Verdict.UNCERTIFIED, detail="premise undecided", a=a)

        def one_zero():
            zero = [a for a in range(1, s.a_max + 1) if m.hd(a).hi == NEG_INF]
            if not zero:
                self.emit("one-zero-prop", Verdict.PASS, detail="no certified vanishing H_s")
                return
            bad = [a for a in range(1, s.a_max + 1) if m.hd(a).lo > NEG_INF]
            self.emit("one-zero-prop", Verdict.FAIL if bad else Verdict.PASS,
                      detail=f"H_{zero[0]} = 0 but H_a != 0 for a in {bad}" if bad else f"H_{zero[0]} = 0")

        def shift_acyclic():
            c = s.bounds.shift_bound
            A = s.shifted(c)
            h = A.hd(1)
            if h.lo > NEG_INF:
                verdict, how = Verdict.FAIL, "H_1 observed"
            elif h.hi == NEG_INF:
                verdict, how = Verdict.PASS, "direct"
            elif s.shift_index.hi <= c:
                # an acyclic S^i V with i <= c stays acyclic under further shifts
                verdict, how = Verdict.PASS, f"S^{s.shift_index.hi}V acyclic"
            else:
                verdict, how = Verdict.UNCERTIFIED, "window too small"
            self.emit("shift-acyclic", verdict, h, Estimate.exact(NEG_INF), detail=how, i=c, window=A.N)

        self.guarded("shift-lemma", shift_lemma)
        self.guarded("one-zero-prop", one_zero)
        self.guarded("shift-acyclic", shift_acyclic)
        self.guarded("N-bound", lambda: self.le("N-bound", s.shift_index, s.bounds.shift_bound))

    def shift_checks(self):
        m, s = self.m, self.s

        def prop():
            SV = s.shifted(1)
            self.le("reg-S-prop", m.reg, est_max([m.hd(1) - 1, SV.reg + 1]))

        self.guarded("reg-S-prop", prop)
        self.guarded("reg-S-tower", lambda: self.le("reg-S-tower", s.capped("D").reg, s.shift_tower - 1))

    def li_yu_checks(self):
        m, s = self.m, self.s
        names = ("li-yu-quotient", "li-yu-homology", "li-yu-degrees")
        if m.acyclic:
            for name in names:
                self.emit(name, Verdict.PASS, detail="V is acyclic")
            return
        ly = s.li_yu
        if ly is None:
            for name in names:
                self.emit(name, Verdict.UNCERTIFIED, detail="hd_1(V) not certified non-acyclic")
        else:
            r, U, W = ly
            bad = [(a, n) for a in range(1, s.a_max + 1) for n in range(W.N + 1) if W.cell(a, n)]
            self.emit("li-yu-quotient", Verdict.FAIL if bad else Verdict.PASS,
                      detail=f"nonzero H_a(W) cells {bad}" if bad else "", r=r)
            diff = [(a, n) for a in range(1, s.a_max + 1) for n in range(m.N + 1) if U.cell(a, n) != m.cell(a, n)]
            self.emit("li-yu-homology", Verdict.FAIL if diff else Verdict.PASS,
                      detail=f"tables differ at {diff}" if diff else "", r=r)
            self.le("li-yu-degrees", U.hd(0), U.hd(1), strict=True, r=r)
        self.le("li-yu-reg", m.reg, m.li_yu_bound)
        if m.acyclic is False:
            self.guarded("li-yu-N", lambda: self.le("li-yu-N", s.shift_index, m.li_yu_bound + 1))

    def monotonicity(self):
        m, s = self.m, self.s
        if m.acyclic:
            self.emit("monotonicity", Verdict.PASS, detail="V is acyclic")
            self.emit("stabilization", Verdict.PASS, detail="V is acyclic")
            return
        if m.acyclic is None:
            self.emit("monotonicity", Verdict.UNCERTIFIED, detail="acyclicity undecided")
            self.emit("stabilization", Verdict.UNCERTIFIED, detail="acyclicity undecided")
            return
        hds = [m.hd(a) for a in range(1, s.a_max + 1)]
        pairs = [compare(hds[i], hds[i + 1], strict=True) for i in range(len(hds) - 1)]
        chain = []
        for i, e in enumerate(hds):
            if not e.certified:
                break
            chain.append(str(e.lo))
            if i < len(pairs) and pairs[i] is not Verdict.PASS:
                break
        self.emit("monotonicity", combine(pairs), detail="<".join(chain),
                  pairs=[v.value for v in pairs], certified=[e.certified for e in hds])

        reg = m.reg
        excess = est_max(e - a for a, e in enumerate(hds, start=1))
        if excess.lo > reg.hi:
            self.emit("stabilization", Verdict.FAIL, excess, reg)
            return
        tail = [(a, e) for a, e in enumerate(hds, start=1) if e.certified and e.lo - a == reg.lo]
        if reg.certified and tail:
            s0 = tail[0][0]
            later = [e for a, e in enumerate(hds, start=1) if a >= s0 and e.certified]
            ok = all(e.lo - a == reg.lo for a, e in enumerate(hds, start=1) if a >= s0 and e.certified)
            self.emit("stabilization", Verdict.PASS if ok else Verdict.FAIL, excess, reg,
                      detail=f"hd_a - a = {reg.lo} from a = {s0}", s=s0, certified_tail=len(later))
        else:
            self.emit("stabilization", Verdict.UNCERTIFIED, excess, reg, detail="reg not reached in window")


THEOREM_GROUPS = {
    "low": ("low-vanishing", "hd-lower"),
    "presentation": ("hd0-bound", "hd1-bound", "relation-hd1", "relation-hd0"),
    "regularity": ("hd-bound", "td-bound", "reg-bound", "reg-le-deg"),
    "derivative": ("reg-D-prop", "reg-D-tower", "D-tower-bound", "D-acyclic-lemma"),
    "acyclicity": ("shift-lemma", "one-zero-prop", "shift-acyclic", "N-bound"),
    "shift": ("reg-S-prop", "reg-S-tower"),
    "li-yu": ("li-yu-quotient", "li-yu-homology", "li-yu-degrees", "li-yu-reg", "li-yu-N"),
    "monotonicity": ("monotonicity", "stabilization"),
}
THEOREM_IDS = tuple(t for group in THEOREM_GROUPS.values() for t in group)
_RUNNERS = {
    "low": _Suite.low_degree,
    "presentation": _Suite.presentation_degrees,
    "regularity": _Suite.regularity_bounds,
    "derivative": _Suite.derivative_checks,
    "acyclicity": _Suite.acyclicity_checks,
    "shift": _Suite.shift_checks,
    "li-yu": _Suite.li_yu_checks,
    "monotonicity": _Suite.monotonicity,
}


def resolve_selector(selector: str) -> tuple[set[str], bool, bool]:
    """Theorem ids to report and whether the cone / sequence checks run.

    A selector is ``all``, ``suite`` (every theorem, no chain-level checks),
    ``cone``, ``les``, a group name or a theorem id, or a comma-separated
    list of these.
    """
    ids: set[str] = set()
    cone = les = False
    for part in selector.split(","):
        part = part.strip()
        if part in ("all", "suite"):
            ids |= set(THEOREM_IDS)
            if part == "all":
                cone = les = True
        elif part == "cone":
            cone = True
        elif part == "les":
            les = True
        elif part in THEOREM_GROUPS:
            ids |= set(THEOREM_GROUPS[part])
        elif part in THEOREM_IDS:
            ids.add(part)
        else:
            raise KeyError(f"unknown theorem selector {part!r}")
    return ids, cone, les


def theorem_suite(study: Study, selector: str = "suite") -> list[BoundCheckResult]:
    """One result per theorem instance, in a fixed order."""
    ids, cone, les = resolve_selector(selector)
    suite = _Suite(study)
    for name, group in THEOREM_GROUPS.items():
        if ids & set(group):
            _RUNNERS[name](suite)
    results = [r for r in suite.results if r.theorem in ids]
    if cone:
        results.append(chain_check(study, "cone"))
    if les:
        results.append(chain_check(study, "les"))
    return results


def chain_check(study: Study, which: str) -> BoundCheckResult:
    """The cone comparison or the exact-sequence check as a suite result."""
    suite = _Suite(study)
    if study.N < 1:
        suite.emit(which, Verdict.UNCERTIFIED, detail="needs N >= 1")
        return suite.results[0]
    if which == "cone":
        report = cone_phi_check(study.V, a_max=study.a_max)
        bad = [(c.n, c.a) for c in report.failures()]
        detail = f"{len(report.cells)} cells" + (f"; failing (n, a): {bad}" if bad else "")
    else:
        report = les_exactness_check(study.V, a_max=study.a_max)
        bad = [(x.n, x.label) for x in report.failures()]
        detail = f"{len(report.nodes)} nodes" + (f"; not exact at {bad}" if bad else "")
    suite.emit(which, Verdict.PASS if report.ok else Verdict.FAIL, detail=detail)
    return suite.results[0]
