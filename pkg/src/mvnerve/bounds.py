"""Certification of the nerve bounds on concrete covers, and the sharpness checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .complex import FilteredComplex, FilteredCover
from .lowerbounds import generate_bipyramid_example, generate_sphere_example
from .modules import barcode_distance, bottleneck, doubled, eps_trivial
from .nerve import acyclicity, nerve
from .persistence import INF, barcode
from .spectral import DoubleComplex, page

SCHEMA_VERSION = 1


def _mul(k, eps):
    """``k * eps`` with ``0 * inf = 0``."""
    if k == 0:
        return Fraction(0)
    return INF if eps == INF else k * eps


@dataclass(frozen=True)
class Check:
    name: str
    degree: int | None
    measured: Fraction | float
    bound: Fraction | float

    @property
    def ok(self) -> bool:
        return self.measured <= self.bound

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "degree": self.degree,
            "measured2": doubled(self.measured),
            "bound2": doubled(self.bound),
            "ok": self.ok,
        }


@dataclass
class BoundReport:
    eps: Fraction | float
    D: int
    delta: int
    degrees: list[Check] = field(default_factory=list)
    stepwise: list[Check] = field(default_factory=list)

    @property
    def Q(self) -> int:
        return min(self.D, self.delta)

    @property
    def violations(self) -> list[Check]:
        return [c for c in self.degrees + self.stepwise if not c.ok]

    @property
    def verdict(self) -> str:
        if self.eps == INF:
            return "vacuous"
        return "pass" if not self.violations else "fail"

    @property
    def max_distance(self) -> Fraction | float:
        return max((c.measured for c in self.degrees if c.name == "main"), default=Fraction(0))

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "units": "half-grid-steps",
            "eps2": doubled(self.eps),
            "D": self.D,
            "Delta": self.delta,
            "Q": self.Q,
            "max_distance2": doubled(self.max_distance),
            "degrees": [c.to_json() for c in self.degrees],
            "stepwise": [c.to_json() for c in self.stepwise],
            "verdict": self.verdict,
        }

    def to_text(self) -> str:
        lines = [
            f"eps = {_fmt(self.eps)}  D = {self.D}  Delta = {self.delta}  Q = {self.Q}",
        ]
        for c in self.degrees + self.stepwise:
            deg = "" if c.degree is None else f" [d={c.degree}]"
            lines.append(f"{c.name}{deg}: {_fmt(c.measured)} <= {_fmt(c.bound)}  {'ok' if c.ok else 'VIOLATED'}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines) + "\n"


def _fmt(x) -> str:
    if x == INF:
        return "inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def certify(ambient: FilteredComplex, cover: FilteredCover, field: int = 2, stepwise: bool = True) -> BoundReport:
    """Measure every distance the bounds talk about and compare against them."""
    if cover.ambient != ambient:
        raise ValueError("cover is not a cover of the given complex")
    acy = acyclicity(cover, field=field)
    eps, D, delta = acy.eps, acy.D, acy.delta
    Q = min(D, delta)
    nv = nerve(cover, max_card=math.inf)
    top = max(D, delta, 0)
    bX = barcode(ambient, top, field)
    bN = barcode(nv.complex, top, field)
    rep = BoundReport(eps, D, delta)
    for d in range(top + 1):
        dist = bottleneck(bX[d], bN[d])
        rep.degrees.append(Check("main", d, dist, _mul(2 * (Q + 1), eps)))
        rep.degrees.append(Check("degreewise", d, dist, _mul(2 * (d + 1), eps)))
        rep.degrees.append(Check("easy", d, dist, _mul(4 * D + 2, eps)))
    if not stepwise:
        return rep
    dc = DoubleComplex(cover, field)
    e2 = page(dc, 2)
    einf = page(dc, dc.infinity_page)
    row2, rowinf = e2.row(0), einf.row(0)
    rep.stepwise.append(Check("nerve~E2", None, barcode_distance(bN, row2, range(top + 1)), _mul(2, eps)))
    bound = Fraction(0) if D <= 1 else _mul(2 * (D - 1), eps)
    rep.stepwise.append(Check("E2~Einf", None, barcode_distance(row2, rowinf, range(top + 1)), bound))
    for d in range(top + 1):
        dist = bottleneck(bX[d], rowinf[d])
        rep.stepwise.append(Check("Einf~X", d, dist, _mul(2 * d if d <= D else 2 * (D + 1), eps)))
        rep.stepwise.append(Check("Einf~X(Delta)", d, dist, _mul(2 * delta, eps)))
        if d > D:
            for name, bc in (("E2 beyond D", row2), ("Einf beyond D", rowinf), ("nerve beyond D", bN)):
                rep.stepwise.append(Check(name, d, Fraction(len(bc[d])), Fraction(0)))
    for r in range(1, dc.infinity_page + 1):
        pg = page(dc, r)
        worst = Fraction(0)
        for (pp, qq), tower in pg.cells.items():
            if qq != 0:
                worst = max(worst, eps_trivial(tower))
        rep.stepwise.append(Check(f"E{r} off-row", None, worst, eps))
    return rep


@dataclass
class SharpnessItem:
    example: str
    quantity: str
    measured: Fraction | float
    expected: Fraction

    @property
    def holds(self) -> bool:
        return self.measured == self.expected

    def to_json(self) -> dict:
        return {
            "example": self.example,
            "quantity": self.quantity,
            "measured2": doubled(self.measured),
            "expected2": doubled(self.expected),
            "holds": self.holds,
        }


def sharpness_suite(D: int, field: int = 2) -> list[SharpnessItem]:
    """Equalities showing the intermediate bounds are attained at dimension ``D``."""
    if isinstance(D, bool) or int(D) != D or D < 1:
        raise ValueError(f"sharpness suite needs an integer D >= 1, got {D!r}")
    out = []
    for name, gen in (("sphere", generate_sphere_example), ("bipyramid", generate_bipyramid_example)):
        X, cover = gen(D)
        dc = DoubleComplex(cover, field)
        bN = barcode(nerve(cover, max_card=math.inf).complex, D + 1, field)
        row2 = page(dc, 2).row(0)
        rowinf = page(dc, dc.infinity_page).row(0)
        degs = range(D + 2)
        out.append(SharpnessItem(name, "d(E2_*0, H(N))", barcode_distance(row2, bN, degs), Fraction(2)))
        if name == "sphere":
            out.append(SharpnessItem(name, "d(E2_*0, Einf_*0)", barcode_distance(row2, rowinf, degs), Fraction(2 * (D - 1))))
        else:
            bX = barcode(X, D + 1, field)
            out.append(SharpnessItem(name, "d(H_D(X), Einf_D0)", bottleneck(bX[D], rowinf[D]), Fraction(2 * D)))
    return out
