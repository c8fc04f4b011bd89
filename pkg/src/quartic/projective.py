"""Projective-line dynamics and ping-pong certificates.

Dominance analysis works per 2x2 embedded block: equal extreme moduli are
detected exactly through the invariant u = |lambda|^2 + |lambda|^-2, so a
double maximal eigenvalue is a symbolic verdict, not a numerical one.

Ping-pong certificates are fully exact.  Balls are chordal-metric balls
around the exact eigenvector points; the compact complement of a removed
rational interval is covered by rational cells; each cell is certified by
evaluating the Moebius image of its endpoints exactly and using convexity
of the ball in a chart where the cell maps without a pole.  The standalone
checker re-runs the same predicates from the serialized data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    DimensionMismatch,
    HypothesisViolated,
    InternalMismatch,
    NotHyperbolicLike,
    ScalarMatrix,
    SearchOverflow,
    SingularMatrix,
    UndecidedComparison,
)
from .extension import QuadExt
from .intervals import DEFAULT_BITS, Interval
from .linalg import (
    BlockEig,
    MatClass,
    RegularRep,
    RingMat2,
    block_eig,
    classify,
    compare_u,
    eigen2,
    share_eigenvector,
)
from .ring import ONE, ZERO, QuarticElem, Sign


# ---------------------------------------------------------------------------
# projective points


@dataclass(frozen=True)
class ProjPoint:
    """Point of real projective space in homogeneous coordinates.

    Coordinates are exact field values (QuarticElem or QuadExt).  Equality
    of two points over the same extension is an exact cross-product test.
    """

    coords: tuple
    normalized: bool = False

    def __post_init__(self):
        if not self.coords:
            raise ValueError("empty coordinate tuple")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def interval_coords(self, bits: int = DEFAULT_BITS) -> list[Interval]:
        return [c.interval(bits) for c in self.coords]


def _pt_value_sign(x) -> Sign:
    return x.sign()


def _as_ext_parts(x) -> tuple[QuarticElem, QuarticElem, QuarticElem | None]:
    """(a, b, d) for a value a + b sqrt(d); base values carry d = None."""
    if isinstance(x, QuadExt):
        if x.b.is_zero():
            return x.a, ZERO, None
        return x.a, x.b, x.d
    return x, ZERO, None


def _cross_is_zero(pi, qj, pj, qi) -> bool:
    """Exact vanishing of pi*qj - pj*qi where the p and q coordinates may
    live in two different quadratic extensions of the base field.

    The cross expands to X + sqrt(d2) * Y with X, Y in the p-extension;
    it vanishes iff X^2 = d2 * Y^2 with opposite signs on X and Y.
    """
    a_i, b_i, d1_i = _as_ext_parts(pi)
    a_j, b_j, d1_j = _as_ext_parts(pj)
    c_j, e_j, d2_j = _as_ext_parts(qj)
    c_i, e_i, d2_i = _as_ext_parts(qi)
    d1 = d1_i if d1_i is not None else d1_j
    d2 = d2_j if d2_j is not None else d2_i
    if d1_i is not None and d1_j is not None and d1_i != d1_j:
        raise InternalMismatch("point coordinates in two different extensions")
    if d2_i is not None and d2_j is not None and d2_i != d2_j:
        raise InternalMismatch("point coordinates in two different extensions")
    # components of the cross over {1, sqrt d1, sqrt d2, sqrt d1 sqrt d2}
    comp_a = a_i * c_j - a_j * c_i
    comp_b = b_i * c_j - b_j * c_i
    comp_c = a_i * e_j - a_j * e_i
    comp_d = b_i * e_j - b_j * e_i
    if d1 is None:
        d1 = ZERO
    if d2 is None:
        d2 = ZERO
    x = QuadExt(comp_a, comp_b, d1)
    y = QuadExt(comp_c, comp_d, d1)
    if d2.is_zero():
        return x.is_zero()
    if not (x * x == y * y * QuadExt.of_base(d2, d1)):
        return False
    sx = x.sign()
    sy = y.sign()
    if sx == Sign.ZERO and sy == Sign.ZERO:
        return True
    return sx != sy and Sign.ZERO not in (sx, sy)


def proj_equal(p: ProjPoint, q: ProjPoint) -> bool:
    """Exact proportionality test; handles coordinates living in two
    different quadratic extensions of the base field."""
    if p.dim != q.dim:
        raise DimensionMismatch(f"{p.dim} vs {q.dim}")
    n = p.dim
    for i in range(n):
        for j in range(i + 1, n):
            if not _cross_is_zero(p.coords[i], q.coords[j],
                                  p.coords[j], q.coords[i]):
                return False
    return True


def proj_dist(p: ProjPoint, q: ProjPoint, bits: int = DEFAULT_BITS,
              max_bits: int = 4096) -> Interval:
    """Chordal distance |p ^ q| / (|p| |q|) as a validated interval.

    The squared distance is computed exactly whenever the coordinates live
    in a common extension, so equality gives an exact zero; otherwise the
    enclosure is refined until it is informative.
    """
    if p.dim != q.dim:
        raise DimensionMismatch(f"{p.dim} vs {q.dim}")
    try:
        dot = None
        p2 = None
        q2 = None
        for i in range(p.dim):
            dot = p.coords[i] * q.coords[i] if dot is None else dot + p.coords[i] * q.coords[i]
            p2 = p.coords[i] * p.coords[i] if p2 is None else p2 + p.coords[i] * p.coords[i]
            q2 = q.coords[i] * q.coords[i] if q2 is None else q2 + q.coords[i] * q.coords[i]
        num = p2 * q2 - dot * dot       # |p|^2 |q|^2 - (p.q)^2, exact
        if _pt_value_sign(num) == Sign.ZERO:
            return Interval(0)
        b = bits
        while True:
            iv_num = num.interval(b)
            iv_den = (p2 * q2).interval(b)
            if iv_num.lo >= 0 and iv_den.lo > 0:
                lo = (iv_num.lo / iv_den.hi)
                hi = (iv_num.hi / iv_den.lo)
                return Interval(lo, min(Fraction(1), hi)).sqrt(b)
            if b >= max_bits:
                raise UndecidedComparison("chordal distance enclosure stalled")
            b *= 2
    except InternalMismatch:
        # coordinates live in two different extensions: enclosures only
        return _proj_dist_intervals(p, q, bits, max_bits)


def _proj_dist_intervals(p: ProjPoint, q: ProjPoint, bits: int,
                         max_bits: int) -> Interval:
    b = bits
    while True:
        pc = p.interval_coords(b)
        qc = q.interval_coords(b)
        dot = pc[0] * qc[0]
        p2 = pc[0] * pc[0]
        q2 = qc[0] * qc[0]
        for i in range(1, p.dim):
            dot = dot + pc[i] * qc[i]
            p2 = p2 + pc[i] * pc[i]
            q2 = q2 + qc[i] * qc[i]
        num = p2 * q2 - dot * dot
        den = p2 * q2
        if den.lo > 0:
            lo = max(Fraction(0), num.lo / den.hi)
            hi = max(Fraction(0), num.hi / den.lo)
            return Interval(lo, min(Fraction(1), hi)).sqrt(b)
        if b >= max_bits:
            raise UndecidedComparison("coordinate intervals too coarse")
        b *= 2


# ---------------------------------------------------------------------------
# dominance analysis


@dataclass
class DominantRecord:
    """A certified dominant eigenvalue: real, simple, strictly extreme."""

    value: QuadExt
    interval: Interval
    block_k: int
    u_interval: Interval


@dataclass
class DominanceAnalysis:
    record: DominantRecord | None
    reason: str
    blocks: list[BlockEig] = field(default_factory=list)


def _blocks_of(m) -> tuple[list[BlockEig], RingMat2]:
    if isinstance(m, RegularRep):
        src = m.source
        if not isinstance(src, RingMat2):
            raise ValueError(
                "dominance analysis needs the 2x2 source of the representation")
        if m.kappa == 4:
            return [block_eig(src, k) for k in range(4)], src
        if m.kappa == 2:
            return [block_eig(src, k) for k in (0, 2)], src
        raise ValueError("dominance analysis supports kappa 2 and 4")
    if isinstance(m, RingMat2):
        return [block_eig(m, 0)], m
    raise TypeError(f"unsupported input {type(m).__name__}")


def analyze_dominance(m) -> DominanceAnalysis:
    blocks, src = _blocks_of(m)
    best = [blocks[0]]
    for blk in blocks[1:]:
        s = compare_u(blk, best[0])
        if s == Sign.POSITIVE:
            best = [blk]
        elif s == Sign.ZERO:
            best.append(blk)
    if len(best) > 1:
        return DominanceAnalysis(None, "double maximal eigenvalue", blocks)
    top = best[0]
    if top.mat_class in (MatClass.ELLIPTIC, MatClass.PARABOLIC):
        return DominanceAnalysis(None, "maximal modulus is 1", blocks)
    if top.mat_class == MatClass.LOXODROMIC:
        return DominanceAnalysis(None, "maximal eigenvalue is not real", blocks)
    eig = eigen2(src, top.k)
    rec = DominantRecord(value=eig.lam_dominant,
                         interval=eig.lam_dominant_interval,
                         block_k=top.k,
                         u_interval=top.u_interval())
    return DominanceAnalysis(rec, "dominant", blocks)


def dominant_eigenvalue(m) -> DominantRecord | None:
    """Dominant eigenvalue per the strict definition, or None."""
    return analyze_dominance(m).record


_BETA_POWERS = (ONE, QuarticElem(0, 1), QuarticElem(0, 0, 1), QuarticElem(0, 0, 0, 1))


def _beta_at(k: int, j: int) -> QuarticElem:
    """sigma_k(beta)^j for the real embeddings k = 0, 2."""
    v = _BETA_POWERS[j]
    return v if k == 0 or j % 2 == 0 else -v


def _lift_vec(w: tuple[QuadExt, QuadExt], k: int) -> tuple:
    """Right eigenvector of the block structure: (w1 * u, w2 * u) with
    u = (1, b^3/2, b^2/2, b/2) evaluated at sigma_k(beta)."""
    half = Fraction(1, 2)
    u = (ONE, _beta_at(k, 3) * half, _beta_at(k, 2) * half, _beta_at(k, 1) * half)
    return tuple(w[i] * QuadExt.of_base(c, w[0].d) for i in range(2) for c in u)


def _lift_covec(w: tuple[QuadExt, QuadExt], k: int) -> tuple:
    """Left eigenvector lift with u = (1, b, b^2, b^3) at sigma_k(beta)."""
    u = (ONE, _beta_at(k, 1), _beta_at(k, 2), _beta_at(k, 3))
    return tuple(w[i] * QuadExt.of_base(c, w[0].d) for i in range(2) for c in u)


@dataclass
class HyperbolicLikeData:
    """Attracting/repelling points and characteristic crosses.

    For dimension 2 the crosses degenerate to the opposite fixed points.
    For the 8x8 case the crosses are stored as left-eigenvector covectors;
    a point lies on the cross iff the covector annihilates it.
    """

    dim: int
    lam_max: DominantRecord
    lam_min_interval: Interval
    attracting: ProjPoint
    repelling: ProjPoint
    cross_plus: ProjPoint | tuple      # P(V_a): complement of the max eigenline
    cross_minus: ProjPoint | tuple     # P(V_b): complement of the min eigenline
    block_k: int


def _left_eigvec(view: RingMat2, lam: QuadExt) -> tuple[QuadExt, QuadExt]:
    d = lam.d
    b = QuadExt.of_base(view.e21, d)
    top = lam - QuadExt.of_base(view.e11, d)
    if not (b.is_zero() and top.is_zero()):
        return (b, top)
    return (lam - QuadExt.of_base(view.e22, d), QuadExt.of_base(view.e12, d))


def hyperbolic_like(m) -> HyperbolicLikeData | None:
    """Full north-south data when both m and its inverse are dominant."""
    if isinstance(m, RingMat2) and m.det().is_zero():
        raise SingularMatrix("input must be invertible")
    ana = analyze_dominance(m)
    if ana.record is None:
        return None
    blocks, src = _blocks_of(m)
    k = ana.record.block_k
    eig = eigen2(src, k)
    # determinant-one blocks: the same block carries both extreme moduli,
    # so dominance of the inverse comes along for free
    att2 = eig.vec_dominant
    rep2 = eig.vec_recessive
    if isinstance(m, RingMat2):
        return HyperbolicLikeData(
            dim=2,
            lam_max=ana.record,
            lam_min_interval=eig.lam_recessive_interval,
            attracting=ProjPoint(att2),
            repelling=ProjPoint(rep2),
            cross_plus=ProjPoint(rep2),
            cross_minus=ProjPoint(att2),
            block_k=k,
        )
    view = src.real_view(k)
    lam_dom, lam_rec = eig.lam_dominant, eig.lam_recessive
    att8 = ProjPoint(_lift_vec(att2, k))
    rep8 = ProjPoint(_lift_vec(rep2, k))
    cov_plus = _lift_covec(_left_eigvec(view, lam_dom), k)
    cov_minus = _lift_covec(_left_eigvec(view, lam_rec), k)
    return HyperbolicLikeData(
        dim=2 * m.kappa,
        lam_max=ana.record,
        lam_min_interval=eig.lam_recessive_interval,
        attracting=att8,
        repelling=rep8,
        cross_plus=cov_plus,
        cross_minus=cov_minus,
        block_k=k,
    )


def covector_annihilates(cov: tuple, p: ProjPoint) -> bool:
    acc = None
    for c, x in zip(cov, p.coords):
        acc = c * x if acc is None else acc + c * x
    return acc.sign() == Sign.ZERO


def power_data(data: HyperbolicLikeData, n: int) -> tuple[ProjPoint, ProjPoint]:
    """Attracting/repelling points of the n-th power: same pair, swapped
    when n is negative."""
    if n == 0:
        raise ValueError("powers of exponent zero have no fixed-point data")
    if n > 0:
        return data.attracting, data.repelling
    return data.repelling, data.attracting


# ---------------------------------------------------------------------------
# ping-pong on the projective line


@dataclass
class Ball:
    """Chordal ball with an exact center on the projective line."""

    name: str
    center: tuple[QuadExt, QuadExt]
    radius: Fraction

    def center_point(self) -> ProjPoint:
        return ProjPoint(self.center)

    def membership_sign(self, point: tuple) -> Sign:
        """Sign of chordal(p, c)^2 - r^2: NEGATIVE means strictly inside."""
        d = self.center[0].d
        p1 = point[0] if isinstance(point[0], QuadExt) else QuadExt.of_base(point[0], d)
        p2 = point[1] if isinstance(point[1], QuadExt) else QuadExt.of_base(point[1], d)
        c1, c2 = self.center
        cross = p1 * c2 - p2 * c1
        r2 = QuarticElem(self.radius * self.radius)
        val = cross * cross - (p1 * p1 + p2 * p2) * (c1 * c1 + c2 * c2) * QuadExt.of_base(r2, d)
        return val.sign()

    def excludes_chart_infinity(self, chart: str) -> bool:
        inf_point = (ZERO, ONE) if chart == "s" else (ONE, ZERO)
        return self.membership_sign(inf_point) == Sign.POSITIVE

    def to_json(self) -> dict:
        c1, c2 = self.center
        return {
            "name": self.name,
            "center": {
                "v1": {"a": c1.a.to_text(), "b": c1.b.to_text()},
                "v2": {"a": c2.a.to_text(), "b": c2.b.to_text()},
                "d": c1.d.to_text(),
            },
            "radius": str(self.radius),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Ball":
        d = QuarticElem.parse(obj["center"]["d"])
        c1 = QuadExt(QuarticElem.parse(obj["center"]["v1"]["a"]),
                     QuarticElem.parse(obj["center"]["v1"]["b"]), d)
        c2 = QuadExt(QuarticElem.parse(obj["center"]["v2"]["a"]),
                     QuarticElem.parse(obj["center"]["v2"]["b"]), d)
        return cls(obj["name"], (c1, c2), Fraction(obj["radius"]))


def _chart_point(chart: str, t: Fraction) -> tuple[QuarticElem, QuarticElem]:
    q = QuarticElem(t)
    return (ONE, q) if chart == "s" else (q, ONE)


def _image_pair(m: RingMat2, chart: str, t: Fraction) -> tuple[QuarticElem, QuarticElem]:
    v1, v2 = _chart_point(chart, t)
    return (m.e11 * v1 + m.e12 * v2, m.e21 * v1 + m.e22 * v2)


def _den_coeffs(m: RingMat2, chart: str, target_chart: str):
    """Linear denominator A + B t of the composed chart map."""
    if target_chart == "s":
        row = (m.e11, m.e12)
    else:
        row = (m.e21, m.e22)
    if chart == "s":
        return row[0], row[1]
    return row[1], row[0]


@dataclass
class Cell:
    chart: str
    lo: Fraction
    hi: Fraction
    target_chart: str = ""

    def to_json(self) -> dict:
        return {"chart": self.chart, "lo": str(self.lo), "hi": str(self.hi),
                "target_chart": self.target_chart}

    @classmethod
    def from_json(cls, obj: dict) -> "Cell":
        return cls(obj["chart"], Fraction(obj["lo"]), Fraction(obj["hi"]),
                   obj.get("target_chart", ""))


def _cell_pole_free(m: RingMat2, cell: Cell, target_chart: str) -> bool:
    a, b = _den_coeffs(m, cell.chart, target_chart)
    s_lo = (a + b * QuarticElem(cell.lo)).sign()
    s_hi = (a + b * QuarticElem(cell.hi)).sign()
    return s_lo != Sign.ZERO and s_lo == s_hi


def _certify_cell(m: RingMat2, cell: Cell, ball: Ball,
                  max_depth: int = 24) -> tuple[bool, list[Cell], str]:
    """Certify that the image of the cell lies strictly inside the ball.

    Returns (ok, leaf cells with chosen chart, failure reason).  Endpoint
    failures are final; pole collisions subdivide until the two chart
    poles separate.
    """
    stack = [(cell.chart, cell.lo, cell.hi, 0)]
    leaves: list[Cell] = []
    charts_ok = {c: ball.excludes_chart_infinity(c) for c in ("s", "u")}
    if not (charts_ok["s"] or charts_ok["u"]):
        return False, [], "ball is convex in no chart"
    while stack:
        chart, lo, hi, depth = stack.pop()
        for t in (lo, hi):
            img = _image_pair(m, chart, t)
            if ball.membership_sign(img) != Sign.NEGATIVE:
                return False, [], (
                    f"endpoint {chart}={t} maps outside ball {ball.name}")
        placed = False
        for tc in ("s", "u"):
            if charts_ok[tc] and _cell_pole_free(m, Cell(chart, lo, hi), tc):
                leaves.append(Cell(chart, lo, hi, tc))
                placed = True
                break
        if placed:
            continue
        if depth >= max_depth:
            return False, [], "subdivision depth exhausted"
        mid = (lo + hi) / 2
        stack.append((chart, lo, mid, depth + 1))
        stack.append((chart, mid, hi, depth + 1))
    return True, leaves, ""


def _recheck_cell(m: RingMat2, cell: Cell, ball: Ball) -> bool:
    if cell.target_chart not in ("s", "u"):
        return False
    if not ball.excludes_chart_infinity(cell.target_chart):
        return False
    if not _cell_pole_free(m, cell, cell.target_chart):
        return False
    for t in (cell.lo, cell.hi):
        img = _image_pair(m, cell.chart, t)
        if ball.membership_sign(img) != Sign.NEGATIVE:
            return False
    return True


def _cells_tile(cells: list[Cell], chart: str, lo: Fraction, hi: Fraction) -> bool:
    """The chart's cells must exactly tile [lo, hi]."""
    parts = sorted((c.lo, c.hi) for c in cells if c.chart == chart)
    if not parts:
        return lo >= hi
    if parts[0][0] != lo or parts[-1][1] != hi:
        return False
    for (a1, b1), (a2, b2) in zip(parts, parts[1:]):
        if b1 != a2:
            return False
    return True


@dataclass
class MappingCondition:
    name: str
    generator: str                     # "A" or "B"
    exponent: int
    region: tuple[Fraction, Fraction]  # removed or enclosing interval in chart s
    region_kind: str                   # "complement" or "interval"
    outer: Fraction                    # K for complement coverage
    target: str                        # ball name
    cells: list[Cell] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "generator": self.generator,
            "exponent": self.exponent,
            "region": [str(self.region[0]), str(self.region[1])],
            "region_kind": self.region_kind,
            "outer": str(self.outer),
            "target": self.target,
            "cells": [c.to_json() for c in self.cells],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MappingCondition":
        return cls(
            name=obj["name"],
            generator=obj["generator"],
            exponent=int(obj["exponent"]),
            region=(Fraction(obj["region"][0]), Fraction(obj["region"][1])),
            region_kind=obj["region_kind"],
            outer=Fraction(obj["outer"]),
            target=obj["target"],
            cells=[Cell.from_json(c) for c in obj["cells"]],
        )


@dataclass
class PingPongCertificate:
    """Finite data certifying that <A^m, B^k> is free and discrete for all
    m, k >= exponent."""

    exponent: int
    gen_a: RingMat2
    gen_b: RingMat2
    balls: dict[str, Ball]
    conditions: list[MappingCondition]
    basepoint: Fraction
    disjointness_bits: int

    def to_json(self) -> dict:
        return {
            "N": self.exponent,
            "generator_a": self.gen_a.to_text(),
            "generator_b": self.gen_b.to_text(),
            "balls": [self.balls[k].to_json() for k in sorted(self.balls)],
            "basepoint": str(self.basepoint),
            "disjointness_bits": self.disjointness_bits,
            "checked_conditions": [c.to_json() for c in self.conditions],
            "cover_cells": sum(len(c.cells) for c in self.conditions),
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=False)

    @classmethod
    def from_json(cls, obj: dict) -> "PingPongCertificate":
        balls = {b["name"]: Ball.from_json(b) for b in obj["balls"]}
        return cls(
            exponent=int(obj["N"]),
            gen_a=RingMat2.parse(obj["generator_a"]),
            gen_b=RingMat2.parse(obj["generator_b"]),
            balls=balls,
            conditions=[MappingCondition.from_json(c)
                        for c in obj["checked_conditions"]],
            basepoint=Fraction(obj["basepoint"]),
            disjointness_bits=int(obj["disjointness_bits"]),
        )


def _fixed_point_balls(a: RingMat2, b: RingMat2, rho: Fraction) -> dict[str, Ball]:
    ea = eigen2(a, 0)
    eb = eigen2(b, 0)
    return {
        "A_att": Ball("A_att", ea.vec_dominant, rho),
        "A_rep": Ball("A_rep", ea.vec_recessive, rho),
        "B_att": Ball("B_att", eb.vec_dominant, rho),
        "B_rep": Ball("B_rep", eb.vec_recessive, rho),
    }


def _balls_disjoint(balls: dict[str, Ball], bits: int) -> bool:
    names = sorted(balls)
    for i, n1 in enumerate(names):
        for n2 in names[i + 1:]:
            b1, b2 = balls[n1], balls[n2]
            d = proj_dist(b1.center_point(), b2.center_point(), bits)
            if not d.lo > b1.radius + b2.radius:
                return False
    return True


def _point_outside_all(t: Fraction, balls: dict[str, Ball]) -> bool:
    pt = (ONE, QuarticElem(t))
    return all(b.membership_sign(pt) == Sign.POSITIVE for b in balls.values())


def _dyadic_near(x: Fraction, bits: int = 24) -> Fraction:
    return Fraction(round(x * (1 << bits)), 1 << bits)


def _ball_slope_window(ball: Ball, bits: int = 96) -> tuple[Fraction, Fraction] | None:
    """Dyadic estimates (lo, hi) of the ball's extent in the slope chart."""
    c1, c2 = ball.center
    if not ball.excludes_chart_infinity("s"):
        return None
    s_iv = None
    b = bits
    c1_iv = c1.interval(b)
    c2_iv = c2.interval(b)
    if c1_iv.contains_zero():
        return None
    s_iv = Interval(min(c2_iv.lo / c1_iv.lo, c2_iv.lo / c1_iv.hi,
                        c2_iv.hi / c1_iv.lo, c2_iv.hi / c1_iv.hi),
                    max(c2_iv.lo / c1_iv.lo, c2_iv.lo / c1_iv.hi,
                        c2_iv.hi / c1_iv.lo, c2_iv.hi / c1_iv.hi))
    # chordal radius r around slope s0 spans roughly r * (1 + s0^2) in slope
    spread = ball.radius * (1 + max(abs(s_iv.lo), abs(s_iv.hi)) ** 2) * 2
    return (s_iv.lo - spread, s_iv.hi + spread)


def _inner_interval(ball: Ball) -> tuple[Fraction, Fraction] | None:
    """Rational interval strictly inside the ball (in the slope chart)."""
    win = _ball_slope_window(ball)
    if win is None:
        return None
    lo_w, hi_w = win
    mid = (lo_w + hi_w) / 2
    half = (hi_w - lo_w) / 2
    for shrink in (Fraction(3, 4), Fraction(1, 2), Fraction(1, 4),
                   Fraction(1, 8), Fraction(1, 32)):
        lo = _dyadic_near(mid - half * shrink)
        hi = _dyadic_near(mid + half * shrink)
        if lo >= hi:
            continue
        p_lo = (ONE, QuarticElem(lo))
        p_hi = (ONE, QuarticElem(hi))
        if (ball.membership_sign(p_lo) == Sign.NEGATIVE
                and ball.membership_sign(p_hi) == Sign.NEGATIVE):
            return lo, hi
    return None


def _outer_interval(ball: Ball) -> tuple[Fraction, Fraction] | None:
    """Rational interval strictly containing the ball (slope chart)."""
    win = _ball_slope_window(ball)
    if win is None:
        return None
    lo_w, hi_w = win
    mid = (lo_w + hi_w) / 2
    half = (hi_w - lo_w) / 2
    c1, c2 = ball.center
    for grow in (Fraction(5, 4), Fraction(3, 2), Fraction(2), Fraction(3)):
        lo = _dyadic_near(mid - half * grow)
        hi = _dyadic_near(mid + half * grow)
        p_lo = (ONE, QuarticElem(lo))
        p_hi = (ONE, QuarticElem(hi))
        if (ball.membership_sign(p_lo) != Sign.POSITIVE
                or ball.membership_sign(p_hi) != Sign.POSITIVE):
            continue
        # endpoints strictly outside; center must sit between them
        s_lo = (c2 - c1 * QuarticElem(lo)).sign()
        s_hi = (c2 - c1 * QuarticElem(hi)).sign()
        if s_lo != s_hi and Sign.ZERO not in (s_lo, s_hi):
            return lo, hi
    return None


def _complement_cells(removed: tuple[Fraction, Fraction],
                      outer: Fraction) -> list[Cell]:
    lo, hi = removed
    inv = Fraction(1) / outer
    return [Cell("s", hi, outer), Cell("s", -outer, lo), Cell("u", -inv, inv)]


def _certify_condition(m: RingMat2, cond: MappingCondition,
                       balls: dict[str, Ball]) -> tuple[bool, str]:
    target = balls[cond.target]
    if cond.region_kind == "complement":
        roots = _complement_cells(cond.region, cond.outer)
    else:
        roots = [Cell("s", cond.region[0], cond.region[1])]
    all_leaves: list[Cell] = []
    for root in roots:
        ok, leaves, reason = _certify_cell(m, root, target)
        if not ok:
            return False, f"{cond.name}: {reason}"
        all_leaves.extend(leaves)
    cond.cells = all_leaves
    return True, ""


def _recheck_condition(m: RingMat2, cond: MappingCondition,
                       balls: dict[str, Ball]) -> bool:
    target = balls[cond.target]
    lo, hi = cond.region
    if cond.region_kind == "complement":
        inv = Fraction(1) / cond.outer
        if cond.outer < max(abs(lo), abs(hi)):
            return False
        s_cells = [c for c in cond.cells if c.chart == "s"]
        u_cells = [c for c in cond.cells if c.chart == "u"]
        right = [c for c in s_cells if c.lo >= hi]
        left = [c for c in s_cells if c.hi <= lo]
        if len(right) + len(left) != len(s_cells):
            return False
        if not _cells_tile(right, "s", hi, cond.outer):
            return False
        if not _cells_tile(left, "s", -cond.outer, lo):
            return False
        if not _cells_tile(u_cells, "u", -inv, inv):
            return False
    else:
        if not _cells_tile(cond.cells, "s", lo, hi):
            return False
    return all(_recheck_cell(m, c, target) for c in cond.cells)


def _region_membership_ok(cond: MappingCondition, balls: dict[str, Ball],
                          source_ball: str) -> bool:
    """Removed intervals sit inside their ball; enclosing intervals contain it."""
    ball = balls[source_ball]
    lo, hi = cond.region
    p_lo = (ONE, QuarticElem(lo))
    p_hi = (ONE, QuarticElem(hi))
    if not ball.excludes_chart_infinity("s"):
        # both region kinds reason about the ball as a slope-chart interval
        return False
    if cond.region_kind == "complement":
        return (ball.membership_sign(p_lo) == Sign.NEGATIVE
                and ball.membership_sign(p_hi) == Sign.NEGATIVE)
    if (ball.membership_sign(p_lo) != Sign.POSITIVE
            or ball.membership_sign(p_hi) != Sign.POSITIVE):
        return False
    c1, c2 = ball.center
    s_lo = (c2 - c1 * QuarticElem(lo)).sign()
    s_hi = (c2 - c1 * QuarticElem(hi)).sign()
    return s_lo != s_hi and Sign.ZERO not in (s_lo, s_hi)


_SOURCE_BALL = {
    "A_pos": "A_rep", "A_neg": "A_att", "B_pos": "B_rep", "B_neg": "B_att",
    "A_att_step": "A_att", "A_rep_step": "A_rep",
    "B_att_step": "B_att", "B_rep_step": "B_rep",
}

_TARGET_BALL = {
    "A_pos": "A_att", "A_neg": "A_rep", "B_pos": "B_att", "B_neg": "B_rep",
    "A_att_step": "A_att", "A_rep_step": "A_rep",
    "B_att_step": "B_att", "B_rep_step": "B_rep",
}


def _condition_matrix(cert_a: RingMat2, cert_b: RingMat2,
                      cond: MappingCondition) -> RingMat2:
    g = cert_a if cond.generator == "A" else cert_b
    return g ** cond.exponent


def _build_certificate(a: RingMat2, b: RingMat2, n: int,
                       rho: Fraction) -> PingPongCertificate | None:
    balls = _fixed_point_balls(a, b, rho)
    bits = DEFAULT_BITS
    ok = False
    while bits <= 1024:
        if _balls_disjoint(balls, bits):
            ok = True
            break
        bits *= 2
    if not ok:
        return None
    basepoint = None
    for cand in (Fraction(0), Fraction(1), Fraction(-1), Fraction(2),
                 Fraction(-2), Fraction(1, 2), Fraction(-1, 2), Fraction(3),
                 Fraction(10), Fraction(-10)):
        if _point_outside_all(cand, balls):
            basepoint = cand
            break
    if basepoint is None:
        return None

    conditions = []
    spec = [
        ("A_pos", "A", n), ("A_neg", "A", -n),
        ("B_pos", "B", n), ("B_neg", "B", -n),
        ("A_att_step", "A", 1), ("A_rep_step", "A", -1),
        ("B_att_step", "B", 1), ("B_rep_step", "B", -1),
    ]
    for name, gen, expo in spec:
        source = _SOURCE_BALL[name]
        target = _TARGET_BALL[name]
        if name.endswith("_step"):
            region = _outer_interval(balls[source])
            kind = "interval"
        else:
            region = _inner_interval(balls[source])
            kind = "complement"
        if region is None:
            return None
        outer = Fraction(1)
        if kind == "complement":
            bound = max(abs(region[0]), abs(region[1]), Fraction(4))
            outer = Fraction(2 ** (bound.numerator // bound.denominator).bit_length() * 2)
        cond = MappingCondition(name=name, generator=gen, exponent=expo,
                                region=region, region_kind=kind, outer=outer,
                                target=target)
        if not _region_membership_ok(cond, balls, source):
            return None
        m = _condition_matrix(a, b, cond)
        good, _reason = _certify_condition(m, cond, balls)
        if not good:
            return None
        conditions.append(cond)
    return PingPongCertificate(
        exponent=n, gen_a=a, gen_b=b, balls=balls, conditions=conditions,
        basepoint=basepoint, disjointness_bits=bits)


def verify_certificate(cert: PingPongCertificate) -> tuple[bool, list[str]]:
    """Standalone re-validation from the certificate data alone."""
    problems: list[str] = []
    a, b = cert.gen_a, cert.gen_b
    expected = _fixed_point_balls(a, b, Fraction(1))
    for name, ball in cert.balls.items():
        if name not in expected:
            problems.append(f"unknown ball {name}")
            continue
        if not proj_equal(ball.center_point(), expected[name].center_point()):
            problems.append(f"ball {name} center is not the eigenvector point")
        if ball.radius <= 0:
            problems.append(f"ball {name} has nonpositive radius")
    if not _balls_disjoint(cert.balls, cert.disjointness_bits):
        problems.append("balls are not certified pairwise disjoint")
    if not _point_outside_all(cert.basepoint, cert.balls):
        problems.append("basepoint is not outside every ball")
    names = {c.name for c in cert.conditions}
    if names != set(_SOURCE_BALL):
        problems.append(f"conditions missing: {sorted(set(_SOURCE_BALL) - names)}")
    for cond in cert.conditions:
        if abs(cond.exponent) not in (1, cert.exponent):
            problems.append(f"{cond.name}: exponent {cond.exponent} unexpected")
            continue
        if not _region_membership_ok(cond, cert.balls, _SOURCE_BALL[cond.name]):
            problems.append(f"{cond.name}: region/ball relation fails")
            continue
        if cond.target != _TARGET_BALL[cond.name]:
            problems.append(f"{cond.name}: wrong target ball")
            continue
        m = _condition_matrix(a, b, cond)
        if not _recheck_condition(m, cond, cert.balls):
            problems.append(f"{cond.name}: cell verification fails")
    return (not problems), problems


def _validate_pingpong_pair(a: RingMat2, b: RingMat2) -> Fraction:
    """Hypothesis checks; returns a certified lower bound on the minimal
    pairwise distance of the four fixed points."""
    for m, label in ((a, "first"), (b, "second")):
        if classify(m, 0) != MatClass.HYPERBOLIC:
            raise NotHyperbolicLike(f"{label} input is not hyperbolic")
    if share_eigenvector(a, b, 0):
        raise HypothesisViolated("fixed-point sets intersect")
    balls_probe = _fixed_point_balls(a, b, Fraction(1, 4))
    sep = None
    for bits in (64, 128, 256, 512):
        try:
            vals = []
            names = sorted(balls_probe)
            for i, n1 in enumerate(names):
                for n2 in names[i + 1:]:
                    vals.append(proj_dist(balls_probe[n1].center_point(),
                                          balls_probe[n2].center_point(), bits).lo)
            sep = min(vals)
            if sep > 0:
                break
        except UndecidedComparison:
            continue
    if sep is None or sep <= 0:
        raise HypothesisViolated("fixed points too close to separate")
    return sep


def certify_exponent(a: RingMat2, b: RingMat2, n: int,
                     sep: Fraction | None = None) -> PingPongCertificate | None:
    """Certificate at the given exponent, or None; the radius ladder starts
    at a quarter of the fixed-point separation."""
    if n < 1:
        raise ValueError("exponent must be at least 1")
    if sep is None:
        sep = _validate_pingpong_pair(a, b)
    rho = _dyadic_near(sep / 4)
    for _ in range(6):
        if rho <= 0:
            break
        cert = _build_certificate(a, b, n, rho)
        if cert is not None:
            return cert
        rho = rho / 2
    return None


def pingpong_exponent(a: RingMat2, b: RingMat2,
                      max_exponent: int = 1 << 16) -> PingPongCertificate:
    """Smallest certified exponent via doubling-then-bisection search."""
    sep = _validate_pingpong_pair(a, b)
    n = 1
    cert = None
    while n <= max_exponent:
        cert = certify_exponent(a, b, n, sep)
        if cert is not None:
            break
        n *= 2
    if cert is None:
        raise SearchOverflow(f"no certificate up to exponent {max_exponent}")
    lo, hi = max(1, n // 2), n
    best = cert
    while lo < hi:
        mid = (lo + hi) // 2
        c = certify_exponent(a, b, mid, sep)
        if c is not None:
            best = c
            hi = mid
        else:
            lo = mid + 1
    return best


# ---------------------------------------------------------------------------
# commutation and freeness wrappers


@dataclass
class NoncommutingResult:
    holds: bool
    reason: str
    commutator_nontrivial: bool | None = None

    def __bool__(self) -> bool:
        return self.holds


def noncommuting_check(a: RingMat2, b: RingMat2) -> NoncommutingResult:
    """North-south dynamics criterion for AB != BA on the projective line."""
    da = hyperbolic_like(a)
    db = hyperbolic_like(b)
    if da is None or db is None:
        return NoncommutingResult(False, "inputs are not hyperbolic-like")
    if share_eigenvector(a, b, 0):
        return NoncommutingResult(False, "shared fixed point")
    for pt in (db.attracting, db.repelling):
        image = ProjPoint((
            QuadExt.of_base(a.e11, pt.coords[0].d) * pt.coords[0]
            + QuadExt.of_base(a.e12, pt.coords[0].d) * pt.coords[1],
            QuadExt.of_base(a.e21, pt.coords[0].d) * pt.coords[0]
            + QuadExt.of_base(a.e22, pt.coords[0].d) * pt.coords[1],
        ))
        if proj_equal(image, db.attracting) or proj_equal(image, db.repelling):
            return NoncommutingResult(
                False, "first matrix preserves the fixed pair of the second")
    nontrivial = not a.commutator(b).is_identity()
    if not nontrivial:
        return NoncommutingResult(
            False, "hypotheses held but the commutator is trivial", False)
    return NoncommutingResult(True, "north-south dynamics forces AB != BA", True)


@dataclass
class FreePairResult:
    exponent: int
    certificate: PingPongCertificate


def free_pair_power(a: RingMat2, b: RingMat2) -> FreePairResult:
    """Exponent N such that <a^m, b^m> is free for all m >= N, found through
    the third Galois view where both generators act hyperbolically."""
    for m, label in ((a, "first"), (b, "second")):
        if classify(m, 2) != MatClass.HYPERBOLIC:
            raise NotHyperbolicLike(
                f"{label} generator is not hyperbolic in the sigma2 view")
    if share_eigenvector(a, b, 2):
        raise HypothesisViolated("sigma2 views share an eigenvector")
    cert = pingpong_exponent(a.real_view(2), b.real_view(2))
    return FreePairResult(cert.exponent, cert)
