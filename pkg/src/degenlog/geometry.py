"""Domains, moving vanishing sets, distance fields and the logistic coefficient.

The vanishing set K(t) is described declaratively (static, ball with a radius
schedule, rotating sector, jumping pair, rigid translation of a template) and
realized as a concrete ``SetShape`` snapshot at any time.  The logistic
coefficient n(t, x) is built from the distance to K(t) through a ``NuProfile``
so that it vanishes exactly on K(t) and is bounded below by a strictly
increasing function of the distance elsewhere.

All values are immutable after construction; every operation is a pure
function of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DomainSpec",
    "SetShape",
    "RadiusSchedule",
    "PathSchedule",
    "AngleSchedule",
    "StaticSet",
    "RadiusBall",
    "RotatingSector",
    "JumpingSets",
    "TranslatingSet",
    "NuProfile",
    "snapshot",
    "distance_to_set",
    "evaluate_n",
    "union_over_interval",
    "k_sup",
    "k_inf",
    "validate_inside_domain",
]


def _as_points(x) -> np.ndarray:
    """Coerce a point or an (M, d) batch of points to a 2-d float array."""
    a = np.asarray(x, dtype=float)
    if a.ndim == 1:
        a = a[None, :]
    return a


# ---------------------------------------------------------------------------
# Domain
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DomainSpec:
    """Bounded habitat domain: an axis-aligned rectangle/interval or a disc."""

    kind: str  # "rectangle" | "disc"
    lo: tuple = ()
    hi: tuple = ()
    center: tuple = ()
    radius: float = 0.0

    @staticmethod
    def rectangle(lo, hi) -> "DomainSpec":
        lo = tuple(float(v) for v in lo)
        hi = tuple(float(v) for v in hi)
        if len(lo) != len(hi) or len(lo) not in (1, 2):
            raise ValueError("rectangle needs matching 1-d or 2-d corners")
        if any(a >= b for a, b in zip(lo, hi)):
            raise ValueError("rectangle corners must satisfy lo < hi componentwise")
        return DomainSpec(kind="rectangle", lo=lo, hi=hi)

    @staticmethod
    def interval(a: float, b: float) -> "DomainSpec":
        return DomainSpec.rectangle((a,), (b,))

    @staticmethod
    def disc(center, radius: float) -> "DomainSpec":
        center = tuple(float(v) for v in center)
        if len(center) != 2:
            raise ValueError("disc domains are 2-d")
        if radius <= 0:
            raise ValueError("disc radius must be positive")
        return DomainSpec(kind="disc", center=center, radius=float(radius))

    @property
    def dim(self) -> int:
        return len(self.lo) if self.kind == "rectangle" else 2

    def bounding_box(self):
        if self.kind == "rectangle":
            return np.array(self.lo), np.array(self.hi)
        c = np.array(self.center)
        return c - self.radius, c + self.radius

    def interior_margin(self, points) -> np.ndarray:
        """Distance of each point to the domain boundary (negative outside)."""
        p = _as_points(points)
        if self.kind == "rectangle":
            lo, hi = np.array(self.lo), np.array(self.hi)
            return np.minimum((p - lo).min(axis=1), (hi - p).min(axis=1))
        return self.radius - np.linalg.norm(p - np.array(self.center), axis=1)

    def contains(self, points) -> np.ndarray:
        return self.interior_margin(points) > 0.0


# ---------------------------------------------------------------------------
# Set shapes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SetShape:
    """A compact set: ball, circular sector, point, empty, union, intersection.

    Distances are exact Euclidean distances for every kind except
    ``intersection``, where the reported value is ``max`` over the parts: a
    lower bound that is zero exactly on the intersection, which is all the
    mask machinery needs.
    """

    kind: str  # "ball" | "sector" | "point" | "empty" | "union" | "intersection"
    center: tuple = ()
    radius: float = 0.0
    theta0: float = 0.0
    theta1: float = 0.0
    parts: tuple = ()

    @staticmethod
    def ball(center, radius: float) -> "SetShape":
        if radius < 0:
            raise ValueError("ball radius must be nonnegative")
        return SetShape(kind="ball", center=tuple(float(v) for v in center),
                        radius=float(radius))

    @staticmethod
    def sector(center, r0: float, theta0: float, theta1: float) -> "SetShape":
        if r0 <= 0:
            raise ValueError("sector radius must be positive")
        if not theta0 < theta1:
            raise ValueError("sector needs theta0 < theta1")
        return SetShape(kind="sector", center=tuple(float(v) for v in center),
                        radius=float(r0), theta0=float(theta0), theta1=float(theta1))

    @staticmethod
    def point(p) -> "SetShape":
        return SetShape(kind="point", center=tuple(float(v) for v in p))

    @staticmethod
    def empty() -> "SetShape":
        return SetShape(kind="empty")

    @staticmethod
    def union(parts) -> "SetShape":
        parts = tuple(p for p in parts if not p.is_empty)
        if not parts:
            return SetShape.empty()
        if len(parts) == 1:
            return parts[0]
        return SetShape(kind="union", parts=parts)

    @staticmethod
    def intersection(parts) -> "SetShape":
        parts = tuple(parts)
        if any(p.is_empty for p in parts):
            return SetShape.empty()
        if len(parts) == 1:
            return parts[0]
        return SetShape(kind="intersection", parts=parts)

    @property
    def is_empty(self) -> bool:
        return self.kind == "empty"

    @property
    def dim(self) -> int:
        if self.kind in ("union", "intersection"):
            return self.parts[0].dim
        return len(self.center)

    def distance(self, points) -> np.ndarray:
        p = _as_points(points)
        if self.kind == "empty":
            raise ValueError("distance to the empty set is undefined")
        if self.kind == "ball":
            d = np.linalg.norm(p - np.array(self.center), axis=1) - self.radius
            return np.maximum(d, 0.0)
        if self.kind == "point":
            return np.linalg.norm(p - np.array(self.center), axis=1)
        if self.kind == "sector":
            return _sector_distance(p, self.center, self.radius,
                                    self.theta0, self.theta1)
        if self.kind == "union":
            return np.min([part.distance(p) for part in self.parts], axis=0)
        # intersection: lower bound, exact membership indicator
        return np.max([part.distance(p) for part in self.parts], axis=0)

    def translated(self, v) -> "SetShape":
        v = np.asarray(v, dtype=float)
        if self.kind == "empty":
            return self
        if self.kind in ("union", "intersection"):
            return SetShape(kind=self.kind,
                            parts=tuple(s.translated(v) for s in self.parts))
        return SetShape(kind=self.kind, center=tuple(np.array(self.center) + v),
                        radius=self.radius, theta0=self.theta0, theta1=self.theta1)

    def rotated(self, angle: float) -> "SetShape":
        """Rotate about the origin (2-d only; 1-d shapes reject nonzero angles)."""
        if angle == 0.0 or self.kind == "empty":
            return self
        if self.dim != 2:
            raise ValueError("rotation needs a 2-d shape")
        if self.kind in ("union", "intersection"):
            return SetShape(kind=self.kind,
                            parts=tuple(s.rotated(angle) for s in self.parts))
        c, s = math.cos(angle), math.sin(angle)
        x, y = self.center
        center = (c * x - s * y, s * x + c * y)
        if self.kind == "sector":
            return SetShape(kind="sector", center=center, radius=self.radius,
                            theta0=self.theta0 + angle, theta1=self.theta1 + angle)
        return SetShape(kind=self.kind, center=center, radius=self.radius)

    def bounding_radius(self, about) -> float:
        """Radius of a ball about ``about`` containing the shape."""
        a = np.asarray(about, dtype=float)
        if self.kind == "empty":
            return 0.0
        if self.kind in ("union", "intersection"):
            return max(s.bounding_radius(a) for s in self.parts)
        d = float(np.linalg.norm(np.array(self.center) - a))
        return d + self.radius


def _segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distance from points p (M, 2) to the segment [a, b]."""
    ab = b - a
    denom = float(ab @ ab)
    t = np.clip((p - a) @ ab / denom, 0.0, 1.0) if denom > 0 else np.zeros(len(p))
    proj = a + t[:, None] * ab
    return np.linalg.norm(p - proj, axis=1)


def _sector_distance(p, center, r0, theta0, theta1) -> np.ndarray:
    """Exact distance to a filled circular sector by case split.

    Points whose polar angle falls inside [theta0, theta1] (mod 2 pi) see the
    arc face; all others see the nearest radial face.
    """
    q = p - np.array(center)
    rho = np.linalg.norm(q, axis=1)
    phi = np.arctan2(q[:, 1], q[:, 0])
    width = theta1 - theta0
    if width >= 2.0 * math.pi:
        return np.maximum(rho - r0, 0.0)
    rel = np.mod(phi - theta0, 2.0 * math.pi)
    inside_wedge = rel <= width
    d = np.empty(len(q))
    d[inside_wedge] = np.maximum(rho[inside_wedge] - r0, 0.0)
    out = ~inside_wedge
    if np.any(out):
        o = np.zeros(2)
        e0 = r0 * np.array([math.cos(theta0), math.sin(theta0)])
        e1 = r0 * np.array([math.cos(theta1), math.sin(theta1)])
        d0 = _segment_distance(q[out], o, e0)
        d1 = _segment_distance(q[out], o, e1)
        d[out] = np.minimum(d0, d1)
    return d


# ---------------------------------------------------------------------------
# Schedules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadiusSchedule:
    """Time law for a ball radius.

    kinds: ``constant`` r0; ``harmonic_shrink`` r0/(t+1); ``approach``
    r0*(1 - 1/(t+1)); ``oscillating`` r0*(1 + |sin(omega t)|).
    """

    kind: str
    r0: float
    omega: float = 0.0

    def radius(self, t: float) -> float:
        if self.kind == "constant":
            return self.r0
        if self.kind == "harmonic_shrink":
            return self.r0 / (t + 1.0)
        if self.kind == "approach":
            return self.r0 * (1.0 - 1.0 / (t + 1.0))
        if self.kind == "oscillating":
            return self.r0 * (1.0 + abs(math.sin(self.omega * t)))
        raise ValueError(f"unknown radius schedule {self.kind!r}")

    def max_radius(self) -> float:
        if self.kind in ("constant", "harmonic_shrink"):
            return self.r0
        if self.kind == "approach":
            return self.r0
        return 2.0 * self.r0

    def min_radius(self, ta: float, tb: float) -> float:
        """Exact infimum of the radius over [ta, tb]."""
        if self.kind == "constant":
            return self.r0
        if self.kind == "harmonic_shrink":
            return self.r0 / (tb + 1.0)
        if self.kind == "approach":
            return self.r0 * (1.0 - 1.0 / (ta + 1.0))
        if self.kind == "oscillating":
            # |sin(omega t)| vanishes at multiples of pi/omega; otherwise the
            # minimum over the interval sits at an endpoint.
            if self.omega != 0.0:
                half = math.pi / abs(self.omega)
                if math.floor(tb / half) >= math.ceil(ta / half):
                    return self.r0
            return min(self.radius(ta), self.radius(tb))
        raise ValueError(f"unknown radius schedule {self.kind!r}")


@dataclass(frozen=True)
class PathSchedule:
    """Curve gamma(t) carrying a translated template."""

    kind: str  # "fixed" | "circle" | "line"
    point: tuple = ()
    center: tuple = ()
    radius: float = 0.0
    omega: float = 0.0
    phase: float = 0.0
    velocity: tuple = ()

    def position(self, t: float) -> np.ndarray:
        if self.kind == "fixed":
            return np.array(self.point, dtype=float)
        if self.kind == "circle":
            a = self.omega * t + self.phase
            return np.array(self.center) + self.radius * np.array(
                [math.cos(a), math.sin(a)])
        if self.kind == "line":
            return np.array(self.point) + t * np.array(self.velocity)
        raise ValueError(f"unknown path schedule {self.kind!r}")

    def max_speed(self) -> float:
        if self.kind == "fixed":
            return 0.0
        if self.kind == "circle":
            return abs(self.omega) * self.radius
        return float(np.linalg.norm(self.velocity))


@dataclass(frozen=True)
class AngleSchedule:
    """Rigid rotation angle as a function of time."""

    kind: str = "none"  # "none" | "uniform"
    omega: float = 0.0
    phase: float = 0.0

    def angle(self, t: float) -> float:
        if self.kind == "none":
            return 0.0
        if self.kind == "uniform":
            return self.phase + self.omega * t
        raise ValueError(f"unknown angle schedule {self.kind!r}")


# ---------------------------------------------------------------------------
# Moving set variants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StaticSet:
    base: SetShape

    def snapshot(self, t: float) -> SetShape:
        return self.base


@dataclass(frozen=True)
class RadiusBall:
    center: tuple
    schedule: RadiusSchedule

    def snapshot(self, t: float) -> SetShape:
        r = self.schedule.radius(t)
        if r <= 0.0:
            return SetShape.point(self.center)
        return SetShape.ball(self.center, r)


@dataclass(frozen=True)
class RotatingSector:
    """Sector of fixed radius spinning clockwise at angular speed omega."""

    center: tuple
    r0: float
    theta0: float
    theta1: float
    omega: float

    def snapshot(self, t: float) -> SetShape:
        return SetShape.sector(self.center, self.r0,
                               self.theta0 - self.omega * t,
                               self.theta1 - self.omega * t)


@dataclass(frozen=True)
class JumpingSets:
    """K(t) = k0 on (n*period, n*period + t1], k1 on the rest of each period."""

    k0: SetShape
    k1: SetShape
    period: float
    t1: float

    def __post_init__(self):
        if not 0.0 < self.t1 < self.period:
            raise ValueError("jump time t1 must lie in (0, period)")

    def snapshot(self, t: float) -> SetShape:
        s = math.fmod(t, self.period)
        if s < 0:
            s += self.period
        return self.k0 if 0.0 < s <= self.t1 else self.k1

    def jump_times(self, t_end: float):
        """All jump instants in (0, t_end]."""
        times = []
        n = 0
        while n * self.period < t_end:
            for tj in (n * self.period + self.t1, (n + 1) * self.period):
                if 0.0 < tj <= t_end:
                    times.append(tj)
            n += 1
        return times


@dataclass(frozen=True)
class TranslatingSet:
    """Rigid motion of a template: K(t) = gamma(t) + R(t) K0."""

    template: SetShape
    curve: PathSchedule
    rotation: AngleSchedule = field(default_factory=AngleSchedule)

    def snapshot(self, t: float) -> SetShape:
        return self.template.rotated(self.rotation.angle(t)).translated(
            self.curve.position(t))


MovingSet = StaticSet | RadiusBall | RotatingSector | JumpingSets | TranslatingSet


def snapshot(spec, t: float) -> SetShape:
    """Realized compact set K(t) (possibly empty)."""
    return spec.snapshot(t)


def distance_to_set(x, s: SetShape):
    """Euclidean distance from x (a point or an (M, d) batch) to the set."""
    if s.is_empty:
        raise ValueError("distance to the empty set is undefined")
    d = s.distance(x)
    return float(d[0]) if np.asarray(x).ndim == 1 else d


# ---------------------------------------------------------------------------
# Logistic coefficient
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NuProfile:
    """Lower profile for n as a function of distance to K(t).

    ``saturating`` gives nu(d) = nu_max * (1 - exp(-d / d_ramp)), strictly
    increasing with nu(0) = 0.  ``indicator`` gives level * 1_{d > 0}, which
    dominates the saturating profile with nu_max = level.  ``n_empty`` is the
    constant value used whenever K(t) is empty.
    """

    kind: str  # "saturating" | "indicator"
    nu_max: float = 1.0
    d_ramp: float = 0.1
    n_empty: float = 1.0

    def __post_init__(self):
        if self.nu_max <= 0 or self.n_empty <= 0:
            raise ValueError("nu_max and n_empty must be positive")
        if self.kind == "saturating" and self.d_ramp <= 0:
            raise ValueError("saturating profile needs d_ramp > 0")
        if self.kind not in ("saturating", "indicator"):
            raise ValueError(f"unknown nu profile {self.kind!r}")

    def value(self, d):
        d = np.asarray(d, dtype=float)
        if self.kind == "saturating":
            return self.nu_max * (1.0 - np.exp(-d / self.d_ramp))
        return np.where(d > 0.0, self.nu_max, 0.0)


def evaluate_n(spec, nu: NuProfile, t: float, x):
    """Logistic coefficient n(t, x); zero exactly on K(t)."""
    shape = snapshot(spec, t)
    p = _as_points(x)
    if shape.is_empty:
        out = np.full(len(p), nu.n_empty)
    else:
        out = nu.value(shape.distance(p))
    return float(out[0]) if np.asarray(x).ndim == 1 else out


# ---------------------------------------------------------------------------
# Time envelopes of the moving set
# ---------------------------------------------------------------------------


def _sample_times(ta: float, tb: float, sample_dt: float) -> np.ndarray:
    n = max(int(math.ceil((tb - ta) / sample_dt)), 1)
    return np.linspace(ta, tb, n + 1)


def union_over_interval(spec, ta: float, tb: float, sample_dt: float) -> SetShape:
    """Union of snapshots sampled on [ta, tb] at spacing sample_dt.

    A conservative discrete surrogate for the continuous union; callers pick
    sample_dt small against the set's speed and add one grid cell of dilation
    where a superset is required.
    """
    if not ta < tb:
        raise ValueError("need ta < tb")
    if sample_dt <= 0:
        raise ValueError("sample_dt must be positive")
    shapes = []
    for t in _sample_times(ta, tb, sample_dt):
        s = snapshot(spec, t)
        if not s.is_empty and s not in shapes:
            shapes.append(s)
    return SetShape.union(shapes)


def default_sample_dt(tau0: float) -> float:
    return min(0.01, tau0 / 50.0) if tau0 > 0 else 0.01


def k_sup(spec, tau0: float, horizon: float, sample_dt: float) -> SetShape:
    """Finite-horizon surrogate of the closed union of K(t) over t >= tau0."""
    if not horizon > tau0:
        raise ValueError("horizon must exceed tau0")
    return union_over_interval(spec, tau0, horizon, sample_dt)


def k_inf(spec, tau0: float, horizon: float, sample_dt: float) -> SetShape:
    """Finite-horizon surrogate of the intersection of K(t) over t >= tau0.

    Structured variants use exact or conservative closed forms; the generic
    fallback is an intersection node over sampled snapshots (mask-level
    queries only).
    """
    if not horizon > tau0:
        raise ValueError("horizon must exceed tau0")
    if isinstance(spec, StaticSet):
        return spec.base
    if isinstance(spec, RadiusBall):
        rmin = spec.schedule.min_radius(tau0, horizon)
        if rmin <= 0.0:
            return SetShape.point(spec.center)
        return SetShape.ball(spec.center, rmin)
    if isinstance(spec, RotatingSector):
        width = spec.theta1 - spec.theta0
        if width >= 2.0 * math.pi:
            return SetShape.ball(spec.center, spec.r0)
        swept = abs(spec.omega) * (horizon - tau0)
        if width - swept <= 0.0:
            return SetShape.point(spec.center)
        # Edges move as theta - omega*t, so the intersection keeps the lower
        # edge at its largest value: tau0 for omega > 0, horizon for omega < 0.
        lo = spec.theta0 - spec.omega * (tau0 if spec.omega > 0 else horizon)
        return SetShape.sector(spec.center, spec.r0, lo, lo + (width - swept))
    if isinstance(spec, JumpingSets):
        if spec.k0 == spec.k1:
            return spec.k0
        if spec.k0.is_empty or spec.k1.is_empty:
            return SetShape.empty()
        if _shapes_disjoint(spec.k0, spec.k1):
            return SetShape.empty()
        return SetShape.intersection((spec.k0, spec.k1))
    if isinstance(spec, TranslatingSet) and spec.template.kind == "ball" \
            and spec.rotation.kind == "none":
        times = _sample_times(tau0, horizon, sample_dt)
        centers = np.array([spec.curve.position(t) for t in times])
        base = np.array(spec.template.center)
        mid = centers.mean(axis=0)
        reach = float(np.max(np.linalg.norm(centers - mid, axis=1)))
        # Sampled centers can miss excursions between samples by at most
        # half a step at the path's top speed; shrink by that margin so the
        # result stays inside every snapshot.
        reach += 0.5 * sample_dt * spec.curve.max_speed()
        r_eff = spec.template.radius - reach
        if r_eff <= 0.0:
            return SetShape.empty()
        return SetShape.ball(tuple(mid + base), r_eff)
    shapes = []
    for t in _sample_times(tau0, horizon, sample_dt):
        s = snapshot(spec, t)
        if s.is_empty:
            return SetShape.empty()
        if s not in shapes:
            shapes.append(s)
    return SetShape.intersection(shapes)


def _shapes_disjoint(a: SetShape, b: SetShape) -> bool:
    return shape_gap(a, b) > 0.0


def shape_gap(a: SetShape, b: SetShape, samples: int = 96) -> float:
    """Minimum distance between two nonempty shapes.

    Exact for ball/point pairs; otherwise a dense boundary-sampling bound.
    """
    if a.is_empty or b.is_empty:
        raise ValueError("gap of an empty shape is undefined")
    simple = {"ball", "point"}
    if a.kind in simple and b.kind in simple:
        d = float(np.linalg.norm(np.array(a.center) - np.array(b.center)))
        return max(d - a.radius - b.radius, 0.0)
    if a.kind == "union":
        return min(shape_gap(p, b, samples) for p in a.parts)
    if b.kind == "union":
        return min(shape_gap(a, p, samples) for p in b.parts)
    pts = _cover_points(a, samples)
    return float(np.min(b.distance(pts)))


def _cover_points(s: SetShape, samples: int) -> np.ndarray:
    """Points covering a simple shape (boundary plus interior spokes)."""
    if s.kind == "point":
        return np.array([s.center])
    if s.kind == "ball":
        th = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
        rr = np.linspace(0.0, s.radius, 8)
        pts = [np.array(s.center) + r * np.stack([np.cos(th), np.sin(th)], axis=1)
               for r in rr]
        return np.concatenate(pts)
    if s.kind == "sector":
        th = np.linspace(s.theta0, s.theta1, samples)
        rr = np.linspace(0.0, s.radius, 8)
        pts = [np.array(s.center) + r * np.stack([np.cos(th), np.sin(th)], axis=1)
               for r in rr]
        return np.concatenate(pts)
    raise ValueError(f"cannot sample shape kind {s.kind!r}")


def validate_inside_domain(spec, domain: DomainSpec, times) -> None:
    """Reject configurations whose K(t) leaves the domain at a sampled time."""
    for t in times:
        s = snapshot(spec, t)
        if s.is_empty:
            continue
        pts = _cover_points(s, 64) if s.kind != "union" else np.concatenate(
            [_cover_points(p, 64) for p in s.parts])
        if not np.all(domain.contains(pts)):
            raise ValueError(
                f"moving set leaves the domain at t={t:g}; snapshots must stay "
                "strictly inside the habitat")
