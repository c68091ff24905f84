"""Pair-lattice geometry: boxes on Z^d x Z^d, projection cubes, separation classes.

A configuration of the two-particle system is a point of Z^d x Z^d.  Finite
volumes are boxes, products of two lattice cubes of common radius L centred at
the components of a pair point.  The classifier below decides, for two boxes
whose centres are far apart (at least max(8L, 1) in the symmetrized
sup-distance), which of the four projection cubes is disjoint from all the
others.  At least
one of the five separation classes always applies; the survey functions scan
relative geometries exhaustively to confirm that.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple

import numpy as np

Site = tuple[int, ...]


def as_site(coords: Iterable[int]) -> Site:
    """Coerce a coordinate sequence to a lattice site (tuple of ints)."""
    site = tuple(int(c) for c in coords)
    if not site:
        raise ValueError("a lattice site needs at least one coordinate")
    return site


class PairPoint(NamedTuple):
    """Positions of the two particles, each a point of Z^d."""

    first: Site
    second: Site

    @property
    def dimension(self) -> int:
        return len(self.first)

    @staticmethod
    def of(first: Iterable[int], second: Iterable[int]) -> "PairPoint":
        a, b = as_site(first), as_site(second)
        if len(a) != len(b):
            raise ValueError(
                f"particle coordinates disagree in dimension: {len(a)} vs {len(b)}"
            )
        return PairPoint(a, b)


def _check_same_dimension(a: PairPoint, b: PairPoint) -> None:
    dims = {len(a.first), len(a.second), len(b.first), len(b.second)}
    if len(dims) != 1:
        raise ValueError(f"pair points must share one dimension, got lengths {sorted(dims)}")


def sup_norm_pair(a: PairPoint, b: PairPoint) -> int:
    """Sup-norm distance on Z^d x Z^d: largest coordinate gap over both particles."""
    _check_same_dimension(a, b)
    return max(
        max(abs(p - q) for p, q in zip(a.first, b.first)),
        max(abs(p - q) for p, q in zip(a.second, b.second)),
    )


def apply_symmetry(a: PairPoint) -> PairPoint:
    """Swap the two particles."""
    return PairPoint(a.second, a.first)


def distance_condition(u: PairPoint, u_prime: PairPoint, radius: int) -> bool:
    """Whether two box centres are far apart modulo the particle swap.

    True when min(||u - u'||, ||S(u) - u'||) >= max(8 * radius, 1) in the sup
    norm, with S the swap.  This is the admissibility condition for the
    separation classifier.  For radius >= 1 the threshold is just 8L; radius
    zero only demands that the centres differ as swap orbits, without which
    single-point boxes can coincide and no separation class can hold.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    _check_same_dimension(u, u_prime)
    direct = sup_norm_pair(u, u_prime)
    swapped = sup_norm_pair(apply_symmetry(u), u_prime)
    return min(direct, swapped) >= max(8 * radius, 1)


@dataclass(frozen=True)
class Cube:
    """Lattice cube: all sites within sup-distance `radius` of `center`."""

    center: Site
    radius: int

    def __post_init__(self) -> None:
        if self.radius < 0:
            raise ValueError("cube radius must be nonnegative")
        if not self.center:
            raise ValueError("cube centre needs at least one coordinate")

    @property
    def dimension(self) -> int:
        return len(self.center)

    @property
    def size(self) -> int:
        return (2 * self.radius + 1) ** self.dimension

    def points(self) -> list[Site]:
        """All cube sites in lexicographic order."""
        ranges = [range(c - self.radius, c + self.radius + 1) for c in self.center]
        return [tuple(p) for p in itertools.product(*ranges)]

    def point_set(self) -> frozenset[Site]:
        return _cube_point_set(self.center, self.radius)

    def __contains__(self, site: Site) -> bool:
        return len(site) == self.dimension and all(
            abs(s - c) <= self.radius for s, c in zip(site, self.center)
        )


@lru_cache(maxsize=65536)
def _cube_point_set(center: Site, radius: int) -> frozenset[Site]:
    ranges = [range(c - radius, c + radius + 1) for c in center]
    return frozenset(itertools.product(*ranges))


@dataclass(frozen=True)
class BoxSpec:
    """Box on the pair lattice: the product of two radius-L cubes.

    The box centred at u = (u1, u2) contains every pair point x = (x1, x2)
    with ||x1 - u1|| <= L and ||x2 - u2|| <= L in the sup norm, which is the
    same as sup_norm_pair(x, u) <= L.
    """

    center: PairPoint
    radius: int

    def __post_init__(self) -> None:
        if self.radius < 0:
            raise ValueError("box radius must be nonnegative")
        if len(self.center.first) != len(self.center.second):
            raise ValueError("box centre components disagree in dimension")

    @property
    def dimension(self) -> int:
        return self.center.dimension

    @property
    def size(self) -> int:
        return (2 * self.radius + 1) ** (2 * self.dimension)

    def projections(self) -> tuple[Cube, Cube]:
        """The two single-particle cubes whose product is the box."""
        return (
            Cube(self.center.first, self.radius),
            Cube(self.center.second, self.radius),
        )

    def points(self) -> list[PairPoint]:
        """All box points, lexicographic in the concatenated coordinates."""
        d = self.dimension
        cat = self.center.first + self.center.second
        ranges = [range(c - self.radius, c + self.radius + 1) for c in cat]
        return [
            PairPoint(tuple(p[:d]), tuple(p[d:])) for p in itertools.product(*ranges)
        ]

    def __contains__(self, x: PairPoint) -> bool:
        if x.dimension != self.dimension or len(x.second) != self.dimension:
            return False
        return sup_norm_pair(x, self.center) <= self.radius

    def __iter__(self) -> Iterator[PairPoint]:
        return iter(self.points())


def make_box(center: PairPoint, radius: int) -> BoxSpec:
    """Validated constructor for a pair box."""
    if not isinstance(center, PairPoint):
        center = PairPoint.of(*center)
    return BoxSpec(center=center, radius=radius)


def projections(box: BoxSpec) -> tuple[Cube, Cube, int]:
    """Both projection cubes of a box and the exact size of their union.

    The union size is |P1 u P2| computed set-wise; it is 2*(2L+1)^d when the
    cubes are disjoint and shrinks when they overlap, down to (2L+1)^d for
    coincident centres.
    """
    c1, c2 = box.projections()
    union = c1.point_set() | c2.point_set()
    return c1, c2, len(union)


class SeparationClass(Enum):
    """Which projection cube stands apart from all others.

    For boxes at centres u and u' (radius L), the four projection cubes are
    the particle-1 and particle-2 cubes of each box.  COMPLETELY_SEPARATED
    means the first box's cubes are jointly disjoint from the second box's.
    The remaining classes each name a single cube disjoint from the union of
    the other three.
    """

    COMPLETELY_SEPARATED = "completely_separated"
    FIRST_PARTICLE1_ISOLATED = "first_particle1_isolated"
    FIRST_PARTICLE2_ISOLATED = "first_particle2_isolated"
    SECOND_PARTICLE1_ISOLATED = "second_particle1_isolated"
    SECOND_PARTICLE2_ISOLATED = "second_particle2_isolated"


def classify_separation(
    u: PairPoint, u_prime: PairPoint, radius: int
) -> frozenset[SeparationClass]:
    """All separation classes that hold for boxes at u and u' of given radius.

    Requires the 8L centre-distance condition; geometries violating it are
    rejected with ValueError.  Membership is decided by exact set operations
    on the four projection cubes.  An empty answer would contradict the
    separation dichotomy, and downstream code treats it as a hard failure.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if not distance_condition(u, u_prime, radius):
        raise ValueError("box centres violate the 8L separation condition")
    p1 = _cube_point_set(u.first, radius)
    p2 = _cube_point_set(u.second, radius)
    q1 = _cube_point_set(u_prime.first, radius)
    q2 = _cube_point_set(u_prime.second, radius)
    q_union = q1 | q2
    p_union = p1 | p2

    classes: set[SeparationClass] = set()
    if p_union.isdisjoint(q_union):
        classes.add(SeparationClass.COMPLETELY_SEPARATED)
    if p1.isdisjoint(p2) and p1.isdisjoint(q_union):
        classes.add(SeparationClass.FIRST_PARTICLE1_ISOLATED)
    if p2.isdisjoint(p1) and p2.isdisjoint(q_union):
        classes.add(SeparationClass.FIRST_PARTICLE2_ISOLATED)
    if q1.isdisjoint(q2) and q1.isdisjoint(p_union):
        classes.add(SeparationClass.SECOND_PARTICLE1_ISOLATED)
    if q2.isdisjoint(q1) and q2.isdisjoint(p_union):
        classes.add(SeparationClass.SECOND_PARTICLE2_ISOLATED)
    return frozenset(classes)


# ---------------------------------------------------------------------------
# Exhaustive surveys of relative geometries.
#
# Every predicate above compares coordinate gaps against 2L (cube overlap) and
# 8L (centre distance) only.  If two points on an axis are separated by more
# than 8L+1, shrinking that gap to exactly 8L+1 changes no comparison: gaps
# spanning it stay at least 8L+1 and all others are untouched.  So every
# relative geometry over Z is reproduced, threshold-for-threshold, by one with
# all four axis coordinates within a window of width 3*(8L+1) + 1, and a scan
# over a grid of side 40L+20 sees every geometry class that exists at all.
# The same argument applies per axis in d = 2.
# ---------------------------------------------------------------------------


@dataclass
class SeparationSurvey:
    """Outcome of an exhaustive scan over admissible box-centre geometries."""

    dimension: int
    radius: int
    geometries: int
    empty: int
    class_counts: dict[SeparationClass, int] = field(default_factory=dict)
    empty_examples: list[tuple[PairPoint, PairPoint]] = field(default_factory=list)

    @property
    def all_classified(self) -> bool:
        return self.empty == 0


def survey_separation_line(L: int, side: int | None = None) -> SeparationSurvey:
    """Classify every admissible centre geometry on a d=1 grid.

    Fixes the first particle of the first centre at the origin (classification
    is translation invariant) and sweeps the remaining three coordinates over
    a centred grid of the given side (default 40L+20, wide enough to realise
    every geometry class, see the gap-compression note above).  Each
    admissible geometry is classified; empty classifications are collected as
    counterexamples.
    """
    if L < 0:
        raise ValueError("radius must be nonnegative")
    side = 40 * L + 20 if side is None else side
    lo = -(side // 2)
    coords = range(lo, lo + side)
    threshold = max(8 * L, 1)
    counts: dict[SeparationClass, int] = {c: 0 for c in SeparationClass}
    geometries = 0
    empty = 0
    empty_examples: list[tuple[PairPoint, PairPoint]] = []
    for w in coords:
        for a in coords:
            gap_11 = abs(a)
            gap_21 = abs(a - w)
            for b in coords:
                direct = max(gap_11, abs(b - w))
                swapped = max(gap_21, abs(b))
                if min(direct, swapped) < threshold:
                    continue
                geometries += 1
                u = PairPoint((0,), (w,))
                u_prime = PairPoint((a,), (b,))
                found = classify_separation(u, u_prime, L)
                for c in found:
                    counts[c] += 1
                if not found:
                    empty += 1
                    if len(empty_examples) < 5:
                        empty_examples.append((u, u_prime))
    return SeparationSurvey(
        dimension=1,
        radius=L,
        geometries=geometries,
        empty=empty,
        class_counts=counts,
        empty_examples=empty_examples,
    )


# Index order of the six centre pairs used by the axis-profile reduction:
# (u1,u2), (u1,q1), (u1,q2), (u2,q1), (u2,q2), (q1,q2)
_PAIR_U1U2, _PAIR_U1Q1, _PAIR_U1Q2, _PAIR_U2Q1, _PAIR_U2Q2, _PAIR_Q1Q2 = range(6)


def _axis_profiles(L: int, side: int) -> list[tuple[tuple[int, ...], tuple[int, int, int]]]:
    """All realisable per-axis threshold profiles with a witness triple.

    A profile assigns to each of the six centre pairs a two-bit code for one
    axis: bit 0 set when the coordinate gap exceeds 2L (the cubes of the pair
    do not overlap on that axis) and bit 1 set when the gap reaches the
    admissibility threshold max(8L, 1).  Realisability is read off a full
    scan of (w, a, b) with the first coordinate fixed at 0, exactly as in the
    line survey.
    """
    lo = -(side // 2)
    vals = np.arange(lo, lo + side)
    w = vals[:, None, None]
    a = vals[None, :, None]
    b = vals[None, None, :]
    shape = (side, side, side)
    # coordinate gaps for the six centre pairs, in the fixed index order
    gaps = [
        np.broadcast_to(np.abs(w), shape),
        np.broadcast_to(np.abs(a), shape),
        np.broadcast_to(np.abs(b), shape),
        np.broadcast_to(np.abs(a - w), shape),
        np.broadcast_to(np.abs(b - w), shape),
        np.broadcast_to(np.abs(a - b), shape),
    ]
    threshold = max(8 * L, 1)
    codes = np.zeros(shape, dtype=np.int64)
    for k, g in enumerate(gaps):
        code = (g > 2 * L).astype(np.int64) | ((g >= threshold).astype(np.int64) << 1)
        codes |= code << (2 * k)
    flat = codes.ravel()
    uniq, first = np.unique(flat, return_index=True)
    n = side
    profiles = []
    for encoded, idx in zip(uniq.tolist(), first.tolist()):
        iw, rem = divmod(idx, n * n)
        ia, ib = divmod(rem, n)
        witness = (int(vals[iw]), int(vals[ia]), int(vals[ib]))
        profile = tuple((encoded >> (2 * k)) & 3 for k in range(6))
        profiles.append((profile, witness))
    return profiles


def _predict_classes(
    px: tuple[int, ...], py: tuple[int, ...]
) -> frozenset[SeparationClass]:
    """Separation classes implied by two per-axis threshold profiles.

    Cubes of a pair are disjoint when some axis gap exceeds 2L (bit 0 on
    either axis); a pair of centres is far when some axis gap reaches the
    admissibility threshold (bit 1).  This route never touches point sets,
    so it cross-checks the set-based classifier.
    """
    disjoint = [bool((px[k] | py[k]) & 1) for k in range(6)]
    far = [bool((px[k] | py[k]) & 2) for k in range(6)]
    direct_far = far[_PAIR_U1Q1] or far[_PAIR_U2Q2]
    swapped_far = far[_PAIR_U1Q2] or far[_PAIR_U2Q1]
    if not (direct_far and swapped_far):
        raise ValueError("profile pair violates the 8L separation condition")
    cross = (
        disjoint[_PAIR_U1Q1]
        and disjoint[_PAIR_U1Q2]
        and disjoint[_PAIR_U2Q1]
        and disjoint[_PAIR_U2Q2]
    )
    classes: set[SeparationClass] = set()
    if cross:
        classes.add(SeparationClass.COMPLETELY_SEPARATED)
    if disjoint[_PAIR_U1U2] and disjoint[_PAIR_U1Q1] and disjoint[_PAIR_U1Q2]:
        classes.add(SeparationClass.FIRST_PARTICLE1_ISOLATED)
    if disjoint[_PAIR_U1U2] and disjoint[_PAIR_U2Q1] and disjoint[_PAIR_U2Q2]:
        classes.add(SeparationClass.FIRST_PARTICLE2_ISOLATED)
    if disjoint[_PAIR_Q1Q2] and disjoint[_PAIR_U1Q1] and disjoint[_PAIR_U2Q1]:
        classes.add(SeparationClass.SECOND_PARTICLE1_ISOLATED)
    if disjoint[_PAIR_Q1Q2] and disjoint[_PAIR_U1Q2] and disjoint[_PAIR_U2Q2]:
        classes.add(SeparationClass.SECOND_PARTICLE2_ISOLATED)
    return frozenset(classes)


def _profile_pair_admissible(px: tuple[int, ...], py: tuple[int, ...]) -> bool:
    far = [bool((px[k] | py[k]) & 2) for k in range(6)]
    return (far[_PAIR_U1Q1] or far[_PAIR_U2Q2]) and (
        far[_PAIR_U1Q2] or far[_PAIR_U2Q1]
    )


def survey_separation_plane(L: int, side: int | None = None) -> SeparationSurvey:
    """Classify every admissible centre geometry over Z^2.

    All classifier predicates depend on each axis only through the two-bit
    threshold profile of that axis, and the two axes are independent.  The
    survey therefore enumerates the realisable per-axis profiles (from the
    exhaustive d=1 scan), then walks every ordered pair of profiles, builds a
    witness geometry with those profiles as its x and y axes, and classifies
    it set-wise.  The set-based answer is compared against the profile-based
    prediction; a mismatch means the reduction or the classifier is wrong and
    raises.  Coverage is exact for all of Z^2, not just a finite grid, by the
    gap-compression argument above.
    """
    if L < 0:
        raise ValueError("radius must be nonnegative")
    side = 40 * L + 20 if side is None else side
    profiles = _axis_profiles(L, side)
    counts: dict[SeparationClass, int] = {c: 0 for c in SeparationClass}
    geometries = 0
    empty = 0
    empty_examples: list[tuple[PairPoint, PairPoint]] = []
    for px, (wx, ax, bx) in profiles:
        for py, (wy, ay, by) in profiles:
            if not _profile_pair_admissible(px, py):
                continue
            geometries += 1
            u = PairPoint((0, 0), (wx, wy))
            u_prime = PairPoint((ax, ay), (bx, by))
            found = classify_separation(u, u_prime, L)
            predicted = _predict_classes(px, py)
            if found != predicted:
                raise RuntimeError(
                    f"axis-profile prediction {predicted} disagrees with "
                    f"set-based classification {found} at u={u}, u'={u_prime}, L={L}"
                )
            for c in found:
                counts[c] += 1
            if not found:
                empty += 1
                if len(empty_examples) < 5:
                    empty_examples.append((u, u_prime))
    return SeparationSurvey(
        dimension=2,
        radius=L,
        geometries=geometries,
        empty=empty,
        class_counts=counts,
        empty_examples=empty_examples,
    )
