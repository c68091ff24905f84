"""Finite-volume two-particle Hamiltonians.

On a box the operator acts as hopping plus a distance-dependent
inter-particle interaction plus the coupled random potential:

    (H psi)(x) = sum over hopping neighbours y of psi(y)
               + [U(||x1 - x2||) + g (V(x1) + V(x2))] psi(x)

with x = (x1, x2) a pair point and V the single-site field.  Both particles
feel one and the same field, which is what ties the diagonal entries of
distinct box points together.  Matrices are dense symmetric ndarrays indexed
by the canonical (lexicographic) enumeration of box points.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .lattice import BoxSpec, PairPoint, Site
from .potential import PotentialField

_HOPPING_NORMS = ("sup", "l1")


@dataclass(frozen=True)
class InteractionSpec:
    """Inter-particle interaction by sup-distance, zero beyond the cutoff.

    `table` maps a distance r to the interaction energy; missing entries are
    zero.  Entries beyond `r_max` are rejected so the cutoff is honest.
    """

    table: Mapping[int, float]
    r_max: int = 0

    def __post_init__(self) -> None:
        if self.r_max < 0:
            raise ValueError("interaction cutoff must be nonnegative")
        clean: dict[int, float] = {}
        for r, v in self.table.items():
            r = int(r)
            v = float(v)
            if r < 0:
                raise ValueError("interaction distances must be nonnegative")
            if not math.isfinite(v):
                raise ValueError("interaction energies must be finite")
            if r > self.r_max and v != 0.0:
                raise ValueError(
                    f"interaction entry at distance {r} exceeds the cutoff {self.r_max}"
                )
            clean[r] = v
        object.__setattr__(self, "table", clean)

    @classmethod
    def zero(cls, r_max: int = 0) -> "InteractionSpec":
        return cls(table={}, r_max=r_max)

    def value(self, r: int) -> float:
        if r < 0:
            raise ValueError("distance must be nonnegative")
        if r > self.r_max:
            return 0.0
        return self.table.get(r, 0.0)

    def to_dict(self) -> dict:
        return {
            "entries": [[r, v] for r, v in sorted(self.table.items())],
            "r_max": self.r_max,
        }

    @classmethod
    def from_dict(cls, data: Mapping, default_r_max: int = 0) -> "InteractionSpec":
        """Parse from config.  An omitted r_max defaults to `default_r_max`
        (callers pass the lattice dimension), stretched to cover the largest
        tabulated distance with a nonzero energy."""
        extra = set(data) - {"entries", "r_max"}
        if extra:
            raise ValueError(f"unknown keys in interaction config: {sorted(extra)}")
        entries = data.get("entries", [])
        table = {int(r): float(v) for r, v in entries}
        if "r_max" in data:
            r_max = int(data["r_max"])
        else:
            r_max = max([int(default_r_max)] + [r for r, v in table.items() if v != 0.0])
        return cls(table=table, r_max=r_max)


@dataclass(frozen=True)
class HamiltonianSpec:
    """Everything needed to assemble the operator except the field itself."""

    box: BoxSpec
    interaction: InteractionSpec
    coupling: float
    hopping_norm: str = "sup"

    def __post_init__(self) -> None:
        if not math.isfinite(self.coupling):
            raise ValueError("coupling must be finite")
        if self.hopping_norm not in _HOPPING_NORMS:
            raise ValueError(
                f"hopping_norm must be one of {_HOPPING_NORMS}, got {self.hopping_norm!r}"
            )


def neighbors(box: BoxSpec, x: PairPoint, hopping_norm: str = "sup") -> list[PairPoint]:
    """Box points one hop away from x, in canonical (lexicographic) order.

    "sup" hopping connects points whose concatenated coordinates differ by at
    most one in every component (and in at least one); "l1" hopping moves a
    single coordinate of a single particle by one step.  Points outside the
    box are dropped, so corners have fewer neighbours.
    """
    if hopping_norm not in _HOPPING_NORMS:
        raise ValueError(f"hopping_norm must be one of {_HOPPING_NORMS}")
    if x not in box:
        raise ValueError(f"point {x} lies outside the box")
    d = box.dimension
    cat = x.first + x.second
    found: list[tuple[int, ...]] = []
    if hopping_norm == "l1":
        for i in range(2 * d):
            for step in (-1, 1):
                cand = cat[:i] + (cat[i] + step,) + cat[i + 1 :]
                found.append(cand)
    else:
        for offset in itertools.product((-1, 0, 1), repeat=2 * d):
            if all(o == 0 for o in offset):
                continue
            found.append(tuple(c + o for c, o in zip(cat, offset)))
    out = []
    for cand in sorted(found):
        pt = PairPoint(cand[:d], cand[d:])
        if pt in box:
            out.append(pt)
    return out


class HamiltonianTemplate:
    """Precomputed assembly data for one spec.

    The hopping and interaction parts do not depend on the field, so they are
    built once; realising the operator for a sample only rewrites the
    diagonal.  `sites` is the canonical (sorted) enumeration of the union of
    the two projection cubes, and `first_index` / `second_index` give, for
    each box point, the positions of its particle coordinates in that
    enumeration.  The Monte Carlo drivers feed raw value arrays straight in.
    """

    def __init__(self, spec: HamiltonianSpec):
        self.spec = spec
        self.points = spec.box.points()
        self.dim = len(self.points)
        index = {pt: i for i, pt in enumerate(self.points)}
        fixed = np.zeros((self.dim, self.dim))
        for i, pt in enumerate(self.points):
            for nb in neighbors(spec.box, pt, spec.hopping_norm):
                fixed[i, index[nb]] = 1.0
            r = max(abs(a - b) for a, b in zip(pt.first, pt.second))
            fixed[i, i] = spec.interaction.value(r)
        self.fixed = fixed
        c1, c2 = spec.box.projections()
        self.sites: list[Site] = sorted(c1.point_set() | c2.point_set())
        site_index = {s: k for k, s in enumerate(self.sites)}
        self.first_index = np.array([site_index[pt.first] for pt in self.points])
        self.second_index = np.array([site_index[pt.second] for pt in self.points])

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    def diagonal_shift(self, site_values: np.ndarray) -> np.ndarray:
        """g (V(x1) + V(x2)) per box point, from values aligned with `sites`."""
        return self.spec.coupling * (
            site_values[..., self.first_index] + site_values[..., self.second_index]
        )

    def assemble_values(self, site_values: np.ndarray) -> np.ndarray:
        """Dense symmetric matrix for one value array aligned with `sites`."""
        site_values = np.asarray(site_values, dtype=float)
        if site_values.shape != (self.n_sites,):
            raise ValueError(
                f"expected {self.n_sites} site values, got shape {site_values.shape}"
            )
        H = self.fixed.copy()
        idx = np.arange(self.dim)
        H[idx, idx] += self.diagonal_shift(site_values)
        return H

    def assemble(self, field: PotentialField) -> np.ndarray:
        return self.assemble_values(field.array(self.sites))


def build_hamiltonian(spec: HamiltonianSpec, field: PotentialField) -> np.ndarray:
    """Assemble the dense symmetric matrix of the operator on the box.

    The field must cover the union of the two projection cubes.  Rows and
    columns follow the canonical ordering of box points (BoxSpec.points).
    Callers assembling many realisations of one spec should keep a
    HamiltonianTemplate instead of calling this in a loop.
    """
    return HamiltonianTemplate(spec).assemble(field)
