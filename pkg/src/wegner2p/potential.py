"""Single-site disorder: distribution specs, concentration function, field sampling.

The random potential assigns one IID value per lattice site.  Everything
downstream needs exactly two things from the law: a way to draw samples and
its concentration function, the largest probability any half-open window
(a, a + eps] can capture.  Sampling is organised around reproducible
substreams so that a trial is a pure function of (master seed, stream index).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .lattice import Site

_KINDS = ("uniform", "gaussian", "bernoulli", "discrete")


@dataclass(frozen=True)
class DistributionSpec:
    """A single-site law.  Only the fields for the given kind are meaningful.

    uniform    lo, hi              flat on [lo, hi), lo < hi
    gaussian   mean, sigma         normal, sigma > 0
    bernoulli  p, values           values[1] with probability p, else values[0]
    discrete   atoms               ((value, prob), ...), probs summing to 1
    """

    kind: str
    lo: float = 0.0
    hi: float = 1.0
    mean: float = 0.0
    sigma: float = 1.0
    p: float = 0.5
    values: tuple[float, float] = (0.0, 1.0)
    atoms: tuple[tuple[float, float], ...] = ()

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "DistributionSpec":
        return validate_distribution(cls(kind="uniform", lo=float(lo), hi=float(hi)))

    @classmethod
    def gaussian(cls, mean: float, sigma: float) -> "DistributionSpec":
        return validate_distribution(
            cls(kind="gaussian", mean=float(mean), sigma=float(sigma))
        )

    @classmethod
    def bernoulli(
        cls, p: float, values: tuple[float, float] = (0.0, 1.0)
    ) -> "DistributionSpec":
        return validate_distribution(
            cls(kind="bernoulli", p=float(p), values=(float(values[0]), float(values[1])))
        )

    @classmethod
    def discrete(
        cls, atoms: Iterable[tuple[float, float]]
    ) -> "DistributionSpec":
        normalized = tuple((float(v), float(w)) for v, w in atoms)
        return validate_distribution(cls(kind="discrete", atoms=normalized))

    @property
    def is_atomic(self) -> bool:
        return self.kind in ("bernoulli", "discrete")

    def to_dict(self) -> dict:
        if self.kind == "uniform":
            return {"kind": "uniform", "lo": self.lo, "hi": self.hi}
        if self.kind == "gaussian":
            return {"kind": "gaussian", "mean": self.mean, "sigma": self.sigma}
        if self.kind == "bernoulli":
            return {"kind": "bernoulli", "p": self.p, "values": list(self.values)}
        return {"kind": "discrete", "atoms": [list(a) for a in self.atoms]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "DistributionSpec":
        if "kind" not in data:
            raise ValueError("distribution config needs a 'kind'")
        kind = data["kind"]
        allowed = {
            "uniform": {"kind", "lo", "hi"},
            "gaussian": {"kind", "mean", "sigma"},
            "bernoulli": {"kind", "p", "values"},
            "discrete": {"kind", "atoms"},
        }
        if kind not in allowed:
            raise ValueError(f"unknown distribution kind {kind!r}")
        extra = set(data) - allowed[kind]
        if extra:
            raise ValueError(f"unknown keys in {kind} distribution config: {sorted(extra)}")
        if kind == "uniform":
            return cls.uniform(data["lo"], data["hi"])
        if kind == "gaussian":
            return cls.gaussian(data["mean"], data["sigma"])
        if kind == "bernoulli":
            values = tuple(data.get("values", (0.0, 1.0)))
            if len(values) != 2:
                raise ValueError("bernoulli 'values' must hold exactly two numbers")
            return cls.bernoulli(data["p"], values)  # type: ignore[arg-type]
        return cls.discrete(tuple((v, w) for v, w in data["atoms"]))


def validate_distribution(spec: DistributionSpec) -> DistributionSpec:
    """Check parameters and return a normalised spec.

    Discrete atoms are sorted by value with duplicates merged; bernoulli is
    left as is but must have p in [0, 1].  Raises ValueError on nonsense
    (lo >= hi, sigma <= 0, negative weights, weights not summing to one).
    """
    if spec.kind not in _KINDS:
        raise ValueError(f"unknown distribution kind {spec.kind!r}")
    if spec.kind == "uniform":
        if not (math.isfinite(spec.lo) and math.isfinite(spec.hi)):
            raise ValueError("uniform bounds must be finite")
        if not spec.lo < spec.hi:
            raise ValueError("uniform law needs lo < hi")
        return spec
    if spec.kind == "gaussian":
        if not (math.isfinite(spec.mean) and math.isfinite(spec.sigma)):
            raise ValueError("gaussian parameters must be finite")
        if spec.sigma <= 0:
            raise ValueError("gaussian law needs sigma > 0")
        return spec
    if spec.kind == "bernoulli":
        if not 0.0 <= spec.p <= 1.0:
            raise ValueError("bernoulli weight must lie in [0, 1]")
        if len(spec.values) != 2 or not all(math.isfinite(v) for v in spec.values):
            raise ValueError("bernoulli needs two finite outcome values")
        return spec
    # discrete
    if not spec.atoms:
        raise ValueError("discrete law needs at least one atom")
    merged: dict[float, float] = {}
    for value, weight in spec.atoms:
        if not (math.isfinite(value) and math.isfinite(weight)):
            raise ValueError("discrete atoms must be finite")
        if weight < 0:
            raise ValueError("atom weights must be nonnegative")
        merged[value] = merged.get(value, 0.0) + weight
    total = math.fsum(merged.values())
    if abs(total - 1.0) > 1e-12:
        raise ValueError(f"atom weights must sum to 1, got {total!r}")
    atoms = tuple(sorted(merged.items()))
    return DistributionSpec(kind="discrete", atoms=atoms)


def _atoms(spec: DistributionSpec) -> tuple[tuple[float, float], ...]:
    """Sorted (value, weight) atoms of a purely atomic law."""
    if spec.kind == "discrete":
        return validate_distribution(spec).atoms
    if spec.kind == "bernoulli":
        a, b = spec.values
        pairs = [(a, 1.0 - spec.p), (b, spec.p)]
        return validate_distribution(DistributionSpec(kind="discrete", atoms=tuple(pairs))).atoms
    raise ValueError(f"{spec.kind} law has no atoms")


def concentration(dist: DistributionSpec, eps: float) -> float:
    """Largest probability mass any half-open window (a, a + eps] can capture.

    Uniform laws give eps over the support length, capped at 1.  For the
    gaussian the best window is centred at the mean.  For atomic laws the
    supremum is attained by a window whose atoms span strictly less than eps
    (the left endpoint is excluded, so a window of width eps can only grab
    atom runs of span < eps).  Width zero always gives zero.
    """
    dist = validate_distribution(dist)
    if not math.isfinite(eps) or eps < 0:
        raise ValueError("window width must be finite and nonnegative")
    if eps == 0.0:
        return 0.0
    if dist.kind == "uniform":
        return min(eps / (dist.hi - dist.lo), 1.0)
    if dist.kind == "gaussian":
        return math.erf(eps / (2.0 * dist.sigma * math.sqrt(2.0)))
    atoms = _atoms(dist)
    values = [v for v, _ in atoms]
    weights = [w for _, w in atoms]
    best = 0.0
    for i in range(len(atoms)):
        acc = 0.0
        for j in range(i, len(atoms)):
            if values[j] - values[i] >= eps:
                break
            acc += weights[j]
        best = max(best, acc)
    return min(best, 1.0)


@dataclass(frozen=True)
class RngStream:
    """Addressable randomness: one generator per (master seed, stream index).

    Distinct stream indices under the same master seed yield statistically
    independent generators, and the mapping is stable across platforms and
    processes, which is what makes experiment trials replayable one by one.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self) -> None:
        if not 0 <= int(self.master_seed) < 2**64:
            raise ValueError("master seed must fit in an unsigned 64-bit integer")
        if self.stream_index < 0:
            raise ValueError("stream index must be nonnegative")

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(entropy=(self.master_seed, self.stream_index))
        return np.random.default_rng(seq)


def draw_values(dist: DistributionSpec, gen: np.random.Generator, n: int) -> np.ndarray:
    """Draw n IID values from the law using the given generator.

    This is the one sampling primitive in the package; everything that
    consumes randomness (field sampling, Monte Carlo trials) goes through it,
    so a stream index plus a draw count pins down the exact bytes drawn.
    """
    if n < 0:
        raise ValueError("draw count must be nonnegative")
    if dist.kind == "uniform":
        return gen.uniform(dist.lo, dist.hi, size=n)
    if dist.kind == "gaussian":
        return gen.normal(dist.mean, dist.sigma, size=n)
    if dist.kind == "bernoulli":
        lo_val, hi_val = dist.values
        return np.where(gen.random(n) < dist.p, hi_val, lo_val)
    atoms = _atoms(dist)
    values = np.array([v for v, _ in atoms])
    weights = np.array([w for _, w in atoms])
    weights = weights / weights.sum()
    idx = gen.choice(len(values), size=n, p=weights)
    return values[idx]


@dataclass(frozen=True)
class PotentialField:
    """A realisation of the potential on a finite set of sites.

    `values` maps each site to its potential value; `frozen` marks the sites
    whose values were imposed rather than drawn (used for conditioning).
    Treat instances as immutable.
    """

    values: Mapping[Site, float]
    frozen: frozenset[Site] = frozenset()

    def __post_init__(self) -> None:
        stray = set(self.frozen) - set(self.values)
        if stray:
            raise ValueError(f"frozen sites missing from the field: {sorted(stray)}")

    def __getitem__(self, site: Site) -> float:
        return self.values[site]

    def __contains__(self, site: Site) -> bool:
        return site in self.values

    @property
    def sites(self) -> list[Site]:
        return sorted(self.values)

    def array(self, sites: Sequence[Site]) -> np.ndarray:
        """Field values over the given sites, in the given order."""
        try:
            return np.array([self.values[s] for s in sites], dtype=float)
        except KeyError as err:
            raise ValueError(f"field not defined at site {err.args[0]}") from None


def sample_field(
    sites: Sequence[Site],
    dist: DistributionSpec,
    rng: RngStream,
    frozen: Mapping[Site, float] | None = None,
) -> PotentialField:
    """Realise the potential on `sites`, honouring frozen values.

    Free sites receive IID draws in site order; frozen sites keep their given
    values and consume no randomness.  The result is a pure function of the
    site order, the law, the stream, and the frozen assignment, so re-running
    with the same arguments reproduces the field bit for bit.  Frozen sites
    outside `sites` are rejected.
    """
    site_list = [tuple(int(c) for c in s) for s in sites]
    if len(set(site_list)) != len(site_list):
        raise ValueError("duplicate sites in field domain")
    frozen_map = {tuple(int(c) for c in s): float(v) for s, v in (frozen or {}).items()}
    stray = set(frozen_map) - set(site_list)
    if stray:
        raise ValueError(f"frozen sites outside the field domain: {sorted(stray)}")
    dist = validate_distribution(dist)
    free = [s for s in site_list if s not in frozen_map]
    draws = draw_values(dist, rng.generator(), len(free))
    values: dict[Site, float] = {}
    k = 0
    for s in site_list:
        if s in frozen_map:
            values[s] = frozen_map[s]
        else:
            values[s] = float(draws[k])
            k += 1
    return PotentialField(values=values, frozen=frozenset(frozen_map))
