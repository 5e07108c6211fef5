"""Degree-dimension bookkeeping for positive S^1-equivariant symplectic
homology of star-shaped domains.

Two independent routes to the same degree pattern:

  * the closed formula: dimension 1 exactly in degrees m + 2j - 1 for
    j = 1, 2, ..., and 0 elsewhere;
  * orbit counting: one generator per good geometrically distinct Reeb
    orbit in its Conley-Zehnder degree, licensed by the lacunarity of the
    index set (both hypotheses are re-checked, as a regression guard).

Their agreement on [0, m - 1 + 2N] is equivalent to the Tamura sets of the
same weights tiling [1..N]; `compare` reports equality or the first
differing degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ellipsoid import check_goodness_and_lacunarity, spectrum

__all__ = [
    "DegreeVector",
    "sh_dims_formula",
    "sh_dims_gutt",
    "first_difference",
    "compare",
    "ShComparison",
]


@dataclass
class DegreeVector:
    """Multiplicities per degree over the closed window [0, k_max].

    Degrees outside the window are undefined, not zero; comparisons must
    use matching windows.
    """

    k_max: int
    counts: dict = field(default_factory=dict)

    def multiplicity(self, k):
        if not 0 <= k <= self.k_max:
            raise ValueError(f"degree {k} outside window [0, {self.k_max}]")
        return self.counts.get(k, 0)

    def support(self):
        """Sorted (degree, multiplicity) pairs with nonzero multiplicity."""
        return sorted((k, v) for k, v in self.counts.items() if v)

    def add(self, k, mult=1):
        if not 0 <= k <= self.k_max:
            raise ValueError(f"degree {k} outside window [0, {self.k_max}]")
        self.counts[k] = self.counts.get(k, 0) + mult


def sh_dims_formula(m, k_max):
    """Dimension 1 at k = m + 2j - 1 for j >= 1, else 0, on [0, k_max]."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")
    vec = DegreeVector(k_max)
    k = m + 1
    while k <= k_max:
        vec.add(k)
        k += 2
    return vec


def sh_dims_gutt(e, k_max):
    """Dimensions by counting good distinct Reeb orbits per degree."""
    if k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")
    guard = check_goodness_and_lacunarity(e, k_max)
    if not guard.passed:
        # cannot happen for irrational ellipsoids; guards against regressions
        raise RuntimeError(
            f"orbit counting not licensed: good={guard.all_good}, "
            f"lacunary={guard.lacunary}"
        )
    vec = DegreeVector(k_max)
    for orbit in spectrum(e, k_max):
        vec.add(orbit.cz)
    return vec


def first_difference(v1, v2):
    """Smallest degree where the vectors differ, with both multiplicities."""
    if v1.k_max != v2.k_max:
        raise ValueError(
            f"window mismatch: [0, {v1.k_max}] vs [0, {v2.k_max}]")
    for k in range(v1.k_max + 1):
        m1, m2 = v1.multiplicity(k), v2.multiplicity(k)
        if m1 != m2:
            return (k, m1, m2)
    return None


@dataclass
class ShComparison:
    m: int
    k_max: int
    formula: DegreeVector
    orbits: DegreeVector
    first_difference: tuple | None

    @property
    def equal(self):
        return self.first_difference is None


def compare(e, k_max):
    """Match orbit counting against the closed formula on [0, k_max].

    Equality is exactly the statement that the Tamura sets of the weights
    tile the degree ladder with multiplicity one.
    """
    formula = sh_dims_formula(e.m, k_max)
    orbits = sh_dims_gutt(e, k_max)
    return ShComparison(
        m=e.m, k_max=k_max, formula=formula, orbits=orbits,
        first_difference=first_difference(formula, orbits),
    )
