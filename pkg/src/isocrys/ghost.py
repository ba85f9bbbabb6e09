"""Torus-invariant bookkeeping for ghosts and the Oort fraction 2 dim / [End : Q]."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .isogeny import IsogenyType


class OddInvariantError(ValueError):
    pass


# integer weights of a generic cocharacter of a maximal torus; only the zero count matters
SO3_STD = (1, 0, -1)
SO5_STD = (1, 1, 0, -1, -1)


def torus_invariant_dim(weights, multiplicities) -> int:
    """Sum over factors of (number of zero weights) * multiplicity."""
    weights = list(weights)
    multiplicities = list(multiplicities)
    if len(weights) != len(multiplicities):
        raise ValueError("one multiplicity per weight multiset is required")
    if any(m < 0 for m in multiplicities):
        raise ValueError("multiplicities must be non-negative")
    return sum(list(w).count(0) * m for w, m in zip(weights, multiplicities))


def ghost_dim(weights, multiplicities) -> int:
    total = torus_invariant_dim(weights, multiplicities)
    if total % 2:
        raise OddInvariantError(f"torus invariants have odd dimension {total}")
    return total // 2


@dataclass(frozen=True)
class GhostCase:
    name: str
    weights: tuple
    multiplicities: tuple

    @property
    def invariants(self) -> int:
        return torus_invariant_dim(self.weights, self.multiplicities)

    @property
    def dimension(self) -> int:
        return ghost_dim(self.weights, self.multiplicities)

    def to_dict(self) -> dict:
        return {"case": self.name, "weights": [list(w) for w in self.weights],
                "multiplicities": list(self.multiplicities),
                "torus_invariants": self.invariants, "ghost_dim": self.dimension}


def ghost_case(name: str, r: int = 8) -> GhostCase:
    """The bundled cases.

    so3: two SO(3) factors, each standard tensor a 2-dimensional space with trivial torus action.
    so5: SO(5) standard tensor a 2-dimensional space.
    g2: 2r copies of the 7-dimensional representation, weights read off a torus of the split
        derivation algebra.
    """
    if name == "so3":
        return GhostCase("so3", (SO3_STD, SO3_STD), (2, 2))
    if name == "so5":
        return GhostCase("so5", (SO5_STD,), (2,))
    if name == "g2":
        if r < 1:
            raise ValueError("r must be positive")
        from .octonion import OctonionAlgebra, g2_torus_weights
        w = tuple(g2_torus_weights(OctonionAlgebra.split()))
        return GhostCase("g2", (w,), (2 * r,))
    raise ValueError(f"unknown ghost case {name!r}")


def ghost_isogeny_type(r: int) -> IsogenyType:
    """G_{1,r-1} + G_{r-1,1}."""
    if r < 3:
        raise ValueError("r must be at least 3")
    return IsogenyType.of((1, r - 1), (r - 1, 1))


def oort_invariant(dim: int, end_degree: int) -> Fraction:
    if end_degree < 1:
        raise ValueError("end_degree must be at least 1")
    return Fraction(2 * dim, end_degree)
