"""Formal isogeny types G_{m,n} and Newton polygons.

Convention: ``G_{m,n}`` has height ``m + n`` and dimension ``m``.  Its
Frobenius slope (the p-adic valuation rate of the Frobenius of its covariant
Dieudonne module or window) is ``n / (m + n)``: the multiplicative group
``G_{1,0}`` has slope 0 and the etale group ``G_{0,1}`` has slope 1.  This is
the convention forced by the window axiom ``phi(M_1) = pM``, under which the
Frobenius of a height-h, dimension-d module has determinant valuation h - d.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable


@dataclass(frozen=True)
class NewtonPolygon:
    """Non-decreasing multiset of rational Frobenius slopes."""

    slopes: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "slopes", tuple(sorted(Fraction(s) for s in self.slopes)))

    @classmethod
    def from_strings(cls, items: Iterable[str]) -> "NewtonPolygon":
        return cls(tuple(Fraction(s) for s in items))

    def __len__(self):
        return len(self.slopes)

    @property
    def height(self) -> int:
        return len(self.slopes)

    def total(self) -> Fraction:
        return sum(self.slopes, Fraction(0))

    def multiplicity(self, s) -> int:
        s = Fraction(s)
        return sum(1 for x in self.slopes if x == s)

    def ordinates(self) -> list[Fraction]:
        out = [Fraction(0)]
        for s in self.slopes:
            out.append(out[-1] + s)
        return out

    def lies_on_or_below(self, other: "NewtonPolygon") -> bool:
        """Pointwise comparison of partial sums with equal endpoints."""
        if len(self) != len(other):
            return False
        a, b = self.ordinates(), other.ordinates()
        return a[-1] == b[-1] and all(x <= y for x, y in zip(a, b))

    def dual(self) -> "NewtonPolygon":
        return NewtonPolygon(tuple(1 - s for s in self.slopes))

    def to_strings(self) -> list[str]:
        return [f"{s.numerator}/{s.denominator}" for s in self.slopes]

    def __add__(self, other: "NewtonPolygon") -> "NewtonPolygon":
        return NewtonPolygon(self.slopes + other.slopes)

    def __str__(self):
        groups = Counter(self.slopes)
        return "{" + ", ".join(f"{s}" + (f" x{c}" if c > 1 else "") for s, c in sorted(groups.items())) + "}"


def newton_polygon_from_valuations(vals: list[int | None]) -> list[Fraction]:
    """Slopes of the lower convex hull of points (i, vals[i]); None marks a missing point.

    ``vals[0]`` and ``vals[-1]`` must be present.
    """
    pts = [(i, v) for i, v in enumerate(vals) if v is not None]
    hull: list[tuple[int, int]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above the segment hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes.extend([Fraction(y2 - y1, x2 - x1)] * (x2 - x1))
    return slopes


_TERM = re.compile(r"G_\{(\d+),(\d+)\}(?:\^(\d+))?")


@dataclass(frozen=True)
class IsogenyType:
    """A finite multiset of simple isogeny types G_{m,n}, stored with gcd(m, n) = 1."""

    parts: tuple[tuple[tuple[int, int], int], ...]

    def __post_init__(self):
        c = Counter()
        for (m, n), e in self.parts:
            if (m, n) == (0, 0) or m < 0 or n < 0 or e < 0:
                raise ValueError(f"invalid factor G_{{{m},{n}}}^{e}")
            # G_{gm,gn} is read as the isoclinic isocrystal G_{m,n}^g of the same height
            g = math.gcd(m, n)
            if e:
                c[(m // g, n // g)] += e * g
        object.__setattr__(self, "parts", tuple(sorted(c.items(), key=lambda kv: _order(kv[0]))))

    @classmethod
    def of(cls, *factors) -> "IsogenyType":
        """IsogenyType.of((m, n), (m, n, e), ...)."""
        parts = []
        for fct in factors:
            if len(fct) == 2:
                parts.append(((fct[0], fct[1]), 1))
            else:
                parts.append(((fct[0], fct[1]), fct[2]))
        return cls(tuple(parts))

    @classmethod
    def parse(cls, text: str) -> "IsogenyType":
        text = text.replace(" ", "")
        if not text or text == "0":
            return cls(())
        parts = []
        for term in re.split(r"\+|⊕", text):
            mt = _TERM.fullmatch(term)
            if not mt:
                raise ValueError(f"cannot parse isogeny factor {term!r}")
            parts.append(((int(mt.group(1)), int(mt.group(2))), int(mt.group(3) or 1)))
        return cls(tuple(parts))

    def __str__(self):
        if not self.parts:
            return "0"
        return " + ".join(f"G_{{{m},{n}}}" + (f"^{e}" if e != 1 else "") for (m, n), e in self.parts)

    def counter(self) -> Counter:
        return Counter(dict(self.parts))

    @property
    def height(self) -> int:
        return sum(e * (m + n) for (m, n), e in self.parts)

    @property
    def dimension(self) -> int:
        return sum(e * m for (m, n), e in self.parts)

    def slope_polygon(self) -> NewtonPolygon:
        out = []
        for (m, n), e in self.parts:
            out.extend([Fraction(n, m + n)] * (e * (m + n)))
        return NewtonPolygon(tuple(out))

    def slope_multiplicity(self, s) -> int:
        return self.slope_polygon().multiplicity(s)

    def middle_blocks(self) -> list[tuple[int, int]]:
        return [mn for mn, _ in self.parts if mn[0] and mn[1]]

    def dual(self) -> "IsogenyType":
        return IsogenyType(tuple(((n, m), e) for (m, n), e in self.parts))

    def __add__(self, other: "IsogenyType") -> "IsogenyType":
        return IsogenyType(self.parts + other.parts)

    def scale(self, k: int) -> "IsogenyType":
        return IsogenyType(tuple((mn, e * k) for mn, e in self.parts))

    def is_self_dual(self) -> bool:
        return self == self.dual()

    def decomposable_into_self_duals(self) -> bool:
        """Is there a proper nonempty self-dual summand with self-dual complement?"""
        items = list(self.parts)
        ranges = [range(e + 1) for _, e in items]
        total = tuple(e for _, e in items)
        for pick in itertools.product(*ranges):
            if not any(pick) or pick == total:
                continue
            a = IsogenyType(tuple((mn, k) for (mn, _), k in zip(items, pick)))
            b = IsogenyType(tuple((mn, e - k) for (mn, e), k in zip(items, pick)))
            if a.is_self_dual() and b.is_self_dual():
                return True
        return False

    @classmethod
    def from_slopes(cls, polygon: NewtonPolygon) -> "IsogenyType":
        counts = Counter(polygon.slopes)
        parts = []
        for s, c in counts.items():
            if not 0 <= s <= 1:
                raise ValueError(f"slope {s} outside [0, 1]")
            n, h = s.numerator, s.denominator
            if c % h:
                raise ValueError(f"slope {s} has multiplicity {c}, not a multiple of {h}")
            parts.append(((h - n, n), c // h))
        return cls(tuple(parts))


def _order(mn):
    m, n = mn
    return (Fraction(n, m + n), m + n)


def _simple_types(max_height: int) -> list[tuple[int, int]]:
    out = []
    for h in range(1, max_height + 1):
        for m in range(h + 1):
            if math.gcd(m, h - m) == 1:
                out.append((m, h - m))
    return out


def all_isogeny_types(height: int) -> list[IsogenyType]:
    """Every isogeny type of the given height."""
    simples = _simple_types(height)
    out = []

    def rec(idx, remaining, acc):
        if remaining == 0:
            out.append(IsogenyType(tuple(acc)))
            return
        if idx == len(simples):
            return
        m, n = simples[idx]
        h = m + n
        for e in range(remaining // h, -1, -1):
            rec(idx + 1, remaining - e * h, acc + ([((m, n), e)] if e else []))

    rec(0, height, [])
    return out


def classify_graded_symmetric(height: int) -> set[IsogenyType]:
    """Isogeny types of Z/2Z-graded symmetric Dieudonne modules of a given height.

    Kept: self-dual types whose isoclinic blocks all have even height (an
    unramified quadratic field embeds in the endomorphism algebra of
    G_{m,n}^e only when 2 divides e(m+n)).
    """
    if height % 2 or height < 0 or height > 20:
        raise ValueError("height must be even and at most 20")
    keep = set()
    for t in all_isogeny_types(height):
        if t.is_self_dual() and all((e * (m + n)) % 2 == 0 for (m, n), e in t.parts):
            keep.add(t)
    return keep
