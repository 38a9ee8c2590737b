"""2-descent bookkeeping for y^2 = x(x + pk)(x - qk).

Square classes, the finite class group generated by the bad primes, triplets
(A, B, C) indexing homogeneous spaces (with A*B*C a perfect square and A > 0),
the action of the 2-torsion points on triplets, the per-triplet solvability
filter, construction of the four three-variable quadrics of a homogeneous
space, and lifting of solutions back to curve points.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .curves import ConcordantCurve, CurvePoint
from .errors import InvalidArgument
from .integers import is_perfect_square, squarefree_part
from .quadforms import TernaryForm, legendre_solvable, reduce_to_legendre


def class_mul(u: int, v: int) -> int:
    """Product of two square classes (squarefree representatives)."""
    g = math.gcd(u, v)
    return (u // g) * (v // g)


def class_of(value) -> int:
    """Squarefree representative of a nonzero rational's square class."""
    f = Fraction(value)
    return squarefree_part(f.numerator * f.denominator)[0]


@dataclass(frozen=True, order=True)
class DescentTriplet:
    """Square classes with x+M = A*a^2, x = B*b^2, x+N = C*c^2; the product
    A*B*C is a perfect square and A is positive."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0:
            raise InvalidArgument("A component must be positive")
        if squarefree_part(self.a * self.b * self.c)[0] != 1:
            raise InvalidArgument(f"{self}: product is not a perfect square")

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def act(self, cls: tuple[int, int, int]) -> "DescentTriplet":
        return DescentTriplet(
            class_mul(self.a, cls[0]), class_mul(self.b, cls[1]), class_mul(self.c, cls[2])
        )

    def sort_key(self):
        return (abs(self.a), abs(self.b), abs(self.c), self.b < 0, self.c < 0)


def _prime_divisors(n: int) -> set[int]:
    out = set()
    n = abs(n)
    if n > 1:
        from .integers import factorize

        out.update(p for p, _ in factorize(n).factors)
    return out


def descent_generators(p: int, q: int, k: int) -> list[int]:
    """{-1, 2} together with the primes of p, q, p+q and k, sorted."""
    if math.gcd(p, q) != 1:
        raise InvalidArgument("p, q must be coprime")
    if k <= 0 or squarefree_part(k)[0] != k:
        raise InvalidArgument("k must be squarefree positive")
    gens = {-1, 2}
    for n in (p, q, p + q, k):
        gens |= _prime_divisors(n)
    return sorted(gens)


def class_group(generators: list[int]) -> list[int]:
    """All squarefree products of subsets of the generators."""
    out = []
    for mask in itertools.product((0, 1), repeat=len(generators)):
        v = 1
        for bit, g in zip(mask, generators):
            if bit:
                v = class_mul(v, g)
        out.append(v)
    return sorted(set(out), key=lambda v: (abs(v), v < 0))


def enumerate_triplets(generators: list[int]) -> list[DescentTriplet]:
    """Every (A, B, sf(A*B)) with A > 0 ranging over the class group."""
    group = class_group(generators)
    positives = [g for g in group if g > 0]
    out = []
    for a in positives:
        for b in group:
            out.append(DescentTriplet(a, b, class_mul(a, b)))
    return out


def torsion_value_table(p: int, q: int, k: int) -> tuple[tuple[int, int, int], ...]:
    """3x3 table of square classes: rows follow the three coordinate maps
    (values x+pk, x, x-qk), columns the 2-torsion points (-pk,0), (0,0),
    (qk,0)."""
    rows = (
        (p * (p + q), p * k, (p + q) * k),
        (-p * k, -p * q, q * k),
        (-(p + q) * k, -q * k, q * (p + q)),
    )
    return tuple(tuple(class_of(v) for v in row) for row in rows)


def torsion_columns(table) -> list[tuple[int, int, int]]:
    return [tuple(table[i][j] for i in range(3)) for j in range(3)]


def torsion_equivalence_classes(
    triplets: list[DescentTriplet], table
) -> list[list[DescentTriplet]]:
    """Partition into orbits under componentwise multiplication by the table
    columns; classes and members are ordered deterministically."""
    columns = torsion_columns(table)
    seen: set[DescentTriplet] = set()
    classes = []
    for t in sorted(triplets, key=DescentTriplet.sort_key):
        if t in seen:
            continue
        orbit = {t}
        for col in columns:
            orbit.add(t.act(col))
        seen |= orbit
        classes.append(sorted(orbit, key=DescentTriplet.sort_key))
    return classes


def class_representative(cls: list[DescentTriplet]) -> DescentTriplet:
    return min(cls, key=DescentTriplet.sort_key)


@dataclass(frozen=True)
class HomogeneousSpace:
    """Four quadrics in three of the four variables (a, b, c, d) cut out by
    homogenizing x+M = A*a^2, x = B*b^2, x+N = C*c^2 with d and eliminating
    x and d."""

    triplet: DescentTriplet
    m: int
    n: int
    e_a: TernaryForm  # vars (a, b, d)
    e_b: TernaryForm  # vars (b, c, d)
    e_c: TernaryForm  # vars (a, c, d)
    e_d: TernaryForm  # vars (a, b, c)

    VAR_NAMES = ("a", "b", "c", "d")

    def quadrics(self) -> list[tuple[str, TernaryForm, tuple[str, str, str]]]:
        return [
            ("e_d", self.e_d, ("a", "b", "c")),
            ("e_a", self.e_a, ("a", "b", "d")),
            ("e_b", self.e_b, ("b", "c", "d")),
            ("e_c", self.e_c, ("a", "c", "d")),
        ]

    def residuals(self, quad: dict[str, int]) -> list[int]:
        vals = []
        for _, form, vars_ in self.quadrics():
            vals.append(form(*(quad[v] for v in vars_)))
        return vals

    def satisfied_by(self, solution: tuple[int, int, int, int]) -> bool:
        named = dict(zip(self.VAR_NAMES, solution))
        return all(r == 0 for r in self.residuals(named))


def _signed_primitive_form(c0: int, c1: int, c2: int) -> TernaryForm:
    # content-free diagonal form with the first nonzero coefficient positive
    from .integers import primitive_normalize

    c0, c1, c2 = primitive_normalize((c0, c1, c2))
    return TernaryForm(c0, 0, c1, c2)


def build_homogeneous_space(t: DescentTriplet, m: int, n: int) -> HomogeneousSpace:
    a, b, c = t.as_tuple()
    e_a = _signed_primitive_form(a, -b, -m)
    e_b = _signed_primitive_form(b, -c, n)
    e_c = _signed_primitive_form(a, -c, -(m - n))
    e_d = _signed_primitive_form(n * a, (m - n) * b, -m * c)
    return HomogeneousSpace(t, m, n, e_a, e_b, e_c, e_d)


def triplet_solvable(t: DescentTriplet, m: int, n: int) -> tuple[bool, str]:
    """Necessary condition: each of the four quadrics must individually pass
    the Legendre criterion after reduction.  Returns (verdict, evidence);
    the evidence names the failing quadric and its reduced coefficients."""
    space = build_homogeneous_space(t, m, n)
    for name, form, _ in space.quadrics():
        reduced = reduce_to_legendre(form)
        if not legendre_solvable(reduced):
            return False, f"{name} reduces to {reduced.coefficients}: criterion fails"
    return True, "all four quadrics pass the criterion"


@dataclass
class Classification:
    """Full descent bookkeeping for one curve: the generator set, every
    triplet, the 2-torsion equivalence classes with per-member verdicts, and
    the surviving candidates (torsion class excluded)."""

    p: int
    q: int
    k: int
    generators: list[int]
    group_size: int
    triplets: list[DescentTriplet]
    table: tuple
    classes: list[dict]

    @property
    def surviving_triplets(self) -> list[DescentTriplet]:
        out = []
        for cls in self.classes:
            if cls["is_torsion_class"]:
                continue
            out.extend(t for t, ok, _ in cls["verdicts"] if ok)
        return sorted(out, key=DescentTriplet.sort_key)

    @property
    def surviving_classes(self) -> list[dict]:
        return [c for c in self.classes if c["survives"] and not c["is_torsion_class"]]

    def class_containing(self, triplet: DescentTriplet) -> dict:
        for cls in self.classes:
            if triplet in cls["members"]:
                return cls
        raise InvalidArgument(f"{triplet} is not a triplet of this curve")


def classify(p: int, q: int, k: int) -> Classification:
    m, n = p * k, -q * k
    generators = descent_generators(p, q, k)
    triplets = enumerate_triplets(generators)
    table = torsion_value_table(p, q, k)
    unit = DescentTriplet(1, 1, 1)
    classes = []
    for members in torsion_equivalence_classes(triplets, table):
        verdicts = []
        for t in members:
            ok, evidence = triplet_solvable(t, m, n)
            verdicts.append((t, ok, evidence))
        classes.append(
            {
                "members": members,
                "representative": class_representative(members),
                "is_torsion_class": unit in members,
                "verdicts": verdicts,
                "survives": all(ok for _, ok, _ in verdicts),
            }
        )
    return Classification(
        p, q, k, generators, 2 ** len(generators), triplets, table, classes
    )


def lift_solution(
    t: DescentTriplet, m: int, n: int, solution: tuple[int, int, int, int]
) -> CurvePoint:
    """Curve point from a homogeneous-space solution (a, b, c, d), d != 0:
    x = B*b^2/d^2 and y = sqrt(ABC)*a*b*c/d^3."""
    space = build_homogeneous_space(t, m, n)
    if not space.satisfied_by(solution):
        raise InvalidArgument(f"{solution} does not satisfy the homogeneous space")
    va, vb, vc, vd = solution
    if vd == 0:
        raise InvalidArgument("d = 0 lifts to a 2-torsion point")
    root = is_perfect_square(t.a * t.b * t.c)
    assert root is not None
    x = Fraction(t.b * vb * vb, vd * vd)
    y = Fraction(root * va * vb * vc, vd**3)
    point = CurvePoint(x, y)
    curve = ConcordantCurve(m, n)
    assert curve.contains(point)
    return point
