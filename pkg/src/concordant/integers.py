"""Exact integer arithmetic: factoring, square detection, coprime pair streams.

Everything here is pure and deterministic; values are plain Python ints, so
results are exact at any size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .errors import FactorizationIncomplete, InvalidArgument

# ---------------------------------------------------------------------------
# perfect squares

# residue masks: n can only be a square if n mod m is a square mod m
_SQ_MOD_64 = frozenset((i * i) % 64 for i in range(64))
_SQ_MOD_63 = frozenset((i * i) % 63 for i in range(63))
_SQ_MOD_65 = frozenset((i * i) % 65 for i in range(65))
_SQ_MOD_11 = frozenset((i * i) % 11 for i in range(11))


def is_perfect_square(n: int) -> Optional[int]:
    """Return the nonnegative root if n is a perfect square, else None."""
    if n < 0:
        return None
    if n % 64 not in _SQ_MOD_64:
        return None
    if n % 63 not in _SQ_MOD_63:
        return None
    if n % 65 not in _SQ_MOD_65:
        return None
    if n % 11 not in _SQ_MOD_11:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


# ---------------------------------------------------------------------------
# factoring

_SPF_LIMIT = 1 << 20
_spf_table: list[int] | None = None


def _spf() -> list[int]:
    # smallest-prime-factor sieve; built once, on first use
    global _spf_table
    if _spf_table is None:
        table = list(range(_SPF_LIMIT))
        for i in range(2, math.isqrt(_SPF_LIMIT) + 1):
            if table[i] == i:
                for j in range(i * i, _SPF_LIMIT, i):
                    if table[j] == j:
                        table[j] = i
        _spf_table = table
    return _spf_table


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic for n below 3.3e24, 12 fixed bases beyond."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = (x * x) % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int, budget: int) -> Optional[int]:
    # Brent's cycle variant of Pollard rho; returns a nontrivial factor or None
    if n % 2 == 0:
        return 2
    for c in range(1, 20):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        steps = 0
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                steps += min(m, r - k)
                if steps > budget:
                    return None
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    return None


@dataclass(frozen=True)
class Factorization:
    """sign * product(p^e) with primes strictly increasing."""

    sign: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        v = self.sign
        for p, e in self.factors:
            v *= p**e
        return v

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def factorize(n: int, budget: int = 1_000_000) -> Factorization:
    """Complete factorization of n != 0.

    Trial division through a smallest-prime-factor table, then Miller-Rabin +
    Brent rho on whatever is left.  `budget` caps the total rho iterations;
    exceeding it with a composite cofactor raises FactorizationIncomplete
    rather than silently treating the cofactor as prime.
    """
    if n == 0:
        raise InvalidArgument("cannot factor 0")
    sign = 1 if n > 0 else -1
    m = abs(n)
    counts: dict[int, int] = {}

    def _add(p, e=1):
        counts[p] = counts.get(p, 0) + e

    if m < _SPF_LIMIT:
        table = _spf()
        while m > 1:
            p = table[m]
            _add(p)
            m //= p
    else:
        for p in (2, 3, 5):
            while m % p == 0:
                _add(p)
                m //= p
        # wheel over 30 for the small range
        k, wheel = 7, (4, 2, 4, 2, 4, 6, 2, 6)
        i = 0
        while k * k <= m and k < 1 << 16:
            while m % k == 0:
                _add(k)
                m //= k
            k += wheel[i]
            i = (i + 1) % 8
        stack = [m] if m > 1 else []
        while stack:
            v = stack.pop()
            if v == 1:
                continue
            if v < _SPF_LIMIT:
                table = _spf()
                while v > 1:
                    p = table[v]
                    _add(p)
                    v //= p
                continue
            if is_probable_prime(v):
                _add(v)
                continue
            root = is_perfect_square(v)
            if root is not None:
                stack.extend((root, root))
                continue
            d = _brent_rho(v, budget)
            if d is None or d in (1, v):
                partial = Factorization(sign, tuple(sorted(counts.items())))
                raise FactorizationIncomplete(n, partial, v)
            stack.extend((d, v // d))
    return Factorization(sign, tuple(sorted(counts.items())))


def squarefree_part(n: int) -> tuple[int, int]:
    """Split n != 0 as s * r^2 with s squarefree and sign(s) = sign(n)."""
    if n == 0:
        raise InvalidArgument("0 has no squarefree decomposition")
    sign = 1 if n > 0 else -1
    m = abs(n)
    s, r = 1, 1
    if m < _SPF_LIMIT:
        table = _spf()
        while m > 1:
            p = table[m]
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e & 1:
                s *= p
            r *= p ** (e // 2)
    else:
        for p, e in factorize(n).factors:
            if e & 1:
                s *= p
            r *= p ** (e // 2)
    return sign * s, r


def is_squarefree(n: int) -> bool:
    return n != 0 and squarefree_part(n)[0] == n


# ---------------------------------------------------------------------------
# vectors

def primitive_normalize(v: Sequence[int]) -> tuple[int, ...]:
    """Divide by the gcd and make the first nonzero entry positive."""
    g = 0
    for x in v:
        g = math.gcd(g, x)
    if g == 0:
        raise InvalidArgument("zero vector has no primitive representative")
    out = [x // g for x in v]
    for x in out:
        if x != 0:
            if x < 0:
                out = [-y for y in out]
            break
    return tuple(out)


def vector_content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = math.gcd(g, x)
    return g


# ---------------------------------------------------------------------------
# coprime parameter enumeration

@dataclass(frozen=True)
class RadiusSchedule:
    """Successive max-norm shells start, start+1, ... up to cap (inclusive).

    Each shell holds the coprime pairs (a, b), b >= 0, with max(|a|, |b|)
    equal to the shell radius; shells are disjoint and, taken from radius 1,
    exhaust every coprime pair up to the cap.
    """

    start: int = 1
    cap: Optional[int] = None

    def __post_init__(self):
        if self.start < 1:
            raise InvalidArgument("schedule start must be >= 1")
        if self.cap is not None and self.cap < self.start:
            raise InvalidArgument("schedule cap below start")

    def shells(self) -> Iterator[int]:
        r = self.start
        while self.cap is None or r <= self.cap:
            yield r
            r += 1


def shell_pairs(r: int) -> list[tuple[int, int]]:
    """Coprime pairs (a, b), b >= 0, max(|a|, |b|) == r, lexicographic order."""
    out = []
    for a in range(-r, r + 1):
        if abs(a) == r:
            bs = range(0, r + 1)
        else:
            bs = (r,)
        for b in bs:
            if (a, b) != (0, 0) and math.gcd(a, b) == 1:
                out.append((a, b))
    return out


def euler_phi(n: int) -> int:
    if n < 1:
        raise InvalidArgument("totient needs a positive integer")
    out = n
    for p, _ in factorize(n).factors:
        out -= out // p
    return out if n > 1 else 1


def shell_size(r: int) -> int:
    """len(shell_pairs(r)) without generating the shell: both edges of the
    ring contribute 2*phi(r) coprime pairs (plus the axis pair at radius 1)."""
    if r == 1:
        return 5
    return 4 * euler_phi(r)


def coprime_pairs(schedule: RadiusSchedule) -> Iterator[tuple[int, int]]:
    """Stream of coprime pairs in nondecreasing max-norm, lexicographic in shell."""
    for r in schedule.shells():
        yield from shell_pairs(r)
