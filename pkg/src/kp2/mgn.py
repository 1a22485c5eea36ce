"""Exact intersection numbers on moduli of stable curves.

Pure cotangent-class integrals in any genus come from the Virasoro-type
recursion on the largest exponent.  Mixed Hodge integrals are reduced for
genus <= 2: the second Chern character vanishes, which rewrites lambda_2 as
lambda_1^2/2, and each remaining lambda_1 is removed through the boundary
formula for the first Chern character of the Hodge bundle.  A one-step
removal through the third Chern character is kept as an independent route
for cross-checking, never called by the reduction itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .scalars import CycScalar, euler_at, weight

__all__ = [
    "psi_integral",
    "hodge_psi_integral",
    "hodge_second_route",
    "HodgeVertexClass",
    "expand_vertex_class",
]

_psi_memo: dict = {}
_hodge_memo: dict = {}


def _dfact(n: int) -> int:
    """(n)!! for odd n >= -1."""
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def _subsets(indices: tuple[int, ...]):
    n = len(indices)
    for mask in range(1 << n):
        yield tuple(indices[i] for i in range(n) if mask & (1 << i))


def _psi(g: int, exps: tuple[int, ...]) -> Fraction:
    """Total version of the cotangent integral: 0 outside the stable range."""
    n = len(exps)
    if g < 0 or 2 * g - 2 + n <= 0:
        return Fraction(0)
    if sum(exps) != 3 * g - 3 + n:
        return Fraction(0)
    key = (g, tuple(sorted(exps)))
    hit = _psi_memo.get(key)
    if hit is not None:
        return hit
    if g == 0:
        value = Fraction(factorial(n - 3))
        for a in exps:
            value /= factorial(a)
    elif key == (1, (1,)):
        value = Fraction(1, 24)
    else:
        value = _dvv(g, key[1])
    _psi_memo[key] = value
    return value


def _dvv(g: int, exps: tuple[int, ...]) -> Fraction:
    """Recursion on the largest exponent; exps is sorted and has max >= 1."""
    k = exps[-1] - 1
    rest = exps[:-1]
    total = Fraction(0)
    for j, d in enumerate(rest):
        others = rest[:j] + rest[j + 1 :]
        total += Fraction(_dfact(2 * (k + d) + 1), _dfact(2 * d - 1)) * _psi(
            g, others + (k + d,)
        )
    boundary = Fraction(0)
    for a in range(k):
        b = k - 1 - a
        w = _dfact(2 * a + 1) * _dfact(2 * b + 1)
        boundary += w * _psi(g - 1, rest + (a, b))
        idx = tuple(range(len(rest)))
        for g1 in range(g + 1):
            for left in _subsets(idx):
                right = tuple(i for i in idx if i not in left)
                side1 = tuple(rest[i] for i in left) + (a,)
                side2 = tuple(rest[i] for i in right) + (b,)
                boundary += w * _psi(g1, side1) * _psi(g - g1, side2)
    total += boundary / 2
    return total / _dfact(2 * k + 3)


def psi_integral(g: int, exps) -> Fraction:
    """Integral of psi_1^{a_1}...psi_n^{a_n} over the genus-g stable space.

    Zero on dimension mismatch; unstable (g, n) is an error.
    """
    exps = tuple(int(a) for a in exps)
    if any(a < 0 for a in exps):
        raise ValueError("negative cotangent exponent")
    if g < 0 or 2 * g - 2 + len(exps) <= 0:
        raise ValueError(f"unstable pair (g={g}, n={len(exps)})")
    return _psi(g, exps)


def _canonical_lambda(g: int, lam: tuple[int, ...]):
    """Reduce a lambda-monomial to (power of lambda_1, rational factor).

    Uses the vanishing of the second Chern character in genus 2 to rewrite
    lambda_2, and the rank bounds to kill everything else.  Returns None when
    the monomial is the zero class.
    """
    if any(m > g for m in lam):
        return None
    alpha = lam.count(1)
    b = lam.count(2)
    factor = Fraction(1)
    if b:
        if g < 2:
            return None
        alpha += 2 * b
        factor = Fraction(1, 2**b)
    if g == 1 and alpha >= 2:
        return None
    if g == 2 and alpha >= 4:
        return None
    return alpha, factor


def _hodge(g: int, exps: tuple[int, ...], alpha: int) -> Fraction:
    """Total integral of lambda_1^alpha times a cotangent monomial, g <= 2."""
    n = len(exps)
    if g < 0 or 2 * g - 2 + n <= 0:
        return Fraction(0)
    if sum(exps) + alpha != 3 * g - 3 + n:
        return Fraction(0)
    if alpha == 0:
        return _psi(g, exps)
    if (g == 1 and alpha >= 2) or (g == 2 and alpha >= 4) or g == 0:
        return Fraction(0)
    key = (g, tuple(sorted(exps)), alpha)
    hit = _hodge_memo.get(key)
    if hit is not None:
        return hit
    exps = key[1]
    # One Chern-character removal: kappa term, cotangent terms, boundary.
    total = _hodge(g, exps + (2,), alpha - 1)
    for j, a in enumerate(exps):
        total -= _hodge(g, exps[:j] + exps[j + 1 :] + (a + 1,), alpha - 1)
    boundary = _hodge(g - 1, exps + (0, 0), alpha - 1)
    idx = tuple(range(len(exps)))
    for h in range(g + 1):
        for left in _subsets(idx):
            right = tuple(i for i in idx if i not in left)
            side1 = tuple(exps[i] for i in left) + (0,)
            side2 = tuple(exps[i] for i in right) + (0,)
            if 2 * h - 2 + len(side1) <= 0 or 2 * (g - h) - 2 + len(side2) <= 0:
                continue
            for t in range(alpha):
                boundary += (
                    comb(alpha - 1, t)
                    * _hodge(h, side1, t)
                    * _hodge(g - h, side2, alpha - 1 - t)
                )
    total += boundary / 2
    value = total / 12
    _hodge_memo[key] = value
    return value


def hodge_psi_integral(g: int, exps, lam) -> Fraction:
    """Integral of a cotangent monomial against a lambda-monomial, g <= 2.

    lam is the multiset of Hodge indices, e.g. (1, 1, 2) for the product of
    lambda_1 squared with lambda_2.
    """
    if g > 2:
        raise ValueError("Hodge reduction is implemented for genus <= 2 only")
    exps = tuple(int(a) for a in exps)
    lam = tuple(sorted(int(m) for m in lam))
    if any(a < 0 for a in exps) or any(m < 1 for m in lam):
        raise ValueError("malformed monomial")
    if g < 0 or 2 * g - 2 + len(exps) <= 0:
        raise ValueError(f"unstable pair (g={g}, n={len(exps)})")
    reduced = _canonical_lambda(g, lam)
    if reduced is None:
        return Fraction(0)
    alpha, factor = reduced
    return factor * _hodge(g, exps, alpha)


def hodge_second_route(g: int, exps, lam) -> Fraction:
    """Independent evaluation path for cross-checks; not used by the engine.

    Genus 1 with a single lambda_1 at one marking uses the canonical
    identification of the cotangent line with the Hodge line there.  Genus 2
    monomials of total degree 3 go through the third-Chern-character boundary
    formula in a single step, landing directly on cotangent integrals.
    """
    exps = tuple(int(a) for a in exps)
    lam = tuple(sorted(int(m) for m in lam))
    if g == 1 and lam == (1,) and len(exps) == 1:
        return _psi(1, (exps[0] + 1,))
    if g == 2 and lam in ((1, 1, 1), (1, 2)):
        factor = Fraction(1) if lam == (1, 1, 1) else Fraction(1, 2)
        total = _psi(2, exps + (4,))
        for j, a in enumerate(exps):
            total -= _psi(2, exps[:j] + exps[j + 1 :] + (a + 3,))
        boundary = Fraction(0)
        idx = tuple(range(len(exps)))
        for a in range(3):
            b = 2 - a
            sign = -1 if a % 2 else 1
            boundary += sign * _psi(1, exps + (a, b))
            for h in range(3):
                for left in _subsets(idx):
                    right = tuple(i for i in idx if i not in left)
                    side1 = tuple(exps[i] for i in left) + (a,)
                    side2 = tuple(exps[i] for i in right) + (b,)
                    boundary += sign * _psi(h, side1) * _psi(2 - h, side2)
        total += boundary / 2
        return factor * total / 60
    raise ValueError("second route covers only its cross-check cases")


@dataclass
class HodgeVertexClass:
    """Expansion of the localized vertex class at one fixed point.

    expansion maps a sorted lambda-index tuple to its CycScalar coefficient;
    the empty tuple keys the constant term.
    """

    fixed_point: int
    genus: int
    expansion: dict


def expand_vertex_class(i: int, h: int) -> HodgeVertexClass:
    """Product of the three truncated dual Chern polynomials over e_i, h <= 2.

    The three arguments are the tangent weights w_i - w_j at the other fixed
    points and -3 w_i; their product is exactly e_i, so the constant term is
    e_i^{h-1}.  Total lambda-degree is capped at 3, the genus-2 dimension.
    """
    if h > 2:
        raise ValueError("vertex classes are expanded for genus <= 2 only")
    w = weight(i)
    others = [j for j in range(3) if j != i]
    us = [w - weight(others[0]), w - weight(others[1]), CycScalar(-3) * w]
    inv_e = euler_at(i).inverse()
    if h == 0:
        return HodgeVertexClass(i, 0, {(): inv_e})
    # polynomial in (lambda_1, lambda_2) keyed by exponent pairs
    poly = {(0, 0): CycScalar(1)}
    for u in us:
        if h == 1:
            factor = {(0, 0): u, (1, 0): CycScalar(-1)}
        else:
            factor = {(0, 0): u * u, (1, 0): -u, (0, 1): CycScalar(1)}
        new: dict = {}
        for (a1, b1), c1 in poly.items():
            for (a2, b2), c2 in factor.items():
                key = (a1 + a2, b1 + b2)
                prod = c1 * c2
                prev = new.get(key)
                new[key] = prod if prev is None else prev + prod
        poly = new
    expansion = {}
    for (a, b), c in poly.items():
        if a + 2 * b > 3 or c.is_zero():
            continue
        expansion[(1,) * a + (2,) * b] = c * inv_e
    return HodgeVertexClass(i, h, expansion)
