"""Truncated power series in q, and per-q-order Laurent data in a second variable.

Three layers:

* QSeries: plain truncated series in q with CycScalar coefficients.
* RatFunZ: the exact per-q-degree rational function of z, stored as factor
  lists of degree-at-most-1 polynomials.  Both expansion frames (around z = 0
  and around z = infinity) are derived from this single exact object.
* QZSeries: a two-variable truncation, entries (q-degree d, z-exponent m).
  The q-degree-d entry may have a pole in z of order at most d.  Validity is
  tracked on the anti-diagonal: an entry (d, m) is trusted iff m + d <= zcap.
  That convention makes multiplication lossless: if both factors respect the
  pole bound and are valid to zcap, so is their product.  The same container
  doubles as the 1/z Taylor frame (entries with m >= 0 only).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .scalars import ONE, ZERO, ConsistencyError, CycScalar

__all__ = ["QSeries", "QZSeries", "RatFunZ", "qs_exp", "qs_log"]


def _cyc(x) -> CycScalar:
    if isinstance(x, CycScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return CycScalar(x)
    raise TypeError(f"cannot use {type(x).__name__} as a series coefficient")


class QSeries:
    """Truncated power series sum_{d=0}^{qmax} coeffs[d] q^d."""

    __slots__ = ("coeffs", "qmax")

    def __init__(self, coeffs: Sequence, qmax: int | None = None):
        coeffs = [_cyc(c) for c in coeffs]
        if qmax is None:
            qmax = len(coeffs) - 1
        if qmax < 0:
            raise ValueError("qmax must be nonnegative")
        if len(coeffs) < qmax + 1:
            coeffs = coeffs + [ZERO] * (qmax + 1 - len(coeffs))
        self.coeffs = tuple(coeffs[: qmax + 1])
        self.qmax = qmax

    @classmethod
    def constant(cls, value, qmax: int) -> "QSeries":
        return cls([_cyc(value)], qmax)

    @classmethod
    def zero(cls, qmax: int) -> "QSeries":
        return cls.constant(0, qmax)

    @classmethod
    def one(cls, qmax: int) -> "QSeries":
        return cls.constant(1, qmax)

    @classmethod
    def from_function(cls, f: Callable[[int], object], qmax: int) -> "QSeries":
        return cls([_cyc(f(d)) for d in range(qmax + 1)], qmax)

    def __getitem__(self, d: int) -> CycScalar:
        if d < 0:
            return ZERO
        if d > self.qmax:
            raise IndexError(f"coefficient q^{d} beyond truncation {self.qmax}")
        return self.coeffs[d]

    def truncate(self, qmax: int) -> "QSeries":
        if qmax >= self.qmax:
            return self
        return QSeries(self.coeffs[: qmax + 1], qmax)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        n = min(self.qmax, other.qmax)
        return all(self.coeffs[d] == other.coeffs[d] for d in range(n + 1))

    def __hash__(self):
        return hash(self.coeffs)

    def _binop(self, other, f):
        if isinstance(other, (int, Fraction, CycScalar)):
            other = QSeries.constant(other, self.qmax)
        if not isinstance(other, QSeries):
            return None
        n = min(self.qmax, other.qmax)
        return QSeries([f(self.coeffs[d], other.coeffs[d]) for d in range(n + 1)], n)

    def __add__(self, other):
        out = self._binop(other, lambda x, y: x + y)
        return NotImplemented if out is None else out

    __radd__ = __add__

    def __sub__(self, other):
        out = self._binop(other, lambda x, y: x - y)
        return NotImplemented if out is None else out

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return QSeries([-c for c in self.coeffs], self.qmax)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycScalar)):
            s = _cyc(other)
            return QSeries([c * s for c in self.coeffs], self.qmax)
        if not isinstance(other, QSeries):
            return NotImplemented
        n = min(self.qmax, other.qmax)
        out = [ZERO] * (n + 1)
        for d1, c1 in enumerate(self.coeffs):
            if d1 > n or c1.is_zero():
                continue
            for d2 in range(0, n - d1 + 1):
                c2 = other.coeffs[d2]
                if not c2.is_zero():
                    out[d1 + d2] = out[d1 + d2] + c1 * c2
        return QSeries(out, n)

    __rmul__ = __mul__

    def inverse(self) -> "QSeries":
        c0 = self.coeffs[0]
        if c0.is_zero():
            raise ZeroDivisionError("inverse of a series with zero constant term")
        inv0 = c0.inverse()
        out = [inv0]
        for d in range(1, self.qmax + 1):
            acc = ZERO
            for k in range(1, d + 1):
                ck = self.coeffs[k] if k <= self.qmax else ZERO
                if not ck.is_zero():
                    acc = acc + ck * out[d - k]
            out.append(-inv0 * acc)
        return QSeries(out, self.qmax)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, CycScalar)):
            return self * _cyc(other).inverse()
        if isinstance(other, QSeries):
            return self * other.inverse()
        return NotImplemented

    def __pow__(self, n: int) -> "QSeries":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = QSeries.one(self.qmax)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def d_logq(self) -> "QSeries":
        """The derivation q d/dq."""
        return QSeries([CycScalar(d) * c for d, c in enumerate(self.coeffs)], self.qmax)

    def integrate_logq(self) -> "QSeries":
        """Inverse of q d/dq with constant term 0; requires a zero constant term."""
        if not self.coeffs[0].is_zero():
            raise ValueError("cannot integrate a nonzero constant against dq/q")
        return QSeries(
            [ZERO] + [self.coeffs[d] / d for d in range(1, self.qmax + 1)], self.qmax
        )

    def rational_coeffs(self) -> list[Fraction]:
        return [c.as_rational() for c in self.coeffs]

    def to_json(self) -> list[str]:
        from .scalars import rat_str

        return [rat_str(c.as_rational()) for c in self.coeffs]

    def __repr__(self):
        head = ", ".join(repr(c) for c in self.coeffs[:4])
        return f"QSeries([{head}, ...], qmax={self.qmax})"


def qs_exp(x: QSeries) -> QSeries:
    """exp of a series with zero constant term, exact to truncation.

    Uses the first-order relation n e_n = sum_k (k x_k) e_{n-k}.
    """
    if not x.coeffs[0].is_zero():
        raise ValueError("qs_exp requires a zero constant term")
    out = [ONE]
    for n in range(1, x.qmax + 1):
        acc = ZERO
        for k in range(1, n + 1):
            xk = x.coeffs[k]
            if not xk.is_zero():
                acc = acc + CycScalar(k) * xk * out[n - k]
        out.append(acc / n)
    return QSeries(out, x.qmax)


def qs_log(x: QSeries) -> QSeries:
    """log of a series with constant term 1, exact to truncation."""
    if x.coeffs[0] != ONE:
        raise ValueError("qs_log requires constant term 1")
    dlog = x.d_logq() / x
    return dlog.integrate_logq()


class QZSeries:
    """Entries (q-degree d, z-exponent m) -> CycScalar with poles bounded by m >= -d.

    An entry (d, m) is stored only when trusted, i.e. m + d <= zcap, and only
    when nonzero.  qmax bounds the q-direction.
    """

    __slots__ = ("entries", "qmax", "zcap")

    def __init__(self, entries: dict, qmax: int, zcap: int):
        self.qmax = qmax
        self.zcap = zcap
        clean = {}
        for (d, m), c in entries.items():
            c = _cyc(c)
            if c.is_zero():
                continue
            if d < 0 or d > qmax:
                continue
            if m < -d:
                raise ConsistencyError(
                    f"pole bound violated: entry at q^{d} z^{m} deeper than z^{-d}"
                )
            if m + d > zcap:
                continue
            clean[(d, m)] = c
        self.entries = clean

    @classmethod
    def one(cls, qmax: int, zcap: int) -> "QZSeries":
        return cls({(0, 0): ONE}, qmax, zcap)

    def get(self, d: int, m: int) -> CycScalar:
        return self.entries.get((d, m), ZERO)

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, QZSeries):
            return NotImplemented
        qmax = min(self.qmax, other.qmax)
        zcap = min(self.zcap, other.zcap)
        keys = set(self.entries) | set(other.entries)
        for (d, m) in keys:
            if d > qmax or m + d > zcap:
                continue
            if self.get(d, m) != other.get(d, m):
                return False
        return True

    def __hash__(self):
        raise TypeError("QZSeries is unhashable")

    def _binop(self, other, f):
        qmax = min(self.qmax, other.qmax)
        zcap = min(self.zcap, other.zcap)
        out = {}
        for key in set(self.entries) | set(other.entries):
            d, m = key
            out[key] = f(self.get(d, m), other.get(d, m))
        return QZSeries(out, qmax, zcap)

    def __add__(self, other):
        if not isinstance(other, QZSeries):
            return NotImplemented
        return self._binop(other, lambda x, y: x + y)

    def __sub__(self, other):
        if not isinstance(other, QZSeries):
            return NotImplemented
        return self._binop(other, lambda x, y: x - y)

    def __neg__(self):
        return QZSeries({k: -c for k, c in self.entries.items()}, self.qmax, self.zcap)

    def scale(self, s) -> "QZSeries":
        s = _cyc(s)
        return QZSeries({k: c * s for k, c in self.entries.items()}, self.qmax, self.zcap)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycScalar)):
            return self.scale(other)
        if not isinstance(other, QZSeries):
            return NotImplemented
        qmax = min(self.qmax, other.qmax)
        zcap = min(self.zcap, other.zcap)
        out: dict = {}
        for (d1, m1), c1 in self.entries.items():
            if d1 > qmax:
                continue
            for (d2, m2), c2 in other.entries.items():
                d = d1 + d2
                if d > qmax:
                    continue
                m = m1 + m2
                if m + d > zcap:
                    continue
                key = (d, m)
                prev = out.get(key)
                prod = c1 * c2
                out[key] = prod if prev is None else prev + prod
        result = QZSeries(out, qmax, zcap)
        result._assert_pole_bound()
        return result

    __rmul__ = __mul__

    def _assert_pole_bound(self):
        for (d, m) in self.entries:
            if m < -d:
                raise ConsistencyError(f"pole bound violated at q^{d} z^{m}")

    def mul_qseries(self, s: QSeries) -> "QZSeries":
        qmax = min(self.qmax, s.qmax)
        out: dict = {}
        for (d1, m), c1 in self.entries.items():
            for d2 in range(0, qmax - d1 + 1):
                c2 = s.coeffs[d2]
                if c2.is_zero():
                    continue
                key = (d1 + d2, m)
                prev = out.get(key)
                prod = c1 * c2
                out[key] = prod if prev is None else prev + prod
        return QZSeries(out, qmax, self.zcap)

    def div_qseries(self, s: QSeries) -> "QZSeries":
        """Divide by a q-series with invertible constant term (z-structure untouched)."""
        return self.mul_qseries(s.inverse())

    def mul_z_power(self, k: int) -> "QZSeries":
        """Multiply by z^k (k may be negative if no pole bound is broken)."""
        out = {(d, m + k): c for (d, m), c in self.entries.items()}
        return QZSeries(out, self.qmax, self.zcap)

    def shift_q(self, k: int, scalar=1) -> "QZSeries":
        """Multiply by scalar * q^k."""
        s = _cyc(scalar)
        out = {(d + k, m): c * s for (d, m), c in self.entries.items() if d + k <= self.qmax}
        return QZSeries(out, self.qmax, self.zcap)

    def z_coefficient(self, m: int) -> QSeries:
        """The z^m row as a QSeries, valid to min(qmax, zcap - m)."""
        qmax = min(self.qmax, self.zcap - m)
        if qmax < 0:
            raise ValueError(f"z^{m} row not valid at any q-order (zcap={self.zcap})")
        return QSeries([self.get(d, m) for d in range(qmax + 1)], qmax)

    def pole_rows(self) -> Iterable[tuple[int, QSeries]]:
        depths = sorted({m for (_, m) in self.entries if m < 0})
        for m in depths:
            yield m, self.z_coefficient(m)

    def log(self) -> "QZSeries":
        """log of a series equal to 1 + (q-positive part).

        Solved degree by degree from (1 + g) Dh = Dg with D = q d/dq, which
        costs one z-convolution per q-degree pair instead of repeated powers.
        Entry validity follows the same anti-diagonal argument as products.
        """
        if self.get(0, 0) != ONE or any(d == 0 and m != 0 for (d, m) in self.entries):
            raise ValueError("QZSeries.log requires the q^0 row to be exactly 1")
        grows: list[dict] = [{} for _ in range(self.qmax + 1)]
        for (d, m), c in self.entries.items():
            if d >= 1:
                grows[d][m] = c
        hrows: list[dict] = [{} for _ in range(self.qmax + 1)]
        for d in range(1, self.qmax + 1):
            acc = {m: CycScalar(d) * c for m, c in grows[d].items()}
            for dp in range(1, d):
                gpart = grows[d - dp]
                hpart = hrows[dp]
                if not gpart or not hpart:
                    continue
                weight = CycScalar(dp)
                for m1, c1 in gpart.items():
                    left = weight * c1
                    for m2, c2 in hpart.items():
                        m = m1 + m2
                        if m + d > self.zcap:
                            continue
                        prev = acc.get(m)
                        sub = left * c2
                        acc[m] = -sub if prev is None else prev - sub
            inv_d = Fraction(1, d)
            hrows[d] = {m: c * inv_d for m, c in acc.items() if not c.is_zero()}
        out = {
            (d, m): c for d in range(1, self.qmax + 1) for m, c in hrows[d].items()
        }
        return QZSeries(out, self.qmax, self.zcap)

    @classmethod
    def exp_pole(cls, exponent_over_z: QSeries, qmax: int, zcap: int) -> "QZSeries":
        """exp(s/z) for a q-series s with zero constant term, as a QZSeries.

        The k-th term s^k/(k! z^k) has q-order >= k, so the sum terminates.
        """
        if not exponent_over_z.coeffs[0].is_zero():
            raise ValueError("exp_pole requires a zero constant term")
        out = {(0, 0): ONE}
        power = QSeries.one(min(qmax, exponent_over_z.qmax))
        fact = Fraction(1)
        for k in range(1, qmax + 1):
            power = power * exponent_over_z
            fact *= k
            inv = Fraction(1) / fact
            for d in range(k, power.qmax + 1):
                c = power.coeffs[d]
                if c.is_zero():
                    continue
                if d > qmax or (-k) + d > zcap:
                    continue
                out[(d, -k)] = c * inv
        return cls(out, qmax, zcap)

    def __repr__(self):
        return f"QZSeries({len(self.entries)} entries, qmax={self.qmax}, zcap={self.zcap})"


def _poly_mul(p: list[CycScalar], q: list[CycScalar], nmax: int) -> list[CycScalar]:
    out = [ZERO] * (min(len(p) + len(q) - 1, nmax + 1))
    for i, a in enumerate(p):
        if a.is_zero() or i > nmax:
            continue
        for j, b in enumerate(q):
            if i + j > nmax:
                break
            if not b.is_zero():
                out[i + j] = out[i + j] + a * b
    return out


def _poly_inv(p: list[CycScalar], nmax: int) -> list[CycScalar]:
    c0 = p[0]
    if c0.is_zero():
        raise ZeroDivisionError("polynomial inverse requires nonzero constant term")
    inv0 = c0.inverse()
    out = [inv0]
    for n in range(1, nmax + 1):
        acc = ZERO
        for k in range(1, min(n, len(p) - 1) + 1):
            acc = acc + p[k] * out[n - k]
        out.append(-inv0 * acc)
    return out


class RatFunZ:
    """Per q-degree d, an exact rational function of z given by factor lists.

    factors are pairs (a, b) standing for a + b*z.  numerators[d] and
    denominators[d] hold the degree-d factor multisets.
    """

    __slots__ = ("numerators", "denominators", "qmax")

    def __init__(self, numerators, denominators, qmax: int):
        self.numerators = [[(_cyc(a), _cyc(b)) for (a, b) in fl] for fl in numerators]
        self.denominators = [[(_cyc(a), _cyc(b)) for (a, b) in fl] for fl in denominators]
        self.qmax = qmax
        if len(self.numerators) != qmax + 1 or len(self.denominators) != qmax + 1:
            raise ValueError("factor lists must cover q-degrees 0..qmax")

    def with_extra_numerator_factor(self, factor_at) -> "RatFunZ":
        """A copy with one extra numerator factor per degree (None to skip a degree)."""
        nums = []
        for d, fl in enumerate(self.numerators):
            extra = factor_at(d)
            if extra is None:
                nums.append(list(fl))
            else:
                nums.append(list(fl) + [(_cyc(extra[0]), _cyc(extra[1]))])
        return RatFunZ(nums, self.denominators, self.qmax)

    def _split_z_factors(self, d: int):
        """Separate exact z factors from z-regular factors of the degree-d denominator."""
        zpow = 0
        rest = []
        for (a, b) in self.denominators[d]:
            if a.is_zero():
                if b.is_zero():
                    raise ZeroDivisionError("zero factor in denominator")
                zpow += 1
                rest.append((b, ZERO))  # b*z = z * (b)
            else:
                rest.append((a, b))
        return zpow, rest

    def expand_at_zero(self, zcap: int) -> QZSeries:
        """Laurent expansion around z = 0; degree-d entry starts at z^{-pole}."""
        entries: dict = {}
        for d in range(self.qmax + 1):
            zpow, den_rest = self._split_z_factors(d)
            # need num * inv(den_rest) to z-order (zcap - d) + zpow
            order = zcap - d + zpow
            if order < 0:
                continue
            num = [ONE]
            for (a, b) in self.numerators[d]:
                num = _poly_mul(num, [a, b], order)
            den = [ONE]
            for (a, b) in den_rest:
                den = _poly_mul(den, [a, b], order)
            series = _poly_mul(num, _poly_inv(den, order), order)
            for k, c in enumerate(series):
                m = k - zpow
                if not c.is_zero() and m + d <= zcap:
                    entries[(d, m)] = c
        return QZSeries(entries, self.qmax, zcap)

    def _reversed_polys(self, d: int):
        """Reversed numerator and denominator in u = 1/z, plus the u-power shift.

        Returns (shift, num_rev, den_rev) with f_d(u) = u^shift * num_rev/den_rev
        and den_rev(0) != 0.
        """
        def rev(factors):
            poly = [ONE]
            degree = 0
            for (a, b) in factors:
                if b.is_zero():
                    poly = [c * a for c in poly]
                else:
                    poly = _poly_mul(poly, [b, a], len(poly) + 1)
                    degree += 1
            return poly, degree

        num_rev, ndeg = rev(self.numerators[d])
        den_rev, ddeg = rev(self.denominators[d])
        if den_rev[0].is_zero():
            raise ZeroDivisionError("denominator has a factor vanishing at z=infinity")
        return ddeg - ndeg, num_rev, den_rev

    def expand_at_infinity(self, ucap: int) -> QZSeries:
        """Taylor expansion in u = 1/z; entries (d, k) with k >= 0, valid for k + d <= ucap."""
        entries: dict = {}
        for d in range(self.qmax + 1):
            order = ucap - d
            if order < 0:
                continue
            shift, num_rev, den_rev = self._reversed_polys(d)
            if shift < 0:
                raise ValueError(f"q^{d} term diverges at z=infinity")
            series = _poly_mul(num_rev, _poly_inv(den_rev, order), order)
            for k, c in enumerate(series):
                if not c.is_zero() and k + shift + d <= ucap:
                    entries[(d, k + shift)] = c
        return QZSeries(entries, self.qmax, ucap)

    def limit_at_infinity(self) -> QSeries:
        """Per q-degree, lim_{z->inf}; zero when the numerator degree drops."""
        out = []
        for d in range(self.qmax + 1):
            shift, num_rev, den_rev = self._reversed_polys(d)
            if shift < 0:
                raise ValueError(f"q^{d} term diverges at z=infinity")
            out.append(num_rev[0] / den_rev[0] if shift == 0 else ZERO)
        return QSeries(out, self.qmax)
