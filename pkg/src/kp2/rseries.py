"""Asymptotic expansion of the normalized solutions at a fixed point.

The z -> 0 expansion at fixed point i factors as

    Shat_i(H^m) = prefac_m(i) * exp(mu w_i / z) * sum_k R_{m,k} (z/w_i)^k

where mu is a q-series shared by all rows, the prefactors are units, and the
R_{m,k} are elements of the differential ring.  This module extracts mu and
the R rows from exact expansions, fits each row to its Laurent window in L,
verifies every fit against all available q-orders, and checks the recursive
relations between consecutive rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .lring import RingElem
from .mirror import MirrorData, apply_m
from .scalars import ONE, ZERO, ConsistencyError, CycScalar, weight, weight_pow
from .series import QSeries, QZSeries

__all__ = [
    "AsymptoticData",
    "extract_mu",
    "extract_R_rows",
    "verify_lemma_R",
    "verify_unconstrained_fits",
    "solve_linear",
]


def extract_mu(ibar_z0: QZSeries, w: CycScalar) -> QSeries:
    """The exponent series: the z^{-1} row of log of the restriction, over w.

    Raises if the logarithm has any pole deeper than z^{-1}; that the pole
    structure collapses to a single exponential is what makes the asymptotic
    form possible at all.
    """
    qmax = ibar_z0.qmax
    # The log is only needed on its pole rows, so a slimmer anti-diagonal cap
    # keeps the convolution cheap while leaving the z^{-1} row fully valid.
    zc = min(ibar_z0.zcap, max(qmax - 1, 0))
    restricted = QZSeries(ibar_z0.entries, qmax, zc)
    lg = restricted.log()
    for m, row in lg.pole_rows():
        if m <= -2 and not row.is_zero():
            raise ConsistencyError(f"log of restriction has a z^{m} pole")
    return lg.z_coefficient(-1) / w


@dataclass
class AsymptoticData:
    """Extracted asymptotics at one fixed point.

    rows[m][k] is R_{m,k} as a ring element; rows_q[(m, k)] the q-expansion it
    was fitted to (already rescaled by w^k, so rational at every fixed point).
    """

    fixed_point: int
    kmax: int
    mu: QSeries
    rows: dict[int, list[RingElem]]
    rows_q: dict[tuple[int, int], QSeries] = field(repr=False, default_factory=dict)


def solve_linear(matrix: list[list[CycScalar]], rhs: list[CycScalar]):
    """Exact Gaussian elimination on a possibly rectangular system.

    Returns the unique solution as a list, or None when underdetermined.
    Raises ConsistencyError when the system is inconsistent.
    """
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    rows = [list(matrix[r]) + [rhs[r]] for r in range(nrows)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for col in range(ncols):
        pivot = None
        for rr in range(r, nrows):
            if not rows[rr][col].is_zero():
                pivot = rr
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [v * inv for v in rows[r]]
        for rr in range(nrows):
            if rr == r:
                continue
            factor = rows[rr][col]
            if factor.is_zero():
                continue
            rows[rr] = [a - factor * b for a, b in zip(rows[rr], rows[r])]
        pivots.append((r, col))
        r += 1
        if r == nrows:
            break
    for rr in range(r, nrows):
        if not rows[rr][ncols].is_zero():
            raise ConsistencyError("inconsistent linear system in row fit")
    if len(pivots) < ncols:
        return None
    sol = [ZERO] * ncols
    for rr, col in pivots:
        sol[col] = rows[rr][ncols]
    return sol


def _fit_row(target: QSeries, m: int, k: int, mirror: MirrorData, x_part: RingElem) -> RingElem:
    """Fit target as x_part plus a Laurent polynomial in L on the window [-m, 2k].

    The window size of equations pins the candidate; the candidate is then
    re-evaluated against every available q-order.
    """
    residual = target - x_part.eval_q(mirror)
    exps = list(range(-m, 2 * k + 1))
    n = len(exps)
    if target.qmax + 1 < n:
        raise ValueError(f"need {n} q-orders to fit row ({m},{k}), have {target.qmax + 1}")
    columns = [RingElem.L(e).eval_q(mirror) for e in exps]
    matrix = [[columns[j][d] for j in range(n)] for d in range(n)]
    rhs = [residual[d] for d in range(n)]
    sol = solve_linear(matrix, rhs)
    if sol is None:
        raise ConsistencyError(f"singular fit window for row ({m},{k})")
    fitted = RingElem({(e, 0, 0): c for e, c in zip(exps, sol)}) + x_part
    if fitted.eval_q(mirror) != target:
        raise ConsistencyError(f"row ({m},{k}) fit fails beyond its defining orders")
    return fitted


def extract_R_rows(mirror: MirrorData, kmax: int, i: int = 0) -> AsymptoticData:
    """Compute mu and the rows R_{m,k}, m = 0..2, k = 0..kmax, at fixed point i.

    Requires mirror.qmax >= 2*kmax + 2 so every fit window is determined.
    """
    qmax = mirror.qmax
    if qmax < 2 * kmax + 2:
        raise ValueError(f"qmax={qmax} too small for kmax={kmax}; need at least {2 * kmax + 2}")
    w = weight(i)
    zcap = kmax + qmax
    ibar_z0 = mirror.ibar[i].expand_at_zero(zcap)
    mu = extract_mu(ibar_z0, w)
    if QSeries.one(qmax) + mu.d_logq() != mirror.L:
        raise ConsistencyError("1 + D mu = L failed")

    sbar = [ibar_z0]
    sbar.append(apply_m(sbar[0], w).div_qseries(mirror.C1))
    sbar.append(apply_m(sbar[1], w).div_qseries(mirror.C2))
    expfac = QZSeries.exp_pole(-(mu * w), qmax, zcap)
    prefac = [
        QSeries.one(qmax),
        mirror.L * mirror.c * w,
        (mirror.C1 / mirror.L) * w**2,
    ]

    rows_q: dict[tuple[int, int], QSeries] = {}
    for m in range(3):
        hat = expfac * sbar[m]
        for depth, row in hat.pole_rows():
            if not row.is_zero():
                raise ConsistencyError(
                    f"normalized row {m} keeps a z^{depth} pole at fixed point {i}"
                )
        hat = hat.div_qseries(prefac[m])
        for k in range(kmax + 1):
            rows_q[(m, k)] = hat.z_coefficient(k) * weight_pow(i, k)

    rows: dict[int, list[RingElem]] = {}
    minus_x_over_l = -(RingElem.X() / RingElem.L(1))
    for m in range(3):
        fitted_row = []
        for k in range(kmax + 1):
            if m == 2 and k >= 1:
                x_part = minus_x_over_l * rows[1][k - 1]
            else:
                x_part = RingElem.zero()
            fitted_row.append(_fit_row(rows_q[(m, k)], m, k, mirror, x_part))
        rows[m] = fitted_row
    for m in range(3):
        if rows[m][0] != RingElem.one():
            raise ConsistencyError(f"R_{m},0 is not 1")
    return AsymptoticData(fixed_point=i, kmax=kmax, mu=mu, rows=rows, rows_q=rows_q)


def verify_unconstrained_fits(mirror: MirrorData, asym: AsymptoticData, kcap: int | None = None):
    """Refit rows on a widened window with a free X block and compare.

    Only (m, k) pairs whose widened system stays uniquely solvable within the
    available q-orders are checked; returns the list of pairs verified.
    Disagreement with the constrained fit is fatal.
    """
    qmax = mirror.qmax
    verified = []
    for m in range(3):
        for k in range(len(asym.rows[m])):
            if kcap is not None and k > kcap:
                continue
            l_exps = list(range(-m - 2, 2 * k + 3))
            x_exps = list(range(-m - 2, max(2 * k - 1, -m - 1)))
            n = len(l_exps) + len(x_exps)
            if n > qmax + 1:
                continue
            columns = [RingElem.L(e).eval_q(mirror) for e in l_exps]
            columns += [(RingElem.X() * RingElem.L(e)).eval_q(mirror) for e in x_exps]
            target = asym.rows_q[(m, k)]
            matrix = [[col[d] for col in columns] for d in range(qmax + 1)]
            rhs = [target[d] for d in range(qmax + 1)]
            sol = solve_linear(matrix, rhs)
            if sol is None:
                continue
            refit = RingElem({(e, 0, 0): c for e, c in zip(l_exps, sol[: len(l_exps)])})
            refit = refit + RingElem(
                {(e, 1, 0): c for e, c in zip(x_exps, sol[len(l_exps) :])}
            )
            if refit != asym.rows[m][k]:
                raise ConsistencyError(f"unconstrained refit of row ({m},{k}) disagrees")
            verified.append((m, k))
    if not verified:
        raise ConsistencyError("no row admitted an unconstrained refit")
    return verified


def verify_lemma_R(asym: AsymptoticData) -> list[tuple[str, int, RingElem]]:
    """Residuals of the row recursions; all must be zero.

    With r_m = rows[m] and B = DL/L^2 - X/L:
        r1[p+1] = r0[p+1] + D r0[p] / L
        r2[p+1] = r1[p+1] + D r1[p] / L + B r1[p]
        r0[p+1] = r2[p+1] + D r2[p] / L - B r2[p]
    plus the closed two-step form of r2 in terms of r0 alone.
    """
    L1 = RingElem.L(1)
    L2 = RingElem.L(2)
    dl = L1.derive()
    bterm = dl / L2 - RingElem.X() / L1
    r0, r1, r2 = asym.rows[0], asym.rows[1], asym.rows[2]
    out = []
    for p in range(asym.kmax):
        out.append(("row1", p, r1[p + 1] - r0[p + 1] - r0[p].derive() / L1))
        out.append(
            ("row2", p, r2[p + 1] - r1[p + 1] - r1[p].derive() / L1 - bterm * r1[p])
        )
        out.append(
            ("row0", p, r0[p + 1] - r2[p + 1] - r2[p].derive() / L1 + bterm * r2[p])
        )
    for p in range(asym.kmax - 1):
        closed = (
            r0[p + 2]
            + r0[p + 1].derive() * 2 / L1
            + (dl / L2) * r0[p + 1]
            + r0[p].derive().derive() / L2
            - (r0[p + 1] / L1 + r0[p].derive() / L2) * RingElem.X()
        )
        out.append(("closed2", p, r2[p + 2] - closed))
    return out
