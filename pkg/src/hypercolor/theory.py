"""Closed-form predictions for random regular hypergraphs and their numeric checks.

Natural logarithms throughout.  ``d`` may be any real > 1 here; only the
sampler needs it integral.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb


def _check_c(r, c):
    upper = (r - 1) / r
    if not (0.0 < c < upper):
        raise ValueError(f"c={c!r} must lie strictly inside (0, {upper!r}) for r={r}")


def _log_ratio(z):
    """log(z / (1 + z)) for z > 0, accurate at both ends."""
    return -math.log1p(1.0 / z)


def z2_equation_lhs(r, z):
    """z((z+1)^(r-1) - z^(r-1)) / ((z+1)^r - z^r), strictly increasing from 0 to (r-1)/r.

    Evaluated as t(1 - t^(r-1)) / (1 - t^r) with t = z/(1+z), which avoids the
    cancellation in the raw form when z is large.
    """
    if z <= 0:
        return 0.0
    lt = _log_ratio(z)
    t = math.exp(lt)
    return t * (-math.expm1((r - 1) * lt)) / (-math.expm1(r * lt))


def solve_z2(r, c, tol=1e-12, max_doublings=200):
    """The unique positive root z of ``z2_equation_lhs(r, z) = c``.

    Bisection on a bracket grown geometrically from [0, 1].  The bracket is
    halved until it stops shrinking in floating point, so the result is as
    accurate as the arithmetic allows; ``tol`` is the residual the root must
    then meet.
    """
    if r < 2:
        raise ValueError(f"r must be >= 2, got {r}")
    _check_c(r, c)
    lo, hi = 0.0, 1.0
    for _ in range(max_doublings):
        if z2_equation_lhs(r, hi) >= c:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise ValueError(f"could not bracket the root for r={r}, c={c!r}")
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if z2_equation_lhs(r, mid) < c:
            lo = mid
        else:
            hi = mid
    z = lo if abs(z2_equation_lhs(r, lo) - c) <= abs(z2_equation_lhs(r, hi) - c) else hi
    resid = abs(z2_equation_lhs(r, z) - c)
    if resid > tol:
        raise ValueError(f"root residual {resid:.3g} exceeds tol {tol:.3g} (r={r}, c={c!r})")
    return z


def log_partition_sum(r, z2):
    """log((z2 + 1)^r - z2^r)."""
    if z2 == 0:
        return 0.0
    return r * math.log1p(z2) + math.log1p(-math.exp(r * _log_ratio(z2)))


def z1_of(r, d, z2):
    if d <= 0 or z2 < 0:
        raise ValueError("need d > 0 and z2 >= 0")
    return d / (r * math.exp(log_partition_sum(r, z2)))


def first_moment_value(r, d, c, z2=None):
    """Left-hand side of the first-moment condition for alpha < cn.

    h(d/r) + h(dc) + h(d(1-c)) - h(c) - h(1-c) - h(d) - (d/r) log z1 - dc log z2,
    with h(x) = x log x.

    The raw terms are of order d*c*log d while their sum can be many orders
    smaller, so the expression is reduced before evaluation.  The log d and
    log r parts cancel identically.  With u = z2/(1+z2) the root equation reads
    c = u(1-u^(r-1))/(1-u^r), hence 1-c = (1-u)/(1-u^r), and everything that
    is proportional to d collapses to

        d * (c log(1 - u^(r-1)) - (r-1)/r * log(1 - u^r)),

    which is of order -d u^r / r and carries no cancellation.
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    _check_c(r, c)
    if z2 is None:
        z2 = solve_z2(r, c)
    lu = _log_ratio(z2)
    bulk = c * math.log1p(-math.exp((r - 1) * lu)) - (r - 1) / r * math.log1p(-math.exp(r * lu))
    return math.fsum((d * bulk, -c * math.log(c), -(1 - c) * math.log1p(-c)))


def predicted_chi(r, d):
    if d <= 1:
        raise ValueError(f"prediction needs d > 1, got {d}")
    return ((r - 1) * d / (r * math.log(d))) ** (1.0 / (r - 1))


def predicted_alpha_frac(r, d):
    if d <= 1:
        raise ValueError(f"prediction needs d > 1, got {d}")
    return (r * math.log(d) / ((r - 1) * d)) ** (1.0 / (r - 1))


@dataclass(frozen=True)
class AlphaCertificate:
    c: float
    fm_value: float
    certified: bool
    note: str = ""


def certify_alpha_upper(r, d, eps):
    """Does the first-moment condition certify alpha < (1+eps) * predicted fraction * n?

    For small d the candidate c leaves the window (0, (r-1)/r); that is
    reported through ``note`` rather than raised.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    c = (1 + eps) * predicted_alpha_frac(r, d)
    if not c < (r - 1) / r:
        return AlphaCertificate(c, math.nan, False, "d too small for this eps: c outside (0, (r-1)/r)")
    fm = first_moment_value(r, d, c)
    return AlphaCertificate(c, fm, fm < 0)


@dataclass(frozen=True)
class TheoryReport:
    r: int
    d: float
    eps: float
    c: float
    z2: float
    z1: float
    fm_value: float
    certified: bool
    chi_pred: float
    alpha_frac_pred: float

    def as_dict(self):
        return asdict(self)


REPORT_FIELDS = ("r", "d", "eps", "c", "z2", "z1", "fm_value", "certified", "chi_pred", "alpha_frac_pred")


def theory_report(r, d, eps):
    chi = predicted_chi(r, d)
    afrac = predicted_alpha_frac(r, d)
    c = (1 + eps) * afrac
    if c < (r - 1) / r:
        z2 = solve_z2(r, c)
        z1 = z1_of(r, d, z2)
        fm = first_moment_value(r, d, c, z2=z2)
    else:
        z2 = z1 = fm = math.nan
    return TheoryReport(r, d, eps, c, z2, z1, fm, bool(fm < 0), chi, afrac)


def theory_sweep(r, eps, d_grid):
    return [theory_report(r, d, eps) for d in d_grid]


def empirical_d0(reports):
    """Smallest d in the sweep from which every later grid point is certified, else None."""
    d0 = None
    for rep in reversed(reports):
        if not rep.certified:
            break
        d0 = rep.d
    return d0


# -- meeting-count distribution -------------------------------------------------


@dataclass(frozen=True)
class QkDistribution:
    r: int
    a: int
    probs: tuple  # exact Fractions q_1 .. q_{min(r, a+1)}

    def q(self, k):
        return self.probs[k - 1] if 1 <= k <= len(self.probs) else Fraction(0)


@lru_cache(maxsize=None)
def _cover_counts(r):
    """[x^r] ((1+x)^r - 1)^k for k = 0..r.

    This is the sum over compositions (j_1, ..., j_k) of r into positive parts
    of prod C(r, j_i): the number of ways a fixed r-set can be spread over k
    labelled parts, j_i of its points in part i, with the other r - j_i slots of
    part i filled from outside.
    """
    base = [comb(r, j) for j in range(r + 1)]
    base[0] = 0
    out = [1 if r == 0 else 0]
    poly = [1]
    for _ in range(r):
        nxt = [0] * min(len(poly) + r, r + 1)
        for i, p in enumerate(poly):
            if p:
                for j in range(1, r + 1):
                    if i + j <= r:
                        nxt[i + j] += p * base[j]
        poly = nxt
        out.append(poly[r] if len(poly) > r else 0)
    return tuple(out)


@lru_cache(maxsize=4096)
def qk_distribution(r, a):
    """Exact law of the number of parts a fixed r-set Q meets in a uniform
    partition of r(a+1) points into a+1 parts of size r.

    Choose which k of the a+1 parts meet Q (unordered, hence C(a+1, k) over
    labelled counts divided by k!), how Q splits between them and which outside
    points complete them; the rest of the partition is free.  Normalising by
    the total count leaves

        q_k(a) = cover(r, k) * C(a+1, k) / C(r(a+1), r).
    """
    if r < 1 or a < 0:
        raise ValueError("need r >= 1 and a >= 0")
    cover = _cover_counts(r)
    total = comb(r * (a + 1), r)
    kmax = min(r, a + 1)
    probs = tuple(Fraction(cover[k] * comb(a + 1, k), total) for k in range(1, kmax + 1))
    return QkDistribution(r, a, probs)


def qk_cdf(r, a):
    """Float cumulative q_1, q_1+q_2, ... for sampling K; same formula as
    ``qk_distribution`` evaluated in floating point (cheap for huge a)."""
    cover = _cover_counts(r)
    # C(a+1, k) / C(r(a+1), r) as a running float product
    inv_total = 1.0
    for i in range(r):
        inv_total *= (i + 1) / (r * (a + 1) - i)
    acc = 0.0
    cdf = []
    ck = 1.0
    for k in range(1, min(r, a + 1) + 1):
        ck *= (a + 2 - k) / k
        acc += cover[k] * ck * inv_total
        cdf.append(acc)
    cdf[-1] = 1.0
    return cdf
