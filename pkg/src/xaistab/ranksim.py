"""Similarity and divergence measures over ranked feature lists.

All functions accept a RankedList, a sequence of (feature, weight) pairs, or a
bare sequence of feature strings (weights default to 0 where they are not
used). Rankings are compared by feature identity; weights enter only the
measures defined over them (lp_distance, center_of_mass).
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import ParameterError


@dataclass(frozen=True)
class RankedList:
    """Features in rank order with their (signed) weights."""

    items: tuple[tuple[str, float], ...]

    @property
    def features(self) -> tuple[str, ...]:
        return tuple(f for f, _ in self.items)

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(w for _, w in self.items)

    def __len__(self) -> int:
        return len(self.items)


def as_ranked(x) -> RankedList:
    """Coerce supported input shapes into a RankedList."""
    if isinstance(x, RankedList):
        return x
    items = []
    for entry in x:
        if isinstance(entry, str):
            items.append((entry, 0.0))
        else:
            f, w = entry
            items.append((str(f), float(w)))
    feats = [f for f, _ in items]
    if len(set(feats)) != len(feats):
        raise ParameterError("ranked list contains duplicate features")
    return RankedList(items=tuple(items))


def _features(x) -> tuple[str, ...]:
    return as_ranked(x).features


def _check_p(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise ParameterError(f"p must lie in (0, 1), got {p}")


def rbo(a, b, p: float) -> float:
    """Extrapolated rank-biased overlap of two ranked feature lists.

    Computes the weighted sum of prefix agreements A_d = |a[:d] & b[:d]| / d
    with geometric depth weights parameterized by p, extended past the
    observed depths by assuming the final agreement persists. Handles unequal
    lengths; returns exactly 1.0 for identical lists and 0.0 for disjoint
    ones.
    """
    _check_p(p)
    fa, fb = _features(a), _features(b)
    if list(fa) == list(fb):
        return 1.0
    if not fa or not fb:
        return 0.0
    short, long_ = (fa, fb) if len(fa) <= len(fb) else (fb, fa)
    s, l = len(short), len(long_)

    # Overlaps via explicit prefix sets; lists are short enough that the
    # incremental bookkeeping would buy nothing but bugs.
    sum1 = 0.0
    x_at_s = 0
    for d in range(1, l + 1):
        x = len(set(short[: min(d, s)]) & set(long_[:d]))
        sum1 += (x / d) * p**d
        if d == s:
            x_at_s = x
    x_at_l = len(set(short) & set(long_))

    sum2 = 0.0
    for d in range(s + 1, l + 1):
        sum2 += x_at_s * (d - s) / (s * d) * p**d

    sum3 = ((x_at_l - x_at_s) / l + x_at_s / s) * p**l
    value = (1.0 - p) / p * (sum1 + sum2) + sum3
    return min(1.0, max(0.0, value))


def rbo_prefix_mass(p: float, k: int) -> float:
    """Fraction of the total rank weight carried by ranks 1..k.

    Closed form: (1 - p^k) + (1 - p) * (k / p) * sum_{d>k} p^d / d, with the
    infinite tail evaluated either directly (small p) or through the log
    identity sum_{d>=1} p^d / d = -ln(1 - p) (large p, where direct summation
    converges slowly but cancellation is benign).
    """
    _check_p(p)
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if p <= 0.9:
        tail = 0.0
        d = k + 1
        while True:
            term = p**d / d
            tail += term
            if term < 1e-19:
                break
            d += 1
    else:
        tail = -math.log1p(-p) - sum(p**d / d for d in range(1, k + 1))
    return (1.0 - p**k) + (1.0 - p) * (k / p) * tail


def solve_p_for_mass(k: int, target_mass: float, tol: float = 1e-6) -> float:
    """Invert rbo_prefix_mass in p by bisection.

    The mass is strictly decreasing in p on (0, 1); targets outside the
    attainable open range raise ParameterError.
    """
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if not 0.0 < target_mass < 1.0:
        raise ParameterError(f"target mass must lie in (0, 1), got {target_mass}")
    lo, hi = 1e-9, 1.0 - 1e-9
    if not rbo_prefix_mass(lo, k) >= target_mass >= rbo_prefix_mass(hi, k):
        raise ParameterError(f"mass {target_mass} unattainable for k={k}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if rbo_prefix_mass(mid, k) > target_mass:
            lo = mid
        else:
            hi = mid
    p = 0.5 * (lo + hi)
    if abs(rbo_prefix_mass(p, k) - target_mass) > tol:
        raise ParameterError(f"bisection failed to reach mass {target_mass} for k={k}")
    return p


def jaccard(a, b, k: int) -> float:
    """Set overlap of the two top-k prefixes; order-blind by construction."""
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    sa, sb = set(_features(a)[:k]), set(_features(b)[:k])
    if not sa and not sb:
        return 1.0
    return len(sa & sb) / len(sa | sb)


def _shared_ranks(a, b) -> tuple[list[int], list[int]]:
    """Dense ranks of features common to both lists, in each list's order."""
    fa, fb = _features(a), _features(b)
    in_b = set(fb)
    shared = [f for f in fa if f in in_b]
    shared_set = set(shared)
    order_b = {f: i for i, f in enumerate(f for f in fb if f in shared_set)}
    ra = list(range(len(shared)))
    rb = [order_b[f] for f in shared]
    return ra, rb


def kendall_tau(a, b) -> Optional[float]:
    """Kendall rank correlation over the shared features; None if fewer than 2."""
    ra, rb = _shared_ranks(a, b)
    m = len(ra)
    if m < 2:
        return None
    concordant = discordant = 0
    for i in range(m):
        for j in range(i + 1, m):
            s = (ra[i] - ra[j]) * (rb[i] - rb[j])
            if s > 0:
                concordant += 1
            elif s < 0:
                discordant += 1
    return (concordant - discordant) / (m * (m - 1) / 2)


def spearman_rho(a, b) -> Optional[float]:
    """Spearman rank correlation over the shared features; None if fewer than 2."""
    ra, rb = _shared_ranks(a, b)
    m = len(ra)
    if m < 2:
        return None
    d2 = sum((x - y) ** 2 for x, y in zip(ra, rb))
    return 1.0 - 6.0 * d2 / (m * (m * m - 1))


def lp_distance(a, b, p: float = 2.0) -> float:
    """L_p norm of the weight difference over the union of features.

    A feature absent from one list contributes weight 0 there, so identical
    orderings with shifted weights still yield positive distance.
    """
    if p < 1:
        raise ParameterError(f"norm order must be >= 1, got {p}")
    ra, rb = as_ranked(a), as_ranked(b)
    wa = dict(ra.items)
    wb = dict(rb.items)
    union = list(dict.fromkeys(list(ra.features) + list(rb.features)))
    total = sum(abs(wa.get(f, 0.0) - wb.get(f, 0.0)) ** p for f in union)
    return total ** (1.0 / p)


def center_of_mass(a) -> Optional[float]:
    """Weighted mean rank position, 1-indexed, using absolute weights.

    None when every weight is zero (the center is undefined).
    """
    ra = as_ranked(a)
    total = sum(abs(w) for w in ra.weights)
    if total == 0.0:
        return None
    return sum(i * abs(w) for i, (_, w) in enumerate(ra.items, start=1)) / total


def metrics_abs_rc_ins(base, pert, k: int) -> tuple[int, float, float]:
    """Perturbation metrics of a perturbed ranking against its base.

    ABS: summed absolute rank displacement of the base's top-k features,
    with features absent from the perturbed list placed at rank
    len(pert) + 1. RC: 1 - max(0, Spearman over the shared top-k features),
    where fewer than 2 shared features counts as correlation 0. INS: fraction
    of the base top-k still in the perturbed top-k.
    """
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    fb, fp = _features(base), _features(pert)
    pos_p = {f: i for i, f in enumerate(fp, start=1)}
    missing_rank = len(fp) + 1

    abs_change = 0
    for rank_b, f in enumerate(fb[:k], start=1):
        abs_change += abs(rank_b - pos_p.get(f, missing_rank))

    rho = spearman_rho(fb[:k], fp[:k])
    corr = 0.0 if rho is None else rho
    rc = 1.0 - max(0.0, corr)

    ins = len(set(fb[:k]) & set(fp[:k])) / k
    return abs_change, rc, ins
