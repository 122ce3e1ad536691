"""Exact moments of the signed half-cell statistics by exhaustive
enumeration.

At level ``j`` the ``2**(j+1)`` half cells are equiprobable, so the joint
law of the per-cell score sums is a symmetric multinomial.  Assignments of
``n`` sample points to half cells are enumerated as count vectors weighted
by multinomial coefficients, which groups the ``(2**(j+1))**n`` equiprobable
labeled outcomes without approximation; all arithmetic is exact
integer/rational.

Tracked quantities, for score sum ``S_k`` of cell ``k``, ``H_k = S_k**2``
and ``G_k = (2**j / n) * H_k``:

    E[H], E[H**2], Var(G), E[H_k H_k'] (k != k'), Var(sum_k G_k),
    and P(|2**-j sum_k G_k - 1| >= 1/2).

Two identities hold exactly: ``E[H] = n / 2**j`` and
``E[H_k H_k'] = n (n-1) / 2**(2j)``.  The deviation bound used by the
concentration experiment is calibrated to a nominal variance
``Var(sum_k G_k) = 2**(2j) * eps(n, j)`` with ``eps = (3 - 3/n) / 2**j``;
enumeration gives the smaller exact value ``2**(j+1) * (1 - 1/n)``
(leading constant 2 rather than 3).  Reports carry both values and a
mismatch flag; the nominal value upper-bounds the exact one, so the
Chebyshev argument built on it stays valid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParameterError

#: Cap on the labeled outcome count (2**(j+1))**n accepted for enumeration.
MAX_OUTCOMES = 20_000_000


@dataclass(frozen=True)
class OracleMoments:
    """Exact rational moments for one ``(n, j)`` instance."""

    n: int
    j: int
    e_h: Fraction
    e_h2: Fraction
    var_g: Fraction
    e_hh: Fraction | None
    e_sum_g: Fraction
    var_sum_g: Fraction
    prob_deviation_ge_half: Fraction

    @property
    def expected_e_h(self) -> Fraction:
        """The exact identity ``n / 2**j``."""
        return Fraction(self.n, 1 << self.j)

    @property
    def expected_e_hh(self) -> Fraction:
        """The exact identity ``n (n-1) / 2**(2j)``."""
        return Fraction(self.n * (self.n - 1), 1 << (2 * self.j))

    @property
    def epsilon(self) -> Fraction:
        """``(3 - 3/n) / 2**j``, the concentration rate behind the bound."""
        return Fraction(3 * (self.n - 1), self.n * (1 << self.j))

    @property
    def nominal_var_sum_g(self) -> Fraction:
        """``2**(2j) * epsilon``, the variance the bound is calibrated to."""
        return (1 << (2 * self.j)) * self.epsilon

    @property
    def var_sum_g_matches_nominal(self) -> bool:
        return self.var_sum_g == self.nominal_var_sum_g

    def as_dict(self) -> dict:
        def frac(x):
            return None if x is None else {"fraction": str(x), "value": float(x)}

        return {
            "n": self.n,
            "j": self.j,
            "e_h": frac(self.e_h),
            "e_h2": frac(self.e_h2),
            "var_g": frac(self.var_g),
            "e_hh": frac(self.e_hh),
            "e_sum_g": frac(self.e_sum_g),
            "var_sum_g": frac(self.var_sum_g),
            "prob_deviation_ge_half": frac(self.prob_deviation_ge_half),
            "expected_e_h": frac(self.expected_e_h),
            "expected_e_hh": frac(self.expected_e_hh),
            "nominal_var_sum_g": frac(self.nominal_var_sum_g),
            "var_sum_g_matches_nominal": self.var_sum_g_matches_nominal,
        }


def _compositions(total: int, parts: int):
    """All nonnegative integer vectors of length ``parts`` summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def enumeration_oracle(n: int, j: int) -> OracleMoments:
    """Exact moments for ``n`` points over the level-``j`` half cells."""
    if n < 1:
        raise ParameterError("n", f"need n >= 1 (got {n})")
    if j < 0:
        raise ParameterError("j", f"need j >= 0 (got {j})")
    m = 1 << (j + 1)
    if m**n > MAX_OUTCOMES:
        raise ParameterError(
            "n", f"instance too large: (2**{j + 1})**{n} outcomes exceed {MAX_OUTCOMES}"
        )
    cells = 1 << j
    factorials = [math.factorial(i) for i in range(n + 1)]
    n_fact = factorials[n]

    w_total = 0
    w_h = 0
    w_h2 = 0
    w_hh = 0
    w_sum_h = 0
    w_sum_h_sq = 0
    w_dev = 0
    for counts in _compositions(n, m):
        weight = n_fact
        for c in counts:
            weight //= factorials[c]
        s0 = counts[0] - counts[1]
        h0 = s0 * s0
        sum_h = sum(
            (counts[2 * k] - counts[2 * k + 1]) ** 2 for k in range(cells)
        )
        w_total += weight
        w_h += weight * h0
        w_h2 += weight * h0 * h0
        if cells >= 2:
            h1 = (counts[2] - counts[3]) ** 2
            w_hh += weight * h0 * h1
        w_sum_h += weight * sum_h
        w_sum_h_sq += weight * sum_h * sum_h
        # |2**-j * sum G - 1| >= 1/2  <=>  2*sum_h <= n or 2*sum_h >= 3n
        if 2 * sum_h <= n or 2 * sum_h >= 3 * n:
            w_dev += weight
    assert w_total == m**n

    e_h = Fraction(w_h, w_total)
    e_h2 = Fraction(w_h2, w_total)
    g_scale = Fraction(1 << j, n)
    e_sum_h = Fraction(w_sum_h, w_total)
    e_sum_h_sq = Fraction(w_sum_h_sq, w_total)
    return OracleMoments(
        n=n,
        j=j,
        e_h=e_h,
        e_h2=e_h2,
        var_g=g_scale**2 * (e_h2 - e_h**2),
        e_hh=Fraction(w_hh, w_total) if cells >= 2 else None,
        e_sum_g=g_scale * e_sum_h,
        var_sum_g=g_scale**2 * (e_sum_h_sq - e_sum_h**2),
        prob_deviation_ge_half=Fraction(w_dev, w_total),
    )


def oracle_applicable(n: int, j: int) -> bool:
    return n >= 1 and j >= 0 and (1 << (j + 1)) ** n <= MAX_OUTCOMES
