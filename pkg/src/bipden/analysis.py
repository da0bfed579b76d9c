"""Closed-form evaluators for the benchmark families, plus cross-validation.

These expressions predict partition density and Barber modularity on the
ring-of-bicliques and four-biclique networks for both the ground-truth
partition and the merged partitions that modularity optimization prefers
past its resolution threshold. `cross_check` rebuilds each network, scores
the partitions empirically, and verifies agreement to tolerance, which
exercises the quality functions and generators through an independent path.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidParams, MismatchBeyondTolerance
from .generators import (
    ClosedFormParams,
    four_biclique_network,
    merged_four_biclique_partition,
    merged_ring_partition,
    ring_of_bicliques,
)
from .quality import partition_density

DEFAULT_TOL = 1e-12


def ring_forms(params: ClosedFormParams) -> dict[str, Fraction | None]:
    """Ring closed forms for (m, n, s, k) as exact fractions.

    q_s, d_s score the biclique-per-community partition; q_s2, d_sk score the
    merged partitions (pairs for Q, k consecutive bicliques for D). q_s2 and
    q_gap are None when s is odd, where no pairs partition exists.
    """
    params.validate()
    m, n, s, k = params.m, params.n, params.s, params.k
    mn = m * n
    q_s = Fraction(mn, mn + 1) - Fraction(1, s)
    d_s = Fraction(mn, mn + 1)
    d_sk = Fraction((k * mn + k - 1) ** 2, k**3 * mn * (mn + 1))
    if s % 2 == 0:
        q_s2 = Fraction(2 * mn + 1, 2 * (mn + 1)) - Fraction(2, s)
        q_gap = Fraction(1, s) - Fraction(1, 2 * (mn + 1))
    else:
        q_s2 = None
        q_gap = None
    return {
        "q_s": q_s,
        "q_s2": q_s2,
        "d_s": d_s,
        "d_sk": d_sk,
        "q_gap": q_gap,
        "d_gap": d_s - d_sk,
    }


def four_biclique_forms(m: int, n: int) -> dict[str, Fraction]:
    """Closed forms for the four-biclique network: separate vs merged."""
    if not (2 <= m <= n):
        raise InvalidParams("four-biclique forms need 2 <= m <= n")
    t = 2 * n**2 + 2 * m**2 + 3
    q_separate = (
        (Fraction(n**2, t) - Fraction(n**2 + 1, t) * Fraction(n**2, t))
        + (Fraction(n**2, t) - Fraction(n**2 + 1, t) * Fraction(n**2 + 1, t))
        + (Fraction(m**2, t) - Fraction(m**2 + 1, t) * Fraction(m**2 + 1, t))
        + (Fraction(m**2, t) - Fraction(m**2 + 1, t) * Fraction(m**2, t))
    )
    q_merge = (
        (Fraction(n**2, t) - Fraction(n**2 + 1, t) * Fraction(n**2, t))
        + (Fraction(n**2, t) - Fraction(n**2 + 1, t) * Fraction(n**2 + 1, t))
        + (Fraction(2 * m**2 + 1, t) - Fraction(2 * m**2 + 1, t) * Fraction(2 * m**2 + 2, t))
    )
    d_separate = Fraction(2 * n**2 + 2 * m**2, t)
    d_merge = Fraction(n**2 + n**2, t) + Fraction((2 * m**2 + 1) ** 2, 4 * m**2 * t)
    return {
        "q_separate": q_separate,
        "q_merge": q_merge,
        "q_gap": q_separate - q_merge,
        "d_separate": d_separate,
        "d_merge": d_merge,
        "d_gap": d_separate - d_merge,
    }


def _require(name: str, empirical: float, closed: Fraction, tol: float) -> None:
    if abs(empirical - float(closed)) > tol:
        raise MismatchBeyondTolerance(
            f"{name}: empirical {empirical!r} vs closed form {float(closed)!r}"
        )


def cross_check(params: ClosedFormParams, tol: float = DEFAULT_TOL) -> dict[str, float]:
    """Build the ring, score ground-truth and merged partitions, compare.

    Returns the empirical values; raises MismatchBeyondTolerance on any
    disagreement, which signals an implementation bug rather than bad input.
    """
    forms = ring_forms(params)
    m, n, s, k = params.m, params.n, params.s, params.k
    g, truth = ring_of_bicliques(m, n, s)
    ground = partition_density(g, truth)
    merged = partition_density(g, merged_ring_partition(m, n, s, k))
    out = {
        "d_s": ground.partition_density,
        "q_s": ground.barber_modularity,
        "d_sk": merged.partition_density,
    }
    _require("D_s", out["d_s"], forms["d_s"], tol)
    _require("Q_s", out["q_s"], forms["q_s"], tol)
    _require("D_s/k", out["d_sk"], forms["d_sk"], tol)
    if s % 2 == 0:
        pairs = partition_density(g, merged_ring_partition(m, n, s, 2))
        out["q_s2"] = pairs.barber_modularity
        _require("Q_s/2", out["q_s2"], forms["q_s2"], tol)
    return out


def cross_check_four_biclique(m: int, n: int, tol: float = DEFAULT_TOL) -> dict[str, float]:
    """Same cross-validation for the four-biclique network."""
    forms = four_biclique_forms(m, n)
    g, truth = four_biclique_network(m, n)
    separate = partition_density(g, truth)
    merged = partition_density(g, merged_four_biclique_partition(m, n))
    out = {
        "d_separate": separate.partition_density,
        "q_separate": separate.barber_modularity,
        "d_merge": merged.partition_density,
        "q_merge": merged.barber_modularity,
    }
    _require("D_separate", out["d_separate"], forms["d_separate"], tol)
    _require("Q_separate", out["q_separate"], forms["q_separate"], tol)
    _require("D_merge", out["d_merge"], forms["d_merge"], tol)
    _require("Q_merge", out["q_merge"], forms["q_merge"], tol)
    return out


def sweep_rows(m_values, n_values, s_values, tol: float = DEFAULT_TOL):
    """Cross-checked sweep over ring parameters; yields one row per (m, n, s, k).

    Rows carry the closed-form values (as floats), the gaps, and the merge
    threshold indicator sign(q_gap). Every row is validated empirically
    before being yielded.
    """
    for m in m_values:
        for n in n_values:
            for s in s_values:
                divisors = [k for k in range(2, s) if s % k == 0]
                if not divisors:
                    continue
                g, truth = ring_of_bicliques(m, n, s)
                ground = partition_density(g, truth)
                forms_any = ring_forms(ClosedFormParams(m, n, s, divisors[0]))
                _require("D_s", ground.partition_density, forms_any["d_s"], tol)
                _require("Q_s", ground.barber_modularity, forms_any["q_s"], tol)
                for k in divisors:
                    forms = ring_forms(ClosedFormParams(m, n, s, k))
                    merged = partition_density(g, merged_ring_partition(m, n, s, k))
                    _require("D_s/k", merged.partition_density, forms["d_sk"], tol)
                    row = {
                        "m": m,
                        "n": n,
                        "s": s,
                        "k": k,
                        "d_s": float(forms["d_s"]),
                        "d_sk": float(forms["d_sk"]),
                        "d_gap": float(forms["d_gap"]),
                        "q_s": float(forms["q_s"]),
                        "q_s2": None,
                        "q_gap": None,
                    }
                    if k == 2:
                        _require(
                            "Q_s/2", merged.barber_modularity, forms["q_s2"], tol
                        )
                        row["q_s2"] = float(forms["q_s2"])
                        row["q_gap"] = float(forms["q_gap"])
                    yield row
