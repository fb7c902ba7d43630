import itertools
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("ci")


# ---------------------------------------------------------------------------
# Independent oracles (pure python, fsum accumulation, no library code paths)
# ---------------------------------------------------------------------------


def oracle_sign_average(evals, absolute=True):
    """Brute-force sign average via itertools; the complexity oracle."""
    evals = np.asarray(evals, dtype=float)
    m, n = evals.shape
    sups = []
    for sigma in itertools.product((-1.0, 1.0), repeat=n):
        best = -math.inf
        for i in range(m):
            corr = math.fsum(s * e for s, e in zip(sigma, evals[i])) / n
            if absolute:
                corr = abs(corr)
            best = max(best, corr)
        sups.append(best)
    return math.fsum(sups) / len(sups)


def oracle_cover(dm, eps):
    """All-subsets minimal cover oracle: (size, lexicographically least centers)."""
    m = dm.shape[0]
    best_size = m + 1
    best_sets = []
    for mask in range(1, 1 << m):
        centers = [i for i in range(m) if (mask >> i) & 1]
        if len(centers) > best_size:
            continue
        if all(any(dm[i, c] <= eps for c in centers) for i in range(m)):
            if len(centers) < best_size:
                best_size = len(centers)
                best_sets = [tuple(centers)]
            elif len(centers) == best_size:
                best_sets.append(tuple(centers))
    return best_size, min(best_sets)


def oracle_distance_matrix(evals):
    evals = np.asarray(evals, dtype=float)
    m, n = evals.shape
    dm = np.zeros((m, m))
    for i in range(m):
        for j in range(m):
            dm[i, j] = math.sqrt(
                math.fsum((evals[i, k] - evals[j, k]) ** 2 for k in range(n)) / n
            )
    return dm


def oracle_uniform_deviation(evals, means):
    evals = np.asarray(evals, dtype=float)
    gaps = [
        abs(math.fsum(row) / len(row) - mu) for row, mu in zip(evals, means)
    ]
    return max(gaps)


def oracle_symmetrization(table, probs, n):
    """Exhaustive lhs and rhs of the paired-sample sign identity (fsum)."""
    table = np.asarray(table, dtype=float)
    probs = list(map(float, probs))
    s = len(probs)
    m = table.shape[0]
    lhs_terms, rhs_terms = [], []
    for first in itertools.product(range(s), repeat=n):
        for second in itertools.product(range(s), repeat=n):
            weight = math.prod(probs[k] for k in first) * math.prod(probs[k] for k in second)
            diffs = [[table[i, a] - table[i, b] for a, b in zip(first, second)] for i in range(m)]
            lhs_terms.append(weight * max(abs(math.fsum(d)) for d in diffs))
            inner = []
            for sigma in itertools.product((-1.0, 1.0), repeat=n):
                inner.append(
                    max(abs(math.fsum(sig * v for sig, v in zip(sigma, d))) for d in diffs)
                )
            rhs_terms.append(weight * math.fsum(inner) / len(inner))
    return math.fsum(lhs_terms), math.fsum(rhs_terms)


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
