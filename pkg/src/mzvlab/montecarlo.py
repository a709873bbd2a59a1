"""Monte-Carlo estimate of the defining integral behind the weighted sum formulas.

For ``n`` pairs ``0 < x_i < y_i < 1`` the integral is

    I = 1/(k! l!) * int (sum_i mu_i log((1-x_i)/(1-y_i)))^k
                        (sum_i xi_i log(y_i/x_i))^l
                        prod_i dx_i dy_i / ((1 - x_i) y_i),

and ``I`` equals the product side of the corresponding formula.

Sampling, per pair: ``y`` is uniform on (0, 1) and, given ``y``, ``x`` has
density ``1 / ((1 - x) L)`` on ``(0, y)`` with ``L = -log(1 - y)``; by
inverse transform ``x = 1 - (1 - y)^U`` for uniform ``U``.  The importance
weight of the pair is then ``L / y``, which is bounded near ``y = 0`` and
only logarithmically large near ``y = 1``, so the estimator has finite
variance.  In these variables ``log((1-x)/(1-y)) = (1 - U) L`` exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from .theorems import DomainError, ParamVector

__all__ = ["MCResult", "mc_integral"]

_CHUNK = 1 << 16


@dataclass(frozen=True)
class MCResult:
    estimate: float
    stderr: float
    samples: int
    seed: int
    workers: int
    k: int
    l: int
    pairs: int

    def to_dict(self) -> dict:
        return asdict(self)


def _open_unit(rng: np.random.Generator, shape) -> np.ndarray:
    # strictly inside (0, 1): midpoints of a 2^-53 grid
    return (rng.integers(0, 1 << 53, size=shape, dtype=np.int64) + 0.5) / float(1 << 53)


def _worker(rng, n, k, l, mu, xi):
    norm = 1.0 / (math.factorial(k) * math.factorial(l))
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n:
        m = min(_CHUNK, n - done)
        y = _open_unit(rng, (m, len(mu)))
        u = _open_unit(rng, (m, len(mu)))
        big_l = -np.log1p(-y)
        x = -np.expm1(-u * big_l)
        weight = np.prod(big_l / y, axis=1)
        f = weight * norm
        if k:
            f = f * (((1.0 - u) * big_l) @ mu) ** k
        if l:
            f = f * ((np.log(y) - np.log(x)) @ xi) ** l
        total += math.fsum(f)
        total_sq += math.fsum(f * f)
        done += m
    return total, total_sq


def mc_integral(
    k: int,
    l: int,
    pairs: int,
    params: ParamVector,
    samples: int,
    seed: int,
    workers: int = 1,
) -> MCResult:
    """Importance-sampled estimate of the integral with its standard error.

    The sample stream is split with :class:`numpy.random.SeedSequence` into
    ``workers`` independent substreams, so results depend on ``(seed,
    workers)`` and nothing else.
    """
    if pairs not in (2, 3):
        raise DomainError(f"pairs must be 2 or 3, got {pairs}")
    params.require(pairs)
    if samples < 2:
        raise DomainError("need at least 2 samples")
    if k < 0 or l < 0:
        raise DomainError("k and l must be nonnegative")
    if workers < 1:
        raise DomainError("workers must be positive")
    mu = np.array([float(m) for m in params.mu])
    xi = np.array([float(x) for x in params.xi])
    streams = np.random.SeedSequence(seed).spawn(workers)
    base, extra = divmod(samples, workers)
    total = total_sq = 0.0
    for w, child in enumerate(streams):
        n = base + (1 if w < extra else 0)
        if n:
            s, sq = _worker(np.random.default_rng(child), n, k, l, mu, xi)
            total += s
            total_sq += sq
    mean = total / samples
    var = max(total_sq - samples * mean * mean, 0.0) / (samples - 1)
    return MCResult(
        estimate=mean,
        stderr=math.sqrt(var / samples),
        samples=samples,
        seed=seed,
        workers=workers,
        k=k,
        l=l,
        pairs=pairs,
    )
