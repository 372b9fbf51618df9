"""Self-normalized arithmetic-mean statistic."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import DomainError, as_array


@dataclass
class ClassicMoments:
    mean_vec: np.ndarray
    sd_vec: np.ndarray
    s_stat: np.ndarray
    degenerate_coords: list[int]


def sn_statistic(s) -> ClassicMoments:
    """S_{n,j} = sqrt(n) * mean_j / s_j with s_j^2 the 1/n (not n-1) variance.

    Constant columns get ``nan`` in ``s_stat`` and are listed in
    ``degenerate_coords``.
    """
    x = as_array(s)
    n = x.shape[0]
    if n < 2:
        raise DomainError(f"need n >= 2 observations, got {n}")
    mean = x.mean(axis=0)
    sd = np.sqrt(((x - mean) ** 2).mean(axis=0))
    # exact test on the range: a constant column can have sd ~ 1e-17 from rounding
    ok = np.ptp(x, axis=0) > 0
    stat = np.full(x.shape[1], np.nan)
    stat[ok] = np.sqrt(n) * mean[ok] / sd[ok]
    return ClassicMoments(mean, sd, stat, [int(j) for j in np.flatnonzero(~ok)])
