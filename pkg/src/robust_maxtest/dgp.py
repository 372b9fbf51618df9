"""Synthetic data and adversarial contamination."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._rng import substream
from .critical import psd_sqrt
from .model import BudgetExceeded, InvalidParameter, Sample, as_array

CORRELATION_KINDS = ("Identity", "Equicorrelated", "AR1", "LogDecay", "RankOne")
NOISE_KINDS = ("Gaussian", "StudentT", "SymmetrizedPareto")
STRATEGIES = ("GrossOutlier", "MeanShiftCluster", "SignFlipLargest", "TailExchange")
TAIL_OFFSET = 1e6


@dataclass(frozen=True)
class CorrelationModel:
    kind: str = "Identity"
    rho: float = 0.0

    def __post_init__(self):
        if self.kind not in CORRELATION_KINDS:
            raise InvalidParameter(f"unknown correlation kind {self.kind!r}")
        r = self.rho
        if self.kind == "Equicorrelated" and not 0 <= r < 1:
            raise InvalidParameter(f"Equicorrelated needs rho in [0, 1), got {r}")
        if self.kind == "AR1" and not -1 < r < 1:
            raise InvalidParameter(f"AR1 needs rho in (-1, 1), got {r}")
        if self.kind == "LogDecay" and not r >= 0:
            raise InvalidParameter(f"LogDecay needs rho0 >= 0, got {r}")


def build_correlation(d: int, model: CorrelationModel) -> np.ndarray:
    if d < 1:
        raise InvalidParameter(f"d must be positive, got {d}")
    lag = np.abs(np.subtract.outer(np.arange(d), np.arange(d)))
    if model.kind == "Identity":
        out = np.eye(d)
    elif model.kind == "Equicorrelated":
        out = np.full((d, d), model.rho)
        np.fill_diagonal(out, 1.0)
    elif model.kind == "AR1":
        out = model.rho ** lag.astype(float)
    elif model.kind == "LogDecay":
        out = model.rho / np.log(lag + 2.0)
        np.fill_diagonal(out, 1.0)
        # rho0 too large breaks positive semi-definiteness
        if d > 1 and np.linalg.eigvalsh(out)[0] < -1e-10:
            raise InvalidParameter(f"LogDecay with rho0={model.rho} is not PSD at d={d}")
    else:
        out = np.ones((d, d))
    return out


@dataclass(frozen=True)
class NoiseLaw:
    """Unit-variance noise. ``param`` is the degrees of freedom or the tail index."""

    kind: str = "Gaussian"
    param: float | None = None

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise InvalidParameter(f"unknown noise law {self.kind!r}")
        if self.kind != "Gaussian" and not (self.param is not None and self.param > 2):
            raise InvalidParameter(f"{self.kind} needs a parameter > 2 for finite variance, got {self.param}")

    def draw(self, rng: np.random.Generator, shape) -> np.ndarray:
        if self.kind == "Gaussian":
            return rng.standard_normal(shape)
        if self.kind == "StudentT":
            df = self.param
            return rng.standard_t(df, shape) / math.sqrt(df / (df - 2.0))
        a = self.param
        # classical Pareto(x_m = 1) with a random sign; E X^2 = a / (a - 2)
        mag = 1.0 + rng.pareto(a, shape)
        sign = np.where(rng.random(shape) < 0.5, -1.0, 1.0)
        return sign * mag / math.sqrt(a / (a - 2.0))


def draw_sample(n: int, d: int, law: NoiseLaw, corr, mu, scale, seed: int) -> Sample:
    """Rows mu + scale * (corr^{1/2} e_i) with iid unit-variance noise e_i."""
    corr = np.atleast_2d(np.asarray(corr, dtype=float))
    if corr.shape != (d, d):
        raise InvalidParameter(f"correlation must be {d}x{d}, got {corr.shape}")
    mu = np.broadcast_to(np.asarray(mu, dtype=float), (d,))
    scale = np.broadcast_to(np.asarray(scale, dtype=float), (d,))
    if np.any(scale <= 0):
        raise InvalidParameter("scale entries must be positive")
    e = law.draw(substream(seed), (n, d))
    if not np.array_equal(corr, np.eye(d)):
        e = e @ psd_sqrt(corr, tol=1e-8).root
    return Sample(mu + scale * e)


@dataclass(frozen=True)
class ContaminationPlan:
    """Adversary strategy plus row budget floor(eta_bar * n).

    ``params`` by strategy:
      GrossOutlier: magnitude, coords (0-based column indices)
      MeanShiftCluster: shift (length-d vector)
      SignFlipLargest: none
      TailExchange: k
    """

    strategy: str = "GrossOutlier"
    eta_bar: float = 0.0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise InvalidParameter(f"unknown contamination strategy {self.strategy!r}")
        if not 0 <= self.eta_bar < 0.5:
            raise InvalidParameter(f"eta_bar must lie in [0, 1/2), got {self.eta_bar}")

    def budget(self, n: int) -> int:
        return math.floor(round(self.eta_bar * n, 9))


def tail_exchange(x, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Move the k largest entries of every column to (column max + 1e6).

    Returns the modified copy and the sorted indices of touched rows.
    """
    x = np.array(as_array(x), dtype=float)
    n = x.shape[0]
    if not 0 <= k <= n:
        raise InvalidParameter(f"k must lie in [0, n], got {k}")
    touched = set()
    if k > 0:
        top = np.argsort(x, axis=0, kind="stable")[n - k :]
        cmax = x.max(axis=0)
        for j in range(x.shape[1]):
            x[top[:, j], j] = cmax[j] + TAIL_OFFSET
            touched.update(int(i) for i in top[:, j])
    return x, np.array(sorted(touched), dtype=int)


def contaminate(s, plan: ContaminationPlan, seed: int = 0) -> tuple[Sample, np.ndarray]:
    """Return a contaminated copy and the indices of modified rows.

    The adversary sees the clean sample. Raises BudgetExceeded if a strategy
    would touch more than floor(eta_bar * n) rows.
    """
    x = np.array(as_array(s), dtype=float)
    n, d = x.shape
    budget = plan.budget(n)
    p = plan.params
    if budget == 0 and plan.strategy != "TailExchange":
        return Sample(x), np.array([], dtype=int)

    rng = substream(seed)
    if plan.strategy == "GrossOutlier":
        coords = list(p.get("coords", [0]))
        rows = np.sort(rng.choice(n, size=budget, replace=False))
        x[np.ix_(rows, coords)] = float(p.get("magnitude", 1e6))
    elif plan.strategy == "MeanShiftCluster":
        shift = np.broadcast_to(np.asarray(p["shift"], dtype=float), (d,))
        rows = np.sort(rng.choice(n, size=budget, replace=False))
        x[rows] += shift
    elif plan.strategy == "SignFlipLargest":
        norms = np.abs(x).max(axis=1)
        rows = np.sort(np.argsort(-norms, kind="stable")[:budget])
        x[rows] = -x[rows]
    else:
        x, rows = tail_exchange(x, int(p["k"]))

    if len(rows) > budget:
        raise BudgetExceeded(
            f"{plan.strategy} modifies {len(rows)} rows but the budget is floor({plan.eta_bar} * {n}) = {budget}"
        )
    return Sample(x), rows


@dataclass(frozen=True)
class Scenario:
    """Declarative data-generating process, as read from scenario JSON."""

    n: int
    d: int
    law: NoiseLaw = NoiseLaw()
    correlation: CorrelationModel = CorrelationModel()
    mu: np.ndarray | None = None
    scale: np.ndarray | None = None
    contamination: ContaminationPlan | None = None
    seed: int = 0

    def __post_init__(self):
        if self.n < 2 or self.d < 1:
            raise InvalidParameter(f"need n >= 2 and d >= 1, got n={self.n}, d={self.d}")
        mu = np.zeros(self.d) if self.mu is None else np.asarray(self.mu, dtype=float)
        scale = np.ones(self.d) if self.scale is None else np.asarray(self.scale, dtype=float)
        mu = np.broadcast_to(mu, (self.d,)).copy()
        scale = np.broadcast_to(scale, (self.d,)).copy()
        if np.any(scale <= 0):
            raise InvalidParameter("scale entries must be positive")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "scale", scale)

    def corr_matrix(self) -> np.ndarray:
        return build_correlation(self.d, self.correlation)

    def standardized_shift(self) -> np.ndarray:
        return math.sqrt(self.n) * self.mu / self.scale

    def draw(self, seed: int, corr: np.ndarray | None = None) -> tuple[Sample, np.ndarray]:
        """Clean draw followed by contamination; returns (sample, modified rows)."""
        corr = self.corr_matrix() if corr is None else corr
        clean = draw_sample(self.n, self.d, self.law, corr, self.mu, self.scale, seed)
        if self.contamination is None:
            return clean, np.array([], dtype=int)
        return contaminate(clean, self.contamination, seed)

    @classmethod
    def from_dict(cls, spec: dict) -> Scenario:
        n, d = int(spec["n"]), int(spec["d"])
        law = spec.get("law", {"kind": "Gaussian"})
        corr = spec.get("correlation", {"kind": "Identity"})
        mu = spec.get("mu")
        if isinstance(mu, dict):
            vec = np.zeros(d)
            for j, val in mu.get("sparse", []):
                vec[int(j)] = float(val)
            mu = vec
        cont = spec.get("contamination")
        if cont is not None:
            cont = ContaminationPlan(cont["strategy"], float(cont.get("eta_bar", 0.0)), dict(cont.get("params", {})))
        return cls(
            n=n,
            d=d,
            law=NoiseLaw(law["kind"], law.get("param")),
            correlation=CorrelationModel(corr["kind"], float(corr.get("param", 0.0) or 0.0)),
            mu=mu,
            scale=spec.get("scale"),
            contamination=cont,
            seed=int(spec.get("seed", 0)),
        )

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "d": self.d,
            "law": {"kind": self.law.kind, "param": self.law.param},
            "correlation": {"kind": self.correlation.kind, "param": self.correlation.rho},
            "mu": [float(v) for v in self.mu],
            "scale": [float(v) for v in self.scale],
            "seed": self.seed,
        }
        if self.contamination is not None:
            c = self.contamination
            out["contamination"] = {"strategy": c.strategy, "params": c.params, "eta_bar": c.eta_bar}
        return out
