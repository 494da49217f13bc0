"""Monte Carlo Haar sampling from complex reflections (virtual isometries).

Uniform sphere vectors come from normalized complex gaussians.  A Haar unitary
on U(n) is the product R_n (R_{n-1} (... ) + 1) of embedded reflections.
Everything is vectorized over a leading batch axis.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .engine import DimensionError
from .moments import MomentQuery, QueryError, TermBoundExceeded, exact_moment, resolve_index
from .numerics import to_exact_string

RESAMPLE_EPS = 1e-12
UNIT_TOL = 1e-10
BATCH = 50_000


class SamplerError(ValueError):
    pass


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("WGCALC_WORKERS", "1")))
    except ValueError:
        return 1


@dataclass
class SamplerConfig:
    seed: int = 0
    samples: int = 100_000
    workers: int = field(default_factory=default_workers)
    resample_epsilon: float = RESAMPLE_EPS

    def __post_init__(self):
        if self.samples < 2:
            raise SamplerError("need at least 2 samples for a standard error")
        if self.workers < 1:
            raise SamplerError("worker count must be positive")


@dataclass
class MomentEstimate:
    query: str
    n: int
    samples: int
    seed: int
    mean: complex
    standard_error: float
    exact: Optional[str] = None
    exact_value: Optional[complex] = None

    @property
    def z_score(self) -> Optional[float]:
        if self.exact_value is None:
            return None
        if self.standard_error == 0:
            return 0.0 if abs(self.mean - self.exact_value) == 0 else math.inf
        return abs(self.mean - self.exact_value) / self.standard_error

    def to_json_dict(self) -> dict:
        return {
            "query": self.query,
            "n": self.n,
            "N": self.samples,
            "seed": self.seed,
            "mean": {"re": self.mean.real, "im": self.mean.imag},
            "stderr": self.standard_error,
            "exact": self.exact,
            "z_score": self.z_score,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_json_dict(), **kw)


# ------------------------------------------------------------------ sphere


def sample_sphere(n: int, rng: np.random.Generator, size: Optional[int] = None) -> np.ndarray:
    """Uniform vector(s) on the unit sphere of C^n, shape (n,) or (size, n)."""
    if n < 1:
        raise SamplerError("n must be positive")
    shape = (n,) if size is None else (size, n)
    y = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return y / np.linalg.norm(y, axis=-1, keepdims=True)


def _sample_sphere_away_from_en(n, rng, size, eps):
    x = sample_sphere(n, rng, size)
    bad = np.abs(1 - x[..., -1]) < eps
    while np.any(bad):
        x[bad] = sample_sphere(n, rng, int(bad.sum()))
        bad = np.abs(1 - x[..., -1]) < eps
    return x


# -------------------------------------------------------------- reflection


def build_reflection(x: np.ndarray, eps: float = RESAMPLE_EPS) -> np.ndarray:
    """The complex reflection R with R e_n = x (batched over leading axes)."""
    x = np.asarray(x, dtype=complex)
    norms = np.linalg.norm(x, axis=-1)
    if np.any(np.abs(norms - 1) > 1e-8):
        raise SamplerError("reflection vector must have unit norm")
    n = x.shape[-1]
    batch = x.shape[:-1]
    xn = x[..., -1]
    denom = 1 - np.conj(xn)
    degenerate = np.abs(1 - xn) < eps
    safe = np.where(degenerate, 1.0, denom)
    R = np.zeros(batch + (n, n), dtype=complex)
    eye = np.eye(n - 1)
    xs = x[..., :-1]
    R[..., :-1, :-1] = eye - xs[..., :, None] * np.conj(xs)[..., None, :] / safe[..., None, None]
    R[..., -1, :-1] = ((1 - xn) / safe)[..., None] * np.conj(xs)
    R[..., :, -1] = x
    if np.any(degenerate):
        R[degenerate] = np.eye(n)
    return R


def _embed(g: np.ndarray, n: int) -> np.ndarray:
    """g (+) I to size n, batched."""
    m = g.shape[-1]
    out = np.zeros(g.shape[:-2] + (n, n), dtype=complex)
    out[..., :m, :m] = g
    idx = np.arange(m, n)
    out[..., idx, idx] = 1
    return out


def virtual_isometry(xs: List[np.ndarray], eps: float = RESAMPLE_EPS) -> List[np.ndarray]:
    """g_1, ..., g_n from sphere vectors x_1 in C^1, ..., x_n in C^n."""
    gs = []
    g = None
    for m, x in enumerate(xs, start=1):
        x = np.asarray(x, dtype=complex)
        if x.shape[-1] != m:
            raise SamplerError(f"vector {m} must lie in C^{m}")
        r = build_reflection(x, eps)
        g = r if g is None else r @ _embed(g, m)
        gs.append(g)
    return gs


def sample_haar_unitary(
    n: int, rng: np.random.Generator, size: Optional[int] = None, eps: float = RESAMPLE_EPS
) -> np.ndarray:
    """Haar unitary (batch) built as a product of embedded reflections."""
    if n < 1:
        raise SamplerError("n must be positive")
    b = 1 if size is None else size
    g = sample_sphere(1, rng, b)[:, :, None]
    for m in range(2, n + 1):
        x = _sample_sphere_away_from_en(m, rng, b, eps)
        g = build_reflection(x, eps) @ _embed(g, m)
    return g[0] if size is None else g


def neretin_project(g: np.ndarray, eps: float = RESAMPLE_EPS, check: bool = True) -> np.ndarray:
    """U(n) -> U(n-1): a_ij + a_in a_nj / (1 - a_nn), or the top-left block when a_nn = 1."""
    g = np.asarray(g, dtype=complex)
    if g.ndim < 2 or g.shape[-1] != g.shape[-2]:
        raise SamplerError("neretin_project needs square matrices")
    n = g.shape[-1]
    if n < 2:
        raise SamplerError("neretin_project needs n >= 2")
    if check:
        gh = np.conj(np.swapaxes(g, -1, -2))
        if np.max(np.abs(gh @ g - np.eye(n))) > 1e-8:
            raise SamplerError("input is not unitary")
    ann = g[..., -1, -1]
    degenerate = np.abs(1 - ann) < eps
    safe = np.where(degenerate, 1.0, 1 - ann)
    corr = g[..., :-1, -1:] * g[..., -1:, :-1] / safe[..., None, None]
    corr = np.where(degenerate[..., None, None], 0, corr)
    return g[..., :-1, :-1] + corr


# --------------------------------------------------------------- estimation


def _monomial_values(query: MomentQuery, n: int, mats: dict) -> np.ndarray:
    size = next(iter(mats.values())).shape[0]
    out = np.ones(size, dtype=complex)
    for f in query.factors:
        if f.power == 0:
            continue
        i = resolve_index(f.row, n) - 1
        if f.kind == "x":
            v = mats["x"][:, i]
        else:
            v = mats[f.kind][:, i, resolve_index(f.col, n) - 1]
        if f.conj:
            v = np.conj(v)
        out *= v**f.power
    return out


def _draw_values(query: MomentQuery, n: int, rng, count: int, eps: float) -> np.ndarray:
    target = query.target
    chunks = []
    left = count
    while left > 0:
        b = min(BATCH, left)
        if target == "U":
            mats = {"u": sample_haar_unitary(n, rng, b, eps)}
        else:
            x = _sample_sphere_away_from_en(n, rng, b, eps)
            R = build_reflection(x, eps)
            mats = {"x": x, "r": R, "p": np.eye(n) - R}
        chunks.append(_monomial_values(query, n, mats))
        left -= b
    return np.concatenate(chunks)


def estimate_moment(query: MomentQuery | str, n: int, config: SamplerConfig, with_exact: bool = True) -> MomentEstimate:
    """Sample mean and standard error of the query monomial over ``config.samples`` draws."""
    if isinstance(query, str):
        query = MomentQuery.parse(query)
    if config.samples < 2:
        raise SamplerError("need at least 2 samples")
    # validate indices up front
    for f in query.factors:
        resolve_index(f.row, n)
        if f.col is not None:
            resolve_index(f.col, n)
    w = config.workers
    counts = [config.samples // w + (1 if r < config.samples % w else 0) for r in range(w)]
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(config.seed).spawn(w)]
    if w == 1:
        parts = [_draw_values(query, n, streams[0], counts[0], config.resample_epsilon)]
    else:
        with ThreadPoolExecutor(max_workers=w) as ex:
            parts = list(
                ex.map(lambda a: _draw_values(query, n, a[0], a[1], config.resample_epsilon), zip(streams, counts))
            )
    vals = np.concatenate(parts)
    mean = complex(np.mean(vals))
    var = float(np.sum(np.abs(vals - mean) ** 2) / (len(vals) - 1))
    se = math.sqrt(var / len(vals))
    est = MomentEstimate(str(query), n, len(vals), config.seed, mean, se)
    if with_exact:
        try:
            ex_val = exact_moment(query, n)
        except (QueryError, TermBoundExceeded, DimensionError, ArithmeticError):  # no exact route
            ex_val = None
        if ex_val is not None:
            est.exact = to_exact_string(ex_val)
            est.exact_value = complex(float(ex_val))
    return est
