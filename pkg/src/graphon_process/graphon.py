"""Generalized graphons: kernels over interval feature spaces.

A graphon here is a symmetric kernel W: [0, L) x [0, L) -> [0, 1] together
with a measure (scale * Lebesgue) on [0, L), L possibly infinite.  Step
kernels are exact block matrices; analytic kernels come from a small named
registry and are treated as zero beyond a truncation length, which keeps
every integral finite and computable.

Supported operations: pointwise evaluation, L1/L2 norms, degree function,
operator spectra (exact for steps, Nystrom-discretized for analytic
kernels), the step-kernel encoding of a finite graph, measure stretching
to unit L1 norm, and cycle densities via eigenvalue power sums.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    BudgetExceededError,
    ComputationError,
    ConfigError,
    DegenerateGraphonError,
    DomainError,
    ToleranceNotMetError,
)
from .graphs import GrowingGraph

__all__ = [
    "MeasureSpace",
    "StepKernel",
    "AnalyticKernel",
    "GeneralizedGraphon",
    "OperatorSpectrum",
    "CycleDensity",
    "KERNEL_FAMILIES",
    "evaluate",
    "l1_norm",
    "l2_norm_sq",
    "degree_function",
    "operator_spectrum",
    "canonical_graphon",
    "stretch",
    "h_density_graphon",
]

ZERO_EIGENVALUE_TOL = 1e-12
CANONICAL_MAX_VERTICES = 8192
NYSTROM_GRID_START = 64
NYSTROM_GRID_CAP = 4096


@dataclass(frozen=True)
class MeasureSpace:
    """Feature space [0, length) carrying scale * Lebesgue measure."""

    length: float
    scale: float = 1.0

    def __post_init__(self):
        if not (self.length > 0):
            raise ConfigError(f"space length must be positive, got {self.length}")
        if not (self.scale > 0) or not math.isfinite(self.scale):
            raise ConfigError(f"measure scale must be positive and finite, got {self.scale}")

    @property
    def total_measure(self):
        return self.scale * self.length

    @property
    def is_finite(self):
        return math.isfinite(self.length)


@dataclass(frozen=True)
class StepKernel:
    """Piecewise-constant symmetric kernel.

    boundaries: ascending, boundaries[0] == 0; m+1 entries for m blocks.
    values: (m, m) symmetric matrix with entries in [0, 1].
    """

    boundaries: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.boundaries, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "boundaries", b)
        object.__setattr__(self, "values", v)
        if b.ndim != 1 or b.size < 2:
            raise ConfigError("step kernel needs at least two boundaries")
        if abs(b[0]) > 1e-12:
            raise ConfigError("step kernel boundaries must start at 0")
        if np.any(np.diff(b) <= 0):
            raise ConfigError("step kernel boundaries must be strictly ascending")
        m = b.size - 1
        if v.shape != (m, m):
            raise ConfigError(f"values must be {m}x{m} for {m} blocks, got {v.shape}")
        if not np.array_equal(v, v.T):
            raise ConfigError("step kernel values must be symmetric")
        if v.min() < 0.0 or v.max() > 1.0:
            raise ConfigError("step kernel values must lie in [0, 1]")

    @property
    def num_blocks(self):
        return self.boundaries.size - 1

    @property
    def widths(self):
        return np.diff(self.boundaries)

    def block_index(self, x):
        """Block containing each coordinate; caller guarantees 0 <= x < boundaries[-1]."""
        idx = np.searchsorted(self.boundaries, x, side="right") - 1
        return np.clip(idx, 0, self.num_blocks - 1)


def _constant_kernel(params):
    p = float(params["value"])
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"constant kernel value must be in [0, 1], got {p}")
    return lambda x, y: np.full(np.broadcast(x, y).shape, p, dtype=np.float64)


def _exp_product_kernel(params):
    rate = float(params.get("rate", 1.0))
    amp = float(params.get("amplitude", 1.0))
    if rate <= 0:
        raise ConfigError(f"exp_product rate must be positive, got {rate}")
    if not 0.0 <= amp <= 1.0:
        raise ConfigError(f"exp_product amplitude must be in [0, 1], got {amp}")
    return lambda x, y: amp * np.exp(-rate * (np.asarray(x, dtype=np.float64) + y))


def _min_kernel(params):
    if params:
        raise ConfigError("min kernel takes no parameters")
    return lambda x, y: np.minimum(np.asarray(x, dtype=np.float64), y)


# Each family maps a parameter dict to a vectorized symmetric function in [0, 1].
# The min kernel is only range-valid on spaces with length <= 1 (checked below).
KERNEL_FAMILIES = {
    "constant": _constant_kernel,
    "exp_product": _exp_product_kernel,
    "min": _min_kernel,
}


@dataclass(frozen=True)
class AnalyticKernel:
    """Named-family kernel, treated as 0 beyond truncation_length.

    coord_scale rescales input coordinates (used by stretch): the evaluated
    kernel is family(coord_scale * x, coord_scale * y).
    """

    family: str
    params: dict = field(default_factory=dict)
    truncation_length: float = np.inf
    coord_scale: float = 1.0

    def __post_init__(self):
        if self.family not in KERNEL_FAMILIES:
            raise ConfigError(
                f"unknown kernel family {self.family!r}; available: {sorted(KERNEL_FAMILIES)}"
            )
        if not (self.truncation_length > 0):
            raise ConfigError("truncation_length must be positive")
        if not (self.coord_scale > 0):
            raise ConfigError("coord_scale must be positive")
        fn = KERNEL_FAMILIES[self.family](dict(self.params))
        object.__setattr__(self, "_fn", fn)

    def raw(self, x, y):
        """Family function with coordinate scaling, before truncation."""
        s = self.coord_scale
        return self._fn(np.asarray(x, dtype=np.float64) * s, np.asarray(y, dtype=np.float64) * s)


@dataclass(frozen=True)
class GeneralizedGraphon:
    """A symmetric kernel paired with its feature space."""

    space: MeasureSpace
    kernel: object  # StepKernel | AnalyticKernel

    def __post_init__(self):
        if isinstance(self.kernel, StepKernel):
            support = self.kernel.boundaries[-1]
            if not math.isfinite(self.space.length):
                raise ConfigError("step kernels require a finite space length")
            if abs(support - self.space.length) > 1e-9 * max(1.0, support):
                raise ConfigError(
                    f"step boundaries end at {support} but space length is {self.space.length}"
                )
        elif isinstance(self.kernel, AnalyticKernel):
            if not math.isfinite(self.space.length) and not math.isfinite(
                self.kernel.truncation_length
            ):
                raise ConfigError(
                    "analytic kernel on an infinite space needs a finite truncation_length"
                )
            if self.kernel.family == "min" and self.effective_length > 1.0 + 1e-12:
                raise ConfigError("min kernel exceeds [0, 1] range on spaces longer than 1")
        else:
            raise ConfigError(f"unsupported kernel type {type(self.kernel).__name__}")

    @property
    def is_step(self):
        return isinstance(self.kernel, StepKernel)

    @property
    def effective_length(self):
        """Length of the region integrals and sampling operate on."""
        if self.is_step:
            return float(self.space.length)
        return float(min(self.space.length, self.kernel.truncation_length))

    @property
    def block_measures(self):
        if not self.is_step:
            raise DomainError("block_measures only defined for step kernels")
        return self.kernel.widths * self.space.scale


def evaluate(g, x, xp):
    """W(x, x'); symmetric; raises DomainError outside [0, length)."""
    x = np.asarray(x, dtype=np.float64)
    xp = np.asarray(xp, dtype=np.float64)
    length = g.space.length
    if np.any(x < 0) or np.any(xp < 0) or np.any(x >= length) or np.any(xp >= length):
        raise DomainError(f"coordinates must lie in [0, {length})")
    if g.is_step:
        bi = g.kernel.block_index(x)
        bj = g.kernel.block_index(xp)
        out = g.kernel.values[bi, bj]
    else:
        out = g.kernel.raw(x, xp)
        trunc = g.kernel.truncation_length
        mask = (x >= trunc) | (xp >= trunc)
        if np.any(mask):
            out = np.where(mask, 0.0, out)
    if out.ndim == 0:
        return float(out)
    return out


def _gauss_grid(length, n=256):
    """Gauss-Legendre nodes/weights on [0, length]."""
    nodes, weights = np.polynomial.legendre.leggauss(n)
    half = length / 2.0
    return half * (nodes + 1.0), half * weights


def l1_norm(g):
    """Integral of W over the (truncated) space, both arguments weighted by the measure."""
    if g.is_step:
        mu = g.block_measures
        return float(mu @ g.kernel.values @ mu)
    length = g.effective_length
    if not math.isfinite(length):
        raise ComputationError("kernel not integrable without truncation")
    x, w = _gauss_grid(length)
    vals = g.kernel.raw(x[:, None], x[None, :])
    total = float(w @ vals @ w) * g.space.scale**2
    return total


def l2_norm_sq(g):
    """Integral of W^2 (squared Hilbert-Schmidt norm of the operator)."""
    if g.is_step:
        mu = g.block_measures
        return float(mu @ (g.kernel.values**2) @ mu)
    length = g.effective_length
    x, w = _gauss_grid(length)
    vals = g.kernel.raw(x[:, None], x[None, :]) ** 2
    return float(w @ vals @ w) * g.space.scale**2


def degree_function(g, x):
    """D_W(x): integral of W(x, .) against the measure. Accepts scalars or arrays."""
    scalar = np.isscalar(x)
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if np.any(x < 0) or np.any(x >= g.space.length):
        raise DomainError(f"coordinate must lie in [0, {g.space.length})")
    if g.is_step:
        mu = g.block_measures
        bi = g.kernel.block_index(x)
        out = g.kernel.values[bi, :] @ mu
    else:
        length = g.effective_length
        nodes, w = _gauss_grid(length)
        vals = g.kernel.raw(x[:, None], nodes[None, :])
        vals[x >= g.kernel.truncation_length, :] = 0.0
        out = vals @ w * g.space.scale
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class OperatorSpectrum:
    """Two-tailed eigenvalues of the kernel integral operator.

    positive_tail: non-increasing, >= 0, padded with zeros to the requested length.
    negative_tail: non-decreasing toward 0 (entry 0 is the most negative), padded.
    """

    positive_tail: np.ndarray
    negative_tail: np.ndarray
    method: str
    discretization_error_estimate: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "positive_tail", np.asarray(self.positive_tail, dtype=np.float64))
        object.__setattr__(self, "negative_tail", np.asarray(self.negative_tail, dtype=np.float64))

    def power_sum(self, k):
        """Sum of lambda^k over both stored tails."""
        return float(np.sum(self.positive_tail**k) + np.sum(self.negative_tail**k))

    def captured_l2_sq(self):
        return float(np.sum(self.positive_tail**2) + np.sum(self.negative_tail**2))

    def excluded_magnitude_bound(self, l2_sq):
        """Upper bound on |lambda| of any eigenvalue not stored in the tails."""
        pos = self.positive_tail
        neg = self.negative_tail
        bound_pos = pos[-1] if pos.size else math.sqrt(max(l2_sq, 0.0))
        bound_neg = -neg[-1] if neg.size else math.sqrt(max(l2_sq, 0.0))
        return float(max(bound_pos, bound_neg, 0.0))


def _split_tails(eigs, k_pos, k_neg):
    eigs = np.where(np.abs(eigs) < ZERO_EIGENVALUE_TOL, 0.0, eigs)
    pos = np.sort(eigs[eigs > 0])[::-1]
    neg = np.sort(eigs[eigs < 0])
    positive_tail = np.zeros(k_pos)
    negative_tail = np.zeros(k_neg)
    positive_tail[: min(k_pos, pos.size)] = pos[:k_pos]
    negative_tail[: min(k_neg, neg.size)] = neg[:k_neg]
    return positive_tail, negative_tail


def step_operator_matrix(g):
    """m x m matrix with the same nonzero spectrum as the step-kernel operator."""
    mu = g.block_measures
    root = np.sqrt(mu)
    return g.kernel.values * np.outer(root, root)


def operator_spectrum(g, k_pos, k_neg, tol=1e-8):
    """Extreme operator eigenvalues, two-tailed.

    Step kernels: exact dense eigendecomposition of the measure-weighted
    block matrix.  Analytic kernels: symmetric Nystrom discretization on a
    midpoint grid, dyadically refined from 64 to at most 4096 points until
    the requested tails move by less than tol.
    """
    if k_pos < 0 or k_neg < 0:
        raise DomainError("tail lengths must be nonnegative")
    if tol <= 0:
        raise DomainError("tol must be positive")
    if g.is_step:
        eigs = scipy.linalg.eigvalsh(step_operator_matrix(g))
        pos, neg = _split_tails(eigs, k_pos, k_neg)
        return OperatorSpectrum(pos, neg, method="exact-step", discretization_error_estimate=0.0)

    length = g.effective_length
    prev = None
    n = NYSTROM_GRID_START
    while n <= NYSTROM_GRID_CAP:
        h = length / n
        x = (np.arange(n) + 0.5) * h
        m = g.kernel.raw(x[:, None], x[None, :]) * (h * g.space.scale)
        eigs = scipy.linalg.eigvalsh(m)
        pos, neg = _split_tails(eigs, k_pos, k_neg)
        if prev is not None:
            delta = max(
                np.max(np.abs(pos - prev[0])) if k_pos else 0.0,
                np.max(np.abs(neg - prev[1])) if k_neg else 0.0,
            )
            if delta < tol:
                return OperatorSpectrum(
                    pos, neg, method="discretized", discretization_error_estimate=float(delta)
                )
        prev = (pos, neg)
        n *= 2
    last = OperatorSpectrum(
        prev[0], prev[1], method="discretized", discretization_error_estimate=float(delta)
    )
    raise ToleranceNotMetError(
        f"Nystrom refinement did not reach tol={tol} within {NYSTROM_GRID_CAP} grid points "
        f"(last change {delta:.3e})",
        last_estimate=last,
        achieved=float(delta),
    )


def canonical_graphon(graph):
    """Step-kernel encoding of a finite graph on [0, 1) with n equal blocks.

    Block (i, j) is 1 iff vertices i and j (in the graph's stored vertex
    order) are adjacent; the diagonal is zero.  The encoding depends on the
    vertex order; cut-distance comparisons must go through the alignment
    search in the cut-metric module.
    """
    if not isinstance(graph, GrowingGraph):
        raise DomainError("canonical_graphon expects a GrowingGraph")
    n = graph.num_vertices
    if n < 1:
        raise DomainError("canonical graphon undefined for the empty graph")
    if n > CANONICAL_MAX_VERTICES:
        raise BudgetExceededError(
            f"canonical graphon would need a {n}x{n} dense block matrix "
            f"(cap {CANONICAL_MAX_VERTICES}); prune or subsample first"
        )
    values = graph.adjacency_dense()
    boundaries = np.linspace(0.0, 1.0, n + 1)
    return GeneralizedGraphon(
        space=MeasureSpace(length=1.0, scale=1.0),
        kernel=StepKernel(boundaries=boundaries, values=values),
    )


def stretch(g):
    """Rescale coordinates by sqrt(L1 norm) so the stretched graphon has unit L1 norm.

    For the step encoding of a graph G this makes every square step have
    side 1 / sqrt(2 |E(G)|).
    """
    norm = l1_norm(g)
    if norm <= 0:
        raise DegenerateGraphonError("cannot stretch a graphon with zero L1 norm")
    s = math.sqrt(norm)
    if g.is_step:
        kernel = StepKernel(boundaries=g.kernel.boundaries / s, values=g.kernel.values)
        space = MeasureSpace(length=g.space.length / s, scale=g.space.scale)
    else:
        kernel = AnalyticKernel(
            family=g.kernel.family,
            params=g.kernel.params,
            truncation_length=g.kernel.truncation_length / s,
            coord_scale=g.kernel.coord_scale * s,
        )
        length = g.space.length / s if math.isfinite(g.space.length) else np.inf
        space = MeasureSpace(length=length, scale=g.space.scale)
    return GeneralizedGraphon(space=space, kernel=kernel)


@dataclass(frozen=True)
class CycleDensity:
    """Cycle density value plus a bound on the part lost to spectrum truncation."""

    value: float
    truncation_bound: float


def h_density_graphon(g, k, spectrum=None, tol=1e-6):
    """Normalized k-cycle density of the graphon via eigenvalue power sums.

    Computes ||W||_1^(-k/2) * sum_j lambda_j^k over the stored tails.  The
    eigenvalues missing from the tails contribute at most
    M^(k-2) * (||W||_2^2 - sum of stored lambda^2) in absolute value, where
    M bounds the excluded magnitudes; that bound (normalized) is returned
    and must come in under tol.
    """
    if k < 3:
        raise DomainError("cycle length must be >= 3")
    norm1 = l1_norm(g)
    if norm1 <= 0:
        raise DegenerateGraphonError("cycle density undefined for a zero graphon")
    if spectrum is None:
        default_tail = 64 if g.is_step else 32
        spectrum = operator_spectrum(g, default_tail, default_tail, tol=min(tol, 1e-8))
    l2_sq = l2_norm_sq(g)
    residual = max(0.0, l2_sq - spectrum.captured_l2_sq())
    m_excl = spectrum.excluded_magnitude_bound(l2_sq)
    raw_bound = (m_excl ** (k - 2)) * residual
    scale = norm1 ** (-k / 2.0)
    bound = raw_bound * scale + spectrum.discretization_error_estimate
    value = spectrum.power_sum(k) * scale
    if bound > tol:
        raise ToleranceNotMetError(
            f"spectrum tails too short for k={k}: truncation bound {bound:.3e} > tol {tol:.3e}",
            last_estimate=CycleDensity(value=value, truncation_bound=bound),
            achieved=bound,
        )
    return CycleDensity(value=value, truncation_bound=bound)
