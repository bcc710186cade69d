"""Monte Carlo mutual information and achievable-rate-region geometry.

All mutual informations over the finite constellations are estimated by
sample averages of log2 p(y | inputs) ratios with exact finite-sum densities;
Gaussian-input regions use the closed forms.  Regions carry both nominal
vertices and a conservative variant tightened by three standard errors on
every estimated bound, so containment verdicts can report a margin.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog
from scipy.special import logsumexp

from . import geometry
from .channel import ChannelConfig, link_metrics
from .signaling import Constellation
from .transmitter import power_shares

_CHUNK = 16384
PLOT_CLIP = 8.0  # bits; regions are clipped to [0, PLOT_CLIP]^2 for output


class RegionError(ValueError):
    pass


@dataclass(frozen=True)
class RatePoint:
    r1: float
    r2: float

    def __post_init__(self):
        if self.r1 < 0 or self.r2 < 0:
            raise RegionError("rates must be nonnegative")


@dataclass(frozen=True)
class MiEstimate:
    """Mutual information in bits with its Monte Carlo standard error."""

    value: float
    std_error: float
    n_samples: int

    @classmethod
    def from_samples(cls, mean: float, var: float, n: int) -> "MiEstimate":
        se = math.sqrt(max(var, 0.0) / n)
        return cls(max(mean, 0.0), se, n)

    @classmethod
    def exact(cls, value: float) -> "MiEstimate":
        return cls(value, 0.0, 0)

    def low(self, k_sigma: float = 3.0) -> float:
        return max(self.value - k_sigma * self.std_error, 0.0)


@dataclass(frozen=True)
class RateRegion:
    """Convex polygon of achievable (R1, R2) pairs, counterclockwise.

    ``tight_vertices`` is the same region with every estimated bound pulled
    in by three standard errors; for exact regions the two coincide.
    ``constraints`` lists (a, b, bound) entries meaning a*R1 + b*R2 <= bound
    when the region came from explicit bounds.
    """

    vertices: tuple
    tight_vertices: tuple
    constraints: tuple = field(default=())

    def __post_init__(self):
        for vs in (self.vertices, self.tight_vertices):
            if vs and not geometry.finite(vs):
                raise RegionError("vertices must be finite")
            if not geometry.is_convex_ccw(vs):
                raise RegionError("vertices must form a convex CCW polygon")

    def contains(self, point) -> bool:
        return geometry.contains(self.vertices, _as_pair(point))

    def contains_with_margin(self, point) -> bool:
        return geometry.contains(self.tight_vertices, _as_pair(point))

    def max_r1(self) -> float:
        return max((v[0] for v in self.vertices), default=0.0)

    def max_r2(self) -> float:
        return max((v[1] for v in self.vertices), default=0.0)


def _as_pair(point):
    if isinstance(point, RatePoint):
        return (point.r1, point.r2)
    return (float(point[0]), float(point[1]))


@dataclass(frozen=True, eq=False)
class MiStream:
    """One superposed input as seen at the receiver under study."""

    gain: complex
    constellation: Constellation


def stream_mutual_information(streams, target, conditioned, n0: float,
                              n_samples: int, rng) -> MiEstimate:
    """I(X_target ; Y | X_conditioned) in bits for superposed PSK streams.

    ``target`` and ``conditioned`` are disjoint index sets into ``streams``;
    the remaining streams are marginalized as unknowns with uniform priors.
    Per chunk the generator is consumed in a fixed order: one symbol-index
    draw per stream in list order, then the noise real and imaginary parts.
    """
    target = frozenset(target)
    conditioned = frozenset(conditioned)
    if not target:
        raise RegionError("target set is empty")
    if target & conditioned:
        raise RegionError("target and conditioned sets overlap")
    if not all(0 <= i < len(streams) for i in target | conditioned):
        raise RegionError("stream index out of range")
    if n_samples < 1000:
        raise RegionError("n_samples must be at least 1000")

    points = [np.asarray(s.constellation.points_array() * s.gain) for s in streams]
    num_fixed = sorted(target | conditioned)
    den_fixed = sorted(conditioned)
    num_free = [i for i in range(len(streams)) if i not in target | conditioned]
    den_free = sorted(num_free + list(target))
    num_grid = _grid(points, num_free)
    den_grid = _grid(points, den_free)

    total = 0.0
    total_sq = 0.0
    done = 0
    sigma = math.sqrt(n0 / 2.0)
    while done < n_samples:
        m = min(_CHUNK, n_samples - done)
        idx = [rng.integers(0, len(p), m) for p in points]
        y = sum(p[i] for p, i in zip(points, idx))
        y = y + sigma * (rng.standard_normal(m) + 1j * rng.standard_normal(m))
        num = _log_density(y, idx, points, num_fixed, num_grid, n0)
        den = _log_density(y, idx, points, den_fixed, den_grid, n0)
        s = (num - den) / math.log(2.0)
        total += float(s.sum())
        total_sq += float((s * s).sum())
        done += m
    mean = total / n_samples
    var = total_sq / n_samples - mean * mean
    return MiEstimate.from_samples(mean, var, n_samples)


def _grid(points, free_indices) -> np.ndarray:
    if not free_indices:
        return np.zeros(1, dtype=np.complex128)
    return np.asarray([sum(c) for c in itertools.product(
        *(points[i] for i in free_indices))], dtype=np.complex128)


def _log_density(y, idx, points, fixed, grid, n0):
    """log p(y | fixed inputs), marginalizing the grid, up to the shared
    Gaussian normalization constant (it cancels in MI ratios)."""
    offset = 0
    for i in fixed:
        offset = offset + points[i][idx[i]]
    d = np.abs((y - offset)[:, None] - grid[None, :]) ** 2
    return logsumexp(-d / n0, axis=1) - math.log(grid.size)


def estimate_mi(target, conditioned, cfg: ChannelConfig, constellations,
                receiver: int, n_samples: int, rng) -> MiEstimate:
    """User-level MI at one receiver: I(X_target ; Y_receiver | X_cond).

    ``target`` and ``conditioned`` are subsets of {1, 2}; users in neither
    set are marginalized as unknown constellation inputs.
    """
    users = sorted(set(target) | set(conditioned))
    if not set(target):
        raise RegionError("target set is empty")
    if any(u not in (1, 2) for u in users):
        raise RegionError("users are 1 and 2")
    streams = [
        MiStream(cfg.gain(u, receiver) * math.sqrt(cfg.power(u)), constellations[u - 1])
        for u in (1, 2)
    ]
    t = [u - 1 for u in target]
    c = [u - 1 for u in conditioned]
    return stream_mutual_information(streams, t, c, cfg.n0, n_samples, rng)


def _pentagon(bound_r1: MiEstimate, bound_r2: MiEstimate, bound_sum: MiEstimate):
    box = max(bound_r1.value, bound_r2.value, bound_sum.value, 1e-9) + 1.0
    nominal = geometry.polygon_from_halfplanes(
        [(1.0, 0.0, bound_r1.value), (0.0, 1.0, bound_r2.value),
         (1.0, 1.0, bound_sum.value)], bound=box)
    tight = geometry.polygon_from_halfplanes(
        [(1.0, 0.0, bound_r1.low()), (0.0, 1.0, bound_r2.low()),
         (1.0, 1.0, bound_sum.low())], bound=box)
    constraints = ((1.0, 0.0, bound_r1.value), (0.0, 1.0, bound_r2.value),
                   (1.0, 1.0, bound_sum.value))
    return RateRegion(tuple(nominal), tuple(tight), constraints)


def mac_region_psk(receiver: int, cfg: ChannelConfig, constellations,
                   n_samples: int, rng) -> RateRegion:
    """Pentagon of rate pairs jointly decodable at one receiver."""
    b1 = estimate_mi({1}, {2}, cfg, constellations, receiver, n_samples, rng)
    b2 = estimate_mi({2}, {1}, cfg, constellations, receiver, n_samples, rng)
    bs = estimate_mi({1, 2}, set(), cfg, constellations, receiver, n_samples, rng)
    return _pentagon(b1, b2, bs)


def strong_ic_region(cfg: ChannelConfig, constellations, n_samples: int,
                     rng, warn=None) -> RateRegion:
    """Intersection of both receivers' MAC regions.

    Valid as the capacity region only under strong interference; computed
    regardless, with ``warn`` called when INR < SNR at either receiver.
    """
    m = link_metrics(cfg)
    if (m.inr1 < m.snr1 or m.inr2 < m.snr2) and warn is not None:
        warn("interference is not strong (INR < SNR); region is an "
             "intersection of MAC pentagons, not the capacity region")
    r1 = mac_region_psk(1, cfg, constellations, n_samples, rng)
    r2 = mac_region_psk(2, cfg, constellations, n_samples, rng)
    box = max(r.max_r1() + r.max_r2() for r in (r1, r2)) + 1.0
    nominal = geometry.polygon_from_halfplanes(
        [c for c in r1.constraints + r2.constraints], bound=box)
    # tight vertices re-derive from the tightened pentagons
    tight = r1.tight_vertices
    for a, b, c in _halfplanes_of(r2.tight_vertices):
        tight = geometry.clip_halfplane(list(tight), a, b, c)
    return RateRegion(tuple(nominal), tuple(tight),
                      r1.constraints + r2.constraints)


def _halfplanes_of(vertices):
    n = len(vertices)
    out = []
    for i in range(n):
        px, py = vertices[i]
        qx, qy = vertices[(i + 1) % n]
        a, b = qy - py, px - qx
        out.append((a, b, a * px + b * py))
    return out


@dataclass(frozen=True)
class GaussianRegions:
    mac1: RateRegion
    mac2: RateRegion
    intersection: RateRegion
    single_user_caps: tuple


def gaussian_regions(cfg: ChannelConfig) -> GaussianRegions:
    """Closed-form Gaussian-input regions; no sampling.

    Pentagons live in (R1, R2) with roles matched to users: at receiver 1
    the direct link caps R1 and the cross link caps R2; at receiver 2 the
    roles swap.
    """
    m = link_metrics(cfg)
    mac1 = _pentagon(MiEstimate.exact(math.log2(1.0 + m.snr1)),
                     MiEstimate.exact(math.log2(1.0 + m.inr1)),
                     MiEstimate.exact(math.log2(1.0 + m.snr1 + m.inr1)))
    mac2 = _pentagon(MiEstimate.exact(math.log2(1.0 + m.inr2)),
                     MiEstimate.exact(math.log2(1.0 + m.snr2)),
                     MiEstimate.exact(math.log2(1.0 + m.snr2 + m.inr2)))
    planes = mac1.constraints + mac2.constraints
    box = max(r.max_r1() + r.max_r2() for r in (mac1, mac2)) + 1.0
    inter = tuple(geometry.polygon_from_halfplanes(planes, bound=box))
    region = RateRegion(inter, inter, planes)
    caps = (math.log2(1.0 + m.snr1), math.log2(1.0 + m.snr2))
    return GaussianRegions(mac1, mac2, region, caps)


@dataclass(frozen=True)
class TimeShareLine:
    """Segment between the two single-user capacity points."""

    c1: float
    c2: float

    def __post_init__(self):
        if self.c1 <= 0 or self.c2 <= 0:
            raise RegionError("single-user capacities must be positive")

    @property
    def endpoints(self):
        return ((self.c1, 0.0), (0.0, self.c2))

    def above(self, point) -> bool:
        x, y = _as_pair(point)
        return x / self.c1 + y / self.c2 > 1.0


def time_sharing_line(c1: float, c2: float) -> TimeShareLine:
    return TimeShareLine(c1, c2)


def single_user_capacity(user: int, cfg: ChannelConfig, constellation,
                         n_samples: int, rng) -> MiEstimate:
    """I(X_u ; Y_u) with the other user silent (time-sharing endpoint)."""
    stream = MiStream(cfg.gain(user, user) * math.sqrt(cfg.power(user)),
                      constellation)
    return stream_mutual_information([stream], {0}, set(), cfg.n0, n_samples, rng)


def _hk_streams(cfg: ChannelConfig, constellations, split: float, receiver: int):
    """Streams at one receiver for a private/public power split.

    Returns (labels, streams, decodable_idx): the other user's private
    stream is present but never decodable.  A zero split drops the private
    streams entirely.
    """
    pw, pu = power_shares(split)
    labels = []
    streams = []
    decodable = []
    for u in (1, 2):
        const = constellations[u - 1]
        base = cfg.gain(u, receiver) * math.sqrt(cfg.power(u))
        labels.append(f"W{u}")
        streams.append(MiStream(base * math.sqrt(pw), const))
        decodable.append(len(streams) - 1)
        if pu > 0.0:
            labels.append(f"U{u}")
            streams.append(MiStream(base * math.sqrt(pu), const))
            if u == receiver:
                decodable.append(len(streams) - 1)
    return labels, streams, decodable


def hk_split_region(cfg: ChannelConfig, constellations, split: float,
                    n_samples: int, rng, n_directions: int = 33) -> RateRegion:
    """Achievable (R1, R2) polygon for one private/public power split.

    Builds, per receiver, the MAC-style polytope over its decodable streams
    (every subset's rate sum bounded by the conditional MI given the other
    decodable streams, foreign private marginalized), then projects the
    intersected polytope onto user-rate sums by a support-function sweep.
    """
    var_labels = ["W1", "U1", "W2", "U2"] if split > 0 else ["W1", "W2"]
    var_index = {lab: i for i, lab in enumerate(var_labels)}
    rows_nom = []
    rows_tight = []
    lhs = []
    for receiver in (1, 2):
        labels, streams, decodable = _hk_streams(cfg, constellations, split, receiver)
        for r in range(1, len(decodable) + 1):
            for subset in itertools.combinations(decodable, r):
                cond = [i for i in decodable if i not in subset]
                mi = stream_mutual_information(streams, set(subset), set(cond),
                                               cfg.n0, n_samples, rng)
                coeff = np.zeros(len(var_labels))
                for i in subset:
                    coeff[var_index[labels[i]]] = 1.0
                lhs.append(coeff)
                rows_nom.append(mi.value)
                rows_tight.append(mi.low())
    lhs = np.asarray(lhs)
    if split > 0:
        project = np.asarray([[1.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 1.0]])
    else:
        project = np.asarray([[1.0, 0.0], [0.0, 1.0]])

    def sweep(rhs):
        pts = [(0.0, 0.0)]
        for theta in np.linspace(0.0, math.pi / 2.0, n_directions):
            w = math.cos(theta) * project[0] + math.sin(theta) * project[1]
            res = linprog(-w, A_ub=lhs, b_ub=rhs, bounds=(0, None),
                          method="highs")
            if not res.success:
                raise RegionError(f"projection LP failed: {res.message}")
            r1, r2 = float(project[0] @ res.x), float(project[1] @ res.x)
            pts.append((r1, r2))
        max1 = max(p[0] for p in pts)
        max2 = max(p[1] for p in pts)
        pts += [(max1, 0.0), (0.0, max2)]
        return tuple(geometry.convex_hull(pts))

    return RateRegion(sweep(np.asarray(rows_nom)), sweep(np.asarray(rows_tight)))


def hk_subregion_hull(cfg: ChannelConfig, constellations, power_splits,
                      n_samples: int, rng):
    """Per-split achievable polygons and their convex hull.

    Returns (regions, hull) where ``regions`` maps each split ratio to its
    RateRegion; the hull is the convex closure over all splits plus the
    axis points (time sharing between operating points).
    """
    if any(s < 0 for s in power_splits):
        raise RegionError("power splits must be nonnegative")
    regions = {}
    for split in power_splits:
        regions[split] = hk_split_region(cfg, constellations, split,
                                         n_samples, rng)
    all_nom = [(0.0, 0.0)]
    all_tight = [(0.0, 0.0)]
    for reg in regions.values():
        all_nom.extend(reg.vertices)
        all_tight.extend(reg.tight_vertices)
    hull = RateRegion(tuple(geometry.convex_hull(all_nom)),
                      tuple(geometry.convex_hull(all_tight)))
    return regions, hull
