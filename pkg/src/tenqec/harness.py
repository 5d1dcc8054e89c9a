"""Monte Carlo estimation of logical failure rates and threshold fits.

Trials are reproducible by construction: trial t of point i under master
seed s draws from default_rng(SeedSequence([s, i, t])), so results do not
depend on how trials are split across workers, and a rerun with the same
arguments is byte-identical.  The per-trial fast path works on bit-packed
numpy words throughout; the only per-trial python-object work is the
network contraction itself.
"""

from __future__ import annotations

import csv
import math
import multiprocessing
import warnings
from dataclasses import dataclass

import numpy as np

from .decoder import PRODUCT_CODE, NoiseModel, likelihoods_network
from .holographic import ContractionSchedule, HolographicLayout
from .pauli import PauliString

CSV_HEADER = ("radius", "n", "p", "trials", "failures", "failure_rate", "std_err")
SYNDROME_CACHE_CAP = 12  # cache decode results when n - k is at most this


@dataclass(frozen=True, slots=True)
class McPoint:
    """One (radius, p) sample of the logical failure rate."""

    radius: int
    n: int
    p: float
    trials: int
    failures: int
    failure_rate: float
    std_err: float


@dataclass(frozen=True, slots=True)
class ThresholdFit:
    """Scaling-collapse fit: rates against x = (p - p_th) * n^(1/nu).

    ``coeffs`` are the quadratic's coefficients, constant term first.
    """

    p_th: float
    nu: float
    coeffs: tuple[float, float, float]
    rss: float


def _label_bits(label: PauliString) -> int:
    bits = 0
    for alpha in range(label.n):
        bits |= ((label.x >> alpha) & 1) << (2 * alpha)
        bits |= ((label.z >> alpha) & 1) << (2 * alpha + 1)
    return bits


def _pack_words(value: int, words: int) -> np.ndarray:
    return np.frombuffer(value.to_bytes(words * 8, "little"), dtype=np.uint64).copy()


class TrialRunner:
    """Bit-packed per-trial sampling, syndrome extraction, and decoding."""

    def __init__(
        self,
        layout: HolographicLayout,
        schedule: ContractionSchedule,
        noise: NoiseModel,
    ) -> None:
        code = layout.code
        if code is None:
            raise ValueError("layout carries no code; rebuild with with_code=True")
        if noise.n != code.n:
            raise ValueError("noise model size must match the code")
        self.layout = layout
        self.schedule = schedule
        self.noise = noise
        self.code = code
        n = code.n
        m = n - code.k
        self.words = (n + 63) // 64
        self.sx = np.vstack([_pack_words(s.x, self.words) for s in code.stabilizers])
        self.sz = np.vstack([_pack_words(s.z, self.words) for s in code.stabilizers])
        self.pex = np.vstack([_pack_words(e.x, self.words) for e in code.pure_errors])
        self.pez = np.vstack([_pack_words(e.z, self.words) for e in code.pure_errors])
        self.lxx = np.vstack([_pack_words(g.x, self.words) for g in code.logical_x])
        self.lxz = np.vstack([_pack_words(g.z, self.words) for g in code.logical_x])
        self.lzx = np.vstack([_pack_words(g.x, self.words) for g in code.logical_z])
        self.lzz = np.vstack([_pack_words(g.z, self.words) for g in code.logical_z])
        self.pure_cls = np.array(
            [self._class_bits_of(e.x, e.z) for e in code.pure_errors],
            dtype=np.int64,
        )
        self.cum = np.cumsum(noise.probs, axis=1)
        self.cache: dict[bytes, int] | None = {} if m <= SYNDROME_CACHE_CAP else None

    def _class_bits_of(self, x: int, z: int) -> int:
        ex = _pack_words(x, self.words)
        ez = _pack_words(z, self.words)
        return int(self._class_bits(ex, ez))

    def _class_bits(self, ex: np.ndarray, ez: np.ndarray) -> int:
        bits = 0
        for alpha in range(self.code.k):
            anti_z = int(
                (np.bitwise_count(ex & self.lzz[alpha])
                 + np.bitwise_count(ez & self.lzx[alpha])).sum()
            ) & 1
            anti_x = int(
                (np.bitwise_count(ex & self.lxz[alpha])
                 + np.bitwise_count(ez & self.lxx[alpha])).sum()
            ) & 1
            bits |= anti_z << (2 * alpha)
            bits |= anti_x << (2 * alpha + 1)
        return bits

    def _pack_bits(self, bits: np.ndarray) -> np.ndarray:
        raw = np.packbits(bits, bitorder="little")
        padded = np.zeros(self.words * 8, dtype=np.uint8)
        padded[: raw.size] = raw
        return padded.view(np.uint64)

    def _decode_target(self, syn: np.ndarray) -> int:
        """Class bits of (chosen label) * (syndrome's pure error)."""
        key = syn.tobytes()
        if self.cache is not None and key in self.cache:
            return self.cache[key]
        mask = (syn.astype(np.uint64) * np.uint64(0xFFFFFFFFFFFFFFFF))[:, None]
        ex = np.bitwise_xor.reduce(self.pex & mask, axis=0)
        ez = np.bitwise_xor.reduce(self.pez & mask, axis=0)
        n = self.code.n
        xb = np.unpackbits(ex.view(np.uint8), bitorder="little", count=n)
        zb = np.unpackbits(ez.view(np.uint8), bitorder="little", count=n)
        digits = (xb ^ zb) | (zb << 1)
        leaves = np.take_along_axis(
            self.noise.probs, PRODUCT_CODE[digits].astype(np.intp), axis=1
        )
        table = likelihoods_network(
            self.layout, self.schedule, self.noise, leaves=leaves
        )
        chosen = _label_bits(table.argmax_class())
        pure_bits = int(np.bitwise_xor.reduce(self.pure_cls * syn.astype(np.int64)))
        target = chosen ^ pure_bits
        if self.cache is not None:
            self.cache[key] = target
        return target

    def run_trial(self, seed: int, point_index: int, trial: int) -> bool:
        """Sample one error and decode; True means a logical failure."""
        rng = np.random.default_rng(
            np.random.SeedSequence([seed, point_index, trial])
        )
        u = rng.random(self.code.n)
        codes = (
            (u >= self.cum[:, 0]).astype(np.uint8)
            + (u >= self.cum[:, 1])
            + (u >= self.cum[:, 2])
        )
        xb = ((codes == 1) | (codes == 2)).astype(np.uint8)
        zb = ((codes == 2) | (codes == 3)).astype(np.uint8)
        ex = self._pack_bits(xb)
        ez = self._pack_bits(zb)
        syn = (
            (np.bitwise_count(ex[None, :] & self.sz)
             + np.bitwise_count(ez[None, :] & self.sx)).sum(axis=1)
        ).astype(np.uint8) & 1
        target = self._decode_target(syn)
        return self._class_bits(ex, ez) != target


def _count_failures(
    runner: TrialRunner, seed: int, point_index: int, lo: int, hi: int
) -> int:
    return sum(
        runner.run_trial(seed, point_index, t) for t in range(lo, hi)
    )


def _chunk_worker(args) -> int:
    layout, schedule, noise, seed, point_index, lo, hi = args
    runner = TrialRunner(layout, schedule, noise)
    return _count_failures(runner, seed, point_index, lo, hi)


def run_point(
    layout: HolographicLayout,
    schedule: ContractionSchedule,
    p: float,
    trials: int,
    *,
    seed: int,
    point_index: int = 0,
    workers: int = 1,
) -> McPoint:
    """Estimate the failure rate at one noise strength.

    With ``workers`` above 1 the trial range is split across forked
    processes; the per-trial seeding makes the result identical either
    way.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if seed < 0 or point_index < 0:
        raise ValueError("seed and point_index must be nonnegative")
    noise = NoiseModel.depolarizing(layout.n, p)
    if workers > 1:
        bounds = np.linspace(0, trials, workers + 1).astype(int)
        jobs = [
            (layout, schedule, noise, seed, point_index, int(lo), int(hi))
            for lo, hi in zip(bounds[:-1], bounds[1:])
            if hi > lo
        ]
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(len(jobs)) as pool:
            failures = sum(pool.map(_chunk_worker, jobs))
    else:
        runner = TrialRunner(layout, schedule, noise)
        failures = _count_failures(runner, seed, point_index, 0, trials)
    rate = failures / trials
    return McPoint(
        radius=layout.radius,
        n=layout.n,
        p=p,
        trials=trials,
        failures=failures,
        failure_rate=rate,
        std_err=math.sqrt(rate * (1.0 - rate) / trials),
    )


def run_mc(
    layout: HolographicLayout,
    schedule: ContractionSchedule,
    ps: list[float],
    trials: int,
    *,
    seed: int,
    workers: int = 1,
) -> list[McPoint]:
    """Sweep failure rates over a grid of depolarizing strengths."""
    return [
        run_point(
            layout, schedule, p, trials,
            seed=seed, point_index=i, workers=workers,
        )
        for i, p in enumerate(ps)
    ]


def write_points(path: str, points: list[McPoint]) -> None:
    """Write points as CSV; floats use repr so reruns match byte for byte."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for pt in points:
            writer.writerow([
                pt.radius,
                pt.n,
                repr(float(pt.p)),
                pt.trials,
                pt.failures,
                repr(float(pt.failure_rate)),
                repr(float(pt.std_err)),
            ])


def read_points(path: str) -> list[McPoint]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header}")
        return [
            McPoint(
                radius=int(row[0]),
                n=int(row[1]),
                p=float(row[2]),
                trials=int(row[3]),
                failures=int(row[4]),
                failure_rate=float(row[5]),
                std_err=float(row[6]),
            )
            for row in reader
        ]


def crossing_point(
    a: list[McPoint], b: list[McPoint]
) -> float:
    """Linear-interpolated p where two radii's failure-rate curves cross.

    Both lists must sample the same p grid.  Looks for the first sign
    change of rate(a) - rate(b) and interpolates within that interval.
    """
    a = sorted(a, key=lambda pt: pt.p)
    b = sorted(b, key=lambda pt: pt.p)
    if [pt.p for pt in a] != [pt.p for pt in b]:
        raise ValueError("both curves must sample the same p values")
    diffs = [pa.failure_rate - pb.failure_rate for pa, pb in zip(a, b)]
    for i in range(len(diffs) - 1):
        d0, d1 = diffs[i], diffs[i + 1]
        if d0 == 0.0:
            return a[i].p
        if d0 * d1 < 0:
            frac = d0 / (d0 - d1)
            return a[i].p + frac * (a[i + 1].p - a[i].p)
    if diffs and diffs[-1] == 0.0:
        return a[-1].p
    raise ValueError("curves do not cross on the sampled grid")


def fit_threshold(
    points: list[McPoint],
    *,
    p_range: tuple[float, float] = (0.05, 0.40),
    nu_range: tuple[float, float] = (0.8, 6.0),
    grid: int = 21,
    stages: int = 5,
    shrink: float = 0.25,
) -> ThresholdFit:
    """Fit (p_th, nu) by collapsing all radii onto one quadratic.

    For each candidate pair, the points of the largest code are fit by a
    quadratic in x = (p - p_th) * n^(1/nu) and the residual sum of squares
    is taken over every point; a deterministic coarse-to-fine grid search
    minimizes it.  Needs at least two radii with four points each, and
    rates that actually vary.
    """
    groups: dict[int, list[McPoint]] = {}
    for pt in points:
        groups.setdefault(pt.n, []).append(pt)
    if len(groups) < 2:
        raise ValueError("need points from at least two different radii")
    if any(len(g) < 4 for g in groups.values()):
        raise ValueError("need at least four points per radius")
    rates = np.array([pt.failure_rate for pt in points])
    if np.ptp(rates) == 0.0:
        raise ValueError("failure rates are constant; nothing to fit")

    ns = np.array([pt.n for pt in points], dtype=np.float64)
    ps = np.array([pt.p for pt in points])
    n_big = max(groups)
    big = np.array([pt.n == n_big for pt in points])

    def objective(p_th: float, nu: float) -> tuple[float, np.ndarray]:
        x = (ps - p_th) * ns ** (1.0 / nu)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            coeffs = np.polynomial.polynomial.polyfit(x[big], rates[big], 2)
        resid = rates - np.polynomial.polynomial.polyval(x, coeffs)
        return float(resid @ resid), coeffs

    p_lo, p_hi = p_range
    nu_lo, nu_hi = nu_range
    best = None
    for _ in range(stages):
        for p_th in np.linspace(p_lo, p_hi, grid):
            for nu in np.linspace(nu_lo, nu_hi, grid):
                rss, coeffs = objective(float(p_th), float(nu))
                key = (rss, float(p_th), float(nu))
                if best is None or key < best[0]:
                    best = (key, coeffs)
        (_, p_c, nu_c), _ = best
        p_half = (p_hi - p_lo) * shrink / 2
        nu_half = (nu_hi - nu_lo) * shrink / 2
        p_lo = max(p_range[0], p_c - p_half)
        p_hi = min(p_range[1], p_c + p_half)
        nu_lo = max(nu_range[0], nu_c - nu_half)
        nu_hi = min(nu_range[1], nu_c + nu_half)

    (rss, p_th, nu), coeffs = best
    return ThresholdFit(
        p_th=p_th,
        nu=nu,
        coeffs=(float(coeffs[0]), float(coeffs[1]), float(coeffs[2])),
        rss=rss,
    )
