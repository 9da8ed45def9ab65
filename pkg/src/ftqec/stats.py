"""Parameter sweeps, binomial error bars and threshold / scaling estimates.

Shots at each physical error rate run in fixed-size batches.  Every batch
gets its own generator from ``SeedSequence(seed).spawn``-style keys
``(seed, point, batch)``, so a sweep is reproducible bit for bit and the
result does not depend on how batches are scheduled across workers.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .noise import SWAP_MODES, NoiseParams
from .protocols import ENCODING_PROTOCOLS, PROTOCOLS, simulate

CSV_COLUMNS = ("p", "shots", "accepted", "fail_estimated", "fail_true", "rate_estimated",
               "rate_true", "acceptance", "sigma", "ci95_lo", "ci95_hi")
POLICIES = ("trivial", "set1", "set2", "f1s2", "none", "s0z")
Z95 = 1.959963984540054
WILSON_BELOW = 20  # failures (or successes) below this switch the CI to Wilson


class ConfigError(ValueError):
    pass


# -- binomial helpers --------------------------------------------------------------

def binomial_sigma(k: int, n: int) -> float:
    """Standard error sqrt(r(1-r)/n) of the rate r = k/n (0 when n = 0)."""
    if n == 0:
        return 0.0
    r = k / n
    return math.sqrt(r * (1 - r) / n)


def wilson_interval(k: int, n: int, z: float = Z95) -> tuple[float, float]:
    if n == 0:
        return 0.0, 1.0
    r = k / n
    den = 1 + z * z / n
    mid = (r + z * z / (2 * n)) / den
    half = z * math.sqrt(r * (1 - r) / n + z * z / (4 * n * n)) / den
    # the ends cancel exactly at k = 0 and k = n; pin them against round-off
    lo = 0.0 if k == 0 else max(0.0, mid - half)
    hi = 1.0 if k == n else min(1.0, mid + half)
    return lo, hi


def ci95(k: int, n: int) -> tuple[float, float]:
    """Normal-approximation 95% interval, Wilson when either count is small."""
    if n == 0:
        return 0.0, 1.0
    if k < WILSON_BELOW or n - k < WILSON_BELOW:
        return wilson_interval(k, n)
    r, s = k / n, binomial_sigma(k, n)
    return max(0.0, r - Z95 * s), min(1.0, r + Z95 * s)


# -- configuration and results -----------------------------------------------------

@dataclass
class SweepConfig:
    protocol: str
    p_values: list[float]
    shots: int = 200_000
    seed: int = 0
    policy: str = "trivial"
    decoder: str = "f1s2"
    swap_noise: str = "decomposed"
    batch_size: int = 50_000
    workers: int = 1
    circuit: str | None = None  # GotoRL override file
    out: str | None = None
    format: str = "csv"

    def __post_init__(self):
        self.p_values = [float(p) for p in self.p_values]
        if self.protocol not in PROTOCOLS:
            raise ConfigError(f"unknown protocol {self.protocol!r}; choose from {', '.join(PROTOCOLS)}")
        if self.shots < 1:
            raise ConfigError("shots must be at least 1")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be at least 1")
        if not self.p_values:
            raise ConfigError("no physical error rates given")
        if any(not 0 < p < 1 for p in self.p_values):
            raise ConfigError("physical error rates must lie in (0, 1)")
        if self.p_values != sorted(set(self.p_values)):
            raise ConfigError("physical error rates must be strictly increasing")
        if self.policy not in POLICIES:
            raise ConfigError(f"unknown policy {self.policy!r}")
        if self.decoder not in ("s2", "f1s2"):
            raise ConfigError(f"unknown decoder {self.decoder!r}")
        if self.swap_noise not in SWAP_MODES:
            raise ConfigError(f"swap_noise must be one of {SWAP_MODES}")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.protocol in ENCODING_PROTOCOLS and self.policy in ("f1s2", "s0z"):
            raise ConfigError(f"policy {self.policy!r} only applies to EC protocols")

    def digest(self) -> str:
        """Hash of everything that changes the numbers (not where they are written)."""
        keys = ("protocol", "p_values", "shots", "seed", "policy", "decoder", "swap_noise",
                "batch_size", "circuit")
        blob = json.dumps({k: getattr(self, k) for k in keys}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class SweepPoint:
    p: float
    shots: int
    accepted: int
    fail_estimated: int
    fail_true: int

    @property
    def rate_estimated(self) -> float:
        return self.fail_estimated / self.accepted if self.accepted else 0.0

    @property
    def rate_true(self) -> float:
        return self.fail_true / self.accepted if self.accepted else 0.0

    @property
    def acceptance(self) -> float:
        return self.accepted / self.shots

    @property
    def sigma(self) -> float:
        return binomial_sigma(self.fail_estimated, self.accepted)

    @property
    def ci95(self) -> tuple[float, float]:
        return ci95(self.fail_estimated, self.accepted)

    def rate(self, which: str = "estimated") -> float:
        return self.rate_true if which == "true" else self.rate_estimated

    def interval(self, which: str = "estimated") -> tuple[float, float]:
        return ci95(self.fail_true if which == "true" else self.fail_estimated, self.accepted)

    def row(self) -> dict:
        lo, hi = self.ci95
        return {"p": self.p, "shots": self.shots, "accepted": self.accepted,
                "fail_estimated": self.fail_estimated, "fail_true": self.fail_true,
                "rate_estimated": self.rate_estimated, "rate_true": self.rate_true,
                "acceptance": self.acceptance, "sigma": self.sigma, "ci95_lo": lo, "ci95_hi": hi}


@dataclass
class SweepResult:
    config: SweepConfig
    points: list[SweepPoint]
    metadata: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for pt in self.points:
            row = pt.row()
            w.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"metadata": self.metadata, "config": asdict(self.config),
                           "points": [pt.row() for pt in self.points]}, indent=2)

    def write(self, path: str | Path, fmt: str | None = None) -> None:
        fmt = fmt or self.config.format
        Path(path).write_text(self.to_json() if fmt == "json" else self.to_csv())

    @classmethod
    def from_json(cls, text: str) -> "SweepResult":
        d = json.loads(text)
        pts = [SweepPoint(r["p"], r["shots"], r["accepted"], r["fail_estimated"], r["fail_true"])
               for r in d["points"]]
        return cls(SweepConfig(**d["config"]), pts, d["metadata"])

    @staticmethod
    def points_from_csv(text: str) -> list[SweepPoint]:
        rows = csv.DictReader(io.StringIO(text))
        return [SweepPoint(float(r["p"]), int(r["shots"]), int(r["accepted"]),
                           int(r["fail_estimated"]), int(r["fail_true"])) for r in rows]


def _fmt(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


# -- running ---------------------------------------------------------------------------

def batch_rng(seed: int, point: int, batch: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, point, batch]))


def _batches(shots: int, size: int) -> list[int]:
    full, rest = divmod(shots, size)
    return [size] * full + ([rest] if rest else [])


def _sim_args(config: SweepConfig) -> tuple[str, str]:
    """(encoding policy or EC post-selection switch, decoder) for :func:`simulate`."""
    if config.protocol in ENCODING_PROTOCOLS:
        return config.policy, config.decoder
    if config.policy == "f1s2":
        return "trivial", "f1s2"
    if config.policy == "s0z":
        return "s0Z", config.decoder
    if config.policy == "none":
        return "none", config.decoder
    return "trivial", config.decoder


def _run_batch(task) -> tuple[int, int, int]:
    config, point, batch, p, n = task
    if config.circuit:
        from .circuits import load_gotorl
        from .protocols import _gotorl_override, use_gotorl
        if _gotorl_override is None:
            use_gotorl(load_gotorl(config.circuit))
    pol, dec = _sim_args(config)
    out = simulate(config.protocol, NoiseParams(p, config.swap_noise), n,
                   batch_rng(config.seed, point, batch), pol=pol, decoder=dec)
    return out.counts()


def run_sweep(config: SweepConfig) -> SweepResult:
    tasks = [(config, i, b, p, n)
             for i, p in enumerate(config.p_values)
             for b, n in enumerate(_batches(config.shots, config.batch_size))]
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as ex:
            counts = list(ex.map(_run_batch, tasks))
    else:
        counts = [_run_batch(t) for t in tasks]
    if config.circuit:
        from .protocols import use_gotorl
        use_gotorl(None)
    totals = np.zeros((len(config.p_values), 3), dtype=np.int64)
    for (_, i, _, _, _), c in zip(tasks, counts):
        totals[i] += c
    points = [SweepPoint(p, config.shots, *map(int, totals[i]))
              for i, p in enumerate(config.p_values)]
    meta = {"config_hash": config.digest(), "seed": config.seed, "version": __version__,
            "batches_per_point": len(_batches(config.shots, config.batch_size))}
    return SweepResult(config, points, meta)


# -- threshold and scaling ------------------------------------------------------------

@dataclass(frozen=True)
class Threshold:
    """Crossing of rate(p) with p.  ``value`` is None when the range has no crossing,
    and ``hint`` then says on which side of the sampled range it lies."""
    value: float | None
    lo: float | None
    hi: float | None
    bracket: tuple[float, float] | None = None
    hint: str = ""

    @property
    def found(self) -> bool:
        return self.value is not None


def _crossing(p0, r0, p1, r1) -> float | None:
    """Where the log-log line through (p0, r0), (p1, r1) meets rate = p."""
    if r0 <= 0 or r1 <= 0:
        return None
    x0, x1 = math.log(p0), math.log(p1)
    d0, d1 = math.log(r0) - x0, math.log(r1) - x1
    if d0 == d1:
        return None
    t = d0 / (d0 - d1)
    return math.exp(x0 + t * (x1 - x0))


def pseudo_threshold(result: SweepResult | list[SweepPoint], which: str = "estimated") -> Threshold:
    """Pseudo-threshold by log-log interpolation between the bracketing points.

    The interval comes from running the same interpolation through the lower
    and the upper CI95 ends of both bracketing points.
    """
    pts = result.points if isinstance(result, SweepResult) else list(result)
    ps = [pt.p for pt in pts]
    rates = [pt.rate(which) for pt in pts]
    for k in range(len(pts) - 1):
        a, b = pts[k], pts[k + 1]
        if (rates[k] - a.p) * (rates[k + 1] - b.p) > 0:
            continue
        x = _crossing(a.p, rates[k], b.p, rates[k + 1])
        if x is None:
            continue
        (alo, ahi), (blo, bhi) = a.interval(which), b.interval(which)
        # a higher rate curve crosses earlier
        lo = _crossing(a.p, ahi, b.p, bhi) if ahi > 0 and bhi > 0 else None
        hi = _crossing(a.p, alo, b.p, blo) if alo > 0 and blo > 0 else None
        return Threshold(x, lo if lo is not None else a.p, hi if hi is not None else b.p,
                         (a.p, b.p))
    if not pts:
        return Threshold(None, None, None, hint="no points")
    above = rates[0] > ps[0]
    hint = (f"below {ps[0]:g} (rate exceeds p everywhere)" if above
            else f"above {ps[-1]:g} (rate stays below p)")
    return Threshold(None, None, None, None, hint)


def fit_scaling_exponent(result: SweepResult | list[SweepPoint], p_min: float = 0.0,
                         p_max: float = 1.0, which: str = "estimated") -> tuple[float, float]:
    """Slope of log(rate) vs log(p) by weighted least squares (weights 1/sigma^2).

    sigma of log(rate) is the binomial sigma over the rate.  Returns
    (slope, standard error).
    """
    pts = result.points if isinstance(result, SweepResult) else list(result)
    sel = [pt for pt in pts if p_min <= pt.p <= p_max and pt.rate(which) > 0]
    if len(sel) < 3:
        raise ValueError("need at least 3 points with non-zero rate in the window")
    x = np.log([pt.p for pt in sel])
    y = np.log([pt.rate(which) for pt in sel])
    k = np.array([pt.fail_true if which == "true" else pt.fail_estimated for pt in sel], float)
    n = np.array([pt.accepted for pt in sel], float)
    r = k / n
    sig = np.sqrt(np.maximum(r * (1 - r) / n, 1e-300)) / r
    w = 1.0 / sig**2
    A = np.stack([np.ones_like(x), x], axis=1)
    cov = np.linalg.inv(A.T @ (A * w[:, None]))
    beta = cov @ (A.T @ (w * y))
    return float(beta[1]), float(math.sqrt(cov[1, 1]))
