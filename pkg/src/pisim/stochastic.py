"""Seeded randomness: distribution specs with exact moments, and isolated substreams.

Every random quantity in a run is drawn from one of four substreams derived
from a single master seed (arrival sizes, per-server capacities, token-policy
tie-breaks, and all other policy randomness).  Substreams are independent by
construction via SeedSequence spawning, so e.g. two policies fed the same
master seed see bit-identical arrival and capacity processes no matter how
much policy randomness either consumes.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

_KINDS = ("deterministic", "uniform-int", "poisson", "bernoulli", "truncated-poisson")

_U64 = 1 << 64


# ---------------------------------------------------------------------------
# Distribution specs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DistSpec:
    """A nonnegative-integer distribution with closed-form moments.

    kind is one of:
      deterministic(v)          point mass at v
      uniform-int(lo, hi)       uniform on the integers lo..hi inclusive
      poisson(rate)             Poisson with the given mean
      bernoulli(p, value)       `value` with probability p, else 0
      truncated-poisson(rate, cap)  min(Poisson(rate), cap); the tail mass
                                    above cap sits on cap itself
    """

    kind: str
    args: tuple

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        a = self.args
        if self.kind == "deterministic":
            if len(a) != 1 or int(a[0]) != a[0] or a[0] < 0:
                raise ValueError("deterministic(v) needs one integer v >= 0")
            object.__setattr__(self, "args", (int(a[0]),))
        elif self.kind == "uniform-int":
            if len(a) != 2 or any(int(x) != x for x in a) or a[0] > a[1] or a[0] < 0:
                raise ValueError("uniform-int(lo, hi) needs integers 0 <= lo <= hi")
            object.__setattr__(self, "args", (int(a[0]), int(a[1])))
        elif self.kind == "poisson":
            if len(a) != 1 or a[0] < 0:
                raise ValueError("poisson(rate) needs rate >= 0")
            object.__setattr__(self, "args", (float(a[0]),))
        elif self.kind == "bernoulli":
            if len(a) != 2 or not (0.0 <= a[0] <= 1.0) or int(a[1]) != a[1] or a[1] < 0:
                raise ValueError("bernoulli(p, value) needs 0 <= p <= 1 and integer value >= 0")
            object.__setattr__(self, "args", (float(a[0]), int(a[1])))
        elif self.kind == "truncated-poisson":
            if len(a) != 2 or a[0] < 0 or int(a[1]) != a[1] or a[1] < 0:
                raise ValueError("truncated-poisson(rate, cap) needs rate >= 0 and integer cap >= 0")
            object.__setattr__(self, "args", (float(a[0]), int(a[1])))

    # -- moments ------------------------------------------------------------

    @property
    def mean(self) -> float:
        k, a = self.kind, self.args
        if k == "deterministic":
            return float(a[0])
        if k == "uniform-int":
            return (a[0] + a[1]) / 2.0
        if k == "poisson":
            return a[0]
        if k == "bernoulli":
            return a[0] * a[1]
        return _trunc_poisson_moments(*a)[0]

    @property
    def variance(self) -> float:
        k, a = self.kind, self.args
        if k == "deterministic":
            return 0.0
        if k == "uniform-int":
            w = a[1] - a[0] + 1
            return (w * w - 1) / 12.0
        if k == "poisson":
            return a[0]
        if k == "bernoulli":
            return a[0] * (1.0 - a[0]) * a[1] * a[1]
        return _trunc_poisson_moments(*a)[1]

    @property
    def support_min(self) -> int:
        k, a = self.kind, self.args
        if k == "deterministic":
            return a[0]
        if k == "uniform-int":
            return a[0]
        if k == "bernoulli":
            if a[0] >= 1.0:
                return a[1]
            return 0
        return 0  # (truncated-)poisson

    @property
    def support_max(self):
        """Largest attainable value, or None when the support is unbounded."""
        k, a = self.kind, self.args
        if k == "deterministic":
            return a[0]
        if k == "uniform-int":
            return a[1]
        if k == "poisson":
            return None if a[0] > 0 else 0
        if k == "bernoulli":
            return a[1] if a[0] > 0 else 0
        return a[1] if a[0] > 0 else 0

    @property
    def p_zero(self) -> float:
        """P(X = 0)."""
        k, a = self.kind, self.args
        if k == "deterministic":
            return 1.0 if a[0] == 0 else 0.0
        if k == "uniform-int":
            return 1.0 / (a[1] - a[0] + 1) if a[0] == 0 else 0.0
        if k in ("poisson", "truncated-poisson"):
            if a[0] == 0:
                return 1.0
            p0 = math.exp(-a[0])
            if k == "truncated-poisson" and a[1] == 0:
                return 1.0
            return p0
        # bernoulli
        p, v = a
        return 1.0 if v == 0 else 1.0 - p

    # -- sampling -----------------------------------------------------------

    def sample_block(self, rng: np.random.Generator, size) -> np.ndarray:
        """Draw `size` variates as an int64 array from the given generator."""
        k, a = self.kind, self.args
        if k == "deterministic":
            return np.full(size, a[0], dtype=np.int64)
        if k == "uniform-int":
            return rng.integers(a[0], a[1] + 1, size=size, dtype=np.int64)
        if k == "poisson":
            return rng.poisson(a[0], size=size).astype(np.int64, copy=False)
        if k == "bernoulli":
            return (rng.random(size=size) < a[0]).astype(np.int64) * a[1]
        out = rng.poisson(a[0], size=size)
        np.minimum(out, a[1], out=out)
        return out.astype(np.int64, copy=False)

    def sample_one(self, rng: np.random.Generator) -> int:
        return int(self.sample_block(rng, 1)[0])

    def __str__(self) -> str:
        inner = ",".join(f"{x:g}" if isinstance(x, float) else str(x) for x in self.args)
        return f"{self.kind}({inner})"


def deterministic(v) -> DistSpec:
    return DistSpec("deterministic", (v,))


def uniform_int(lo, hi) -> DistSpec:
    return DistSpec("uniform-int", (lo, hi))


def poisson(rate) -> DistSpec:
    return DistSpec("poisson", (rate,))


def bernoulli(p, value) -> DistSpec:
    return DistSpec("bernoulli", (p, value))


def truncated_poisson(rate, cap) -> DistSpec:
    return DistSpec("truncated-poisson", (rate, cap))


_DIST_RE = re.compile(r"^\s*([a-z-]+)\s*\(\s*([^()]*)\s*\)\s*$")


def parse_dist(text: str) -> DistSpec:
    """Parse the config-file syntax, e.g. "uniform-int(1,19)" or "poisson(2.0)"."""
    m = _DIST_RE.match(text.replace("_", "-").lower())
    if not m:
        raise ValueError(f"cannot parse distribution {text!r}")
    kind = m.group(1)
    raw = [s.strip() for s in m.group(2).split(",")] if m.group(2).strip() else []
    args = tuple(float(s) if ("." in s or "e" in s) else int(s) for s in raw)
    return DistSpec(kind, args)


def _trunc_poisson_moments(rate: float, cap: int):
    return _trunc_poisson_moments_cached(rate, cap)


@lru_cache(maxsize=256)
def _trunc_poisson_moments_cached(rate: float, cap: int):
    """(mean, variance) of min(Poisson(rate), cap) by direct summation."""
    if rate == 0 or cap == 0:
        return (0.0, 0.0)
    log_rate = math.log(rate)
    pmf = [math.exp(k * log_rate - rate - math.lgamma(k + 1)) for k in range(cap)]
    tail = max(0.0, 1.0 - math.fsum(pmf))
    m1 = math.fsum(k * p for k, p in enumerate(pmf)) + cap * tail
    m2 = math.fsum(k * k * p for k, p in enumerate(pmf)) + cap * cap * tail
    return (m1, m2 - m1 * m1)


# ---------------------------------------------------------------------------
# Substreams
# ---------------------------------------------------------------------------

class RngStreams:
    """Independent substreams for one run, derived from a single master seed.

    arrival        batch sizes, one draw per slot
    capacity[i]    server i's service capacity, one draw per slot per server
    tie_break      token-policy randomness (which idle server is picked)
    policy_choice  every other policy decision (probing, baseline tie-breaks,
                   split remainder placement, memory initialisation)
    """

    def __init__(self, master_seed: int, n_servers: int):
        root = np.random.SeedSequence(master_seed)
        arr_ss, cap_parent, tie_ss, pol_ss = root.spawn(4)
        self.master_seed = master_seed
        self.n_servers = n_servers
        self.arrival = np.random.Generator(np.random.PCG64(arr_ss))
        self.capacity = [
            np.random.Generator(np.random.PCG64(c)) for c in cap_parent.spawn(n_servers)
        ]
        self.tie_break = np.random.Generator(np.random.PCG64(tie_ss))
        self.policy_choice = np.random.Generator(np.random.PCG64(pol_ss))


class UintFeed:
    """Blocked stream of raw uint64 words from a Generator (hot-loop helper)."""

    __slots__ = ("_gen", "_buf", "_i", "_block")

    def __init__(self, gen: np.random.Generator, block: int = 4096):
        self._gen = gen
        self._block = block
        self._buf = ()
        self._i = 0

    def next_uint(self) -> int:
        i = self._i
        if i >= len(self._buf):
            self._buf = self._gen.integers(0, _U64, size=self._block, dtype=np.uint64).tolist()
            i = 0
        self._i = i + 1
        return self._buf[i]

    def index(self, k: int) -> int:
        """Unbiased uniform integer in [0, k) via rejection on 64-bit words."""
        if k <= 1:
            if k == 1:
                return 0
            raise ValueError("empty range")
        limit = _U64 - (_U64 % k)
        u = self.next_uint()
        while u >= limit:
            u = self.next_uint()
        return u % k


class IntFeed:
    """Blocked scalar draws from a DistSpec (hot-loop helper)."""

    __slots__ = ("_dist", "_gen", "_buf", "_i", "_block")

    def __init__(self, dist: DistSpec, gen: np.random.Generator, block: int = 8192):
        self._dist = dist
        self._gen = gen
        self._block = block
        self._buf = []
        self._i = 0

    def next(self) -> int:
        i = self._i
        if i >= len(self._buf):
            self._buf = self._dist.sample_block(self._gen, self._block).tolist()
            i = 0
        self._i = i + 1
        return self._buf[i]


def tie_break_uniform(candidates, source):
    """Pick one element of `candidates` uniformly at random.

    `source` is either a numpy Generator or a UintFeed.  An empty candidate
    set is a programming error.
    """
    seq = sorted(candidates) if not isinstance(candidates, (list, tuple)) else list(candidates)
    k = len(seq)
    if k == 0:
        raise ValueError("tie_break_uniform: empty candidate set")
    if k == 1:
        return seq[0]
    if isinstance(source, UintFeed):
        return seq[source.index(k)]
    return seq[int(source.integers(0, k))]
