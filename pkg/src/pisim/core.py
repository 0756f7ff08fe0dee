"""Model state and parameter types for the discrete-time parallel-server system.

Time is slotted.  In each slot: (1) a batch of jobs arrives at the dispatcher,
(2) the dispatcher routes the batch (or its parts) to servers, (3) every
server serves up to its realised capacity for the slot, and a server may serve
jobs that arrived in the very same slot, (4) servers that just became idle
send their token to the dispatcher.

Server indices are 0-based everywhere in code; CSV headers label them 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .stochastic import DistSpec


@dataclass(frozen=True)
class ModelParams:
    """Static description of one system: n servers, arrivals, capacities.

    The moment fields (lam, sigma_a, mu, sigma_s, s_max) are derived from the
    distribution specs at construction; `lam` is the arrival mean (lambda).
    s_max is None when some capacity distribution is unbounded (invalid, see
    validate()).
    """

    n: int
    arrival: DistSpec
    capacities: tuple
    s_max: Optional[int] = field(init=False)
    lam: float = field(init=False)
    sigma_a: float = field(init=False)
    mu: tuple = field(init=False)
    sigma_s: tuple = field(init=False)

    def __post_init__(self):
        caps = tuple(self.capacities)
        object.__setattr__(self, "capacities", caps)
        object.__setattr__(self, "lam", self.arrival.mean)
        object.__setattr__(self, "sigma_a", self.arrival.variance ** 0.5)
        object.__setattr__(self, "mu", tuple(c.mean for c in caps))
        object.__setattr__(self, "sigma_s", tuple(c.variance ** 0.5 for c in caps))
        maxes = [c.support_max for c in caps]
        s_max = None if any(m is None for m in maxes) or not maxes else max(maxes)
        object.__setattr__(self, "s_max", s_max)

    @property
    def total_mu(self) -> float:
        return sum(self.mu)


def validate(params: ModelParams) -> list:
    """Check model well-formedness; violations are returned as data, not raised.

    Returns a list of human-readable violation strings (empty = valid).
    """
    v = []
    if params.n < 1:
        v.append("need at least one server")
    if len(params.capacities) != params.n:
        v.append(f"expected {params.n} capacity distributions, got {len(params.capacities)}")
    if params.arrival.p_zero <= 0.0:
        v.append("zero-arrival probability required")
    for i, c in enumerate(params.capacities):
        if c.support_min < 1:
            v.append(f"capacity below 1 (server {i})")
        if c.support_max is None:
            v.append(f"capacity unbounded (server {i})")
    return v


@dataclass(frozen=True)
class SystemState:
    """End-of-slot system state.

    q                per-server queue lengths (jobs left after service)
    li               the last-idle server index (the routing target while no
                     token is at the dispatcher)
    dispatcher_tokens  servers whose token the dispatcher currently holds;
                     equals the idle set after every slot (checked invariant)
    slot             the slot this state closes (0 = initial)
    """

    q: tuple
    li: int
    dispatcher_tokens: frozenset
    slot: int = 0

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(self.q))
        object.__setattr__(self, "dispatcher_tokens", frozenset(self.dispatcher_tokens))

    @property
    def total_queue(self) -> int:
        return sum(self.q)


def idle_set(q) -> frozenset:
    """Servers with an empty queue."""
    return frozenset(i for i, x in enumerate(q) if x == 0)


def make_state(q, li: int, slot: int = 0) -> SystemState:
    """SystemState with the token invariant satisfied by construction."""
    q = tuple(q)
    return SystemState(q=q, li=li, dispatcher_tokens=idle_set(q), slot=slot)


@dataclass(frozen=True)
class Allocation:
    """How one slot's batch is spread over servers; counts[i] jobs to server i."""

    counts: tuple

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(self.counts))

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def support(self) -> tuple:
        return tuple(i for i, c in enumerate(self.counts) if c > 0)


@dataclass
class Job:
    """One job's identity and lifetime; FIFO order is (arrival_slot, position_in_batch)."""

    id: int
    arrival_slot: int
    server: int
    position_in_batch: int
    completion_slot: Optional[int] = None

    @property
    def jct(self) -> Optional[int]:
        """Completion time in slots; a same-slot arrival+completion counts 1."""
        if self.completion_slot is None:
            return None
        return self.completion_slot - self.arrival_slot + 1


@dataclass(frozen=True)
class SlotEvents:
    """Everything that happened in one slot (sufficient to replay the slot).

    departures[i] never exceeds the realised capacity of server i for the
    slot; tokens_sent counts servers that became idle during the slot (served
    at least one job and ended empty).  li is the last-idle value in force
    during the slot, i.e. after the routing decision.
    """

    slot: int
    batch_size: int
    allocation: Allocation
    departures: tuple
    completed_jobs: tuple
    tokens_sent: int
    is_sampling_event: bool
    li: int

    def __post_init__(self):
        object.__setattr__(self, "departures", tuple(self.departures))
        object.__setattr__(self, "completed_jobs", tuple(self.completed_jobs))
