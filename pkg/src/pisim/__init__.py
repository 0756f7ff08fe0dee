"""Discrete-time parallel-server load-balancing simulator.

Batch arrivals hit a dispatcher once per slot and are routed to one of n
heterogeneous servers by a pluggable policy (persistent-idle token policies
plus join-shortest-queue / power-of-two / power-of-memory / join-idle-queue
baselines).  The analysis subpackage computes Lyapunov drift constants for
the token policies and verifies the negative-drift and moment inequalities
by Monte Carlo.
"""

__version__ = "0.1.0"

from . import core, stochastic  # noqa: F401,E402
