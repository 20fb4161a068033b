"""Closed-form model of a spin-1/2 measured by a chain of Gaussian packets.

The apparatus occupies sites -k..k of an integer chain (2k+1 sites) and
carries one unit-norm Gaussian packet of width ``sigma0`` per site.  The
spin couples only to the total momentum of the chain, so evolving for a
time ``t`` rigidly translates every packet by ``sign * lam * t`` with no
spreading, and the quantities that control decoherence reduce to exact
Gaussian integrals:

* per-site overlap of the two branches:  exp(-(lam*t)^2 / (2*sigma0^2))
* full branch overlap:                   the per-site value to the power 2k+1
* decoherence time:                      3*sigma0 / lam

Branch overlaps underflow double precision already for modest separations
(the exponent scales like -(2k+1)*(lam*t/sigma0)^2 / 2), so overlaps are
carried as log-magnitudes and never formed as products of linear factors.

Only the dimensionless ratio ``lam*t/sigma0`` enters any formula here;
inputs may be given in any consistent unit system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "SGConfig",
    "GaussianPacket",
    "BranchState",
    "LogOverlap",
    "WindowCheck",
    "initial_state",
    "evolve",
    "per_site_log_overlap",
    "per_site_overlap",
    "branch_overlap",
    "decoherence_time",
    "branch_center_distance",
    "check_measurement_window",
]

WEIGHT_NORM_TOL = 1e-12


@dataclass(frozen=True)
class SGConfig:
    """Full parametrization of one measurement run.

    ``lam`` is the field-gradient coupling; it doubles as the mean
    velocity each branch acquires along z.  (The command line spells it
    ``--lambda``; the Python keyword forces the shorter attribute name.)
    ``alpha`` and ``beta`` weight the spin-up / spin-down components and
    must satisfy |alpha|^2 + |beta|^2 = 1.
    """

    lam: float
    sigma0: float
    T: float
    k: int
    alpha: complex
    beta: complex

    def __post_init__(self):
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "sigma0", float(self.sigma0))
        object.__setattr__(self, "T", float(self.T))
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        if not self.lam > 0.0:
            raise ValueError(f"coupling lam must be positive, got {self.lam}")
        if not self.sigma0 > 0.0:
            raise ValueError(f"packet width sigma0 must be positive, got {self.sigma0}")
        if math.isnan(self.T) or self.T < 0.0:
            raise ValueError(f"measurement time T must be >= 0, got {self.T}")
        if self.k != int(self.k) or int(self.k) < 0:
            raise ValueError(f"half-size k must be a nonnegative integer, got {self.k}")
        object.__setattr__(self, "k", int(self.k))
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > WEIGHT_NORM_TOL:
            raise ValueError(
                f"spinor weights must satisfy |alpha|^2 + |beta|^2 = 1, got {norm!r}"
            )

    @classmethod
    def from_alpha2(cls, lam: float, sigma0: float, T: float, k: int,
                    alpha2: float) -> "SGConfig":
        """Build a config from the spin-up probability |alpha|^2 (real weights)."""
        if not 0.0 <= alpha2 <= 1.0:
            raise ValueError(f"alpha2 must lie in [0, 1], got {alpha2}")
        return cls(lam, sigma0, T, k, math.sqrt(alpha2), math.sqrt(1.0 - alpha2))

    @property
    def n_sites(self) -> int:
        return 2 * self.k + 1

    @property
    def alpha2(self) -> float:
        return abs(self.alpha) ** 2

    @property
    def beta2(self) -> float:
        return abs(self.beta) ** 2


@dataclass(frozen=True)
class GaussianPacket:
    """One site's packet: unit-norm Gaussian of width ``sigma`` at ``center``."""

    center: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise ValueError(f"packet width must be positive, got {self.sigma}")


@dataclass(frozen=True)
class BranchState:
    """One spin branch: its sign, per-site packets and spinor weight."""

    sign: int
    packets: tuple[GaussianPacket, ...]
    weight: complex

    def __post_init__(self):
        if self.sign not in (+1, -1):
            raise ValueError(f"branch sign must be +1 or -1, got {self.sign}")
        if not self.packets:
            raise ValueError("a branch needs at least one packet")

    @property
    def n_sites(self) -> int:
        return len(self.packets)

    def centers(self) -> tuple[float, ...]:
        return tuple(p.center for p in self.packets)


@dataclass(frozen=True)
class LogOverlap:
    """Inner product of two branch vectors, stored as log|.| plus phase.

    ``exp(log_magnitude)`` would underflow for realistic parameters (the
    exponent reaches ~-1e8 for laboratory numbers), which is the whole
    reason this type exists: consumers must combine log-magnitudes, not
    re-exponentiate and multiply.
    """

    log_magnitude: float
    phase: float = 0.0

    def __post_init__(self):
        if self.log_magnitude > 0.0:
            raise ValueError(
                f"log-magnitude of an overlap cannot be positive, got {self.log_magnitude}"
            )

    @property
    def magnitude(self) -> float:
        """Linear magnitude; underflows to 0.0 below exp(-745) or so."""
        return math.exp(self.log_magnitude)


@dataclass(frozen=True)
class WindowCheck:
    """Result of the measurement-window test 0 < t_D <= T < infinity."""

    ok: bool
    t_d: float
    T: float
    diagnostic: str

    def __bool__(self) -> bool:
        return self.ok


def _branch(config: SGConfig, sign: int, t: float) -> BranchState:
    # Spin-up rides with the packets moving toward +z so that the readout
    # z_cm / (2*lam*T) lands on +1/2.
    center = sign * config.lam * t
    packets = tuple(
        GaussianPacket(center, config.sigma0) for _ in range(config.n_sites)
    )
    weight = config.alpha if sign > 0 else config.beta
    return BranchState(sign, packets, weight)


def initial_state(config: SGConfig) -> tuple[BranchState, BranchState]:
    """Both branches at t=0: every packet centered at 0 with width sigma0."""
    return evolve(config, 0.0)


def evolve(config: SGConfig, t: float) -> tuple[BranchState, BranchState]:
    """Branches at time t: packets rigidly shifted to +-lam*t, widths unchanged.

    There is no kinetic term acting on the packets, so no spreading occurs;
    evolution is an exact translation.
    """
    if t < 0.0:
        raise ValueError(f"evolution time must be >= 0, got {t}")
    return _branch(config, +1, t), _branch(config, -1, t)


def per_site_log_overlap(config: SGConfig, t: float) -> float:
    """ln of the overlap of one site's two packets, -(lam*t)^2 / (2*sigma0^2).

    The two unit Gaussians sit at +-lam*t, a separation of 2*lam*t, and
    share the width sigma0.  Even in t, so negative t is accepted.
    """
    u = (config.lam * float(t)) / config.sigma0
    return -0.5 * u * u


def per_site_overlap(config: SGConfig, t: float) -> float:
    """Linear per-site overlap exp(-(lam*t)^2 / (2*sigma0^2)), in (0, 1].

    Underflows to 0.0 once |lam*t| / sigma0 exceeds ~38.6; use
    :func:`per_site_log_overlap` in that regime.
    """
    return math.exp(per_site_log_overlap(config, t))


def branch_overlap(config: SGConfig, t: float) -> LogOverlap:
    """Overlap of the evolved branch vectors over all 2k+1 sites.

    The branch vectors factorize site by site, so the log-magnitude is
    exactly (2k+1) times the per-site log; the phase vanishes because the
    packets are real.  Formed in the log domain only.
    """
    return LogOverlap(config.n_sites * per_site_log_overlap(config, t), 0.0)


def decoherence_time(config: SGConfig) -> float:
    """Minimum time 3*sigma0/lam after which the two outcomes are resolvable."""
    return 3.0 * config.sigma0 / config.lam


def branch_center_distance(config: SGConfig, t: float) -> float:
    """Distance 2*lam*t between the two branches' packet centers at time t.

    Exposed as a diagnostic: the decoherence time quoted by
    :func:`decoherence_time` compares a 3*sigma0 separation criterion
    against the branch displacement lam*t, not against this full
    center-to-center distance.
    """
    return 2.0 * config.lam * float(t)


def check_measurement_window(config: SGConfig) -> WindowCheck:
    """Test 0 < t_D <= T < infinity and name the violated inequality if any."""
    t_d = decoherence_time(config)
    if config.T == 0.0:
        return WindowCheck(False, t_d, config.T,
                           "instantaneous measurement excluded (T = 0 violates 0 < t_D <= T)")
    if math.isinf(config.T):
        return WindowCheck(False, t_d, config.T,
                           "measurement time must be finite (T < infinity violated)")
    if config.T < t_d:
        return WindowCheck(False, t_d, config.T,
                           f"measurement ends before decoherence (T = {config.T} < t_D = {t_d})")
    return WindowCheck(True, t_d, config.T, "0 < t_D <= T < infinity satisfied")
