"""Brute-force grid oracle for the closed-form model.

Everything here is deliberately pedestrian: wavefunctions are sampled on a
uniform grid, inner products are trapezoid sums, time evolution is an
integer-cell shift, and tensor expectations over product states factorize
into per-site quadratures.  The point is independence: none of these
routines shares a code path with the analytic formulas they are used to
check, so agreement between the two is evidence and disagreement is a bug.

Dense tensor work is capped at 3 sites (k <= 1); product observables are
evaluated factor by factor rather than materializing the full tensor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gaussian_model import GaussianPacket, SGConfig, evolve
from .state_metrics import local_discrepancy_bound

__all__ = [
    "Grid",
    "GridWavefunction",
    "PhaseObservable",
    "OracleMismatch",
    "discretize",
    "packet_profile",
    "inner_product",
    "translate",
    "phase_expectation",
    "branch_wavefunctions",
    "standard_grid",
    "tensor_observable_check",
    "finite_difference",
    "trapezoid",
]

SUPPORT_TOL = 1e-12  # boundary samples must stay below this fraction of the peak
BOUND_SLACK = 1e-12  # absolute slack when asserting measured <= analytic bound


class OracleMismatch(AssertionError):
    """A brute-force value disagreed with (or violated) an analytic claim."""


@dataclass(frozen=True)
class Grid:
    """Uniform grid of n_points samples spanning [z_min, z_max]."""

    z_min: float
    z_max: float
    n_points: int

    def __post_init__(self):
        if not self.z_max > self.z_min:
            raise ValueError("grid window must have z_max > z_min")
        if self.n_points < 64:
            raise ValueError(f"grid needs at least 64 points, got {self.n_points}")

    @property
    def spacing(self) -> float:
        return (self.z_max - self.z_min) / (self.n_points - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.z_min, self.z_max, self.n_points)

    def snap(self, a: float) -> float:
        """Nearest integer-cell multiple of ``a`` (exact shifts only)."""
        return round(a / self.spacing) * self.spacing


@dataclass(frozen=True, eq=False)
class GridWavefunction:
    grid: Grid
    samples: np.ndarray

    def norm(self) -> float:
        return math.sqrt(float(trapezoid(np.abs(self.samples) ** 2, self.grid.spacing).real))


def trapezoid(values: np.ndarray, spacing: float) -> complex:
    """Plain trapezoid quadrature; the only integration rule used here."""
    return complex(np.trapezoid(values, dx=spacing))


def packet_profile(packet: GaussianPacket, z: np.ndarray) -> np.ndarray:
    """Analytic unit-norm profile (2*pi*sigma^2)^(-1/4) * exp(-(z-c)^2/(4 sigma^2))."""
    c, s = packet.center, packet.sigma
    return (2.0 * math.pi * s * s) ** -0.25 * np.exp(-((z - c) ** 2) / (4.0 * s * s))


def _check_support(wf: GridWavefunction, context: str) -> None:
    mags = np.abs(wf.samples)
    peak = float(mags.max())
    if peak == 0.0 or max(float(mags[0]), float(mags[-1])) >= SUPPORT_TOL * peak:
        raise ValueError(f"window too small: {context}")


def discretize(packet: GaussianPacket, grid: Grid) -> GridWavefunction:
    """Sample a packet on the grid and renormalize by quadrature.

    Requires the window to cover center +- 8 sigma and the sampled tails to
    sit below 1e-12 of the peak, so that support is genuinely inside the
    window and boundary error is negligible.
    """
    if grid.z_min > packet.center - 8.0 * packet.sigma or \
            grid.z_max < packet.center + 8.0 * packet.sigma:
        raise ValueError("window too small: grid must cover the packet center +- 8 sigma")
    raw = packet_profile(packet, grid.points()).astype(complex)
    norm = math.sqrt(float(trapezoid(np.abs(raw) ** 2, grid.spacing).real))
    wf = GridWavefunction(grid, raw / norm)
    _check_support(wf, "packet tail reaches the window boundary")
    return wf


def inner_product(f: GridWavefunction, g: GridWavefunction) -> complex:
    """Trapezoid quadrature of conj(f) * g.  Both functions must share a grid."""
    if f.grid != g.grid:
        raise ValueError("inner product requires identical grids")
    return trapezoid(np.conj(f.samples) * g.samples, f.grid.spacing)


def translate(f: GridWavefunction, a: float) -> GridWavefunction:
    """Shift by round(a / spacing) whole cells, zero-filling the vacated end.

    Exact only for shifts that are integer multiples of the spacing; callers
    wanting exactness should snap ``a`` via ``Grid.snap`` first.
    """
    cells = round(a / f.grid.spacing)
    shifted = np.zeros_like(f.samples)
    if cells == 0:
        shifted[:] = f.samples
    elif cells > 0:
        shifted[cells:] = f.samples[:-cells]
    else:
        shifted[:cells] = f.samples[-cells:]
    out = GridWavefunction(f.grid, shifted)
    _check_support(out, "translated support leaves the window")
    return out


def phase_expectation(branches: list[GridWavefunction], rho: float) -> complex:
    """Expectation of exp(i*rho*z_cm) in the product state of the given sites.

    For a product state this is exactly the product over sites of
    <f_i, exp(i*rho*z/n) f_i> with n the number of sites, so no tensor is
    ever materialized.
    """
    n = len(branches)
    if n == 0:
        raise ValueError("need at least one site")
    result = complex(1.0)
    for f in branches:
        z = f.grid.points()
        result *= trapezoid(np.conj(f.samples) * np.exp(1j * rho * z / n) * f.samples,
                            f.grid.spacing)
    return result


def standard_grid(config: SGConfig, t: float, n_points: int = 1024,
                  margin: float = 12.0) -> Grid:
    """Symmetric window covering both branch centers +-lam*t plus a 12 sigma margin."""
    reach = abs(config.lam * t) + margin * config.sigma0
    return Grid(-reach, reach, n_points)


def branch_wavefunctions(config: SGConfig, t: float, grid: Grid | None = None,
                         ) -> tuple[list[GridWavefunction], list[GridWavefunction]]:
    """Discretize every site's packet of both branches on a common grid."""
    if grid is None:
        grid = standard_grid(config, t)
    plus, minus = evolve(config, t)
    xs = [discretize(p, grid) for p in plus.packets]
    ys = [discretize(p, grid) for p in minus.packets]
    return xs, ys


@dataclass(frozen=True)
class PhaseObservable:
    """Spin matrix tensored with per-site phase factors exp(i*theta*z).

    ``site_phases[i] is None`` leaves site i untouched; the support is the
    number of touched sites.  Each phase factor is unitary, so the operator
    norm is the spectral norm of ``spin_matrix``.
    """

    spin_matrix: np.ndarray
    site_phases: tuple

    def __post_init__(self):
        m = np.asarray(self.spin_matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("spin matrix must be 2x2")
        object.__setattr__(self, "spin_matrix", m)

    @property
    def support(self) -> int:
        return sum(1 for theta in self.site_phases if theta is not None)

    @property
    def op_norm(self) -> float:
        return float(np.linalg.norm(self.spin_matrix, 2))


def _phased_factor(f: GridWavefunction, g: GridWavefunction, theta: float | None) -> complex:
    if theta is None:
        return inner_product(f, g)
    z = f.grid.points()
    return trapezoid(np.conj(f.samples) * np.exp(1j * theta * z) * g.samples,
                     f.grid.spacing)


def tensor_observable_check(config: SGConfig, observable: PhaseObservable,
                            t: float | None = None) -> float:
    """Measure |tr(A rho) - tr(A rho_hat)| on the discretized product state.

    ``rho`` is the full pure density matrix of spin plus apparatus at time
    ``t`` (default: config.T); ``rho_hat`` is its branch-diagonal part.  The
    trace difference only involves the two cross terms, each a product of
    per-site quadratures, so the computation stays exact and factorized.
    Raises :class:`OracleMismatch` if the measured discrepancy exceeds the
    analytic locality bound for the observable's support and norm.
    """
    if config.k > 1:
        raise ValueError("dense tensor check is limited to k <= 1 (at most 3 sites)")
    t = config.T if t is None else float(t)
    if len(observable.site_phases) != config.n_sites:
        raise ValueError(
            f"observable lists {len(observable.site_phases)} sites, expected {config.n_sites}"
        )
    xs, ys = branch_wavefunctions(config, t)
    cross_pm = complex(1.0)
    cross_mp = complex(1.0)
    for fx, fy, theta in zip(xs, ys, observable.site_phases):
        cross_pm *= _phased_factor(fx, fy, theta)
        cross_mp *= _phased_factor(fy, fx, theta)
    s = observable.spin_matrix
    a, b = config.alpha, config.beta
    measured = abs(np.conj(a) * b * s[0, 1] * cross_pm
                   + a * np.conj(b) * s[1, 0] * cross_mp)
    bound_config = config if t == config.T else SGConfig(
        config.lam, config.sigma0, t, config.k, config.alpha, config.beta)
    bound = local_discrepancy_bound(bound_config, observable.support, observable.op_norm)
    if measured > bound + BOUND_SLACK:
        raise OracleMismatch(
            f"collapse discrepancy {measured} exceeds locality bound {bound}"
        )
    return float(measured)


def finite_difference(fn, x: float, h: float):
    """Central difference (fn(x+h) - fn(x-h)) / (2h); works for complex fn."""
    if not h > 0.0:
        raise ValueError("step h must be positive")
    return (fn(x + h) - fn(x - h)) / (2.0 * h)
