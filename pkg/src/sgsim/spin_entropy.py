"""Von Neumann entropy accounting for the effective spin-chain mixture.

The effective model replaces each branch of the packet chain by the
aligned product chain over 2k+1 spins.  The two chains are orthogonal at
every k, so their mixture with weights (a, 1-a) has rank <= 2, spectrum
{a, 1-a}, and entropy equal to the binary entropy H(a) no matter how long
the chain is.  Dividing by the volume 2k+1 gives the mean (per-site)
entropy, and there the whole story of this module plays out:

* entropy is strictly concave, so mixing gains H(a) > 0 at every finite k;
* the gain is not extensive, so the per-site gap H(a)/(2k+1) vanishes and
  the mean entropy becomes affine on mixtures;
* consequently a measurement that turns the pure pre-measurement state
  into the branch mixture conserves the mean entropy (at zero), even
  though the finite-volume entropy jumps by H(a).

Entropies are in nats throughout (natural log).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EIG_FLOOR",
    "DENSE_DIM_CAP",
    "SpinChainMixture",
    "EntropyLedger",
    "binary_entropy",
    "entropy_from_spectrum",
    "validate_density_matrix",
    "von_neumann_entropy",
    "mixture_density",
    "mean_entropy",
    "concavity_gap",
    "collapse_entropy_audit",
    "classify_process",
]

EIG_FLOOR = 1e-14       # eigenvalues at or below this count as exact zeros in x*ln(x)
DENSE_DIM_CAP = 4096
DENSE_K_CAP = 5         # dim 2^(2k+1) <= 2048
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
LOG_DIM_SLACK = 1e-9


def binary_entropy(p: float) -> float:
    """H(p) = -p ln p - (1-p) ln(1-p), with the 0 ln 0 limits set to 0."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    s = 0.0
    if p > 0.0:
        s -= p * math.log(p)
    if p < 1.0:
        s -= (1.0 - p) * math.log(1.0 - p)
    return s


def entropy_from_spectrum(eigenvalues) -> float:
    """-sum e ln e over eigenvalues above the zero floor."""
    s = 0.0
    for e in np.asarray(eigenvalues, dtype=float).ravel():
        if e > EIG_FLOOR:
            s -= float(e) * math.log(e)
    return max(s, 0.0)


def validate_density_matrix(rho: np.ndarray) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return the spectrum."""
    m = np.asarray(rho, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {m.shape}")
    if m.shape[0] > DENSE_DIM_CAP:
        raise ValueError(f"dense density matrices are capped at dim {DENSE_DIM_CAP}")
    if np.abs(m - m.conj().T).max() > HERMITIAN_TOL:
        raise ValueError("density matrix is not Hermitian")
    tr = float(np.trace(m).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValueError(f"density matrix trace must be 1, got {tr}")
    eigenvalues = np.linalg.eigvalsh(m)
    if float(eigenvalues.min()) < -PSD_TOL:
        raise ValueError(
            f"density matrix has a negative eigenvalue {float(eigenvalues.min())}")
    return eigenvalues


def von_neumann_entropy(rho: np.ndarray) -> float:
    """S(rho) = -tr(rho ln rho) in nats, bounded by [0, ln dim]."""
    eigenvalues = validate_density_matrix(rho)
    s = entropy_from_spectrum(eigenvalues)
    cap = math.log(len(eigenvalues)) if len(eigenvalues) > 1 else 0.0
    if s > cap + LOG_DIM_SLACK:
        raise ValueError(f"entropy {s} exceeds ln(dim) = {cap}")
    return min(s, cap) if cap else s


@dataclass(frozen=True)
class SpinChainMixture:
    """Mixture a * (all-up chain) + (1-a) * (all-down chain) on 2k+1 spins.

    The two product chains are orthogonal for every k >= 0 (they differ on
    each of the 2k+1 sites), so the mixture is rank <= 2 with spectrum
    {a, 1-a}; this compressed form is valid at any k, while the dense
    matrix is available only up to k = 5.
    """

    alpha2: float
    k: int

    def __post_init__(self):
        if not 0.0 <= self.alpha2 <= 1.0:
            raise ValueError(f"alpha2 must lie in [0, 1], got {self.alpha2}")
        if self.k != int(self.k) or int(self.k) < 0:
            raise ValueError(f"half-size k must be a nonnegative integer, got {self.k}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "alpha2", float(self.alpha2))

    @property
    def n_sites(self) -> int:
        return 2 * self.k + 1

    def spectrum(self) -> np.ndarray:
        """Nonzero eigenvalues of the mixture, independent of k."""
        eigenvalues = [p for p in (self.alpha2, 1.0 - self.alpha2) if p > 0.0]
        return np.array(eigenvalues)

    def entropy(self) -> float:
        return entropy_from_spectrum(self.spectrum())

    def per_site_entropy(self) -> float:
        return mean_entropy(self.entropy(), self.n_sites)

    def dense(self) -> np.ndarray:
        return mixture_density(self.alpha2, self.k)


def mixture_density(alpha2: float, k: int) -> np.ndarray:
    """Dense 2^(2k+1)-dimensional matrix of the chain mixture (k <= 5 only).

    The all-up and all-down projectors occupy the first and last diagonal
    slots of the computational basis, so the matrix is diagonal with
    exactly two nonzero entries.
    """
    mix = SpinChainMixture(alpha2, k)
    if mix.k > DENSE_K_CAP:
        raise ValueError(
            f"dense form capped at k = {DENSE_K_CAP} (dim 2048); use SpinChainMixture")
    dim = 2 ** mix.n_sites
    rho = np.zeros((dim, dim), dtype=complex)
    rho[0, 0] = mix.alpha2
    rho[dim - 1, dim - 1] += 1.0 - mix.alpha2
    return rho


def mean_entropy(entropy: float, volume: int) -> float:
    """Entropy per site, checked against the spin-1/2 bound 0 <= s <= ln 2."""
    if volume < 1:
        raise ValueError(f"volume must be a positive integer, got {volume}")
    if entropy < 0.0:
        raise ValueError(f"entropy must be >= 0, got {entropy}")
    per_site = entropy / volume
    if per_site > math.log(2.0) + LOG_DIM_SLACK:
        raise ValueError(f"mean entropy {per_site} exceeds the ln 2 bound per spin")
    return per_site


def concavity_gap(rho1: np.ndarray, rho2: np.ndarray, a: float) -> float:
    """Entropy gained by mixing: S(a rho1 + (1-a) rho2) - a S1 - (1-a) S2.

    Nonnegative by concavity, and strictly positive for distinct states at
    interior weights; up to ~1e-15 of eigensolver noise may appear on the
    negative side when rho1 = rho2.
    """
    m1 = np.asarray(rho1, dtype=complex)
    m2 = np.asarray(rho2, dtype=complex)
    if m1.shape != m2.shape:
        raise ValueError(f"dimension mismatch: {m1.shape} vs {m2.shape}")
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"mixing weight must lie in [0, 1], got {a}")
    mixed = a * m1 + (1.0 - a) * m2
    return von_neumann_entropy(mixed) \
        - a * von_neumann_entropy(m1) - (1.0 - a) * von_neumann_entropy(m2)


@dataclass(frozen=True)
class EntropyLedger:
    """Before/after entropy bookkeeping for one measurement at given (a, k)."""

    alpha2: float
    k: int
    s_pre: float
    s_post_mixture: float
    s_avg_outcomes: float
    per_site_pre: float
    per_site_post_mixture: float
    per_site_avg_outcomes: float


def collapse_entropy_audit(alpha2: float, k: int) -> EntropyLedger:
    """Track entropy through collapse on the 2k+1-site chain.

    The pre-measurement state and each individual outcome are single
    product vectors, hence exactly pure with entropy 0; only the collapsed
    mixture carries entropy, the binary entropy of the weights.  The
    per-site columns show the conservation statement: the outcome average
    stays at 0, and the mixture's per-site entropy H(a)/(2k+1) vanishes as
    the chain grows, so on the mean-entropy ledger collapse costs nothing.
    """
    mix = SpinChainMixture(alpha2, k)
    s_pre = 0.0
    s_avg = mix.alpha2 * 0.0 + (1.0 - mix.alpha2) * 0.0
    s_post = mix.entropy()
    n = mix.n_sites
    return EntropyLedger(
        alpha2=mix.alpha2,
        k=mix.k,
        s_pre=s_pre,
        s_post_mixture=s_post,
        s_avg_outcomes=s_avg,
        per_site_pre=mean_entropy(s_pre, n),
        per_site_post_mixture=mean_entropy(s_post, n),
        per_site_avg_outcomes=mean_entropy(s_avg, n),
    )


def classify_process(s1: float, s2: float, tol: float = 1e-12) -> str:
    """Label a mean-entropy change: Reversible, Irreversible or Forbidden.

    Equal entropies (within tol) mean the inverse process is possible too;
    an increase is irreversible; a decrease cannot happen at all once a
    time arrow is fixed, hence Forbidden.
    """
    if s1 < 0.0 or s2 < 0.0:
        raise ValueError("mean entropies are nonnegative")
    if tol < 0.0:
        raise ValueError("tolerance must be >= 0")
    if abs(s1 - s2) <= tol:
        return "Reversible"
    if s2 > s1:
        return "Irreversible"
    return "Forbidden"
