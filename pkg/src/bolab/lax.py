"""Discretized Lax operator on the truncated Hardy basis and its spectral identities.

The operator L_u f = -i f' - P(u f) (P the Szego projection) acts on the
Hardy space.  In frequency variables it is multiplication by xi minus a
convolution against the transform of u over [0, infinity).  Discretizing
that half-line integral on the grid xi_k = k dk with trapezoid endpoint
weights w (w_0 = 1/2, else 1) and passing to orthonormal coordinates gives
the Hermitian matrix

    A_km = k dk delta_km - sqrt(w_k w_m) c_{k-m}(u),
    (u_plus)_k = sqrt(w_k L) c_k(u).

The endpoint half-weight matters: with full weight at k = 0 the bound-state
eigenvalue, the momentum <u_plus, u_plus>, and the generating function all
pick up O(dk) errors an order of magnitude above the laboratory tolerances.

Everything downstream (couplings, Wu ratios, beta, conserved energies,
variational gap, span residual, residues) is computed in these coordinates,
where eigenvectors are orthonormal in the plain vector sense.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import cho_factor, cho_solve, toeplitz

from .grid import Grid, HardyField, NormSpec, RealField, sobolev_norm, to_coefficients

__all__ = [
    "LaxSystem",
    "SpectralData",
    "BetaCurve",
    "WuReport",
    "ResolutionError",
    "assemble",
    "eigensolve",
    "wu_check",
    "second_wu_check",
    "beta",
    "beta_curve",
    "kappa_floor",
    "conserved_energies",
    "grid_energy",
    "variational_gap",
    "span_residual",
    "residue_probe",
    "eigenfunction_field",
    "eigenfunction_decay_probe",
    "DEFAULT_BOUND_THRESHOLD",
]

# Separates bound states from the discretized continuum, which starts at 0
# with spacing dk (about 0.0245 at defaults).
DEFAULT_BOUND_THRESHOLD = -0.05


class ResolutionError(ValueError):
    """Requested mode count exceeds what the grid resolves."""


@dataclass(frozen=True)
class LaxSystem:
    """Hermitian matrix of the discretized Lax operator plus the Hardy data of u.

    Attributes:
        grid: Underlying spatial grid.
        n_modes: Number K of retained nonnegative frequencies.
        matrix: K x K Hermitian array in orthonormal coordinates.
        u_plus: Coordinates of the Hardy component of u.
        weights: Endpoint quadrature weights (1/2 at k = 0, else 1).
    """

    grid: Grid
    n_modes: int
    matrix: NDArray[np.complex128]
    u_plus: NDArray[np.complex128]
    weights: NDArray[np.float64]

    def coefficients_of(self, vec: NDArray[np.complex128]) -> NDArray[np.complex128]:
        """Torus coefficients c_k of a vector given in orthonormal coordinates."""
        return vec / np.sqrt(self.grid.length * self.weights)


def assemble(u: RealField, n_modes: int) -> LaxSystem:
    """Build the discretized Lax operator of a real field.

    Requires n_modes <= n_points / 2 so the convolution entries c_{k-m} are
    available without aliasing.
    """
    grid = u.grid
    if not 1 <= n_modes <= grid.n_points // 2:
        raise ResolutionError(
            f"n_modes = {n_modes} exceeds resolved bandwidth n/2 = {grid.n_points // 2}"
        )
    c = to_coefficients(u)
    col = c[:n_modes]
    T = toeplitz(col, np.conj(col))
    w = np.ones(n_modes)
    w[0] = 0.5
    sw = np.sqrt(w)
    A = np.diag(grid.dk * np.arange(n_modes)) - sw[:, None] * T * sw[None, :]
    u_plus = np.sqrt(grid.length * w) * col
    return LaxSystem(grid, n_modes, A, u_plus, w)


@dataclass(frozen=True)
class SpectralData:
    """Eigendecomposition of a LaxSystem.

    eigenvalues ascending; eigenvectors orthonormal columns; couplings
    gamma_j = <f_j, u_plus> with each eigenvector's phase fixed so that
    gamma_j >= 0.
    """

    eigenvalues: NDArray[np.float64]
    eigenvectors: NDArray[np.complex128]
    couplings: NDArray[np.float64]


def eigensolve(sys: LaxSystem) -> SpectralData:
    """Full Hermitian eigendecomposition with the coupling-positive phase fix."""
    try:
        evals, vecs = np.linalg.eigh(sys.matrix)
    except np.linalg.LinAlgError as exc:
        a = np.abs(sys.matrix)
        raise RuntimeError(
            f"Hermitian eigensolver failed: {exc}; matrix max |entry| = {a.max():.3e}, "
            f"K = {sys.n_modes}"
        ) from exc
    gam = vecs.conj().T @ sys.u_plus
    # rotate each eigenvector by gamma/|gamma| so that <f_j, u_plus> = |gamma_j|
    safe = np.where(np.abs(gam) > 0, np.abs(gam), 1.0)
    phase = np.where(np.abs(gam) > 0, gam / safe, 1.0)
    vecs = vecs * phase[None, :]
    return SpectralData(evals, vecs, np.abs(gam))


def bound_states(data: SpectralData, threshold: float = DEFAULT_BOUND_THRESHOLD):
    """Indices of eigenvalues below the bound-state threshold."""
    return np.where(data.eigenvalues < threshold)[0]


@dataclass(frozen=True)
class WuReport:
    """Per bound state: the coupling identity |<u, f>|^2 = 2 pi |lambda| ||f||^2.

    ratios hold |gamma|^2 / (2 pi |lambda|); in orthonormal coordinates
    ||f|| = 1.  second_residuals hold the relative defect of
    sqrt(2 pi) lambda fhat(0) + <u, f>.  min_gap is the smallest spacing
    between the reported eigenvalues (simplicity check).
    """

    eigenvalues: NDArray[np.float64]
    couplings_sq: NDArray[np.float64]
    wu_rhs: NDArray[np.float64]
    ratios: NDArray[np.float64]
    second_residuals: NDArray[np.float64]
    min_gap: float


def wu_check(
    data: SpectralData,
    sys: LaxSystem,
    threshold: float = DEFAULT_BOUND_THRESHOLD,
) -> WuReport:
    """Evaluate the coupling identity for every eigenvalue below threshold."""
    if threshold >= 0:
        raise ValueError(f"threshold must be negative, got {threshold}")
    idx = bound_states(data, threshold)
    lam = data.eigenvalues[idx]
    csq = data.couplings[idx] ** 2
    rhs = 2 * np.pi * np.abs(lam)
    ratios = csq / rhs
    gaps = np.diff(lam)
    min_gap = float(gaps.min()) if gaps.size else np.inf
    second = second_wu_check(data, sys, threshold)
    return WuReport(lam, csq, rhs, ratios, second, min_gap)


def second_wu_check(
    data: SpectralData,
    sys: LaxSystem,
    threshold: float = DEFAULT_BOUND_THRESHOLD,
) -> NDArray[np.float64]:
    """Relative residual of sqrt(2 pi) lambda fhat(0) + <u, f> per bound state.

    fhat(0) uses the torus-to-line dictionary (L / sqrt(2 pi)) c_0(f).
    A coupling below 1e-12 contradicts the Wu relation and flags a
    resolution failure.
    """
    idx = bound_states(data, threshold)
    out = np.empty(idx.size)
    L = sys.grid.length
    for j, i in enumerate(idx):
        g = data.couplings[i]
        if g < 1e-12:
            raise RuntimeError(
                f"degenerate coupling {g:.3e} at eigenvalue {data.eigenvalues[i]:.6f}; "
                "resolution failure"
            )
        c0 = data.eigenvectors[0, i] / np.sqrt(L * sys.weights[0])
        fhat0 = (L / np.sqrt(2 * np.pi)) * c0
        out[j] = abs(np.sqrt(2 * np.pi) * data.eigenvalues[i] * fhat0 + g) / g
    return out


def beta(sys: LaxSystem, kappa: float) -> float:
    """Generating function <u_plus, (L_u + kappa)^-1 u_plus>.

    Solved by Cholesky factorization of the shifted matrix; kappa must lie
    above the spectral floor -lambda_min.
    """
    K = sys.n_modes
    shifted = sys.matrix + kappa * np.eye(K)
    try:
        factor = cho_factor(shifted, lower=False, check_finite=False)
    except np.linalg.LinAlgError as exc:
        floor = float(np.linalg.eigvalsh(sys.matrix)[0])
        raise ValueError(
            f"kappa = {kappa} violates kappa > -lambda_min = {-floor:.6f}; "
            "the shifted operator is not positive definite"
        ) from exc
    wvec = cho_solve(factor, sys.u_plus, check_finite=False)
    val = np.vdot(sys.u_plus, wvec)
    return float(val.real)


def beta_eigen(data: SpectralData, kappa: float) -> float:
    """Same quantity through the eigen-expansion sum |gamma_j|^2 / (E_j + kappa)."""
    return float(np.sum(data.couplings**2 / (data.eigenvalues + kappa)))


@dataclass(frozen=True)
class BetaCurve:
    """beta(kappa) samples; positive and decreasing in kappa above the floor."""

    kappas: NDArray[np.float64]
    values: NDArray[np.float64]


def beta_curve(sys: LaxSystem, kappas) -> BetaCurve:
    ks = np.asarray(list(kappas), dtype=float)
    return BetaCurve(ks, np.array([beta(sys, k) for k in ks]))


def kappa_floor(
    u: RealField,
    s: float,
    c_s: float = 4.0,
    data: SpectralData | None = None,
) -> float:
    """A-priori spectral-parameter floor max(1, C_s (1 + ||u||_{H^s})^{2/(1+2s)}).

    Valid for -1/2 < s <= 0.  When spectral data is supplied the floor is
    also kept above twice the magnitude of the lowest eigenvalue.
    """
    if not -0.5 < s <= 0:
        raise ValueError(f"s must lie in (-1/2, 0], got {s}")
    nrm = sobolev_norm(u, NormSpec(sigma=s, kappa=1.0))
    floor = max(1.0, c_s * (1.0 + nrm) ** (2.0 / (1.0 + 2.0 * s)))
    if data is not None:
        floor = max(floor, 2.0 * abs(float(data.eigenvalues[0])))
    return floor


def conserved_energies(sys: LaxSystem, n_max: int) -> NDArray[np.float64]:
    """E_n = <u_plus, L_u^n u_plus> for n = 0..n_max by repeated application.

    E_0 is the momentum (1/2) integral of u^2 and E_1 the energy; powers
    beyond 4 amplify truncation error and are refused.
    """
    if not 0 <= n_max <= 4:
        raise ValueError(f"n_max must lie in [0, 4], got {n_max}")
    out = np.empty(n_max + 1)
    v = sys.u_plus
    for n in range(n_max + 1):
        out[n] = float(np.vdot(sys.u_plus, v).real)
        if n < n_max:
            v = sys.matrix @ v
    return out


def grid_energy(u: RealField) -> float:
    """Quadrature of (1/2) u H u' - (1/3) u^3, the grid-side Hamiltonian."""
    absk = np.abs(u.grid.wavenumbers)
    hup = np.fft.ifft(absk * np.fft.fft(u.samples)).real  # H u' has symbol |k|
    return float(np.sum(0.5 * u.samples * hup - u.samples**3 / 3) * u.grid.dx)


def variational_gap(
    sys: LaxSystem,
    data: SpectralData,
    lambdas,
    kappa: float,
    match_tol: float = 0.05,
) -> float:
    """beta(kappa) minus the multisoliton target sum 2 pi |l| / (l + kappa).

    Nonnegative up to discretization error, zero exactly on the multisoliton
    manifold.  Every requested parameter must be matched by an eigenvalue
    within match_tol, and kappa must be above the spectral floor.
    """
    lam = np.asarray(list(lambdas), dtype=float)
    missing = [
        float(l) for l in lam if np.min(np.abs(data.eigenvalues - l)) > match_tol
    ]
    if missing:
        raise ValueError(f"no eigenvalue within {match_tol} of constraints {missing}")
    if kappa <= -float(data.eigenvalues[0]):
        raise ValueError(
            f"kappa = {kappa} is not above the spectral floor "
            f"{-float(data.eigenvalues[0]):.6f}"
        )
    target = float(np.sum(2 * np.pi * np.abs(lam) / (lam + kappa)))
    return beta(sys, kappa) - target


def span_residual(
    data: SpectralData,
    sys: LaxSystem,
    threshold: float = DEFAULT_BOUND_THRESHOLD,
) -> float:
    """||u_plus - P u_plus|| / ||u_plus||, P projecting onto the bound states.

    Vanishes (to resolution) exactly when u_plus lies in the span of the
    bound-state eigenfunctions; defined as 0 for u identically zero.
    """
    nrm = float(np.linalg.norm(sys.u_plus))
    if nrm == 0.0:
        return 0.0
    P = data.eigenvectors[:, bound_states(data, threshold)]
    resid = sys.u_plus - P @ (P.conj().T @ sys.u_plus)
    return float(np.linalg.norm(resid)) / nrm


def residue_probe(
    sys: LaxSystem,
    data: SpectralData,
    lam: float,
    gap_tol: float = 1e-6,
) -> tuple[float, float]:
    """(residue of beta at z = |lambda|, 2 pi |lambda|) for one bound state.

    In the discrete spectral representation beta(z) = sum |gamma_j|^2 / (E_j + z),
    so the residue at z = |lambda_j| is the mass |gamma_j|^2.
    """
    j = int(np.argmin(np.abs(data.eigenvalues - lam)))
    gaps = np.abs(np.delete(data.eigenvalues, j) - data.eigenvalues[j])
    if gaps.size and gaps.min() <= gap_tol:
        raise ValueError(
            f"eigenvalue {data.eigenvalues[j]:.8f} is not isolated (gap {gaps.min():.2e})"
        )
    return float(data.couplings[j] ** 2), float(2 * np.pi * abs(lam))


def eigenfunction_field(sys: LaxSystem, data: SpectralData, index: int) -> HardyField:
    """Reconstruct one eigenvector as a Hardy field on the grid."""
    return HardyField(sys.grid, sys.coefficients_of(data.eigenvectors[:, index]))


@dataclass(frozen=True)
class DecayProbe:
    """|f(x)| tabulated against the polynomial envelope C / <x - x_peak>."""

    x: NDArray[np.float64]
    abs_f: NDArray[np.float64]
    envelope: NDArray[np.float64]
    constant: float
    x_peak: float


def eigenfunction_decay_probe(
    sys: LaxSystem,
    data: SpectralData,
    lam: float,
) -> DecayProbe:
    """Tabulate a bound-state eigenfunction against C <x - x_peak>^-1.

    C is fitted at mid-range (|x - x_peak| near L/10).  Polynomial rather
    than exponential decay is the expected signature.
    """
    from .grid import reconstruct

    j = int(np.argmin(np.abs(data.eigenvalues - lam)))
    f = np.abs(reconstruct(eigenfunction_field(sys, data, j)))
    grid = sys.grid
    x_peak = float(grid.x[int(np.argmax(f))])
    dist = np.abs(grid.x - x_peak)
    env0 = 1.0 / np.sqrt(1.0 + dist**2)
    mid = (dist >= grid.length / 12) & (dist <= grid.length / 8)
    c_fit = float(np.median(f[mid] / env0[mid]))
    return DecayProbe(grid.x, f, c_fit * env0, c_fit, x_peak)
