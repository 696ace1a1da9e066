"""Factorizing S-matrix machinery and the kernels controlling the vacuum
entanglement bound of integrable models, plus the half-line Dirac bound.

The scattering function is a finite Blaschke-type product over poles on the
imaginary rapidity axis; its strip norms and the rapidity-space kernels
T and A are evaluated by Gauss-Legendre Nystrom discretization with a
mandatory grid-doubling convergence check.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import k0 as _scipy_k0


class IntegrableError(ValueError):
    pass


@dataclass(frozen=True)
class SMatrix:
    """Two-body scattering function with poles b_k, each in (0, pi/2)."""

    poles: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.poles) % 2 != 1:
            raise IntegrableError("pole count must be odd")
        for b in self.poles:
            if not 0.0 < b < math.pi / 2:
                raise IntegrableError(f"pole parameter {b} outside (0, pi/2)")

    @property
    def min_pole(self) -> float:
        return min(self.poles)


def sinh_gordon(g: float) -> SMatrix:
    """Single-pole scattering function with b = pi g^2 / (1 + g^2)."""
    if g <= 0:
        raise IntegrableError("coupling must be positive")
    b = math.pi * g * g / (1.0 + g * g)
    if b >= math.pi / 2:
        raise IntegrableError(
            f"coupling g={g} gives b={b:.4f} >= pi/2; only b in (0, pi/2) is supported"
        )
    return SMatrix(poles=(b,))


def s2_eval(s: SMatrix, zeta: complex) -> complex:
    """Product of (sinh z - i sin b_k)/(sinh z + i sin b_k) over the poles."""
    sh = cmath.sinh(zeta)
    out = 1.0 + 0.0j
    for b in s.poles:
        den = sh + 1j * math.sin(b)
        if abs(den) < 1e-12:
            raise IntegrableError(f"evaluation point within 1e-12 of the pole b={b}")
        out *= (sh - 1j * math.sin(b)) / den
    return out


def strip_sup_norm(s: SMatrix, kappa: float) -> float:
    """Supremum of |S_2| on the strip -kappa < Im z < pi + kappa.

    The function is analytic and bounded on the closed strip when kappa
    stays below every pole parameter, so the supremum is attained on the two
    boundary lines; those are scanned on a dense grid and refined locally.
    """
    if kappa <= 0:
        raise IntegrableError("strip width must be positive")
    if kappa >= s.min_pole:
        raise IntegrableError(
            f"kappa={kappa} reaches the first pole b={s.min_pole}; need kappa < min b_k"
        )
    best = 1.0
    grid = np.linspace(-25.0, 25.0, 2001)
    for line in (-kappa, math.pi + kappa):
        # denominator scan: no factor may blow up on the boundary
        vals = []
        for th in grid:
            z = th + 1j * line
            sh = cmath.sinh(z)
            if any(abs(sh + 1j * math.sin(b)) < 1e-10 for b in s.poles):
                raise IntegrableError("pole on the strip boundary")
            vals.append(abs(s2_eval(s, z)))
        vals = np.array(vals)
        k = int(np.argmax(vals))
        lo = grid[max(k - 1, 0)]
        hi = grid[min(k + 1, len(grid) - 1)]
        res = minimize_scalar(
            lambda th: -abs(s2_eval(s, th + 1j * line)),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-12},
        )
        best = max(best, float(-res.fun), float(vals[k]))
    return best


def bessel_k0(x: float) -> float:
    """Modified Bessel function of the second kind, order zero."""
    if x <= 0:
        raise IntegrableError("argument must be positive")
    return float(_scipy_k0(x))


# ---------------------------------------------------------------------------
# Nystrom kernels


@dataclass(frozen=True)
class KernelGrid:
    """Gauss-Legendre rule on a symmetric interval [-theta_max, theta_max]."""

    nodes: np.ndarray
    weights: np.ndarray
    theta_max: float

    def __post_init__(self) -> None:
        if np.any(self.weights <= 0) or np.any(np.diff(self.nodes) <= 0):
            raise IntegrableError("grid must have positive weights and ascending nodes")

    @property
    def size(self) -> int:
        return len(self.nodes)

    def doubled(self) -> "KernelGrid":
        return make_grid_for_theta(self.theta_max, 2 * self.size)


def make_grid_for_theta(theta_max: float, n: int) -> KernelGrid:
    x, w = np.polynomial.legendre.leggauss(n)
    return KernelGrid(nodes=x * theta_max, weights=w * theta_max, theta_max=theta_max)


def make_grid(s: float, n: int = 96, tail: float = 1e-14) -> KernelGrid:
    """Grid whose truncation keeps exp(-s cosh(theta)/2) below ``tail``."""
    if s <= 0:
        raise IntegrableError("decay parameter must be positive")
    target = 2.0 * math.log(1.0 / tail) / s
    theta_max = math.acosh(max(target, math.cosh(1.0)))
    return make_grid_for_theta(theta_max, n)


def t_kernel_matrix(kappa: float, s: float, grid: KernelGrid) -> np.ndarray:
    """Weighted Nystrom matrix of the half-smeared Cauchy kernel."""
    if kappa == 0 or s <= 0:
        raise IntegrableError("need kappa != 0 and s > 0")
    th = grid.nodes
    sw = np.sqrt(grid.weights)
    damp = np.exp(-0.5 * s * np.cosh(th))
    denom = th[None, :] - th[:, None] + 0.5j * kappa
    kern = -np.sign(kappa) * damp[:, None] / (2.0j * math.pi * denom)
    return sw[:, None] * kern * sw[None, :]


def t_kernel_trace_norm(kappa: float, s: float, grid: KernelGrid | None = None) -> float:
    """Trace norm of the discretized T kernel with a grid-doubling check."""
    grid = make_grid(s) if grid is None else grid
    val = float(np.sum(np.linalg.svd(t_kernel_matrix(kappa, s, grid), compute_uv=False)))
    val2 = float(
        np.sum(np.linalg.svd(t_kernel_matrix(kappa, s, grid.doubled()), compute_uv=False))
    )
    if abs(val2 - val) > 0.005 * max(abs(val2), 1e-300):
        raise IntegrableError(
            f"discretization not converged ({val} vs {val2}); increase nodes or theta_max"
        )
    return val2


@dataclass(frozen=True)
class AKernel:
    """Discretized positive kernel A = T_+ T_+^* + T_- T_-^*."""

    kappa: float
    s: float
    grid: KernelGrid
    matrix: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


def a_kernel_value(kappa: float, s: float, theta: float, theta2: float) -> float:
    return (
        abs(kappa)
        / math.pi
        * math.exp(-0.5 * s * math.cosh(theta))
        * math.exp(-0.5 * s * math.cosh(theta2))
        / ((theta - theta2) ** 2 + kappa**2)
    )


def a_kernel(kappa: float, s: float, grid: KernelGrid | None = None) -> AKernel:
    """Weighted Nystrom matrix of the positive smeared-Cauchy kernel."""
    if kappa == 0 or s <= 0:
        raise IntegrableError("need kappa != 0 and s > 0")
    grid = make_grid(s) if grid is None else grid
    th = grid.nodes
    sw = np.sqrt(grid.weights)
    damp = np.exp(-0.5 * s * np.cosh(th))
    kern = (abs(kappa) / math.pi) * damp[:, None] * damp[None, :] / (
        (th[:, None] - th[None, :]) ** 2 + kappa**2
    )
    return AKernel(kappa=kappa, s=s, grid=grid, matrix=sw[:, None] * kern * sw[None, :])


def _elementary_symmetric(eigs: np.ndarray, n: int) -> float:
    e = np.zeros(n + 1)
    e[0] = 1.0
    for lam in eigs:
        upper = min(n, len(e) - 1)
        for k in range(upper, 0, -1):
            e[k] += lam * e[k - 1]
    return float(e[n])


def wedge_trace(ak: AKernel, n: int) -> tuple[float, float]:
    """Trace of the n-th antisymmetric power, computed two ways.

    (i) the elementary symmetric polynomial of the Nystrom eigenvalues,
    (ii) the n-fold quadrature of the determinant integral on an independent
    trapezoid grid.  The two must agree within one percent.
    """
    if not 1 <= n <= 6:
        raise IntegrableError("antisymmetric power capped at n = 6")
    eigs = np.clip(ak.eigenvalues(), 0.0, None)
    primary = _elementary_symmetric(eigs, n)

    theta_max = ak.grid.theta_max
    m = 201
    th = np.linspace(-theta_max, theta_max, m)
    h = th[1] - th[0]
    if n <= 3:
        a = np.array([[a_kernel_value(ak.kappa, ak.s, x, y) for y in th] for x in th])
        if n == 1:
            alt = h * float(np.trace(a))
        elif n == 2:
            alt = 0.5 * h**2 * float(np.trace(a) ** 2 - np.sum(a * a.T))
        else:
            t1 = h * float(np.trace(a))
            t2 = h**2 * float(np.sum(a * a.T))
            t3 = h**3 * float(np.trace(a @ a @ a))
            alt = (t1**3 - 3.0 * t1 * t2 + 2.0 * t3) / 6.0
    else:
        # same determinant-integral identity evaluated on the trapezoid rule
        a = np.array([[a_kernel_value(ak.kappa, ak.s, x, y) for y in th] for x in th])
        wt = np.full(m, h)
        wt[0] = wt[-1] = h / 2
        sw = np.sqrt(wt)
        eig_alt = np.clip(np.linalg.eigvalsh(sw[:, None] * a * sw[None, :]), 0.0, None)
        alt = _elementary_symmetric(eig_alt, n)
    scale = max(abs(primary), abs(alt), 1e-300)
    if abs(primary - alt) > 0.05 * scale:
        raise IntegrableError(
            f"antisymmetric-trace methods disagree beyond 5%: {primary} vs {alt}"
        )
    return primary, alt


def hadamard_bound_check(kappa: float, s: float, n: int, grid: KernelGrid | None = None):
    """Compare the n-th antisymmetric trace against its Hadamard-type cap."""
    ak = a_kernel(kappa, s, grid)
    lhs, _ = wedge_trace(ak, n)
    rhs = (1.0 / math.factorial(n)) * (2.0 * bessel_k0(s) / (kappa * math.pi)) ** n
    return lhs, rhs, bool(lhs <= rhs * (1.0 + 1e-6))


# ---------------------------------------------------------------------------
# vacuum bound for wedge-separated regions


@dataclass(frozen=True)
class VacuumBoundResult:
    converged: bool
    nu: float | None
    log_value: float | None
    asymptotic: float
    n_terms: int
    strip_norm: float


def vacuum_bound(
    s_matrix: SMatrix,
    m: float,
    radius: float,
    kappa: float,
    delta: float,
    term_tol: float = 1e-16,
    max_terms: int = 10_000,
) -> VacuumBoundResult:
    """Dominating-functional series bound for two wedges separated by R.

    The particle-number expansion is summed as nu = 1 + sum_{n>=1} q^n *
    max(1, c^n * sqrt(K0(m R delta sin kappa))) with q the product of the
    n-body map bound and c the square root of the strip norm; the reported
    entanglement bound is log nu, together with the closed-form asymptotic
    decay rate for comparison.  A geometric ratio at or above one raises the
    divergence flag instead of producing a value.
    """
    if not 0.0 < delta < 1.0:
        raise IntegrableError("delta must be in (0, 1)")
    if not 0.0 < kappa < s_matrix.min_pole:
        raise IntegrableError("need 0 < kappa < min pole parameter")
    if m <= 0 or radius <= 0:
        raise IntegrableError("mass and separation must be positive")
    norm = strip_sup_norm(s_matrix, kappa)
    c = math.sqrt(norm)
    mr = m * radius
    q1 = (4.0 * math.e * c / (kappa * math.pi)) * bessel_k0((1.0 - delta) * mr)
    kappa_factor = math.sqrt(bessel_k0(mr * delta * math.sin(kappa)))
    asymptotic = (4.0 * math.e / kappa) * math.sqrt(norm / (math.pi * mr)) * math.exp(-mr * (1.0 - delta))
    if q1 * max(1.0, c) >= 1.0:
        return VacuumBoundResult(False, None, None, asymptotic, 0, norm)
    nu = 1.0
    qn = 1.0
    cn = 1.0
    n_terms = 0
    for n in range(1, max_terms + 1):
        qn *= q1
        cn *= c
        term = qn * max(1.0, cn * kappa_factor)
        nu += term
        n_terms = n
        if term < term_tol * nu:
            break
    return VacuumBoundResult(True, nu, math.log(nu), asymptotic, n_terms, norm)


# ---------------------------------------------------------------------------
# half-line Dirac bound


def transverse_circle_spectrum(radius: float, eps: float, delta: float, cut: float = 1e-12):
    """Antiperiodic transverse eigenvalues (j + 1/2)/radius up to the cutoff
    where exp(-eps * lam / (1 + delta)) drops below ``cut``."""
    if radius <= 0 or eps <= 0:
        raise IntegrableError("radius and eps must be positive")
    lam_max = (1.0 + delta) * math.log(1.0 / cut) / eps
    out = []
    j = 0
    while (j + 0.5) / radius <= lam_max:
        out.append((j + 0.5) / radius)
        j += 1
    return out


def dirac_halfline_bound(
    m: float,
    eps: float,
    transverse_spectrum=(),
    delta: float = 0.1,
    nodes: int = 96,
    contribution_floor: float = 1e-14,
) -> float:
    """Entanglement bound for a half-line across a corridor of width eps.

    Each transverse mode contributes four times the trace norm of the
    kernel at kappa = pi and decay 2 * eps * sqrt(m^2 + lam^2); modes whose
    contribution falls below the floor are dropped (monotone decreasing).
    """
    if m <= 0 or eps <= 0:
        raise IntegrableError("mass and corridor width must be positive")
    masses = [m] if not len(transverse_spectrum) else [
        math.sqrt(m * m + lam * lam) for lam in transverse_spectrum
    ]
    total = 0.0
    for mj in sorted(masses):
        s = 2.0 * mj * eps
        contrib = 4.0 * t_kernel_trace_norm(math.pi, s, make_grid(s, nodes))
        total += contrib
        if contrib < contribution_floor * max(total, 1.0):
            break
    return total
