"""Two-dimensional bipartite square-lattice model with nonreciprocal hoppings.

The model lives on a square lattice with two orbitals (sublattices A and B)
per cell.  Nearest-neighbor A-B hops carry a Peierls phase ``gamma`` and
nonreciprocity factors ``exp(+-gx)``, ``exp(+-gy)``; next-nearest (diagonal)
same-sublattice hops of strength ``t1`` carry alternating signs and
nonreciprocity ``exp(+-ga)``, ``exp(+-gb)``; ``v`` is a staggered onsite
potential.  Energies are quoted in units of ``t``.

This module provides the Bloch matrix, its Pauli decomposition, analytic
dispersions, asymptotic expansions at the band-touching momenta, phase
boundaries of the insulating regimes, and real-space Hamiltonians on tori,
cylinders and ribbons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict, replace

import numpy as np

__all__ = [
    "ModelParams",
    "Momentum",
    "DVector",
    "X1_POINTS",
    "X2_POINTS",
    "M_POINTS",
    "GAMMA_POINT",
    "bloch_hamiltonian",
    "d_vector",
    "dispersion",
    "discriminant_function",
    "weyl_dispersion",
    "real_space_hamiltonian",
    "phase_boundaries",
    "phase_classify",
    "linear_expansion",
    "quadratic_expansion",
    "load_params",
    "save_params",
]

# High-symmetry momenta on the square torus [-pi, pi)^2.
X1_POINTS = ((np.pi / 2, np.pi / 2), (-np.pi / 2, -np.pi / 2))
X2_POINTS = ((np.pi / 2, -np.pi / 2), (-np.pi / 2, np.pi / 2))
M_POINTS = ((-np.pi, 0.0), (0.0, -np.pi))
GAMMA_POINT = (0.0, 0.0)

_PARAM_KEYS = ("t", "t1", "v", "gamma", "gx", "gy", "ga", "gb", "mu_a", "mu_b")


@dataclass(frozen=True)
class ModelParams:
    """Full parameter tuple of the tight-binding model.

    ``t`` is the nearest-neighbor hopping (the energy unit, must be > 0),
    ``t1`` the diagonal hopping, ``v`` the staggered potential, ``gamma``
    the Peierls phase in radians, ``gx``/``gy`` the nearest-neighbor
    nonreciprocity exponents and ``ga``/``gb`` the diagonal ones.
    ``mu_a``/``mu_b`` are optional imaginary onsite terms, zero by default.
    """

    t: float = 1.0
    t1: float = 0.0
    v: float = 0.0
    gamma: float = 0.0
    gx: float = 0.0
    gy: float = 0.0
    ga: float = 0.0
    gb: float = 0.0
    mu_a: float = 0.0
    mu_b: float = 0.0

    def __post_init__(self):
        vals = asdict(self)
        for key, val in vals.items():
            if not math.isfinite(val):
                raise ValueError(f"parameter {key} is not finite: {val!r}")
        if self.t <= 0:
            raise ValueError(f"t must be positive (energy unit), got {self.t}")

    def replace(self, **kw) -> "ModelParams":
        return replace(self, **kw)

    def is_hermitian(self) -> bool:
        """True when the Bloch matrix is Hermitian for every momentum."""
        return (self.gx == self.gy == self.ga == self.gb == 0.0
                and self.mu_a == self.mu_b == 0.0)


class Momentum:
    """A crystal momentum, canonicalized to the square torus [-pi, pi)^2."""

    __slots__ = ("kx", "ky")

    def __init__(self, kx: float, ky: float):
        self.kx = _wrap_angle(kx)
        self.ky = _wrap_angle(ky)

    def __iter__(self):
        return iter((self.kx, self.ky))

    def __repr__(self):
        return f"Momentum(kx={self.kx!r}, ky={self.ky!r})"


def _wrap_angle(k: float) -> float:
    """Map an angle to [-pi, pi)."""
    k = (k + np.pi) % (2 * np.pi) - np.pi
    # guard against the half-open boundary landing on +pi through rounding
    return -np.pi if k >= np.pi else k


@dataclass(frozen=True)
class DVector:
    """Pauli decomposition h = d0*1 + dx*sx + dy*sy + dz*sz of a Bloch matrix."""

    d0: complex
    dx: complex
    dy: complex
    dz: complex

    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.d0 + self.dz, self.dx - 1j * self.dy],
             [self.dx + 1j * self.dy, self.d0 - self.dz]], dtype=complex)


def bloch_hamiltonian(p: ModelParams, kx, ky) -> np.ndarray:
    """Evaluate the 2x2 Bloch matrix at momentum (kx, ky).

    The four entries are exact closed forms; scalars in, a (2, 2) complex
    array out.  The A/B ordering of rows follows the sublattice-major
    convention used throughout the package.
    """
    t, t1 = p.t, p.t1
    h11 = (-t1 * (-np.exp(-p.ga - 1j * (kx - ky)) - np.exp(p.ga + 1j * (kx - ky))
                  + np.exp(-p.ga - 1j * (kx + ky)) + np.exp(p.ga + 1j * (kx + ky)))
           + 1j * p.mu_a + p.v)
    h22 = (t1 * (-np.exp(-p.gb - 1j * (kx - ky)) - np.exp(p.gb + 1j * (kx - ky))
                 + np.exp(-p.gb - 1j * (kx + ky)) + np.exp(p.gb + 1j * (kx + ky)))
           - 1j * p.mu_b - p.v)
    h12 = -2 * t * np.exp(-p.gx - 1j * p.gamma) * np.cos(kx) \
        - 2 * t * np.exp(-p.gy + 1j * p.gamma) * np.cos(ky)
    h21 = -2 * t * np.exp(p.gx + 1j * p.gamma) * np.cos(kx) \
        - 2 * t * np.exp(p.gy - 1j * p.gamma) * np.cos(ky)
    return np.array([[h11, h12], [h21, h22]], dtype=complex)


def _d_components(p: ModelParams, kx, ky):
    """Closed-form Pauli components; broadcasts over array kx, ky.

    Includes the optional imaginary onsite terms, so the reconstruction
    d0 + d.sigma = h holds for every parameter set.
    """
    t, t1 = p.t, p.t1
    half_diff = (p.ga - p.gb) / 2.0
    half_sum = (p.ga + p.gb) / 2.0
    d0 = (-4j * t1 * np.sin(ky) * np.sinh(half_diff)
          * np.cosh(half_sum + 1j * kx)) + 0.5j * (p.mu_a - p.mu_b)
    dx = (-2 * t * np.cos(kx) * np.cosh(p.gx + 1j * p.gamma)
          - 2 * t * np.cos(ky) * np.cosh(p.gy - 1j * p.gamma))
    dy = (2j * t * np.cos(kx) * np.sinh(p.gx + 1j * p.gamma)
          + 2j * t * np.cos(ky) * np.sinh(p.gy - 1j * p.gamma))
    dz = (2 * t1 * np.sin(ky) * (np.sin(kx) * (np.cosh(p.ga) + np.cosh(p.gb))
                                 - 1j * np.cos(kx) * (np.sinh(p.ga) + np.sinh(p.gb)))
          + p.v) + 0.5j * (p.mu_a + p.mu_b)
    return d0, dx, dy, dz


def d_vector(p: ModelParams, kx: float, ky: float) -> DVector:
    """Pauli decomposition of the Bloch matrix at (kx, ky).

    Valid for ``mu_a = mu_b = 0``; raises otherwise since the printed
    decomposition does not include the imaginary onsite terms.
    """
    if p.mu_a != 0.0 or p.mu_b != 0.0:
        raise ValueError("d_vector requires mu_a = mu_b = 0")
    d0, dx, dy, dz = _d_components(p, kx, ky)
    return DVector(complex(d0), complex(dx), complex(dy), complex(dz))


def discriminant_function(p: ModelParams, kx, ky):
    """Discriminant eta(k) = tr(h)^2 - 4 det(h) in closed form.

    Broadcasts over arrays; eta = 4 (dx^2 + dy^2 + dz^2) is independent of
    the identity component.  Zeros of eta are the spectral degeneracies.
    """
    _, dx, dy, dz = _d_components(p, kx, ky)
    return 4.0 * (dx * dx + dy * dy + dz * dz)


def dispersion(p: ModelParams, kx, ky):
    """Two bands (tr(h) +- sqrt(eta))/2 with the principal square root."""
    d0, dx, dy, dz = _d_components(p, kx, ky)
    root = np.sqrt((dx * dx + dy * dy + dz * dz).astype(complex))
    return d0 + root, d0 - root


def weyl_dispersion(p: ModelParams, kx, ky):
    """Nearest-neighbor-only dispersion in the cosh form.

    Requires t1 = ga = gb = v = mu = 0 (pure nearest-neighbor model); the
    two bands are +-t*sqrt(f e^phi + f e^-phi + 2(cos 2kx + cos 2ky + 2))
    with phi = 2i*gamma + gx - gy and f = 4 cos(kx) cos(ky).
    """
    for name in ("t1", "ga", "gb", "v", "mu_a", "mu_b"):
        if getattr(p, name) != 0.0:
            raise ValueError(
                f"weyl_dispersion requires {name} = 0, got {getattr(p, name)}")
    phi = 2j * p.gamma + p.gx - p.gy
    f = 4.0 * np.cos(kx) * np.cos(ky)
    radicand = (f * np.exp(phi) + f * np.exp(-phi)
                + 2.0 * (np.cos(2 * np.asarray(kx, dtype=float))
                         + np.cos(2 * np.asarray(ky, dtype=float)) + 2.0))
    root = p.t * np.sqrt(radicand.astype(complex))
    return root, -root


# ---------------------------------------------------------------------------
# real space

def _hop_list(p: ModelParams):
    """All hops as (sublattice_row, sublattice_col, dx, dy, amplitude).

    The matrix element H[row, col] is the coefficient of row_dag * col in
    the second-quantized Hamiltonian; (dx, dy) is the cell displacement of
    the column site relative to the row site.
    """
    t, t1 = p.t, p.t1
    ax = -t * np.exp(-1j * p.gamma) * np.exp(-p.gx)   # A <- B along +-x
    bx = -t * np.exp(1j * p.gamma) * np.exp(p.gx)     # B <- A along +-x
    ay = -t * np.exp(1j * p.gamma) * np.exp(-p.gy)    # A <- B along +-y
    by = -t * np.exp(-1j * p.gamma) * np.exp(p.gy)    # B <- A along +-y
    hops = [
        (0, 1, 1, 0, ax), (0, 1, -1, 0, ax),
        (0, 1, 0, 1, ay), (0, 1, 0, -1, ay),
        (1, 0, 1, 0, bx), (1, 0, -1, 0, bx),
        (1, 0, 0, 1, by), (1, 0, 0, -1, by),
        # diagonal hops, alternating signs as printed
        (0, 0, 1, 1, -t1 * np.exp(-p.ga)), (0, 0, 1, -1, t1 * np.exp(-p.ga)),
        (0, 0, -1, -1, -t1 * np.exp(p.ga)), (0, 0, -1, 1, t1 * np.exp(p.ga)),
        (1, 1, 1, 1, t1 * np.exp(-p.gb)), (1, 1, 1, -1, -t1 * np.exp(-p.gb)),
        (1, 1, -1, -1, t1 * np.exp(p.gb)), (1, 1, -1, 1, -t1 * np.exp(p.gb)),
        # staggered potential and optional imaginary onsite terms
        (0, 0, 0, 0, p.v + 1j * p.mu_a),
        (1, 1, 0, 0, -p.v - 1j * p.mu_b),
    ]
    return [(r, c, dx, dy, amp) for r, c, dx, dy, amp in hops if amp != 0.0]


def real_space_hamiltonian(p: ModelParams, nx: int, ny: int,
                           bc=("periodic", "periodic"),
                           transverse_k: float | None = None) -> np.ndarray:
    """Real-space Hamiltonian on an nx-by-ny cell grid.

    Parameters
    ----------
    bc : pair of {'periodic', 'open'}
        Boundary condition for the x and y axis respectively.
    transverse_k : float, optional
        Build a mixed (ribbon) Hamiltonian: real space on the single open
        axis, Bloch momentum ``transverse_k`` on the periodic one.  The
        result has dimension 2*N_open.  Requires exactly one open axis.

    Without ``transverse_k`` the full 2*nx*ny matrix is returned, with
    periodic wrap or open truncation per axis.  Basis ordering is
    sublattice-major, then x, then y: index = s*nx*ny + iy*nx + ix.
    A hop whose column cell is displaced by ``delta`` along a Bloch axis
    carries the phase exp(-1j * k * delta); this matches the printed Bloch
    matrix (verified by the Fourier-consistency tests).
    """
    for axis in bc:
        if axis not in ("periodic", "open"):
            raise ValueError(f"invalid boundary condition {axis!r}")
    hops = _hop_list(p)
    if transverse_k is not None:
        n_open = sum(1 for axis in bc if axis == "open")
        if n_open != 1:
            raise ValueError(
                "transverse_k requires exactly one open axis, got bc={}".format(bc))
        open_axis = "x" if bc[0] == "open" else "y"
        n = nx if open_axis == "x" else ny
        if n < 2:
            raise ValueError("ribbon needs at least 2 cells on the open axis")
        H = np.zeros((2 * n, 2 * n), dtype=complex)
        for r, c, dx, dy, amp in hops:
            d_open, d_bloch = (dx, dy) if open_axis == "x" else (dy, dx)
            phase = np.exp(-1j * transverse_k * d_bloch)
            for j in range(n):
                jc = j + d_open
                if 0 <= jc < n:
                    H[r * n + j, c * n + jc] += amp * phase
        return H

    if nx < 2 or ny < 2:
        raise ValueError("need nx, ny >= 2")
    ncell = nx * ny
    H = np.zeros((2 * ncell, 2 * ncell), dtype=complex)
    for r, c, dx, dy, amp in hops:
        for ix in range(nx):
            jx = ix + dx
            if bc[0] == "periodic":
                jx %= nx
            elif not (0 <= jx < nx):
                continue
            for iy in range(ny):
                jy = iy + dy
                if bc[1] == "periodic":
                    jy %= ny
                elif not (0 <= jy < ny):
                    continue
                H[r * ncell + iy * nx + ix, c * ncell + jy * nx + jx] += amp
    return H


# ---------------------------------------------------------------------------
# phases

def phase_boundaries(p: ModelParams) -> tuple[float, float]:
    """Gap-closing potentials (v1, v2) of the two X-point sectors.

    v1 = -2 t1 (cosh ga + cosh gb) closes the gap on the X1 pair and
    v2 = +2 t1 (cosh ga + cosh gb) on the X2 pair.
    """
    w = 2.0 * p.t1 * (np.cosh(p.ga) + np.cosh(p.gb))
    return -w, w


def phase_classify(p: ModelParams, tol: float = 1e-9) -> str:
    """Classify the insulating regime by the staggered potential.

    Valid for gapped-gamma parameters (0 < gamma < pi/2, gx = gy = 0).
    Returns 'boundary_gapless' within ``tol`` of a boundary,
    'topological_insulator' strictly between v1 and v2, and
    'band_insulator' outside.
    """
    if not (0.0 < p.gamma < np.pi / 2):
        raise ValueError(f"phase_classify requires 0 < gamma < pi/2, got {p.gamma}")
    if p.gx != 0.0 or p.gy != 0.0:
        raise ValueError("phase_classify requires gx = gy = 0")
    v1, v2 = phase_boundaries(p)
    lo, hi = min(v1, v2), max(v1, v2)
    if min(abs(p.v - v1), abs(p.v - v2)) < tol:
        return "boundary_gapless"
    if lo < p.v < hi:
        return "topological_insulator"
    return "band_insulator"


# ---------------------------------------------------------------------------
# asymptotic expansions

@dataclass(frozen=True)
class Expansion:
    """Truncated Taylor model of the Bloch matrix around a momentum.

    ``coeffs`` maps monomials (i, j) meaning px^i py^j to DVector-style
    4-tuples (d0, dx, dy, dz); ``order`` is the truncation order.
    """

    center: tuple[float, float]
    order: int
    coeffs: dict

    def d_components(self, px, py):
        out = [0.0j, 0.0j, 0.0j, 0.0j]
        for (i, j), comp in self.coeffs.items():
            mono = (np.asarray(px) ** i) * (np.asarray(py) ** j)
            for n in range(4):
                out[n] = out[n] + comp[n] * mono
        return tuple(out)

    def matrix(self, px: float, py: float) -> np.ndarray:
        d0, dx, dy, dz = self.d_components(px, py)
        return np.array([[d0 + dz, dx - 1j * dy], [dx + 1j * dy, d0 - dz]])

    def bands(self, px, py):
        d0, dx, dy, dz = self.d_components(px, py)
        root = np.sqrt(np.asarray(dx * dx + dy * dy + dz * dz, dtype=complex))
        return d0 + root, d0 - root


def _taylor_d(p: ModelParams, center, order):
    """Analytic Taylor coefficients of the d-components about ``center``.

    Each component is a short product of sin/cos/cosh/sinh factors in kx
    and ky, so the derivatives are evaluated exactly.
    """
    cx, cy = center

    def derivs(f, z0, n):
        # returns [f, f', f'', ...](z0) for f in the closed trig/hyp family
        if f == "sin":
            seq = [np.sin, np.cos, lambda z: -np.sin(z), lambda z: -np.cos(z)]
        elif f == "cos":
            seq = [np.cos, lambda z: -np.sin(z), lambda z: -np.cos(z), np.sin]
        else:
            raise ValueError(f)
        return [seq[k % 4](z0) for k in range(n + 1)]

    sin_cy = derivs("sin", cy, order)
    cos_cx = derivs("cos", cx, order)
    cos_cy = derivs("cos", cy, order)
    sin_cx = derivs("sin", cx, order)
    # cosh(a + i k) derivatives in k: d/dk -> i sinh, then -cosh, ...
    half_sum = (p.ga + p.gb) / 2.0
    ch = [np.cosh(half_sum + 1j * cx), 1j * np.sinh(half_sum + 1j * cx),
          -np.cosh(half_sum + 1j * cx), -1j * np.sinh(half_sum + 1j * cx)]

    fact = [1.0, 1.0, 2.0, 6.0]
    coeffs = {}

    def put(i, j, comp, value):
        if value == 0:
            return
        key = (i, j)
        cur = coeffs.setdefault(key, [0j, 0j, 0j, 0j])
        cur[comp] += value

    pref_d0 = -4j * p.t1 * np.sinh((p.ga - p.gb) / 2.0)
    chsum = np.cosh(p.ga) + np.cosh(p.gb)
    shsum = np.sinh(p.ga) + np.sinh(p.gb)
    for i in range(order + 1):
        for j in range(order + 1 - i):
            w = 1.0 / (fact[i] * fact[j])
            # d0 = pref * sin(ky) * cosh(halfsum + i kx)
            put(i, j, 0, pref_d0 * sin_cy[j] * ch[i] * w)
            # dx, dy from the nearest-neighbor cosines
            put(i, j, 1, (-2 * p.t * (cos_cx[i] * (j == 0) * np.cosh(p.gx + 1j * p.gamma)
                                      + cos_cy[j] * (i == 0) * np.cosh(p.gy - 1j * p.gamma))) * w)
            put(i, j, 2, (2j * p.t * (cos_cx[i] * (j == 0) * np.sinh(p.gx + 1j * p.gamma)
                                      + cos_cy[j] * (i == 0) * np.sinh(p.gy - 1j * p.gamma))) * w)
            # dz = 2 t1 sin(ky) [sin(kx) chsum - i cos(kx) shsum] + v
            put(i, j, 3, (2 * p.t1 * sin_cy[j] * (sin_cx[i] * chsum
                                                  - 1j * cos_cx[i] * shsum)) * w)
    put(0, 0, 3, p.v)
    # drop numerically empty monomials for a tidy coefficient table
    coeffs = {k: tuple(vals) for k, vals in coeffs.items()
              if max(abs(complex(x)) for x in vals) > 0.0}
    return coeffs


def linear_expansion(p: ModelParams, which_x: str) -> Expansion:
    """First-order expansion of the Bloch matrix at an X point.

    Requires the nearest-neighbor-only regime (t1 = ga = gb = v = mu = 0),
    where the touching at X is linear (a two-dimensional Weyl cone with
    complex velocity matrix).  ``which_x`` selects 'X1' or 'X2'; the
    representative centers are (pi/2, pi/2) and (pi/2, -pi/2).
    """
    for name in ("t1", "ga", "gb", "v", "mu_a", "mu_b"):
        if getattr(p, name) != 0.0:
            raise ValueError(
                f"linear_expansion requires {name} = 0, got {getattr(p, name)}")
    if which_x not in ("X1", "X2"):
        raise ValueError(f"which_x must be 'X1' or 'X2', got {which_x!r}")
    center = X1_POINTS[0] if which_x == "X1" else X2_POINTS[0]
    coeffs = _taylor_d(p, center, 1)
    return Expansion(center=center, order=1, coeffs=coeffs)


def quadratic_expansion(p: ModelParams, center: str) -> Expansion:
    """Second-order expansion at M (gamma = 0) or Gamma (gamma = pi/2).

    Requires v = gx = gy = mu = 0.  The touching there is quadratic in
    momentum (a double-Weyl-type node), so the second-order model is exact
    up to cubic corrections.
    """
    for name in ("v", "gx", "gy", "mu_a", "mu_b"):
        if getattr(p, name) != 0.0:
            raise ValueError(
                f"quadratic_expansion requires {name} = 0, got {getattr(p, name)}")
    if center == "M":
        if not np.isclose(p.gamma, 0.0):
            raise ValueError("center 'M' requires gamma = 0")
        c = (np.pi, 0.0)
    elif center == "Gamma":
        if not np.isclose(p.gamma, np.pi / 2):
            raise ValueError("center 'Gamma' requires gamma = pi/2")
        c = GAMMA_POINT
    else:
        raise ValueError(f"center must be 'M' or 'Gamma', got {center!r}")
    coeffs = _taylor_d(p, c, 2)
    return Expansion(center=c, order=2, coeffs=coeffs)


# ---------------------------------------------------------------------------
# parameter files

def save_params(p: ModelParams, path) -> None:
    """Write a flat key-value parameter file (lossless round trip)."""
    lines = [f"{key} = {getattr(p, key)!r}\n" for key in _PARAM_KEYS]
    with open(path, "w") as fh:
        fh.writelines(lines)


def load_params(path) -> ModelParams:
    """Read a flat key-value parameter file written by :func:`save_params`.

    Unknown keys raise; missing keys take their defaults.  Lines starting
    with '#' and blank lines are ignored.
    """
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, val = line.partition("=")
            key = key.strip()
            if key not in _PARAM_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown parameter {key!r}")
            values[key] = float(val.strip())
    return ModelParams(**values)
