"""Tests for the lattice model: Bloch matrix, real space, phases, expansions."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nhdeg.linalg import match_eigenvalue_multisets
from nhdeg.model import (ModelParams, Momentum, X1_POINTS, X2_POINTS,
                         bloch_hamiltonian, d_vector, discriminant_function,
                         dispersion, linear_expansion, load_params,
                         phase_boundaries, phase_classify, quadratic_expansion,
                         real_space_hamiltonian, save_params, weyl_dispersion)


def random_params(rng, hermitian=False):
    if hermitian:
        return ModelParams(t=1.0, t1=rng.uniform(-1, 1), v=rng.uniform(-1, 1),
                           gamma=rng.uniform(0, np.pi / 2))
    return ModelParams(t=1.0, t1=rng.uniform(-1, 1), v=rng.uniform(-1, 1),
                       gamma=rng.uniform(0, np.pi / 2),
                       gx=rng.uniform(-1, 1), gy=rng.uniform(-1, 1),
                       ga=rng.uniform(-1, 1), gb=rng.uniform(-1, 1),
                       mu_a=rng.uniform(-0.5, 0.5), mu_b=rng.uniform(-0.5, 0.5))


# ---------------------------------------------------------------------------
# Bloch matrix

def test_bloch_zero_at_x_points_nearest_neighbor_regime():
    # cos(kx) = cos(ky) = 0 kills every entry regardless of gamma, gx, gy
    rng = np.random.default_rng(0)
    for _ in range(10):
        p = ModelParams(gamma=rng.uniform(0, np.pi / 2),
                        gx=rng.uniform(-1, 1), gy=rng.uniform(-1, 1))
        for kx, ky in X1_POINTS + X2_POINTS:
            assert np.linalg.norm(bloch_hamiltonian(p, kx, ky)) < 1e-12


def test_bloch_gamma_origin_value():
    # substituting k = 0 into the printed off-diagonal entries gives -4t
    h = bloch_hamiltonian(ModelParams(), 0.0, 0.0)
    np.testing.assert_allclose(h, [[0, -4], [-4, 0]], atol=1e-15)


def test_bloch_hermitian_limit():
    rng = np.random.default_rng(1)
    for _ in range(10):
        p = random_params(rng, hermitian=True)
        kx, ky = rng.uniform(-np.pi, np.pi, 2)
        h = bloch_hamiltonian(p, kx, ky)
        np.testing.assert_allclose(h, h.conj().T, atol=1e-12)


def test_momentum_canonicalization():
    m = Momentum(3 * np.pi / 2, -9 * np.pi / 4)
    assert -np.pi <= m.kx < np.pi
    assert -np.pi <= m.ky < np.pi
    np.testing.assert_allclose(m.kx, -np.pi / 2)
    np.testing.assert_allclose(m.ky, -np.pi / 4)


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(t=0.0)
    with pytest.raises(ValueError):
        ModelParams(v=float("nan"))


# ---------------------------------------------------------------------------
# d vector

def test_d_vector_regime1_has_no_identity_or_z_component():
    p = ModelParams(gamma=0.7, gx=0.4, gy=-0.2)
    rng = np.random.default_rng(2)
    for _ in range(20):
        kx, ky = rng.uniform(-np.pi, np.pi, 2)
        d = d_vector(p, kx, ky)
        assert abs(d.d0) < 1e-14
        assert abs(d.dz) < 1e-14


def test_d_vector_z_component_at_x1():
    # direct substitution: sin(kx) sin(ky) = 1 at X1 and the imaginary part
    # cancels with cos(kx) = 0; the value matches the gap-closure potential
    p = ModelParams(t1=0.75, ga=0.5, gb=0.3)
    d = d_vector(p, np.pi / 2, np.pi / 2)
    expected = 2 * 0.75 * (np.cosh(0.5) + np.cosh(0.3))
    assert d.dz == pytest.approx(expected, abs=1e-12)
    assert d.dz.imag == pytest.approx(0.0, abs=1e-12)
    # cross-check gap closure at v = v1
    v1, _ = phase_boundaries(p)
    d_closed = d_vector(p.replace(v=v1), np.pi / 2, np.pi / 2)
    assert abs(d_closed.dz) < 1e-12


@settings(deadline=None, max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_d_vector_reconstructs_bloch_matrix(seed):
    rng = np.random.default_rng(seed)
    p = random_params(rng).replace(mu_a=0.0, mu_b=0.0)
    kx, ky = rng.uniform(-np.pi, np.pi, 2)
    h = bloch_hamiltonian(p, kx, ky)
    np.testing.assert_allclose(d_vector(p, kx, ky).matrix(), h, atol=1e-12)


def test_d_vector_rejects_mu():
    with pytest.raises(ValueError):
        d_vector(ModelParams(mu_a=0.1), 0, 0)


# ---------------------------------------------------------------------------
# dispersions

def test_dispersion_origin_regime1():
    plus, minus = dispersion(ModelParams(), 0.0, 0.0)
    assert {round(float(plus.real)), round(float(minus.real))} == {4, -4}


def test_weyl_dispersion_zero_at_x():
    p = ModelParams(gamma=0.5, gx=0.5, gy=0.3)
    plus, minus = weyl_dispersion(p, np.pi / 2, np.pi / 2)
    assert abs(plus) < 1e-12 and abs(minus) < 1e-12


def test_weyl_dispersion_origin():
    plus, minus = weyl_dispersion(ModelParams(), 0.0, 0.0)
    assert sorted([plus.real, minus.real]) == pytest.approx([-4.0, 4.0])


def test_weyl_dispersion_matches_general_formula():
    p = ModelParams(gamma=0.5, gx=0.5, gy=0.3)
    rng = np.random.default_rng(3)
    for _ in range(30):
        kx, ky = rng.uniform(-np.pi, np.pi, 2)
        wp, wm = weyl_dispersion(p, kx, ky)
        dp, dm = dispersion(p, kx, ky)
        assert match_eigenvalue_multisets([wp, wm], [dp, dm]) < 1e-12


def test_weyl_dispersion_precondition():
    with pytest.raises(ValueError, match="t1"):
        weyl_dispersion(ModelParams(t1=0.5), 0, 0)
    with pytest.raises(ValueError, match="ga"):
        weyl_dispersion(ModelParams(ga=0.5), 0, 0)


def test_dispersion_matches_eigensystem2():
    from nhdeg.linalg import eigensystem2
    rng = np.random.default_rng(4)
    for _ in range(20):
        p = random_params(rng)
        kx, ky = rng.uniform(-np.pi, np.pi, 2)
        plus, minus = dispersion(p, kx, ky)
        lams = eigensystem2(bloch_hamiltonian(p, kx, ky)).eigenvalues
        assert match_eigenvalue_multisets([plus, minus], lams) < 1e-10


# ---------------------------------------------------------------------------
# real space

@pytest.mark.parametrize("nx,ny", [(2, 3), (4, 4), (3, 5), (6, 6)])
def test_fourier_consistency(nx, ny):
    # Bloch diagonalization oracle: the periodic real-space spectrum equals
    # the union of the two bands over the allowed momentum grid
    rng = np.random.default_rng(nx * 10 + ny)
    for _ in range(3):
        p = random_params(rng)
        H = real_space_hamiltonian(p, nx, ny)
        assert H.shape == (2 * nx * ny, 2 * nx * ny)
        ev = np.linalg.eigvals(H)
        bloch_ev = []
        for ix in range(nx):
            for iy in range(ny):
                kx, ky = 2 * np.pi * ix / nx, 2 * np.pi * iy / ny
                bloch_ev.extend(np.linalg.eigvals(bloch_hamiltonian(p, kx, ky)))
        assert match_eigenvalue_multisets(ev, bloch_ev) < 1e-8


def test_real_space_hermitian_limit():
    rng = np.random.default_rng(8)
    p = random_params(rng, hermitian=True)
    H = real_space_hamiltonian(p, 4, 4)
    np.testing.assert_allclose(H, H.conj().T, atol=1e-12)


def test_real_space_open_boundaries_drop_hops():
    p = ModelParams()
    H_open = real_space_hamiltonian(p, 3, 3, bc=("open", "open"))
    H_pbc = real_space_hamiltonian(p, 3, 3)
    # fewer nonzero entries with open boundaries
    assert np.count_nonzero(H_open) < np.count_nonzero(H_pbc)


def test_real_space_invalid_bc():
    with pytest.raises(ValueError):
        real_space_hamiltonian(ModelParams(), 4, 4, bc=("open", "wrap"))
    with pytest.raises(ValueError):
        real_space_hamiltonian(ModelParams(), 4, 4, bc=("open", "open"),
                               transverse_k=0.3)


def test_ribbon_block_matches_full_cylinder_spectrum():
    # cylinder oracle: open x, periodic y resolved into transverse momenta
    p = ModelParams(t1=0.4, v=0.2, gamma=0.6, gx=0.1, gy=0.2, ga=0.3, gb=-0.2)
    nx, ny = 5, 4
    H_cyl = real_space_hamiltonian(p, nx, ny, bc=("open", "periodic"))
    ev_cyl = np.linalg.eigvals(H_cyl)
    ev_rib = []
    for iy in range(ny):
        ky = 2 * np.pi * iy / ny
        Hr = real_space_hamiltonian(p, nx, ny, bc=("open", "periodic"),
                                    transverse_k=ky)
        assert Hr.shape == (2 * nx, 2 * nx)
        ev_rib.extend(np.linalg.eigvals(Hr))
    assert match_eigenvalue_multisets(ev_cyl, ev_rib) < 1e-8


# ---------------------------------------------------------------------------
# phase boundaries

def test_phase_boundary_number():
    v1, v2 = phase_boundaries(ModelParams(t1=0.75, ga=0.5, gb=0.3))
    assert v2 == pytest.approx(3.2594467190028618, abs=1e-10)
    assert v1 == pytest.approx(-v2)


def test_phase_boundaries_trivial_cases():
    assert phase_boundaries(ModelParams(t1=0.0, ga=0.7, gb=0.1)) == (0.0, 0.0)
    v1, v2 = phase_boundaries(ModelParams(t1=1.0))
    assert (v1, v2) == pytest.approx((-4.0, 4.0))


def test_gap_closes_at_boundaries():
    rng = np.random.default_rng(12)
    for _ in range(10):
        p = ModelParams(t1=rng.uniform(0.1, 1), ga=rng.uniform(-1, 1),
                        gb=rng.uniform(-1, 1), gamma=0.5)
        v1, v2 = phase_boundaries(p)
        eta1 = discriminant_function(p.replace(v=v1), *X1_POINTS[0])
        eta2 = discriminant_function(p.replace(v=v2), *X2_POINTS[0])
        assert abs(eta1) < 1e-10
        assert abs(eta2) < 1e-10


def test_phase_classify_regions():
    p = ModelParams(t1=0.75, ga=0.5, gb=0.5, gamma=0.5)
    assert phase_classify(p.replace(v=0.0)) == "topological_insulator"
    assert phase_classify(p.replace(v=10.0)) == "band_insulator"
    _, v2 = phase_boundaries(p)
    assert phase_classify(p.replace(v=v2)) == "boundary_gapless"


def test_phase_classify_regime_guard():
    with pytest.raises(ValueError):
        phase_classify(ModelParams(t1=0.75, gamma=0.0))
    with pytest.raises(ValueError):
        phase_classify(ModelParams(t1=0.75, gamma=0.5, gx=0.1))


# ---------------------------------------------------------------------------
# expansions

def test_linear_expansion_requires_regime():
    with pytest.raises(ValueError):
        linear_expansion(ModelParams(t1=0.1), "X1")
    with pytest.raises(ValueError):
        linear_expansion(ModelParams(), "X3")


def test_linear_expansion_hermitian_limit_real_velocities():
    lin = linear_expansion(ModelParams(gamma=0.0), "X1")
    for comp in lin.coeffs.values():
        dx, dy = comp[1], comp[2]
        assert abs(complex(dx).imag) < 1e-14
        assert abs(complex(dy)) < 1e-14


def test_linear_expansion_remainder_at_least_quadratic():
    # order-of-accuracy sweep; the touching is odd in momentum so the true
    # remainder decays one order faster than the generic quadratic bound
    p = ModelParams(gamma=0.5, gx=0.5, gy=0.3)
    lin = linear_expansion(p, "X1")
    scales = np.array([1e-3, 3e-3, 1e-2, 3e-2, 1e-1])
    errs = []
    for s in scales:
        px, py = 0.8 * s, -0.6 * s
        h = bloch_hamiltonian(p, lin.center[0] + px, lin.center[1] + py)
        errs.append(np.linalg.norm(h - lin.matrix(px, py)))
    slope = np.polyfit(np.log(scales), np.log(errs), 1)[0]
    assert slope > 1.9  # remainder bounded by C |p|^2
    assert slope == pytest.approx(3.0, abs=0.1)


def test_linear_expansion_dispersion_formula():
    # the cone energies in closed form: -+2t sqrt(2 s kx ky cosh(2i gamma +
    # gx - gy) + kx^2 + ky^2) with s = +1 at X1 and -1 at X2
    p = ModelParams(gamma=0.5, gx=0.5, gy=0.3)
    rng = np.random.default_rng(5)
    for which, s in (("X1", 1.0), ("X2", -1.0)):
        lin = linear_expansion(p, which)
        for _ in range(10):
            px, py = rng.uniform(-0.1, 0.1, 2)
            plus, minus = lin.bands(px, py)
            root = 2 * p.t * np.sqrt(complex(
                2 * s * px * py * np.cosh(2j * p.gamma + p.gx - p.gy)
                + px * px + py * py))
            assert match_eigenvalue_multisets([plus, minus], [root, -root]) < 1e-10


def test_quadratic_expansion_preconditions():
    with pytest.raises(ValueError):
        quadratic_expansion(ModelParams(t1=0.75, v=0.1), "M")
    with pytest.raises(ValueError):
        quadratic_expansion(ModelParams(t1=0.75, gamma=0.3), "M")
    with pytest.raises(ValueError):
        quadratic_expansion(ModelParams(t1=0.75, gamma=0.0), "Gamma")


def test_quadratic_expansion_exact_at_center():
    p = ModelParams(t1=0.75, ga=0.5, gb=0.3, gamma=0.0)
    q = quadratic_expansion(p, "M")
    h_center = bloch_hamiltonian(p, *q.center)
    np.testing.assert_allclose(q.matrix(0.0, 0.0), h_center, atol=1e-12)


def test_quadratic_expansion_identity_component_vanishes_for_equal_g():
    q = quadratic_expansion(ModelParams(t1=0.75, ga=0.4, gb=0.4, gamma=0.0), "M")
    for comp in q.coeffs.values():
        assert abs(complex(comp[0])) < 1e-14


@pytest.mark.parametrize("center,gamma", [("M", 0.0), ("Gamma", np.pi / 2)])
def test_quadratic_expansion_remainder_third_order(center, gamma):
    p = ModelParams(t1=0.75, ga=0.5, gb=0.3, gamma=gamma)
    q = quadratic_expansion(p, center)
    scales = np.array([1e-3, 3e-3, 1e-2, 3e-2, 1e-1])
    errs = []
    for s in scales:
        px, py = 0.6 * s, 0.8 * s
        h = bloch_hamiltonian(p, q.center[0] + px, q.center[1] + py)
        errs.append(np.linalg.norm(h - q.matrix(px, py)))
    slope = np.polyfit(np.log(scales), np.log(errs), 1)[0]
    assert slope == pytest.approx(3.0, abs=0.1)


def test_quadratic_expansion_gamma_half_pi_printed_components():
    # at gamma = pi/2 the second-order model about the zone center matches
    # the closed-form components: dy = t[(px^2-2) cosh gx - (py^2-2) cosh gy],
    # dz = 2 py t1 [px (cosh ga + cosh gb) - i (sinh ga + sinh gb)], and
    # d0 = 2 py t1 [-i (sinh ga - sinh gb) + px (cosh ga - cosh gb)]
    p = ModelParams(t1=0.75, ga=0.5, gb=0.3, gamma=np.pi / 2)
    q = quadratic_expansion(p, "Gamma")
    rng = np.random.default_rng(6)
    cga, cgb = np.cosh(p.ga), np.cosh(p.gb)
    sga, sgb = np.sinh(p.ga), np.sinh(p.gb)
    for _ in range(10):
        px, py = rng.uniform(-0.2, 0.2, 2)
        d0, dx, dy, dz = q.d_components(px, py)
        d0_ref = 2 * py * p.t1 * (-1j * (sga - sgb) + px * (cga - cgb))
        dy_ref = p.t * ((px**2 - 2) * np.cosh(p.gx) - (py**2 - 2) * np.cosh(p.gy))
        dz_ref = 2 * py * p.t1 * (px * (cga + cgb) - 1j * (sga + sgb))
        assert complex(d0) == pytest.approx(d0_ref, abs=1e-12)
        assert complex(dy) == pytest.approx(dy_ref, abs=1e-12)
        assert complex(dz) == pytest.approx(dz_ref, abs=1e-12)
        assert abs(complex(dx)) < 1e-12  # gx = gy = 0 kills it


# ---------------------------------------------------------------------------
# parameter files

def test_params_roundtrip(tmp_path):
    p = ModelParams(t=1.25, t1=-0.3, v=3.2594467190028618, gamma=np.pi / 3,
                    gx=0.123456789, gy=-1e-7, ga=0.5, gb=0.3, mu_a=0.0, mu_b=0.25)
    path = tmp_path / "params.txt"
    save_params(p, path)
    assert load_params(path) == p


def test_params_file_errors(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("t = 1.0\nbogus = 3\n")
    with pytest.raises(ValueError, match="bogus"):
        load_params(path)
