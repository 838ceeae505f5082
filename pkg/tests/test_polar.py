from __future__ import annotations

import numpy as np
import pytest

from polarsim import embedding, generate, linalg, polar
from polarsim.embedding import DilationVector
from polarsim.polar import ParityExtension
from polarsim.spectral import QPEConfig


def _block_action(u: np.ndarray, psi: np.ndarray, split: int) -> np.ndarray:
    # oracle: swap blocks through U, identity on kernel and cokernel
    top, bottom = psi[:split], psi[split:]
    n, m = u.shape[1], u.shape[0]
    return np.concatenate(
        [
            u.conj().T @ bottom + (np.eye(n) - u.conj().T @ u) @ top,
            u @ top + (np.eye(m) - u @ u.conj().T) @ bottom,
        ]
    )


def _state(n: int, m: int, rng: np.random.Generator) -> DilationVector:
    return DilationVector.from_vector(generate.random_state(n + m, rng), n)


def test_parity_extension():
    ext = ParityExtension(base=lambda x: x + 1.0, parity="odd")
    x = np.array([-2.0, -1e-14, 0.0, 3.0])
    np.testing.assert_allclose(ext.extend(x), np.array([-3.0, 0.0, 0.0, 4.0]))
    even = ParityExtension(base=lambda x: x + 1.0, parity="even")
    np.testing.assert_allclose(even.extend(x), np.array([3.0, 1.0, 1.0, 4.0]))
    with pytest.raises(ValueError):
        ParityExtension(base=lambda x: x, parity="both")


def test_exact_isometry_matches_block_oracle():
    rng = generate.rng_for(401)
    for _ in range(30):
        m, n = int(rng.integers(1, 8)), int(rng.integers(1, 8))
        a = generate.random_complex_matrix(m, n, rng)
        psi = _state(n, m, rng)
        res = polar.apply_polar_isometry(a, psi, mode="exact")
        u = linalg.classical_polar(a).isometry
        np.testing.assert_allclose(
            res.output.to_vector(), _block_action(u, psi.to_vector(), n), atol=1e-10
        )
        assert res.flagged is None
        assert res.scale == pytest.approx(np.linalg.norm(a, ord=2))


def test_isometry_handles_scaling_and_rank_deficiency():
    rng = generate.rng_for(402)
    for scale in (1e-3, 1.0, 50.0):
        s = np.array([1.4, 0.6, 0.0]) * scale
        a = generate.matrix_with_singular_values(s, 5, 3, rng)
        psi = _state(3, 5, rng)
        res = polar.apply_polar_isometry(a, psi, mode="exact")
        u = linalg.classical_polar(a).isometry
        np.testing.assert_allclose(
            res.output.to_vector(), _block_action(u, psi.to_vector(), 3), atol=1e-9
        )


def test_kernel_components_pass_through():
    # A e_3 = 0: a top-block kernel state is returned unchanged
    a = np.diag([1.0, 0.5, 0.0]).astype(complex)
    psi = embedding.inject_right(np.array([0.0, 0.0, 1.0], dtype=complex), 3)
    res = polar.apply_polar_isometry(a, psi, mode="exact")
    np.testing.assert_allclose(res.output.to_vector(), psi.to_vector(), atol=1e-12)


def test_flag_split_conserves_weight():
    rng = generate.rng_for(403)
    a = np.diag([1.0, 0.3, 0.05]).astype(complex)
    psi = _state(3, 3, rng)
    res = polar.apply_polar_wellconditioned(a, psi, kappa_tilde=5.0, mode="exact")
    kept_w = float(np.linalg.norm(res.output.to_vector()) ** 2)
    flag_w = float(np.linalg.norm(res.flagged.to_vector()) ** 2)
    assert kept_w + flag_w == pytest.approx(1.0, abs=1e-12)
    assert res.diagnostics.flag_probability == pytest.approx(flag_w, abs=1e-12)
    # the flagged branch is exactly the ill component, untouched
    ill = np.zeros(6, dtype=complex)
    ill[2] = psi.to_vector()[2]
    ill[5] = psi.to_vector()[5]
    np.testing.assert_allclose(res.flagged.to_vector(), ill, atol=1e-12)


def test_wellconditioned_validates_kappa():
    a = np.eye(2, dtype=complex)
    psi = embedding.inject_right(np.array([1.0, 0.0], dtype=complex), 2)
    with pytest.raises(ValueError):
        polar.apply_polar_wellconditioned(a, psi, kappa_tilde=0.5)


def test_qpe_equals_exact_on_dyadic_spectra():
    rng = generate.rng_for(404)
    for bits in (4, 6):
        a = generate.dyadic_singular_matrix(bits, 4, 4, rng)
        psi = _state(4, 4, rng)
        exact = polar.apply_polar_isometry(a, psi, mode="exact")
        sim = polar.apply_polar_isometry(
            a, psi, mode="qpe", config=QPEConfig(bits=bits)
        )
        np.testing.assert_allclose(
            sim.output.to_vector(), exact.output.to_vector(), atol=1e-9
        )
        assert sim.diagnostics.leakage_norm < 1e-10


def test_qpe_flag_matches_exact_on_grid():
    rng = generate.rng_for(405)
    a = np.diag([1.0, 0.5, 0.125]).astype(complex)
    psi = _state(3, 3, rng)
    kt = 3.0
    exact = polar.apply_polar_wellconditioned(a, psi, kt, mode="exact")
    sim = polar.apply_polar_wellconditioned(
        a, psi, kt, mode="qpe", config=QPEConfig(bits=6)
    )
    np.testing.assert_allclose(
        sim.output.to_vector(), exact.output.to_vector(), atol=1e-9
    )
    np.testing.assert_allclose(
        sim.flagged.to_vector(), exact.flagged.to_vector(), atol=1e-9
    )
    assert sim.diagnostics.flag_probability == pytest.approx(
        exact.diagnostics.flag_probability, abs=1e-10
    )


def test_kappa_tilde_config_routes_to_flag_variant():
    rng = generate.rng_for(406)
    a = np.diag([1.0, 0.125]).astype(complex)
    psi = _state(2, 2, rng)
    cfg = QPEConfig(bits=6, kappa_tilde=4.0)
    via_config = polar.apply_polar_isometry(a, psi, mode="qpe", config=cfg)
    direct = polar.apply_polar_wellconditioned(a, psi, 4.0, mode="qpe", config=cfg)
    np.testing.assert_allclose(
        via_config.output.to_vector(), direct.output.to_vector(), atol=1e-12
    )


def test_positive_evolution_norm_and_composition():
    rng = generate.rng_for(407)
    a = generate.random_complex_matrix(4, 3, rng)
    psi = _state(3, 4, rng)
    r1 = polar.evolve_positive_factor(a, 0.6, psi, mode="exact")
    assert r1.output.norm == pytest.approx(1.0, abs=1e-12)
    r2 = polar.evolve_positive_factor(a, 0.9, r1.output, mode="exact")
    direct = polar.evolve_positive_factor(a, 1.5, psi, mode="exact")
    np.testing.assert_allclose(
        r2.output.to_vector(), direct.output.to_vector(), atol=1e-10
    )
    r0 = polar.evolve_positive_factor(a, 0.0, psi, mode="exact")
    np.testing.assert_allclose(r0.output.to_vector(), psi.to_vector(), atol=1e-12)


def test_generalized_odd_identity_is_plain_evolution():
    rng = generate.rng_for(408)
    a = generate.random_complex_matrix(3, 3, rng)
    psi = _state(3, 3, rng)
    ext = ParityExtension(base=lambda x: x, parity="odd")
    res = polar.evolve_generalized(a, ext, 1.1, psi, mode="exact")
    h = embedding.embed(a).to_matrix()
    expected = linalg.matrix_exp_hermitian(h, 1.1) @ psi.to_vector()
    np.testing.assert_allclose(res.output.to_vector(), expected, atol=1e-10)


def test_generalized_even_acts_blockwise():
    # even extension applies f to the positive factors on each block
    rng = generate.rng_for(409)
    s = np.array([1.3, 0.4, 0.0])
    a = generate.matrix_with_singular_values(s, 4, 3, rng)
    psi = _state(3, 4, rng)
    base = lambda x: np.cos(x) + x  # noqa: E731
    ext = ParityExtension(base=base, parity="even")
    t = 0.8
    res = polar.evolve_generalized(a, ext, t, psi, mode="exact")
    factors = linalg.classical_polar(a)

    def blockwise(b: np.ndarray, vec: np.ndarray) -> np.ndarray:
        w, v = linalg.hermitian_eig(b)
        return v @ (np.exp(-1j * base(np.abs(w)) * t) * (v.conj().T @ vec))

    expected = np.concatenate(
        [blockwise(factors.right_positive, psi.top),
         blockwise(factors.left_positive, psi.bottom)]
    )
    np.testing.assert_allclose(res.output.to_vector(), expected, atol=1e-10)


def test_generalized_function_sees_unscaled_spectrum():
    # f is read at the true singular values despite the internal rescale
    rng = generate.rng_for(410)
    a = generate.random_complex_matrix(3, 3, rng)
    psi = _state(3, 3, rng)
    ext = ParityExtension(base=lambda x: np.minimum(x, 0.7), parity="odd")

    def oracle(mat: np.ndarray) -> np.ndarray:
        h = embedding.embed(mat).to_matrix()
        w, v = linalg.hermitian_eig(h)
        return v @ (np.exp(-1j * ext.extend(w)) * (v.conj().T @ psi.to_vector()))

    for scale in (0.5, 1.0, 40.0):
        res = polar.evolve_generalized(scale * a, ext, 1.0, psi, mode="exact")
        np.testing.assert_allclose(
            res.output.to_vector(), oracle(scale * a), atol=1e-10
        )


def test_mode_validation():
    a = np.eye(2, dtype=complex)
    psi = embedding.inject_right(np.array([1.0, 0.0], dtype=complex), 2)
    with pytest.raises(ValueError, match="mode"):
        polar.apply_polar_isometry(a, psi, mode="fast")
    with pytest.raises(ValueError, match="mode"):
        polar.evolve_positive_factor(a, 1.0, psi, mode="")


def test_zero_matrix_is_identity_action():
    a = np.zeros((2, 3), dtype=complex)
    psi = DilationVector.from_vector(generate.random_state(5, generate.rng_for(411)), 3)
    res = polar.apply_polar_isometry(a, psi, mode="exact")
    np.testing.assert_allclose(res.output.to_vector(), psi.to_vector(), atol=1e-12)
