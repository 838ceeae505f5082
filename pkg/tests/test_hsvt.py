from __future__ import annotations

import numpy as np
import pytest

from polarsim import embedding, generate, hsvt, linalg, polar
from polarsim.embedding import DilationVector
from polarsim.hsvt import SplitHamiltonian
from polarsim.polar import ParityExtension
from polarsim.spectral import SpectralFunction


def _state(total: int, split: int, seed: int) -> DilationVector:
    rng = generate.rng_for(seed)
    return DilationVector.from_vector(generate.random_state(total, rng), split)


def test_split_hamiltonian_validation():
    rng = generate.rng_for(601)
    h = generate.random_hermitian(4, rng)
    sh = SplitHamiltonian(matrix=h, split=1)
    assert sh.top_dim == 1 and sh.bottom_dim == 3
    with pytest.raises(ValueError, match="split"):
        SplitHamiltonian(matrix=h, split=0)
    with pytest.raises(ValueError, match="split"):
        SplitHamiltonian(matrix=h, split=4)
    with pytest.raises(ValueError, match="Hermitian"):
        SplitHamiltonian(matrix=h + 1j * np.eye(4), split=2)
    with pytest.raises(ValueError, match="square"):
        SplitHamiltonian(matrix=np.zeros((2, 3)), split=1)


def test_parity_operator():
    sh = SplitHamiltonian(matrix=np.diag([1.0, 2.0, 3.0]).astype(complex), split=2)
    np.testing.assert_array_equal(
        sh.parity(), np.diag([1.0, 1.0, -1.0]).astype(complex)
    )


def test_isolation_equals_conjugation_formula():
    rng = generate.rng_for(602)
    for _ in range(20):
        n = int(rng.integers(1, 5))
        m = int(rng.integers(1, 5))
        sh = generate.random_split_hamiltonian(n, m, rng)
        iso = hsvt.isolate_offdiagonal(sh)
        assert iso.right_dim == n and iso.left_dim == m
        # dual route: (M - VMV)/2
        v = sh.parity()
        expected = (sh.matrix - v @ sh.matrix @ v) / 2.0
        np.testing.assert_array_equal(iso.to_matrix(), expected)
        np.testing.assert_array_equal(iso.a_block, sh.matrix[n:, :n])


def test_isolation_is_entrywise_exact():
    # fp algebra: subtracting identical diagonal blocks leaves literal zeros
    rng = generate.rng_for(603)
    sh = generate.random_split_hamiltonian(3, 2, rng)
    iso = hsvt.isolate_offdiagonal(sh).to_matrix()
    assert np.all(iso[:3, :3] == 0.0)
    assert np.all(iso[3:, 3:] == 0.0)


def test_trotter_converges_and_identity_without_coupling():
    rng = generate.rng_for(604)
    sh = generate.random_split_hamiltonian(2, 2, rng)
    psi = _state(4, 2, 605)
    devs = []
    for n in (8, 64, 512):
        out, rep = hsvt.trotter_offdiagonal_evolution(sh, 1.0, n, psi)
        devs.append(rep.deviation)
        assert abs(np.linalg.norm(out.to_vector()) - 1.0) < 1e-12
    assert devs[0] > devs[1] > devs[2]
    # block-diagonal M commutes with V: every step collapses to the identity
    block = np.zeros((4, 4), dtype=complex)
    block[:2, :2] = generate.random_hermitian(2, rng)
    block[2:, 2:] = generate.random_hermitian(2, rng)
    sh0 = SplitHamiltonian(matrix=block, split=2)
    out, rep = hsvt.trotter_offdiagonal_evolution(sh0, 3.0, 5, psi)
    assert rep.deviation < 1e-12
    np.testing.assert_allclose(out.to_vector(), psi.to_vector(), atol=1e-12)
    with pytest.raises(ValueError):
        hsvt.trotter_offdiagonal_evolution(sh, 1.0, 0, psi)


def test_transform_sign_equals_polar_route():
    rng = generate.rng_for(606)
    sh = generate.random_split_hamiltonian(3, 2, rng)
    psi = _state(5, 3, 607)
    res = hsvt.hsvt_transform(sh, SpectralFunction.sign_phase(), 0.0, psi)
    ref = polar.apply_polar_isometry(sh.coupling_block, psi, mode="exact")
    np.testing.assert_allclose(
        res.output.to_vector(), ref.output.to_vector(), atol=1e-12
    )


def test_transform_thresholded_sign_uses_flag_variant():
    rng = generate.rng_for(608)
    sh = generate.random_split_hamiltonian(2, 2, rng)
    psi = _state(4, 2, 609)
    f = SpectralFunction.sign_phase(kappa_tilde=2.0)
    res = hsvt.hsvt_transform(sh, f, 0.0, psi)
    ref = polar.apply_polar_wellconditioned(
        sh.coupling_block, psi, kappa_tilde=2.0, mode="exact"
    )
    np.testing.assert_allclose(
        res.output.to_vector(), ref.output.to_vector(), atol=1e-12
    )
    assert res.diagnostics.flag_probability == pytest.approx(
        ref.diagnostics.flag_probability, abs=1e-12
    )


def test_transform_parity_extension_routes_to_generalized():
    rng = generate.rng_for(610)
    sh = generate.random_split_hamiltonian(2, 3, rng)
    psi = _state(5, 2, 611)
    ext = ParityExtension(base=np.sqrt, parity="even")
    res = hsvt.hsvt_transform(sh, ext, 0.7, psi)
    ref = polar.evolve_generalized(sh.coupling_block, ext, 0.7, psi, mode="exact")
    np.testing.assert_allclose(
        res.output.to_vector(), ref.output.to_vector(), atol=1e-12
    )


def test_diagonal_blocks_never_enter():
    # same coupling, different diagonal blocks: identical transform output
    rng = generate.rng_for(612)
    n, m = 2, 3
    coupling = generate.random_complex_matrix(m, n, rng)
    psi = _state(5, 2, 613)

    def build(seed: int) -> SplitHamiltonian:
        r = generate.rng_for(seed)
        mat = np.zeros((5, 5), dtype=complex)
        mat[:n, :n] = generate.random_hermitian(n, r)
        mat[n:, n:] = generate.random_hermitian(m, r)
        mat[n:, :n] = coupling
        mat[:n, n:] = coupling.conj().T
        return SplitHamiltonian(matrix=mat, split=n)

    f = SpectralFunction.sign_phase()
    out1 = hsvt.hsvt_transform(build(1), f, 0.0, psi).output.to_vector()
    out2 = hsvt.hsvt_transform(build(2), f, 0.0, psi).output.to_vector()
    np.testing.assert_array_equal(out1, out2)


def test_transform_rejects_unsupported_functions():
    rng = generate.rng_for(614)
    sh = generate.random_split_hamiltonian(2, 2, rng)
    psi = _state(4, 2, 615)
    with pytest.raises(ValueError, match="sign"):
        hsvt.hsvt_transform(sh, SpectralFunction.linear(1.0), 1.0, psi)
    with pytest.raises(TypeError, match="transform"):
        hsvt.hsvt_transform(sh, "sign", 1.0, psi)


def test_isolated_block_spectrum_is_coupling_svd():
    rng = generate.rng_for(616)
    sh = generate.random_split_hamiltonian(3, 3, rng)
    iso = hsvt.isolate_offdiagonal(sh)
    w = np.linalg.eigvalsh(iso.to_matrix())
    s = linalg.svd(sh.coupling_block).singular_values
    np.testing.assert_allclose(np.sort(np.abs(w)), np.sort(np.concatenate([s, s])), atol=1e-10)
    pairs, _ = embedding.eigenstructure(iso)
    np.testing.assert_allclose([p.sigma for p in pairs], s, atol=1e-10)
