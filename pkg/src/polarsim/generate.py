"""Seeded random instance construction for the CLI and the test batteries.

Kept out of the core modules on purpose: simulation code never draws
randomness, so identical inputs give identical outputs, and every random
object in reports or tests traces back to one seed here.  Unitaries are
Haar-ish: orthonormalized complex Gaussians with the R-diagonal phase fix.
"""

from __future__ import annotations

import numpy as np

from .hsvt import SplitHamiltonian
from .pgm import PGMInstance
from .procrustes import ProcrustesInstance

KINDS = ("matrix", "procrustes", "pgm", "split-hamiltonian")


def rng_for(seed: int, stream: int = 0) -> np.random.Generator:
    """Deterministic child generator: one root seed, independent streams."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


def random_complex_matrix(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish unitary from a QR factorization of a complex Gaussian."""
    q, r = np.linalg.qr(random_complex_matrix(dim, dim, rng))
    diag = np.diagonal(r)
    phases = np.where(np.abs(diag) == 0.0, 1.0, diag / np.abs(diag))
    return q * phases


def random_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    a = random_complex_matrix(dim, dim, rng)
    return (a + a.conj().T) / 2.0


def random_density(dim: int, rng: np.random.Generator) -> np.ndarray:
    a = random_complex_matrix(dim, dim, rng)
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def matrix_with_singular_values(
    singular_values: np.ndarray, rows: int, cols: int, rng: np.random.Generator
) -> np.ndarray:
    """Random matrix with a prescribed (padded/truncated) singular spectrum."""
    k = min(rows, cols)
    s = np.zeros(k)
    vals = np.asarray(singular_values, dtype=float)
    s[: min(k, vals.size)] = vals[: min(k, vals.size)]
    left = random_unitary(rows, rng)[:, :k]
    right = random_unitary(cols, rng)[:, :k]
    return (left * s) @ right.conj().T


def dyadic_singular_matrix(
    bits: int, rows: int, cols: int, rng: np.random.Generator
) -> np.ndarray:
    """Matrix whose singular values sit exactly on the signed b-bit grid.

    The grid resolves multiples of 4/2^bits in (0, 1]; the top value is
    pinned to 1 so no internal rescaling can move the spectrum off-grid.
    """
    k = min(rows, cols)
    levels = 2 ** (bits - 2)
    choices = np.arange(1, levels)  # positive multiples of 4/2^b below 1
    s = np.empty(k)
    s[0] = 1.0
    if k > 1:
        picks = rng.choice(choices, size=k - 1, replace=levels - 1 < k - 1)
        s[1:] = picks / levels
    return matrix_with_singular_values(np.sort(s)[::-1], rows, cols, rng)


def conditioned_matrix(
    kappa: float, dim: int, rng: np.random.Generator
) -> np.ndarray:
    """Square matrix with top singular value 1 and bottom 1/kappa.

    Interior singular values (if any) are placed at inverse powers of two
    between the extremes, so power-of-two kappa keeps the whole spectrum
    dyadic.
    """
    if dim < 2:
        raise ValueError("need dimension >= 2 to pin both spectrum ends")
    s = np.empty(dim)
    s[0] = 1.0
    s[-1] = 1.0 / kappa
    for i in range(1, dim - 1):
        s[i] = max(2.0 ** (-i), 1.0 / kappa)
    return matrix_with_singular_values(np.sort(s)[::-1], dim, dim, rng)


def random_procrustes_instance(
    input_dim: int,
    output_dim: int,
    n_pairs: int,
    rng: np.random.Generator,
    realizable: bool = False,
) -> ProcrustesInstance:
    """Random pair instance; with ``realizable`` the outputs are an exact
    isometric image of the inputs, so the fit residual is zero."""
    inputs = np.column_stack([random_state(input_dim, rng) for _ in range(n_pairs)])
    if realizable:
        if output_dim < input_dim:
            raise ValueError("realizable instances need output_dim >= input_dim")
        iso = random_unitary(output_dim, rng)[:, :input_dim]
        outputs = iso @ inputs
    else:
        outputs = np.column_stack(
            [random_state(output_dim, rng) for _ in range(n_pairs)]
        )
    return ProcrustesInstance(inputs=inputs, outputs=outputs)


def random_pgm_instance(dim: int, n_states: int, rng: np.random.Generator) -> PGMInstance:
    states = np.column_stack([random_state(dim, rng) for _ in range(n_states)])
    return PGMInstance(states=states)


def random_split_hamiltonian(
    top_dim: int, bottom_dim: int, rng: np.random.Generator
) -> SplitHamiltonian:
    return SplitHamiltonian(
        matrix=random_hermitian(top_dim + bottom_dim, rng), split=top_dim
    )


def generate_random_instance(kind: str, dims: tuple[int, ...], seed: int):
    """Dispatcher used by the CLI: one object per kind, reproducible per seed.

    dims by kind: matrix (rows, cols); procrustes (input_dim, output_dim,
    n_pairs); pgm (dim, n_states); split-hamiltonian (top_dim, bottom_dim).
    An appended flag of 1 on procrustes dims requests a realizable instance.
    """
    rng = rng_for(seed)
    if kind == "matrix":
        rows, cols = dims
        return random_complex_matrix(rows, cols, rng)
    if kind == "procrustes":
        if len(dims) == 4:
            n, m, r, realizable = dims
        else:
            n, m, r = dims
            realizable = 0
        return random_procrustes_instance(n, m, r, rng, realizable=bool(realizable))
    if kind == "pgm":
        d, n = dims
        return random_pgm_instance(d, n, rng)
    if kind == "split-hamiltonian":
        n, m = dims
        return random_split_hamiltonian(n, m, rng)
    raise ValueError(f"unknown instance kind {kind!r}; choose from {KINDS}")
