"""Command-line front end.

Seven commands cover every pipeline: ``polar``, ``evolve``, ``procrustes``,
``pgm``, ``hsvt``, ``verify``, ``generate``.  Each run emits one structured
key/value report (stdout, plus ``--output`` when given) whose non-timing
lines are reproducible byte for byte from the inputs, the seed and the
configuration.

Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 usage error,
3 unreadable or unwritable file, 4 malformed file content.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from . import embedding, generate, hsvt, io, linalg, pgm, polar, procrustes, verify
from .embedding import DilationVector
from .polar import ParityExtension
from .report import Report
from .spectral import QPEConfig, SpectralFunction

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_UNREADABLE = 3
EXIT_MALFORMED = 4

_DEFAULT_TOLERANCE = 1e-9
_DEFAULT_SEED = 7


class _Args(argparse.Namespace):
    pass


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {value}")
    return value


def _kappa_tilde(text: str) -> float:
    value = float(text)
    if not value > 1:
        raise argparse.ArgumentTypeError(
            f"effective condition number must exceed 1, got {value}"
        )
    return value


def _dims(text: str) -> tuple[int, ...]:
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"dims must be comma-separated integers, got {text!r}"
        ) from exc
    if not parts or any(p < 1 for p in parts):
        raise argparse.ArgumentTypeError(f"dims must all be >= 1, got {text!r}")
    return parts


def _env_tolerance() -> float:
    raw = os.environ.get("POLARSIM_TOLERANCE")
    if raw is None:
        return _DEFAULT_TOLERANCE
    try:
        value = float(raw)
    except ValueError:
        raise SystemExit(
            f"polarsim: POLARSIM_TOLERANCE must be a number, got {raw!r}"
        ) from None
    if not value > 0:
        raise SystemExit(f"polarsim: POLARSIM_TOLERANCE must be > 0, got {raw!r}")
    return value


def _env_threads() -> int:
    raw = os.environ.get("POLARSIM_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise SystemExit(
            f"polarsim: POLARSIM_THREADS must be an integer, got {raw!r}"
        ) from None
    if value < 1:
        raise SystemExit(f"polarsim: POLARSIM_THREADS must be >= 1, got {raw!r}")
    return value


def _add_common(p: argparse.ArgumentParser, state: bool = True) -> None:
    p.add_argument("--input", required=True, help="path of the input file")
    if state:
        p.add_argument(
            "--state",
            help="optional unit-norm state file (single-column matrix); "
            "default is the uniform state",
        )
    p.add_argument("--mode", choices=("exact", "qpe"), default="exact")
    p.add_argument("--bits", type=_positive_int, default=8, help="pointer bits")
    p.add_argument(
        "--kappa-tilde",
        type=_kappa_tilde,
        default=None,
        help="flag out singular values below sigma_max/kappa_tilde",
    )
    p.add_argument(
        "--tolerance",
        type=_positive_float,
        default=None,
        help="verdict tolerance (default 1e-9 or POLARSIM_TOLERANCE)",
    )
    p.add_argument("--output", help="also write the report to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polarsim",
        description="Statevector-level simulator for polar decomposition "
        "pipelines: isometry application, singular-value evolutions, "
        "Procrustes fitting, pretty good measurements, and off-diagonal "
        "Hamiltonian transforms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("polar", help="apply the polar (partial) isometry of A")
    _add_common(p)

    p = sub.add_parser("evolve", help="evolve under singular-value generators of A")
    _add_common(p)
    p.add_argument("--time", type=float, required=True, help="evolution time t")
    p.add_argument(
        "--function",
        choices=("abs", "linear"),
        default="abs",
        help="abs: e^{-i|H|t} (positive polar factors); linear: e^{-iHt}",
    )

    p = sub.add_parser("procrustes", help="fit and apply the closest isometry")
    _add_common(p)
    p.add_argument(
        "--steps",
        type=_nonnegative_int,
        default=100,
        help="Trotter steps for the synthesized walk (0: exact walk)",
    )

    p = sub.add_parser("pgm", help="square-root measurement statistics")
    _add_common(p, state=False)
    p.add_argument("--shots", type=_positive_int, default=None)
    p.add_argument("--seed", type=_nonnegative_int, default=_DEFAULT_SEED)

    p = sub.add_parser("hsvt", help="transform the coupling block of a Hamiltonian")
    _add_common(p)
    p.add_argument("--split", type=_positive_int, default=None)
    p.add_argument("--time", type=float, default=1.0)
    p.add_argument("--steps", type=_positive_int, default=100)
    p.add_argument(
        "--function",
        choices=("sign", "abs", "linear"),
        default="sign",
        help="spectral function applied to the coupling block",
    )

    p = sub.add_parser("verify", help="run the deterministic invariant battery")
    p.add_argument(
        "--suite",
        default="all",
        help="'all', 'acceptance', or comma-separated item name prefixes",
    )
    p.add_argument("--seed", type=_nonnegative_int, default=_DEFAULT_SEED)
    p.add_argument(
        "--threads",
        type=_positive_int,
        default=None,
        help="parallel items (default 1 or POLARSIM_THREADS)",
    )
    p.add_argument("--output", help="also write the report to this path")

    p = sub.add_parser("generate", help="write a reproducible random instance file")
    p.add_argument("--kind", choices=generate.KINDS, required=True)
    p.add_argument("--dims", type=_dims, required=True)
    p.add_argument("--seed", type=_nonnegative_int, default=_DEFAULT_SEED)
    p.add_argument("--output", required=True, help="destination file")
    p.add_argument(
        "--realizable",
        action="store_true",
        help="procrustes only: outputs are an exact isometric image",
    )
    return parser


def _tolerance(args: _Args) -> float:
    return args.tolerance if args.tolerance is not None else _env_tolerance()


def _config(args: _Args) -> QPEConfig:
    return QPEConfig(bits=args.bits, kappa_tilde=getattr(args, "kappa_tilde", None))


def _read_state(path: str, dim: int, what: str) -> np.ndarray:
    vec = io.read_matrix(path)
    if vec.shape[1] != 1:
        raise io.FormatError(
            f"{path}: expected a single-column state, got {vec.shape[1]} columns"
        )
    vec = vec[:, 0]
    if vec.shape[0] != dim:
        raise io.FormatError(
            f"{path}: state has dimension {vec.shape[0]}, {what} needs {dim}"
        )
    return vec


def _uniform_state(dim: int) -> np.ndarray:
    return np.full(dim, 1.0 / np.sqrt(dim), dtype=complex)


def _dilation_state(args: _Args, n: int, m: int) -> DilationVector:
    if getattr(args, "state", None):
        vec = _read_state(args.state, n + m, "this dilation")
    else:
        vec = _uniform_state(n + m)
    return DilationVector.from_vector(vec, n)


def _echo_config(rep: Report, args: _Args) -> None:
    rep.add("config.mode", args.mode)
    rep.add("config.bits", args.bits)
    if getattr(args, "kappa_tilde", None) is not None:
        rep.add("config.kappa_tilde", args.kappa_tilde)
    rep.add("config.tolerance", _tolerance(args))


def _add_vector(rep: Report, key: str, vec: np.ndarray) -> None:
    for k, z in enumerate(np.asarray(vec)):
        rep.add(f"{key}.{k}", complex(z))


def _restricted_isometry(a: np.ndarray, kappa_tilde: float | None) -> np.ndarray:
    """Classical oracle: partial isometry over sigma > cutoff (or >= sigma_max/kt)."""
    res = linalg.svd(a)
    s = res.singular_values
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((a.shape[0], a.shape[1]), dtype=complex)
    if kappa_tilde is None:
        keep = s > linalg.rank_cutoff(s)
    else:
        keep = (s / s[0]) >= 1.0 / kappa_tilde
    return res.left_vectors[:, keep] @ res.right_vectors[:, keep].conj().T


def _cmd_polar(args: _Args) -> tuple[Report, bool]:
    a = io.read_matrix(args.input)
    m, n = a.shape
    tol = _tolerance(args)
    rep = Report()
    rep.add("command", "polar")
    rep.add("input", args.input)
    _echo_config(rep, args)
    rep.add("rows", m)
    rep.add("cols", n)
    config = _config(args)
    kt = args.kappa_tilde
    u_pipe = np.zeros((m, n), dtype=complex)
    min_fid = 1.0
    max_leak = 0.0
    flag_total = 0.0
    for j in range(n):
        psi = embedding.inject_right(np.eye(n, dtype=complex)[:, j], m)
        if kt is None:
            result = polar.apply_polar_isometry(a, psi, mode=args.mode, config=config)
        else:
            result = polar.apply_polar_wellconditioned(
                a, psi, kt, mode=args.mode, config=config
            )
        u_pipe[:, j] = np.asarray(result.output.bottom)
        d = result.diagnostics
        min_fid = min(min_fid, d.fidelity_vs_exact)
        max_leak = max(max_leak, d.leakage_norm)
        flag_total += d.flag_probability
    u_oracle = _restricted_isometry(a, kt)
    deviation = float(np.linalg.norm(u_pipe - u_oracle, ord=2))
    rep.add("isometry_deviation", deviation)
    rep.add("min_column_fidelity", min_fid)
    rep.add("max_leakage", max_leak)
    rep.add("mean_flag_probability", flag_total / n)
    if getattr(args, "state", None):
        vec = _read_state(args.state, n + m, "this dilation")
        psi = DilationVector.from_vector(vec, n)
        if kt is None:
            result = polar.apply_polar_isometry(a, psi, mode=args.mode, config=config)
        else:
            result = polar.apply_polar_wellconditioned(
                a, psi, kt, mode=args.mode, config=config
            )
        rep.add("state_fidelity", result.diagnostics.fidelity_vs_exact)
        rep.add("state_flag_probability", result.diagnostics.flag_probability)
        _add_vector(rep, "state_output", result.output.to_vector())
    if m <= 8 and n <= 8:
        for i in range(m):
            for j in range(n):
                rep.add(f"isometry.{i}.{j}", complex(u_pipe[i, j]))
    return rep, deviation <= tol


def _cmd_evolve(args: _Args) -> tuple[Report, bool]:
    a = io.read_matrix(args.input)
    m, n = a.shape
    tol = _tolerance(args)
    rep = Report()
    rep.add("command", "evolve")
    rep.add("input", args.input)
    _echo_config(rep, args)
    rep.add("function", args.function)
    rep.add("time", args.time)
    psi = _dilation_state(args, n, m)
    config = _config(args)
    if args.function == "abs":
        result = polar.evolve_positive_factor(
            a, args.time, psi, mode=args.mode, config=config
        )
        factors = linalg.classical_polar(a)
        expected = np.concatenate(
            [
                linalg.matrix_exp_hermitian(factors.right_positive, args.time)
                @ psi.top,
                linalg.matrix_exp_hermitian(factors.left_positive, args.time)
                @ psi.bottom,
            ]
        )
    else:
        ext = ParityExtension(base=lambda x: x, parity="odd")
        result = polar.evolve_generalized(
            a, ext, args.time, psi, mode=args.mode, config=config
        )
        hmat = embedding.embed(a).to_matrix()
        expected = linalg.matrix_exp_hermitian(hmat, args.time) @ psi.to_vector()
    out = result.output.to_vector()
    deviation = float(np.linalg.norm(out - expected))
    fidelity = float(abs(np.vdot(expected, out)))
    rep.add("deviation", deviation)
    rep.add("fidelity", fidelity)
    rep.add("leakage", result.diagnostics.leakage_norm)
    _add_vector(rep, "output", out)
    return rep, deviation <= tol


def _cmd_procrustes(args: _Args) -> tuple[Report, bool]:
    inst = io.read_procrustes_instance(args.input)
    tol = _tolerance(args)
    rep = Report()
    rep.add("command", "procrustes")
    rep.add("input", args.input)
    _echo_config(rep, args)
    rep.add("pairs", inst.n_pairs)
    rep.add("input_dim", inst.input_dim)
    rep.add("output_dim", inst.output_dim)
    u, residual = procrustes.solve_procrustes_classical(inst)
    rep.add("residual", residual)
    if getattr(args, "state", None):
        chi = _read_state(args.state, inst.input_dim, "this instance")
    else:
        chi = _uniform_state(inst.input_dim)
    n_steps = args.steps if (args.mode == "qpe" and args.steps > 0) else None
    bottom, diag = procrustes.apply_procrustes_quantum(
        inst, chi, mode=args.mode, config=_config(args), n_steps=n_steps
    )
    rep.add("fidelity", diag.fidelity_vs_exact)
    rep.add("flag_probability", diag.flag_probability)
    rep.add("leakage", diag.leakage_norm)
    _add_vector(rep, "mapped_state", bottom)
    psi = embedding.inject_right(chi, inst.output_dim)
    for n in sorted({10, 100, max(args.steps, 1)}):
        _, tr = procrustes.effective_hamiltonian_evolution(inst, 1.0, n, psi)
        rep.add(f"trotter_deviation.n{n}", tr.deviation)
    return rep, diag.fidelity_vs_exact >= 1.0 - tol


def _cmd_pgm(args: _Args) -> tuple[Report, bool]:
    inst, rho = io.read_pgm_instance(args.input)
    tol = _tolerance(args)
    rep = Report()
    rep.add("command", "pgm")
    rep.add("input", args.input)
    _echo_config(rep, args)
    rep.add("dim", inst.dim)
    rep.add("n_states", inst.n_states)
    if rho is None:
        # ensemble average of the stored states
        rho = inst.gram_operator() / inst.n_states
        rep.add("rho", "ensemble-average")
    else:
        rep.add("rho", "from-file")
    p_direct = pgm.pgm_probabilities(inst, rho)
    p_polar, u = pgm.pgm_via_polar(inst, rho, mode=args.mode, config=_config(args))
    gap = float(np.max(np.abs(p_direct - p_polar)))
    chi = pgm.pgm_vectors(inst)
    svd_states = linalg.svd(inst.states)
    keep = svd_states.singular_values > linalg.rank_cutoff(svd_states.singular_values)
    w = svd_states.left_vectors[:, keep]
    completeness = float(
        np.linalg.norm(chi @ chi.conj().T - w @ w.conj().T, ord=2)
    )
    reprep = float(np.max(np.linalg.norm(u.conj().T - chi, axis=0)))
    for j, p in enumerate(p_direct):
        rep.add(f"probability.{j}", float(p))
    rep.add("outside_span_probability", float(max(0.0, 1.0 - p_direct.sum())))
    rep.add("dual_path_gap", gap)
    rep.add("completeness_residual", completeness)
    rep.add("repreparation_error", reprep)
    if args.shots is not None:
        counts = pgm.sample_outcomes(p_direct, args.shots, args.seed)
        rep.add("shots", args.shots)
        rep.add("seed", args.seed)
        for j in range(inst.n_states):
            rep.add(f"counts.{j}", int(counts[j]))
        rep.add("counts.outside", int(counts[-1]))
    passed = gap <= tol and completeness <= max(tol, 1e-10)
    return rep, passed


def _cmd_hsvt(args: _Args) -> tuple[Report, bool]:
    sh = io.read_split_hamiltonian(args.input, split=args.split)
    tol = _tolerance(args)
    rep = Report()
    rep.add("command", "hsvt")
    rep.add("input", args.input)
    _echo_config(rep, args)
    rep.add("split", sh.split)
    rep.add("function", args.function)
    rep.add("time", args.time)
    rep.add("steps", args.steps)
    n, m = sh.top_dim, sh.bottom_dim
    isolated = hsvt.isolate_offdiagonal(sh).to_matrix()
    direct = np.zeros_like(sh.matrix)
    direct[n:, :n] = sh.matrix[n:, :n]
    direct[:n, n:] = sh.matrix[:n, n:]
    rep.add("isolation_deviation", float(np.max(np.abs(isolated - direct))))
    psi = _dilation_state(args, n, m)
    _, tr = hsvt.trotter_offdiagonal_evolution(sh, args.time, args.steps, psi)
    rep.add("trotter_deviation", tr.deviation)
    rep.add("trotter_step_size", tr.step_size)
    if args.function == "sign":
        transform: ParityExtension | SpectralFunction = SpectralFunction.sign_phase(
            kappa_tilde=args.kappa_tilde
        )
    elif args.function == "abs":
        transform = ParityExtension(base=lambda x: x, parity="even")
    else:
        transform = ParityExtension(base=lambda x: x, parity="odd")
    result = hsvt.hsvt_transform(
        sh, transform, args.time, psi, mode=args.mode, config=_config(args)
    )
    reference = hsvt.hsvt_transform(sh, transform, args.time, psi, mode="exact")
    deviation = float(
        np.linalg.norm(result.output.to_vector() - reference.output.to_vector())
    )
    rep.add("deviation_vs_exact", deviation)
    rep.add("fidelity", result.diagnostics.fidelity_vs_exact)
    rep.add("flag_probability", result.diagnostics.flag_probability)
    _add_vector(rep, "output", result.output.to_vector())
    return rep, deviation <= tol


def _cmd_verify(args: _Args) -> tuple[Report, bool]:
    try:
        names = verify.select_items(args.suite)
    except ValueError as exc:
        raise SystemExit(f"polarsim: {exc}") from exc
    threads = args.threads if args.threads is not None else _env_threads()
    rep = Report()
    rep.add("command", "verify")
    rep.add("suite", args.suite)
    rep.add("seed", args.seed)
    rep.add("threads", threads)
    rep.add("items", len(names))
    results = verify.run_suite(names, args.seed, threads=threads)
    all_passed = True
    for res in results:
        rep.add(f"item.{res.name}.verdict", "pass" if res.passed else "fail")
        for key, value in res.metrics.items():
            rep.add(f"item.{res.name}.{key}", value)
        rep.add_timing(f"item.{res.name}", res.elapsed)
        all_passed = all_passed and res.passed
    return rep, all_passed


def _cmd_generate(args: _Args) -> tuple[Report, bool]:
    dims = args.dims
    expected = {"matrix": 2, "procrustes": 3, "pgm": 2, "split-hamiltonian": 2}
    if len(dims) != expected[args.kind]:
        raise SystemExit(
            f"polarsim: kind {args.kind!r} needs {expected[args.kind]} dims, "
            f"got {len(dims)}"
        )
    if args.realizable:
        if args.kind != "procrustes":
            raise SystemExit("polarsim: --realizable only applies to procrustes")
        dims = dims + (1,)
    obj = generate.generate_random_instance(args.kind, dims, args.seed)
    rep = Report()
    rep.add("command", "generate")
    rep.add("kind", args.kind)
    rep.add("dims", ",".join(str(d) for d in args.dims))
    rep.add("seed", args.seed)
    rep.add("output", args.output)
    passed = True
    if args.kind == "matrix":
        io.write_matrix(args.output, obj)
        rep.add("sigma_max", float(np.linalg.norm(obj, ord=2)))
    elif args.kind == "procrustes":
        io.write_procrustes_instance(args.output, obj)
        _, residual = procrustes.solve_procrustes_classical(obj)
        rep.add("residual", residual)
        rep.add("realizable", args.realizable)
        if args.realizable:
            passed = residual <= 1e-12
    elif args.kind == "pgm":
        io.write_pgm_instance(args.output, obj)
        norms = np.linalg.norm(obj.states, axis=0)
        worst = float(np.max(np.abs(norms - 1.0)))
        rep.add("max_norm_error", worst)
        passed = worst <= 1e-12
    else:
        io.write_split_hamiltonian(args.output, obj)
        rep.add(
            "hermiticity_error",
            float(np.linalg.norm(obj.matrix - obj.matrix.conj().T)),
        )
    return rep, passed


_COMMANDS = {
    "polar": _cmd_polar,
    "evolve": _cmd_evolve,
    "procrustes": _cmd_procrustes,
    "pgm": _cmd_pgm,
    "hsvt": _cmd_hsvt,
    "verify": _cmd_verify,
    "generate": _cmd_generate,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code is None or code == 0:
            return EXIT_PASS
        return EXIT_USAGE
    start = time.perf_counter()
    try:
        rep, passed = _COMMANDS[args.command](args)
    except SystemExit as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except io.FormatError as exc:
        print(f"polarsim: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except OSError as exc:
        print(f"polarsim: cannot read input: {exc}", file=sys.stderr)
        return EXIT_UNREADABLE
    except ValueError as exc:
        print(f"polarsim: invalid content: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    rep.add("verdict", "pass" if passed else "fail")
    rep.add_timing("total", time.perf_counter() - start)
    text = rep.render()
    out_path = getattr(args, "output", None)
    if out_path and args.command != "generate":
        try:
            with open(out_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"polarsim: cannot write report: {exc}", file=sys.stderr)
            return EXIT_UNREADABLE
    sys.stdout.write(text)
    return EXIT_PASS if passed else EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
