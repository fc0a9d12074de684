"""Command-line entry point: ``photobench <subcommand> ...``.

Exit status is 0 on success, 1 on a runtime failure and 2 when an input
file, flag or experiment spec fails validation.
"""
import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .bench import (
    FIGURES,
    TABLE1_M,
    ExperimentSpec,
    SpecError,
    fit_check,
    format_table1,
    rows_to_csv,
    run_sweep,
    simulate_design,
    table1,
    table1_csv,
    write_json,
)
from .decomposition import decompose, plan_from_json, save_plan
from .fast import fourier_preset, params_from_json, save_params, sylvester_preset
from .linalg import MatrixFormatError, load_matrix

EXIT_OK, EXIT_RUNTIME, EXIT_INVALID = 0, 1, 2


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_design(path):
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"{path}: invalid JSON ({exc})") from None
    if isinstance(data, dict) and "tau" in data:
        return params_from_json(data)
    return plan_from_json(data)


def cmd_decompose(args):
    U = load_matrix(args.input, require_unitary=True)
    plan = decompose(U, args.scheme)
    save_plan(args.out, plan)
    print(f"{args.scheme}: {len(plan.cells)} cells on {plan.m} modes -> {args.out}", file=sys.stderr)


def cmd_build(args):
    params = fourier_preset(args.n) if args.preset == "fourier" else sylvester_preset(args.n)
    save_params(args.out, params)
    print(f"{args.preset} preset, {params.m} modes -> {args.out}", file=sys.stderr)


def cmd_simulate(args):
    design = _load_design(args.plan)
    _, row = simulate_design(design, args.sigma_bs, args.sigma_ps, args.eta_db, args.samples, args.seed,
                             args.photons)
    _emit(rows_to_csv([row]), args.out)


def _spec_from_args(args):
    if args.spec:
        try:
            data = json.loads(Path(args.spec).read_text())
        except json.JSONDecodeError as exc:
            raise SpecError(f"{args.spec}: invalid JSON ({exc})") from None
        return ExperimentSpec.from_json(data)
    return ExperimentSpec(
        schemes=tuple(args.schemes.split(",")),
        target=args.target,
        m_list=tuple(args.m),
        sigma_bs_list=tuple(args.sigma_bs),
        sigma_ps_list=tuple(args.sigma_ps),
        eta_db_list=tuple(args.eta_db),
        samples=args.samples,
        photons=args.photons,
        seed=args.seed,
        joint_sigma=args.joint,
    )


def cmd_sweep(args):
    spec = _spec_from_args(args)
    result = run_sweep(spec, threads=args.threads)
    _emit(result.to_csv(), args.out)
    if args.json:
        write_json(args.json, result)


def cmd_table1(args):
    m_list = TABLE1_M if args.full else tuple(args.m)
    cells, _ = table1(m_list=m_list, samples=args.samples, seed=args.seed, threads=args.threads,
                      targets=tuple(args.targets.split(",")))
    print(format_table1(cells, tuple(args.targets.split(","))))
    if args.out:
        Path(args.out).write_text(table1_csv(cells, args.seed))


def cmd_fit_check(args):
    rep = fit_check(args.figure, m_list=args.m, x_list=args.x, samples=args.samples, seed=args.seed,
                    threads=args.threads)
    print(rep.format())
    if args.out:
        Path(args.out).write_text(json.dumps(rep.__dict__, indent=1))


def build_parser():
    p = argparse.ArgumentParser(prog="photobench", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", help="decompose a unitary into a Reck or Clements mesh")
    d.add_argument("--scheme", choices=("reck", "clements"), required=True)
    d.add_argument("--in", dest="input", required=True, help="matrix JSON {m, re, im}")
    d.add_argument("--out", required=True, help="plan JSON to write")
    d.set_defaults(func=cmd_decompose)

    b = sub.add_parser("build", help="write a fast-architecture preset")
    b.add_argument("--preset", choices=("fourier", "sylvester"), required=True)
    b.add_argument("--n", type=int, required=True, help="number of layers (m = 2^n)")
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_build)

    def noise_flags(q, many):
        kind = _floats if many else float
        default = [0.0] if many else 0.0
        q.add_argument("--sigma-bs", type=kind, default=default)
        q.add_argument("--sigma-ps", type=kind, default=default)
        q.add_argument("--eta-db", type=kind, default=default)
        q.add_argument("--samples", type=int, default=100)
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--photons", type=int, default=0, help="photon number for mean TVD (0 = skip)")

    s = sub.add_parser("simulate", help="Monte-Carlo score of a plan or fast-parameter file")
    s.add_argument("--plan", required=True, help="plan JSON or fast-parameter JSON")
    noise_flags(s, many=False)
    s.add_argument("--out", help="CSV file (default: stdout)")
    s.set_defaults(func=cmd_simulate)

    w = sub.add_parser("sweep", help="run a grid of noise and loss settings")
    w.add_argument("--spec", help="JSON experiment spec (overrides the grid flags)")
    w.add_argument("--schemes", default="clements")
    w.add_argument("--target", default="haar", choices=("haar", "fourier", "sylvester"))
    w.add_argument("--m", type=_ints, default=[8])
    noise_flags(w, many=True)
    w.add_argument("--joint", action="store_true", help="tie sigma_ps to sigma_bs")
    w.add_argument("--threads", type=int, default=1)
    w.add_argument("--out", help="CSV file (default: stdout)")
    w.add_argument("--json", help="also write a JSON result file")
    w.set_defaults(func=cmd_sweep)

    t = sub.add_parser("table1", help="fast versus universal meshes on Fourier and Sylvester targets")
    t.add_argument("--m", type=_ints, default=[64])
    t.add_argument("--full", action="store_true", help="run m = 64, 128, 256")
    t.add_argument("--samples", type=int, default=100)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--targets", default="fourier,sylvester")
    t.add_argument("--threads", type=int, default=1)
    t.add_argument("--out", help="CSV file for the cells")
    t.set_defaults(func=cmd_table1)

    f = sub.add_parser("fit-check", help="compare simulations with the heuristic fits")
    f.add_argument("--figure", choices=FIGURES, required=True)
    f.add_argument("--m", type=_ints)
    f.add_argument("--x", type=_floats, help="loss (dB) or noise grid")
    f.add_argument("--samples", type=int)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--threads", type=int, default=1)
    f.add_argument("--out", help="JSON report file")
    f.set_defaults(func=cmd_fit_check)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (MatrixFormatError, SpecError) as exc:
        where = f" [field: {exc.field}]" if exc.field else ""
        print(f"error: {exc}{where}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
