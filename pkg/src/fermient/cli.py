"""Command-line front end.

Exit codes: 0 ok, 1 parse error, 2 validation error, 3 numeric
inconsistency, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import dynamics, models
from .fock import bitstring, enumerate_sector, parse_bitstring
from .measure import ConsistencyError, geometric_entanglement, von_neumann
from .optimize import OptConfig, OptProblem, maximize_entanglement
from .partition import PartitionError, parse_partition
from .validation import check_state_vector

logger = logging.getLogger("fermient")

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4
ZERO_TOL = 1e-8


class ParseError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def fmt(x) -> str:
    """12 significant digits, locale independent."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".12g")


def read_state_file(path, normalize: bool = False) -> np.ndarray:
    """Load ``{"modes": M, "amplitudes": [{"basis": "0110", "re": x, "im": y}, ...]}``."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
        modes = data["modes"]
        entries = data["amplitudes"]
        if not isinstance(modes, int) or isinstance(modes, bool):
            raise ParseError(f"'modes' must be an integer, got {modes!r}")
        parsed = []
        for entry in entries:
            basis = entry["basis"]
            if not isinstance(basis, str) or set(basis) - {"0", "1"} or not basis:
                raise ParseError(f"bad basis bitstring {basis!r}")
            parsed.append((basis, float(entry.get("re", 0.0)), float(entry.get("im", 0.0))))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"cannot parse state file {path}: {exc}") from None
    if modes < 1:
        raise ValueError(f"'modes' must be positive, got {modes}")
    vec = np.zeros(2**modes, dtype=complex)
    seen = set()
    for basis, re, im in parsed:
        if len(basis) != modes:
            raise ValueError(f"bitstring {basis!r} has length {len(basis)}, expected {modes}")
        if basis in seen:
            raise ValueError(f"basis state {basis} listed twice")
        seen.add(basis)
        vec[parse_bitstring(basis)] = complex(re, im)
    return check_state_vector(vec, normalize=normalize)


def write_state_file(path, vec, tol: float = 0.0) -> None:
    vec = np.asarray(vec, dtype=complex)
    modes = int(vec.size).bit_length() - 1
    entries = [
        {"basis": bitstring(k, modes), "re": float(vec[k].real), "im": float(vec[k].imag)}
        for k in np.flatnonzero(np.abs(vec) > tol)
    ]
    Path(path).write_text(json.dumps({"modes": modes, "amplitudes": entries}, indent=2) + "\n")


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if not isinstance(v, str) else v for v in row])
    return buf.getvalue()


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


def _render(header, rows, fmt_name) -> str:
    if fmt_name == "json":
        return _json_text([dict(zip(header, (float(v) for v in row))) for row in rows])
    return _csv_text(header, rows)


def _state_entries(vec, tol=1e-12):
    modes = int(vec.size).bit_length() - 1
    return [
        {"basis": bitstring(k, modes), "re": float(vec[k].real), "im": float(vec[k].imag)}
        for k in np.flatnonzero(np.abs(vec) > tol)
    ]


def cmd_measure(args) -> int:
    vec = read_state_file(args.state, normalize=args.normalize)
    modes = int(vec.size).bit_length() - 1
    partition = parse_partition(args.partition, modes)
    res = geometric_entanglement(vec, partition)
    report = {
        "modes": modes,
        "partition": partition.spec(),
        "dims": list(partition.dims),
        "tensor_norm": res.tensor_norm,
        "sep_norm": res.sep_norm,
        "E": res.entanglement,
    }
    if partition.m == 2:
        report["S_vn"] = von_neumann(vec, partition)
    if args.format == "csv":
        keys = [k for k in report if k not in ("dims",)]
        row = [report[k] for k in keys]
        _emit(_csv_text(keys, [row]), args.out)
    else:
        _emit(_json_text(report), args.out)
    return EXIT_OK


def _grid(args):
    if args.points < 2:
        raise ValueError(f"points must be >= 2, got {args.points}")
    if args.start > args.stop:
        raise ValueError(f"start {args.start} exceeds stop {args.stop}")
    return np.linspace(args.start, args.stop, args.points)


def dimer_sweep_rows(alphas):
    four = parse_partition("1|2|3|4", 4)
    site = parse_partition("1,2|3,4", 4)
    one_three = parse_partition("1|2,3,4", 4)
    rows = []
    for alpha in alphas:
        vec = models.dimer_ground_state_analytic(float(alpha))
        rows.append(
            [
                float(alpha),
                geometric_entanglement(vec, four).entanglement,
                geometric_entanglement(vec, site).entanglement,
                von_neumann(vec, site),
                geometric_entanglement(vec, one_three).entanglement,
            ]
        )
    return rows


DIMER_HEADER = ["alpha", "E_g", "E_s", "E_vn", "E_13"]
TRIMER_HEADER = ["beta", "E_6", "E_site3", "E_bi_A_BC", "E_vn_A_BC"]


def trimer_sweep_rows(betas, state: str = "odd", sz: float = 0.5):
    rows = []
    for beta in betas:
        params = models.TrimerParams(beta=float(beta))
        if state == "chiral":
            vec = models.trimer_ground_states(params, sz, "chiral")[1][0]
        else:
            odd, even = models.trimer_ground_states(params, sz, "reflection")[1]
            vec = odd if state == "odd" else even
        ent = models.trimer_entanglement(vec)
        rows.append([float(beta)] + [ent[k] for k in TRIMER_HEADER[1:]])
    return rows


def cmd_sweep_dimer(args) -> int:
    alphas = _grid(args)
    if alphas[0] < 1:
        raise ValueError("alpha grid must start at >= 1")
    _emit(_render(DIMER_HEADER, dimer_sweep_rows(alphas), args.format), args.out)
    return EXIT_OK


def cmd_sweep_trimer(args) -> int:
    betas = _grid(args)
    if betas[0] < 0:
        raise ValueError("beta grid must start at >= 0")
    _emit(_render(TRIMER_HEADER, trimer_sweep_rows(betas, args.state, args.sz), args.format), args.out)
    return EXIT_OK


def cmd_maximize(args) -> int:
    problem = OptProblem.from_spec(args.modes, args.particles, args.partition)
    config = OptConfig(args.restarts, args.max_iter, args.tol, args.seed)
    start = time.perf_counter()
    result = maximize_entanglement(problem, config)
    wall = time.perf_counter() - start
    logger.info("maximize finished in %.2f s", wall)
    values = np.array([r.value for r in result.records])
    report = {
        "modes": args.modes,
        "particles": args.particles,
        "partition": problem.partition.spec(),
        "seed": args.seed,
        "restarts": args.restarts,
        "max_iter": args.max_iter,
        "best_E": result.value,
        "state": _state_entries(result.state),
        "restart_stats": {
            "converged": result.n_converged,
            "mean_E": float(values.mean()),
            "min_E": float(values.min()),
            "max_E": float(values.max()),
            "within_1e-6_of_best": int(np.sum(values >= result.value - 1e-6)),
            "values": [float(v) for v in values],
        },
    }
    if args.timing:
        report["wall_time_s"] = wall
    print(f"wall time {wall:.2f} s", file=sys.stderr)
    _emit(_json_text(report), args.out)
    return EXIT_OK


def cmd_perturb(args) -> int:
    state_params = dynamics.TestStateParams(args.alpha, args.beta)
    state = dynamics.test_state(state_params)
    partition = parse_partition(args.partition, 4)
    params = dynamics.PerturbationParams(args.f, args.q, args.Gamma, args.gamma, args.eta)
    H = dynamics.perturbation_hamiltonian(params)
    total = dynamics.entanglement_derivative(state, H, partition, args.step)
    partials = dynamics.parameter_sensitivities(state, partition, params, args.step)
    report = {
        "partition": partition.spec(),
        "alpha": args.alpha,
        "beta": args.beta,
        "E": geometric_entanglement(state, partition).entanglement,
        "dE_deps": total,
        "sensitivities": partials,
        "vanishing": {k: abs(v) <= ZERO_TOL for k, v in partials.items()},
    }
    if args.format == "csv":
        header = ["parameter", "d_dE_deps", "vanishing"]
        rows = [[k, fmt(v), str(abs(v) <= ZERO_TOL).lower()] for k, v in partials.items()]
        rows.append(["total", fmt(total), str(abs(total) <= ZERO_TOL).lower()])
        _emit(_csv_text(header, rows), args.out)
    else:
        _emit(_json_text(report), args.out)
    return EXIT_OK


def cmd_sector_dims(args) -> int:
    ns = [args.particles] if args.particles is not None else range(args.modes + 1)
    rows = [[n, enumerate_sector(args.modes, n).dim] for n in ns]
    _emit(_render(["N", "dim"], rows, args.format), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=["csv", "json"], default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="fermient", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("measure", parents=[common], help="entanglement of a state file")
    p.add_argument("state", help="JSON state file")
    p.add_argument("partition", help='partition such as "1,2|3,4"')
    p.add_argument("--normalize", action="store_true", help="rescale an unnormalised state")
    p.set_defaults(func=cmd_measure, default_format="json")

    for name, func, start, stop, points in (
        ("sweep-dimer", cmd_sweep_dimer, 1.0, 10.0, 19),
        ("sweep-trimer", cmd_sweep_trimer, 0.0, 20.0, 81),
    ):
        p = sub.add_parser(name, parents=[common], help=f"{name.split('-')[1]} entanglement curves")
        p.add_argument("--start", type=float, default=start)
        p.add_argument("--stop", type=float, default=stop)
        p.add_argument("--points", type=int, default=points)
        if name == "sweep-trimer":
            p.add_argument("--state", choices=["odd", "even", "chiral"], default="odd",
                           help="ground-state representative of the degenerate pair")
            p.add_argument("--sz", type=float, default=0.5, choices=[0.5, -0.5])
        p.set_defaults(func=func, default_format="csv")

    p = sub.add_parser("maximize", parents=[common], help="maximise E over a particle sector")
    p.add_argument("modes", type=int)
    p.add_argument("particles", type=int)
    p.add_argument("partition")
    p.add_argument("--restarts", type=int, default=200)
    p.add_argument("--max-iter", type=int, default=2000)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timing", action="store_true", help="include wall time in the JSON report")
    p.set_defaults(func=cmd_maximize, default_format="json")

    p = sub.add_parser("perturb", parents=[common], help="first-order locality check")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    for name in dynamics.PerturbationParams.names():
        p.add_argument(f"--{name}", type=float, default=0.0)
    p.add_argument("--partition", default="1|2|3|4")
    p.add_argument("--step", type=float, default=1e-4)
    p.set_defaults(func=cmd_perturb, default_format="json")

    p = sub.add_parser("sector-dims", parents=[common], help="particle-sector dimensions")
    p.add_argument("modes", type=int)
    p.add_argument("--particles", type=int)
    p.set_defaults(func=cmd_sector_dims, default_format="csv")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ConsistencyError as exc:
        print(f"numeric inconsistency: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (PartitionError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
