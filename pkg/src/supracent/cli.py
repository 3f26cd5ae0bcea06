"""Command-line front end.

Reads an edge list, builds the layer centrality matrices and the
interlayer coupling, then either solves for each requested coupling
strength or evaluates an asymptotic limit. One table per output (and per
omega) is written to the output directory, plus ``manifest.json``.

Exit status: 0 success, 1 precondition failure, 2 non-convergence,
3 input, parse or configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass

from . import __version__
from .asymptotics import strong_limit, weak_limit
from .coupling import directed_chain_teleport, read_custom, reverse, undirected_chain
from .exceptions import ConvergenceError, DomainError, ParseError, PreconditionError
from .layer_centrality import LayerCentralityKind, build_layer_set
from .output import FORMATS, OUTPUTS, emit, write_atomic
from .supracentrality import METHODS, SupraOperator, check_preconditions, solve
from .temporal_net import IngestOptions, read_edge_list, validate

log = logging.getLogger("supracent")

EXIT_OK, EXIT_PRECONDITION, EXIT_CONVERGENCE, EXIT_INPUT = 0, 1, 2, 3


@dataclass
class RunConfig:
    input: str
    out: str = "supracent-out"
    centrality: str = "pagerank"
    sigma: float = 0.85
    dangling: str = "uniform"
    coupling: str = "undirected-chain"
    gamma: float = 0.01
    omega: tuple = (100.0,)
    asymptotic: str = "none"
    tol: float = 1e-12
    max_iter: int = 10**6
    method: str = "auto"
    format: str = "csv"
    outputs: tuple = OUTPUTS
    nodes: tuple | None = None
    delimiter: str = ","
    duplicates: str = "sum"
    fill_missing_layers: bool = False

    def __post_init__(self):
        if any(w < 0 for w in self.omega):
            raise DomainError("omega values must be nonnegative")
        if self.asymptotic not in ("none", "weak", "strong"):
            raise DomainError(f"unknown asymptotic mode {self.asymptotic!r}")
        bad = [o for o in self.outputs if o not in OUTPUTS]
        if bad:
            raise DomainError(f"unknown output(s) {bad}; choose from {OUTPUTS}")
        if self.coupling in ("directed-chain", "reversed-directed-chain") and not self.gamma > 0:
            raise DomainError("gamma must be positive for teleporting chains")
        if not (self.coupling in ("undirected-chain", "directed-chain", "reversed-directed-chain")
                or self.coupling.startswith("custom:")):
            raise DomainError(f"unknown coupling {self.coupling!r}")


def _comma_floats(text):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _comma_list(text):
    return tuple(x.strip() for x in text.split(",") if x.strip())


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="supracent",
                description="Supracentralities of a discrete-time temporal network.")
    p.add_argument("input", help="edge-list CSV with header layer,src,dst[,weight]")
    p.add_argument("--out", default="supracent-out", help="output directory")
    p.add_argument("--centrality", choices=("pagerank", "eigenvector", "hub", "authority"),
                   default="pagerank")
    p.add_argument("--sigma", type=float, default=0.85, help="PageRank node teleportation")
    p.add_argument("--dangling", choices=("uniform", "self-loop", "error"), default="uniform")
    p.add_argument("--coupling", default="undirected-chain",
                   help="undirected-chain | directed-chain | reversed-directed-chain | custom:<path>")
    p.add_argument("--gamma", type=float, default=0.01, help="layer teleportation weight")
    p.add_argument("--omega", type=_comma_floats, default=(100.0,),
                   help="comma-separated coupling strengths")
    p.add_argument("--asymptotic", choices=("none", "weak", "strong"), default="none")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iter", type=int, default=10**6)
    p.add_argument("--method", choices=METHODS, default="auto")
    p.add_argument("--format", choices=FORMATS, default="csv")
    p.add_argument("--outputs", type=_comma_list, default=OUTPUTS,
                   help=f"comma-separated subset of {','.join(OUTPUTS)}")
    p.add_argument("--nodes", type=_comma_list, default=None,
                   help="comma-separated node labels to keep in node tables")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--duplicates", choices=("sum", "error"), default="sum")
    p.add_argument("--fill-missing-layers", action="store_true")
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def config_from_args(ns):
    return RunConfig(
        input=ns.input, out=ns.out, centrality=ns.centrality, sigma=ns.sigma,
        dangling=ns.dangling.replace("-", "_"), coupling=ns.coupling, gamma=ns.gamma,
        omega=tuple(ns.omega), asymptotic=ns.asymptotic, tol=ns.tol, max_iter=ns.max_iter,
        method=ns.method, format=ns.format, outputs=tuple(ns.outputs),
        nodes=tuple(ns.nodes) if ns.nodes else None, delimiter=ns.delimiter,
        duplicates=ns.duplicates, fill_missing_layers=ns.fill_missing_layers)


def make_coupling(spec, T, gamma):
    if spec == "undirected-chain":
        return undirected_chain(T)
    if spec == "directed-chain":
        return directed_chain_teleport(T, gamma)
    if spec == "reversed-directed-chain":
        return reverse(directed_chain_teleport(T, gamma))
    c = read_custom(spec.split(":", 1)[1])
    if c.n_layers != T:
        raise DomainError(f"custom coupling is {c.n_layers}x{c.n_layers} but the network has {T} layers")
    return c


def _omega_tag(w):
    return format(w, "g")


def run(config):
    """Execute one configured run; returns the process exit status."""
    start = time.perf_counter()
    try:
        net = read_edge_list(config.input, IngestOptions(
            config.delimiter, config.duplicates, config.fill_missing_layers))
        kind = LayerCentralityKind(config.centrality, config.sigma, config.dangling)
        coupling = make_coupling(config.coupling, net.n_layers, config.gamma)
        layer_set = build_layer_set(net, kind)
        if config.nodes:
            missing = [n for n in config.nodes if n not in net.registry]
            if missing:
                raise DomainError(f"unknown node label(s): {', '.join(missing)}")
        os.makedirs(config.out, exist_ok=True)
    except (OSError, ParseError, DomainError) as exc:
        print(f"supracent: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(f"supracent: precondition failure: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION

    report = validate(net)
    runs = []
    ext = config.format

    def write_tables(result, tag):
        files = []
        for output in config.outputs:
            name = f"{output}_{tag}.{ext}"
            data = emit(result, output, config.format, net.labels, net.layer_keys,
                        config.nodes)
            write_atomic(os.path.join(config.out, name), data)
            files.append(name)
        return files

    try:
        if config.asymptotic == "none":
            v0 = None
            for w in config.omega:
                op = SupraOperator(layer_set, coupling, w)
                pre = check_preconditions(op)
                if not pre.ok:
                    raise PreconditionError("; ".join(pre.messages), pre)
                res = solve(layer_set, coupling, w, tol=config.tol, max_iter=config.max_iter,
                            method=config.method, v0=v0)
                v0 = res.vector
                files = write_tables(res, f"omega={_omega_tag(w)}")
                runs.append({"omega": w, "lambda_max": res.eigenvalue,
                             "iterations": res.iterations, "residual": res.residual,
                             "method": res.method, "files": files})
        else:
            limit = (weak_limit if config.asymptotic == "weak" else strong_limit)(layer_set, coupling)
            files = write_tables(limit, config.asymptotic)
            entry = {"asymptotic": config.asymptotic, "files": files}
            if config.asymptotic == "weak":
                entry.update(eigenvalue=limit.eigenvalue, top_layers=[net.layer_keys[t] for t in limit.P])
            else:
                entry.update(coupling_eigenvalue=limit.coupling_eigenvalue,
                             aggregate_eigenvalue=limit.aggregate_eigenvalue)
            runs.append(entry)
    except PreconditionError as exc:
        print(f"supracent: precondition failure: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ConvergenceError as exc:
        print(f"supracent: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"supracent: {exc}", file=sys.stderr)
        return EXIT_INPUT

    manifest = {
        "version": __version__,
        "config": asdict(config),
        "network": {"n_nodes": net.n_nodes, "n_layers": net.n_layers,
                    "layer_keys": list(net.layer_keys),
                    "edge_counts": list(report.edge_counts),
                    "zero_out_degree_counts": list(report.zero_out_degree_counts),
                    "self_loop_counts": list(report.self_loop_counts),
                    "aggregate_strongly_connected": report.aggregate_strongly_connected},
        "runs": runs,
        "wall_time_s": time.perf_counter() - start,
    }
    try:
        write_atomic(os.path.join(config.out, "manifest.json"),
                     (json.dumps(manifest, indent=2, default=str) + "\n").encode("utf-8"))
    except OSError as exc:
        print(f"supracent: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def main(argv=None):
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = config_from_args(ns)
    except DomainError as exc:
        print(f"supracent: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
