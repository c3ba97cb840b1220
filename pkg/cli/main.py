"""
Command Line

`homgrow <command> <action> [inputs] [flags]` for the complex, growth,
vankampen and verify commands. Each action reads its input files through
cli.formats, runs one library operation and prints a plain-text report.

Key Concerns:
1. Exit codes: 0 pass, 1 property failure, 2 input error
2. Reproducibility: reports carry version, seed and input digests, nothing else varies
3. Logging: diagnostics go to stderr so stdout stays a clean report
"""

from typing import Callable, Dict, List, Optional, Sequence, Tuple
from pathlib import Path
import argparse
import logging
import sys

import numpy as np

from cli.config import DEFAULT_SEED, RunConfig, ValidationError
from cli.formats import (
    InputFormatError,
    format_complex,
    parse_complex,
    parse_cover,
    parse_graph_product,
    parse_immersion,
    parse_int_list,
    parse_vertex_map,
)
from cli.reports import Report
from complexes.simplicial import (
    ComplexError,
    SimplicialComplex,
    barycentric_subdivision,
    full_subcomplex,
    is_flag,
    is_no_square,
    link,
    octahedralize,
)
from covers.building import QuotientTarget
from covers.cells import CoverError, from_simplicial, simplicial_cells
from covers.permutation import enumerate_covers, refines
from embedding.immersion import EmbeddingError, Immersion, moment_immersion
from embedding.intersection import intersection_vector, mod2_sum, vankampen_solve
from embedding.octahedral import octahedral_obstruction_reduce, perturbed_octahedral_immersion
from evaluation import instances
from evaluation.suites import SUITES, SuiteContext, run_suites, suite_names
from growth.estimates import graph_product_growth_estimate, verify_graph_product_bound
from growth.mayer_vietoris import (
    mv_inequality_check,
    nerve_relative_betti,
    vertex_star_decomposition,
)
from growth.pinching import mapping_torus_decay
from growth.samples import GrowthError, cover_family, growth_bracket, sample_cover
from homology.linalg import HomologyError

logger = logging.getLogger(__name__)

INPUT_ERRORS = (
    InputFormatError,
    ComplexError,
    CoverError,
    HomologyError,
    GrowthError,
    EmbeddingError,
    ValidationError,
    OSError,
)

ACTIONS = {
    "complex": ["check", "link", "full", "bary", "octa"],
    "growth": ["estimate", "verify-bound", "bracket", "mv", "nerve", "torus"],
    "vankampen": ["obstruct", "solve", "octa-reduce"],
    "verify": ["all"] + list(SUITES),
}


class Inputs:
    """Reads each input file once and records its digest in the report."""

    def __init__(self, config: RunConfig, report: Report):
        self.config = config
        self.report = report

    def text(self, position: int, what: str) -> str:
        if position >= len(self.config.inputs):
            raise InputFormatError(f"{self.config.action} needs a {what} file")
        path = Path(self.config.inputs[position])
        text = path.read_text()
        self.report.add_input(path.name, text)
        return text

    def complex(self, position: int = 0) -> SimplicialComplex:
        return parse_complex(self.text(position, "complex"))

    def immersion(self, L: SimplicialComplex) -> Immersion:
        if self.config.immersion is None:
            return moment_immersion(L, L.dim)
        path = Path(self.config.immersion)
        text = path.read_text()
        self.report.add_input(path.name, text)
        return parse_immersion(text, L)


def _degree(config: RunConfig) -> int:
    if config.k is None:
        raise InputFormatError(f"{config.action} needs --k")
    return config.k


# complex


def cmd_complex(config: RunConfig, report: Report, inputs: Inputs) -> Optional[str]:
    """Returns complex text for the constructions, None after filling the report."""
    K = inputs.complex()
    if config.action == "check":
        flag = is_flag(K)
        report.add("dim", K.dim)
        report.add("f_vector", K.f_vector())
        report.add("euler", K.euler_characteristic())
        report.add("connected", K.is_connected())
        report.add("flag", flag.holds)
        if flag.witness:
            report.add("flag.witness", list(flag.witness))
        if flag.holds:
            square = is_no_square(K)
            report.add("no_square", square.holds)
            if square.witness:
                report.add("no_square.witness", list(square.witness))
        return None
    if config.action == "link":
        if not config.simplex:
            raise InputFormatError("link needs --simplex")
        return format_complex(link(K, config.simplex))
    if config.action == "full":
        if not config.simplex:
            raise InputFormatError("full needs --simplex with the vertex set")
        return format_complex(full_subcomplex(K, config.simplex))
    if config.action == "bary":
        return format_complex(barycentric_subdivision(K))
    return format_complex(octahedralize(K).complex)


# growth


def cmd_growth(config: RunConfig, report: Report, inputs: Inputs):
    field = config.parsed_field()
    report.add("field", field.tag)
    action = config.action

    if action in ("estimate", "verify-bound"):
        spec = parse_graph_product(inputs.text(0, "graph-product"))
        k = _degree(config)
        report.add("k", k)
        report.add("orders", list(spec.order_vector()))
        if action == "estimate":
            estimate = graph_product_growth_estimate(spec, k, field)
            report.add("center", estimate.center)
            report.add("error", estimate.error)
            return
        result = verify_graph_product_bound(spec, QuotientTarget.full(spec), k, field)
        report.add("target", result.target)
        report.add("degree", result.degree)
        report.add("betti", result.betti)
        report.add("value", result.value)
        report.add("center", result.center)
        report.add("error", result.error)
        if result.top_degree:
            report.add("top_bound", result.top_bound)
        report.check("bound_holds", result.holds)
        return

    if action == "bracket":
        X = from_simplicial(inputs.complex())
        k = _degree(config)
        if len(config.inputs) > 1:
            covers = [
                parse_cover(inputs.text(i, "cover"), X) for i in range(1, len(config.inputs))
            ]
            refinements = [
                (finer.identifier, coarser.identifier)
                for finer in covers
                for coarser in covers
                if coarser.degree < finer.degree and refines(finer, coarser)
            ]
            family = f"{len(covers)} covers from files"
        else:
            covers, refinements = cover_family(X, config.max_degree)
            family = f"connected covers of degree <= {config.max_degree}"
        samples = [sample_cover(X, c, k, field) for c in covers]
        bracket = growth_bracket(samples, refinements, family)
        report.add("k", k)
        report.add("family", bracket.family)
        report.add("samples", bracket.sample_count)
        report.add("refinements", len(refinements))
        report.add("observed_min", bracket.observed_min)
        report.add("observed_max", bracket.observed_max)
        report.add("lower", bracket.lower)
        report.add("upper", bracket.upper)
        report.add("directed", bracket.directed)
        report.add("caveat", "finite sample of the cover poset")
        return

    if action == "mv":
        K = inputs.complex()
        vertex = config.vertex or K.vertices[0]
        decomposition = vertex_star_decomposition(K, vertex)
        k = _degree(config)
        covers = enumerate_covers(decomposition.X, config.max_degree, min_degree=1)
        result = mv_inequality_check(
            decomposition.X, decomposition.A1, decomposition.A2, decomposition.B, covers, k, field
        )
        report.add("decomposition", decomposition.label)
        report.add("k", k)
        report.add("covers", len(result.records))
        for record in result.records:
            report.add(f"cover.{record.cover_id}",
                       [record.x, record.a1, record.a2, record.b_k, record.b_k_minus_1])
        report.check("inequalities_hold", result.holds)
        return

    if action == "nerve":
        K = inputs.complex()
        if not config.pieces:
            raise InputFormatError("nerve needs --pieces")
        X = from_simplicial(K)
        pieces = [X.subcomplex(simplicial_cells(K, full_subcomplex(K, p))) for p in config.pieces]
        flags = {frozenset(subset): True for subset in config.acyclic}
        k = _degree(config)
        report.add("k", k)
        report.add("pieces", len(pieces))
        report.add("relative_betti", nerve_relative_betti(X, pieces, flags, k, field))
        return

    K = inputs.complex()
    f = parse_vertex_map(config.vertex_map) if config.vertex_map else {v: v for v in K.vertices}
    degrees = config.degrees or [1, 2, 4, 8]
    k = config.k if config.k is not None else 1
    decay = mapping_torus_decay(K, f, k, field, degrees)
    report.add("k", k)
    report.add("degrees", decay.degrees)
    report.add("values", decay.values)
    report.check("non_increasing", decay.non_increasing)


# vankampen


def cmd_vankampen(config: RunConfig, report: Report, inputs: Inputs):
    L = inputs.complex()
    f = inputs.immersion(L)
    report.add("d", f.d)
    if config.action == "obstruct":
        V = intersection_vector(f, config.threads)
        report.add("pairs", len(V.pairs()))
        report.add("obstruction", mod2_sum(V))
        return
    if config.action == "solve":
        V = intersection_vector(f, config.threads)
        result = vankampen_solve(L, V, config.ring)
        report.add("ring", config.ring)
        report.add("solvable", result.solvable)
        if result.solvable:
            report.add("support", result.solution.support())
            for sigma, rho in sorted(result.solution.cochains.items()):
                for tau, c in sorted(rho.items()):
                    report.add(f"finger.{'-'.join(L.names(sigma))}.{'-'.join(L.names(tau))}", c)
        else:
            report.add("certificate", [f"{'-'.join(L.names(s))}|{'-'.join(L.names(t))}:{c}"
                                       for (s, t), c in result.certificate])
        if result.modulus:
            report.add("modulus", result.modulus)
        report.add("complete", result.complete)
        return

    rng = np.random.default_rng(config.seed)
    X = instances.random_perturbation(rng, L, 2 * f.d)
    special = perturbed_octahedral_immersion(L, f, X)
    result = octahedral_obstruction_reduce(L, f.d, special.vector, special.octa)
    report.add("eps", special.eps)
    report.add("halvings", special.halvings)
    report.add("cohomology_order", result.cohomology_order)
    report.add("scale", result.scale)
    report.add("success", result.success)
    if result.success:
        report.add("support", result.solution.support())
    else:
        report.add("blocked_at", list(result.blocked_at or ()))
        report.add("certificate", [f"{'-'.join(s)}:{c}" for s, c in result.certificate])
        report.add("reason", result.reason)


# verify


def cmd_verify(config: RunConfig, report: Report, inputs: Inputs):
    ctx = SuiteContext(seed=config.seed, trials=config.trials, threads=config.threads)
    ledger = run_suites(suite_names(config.action), ctx)
    for suite, stats in ledger.stats().items():
        report.add(f"suite.{suite}", f"{stats['passed']}/{stats['checks']} {stats['outcome']}")
        if stats["error"]:
            report.add(f"suite.{suite}.error", stats["error"])
        for i, record in enumerate(ledger.failures(suite)):
            report.add(f"suite.{suite}.failure.{i}", f"{record.name} {record.detail}".strip())
    report.check("all_passed", ledger.passed)


COMMANDS: Dict[str, Callable] = {
    "complex": cmd_complex,
    "growth": cmd_growth,
    "vankampen": cmd_vankampen,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homgrow", description="Exact homology growth workbench.")
    commands = parser.add_subparsers(dest="command", required=True)
    for command, actions in ACTIONS.items():
        sub = commands.add_parser(command)
        sub.add_argument("action", choices=actions)
        sub.add_argument("inputs", nargs="*")
        sub.add_argument("--field", default="q", help="q or f<p>")
        sub.add_argument("--k", type=int)
        sub.add_argument("--degrees", help="comma-separated cover degrees")
        sub.add_argument("--max-degree", type=int, default=3)
        sub.add_argument("--ring", default="f2", choices=["z", "f2"])
        sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sub.add_argument("--trials", type=int)
        sub.add_argument("--threads", type=int)
        sub.add_argument("--output")
        sub.add_argument("--verbose", action="store_true")
        sub.add_argument("--simplex", help="comma-separated vertex names")
        sub.add_argument("--vertex")
        sub.add_argument("--map", dest="vertex_map", help="v:w pairs of a simplicial self-map")
        sub.add_argument("--pieces", help="semicolon-separated vertex sets, e.g. a,b;b,c")
        sub.add_argument("--acyclic", help="semicolon-separated piece index sets, e.g. 0;1;0,1")
        sub.add_argument("--immersion", help="coord file; defaults to the moment immersion")
    return parser


def _names(text: Optional[str]) -> Optional[List[str]]:
    return [t for t in text.split(",") if t] if text else None


def config_from_args(args: argparse.Namespace) -> RunConfig:
    pieces = [_names(p) or [] for p in args.pieces.split(";")] if args.pieces else None
    acyclic = [parse_int_list(a) for a in args.acyclic.split(";")] if args.acyclic else []
    return RunConfig(
        command=args.command,
        action=args.action,
        inputs=args.inputs,
        field=args.field,
        k=args.k,
        degrees=parse_int_list(args.degrees) if args.degrees else None,
        max_degree=args.max_degree,
        ring=args.ring,
        seed=args.seed,
        trials=args.trials,
        threads=args.threads,
        output=args.output,
        verbose=args.verbose,
        simplex=_names(args.simplex),
        vertex=args.vertex,
        vertex_map=args.vertex_map,
        pieces=pieces,
        acyclic=acyclic,
        immersion=args.immersion,
    )


def run(config: RunConfig) -> Tuple[str, int]:
    """Execute one configured action; returns (text, exit code)."""
    report = Report(f"{config.command} {config.action}", config.seed)
    inputs = Inputs(config, report)
    produced = COMMANDS[config.command](config, report, inputs)
    if produced is not None:
        return produced, 0
    return report.text(), report.exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = config_from_args(args)
        text, code = run(config)
    except INPUT_ERRORS as e:
        print(f"homgrow: error: {e}", file=sys.stderr)
        return 2
    if config.output:
        Path(config.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
