import argparse
import json
import logging
import os
import sys
import time
from typing import Dict, List, Optional, Tuple

from colorama import init, Fore, Style

from cayley import CosetSpec, GroupSpec, build_cayley, build_coset_graph, cayley_words
from config import FACTOR_SETTINGS, LOGGING, OUTPUT_SETTINGS
from cpcount import check_counts, count_table
from cpgraph import build_cp, cp_factorization, cp_min_schedule, grow_tree
from digraph import Digraph, check_regular, distance_profile
from errors import EXIT_INTERNAL, EXIT_OK, EXIT_VERIFICATION, SpanFactError, UsageError
from factorization import (Factorization, WordList, bfs_tree_words, broadcast_tree_counts, check_covers,
                           decompose_into_factors, is_hierarchical, search_spanning, usage_metrics,
                           verify_spanning)
from mms import build_field, build_mms, lower_bound_audit, mms_factorization, mms_words, verify_relations
from schedule import diam2_schedule, exhaustive_feasible, greedy_schedule, simulate_exchange, verify_schedule
import serialization as io

# Initialize colorama for cross-platform colored output
init()

logger = logging.getLogger(__name__)

CommandResult = Tuple[str, Dict, int]


def setup_logging(verbose: bool = False):
    """Configure root logging once from config.LOGGING."""
    root = logging.getLogger()
    if root.handlers:
        return
    level = logging.DEBUG if verbose else getattr(logging, LOGGING["log_level"], logging.INFO)
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(level if verbose else logging.WARNING)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root.addHandler(handler)
    if LOGGING["enabled"]:
        file_handler = logging.FileHandler(LOGGING["log_file"], encoding="utf-8")
        file_handler.setLevel(level)
        file_handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        root.addHandler(file_handler)
    root.setLevel(level)
    if not LOGGING["log_discrepancies"]:
        for name in ("mms", "cpcount"):
            logging.getLogger(name).setLevel(logging.ERROR)


class _Parser(argparse.ArgumentParser):
    """Argument errors surface as UsageError so they get the error JSON and exit 2."""

    def error(self, message):
        raise UsageError("BadArguments", message)


def _parse_poly(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(c) for c in text.split(",")]
    except ValueError:
        raise UsageError("BadParams", f"--poly takes comma-separated coefficients, got {text!r}")


class SpanFactCLI:
    """Command-line interface for spanning factorizations and schedules."""

    def __init__(self):
        self.out_dir = OUTPUT_SETTINGS["default_out_dir"]
        self.fmt = OUTPUT_SETTINGS["default_format"]
        self.color = OUTPUT_SETTINGS["color"]
        self.manifest: Optional[io.RunManifest] = None
        self.commands = {
            'build': self.cmd_build,
            'factorize': self.cmd_factorize,
            'words': self.cmd_words,
            'schedule': self.cmd_schedule,
            'verify': self.cmd_verify,
            'simulate': self.cmd_simulate,
            'counts': self.cmd_counts,
            'metrics': self.cmd_metrics,
            'relations': self.cmd_relations,
            'export-dot': self.cmd_export_dot,
            'exhaustive': self.cmd_exhaustive,
            'search': self.cmd_search,
            'bounds': self.cmd_bounds,
        }

    def print_colored(self, text: str, color: str = Fore.WHITE):
        """Print colored text."""
        if self.color:
            print(f"{color}{text}{Style.RESET_ALL}")
        else:
            print(text)

    def build_parser(self) -> argparse.ArgumentParser:
        parser = _Parser(prog="spanfact", description="Spanning factorizations and conflict-free exchange")
        parser.add_argument("--format", choices=["text", "json"], default=self.fmt)
        parser.add_argument("--out", default=self.out_dir, help="Artifact directory")
        parser.add_argument("--no-color", action="store_true")
        parser.add_argument("-v", "--verbose", action="store_true")
        sub = parser.add_subparsers(dest="command", parser_class=_Parser)

        build = sub.add_parser("build", help="Construct a graph")
        kinds = build.add_subparsers(dest="kind", parser_class=_Parser)
        cp = kinds.add_parser("cp")
        cp.add_argument("--d", type=int, required=True)
        cp.add_argument("--D", type=int, required=True)
        mms = kinds.add_parser("mms")
        mms.add_argument("--q", type=int, required=True)
        mms.add_argument("--poly", help="Irreducible polynomial, constant term first, e.g. 1,0,1")
        cayley = kinds.add_parser("cayley")
        cayley.add_argument("--group", required=True)
        coset = kinds.add_parser("coset")
        coset.add_argument("--spec", required=True)

        factorize = sub.add_parser("factorize", help="Split a regular digraph into permutations")
        factorize.add_argument("graph")

        words = sub.add_parser("words", help="Produce a word list")
        wkinds = words.add_subparsers(dest="kind", parser_class=_Parser)
        wcp = wkinds.add_parser("cp")
        wcp.add_argument("--d", type=int, required=True)
        wcp.add_argument("--D", type=int, required=True)
        wmms = wkinds.add_parser("mms")
        wmms.add_argument("--q", type=int, required=True)
        wmms.add_argument("--poly")
        wcayley = wkinds.add_parser("cayley")
        wcayley.add_argument("--group", required=True)
        wtree = wkinds.add_parser("tree", help="Breadth-first tree words, F_1 first")
        wtree.add_argument("--factors", required=True)
        wtree.add_argument("--root", type=int, default=0)

        schedule = sub.add_parser("schedule", help="Schedule a word list")
        schedule.add_argument("--words", required=True)
        schedule.add_argument("--method", choices=["greedy", "diam2", "cp-min"], default="greedy")
        schedule.add_argument("--seed", type=int)

        verify = sub.add_parser("verify", help="Check graph, factors, words and schedule")
        for name in ("graph", "factors", "words"):
            verify.add_argument(f"--{name}", required=True)
        verify.add_argument("--schedule")

        simulate = sub.add_parser("simulate", help="Run the universal exchange")
        for name in ("graph", "factors", "words", "schedule"):
            simulate.add_argument(f"--{name}", required=True)

        counts = sub.add_parser("counts", help="Cycle-prefix counting formulas")
        counts.add_argument("family", choices=["cp"])
        counts.add_argument("--d", type=int, required=True)
        counts.add_argument("--D", type=int, required=True)
        counts.add_argument("--k", type=int)
        counts.add_argument("--check", action="store_true")

        metrics = sub.add_parser("metrics", help="Factor usage against the distance-sum bound")
        for name in ("graph", "factors", "words"):
            metrics.add_argument(f"--{name}", required=True)

        relations = sub.add_parser("relations", help="McKay-Miller-Siran automorphism relations")
        relations.add_argument("family", choices=["mms"])
        relations.add_argument("--q", type=int, required=True)
        relations.add_argument("--poly")

        dot = sub.add_parser("export-dot", help="DOT text for a graph")
        dot.add_argument("graph")
        dot.add_argument("--factors")

        exhaustive = sub.add_parser("exhaustive", help="Is there a schedule of makespan T?")
        exhaustive.add_argument("--words", required=True)
        exhaustive.add_argument("--time", type=int, required=True)

        search = sub.add_parser("search", help="Search for a spanning word list")
        search.add_argument("--graph", required=True)
        search.add_argument("--factors", required=True)
        search.add_argument("--budget", type=int, default=FACTOR_SETTINGS["search_budget"])
        search.add_argument("--seed", type=int, default=FACTOR_SETTINGS["default_seed"])

        bounds = sub.add_parser("bounds", help="Lower-bound audit")
        bounds.add_argument("family", choices=["mms"])
        bounds.add_argument("--q", type=int, required=True)
        bounds.add_argument("--poly")
        return parser

    def run(self, argv: List[str]) -> int:
        started = time.perf_counter()
        self.manifest = io.RunManifest(list(argv))
        code = EXIT_OK
        command = None
        try:
            args = self.build_parser().parse_args(argv)
            self.fmt, self.out_dir = args.format, args.out
            self.color = self.color and not args.no_color
            setup_logging(args.verbose)
            command = args.command
            if command is None:
                raise UsageError("BadArguments", f"expected one of: {', '.join(self.commands)}")
            text, payload, code = self.commands[command](args)
            self.emit(text, payload, code)
        except SpanFactError as e:
            code = e.exit_code
            self.emit_error(e.to_dict())
        except Exception as e:
            logger.exception("Unexpected failure")
            code = EXIT_INTERNAL
            self.emit_error({"error": type(e).__name__, "message": str(e), "details": {},
                             "exit_code": EXIT_INTERNAL})
        self.manifest.summary = {"command": command, "exit_code": code, "ok": code == EXIT_OK}
        self.manifest.wall_time = time.perf_counter() - started
        try:
            self.manifest.write(self.out_dir)
        except OSError as e:
            logger.error(f"Could not write manifest: {e}")
        return code

    def emit(self, text: str, payload: Dict, code: int):
        if self.fmt == "json":
            print(json.dumps(payload, indent=OUTPUT_SETTINGS["json_indent"]))
            return
        self.print_colored(text, Fore.GREEN if code == EXIT_OK else Fore.RED)

    def emit_error(self, error: Dict):
        print(json.dumps(error, indent=OUTPUT_SETTINGS["json_indent"]))
        if self.fmt == "text":
            self.print_colored(f"Error: {error['error']}: {error['message']}", Fore.RED)

    def _path(self, name: str) -> str:
        path = os.path.join(self.out_dir, name)
        self.manifest.add_output(path)
        return path

    def _input(self, path: str) -> str:
        self.manifest.add_input(path)
        return path

    def _load_graph(self, path: str) -> Digraph:
        return io.load_graph(self._input(path))

    def _load_factors(self, path: str) -> Factorization:
        return io.load_factorization(self._input(path))

    def _load_words(self, path: str) -> WordList:
        return io.load_words(self._input(path))

    def _field(self, args):
        return build_field(args.q, _parse_poly(args.poly))

    def cmd_build(self, args) -> CommandResult:
        """Build a graph and, when the construction defines one, its factorization."""
        factors: Optional[Factorization] = None
        if args.kind == "cp":
            graph = build_cp(args.d, args.D)
            factors = cp_factorization(args.d, args.D)
            name = f"G({args.d},{args.D})"
        elif args.kind == "mms":
            field = self._field(args)
            graph = build_mms(field)
            factors = mms_factorization(field)
            io.save_json(self._path("field.json"), field.describe())
            name = f"H_{args.q}"
        elif args.kind == "cayley":
            spec = io.load_group(self._input(args.group))
            if not isinstance(spec, GroupSpec):
                raise UsageError("BadParams", "a Cayley graph needs a group file without subgroup or delta")
            graph, factors = build_cayley(spec)
            name = "Cayley graph"
        elif args.kind == "coset":
            spec = io.load_group(self._input(args.spec))
            if not isinstance(spec, CosetSpec):
                spec = CosetSpec(spec, {}, spec.names())
            graph = build_coset_graph(spec)
            name = "Coset graph"
        else:
            raise UsageError("BadArguments", "build needs one of: cp, mms, cayley, coset")

        io.save_graph(self._path("graph.json"), graph)
        if factors is not None:
            io.save_factorization(self._path("factorization.json"), factors)
        profile = distance_profile(graph)
        payload = {"graph": name, "n": graph.n, "m": graph.m, "diameter": profile.diameter,
                   "factorization": factors is not None, "outputs": list(self.manifest.outputs)}
        text = f"{name}: {graph.n} vertices, {graph.m} edges, diameter {profile.diameter}"
        return text, payload, EXIT_OK

    def cmd_factorize(self, args) -> CommandResult:
        graph = self._load_graph(args.graph)
        factors = decompose_into_factors(graph)
        io.save_factorization(self._path("factorization.json"), factors)
        return f"Split into {factors.d} permutations on {factors.n} vertices", \
            {"d": factors.d, "n": factors.n}, EXIT_OK

    def cmd_words(self, args) -> CommandResult:
        if args.kind == "cp":
            wl = grow_tree(args.d, args.D).words
        elif args.kind == "mms":
            wl = mms_words(self._field(args))
        elif args.kind == "cayley":
            spec = io.load_group(self._input(args.group))
            if not isinstance(spec, GroupSpec):
                raise UsageError("BadParams", "cayley words need a group file without subgroup or delta")
            wl = cayley_words(spec)
        elif args.kind == "tree":
            factors = self._load_factors(args.factors)
            wl = bfs_tree_words(factors, list(range(factors.d)), root=args.root)
            if wl is None:
                raise UsageError("Disconnected", "the breadth-first tree misses a vertex", root=args.root)
        else:
            raise UsageError("BadArguments", "words needs one of: cp, mms, cayley, tree")
        io.save_words(self._path("words.json"), wl)
        return f"{wl.n} words over {wl.d} factors, longest {wl.max_length}", \
            {"n": wl.n, "d": wl.d, "max_length": wl.max_length}, EXIT_OK

    def cmd_schedule(self, args) -> CommandResult:
        wl = self._load_words(args.words)
        if args.method == "greedy":
            s = greedy_schedule(wl, seed=args.seed)
        elif args.method == "diam2":
            s = diam2_schedule(wl)
        else:
            tree = grow_tree(wl.d, wl.max_length)
            if tree.words.words != wl.words:
                raise UsageError("WordsMismatch", "cp-min needs the cycle-prefix tree word list",
                                 d=wl.d, D=wl.max_length)
            s = cp_min_schedule(wl.d, wl.max_length, tree)
        check = verify_schedule(wl, s)
        io.save_schedule(self._path("schedule.json"), s)
        payload = {"method": args.method, **check.to_dict()}
        io.save_json(self._path("schedule_metrics.json"), payload)
        text = f"{args.method} schedule: T={check.T}, max count {check.max_count}, minimum {check.is_minimum}"
        return text, payload, EXIT_OK if check.ok else EXIT_INTERNAL

    def cmd_verify(self, args) -> CommandResult:
        graph = self._load_graph(args.graph)
        factors = self._load_factors(args.factors)
        wl = self._load_words(args.words)
        d = check_regular(graph)
        check_covers(graph, factors)
        spanning = verify_spanning(factors, wl)
        payload: Dict = {"regular": d, "covers": True, **spanning.to_dict()}
        ok = spanning.ok
        lines = [f"regular of degree {d}", "factors cover the edges",
                 f"spanning: {'ok' if spanning.ok else 'FAIL ' + str(payload.get('witness'))}"]
        if args.schedule:
            check = verify_schedule(wl, io.load_schedule(self._input(args.schedule)))
            payload.update(check.to_dict())
            ok = ok and check.ok
            lines.append(f"schedule: {'ok' if check.ok else 'FAIL ' + str(check.kind)} (T={check.T})")
        return "\n".join(lines), payload, EXIT_OK if ok else EXIT_VERIFICATION

    def cmd_simulate(self, args) -> CommandResult:
        graph = self._load_graph(args.graph)
        factors = self._load_factors(args.factors)
        wl = self._load_words(args.words)
        s = io.load_schedule(self._input(args.schedule))
        report = simulate_exchange(graph, factors, wl, s)
        payload = report.to_dict()
        io.save_json(self._path("report.json"), payload)
        text = (f"{report.packets_delivered}/{graph.n * (graph.n - 1)} packets, "
                f"{len(report.conflicts)} conflicts, makespan {report.makespan_observed}")
        return text, payload, EXIT_OK if report.ok else EXIT_VERIFICATION

    def cmd_counts(self, args) -> CommandResult:
        tree = grow_tree(args.d, args.D)
        if args.check and args.k is None:
            ok, frame = check_counts(args.d, args.D, tree=tree)
        else:
            frame = count_table(args.d, args.D, k=args.k, tree=tree)
            ok = bool(frame["agree"].all())
        frame.to_csv(self._path("counts.csv"), index=False)
        bad = frame[~frame["agree"]]
        payload = {"d": args.d, "D": args.D, "rows": len(frame), "disagreements": len(bad),
                   "all_agree": ok, "table": json.loads(frame.to_json(orient="records"))}
        io.save_json(self._path("counts.json"), payload)
        if ok:
            text = f"G({args.d},{args.D}): {len(frame)} rows, all formulas agree"
        else:
            text = f"G({args.d},{args.D}): {len(bad)} disagreements\n{bad.to_string(index=False)}"
        return text, payload, EXIT_OK if ok else EXIT_INTERNAL

    def cmd_metrics(self, args) -> CommandResult:
        graph = self._load_graph(args.graph)
        factors = self._load_factors(args.factors)
        wl = self._load_words(args.words)
        d = check_regular(graph)
        check_covers(graph, factors)
        spanning = verify_spanning(factors, wl)
        if not spanning.ok:
            # metrics are defined for spanning lists only
            payload = spanning.to_dict()
            return f"spanning: FAIL {payload.get('witness')}", payload, EXIT_VERIFICATION
        metrics = usage_metrics(wl, distance_profile(graph), d)
        payload = {**metrics.to_dict(), "hierarchical": is_hierarchical(wl),
                   "broadcast_tree_counts": broadcast_tree_counts(wl)}
        io.save_json(self._path("metrics.json"), payload)
        metrics.to_frame().to_csv(self._path("metrics.csv"), index=False)
        text = (f"theta={metrics.theta}, max={metrics.max_count}, avg_ceiling={metrics.avg_ceiling}\n"
                f"balanced={metrics.balanced} short={metrics.short} optimal={metrics.optimal}\n"
                f"{metrics.to_frame().to_string(index=False)}")
        return text, payload, EXIT_OK

    def cmd_relations(self, args) -> CommandResult:
        report = verify_relations(self._field(args))
        payload = report.to_dict()
        io.save_json(self._path("relations.json"), payload)
        lines = []
        for r in report.results:
            line = f"{r.printed:>7}  {r.name}"
            if r.corrected:
                line += f"  -> {r.corrected}: {r.corrected_status}"
            lines.append(line)
        return "\n".join(lines), payload, EXIT_OK if report.ok else EXIT_INTERNAL

    def cmd_export_dot(self, args) -> CommandResult:
        graph = self._load_graph(args.graph)
        factors = self._load_factors(args.factors) if args.factors else None
        source = io.to_dot(graph, factors=factors)
        with open(self._path("graph.dot"), 'w', encoding='utf-8') as f:
            f.write(source)
        return source, {"dot": source}, EXIT_OK

    def cmd_exhaustive(self, args) -> CommandResult:
        wl = self._load_words(args.words)
        s = exhaustive_feasible(wl, args.time)
        payload: Dict = {"T": args.time, "feasible": s is not None}
        if s is not None:
            io.save_schedule(self._path("schedule.json"), s)
        text = f"makespan {args.time}: {'feasible' if s is not None else 'no schedule exists'}"
        return text, payload, EXIT_OK

    def cmd_search(self, args) -> CommandResult:
        graph = self._load_graph(args.graph)
        factors = self._load_factors(args.factors)
        wl = search_spanning(graph, factors, budget=args.budget, seed=args.seed)
        io.save_words(self._path("words.json"), wl)
        return f"spanning word list found ({wl.n} words)", {"n": wl.n, "d": wl.d}, EXIT_OK

    def cmd_bounds(self, args) -> CommandResult:
        audit = lower_bound_audit(self._field(args))
        io.save_json(self._path("bounds.json"), audit)
        text = (f"H_{audit['q']}: BFS bound {audit['oracle']}, diameter-2 bound {audit['exact']}, "
                f"ceil(8q/3) = {audit['printed']}, schedule time {audit['schedule_time']}")
        return text, audit, EXIT_OK if audit["exact_agrees"] else EXIT_INTERNAL


def main(argv: Optional[List[str]] = None):
    """Main entry point."""
    cli = SpanFactCLI()
    sys.exit(cli.run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
