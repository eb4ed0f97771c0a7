"""
Command Line
solve | oracle | verify | reduce | gen | bench

Usage:
    python src/cli.py solve --input instances/fig_layout.json --render tour.svg
    python src/cli.py verify --input instances/fig_layout.json --tour tour.json
    python src/cli.py gen --aisles 5 --cross-aisles 4 --items 12 --seed 7 --out inst.json
    python src/cli.py bench --suite suite/ --repeats 3
"""

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd
from rich.console import Console
from rich.table import Table
from tqdm import tqdm

from dp import DpOptions, solve_dp
from errors import EXIT_OK, EXIT_VERIFICATION, PickRouteError, UsageError, exit_code_for
from model import build_graph, dump_instance, generate_instance, instance_digest, load_instance
from oracle import brute_force_subgraphs, solve_held_karp
from reduce import eliminate_connecting_doubles, find_double_runs, format_trace
from render import render_tour_svg
from settings import get_settings
import status
from tour import dump_tour, is_tour_subgraph, load_tour, tour_length


BENCH_COLUMNS = ['instance', 'length_off', 'length_on', 'transitions_off', 'transitions_on',
                 'time_off', 'time_on']
TIMING_COLUMNS = ['time_off', 'time_on']


@dataclass
class RunReport:
    """What a command did; everything except `timings` is deterministic"""

    command: str
    instance_digest: Optional[str] = None
    results: Dict = field(default_factory=dict)
    timings: Dict = field(default_factory=dict)
    exit_code: int = EXIT_OK
    text: str = ''                      # extra stdout block (traces, tables)

    def to_document(self, include_timings: bool = True) -> dict:
        document = {
            'command': self.command,
            'instance_digest': self.instance_digest,
            'results': self.results,
        }
        if include_timings:
            document['timings'] = self.timings
        return document


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='pickroute', description='Exact order-picker routing for multi-block warehouses')
    parser.add_argument('--verbose', action='store_true', help='Print [INFO]/[OK] status lines')
    parser.add_argument('--json', action='store_true', help='Print the run report as JSON')
    commands = parser.add_subparsers(dest='command', required=True, parser_class=_Parser)

    solve = commands.add_parser('solve', help='Minimum-length tour by the frontier DP')
    solve.add_argument('--input', required=True, help='Instance document')
    solve.add_argument('--prune', action=argparse.BooleanOptionalAction, default=True,
                       help='Forbid connecting double runs (default: on)')
    solve.add_argument('--out', help='Write the tour document here')
    solve.add_argument('--render', help='Write an SVG drawing here')

    oracle = commands.add_parser('oracle', help='Held-Karp and (within caps) brute force')
    oracle.add_argument('--input', required=True)

    verify = commands.add_parser('verify', help='Check a tour document')
    verify.add_argument('--input', required=True)
    verify.add_argument('--tour', required=True)

    reduce = commands.add_parser('reduce', help='Eliminate connecting double runs from a tour')
    reduce.add_argument('--input', required=True)
    reduce.add_argument('--tour', required=True)
    reduce.add_argument('--out', help='Write the rewritten tour here')

    gen = commands.add_parser('gen', help='Generate a seeded random instance')
    gen.add_argument('--aisles', type=int, default=4)
    gen.add_argument('--cross-aisles', type=int, default=3)
    gen.add_argument('--items', type=int, default=6)
    gen.add_argument('--seed', type=int, default=0)
    gen.add_argument('--block-min', type=int, default=1)
    gen.add_argument('--block-max', type=int, default=100)
    gen.add_argument('--gap-min', type=int, default=1)
    gen.add_argument('--gap-max', type=int, default=100)
    gen.add_argument('--out', required=True, help='Write the instance here')

    bench = commands.add_parser('bench', help='Solve a suite with pruning off and on')
    bench.add_argument('--suite', required=True, help='Directory of instance documents')
    bench.add_argument('--repeats', type=int, default=1)
    bench.add_argument('--workers', type=int, default=None, help='Process workers (default from settings)')
    bench.add_argument('--out', help='Write the table here (.csv or markdown)')
    bench.add_argument('--no-timings', action='store_true', help='Leave timing columns out of the table')
    return parser


# ============================================================================
# COMMANDS
# ============================================================================

def cmd_solve(args) -> RunReport:
    instance = load_instance(args.input)
    graph = build_graph(instance)
    start = time.perf_counter()
    best = solve_dp(instance, DpOptions(prune_connecting=args.prune))
    elapsed = time.perf_counter() - start

    report = is_tour_subgraph(graph, best.subgraph)
    if not report.valid:
        status.error('solver returned an invalid tour: ' + '; '.join(report.describe(graph)))
    connecting = sum(1 for run in find_double_runs(graph, best.subgraph) if run.connecting)

    if args.out:
        Path(args.out).write_text(dump_tour(graph, best.subgraph), encoding='utf-8')
        status.ok(f"tour written to {args.out}")
    if args.render:
        render_tour_svg(graph, best.subgraph, args.render)
        status.ok(f"drawing written to {args.render}")

    return RunReport(
        command='solve',
        instance_digest=instance_digest(instance),
        results={
            'length': best.length,
            'prune': args.prune,
            'valid': report.valid,
            'connecting_runs': connecting,
            'stats': best.stats.as_dict(),
        },
        timings={'solve_seconds': round(elapsed, 6)},
        exit_code=EXIT_OK if report.valid else EXIT_VERIFICATION,
    )


def cmd_oracle(args) -> RunReport:
    instance = load_instance(args.input)
    settings = get_settings()
    start = time.perf_counter()
    held_karp = solve_held_karp(instance)
    timings = {'held_karp_seconds': round(time.perf_counter() - start, 6)}

    results = {'held_karp': held_karp.length, 'order': list(held_karp.order), 'brute_force': None}
    blocks = instance.aisles * (instance.cross_aisles - 1)
    gaps = (instance.aisles - 1) * instance.cross_aisles
    if blocks <= settings.brute_force_max_blocks and gaps <= settings.brute_force_max_gaps:
        start = time.perf_counter()
        results['brute_force'] = brute_force_subgraphs(instance).length
        timings['brute_force_seconds'] = round(time.perf_counter() - start, 6)
        if results['brute_force'] != held_karp.length:
            status.error(f"oracles disagree: held-karp {held_karp.length}, brute force {results['brute_force']}")
    else:
        status.info("brute force skipped: instance exceeds its caps")

    agree = results['brute_force'] in (None, held_karp.length)
    return RunReport(command='oracle', instance_digest=instance_digest(instance), results=results,
                     timings=timings, exit_code=EXIT_OK if agree else EXIT_VERIFICATION)


def cmd_verify(args) -> RunReport:
    instance = load_instance(args.input)
    graph = build_graph(instance)
    tour = load_tour(graph, args.tour)
    report = is_tour_subgraph(graph, tour)
    return RunReport(
        command='verify',
        instance_digest=instance_digest(instance),
        results={
            'valid': report.valid,
            'length': tour_length(graph, tour),
            'failures': [
                {'condition': f.condition, 'witness': f.witness, 'detail': f.detail}
                for f in report.failures
            ],
        },
        exit_code=EXIT_OK if report.valid else EXIT_VERIFICATION,
        text='\n'.join(report.describe(graph)),
    )


def cmd_reduce(args) -> RunReport:
    instance = load_instance(args.input)
    graph = build_graph(instance)
    tour = load_tour(graph, args.tour)
    start = time.perf_counter()
    result = eliminate_connecting_doubles(graph, tour)
    elapsed = time.perf_counter() - start

    if args.out:
        Path(args.out).write_text(dump_tour(graph, result.tour), encoding='utf-8')
        status.ok(f"rewritten tour written to {args.out}")
    trace = format_trace(result.steps)
    return RunReport(
        command='reduce',
        instance_digest=instance_digest(instance),
        results={
            'length_before': tour_length(graph, tour),
            'length_after': tour_length(graph, result.tour),
            'connecting_before': result.initial_connecting,
            'connecting_after': sum(1 for run in find_double_runs(graph, result.tour) if run.connecting),
            'steps': len(result.steps),
            'cases': [step.case for step in result.steps],
            'trace': trace.splitlines(),
            'cap': result.cap,
        },
        timings={'reduce_seconds': round(elapsed, 6)},
        text=trace.rstrip('\n'),
    )


def cmd_gen(args) -> RunReport:
    params = {
        'aisles': args.aisles,
        'cross_aisles': args.cross_aisles,
        'items': args.items,
        'block_length_range': (args.block_min, args.block_max),
        'gap_width_range': (args.gap_min, args.gap_max),
    }
    instance = generate_instance(params, args.seed)
    Path(args.out).write_text(dump_instance(instance), encoding='utf-8')
    status.ok(f"instance written to {args.out}")
    return RunReport(
        command='gen',
        instance_digest=instance_digest(instance),
        results={'seed': args.seed, 'items': instance.num_items, 'out': args.out},
    )


def _bench_one(path: str, repeats: int) -> dict:
    instance = load_instance(path)
    row = {'instance': Path(path).stem}
    for mode, prune in (('off', False), ('on', True)):
        elapsed = []
        for _ in range(repeats):
            start = time.perf_counter()
            best = solve_dp(instance, DpOptions(prune_connecting=prune))
            elapsed.append(time.perf_counter() - start)
        row[f'length_{mode}'] = best.length
        row[f'transitions_{mode}'] = best.stats.transitions_evaluated
        row[f'time_{mode}'] = round(min(elapsed), 6)
    return row


def bench_table(suite: Path, repeats: int = 1, workers: int = 1) -> pd.DataFrame:
    """One row per instance document in `suite`, sorted by instance name"""
    paths = sorted(str(path) for path in Path(suite).glob('*.json'))
    if workers > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(tqdm(pool.map(_bench_one, paths, [repeats] * len(paths)),
                             total=len(paths), desc='bench', disable=not status.is_verbose()))
    else:
        rows = [_bench_one(path, repeats)
                for path in tqdm(paths, desc='bench', disable=not status.is_verbose())]
    table = pd.DataFrame(rows, columns=BENCH_COLUMNS)
    return table.sort_values('instance', kind='stable').reset_index(drop=True)


def cmd_bench(args) -> RunReport:
    suite = Path(args.suite)
    if not suite.is_dir():
        raise UsageError(f"suite directory not found: {suite}")
    if args.repeats < 1:
        raise UsageError("--repeats must be at least 1")
    workers = args.workers or get_settings().bench_workers

    start = time.perf_counter()
    table = bench_table(suite, args.repeats, workers)
    elapsed = time.perf_counter() - start

    mismatches = int((table['length_off'] != table['length_on']).sum())
    if mismatches:
        status.error(f"{mismatches} instances changed length under pruning")
    shown = table.drop(columns=TIMING_COLUMNS) if args.no_timings else table
    rendered = shown.to_markdown(index=False)
    if args.out:
        out = Path(args.out)
        if out.suffix == '.csv':
            shown.to_csv(out, index=False)
        else:
            out.write_text(rendered + '\n', encoding='utf-8')
        status.ok(f"table written to {out}")

    return RunReport(
        command='bench',
        results={
            'instances': len(table),
            'mismatches': mismatches,
            'transitions_off': int(table['transitions_off'].sum()),
            'transitions_on': int(table['transitions_on'].sum()),
        },
        timings={'bench_seconds': round(elapsed, 6)},
        exit_code=EXIT_OK if mismatches == 0 else EXIT_VERIFICATION,
        text=rendered,
    )


COMMANDS = {
    'solve': cmd_solve,
    'oracle': cmd_oracle,
    'verify': cmd_verify,
    'reduce': cmd_reduce,
    'gen': cmd_gen,
    'bench': cmd_bench,
}


# ============================================================================
# OUTPUT
# ============================================================================

def print_report(report: RunReport, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report.to_document(), indent=2))
        return
    console = Console(highlight=False, soft_wrap=True)
    table = Table(title=report.command, show_header=False)
    table.add_column('field', style='bold')
    table.add_column('value')
    if report.instance_digest:
        table.add_row('instance', report.instance_digest[:16])
    for key, value in report.results.items():
        if key == 'trace':
            continue                    # printed below as report.text
        if isinstance(value, dict):
            value = ', '.join(f"{k}={v}" for k, v in value.items())
        elif isinstance(value, list):
            value = ' '.join(str(v) for v in value) if value else '-'
        table.add_row(key, str(value))
    for key, value in report.timings.items():
        table.add_row(key, f"{value:.3f}")
    console.print(table)
    if report.text:
        console.print(report.text, markup=False)


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command; returns the process exit code"""
    try:
        args = build_parser().parse_args(argv)
        if args.verbose:
            status.set_verbose(True)
        status.banner(f"PICKROUTE {args.command.upper()}")
        report = COMMANDS[args.command](args)
    except (PickRouteError, OSError, ValueError) as exc:
        status.error(str(exc))
        return exit_code_for(exc)

    print_report(report, args.json)
    return report.exit_code


if __name__ == '__main__':
    sys.exit(main())
