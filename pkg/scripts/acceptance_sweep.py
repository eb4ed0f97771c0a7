"""
Full-size acceptance sweep
Frontier DP vs oracles, pruning, connecting double elimination and the
validator, on seeded random instances. Takes several minutes.

Usage:
    python scripts/acceptance_sweep.py
"""

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

import json
import time

import numpy as np
from tqdm import tqdm

from dp import DpOptions, solve_dp
from errors import InvalidTourError, PickRouteError
from model import build_graph, generate_instance
from oracle import brute_force_subgraphs, solve_held_karp
from reduce import eliminate_connecting_doubles, find_double_runs
from tour import TourSubgraph, extract_walk, is_tour_subgraph, subgraph_from_walk, tour_length

ORACLE_INSTANCES = 500
TWO_CROSS_AISLE_INSTANCES = 200
PADDED_TOURS = 100
TINY_INSTANCES = 50
RANDOM_MAPS = 1000
CASES = {'0.1', '0.2', '1', '2', '3i', '3ii', '3iii'}


def random_instance(seed, aisles=(1, 5), cross_aisles=(2, 4), items=(0, 12)):
    rng = np.random.default_rng(seed)
    params = {
        'aisles': int(rng.integers(aisles[0], aisles[1] + 1)),
        'cross_aisles': int(rng.integers(cross_aisles[0], cross_aisles[1] + 1)),
        'items': int(rng.integers(items[0], items[1] + 1)),
    }
    return generate_instance(params, seed)


def elimination_problems(graph, tour):
    """Empty list when elimination behaves as required on this tour"""
    result = eliminate_connecting_doubles(graph, tour)
    problems = []
    if any(run.connecting for run in find_double_runs(graph, result.tour)):
        problems.append('connecting run left')
    if tour_length(graph, result.tour) > tour_length(graph, tour):
        problems.append('length grew')
    for step in result.steps:
        if step.case not in CASES:
            problems.append(f'unknown case {step.case}')
        if step.case != '0.1' and step.length_after != step.length_before:
            problems.append(f'step {step.index} changed length')
        if not step.potential_decreased and not step.mirrored:
            problems.append(f'step {step.index} did not lower the potential')
    return result, problems


def padded(graph, tour, rng):
    degree = tour.degrees(graph)
    deltas = {}
    for aisle in range(1, graph.aisles + 1):
        for block in range(1, graph.cross_aisles):
            edges = graph.block_edges(aisle, block)
            ends = (graph.intersection(aisle, block), graph.intersection(aisle, block + 1))
            if all(tour[e] == 0 for e in edges) and all(degree[v] > 0 for v in ends) and rng.random() < 0.7:
                for e in edges:
                    deltas[e] = 2
    return tour.with_changes(deltas)


print("="*80)
print("ACCEPTANCE SWEEP")
print("="*80)

start_time = time.time()
summary = {}

# ----------------------------------------------------------------------------
print(f"\n[1/5] DP vs Held-Karp, pruning, elimination on {ORACLE_INSTANCES} instances")
mismatches, prune_mismatches, elimination_failures = [], [], []
tours_with_runs = 0
for seed in tqdm(range(ORACLE_INSTANCES), desc='oracle'):
    instance = random_instance(seed)
    graph = build_graph(instance)
    plain = solve_dp(instance)
    reference = solve_held_karp(instance)
    if plain.length != reference.length:
        mismatches.append({'seed': seed, 'dp': plain.length, 'held_karp': reference.length})
    pruned = solve_dp(instance, DpOptions(prune_connecting=True))
    if pruned.length != plain.length or any(r.connecting for r in find_double_runs(graph, pruned.subgraph)):
        prune_mismatches.append({'seed': seed, 'plain': plain.length, 'pruned': pruned.length})
    if any(r.connecting for r in find_double_runs(graph, plain.subgraph)):
        tours_with_runs += 1
        try:
            _, problems = elimination_problems(graph, plain.subgraph)
        except PickRouteError as e:
            problems = [str(e)]
        if problems:
            elimination_failures.append({'seed': seed, 'tour': 'optimal', 'problems': problems})

summary['dp_vs_held_karp'] = {'instances': ORACLE_INSTANCES, 'mismatches': mismatches}
summary['pruning'] = {'instances': ORACLE_INSTANCES, 'mismatches': prune_mismatches}
print(f"  [{'OK' if not mismatches else 'ERROR'}] {len(mismatches)} DP/Held-Karp mismatches")
print(f"  [{'OK' if not prune_mismatches else 'ERROR'}] {len(prune_mismatches)} pruning mismatches")

# ----------------------------------------------------------------------------
print(f"\n[2/5] Elimination on {PADDED_TOURS} padded tours")
padded_count = 0
seed = 20_000
with tqdm(total=PADDED_TOURS, desc='padded') as bar:
    while padded_count < PADDED_TOURS:
        rng = np.random.default_rng(seed)
        instance = random_instance(seed, aisles=(2, 5), items=(1, 12))
        graph = build_graph(instance)
        tour = padded(graph, solve_dp(instance).subgraph, rng)
        if any(r.connecting for r in find_double_runs(graph, tour)):
            try:
                _, problems = elimination_problems(graph, tour)
            except PickRouteError as e:
                problems = [str(e)]
            if problems:
                elimination_failures.append({'seed': seed, 'tour': 'padded', 'problems': problems})
            padded_count += 1
            bar.update(1)
        seed += 1

summary['elimination'] = {'optimal_tours': tours_with_runs, 'padded_tours': padded_count,
                          'failures': elimination_failures}
print(f"  [{'OK' if not elimination_failures else 'WARN'}] {len(elimination_failures)} tours with problems "
      f"({tours_with_runs} optimal, {padded_count} padded)")

# ----------------------------------------------------------------------------
print(f"\n[3/5] Two cross-aisles without doubled aisles on {TWO_CROSS_AISLE_INSTANCES} instances")
two_mismatches = []
for seed in tqdm(range(TWO_CROSS_AISLE_INSTANCES), desc='n=2'):
    instance = random_instance(seed, cross_aisles=(2, 2))
    single_pass = solve_dp(instance, DpOptions(forbid_double_traversal=True)).length
    reference = solve_held_karp(instance).length
    if single_pass != reference:
        two_mismatches.append({'seed': seed, 'dp': single_pass, 'held_karp': reference})
summary['two_cross_aisles'] = {'instances': TWO_CROSS_AISLE_INSTANCES, 'mismatches': two_mismatches}
print(f"  [{'OK' if not two_mismatches else 'ERROR'}] {len(two_mismatches)} mismatches")

# ----------------------------------------------------------------------------
print(f"\n[4/5] Brute force on {TINY_INSTANCES} tiny instances")
tiny_mismatches = []
for seed in tqdm(range(TINY_INSTANCES), desc='tiny'):
    instance = random_instance(seed, aisles=(1, 3), cross_aisles=(2, 3), items=(0, 4))
    lengths = {
        'brute_force': brute_force_subgraphs(instance).length,
        'held_karp': solve_held_karp(instance).length,
        'dp': solve_dp(instance).length,
    }
    if len(set(lengths.values())) != 1:
        tiny_mismatches.append({'seed': seed, **lengths})
summary['tiny_brute_force'] = {'instances': TINY_INSTANCES, 'mismatches': tiny_mismatches}
print(f"  [{'OK' if not tiny_mismatches else 'ERROR'}] {len(tiny_mismatches)} mismatches")

# ----------------------------------------------------------------------------
print(f"\n[5/5] Validator vs Euler walks on {RANDOM_MAPS} random multiplicity maps")
disagreements = []
valid_maps = 0
for seed in tqdm(range(RANDOM_MAPS), desc='maps'):
    rng = np.random.default_rng(seed)
    instance = random_instance(seed, aisles=(1, 3), cross_aisles=(2, 3), items=(0, 3))
    graph = build_graph(instance)
    tour = TourSubgraph(tuple(int(w) for w in rng.choice([0, 0, 0, 1, 2], size=graph.num_edges)))
    valid = is_tour_subgraph(graph, tour).valid
    try:
        walk = extract_walk(graph, tour)
        walked = subgraph_from_walk(graph, walk.vertices) == tour
    except InvalidTourError:
        walked = False
    valid_maps += valid
    if valid != walked:
        disagreements.append(seed)
summary['validator'] = {'maps': RANDOM_MAPS, 'valid': valid_maps, 'disagreements': disagreements}
print(f"  [{'OK' if not disagreements else 'ERROR'}] {len(disagreements)} disagreements ({valid_maps} valid maps)")

# ----------------------------------------------------------------------------
total_elapsed = time.time() - start_time

print("\n" + "="*80)
print("SWEEP COMPLETE")
print("="*80)
print(f"\nTotal time: {total_elapsed/60:.1f} minutes")

output_file = Path(__file__).parent.parent / 'outputs' / 'acceptance_sweep.json'
output_file.parent.mkdir(parents=True, exist_ok=True)
summary['timestamp'] = time.strftime('%Y-%m-%d %H:%M:%S')
summary['total_elapsed_minutes'] = round(total_elapsed / 60, 2)

with open(output_file, 'w') as f:
    json.dump(summary, f, indent=2)

print(f"\n[OK] Results saved to: {output_file}")
print("\n" + "="*80)
