"""
Acceptance Sweeps

Seeded random instances checked across modules. The sweep size comes from
PICKROUTE_SUITE_SIZE; scripts/acceptance_sweep.py runs the full-size sweep.

Tests:
1. Frontier DP equals Held-Karp
2. Pruning keeps the optimum and leaves no connecting double run
3. Two cross-aisles never need a doubled aisle
4. Brute force, Held-Karp and DP agree on tiny instances
5. Tour documents are reproducible
"""

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

import numpy as np

from dp import DpOptions, solve_dp
from model import build_graph, generate_instance
from oracle import brute_force_subgraphs, solve_held_karp
from reduce import find_double_runs
from settings import get_settings
from tour import dump_tour, is_tour_subgraph


def random_instance(seed, aisles=(1, 5), cross_aisles=(2, 3), items=(0, 12)):
    """Seeded instance with sizes drawn from inclusive ranges"""
    rng = np.random.default_rng(seed)
    params = {
        'aisles': int(rng.integers(aisles[0], aisles[1] + 1)),
        'cross_aisles': int(rng.integers(cross_aisles[0], cross_aisles[1] + 1)),
        'items': int(rng.integers(items[0], items[1] + 1)),
    }
    return generate_instance(params, seed)


def test_dp_matches_held_karp():
    """Test 1: Exact equality with the Held-Karp oracle"""
    print("\n" + "="*80)
    print("TEST 1: DP vs Held-Karp")
    print("="*80)

    size = get_settings().suite_size
    seeds = list(range(size)) + list(range(10_000, 10_005))
    for seed in seeds:
        tall = seed >= 10_000
        instance = random_instance(seed, cross_aisles=(4, 4) if tall else (2, 3), items=(0, 8) if tall else (0, 12))
        graph = build_graph(instance)
        best = solve_dp(instance)
        reference = solve_held_karp(instance)
        assert best.length == reference.length, f"seed {seed}: dp {best.length}, held-karp {reference.length}"
        assert is_tour_subgraph(graph, best.subgraph).valid
        assert max(best.subgraph.multiplicities, default=0) <= 2

    print(f"[OK] {len(seeds)} instances")


def test_pruning_keeps_optimum():
    """Test 2: Pruned optimum equals the unpruned one"""
    print("\n" + "="*80)
    print("TEST 2: Pruning Keeps the Optimum")
    print("="*80)

    size = get_settings().suite_size
    with_runs = 0
    for seed in range(size):
        instance = random_instance(seed)
        graph = build_graph(instance)
        plain = solve_dp(instance)
        pruned = solve_dp(instance, DpOptions(prune_connecting=True))
        assert pruned.length == plain.length, f"seed {seed}"
        assert not [run for run in find_double_runs(graph, pruned.subgraph) if run.connecting]
        with_runs += any(run.connecting for run in find_double_runs(graph, plain.subgraph))

    print(f"[OK] {size} instances, {with_runs} unpruned optima had connecting runs")


def test_two_cross_aisles_without_doubling():
    """Test 3: n = 2 optimum without configuration V"""
    print("\n" + "="*80)
    print("TEST 3: Two Cross-Aisles")
    print("="*80)

    size = get_settings().suite_size
    for seed in range(size):
        instance = random_instance(seed, cross_aisles=(2, 2))
        single_pass = solve_dp(instance, DpOptions(forbid_double_traversal=True))
        assert single_pass.length == solve_held_karp(instance).length, f"seed {seed}"

    print(f"[OK] {size} instances")


def test_tiny_brute_force():
    """Test 4: Three solvers agree on tiny instances"""
    print("\n" + "="*80)
    print("TEST 4: Tiny Brute Force")
    print("="*80)

    checked = 0
    for seed in range(50):
        instance = random_instance(seed, aisles=(1, 3), cross_aisles=(2, 3), items=(0, 4))
        brute = brute_force_subgraphs(instance)
        assert brute.length == solve_held_karp(instance).length == solve_dp(instance).length, f"seed {seed}"
        checked += 1

    print(f"[OK] {checked} instances")


def test_reproducible_documents():
    """Test 5: Byte-identical tour documents across runs"""
    print("\n" + "="*80)
    print("TEST 5: Reproducible Documents")
    print("="*80)

    for seed in range(10):
        instance = random_instance(seed)
        graph = build_graph(instance)
        first = dump_tour(graph, solve_dp(instance, DpOptions(prune_connecting=True)).subgraph)
        second = dump_tour(graph, solve_dp(instance, DpOptions(prune_connecting=True)).subgraph)
        assert first == second

    print("[OK] 10 instances")


def main():
    """Run all acceptance sweeps"""
    print("\n" + "="*80)
    print("ACCEPTANCE SWEEPS")
    print("="*80)

    tests = [
        ("DP vs Held-Karp", test_dp_matches_held_karp),
        ("Pruning Keeps the Optimum", test_pruning_keeps_optimum),
        ("Two Cross-Aisles", test_two_cross_aisles_without_doubling),
        ("Tiny Brute Force", test_tiny_brute_force),
        ("Reproducible Documents", test_reproducible_documents),
    ]

    passed = 0
    failed = 0

    for name, test_func in tests:
        try:
            test_func()
            passed += 1
            print(f"\n[PASS] {name}")
        except Exception as e:
            print(f"\n[FAIL] {name}: {e}")
            import traceback
            traceback.print_exc()
            failed += 1

    print("\n" + "="*80)
    print("TEST RESULTS")
    print("="*80)
    print(f"Passed: {passed}/{len(tests)}")
    print(f"Failed: {failed}/{len(tests)}")
    print("="*80)


if __name__ == '__main__':
    main()
