"""
Frontier DP Tests

Tests:
1. Frontier states for two cross-aisles
2. Non-crossing partitions
3. Small instances with known optima
4. Pruning of connecting double runs
5. Cross-aisle cap
6. Reproducible tie-breaking
7. State sets against a direct enumeration
8. Frontier components and agreement with Held-Karp
"""

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from itertools import combinations, product

import pytest

from configs import VerticalConfig
from dp import EVEN, ODD, ZERO, DpOptions, FrontierState, FrontierSweep, enumerate_states, is_non_crossing, solve_dp
from errors import CapacityError, PreconditionError
from model import build_graph, build_instance, generate_instance, load_instance
from oracle import solve_held_karp
from reduce import find_double_runs
from tour import dump_tour, is_tour_subgraph, tour_length


INSTANCES = os.path.join(os.path.dirname(__file__), '..', 'instances')


def test_frontier_states():
    """Test 1: Seven admissible states for n = 2"""
    print("\n" + "="*80)
    print("TEST 1: Frontier States")
    print("="*80)

    states = enumerate_states(2)
    assert len(states) == 7
    assert states == sorted(states)
    assert FrontierState.initial(2) in states
    assert FrontierState.accepting(2) in states
    assert FrontierState((ODD, ODD), ((0, 1),), False) in states
    assert FrontierState((ODD, ODD), ((0,), (1,)), False) not in states
    assert FrontierState((EVEN, EVEN), ((0,), (1,)), False) in states
    assert FrontierState((ODD, EVEN), ((0, 1),), False) not in states
    assert FrontierState((EVEN, ZERO, EVEN), ((0, 2),), False).ports == (0, 2)

    for state in enumerate_states(3):
        assert is_non_crossing(state.partition)
        if state.closed:
            assert not state.ports

    with pytest.raises(PreconditionError):
        enumerate_states(1)

    print(f"[OK] 7 states for n=2, {len(enumerate_states(3))} for n=3")


def test_non_crossing():
    """Test 2: Crossing partitions are rejected"""
    print("\n" + "="*80)
    print("TEST 2: Non-Crossing Partitions")
    print("="*80)

    assert not is_non_crossing(((0, 2), (1, 3)))
    assert is_non_crossing(((0, 3), (1, 2)))
    assert is_non_crossing(((0, 1), (2, 3)))
    assert is_non_crossing(((0, 2), (1,), (3,)))
    assert not is_non_crossing(((0, 2, 4), (1, 3)))

    print("[OK] nested and adjacent blocks accepted")


def test_known_optima():
    """Test 3: Empty pick list, two items, one item on the depot aisle"""
    print("\n" + "="*80)
    print("TEST 3: Known Optima")
    print("="*80)

    empty = solve_dp(load_instance(os.path.join(INSTANCES, 'empty.json')))
    assert empty.length == 0
    assert empty.subgraph.is_empty()

    instance = load_instance(os.path.join(INSTANCES, 'two_items.json'))
    graph = build_graph(instance)
    best = solve_dp(instance)
    assert best.length == 30
    assert is_tour_subgraph(graph, best.subgraph).valid
    assert tour_length(graph, best.subgraph) == 30
    assert max(best.subgraph.multiplicities) <= 2
    assert [step.aisle for step in best.plan] == [1, 2]

    one = build_instance({'aisles': 3, 'cross_aisles': 2, 'block_lengths': [10], 'gap_widths': [5, 5],
                          'depot': {'aisle': 2, 'cross_aisle': 1},
                          'items': [{'aisle': 2, 'block': 1, 'offset': 3}]})
    lone = solve_dp(one)
    assert lone.length == 6
    assert lone.stats.aisles_swept == 1
    assert lone.plan[0].configs == (VerticalConfig.III,)

    print("[OK] 0, 30 and 6 reproduced")


def test_pruning():
    """Test 4: Pruning keeps the length and removes connecting runs"""
    print("\n" + "="*80)
    print("TEST 4: Pruning")
    print("="*80)

    for seed in range(20):
        instance = generate_instance({'aisles': 4, 'cross_aisles': 3, 'items': 7}, seed)
        graph = build_graph(instance)
        plain = solve_dp(instance)
        pruned = solve_dp(instance, DpOptions(prune_connecting=True))

        assert pruned.length == plain.length
        assert is_tour_subgraph(graph, pruned.subgraph).valid
        assert not [run for run in find_double_runs(graph, pruned.subgraph) if run.connecting]
        assert pruned.stats.transitions_evaluated <= plain.stats.transitions_evaluated

    print("[OK] 20 instances, equal lengths, no connecting runs")


def test_cross_aisle_cap():
    """Test 5: Too many cross-aisles raise CapacityError"""
    print("\n" + "="*80)
    print("TEST 5: Cross-Aisle Cap")
    print("="*80)

    tall = build_instance({'aisles': 2, 'cross_aisles': 7, 'block_lengths': [5] * 6, 'gap_widths': [3],
                           'depot': {'aisle': 1, 'cross_aisle': 1},
                           'items': [{'aisle': 2, 'block': 6, 'offset': 2}]})
    with pytest.raises(CapacityError):
        solve_dp(tall)
    with pytest.raises(CapacityError):
        solve_dp(load_instance(os.path.join(INSTANCES, 'fig_layout.json')), DpOptions(max_cross_aisles=2))

    print("[OK] cap enforced")


def test_reproducible():
    """Test 6: Two runs give the same tour document"""
    print("\n" + "="*80)
    print("TEST 6: Reproducible Ties")
    print("="*80)

    instance = load_instance(os.path.join(INSTANCES, 'fig_layout.json'))
    graph = build_graph(instance)
    first = solve_dp(instance, DpOptions(prune_connecting=True))
    second = solve_dp(instance, DpOptions(prune_connecting=True))
    assert dump_tour(graph, first.subgraph) == dump_tour(graph, second.subgraph)
    assert first.plan == second.plan
    assert first.stats.as_dict() == second.stats.as_dict()
    assert first.length <= 110

    print(f"[OK] length {first.length} twice")


def growth_strings(size):
    """Restricted growth strings: block labels of every set partition of `size` elements"""
    if size == 0:
        yield ()
        return
    for prefix in growth_strings(size - 1):
        for label in range(max(prefix, default=-1) + 2):
            yield prefix + (label,)


def states_by_definition(n):
    """(h, partition, closed) triples written out from the admissibility rules"""
    found = {((ZERO,) * n, (), True)}
    for h in product((ZERO, ODD, EVEN), repeat=n):
        ports = [row for row in range(n) if h[row] != ZERO]
        for labels in growth_strings(len(ports)):
            label_of = dict(zip(ports, labels))
            crossing = any(label_of[a] == label_of[c] != label_of[b] == label_of[d]
                           for a, b, c, d in combinations(ports, 4))
            if crossing:
                continue
            blocks = {}
            for row in ports:
                blocks.setdefault(label_of[row], []).append(row)
            if any(sum(h[row] == ODD for row in block) % 2 for block in blocks.values()):
                continue
            partition = tuple(sorted(tuple(block) for block in blocks.values()))
            found.add((h, partition, False))
    return found


def test_state_counts():
    """Test 7: State sets match a direct enumeration for n = 2..4"""
    print("\n" + "="*80)
    print("TEST 7: State Counts")
    print("="*80)

    counts = {}
    for n in (2, 3, 4):
        states = enumerate_states(n)
        assert len(states) == len(set(states))
        assert {(s.h, s.partition, s.closed) for s in states} == states_by_definition(n)
        counts[n] = len(states)
    assert counts[2] == 7

    print(f"[OK] counts {counts}")


def test_frontier_components():
    """Test 8: Joined rows group into components; optima unchanged against Held-Karp"""
    print("\n" + "="*80)
    print("TEST 8: Frontier Components")
    print("="*80)

    column = build_instance({'aisles': 1, 'cross_aisles': 4, 'block_lengths': [5, 5, 5], 'gap_widths': [],
                             'depot': {'aisle': 1, 'cross_aisle': 1}, 'items': []})
    sweep = FrontierSweep(column)
    everywhere = (True, True, True, True)
    assert sweep._base_classes((), everywhere, (False, False, False)) == ((0,), (1,), (2,), (3,))
    assert sweep._base_classes(((0, 2),), everywhere, (False, False, True)) == ((0, 2, 3), (1,))
    assert sweep._base_classes(((0, 3),), (True, False, True, True), (False, True, False)) == ((0, 3), (2,))
    assert sweep._base_classes(((1, 2),), everywhere, (True, False, True)) == ((0, 1, 2, 3),)

    for seed in range(12):
        instance = generate_instance({'aisles': 1 + seed % 3, 'cross_aisles': 2 + seed % 2, 'items': 1 + seed % 4},
                                     seed)
        assert solve_dp(instance).length == solve_held_karp(instance).length, f"seed {seed}"

    print("[OK] components grouped, 12 optima agree")


def main():
    """Run all frontier DP tests"""
    print("\n" + "="*80)
    print("FRONTIER DP TESTS")
    print("="*80)

    tests = [
        ("Frontier States", test_frontier_states),
        ("Non-Crossing Partitions", test_non_crossing),
        ("Known Optima", test_known_optima),
        ("Pruning", test_pruning),
        ("Cross-Aisle Cap", test_cross_aisle_cap),
        ("Reproducible Ties", test_reproducible),
        ("State Counts", test_state_counts),
        ("Frontier Components", test_frontier_components),
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
