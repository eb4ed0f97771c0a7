"""
Tour Subgraph Tests

Tests:
1. The layout sample's reference tour is valid with length 110
2. Each violated condition is reported with a witness
3. Empty pick lists and the depot
4. Euler walk extraction
5. Tour documents
6. Validator agrees with an independent closed-walk check on random multiplicities
7. Length is additive, doubling an edge keeps parity
"""

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

import networkx as nx
import numpy as np
import pytest

from errors import InvalidTourError, PreconditionError, TourDocumentError
from model import build_graph, generate_instance, load_instance
from tour import (CONNECTED, EVEN_DEGREE, ITEMS_COVERED, TourSubgraph, dump_tour, extract_walk,
                  is_tour_subgraph, parse_tour, require_tour_subgraph, subgraph_from_walk, tour_length)


INSTANCES = os.path.join(os.path.dirname(__file__), '..', 'instances')

# vertex ids of fig_layout.json, aisle by aisle bottom to top
FIG_DOUBLED = [(3, 2), (2, 1), (1, 0), (0, 5), (13, 14), (11, 10)]
FIG_CYCLE = [5, 6, 7, 8, 9, 14, 19, 18, 17, 16, 15, 10, 5]


def tour_from_pairs(graph, pairs):
    mults = {}
    for (u, v), mult in pairs.items():
        edge_id = graph.edge_between(u, v)
        assert edge_id is not None, f"{u}-{v} is not an edge"
        mults[edge_id] = mults.get(edge_id, 0) + mult
    return TourSubgraph.from_mapping(graph, mults)


def fig_tour(graph):
    pairs = {pair: 2 for pair in FIG_DOUBLED}
    for u, v in zip(FIG_CYCLE, FIG_CYCLE[1:]):
        pairs[(u, v)] = 1
    return tour_from_pairs(graph, pairs)


def test_reference_tour():
    """Test 1: Reference tour of the layout sample"""
    print("\n" + "="*80)
    print("TEST 1: Reference Tour")
    print("="*80)

    graph = build_graph(load_instance(os.path.join(INSTANCES, 'fig_layout.json')))
    tour = fig_tour(graph)
    report = is_tour_subgraph(graph, tour)
    assert report.valid, report.describe(graph)
    assert tour_length(graph, tour) == 110
    assert len(tour.nonzero_edges()) == 18
    assert int(tour.degrees(graph).sum()) == 2 * (2 * 6 + 12)
    assert tour_length(graph, tour + tour) == 220

    print("[OK] valid, length 110")


def test_violations_have_witnesses():
    """Test 2: Uncovered item, odd degree and detached component"""
    print("\n" + "="*80)
    print("TEST 2: Violations")
    print("="*80)

    graph = build_graph(load_instance(os.path.join(INSTANCES, 'fig_layout.json')))
    tour = fig_tour(graph)

    # drop the doubled bottom return to item 5 (vertex 11)
    uncovered = tour.with_changes({graph.edge_between(10, 11): -2})
    report = is_tour_subgraph(graph, uncovered)
    assert report.conditions() == [ITEMS_COVERED]
    assert report.failures[0].witness == 11

    odd = tour.with_changes({graph.edge_between(0, 5): -1})
    report = is_tour_subgraph(graph, odd)
    assert report.conditions() == [EVEN_DEGREE]
    assert {failure.witness for failure in report.failures} == {0, 5}
    with pytest.raises(InvalidTourError) as caught:
        require_tour_subgraph(graph, odd)
    assert caught.value.report == report

    small = build_graph(load_instance(os.path.join(INSTANCES, 'two_items.json')))
    split = tour_from_pairs(small, {(0, 1): 2, (4, 5): 2})
    report = is_tour_subgraph(small, split)
    assert report.conditions() == [CONNECTED]
    assert report.failures[0].witness == 4
    assert 'connected at vertex 4 p2' in report.describe(small)[0]

    with pytest.raises(PreconditionError):
        TourSubgraph((0, -1))

    print("[OK] each condition reported with its witness")


def test_empty_pick_list():
    """Test 3: Empty tours and the depot"""
    print("\n" + "="*80)
    print("TEST 3: Empty Pick List")
    print("="*80)

    empty_graph = build_graph(load_instance(os.path.join(INSTANCES, 'empty.json')))
    assert is_tour_subgraph(empty_graph, TourSubgraph.empty(empty_graph)).valid
    walk = extract_walk(empty_graph, TourSubgraph.empty(empty_graph))
    assert walk.vertices == (2,)
    assert walk.length == 0

    # a loop in aisle 1 that never reaches the depot v(2,1)
    stray = tour_from_pairs(empty_graph, {(0, 1): 2})
    report = is_tour_subgraph(empty_graph, stray)
    assert report.conditions() == [ITEMS_COVERED]
    assert report.failures[0].witness == 2

    small = build_graph(load_instance(os.path.join(INSTANCES, 'two_items.json')))
    report = is_tour_subgraph(small, TourSubgraph.empty(small))
    assert not report.valid
    assert {failure.witness for failure in report.failures} == {0, 1, 4}

    print("[OK] empty tour valid only without items")


def test_extract_walk():
    """Test 4: Euler walk from the depot"""
    print("\n" + "="*80)
    print("TEST 4: Walk Extraction")
    print("="*80)

    graph = build_graph(load_instance(os.path.join(INSTANCES, 'fig_layout.json')))
    tour = fig_tour(graph)
    walk = extract_walk(graph, tour)
    assert walk.vertices[0] == walk.vertices[-1] == graph.depot
    assert walk.length == 110
    assert len(walk.vertices) - 1 == 24
    assert subgraph_from_walk(graph, walk.vertices) == tour
    assert extract_walk(graph, tour) == walk

    with pytest.raises(InvalidTourError):
        extract_walk(graph, tour.with_changes({graph.edge_between(0, 5): -1}))
    with pytest.raises(PreconditionError):
        subgraph_from_walk(graph, [0, 2])

    print(f"[OK] {len(walk.vertices) - 1} edges walked")


def test_tour_documents():
    """Test 5: Tour documents and their errors"""
    print("\n" + "="*80)
    print("TEST 5: Tour Documents")
    print("="*80)

    graph = build_graph(load_instance(os.path.join(INSTANCES, 'fig_layout.json')))
    tour = fig_tour(graph)
    text = dump_tour(graph, tour)
    assert parse_tour(graph, text) == tour
    assert '"from": 0' in text and '"mult": 2' in text

    reversed_pair = parse_tour(graph, '{"edges": [{"from": 5, "to": 0, "mult": 2}]}')
    assert reversed_pair[graph.edge_between(0, 5)] == 2

    bad_documents = [
        '{"edges": [{"from": 0, "to": 99, "mult": 1}]}',
        '{"edges": [{"from": 0, "to": 2, "mult": 1}]}',
        '{"edges": [{"from": 0, "to": 1, "mult": 1}, {"from": 1, "to": 0, "mult": 1}]}',
        '{"edges": [{"from": 0, "to": 1, "mult": -1}]}',
        '{"edges": [{"source": 0, "target": 1, "mult": 1}]}',
        '{"edges": [{"from": 0, "to": 1, "mult": 1, "colour": "red"}]}',
        '{"edges": ',
    ]
    for document in bad_documents:
        with pytest.raises(TourDocumentError):
            parse_tour(graph, document)

    print("[OK] documents parsed, bad ones rejected")


def closed_walk_exists(graph, tour):
    """Decided by networkx on the expanded multigraph, without the validator"""
    walked = nx.MultiGraph()
    for edge in graph.edges:
        walked.add_edges_from([(edge.u, edge.v)] * tour[edge.id])
    if walked.number_of_edges() == 0:
        return graph.instance.num_items == 0, walked
    required = {graph.depot, *graph.item_vertex_ids}
    return nx.is_eulerian(walked) and required <= set(walked.nodes), walked


def random_map(seed):
    rng = np.random.default_rng(seed)
    instance = generate_instance({'aisles': int(rng.integers(1, 4)), 'cross_aisles': int(rng.integers(2, 4)),
                                  'items': int(rng.integers(0, 3)), 'block_length_range': (1, 9),
                                  'gap_width_range': (1, 9)}, seed)
    graph = build_graph(instance)
    weights = rng.choice([0, 0, 0, 1, 2], size=graph.num_edges)
    return graph, TourSubgraph(tuple(int(w) for w in weights)), rng


def test_validator_matches_walks():
    """Test 6: Valid iff a closed walk from the depot uses every copy and visits every item"""
    print("\n" + "="*80)
    print("TEST 6: Validator vs Walks")
    print("="*80)

    valid_count = 0
    for seed in range(1000):
        graph, tour, _ = random_map(seed)
        expected, walked = closed_walk_exists(graph, tour)
        report = is_tour_subgraph(graph, tour)
        assert report.valid == expected, f"seed {seed}: {report.describe(graph)}"

        conditions = report.conditions()
        assert (EVEN_DEGREE in conditions) == any(d % 2 for _, d in walked.degree())
        if walked.number_of_edges() > 0:
            assert (CONNECTED in conditions) == (not nx.is_connected(walked))
            required = {graph.depot, *graph.item_vertex_ids}
            assert (ITEMS_COVERED in conditions) == (not required <= set(walked.nodes))
        else:
            assert conditions == ([ITEMS_COVERED] if graph.instance.num_items else [])

        if report.valid:
            valid_count += 1
            walk = extract_walk(graph, tour)
            assert walk.vertices[0] == walk.vertices[-1] == graph.depot
            assert subgraph_from_walk(graph, walk.vertices) == tour
        else:
            with pytest.raises(InvalidTourError):
                extract_walk(graph, tour)

    print(f"[OK] 1000 random maps, {valid_count} valid")


def test_length_and_parity():
    """Test 7: Length is additive; two more copies of an edge keep every parity"""
    print("\n" + "="*80)
    print("TEST 7: Length and Parity")
    print("="*80)

    for seed in range(200):
        graph, first, rng = random_map(seed)
        second = TourSubgraph(tuple(int(w) for w in rng.integers(0, 3, size=graph.num_edges)))
        assert tour_length(graph, first + second) == tour_length(graph, first) + tour_length(graph, second)
        assert tour_length(graph, first + first) == 2 * tour_length(graph, first)

        edge_id = int(rng.integers(graph.num_edges))
        bumped = first.with_changes({edge_id: 2})
        assert np.array_equal(bumped.degrees(graph) % 2, first.degrees(graph) % 2)
        assert tour_length(graph, bumped) == tour_length(graph, first) + 2 * graph.edges[edge_id].length

    graph = build_graph(load_instance(os.path.join(INSTANCES, 'fig_layout.json')))
    tour = fig_tour(graph)
    degree = tour.degrees(graph)
    touching = [edge for edge in graph.edges if degree[edge.u] > 0 or degree[edge.v] > 0]
    for edge in touching:
        assert is_tour_subgraph(graph, tour.with_changes({edge.id: 2})).valid

    print(f"[OK] 200 random pairs, {len(touching)} bumped reference tours stay valid")


def main():
    """Run all tour tests"""
    print("\n" + "="*80)
    print("TOUR SUBGRAPH TESTS")
    print("="*80)

    tests = [
        ("Reference Tour", test_reference_tour),
        ("Violations", test_violations_have_witnesses),
        ("Empty Pick List", test_empty_pick_list),
        ("Walk Extraction", test_extract_walk),
        ("Tour Documents", test_tour_documents),
        ("Validator vs Walks", test_validator_matches_walks),
        ("Length and Parity", test_length_and_parity),
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
