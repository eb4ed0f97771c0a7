"""
Reference Solvers
Held-Karp over the metric closure of the terminals, and exhaustive
configuration brute force for tiny instances
"""

from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Tuple

import numpy as np
from networkx.utils import UnionFind

from configs import enumerate_vertical_configs, subaisle_of
from errors import CapacityError, PickRouteError
from model import DistanceMatrix, WarehouseInstance, build_graph, shortest_path, shortest_paths
from settings import get_settings
import status
from tour import TourSubgraph, is_tour_subgraph, subgraph_from_walk


UNREACHED = np.iinfo(np.int64).max // 4


@dataclass(frozen=True)
class OracleResult:
    """
    Reference optimum

    order: terminal vertex ids in visiting order, depot first and last
    (Held-Karp only); subgraph: an optimal tour subgraph.
    """

    length: int
    method: str
    order: Tuple[int, ...] = ()
    subgraph: Optional[TourSubgraph] = None
    candidates: int = 0


# ============================================================================
# HELD-KARP
# ============================================================================

def held_karp_table(distances: DistanceMatrix) -> np.ndarray:
    """
    Bitmask table of the Held-Karp recurrence

    Terminal 0 is the start. table[mask, j] is the shortest path that leaves
    terminal 0, visits exactly the non-start terminals in `mask` and ends at
    terminal j + 1 (bit j); unreachable entries hold UNREACHED.
    """
    matrix = distances.matrix
    k = len(distances.terminals) - 1
    table = np.full((1 << k, k), UNREACHED, dtype=np.int64)
    if k == 0:
        return table

    between = matrix[1:, 1:]
    for j in range(k):
        table[1 << j, j] = matrix[0, j + 1]

    for mask in range(1, 1 << k):
        if mask & (mask - 1) == 0:
            continue
        members = [j for j in range(k) if mask >> j & 1]
        previous = table[[mask ^ (1 << j) for j in members]]
        candidates = previous + between[:, members].T
        table[mask, members] = candidates.min(axis=1)
    return table


def solve_held_karp(instance: WarehouseInstance, max_items: Optional[int] = None) -> OracleResult:
    """
    Shortest closed walk from the depot through every item vertex

    Args:
        instance: Valid warehouse instance
        max_items: Cap on distinct item points (default from settings)

    Returns:
        OracleResult with the length, the terminal order and the tour
        subgraph traced along shortest paths

    Raises:
        CapacityError when there are more distinct item points than the cap
    """
    graph = build_graph(instance)
    terminals = graph.terminals()
    k = len(terminals) - 1
    cap = get_settings().held_karp_max_items if max_items is None else max_items
    if k > cap:
        raise CapacityError(f"{k} distinct item points exceed the Held-Karp cap of {cap}")
    if k == 0:
        return OracleResult(length=0, method='held-karp', order=(graph.depot,),
                            subgraph=TourSubgraph.empty(graph))

    distances = shortest_paths(graph, terminals)
    matrix = distances.matrix
    table = held_karp_table(distances)
    full = (1 << k) - 1
    closing = table[full] + matrix[1:, 0]
    last = int(np.argmin(closing))
    length = int(closing[last])

    # walk the table backwards
    sequence = [last]
    mask = full
    while mask & (mask - 1):
        j = sequence[-1]
        previous = mask ^ (1 << j)
        for i in range(k):
            if previous >> i & 1 and table[previous, i] + matrix[i + 1, j + 1] == table[mask, j]:
                sequence.append(i)
                break
        mask = previous
    order = (graph.depot,) + tuple(terminals[j + 1] for j in reversed(sequence)) + (graph.depot,)

    walk = [order[0]]
    for source, target in zip(order, order[1:]):
        walk.extend(shortest_path(graph, source, target)[1:])
    subgraph = subgraph_from_walk(graph, walk)

    status.info(f"held-karp: length {length} over {k} item points")
    return OracleResult(length=length, method='held-karp', order=order, subgraph=subgraph)


# ============================================================================
# BRUTE FORCE
# ============================================================================

def _row_options(vertical_degree: List[int], widths: Tuple[int, ...]) -> List[Tuple[Tuple[int, ...], int]]:
    """Horizontal multiplicities along one cross-aisle that make every degree even"""
    options = []
    m = len(vertical_degree)

    def extend(aisle: int, carry: int, chosen: Tuple[int, ...]):
        if aisle == m - 1:
            if (vertical_degree[aisle] + carry) % 2 == 0:
                options.append((chosen, sum(mult * width for mult, width in zip(chosen, widths))))
            return
        if (vertical_degree[aisle] + carry) % 2:
            extend(aisle + 1, 1, chosen + (1,))
        else:
            extend(aisle + 1, 0, chosen + (0,))
            extend(aisle + 1, 2, chosen + (2,))

    extend(0, 0, ())
    return options


def brute_force_subgraphs(instance: WarehouseInstance,
                          max_blocks: Optional[int] = None,
                          max_gaps: Optional[int] = None) -> OracleResult:
    """
    Minimum over all configuration assignments

    Every block takes one of its valid vertical configurations and every
    horizontal segment a multiplicity in {0, 1, 2} (parity along each
    cross-aisle decides between 1 and {0, 2}); candidates are filtered by
    is_tour_subgraph. Ties go to the first assignment in lexicographic order.

    Raises:
        CapacityError when the instance has too many blocks or gap segments
    """
    settings = get_settings()
    max_blocks = settings.brute_force_max_blocks if max_blocks is None else max_blocks
    max_gaps = settings.brute_force_max_gaps if max_gaps is None else max_gaps
    m, n = instance.aisles, instance.cross_aisles
    blocks, gaps = m * (n - 1), (m - 1) * n
    if blocks > max_blocks or gaps > max_gaps:
        raise CapacityError(
            f"brute force limited to {max_blocks} blocks and {max_gaps} gap segments, "
            f"instance has {blocks} and {gaps}")

    graph = build_graph(instance)
    if instance.num_items == 0:
        return OracleResult(length=0, method='brute-force', subgraph=TourSubgraph.empty(graph))

    cells = [(i, j) for i in range(1, m + 1) for j in range(1, n)]
    menus = [enumerate_vertical_configs(subaisle_of(instance, i, j)) for i, j in cells]
    widths = tuple(instance.gap_widths)
    depot = (instance.depot.aisle - 1) * n + instance.depot.cross_aisle - 1

    def node(i: int, j: int) -> int:
        return (i - 1) * n + (j - 1)

    # every aisle doubled end to end plus a doubled bottom cross-aisle is always a tour
    best_length = 2 * m * sum(instance.block_lengths) + 2 * sum(widths) + 1
    best: Optional[Dict[int, int]] = None
    candidates = 0

    for combo in product(*menus):
        vertical_cost = sum(effect.length for _, effect in combo)
        if vertical_cost >= best_length:
            continue

        degree = [0] * (m * n)
        joined = []
        for (i, j), (_, effect) in zip(cells, combo):
            degree[node(i, j)] += effect.bottom_degree
            degree[node(i, j + 1)] += effect.top_degree
            if effect.connects_ends:
                joined.append((node(i, j), node(i, j + 1)))

        rows = [_row_options([degree[node(i, j)] for i in range(1, m + 1)], widths) for j in range(1, n + 1)]
        if any(not options for options in rows):
            continue

        for horizontal in product(*rows):
            total = vertical_cost + sum(cost for _, cost in horizontal)
            if total >= best_length:
                continue
            candidates += 1

            active = list(degree)
            components = UnionFind(range(m * n))
            for a, b in joined:
                components.union(a, b)
            for j, (mults, _) in enumerate(horizontal, start=1):
                for i, mult in enumerate(mults, start=1):
                    if mult:
                        active[node(i, j)] += mult
                        active[node(i + 1, j)] += mult
                        components.union(node(i, j), node(i + 1, j))
            if not active[depot]:
                continue
            root = components[depot]
            if any(active[v] and components[v] != root for v in range(m * n)):
                continue

            mults: Dict[int, int] = {}
            for (i, j), (_, effect) in zip(cells, combo):
                for edge_id, mult in zip(graph.block_edges(i, j), effect.multiplicities):
                    if mult:
                        mults[edge_id] = mult
            for j, (row, _) in enumerate(horizontal, start=1):
                for i, mult in enumerate(row, start=1):
                    if mult:
                        mults[graph.horizontal_edge(i, j)] = mult
            tour = TourSubgraph.from_mapping(graph, mults)
            if not is_tour_subgraph(graph, tour).valid:
                continue
            best_length, best = total, mults

    if best is None:
        raise PickRouteError("brute force found no tour subgraph")
    status.info(f"brute force: length {best_length} after {candidates} candidates")
    return OracleResult(length=best_length, method='brute-force',
                        subgraph=TourSubgraph.from_mapping(graph, best), candidates=candidates)
