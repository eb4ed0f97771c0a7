"""
Connecting Double Elimination

Purpose:
    Find double runs in a tour subgraph, classify connecting ones, and rewrite
    the tour until no connecting double run is left, without making it longer

Key Features:
    - Maximal double runs split at intersections carrying horizontal edges
    - State (s_a, s_b) of a connecting run after left-right / top-bottom
      normalization, one of (0,1), (0,2), (1,1), (1,2), (2,2)
    - Redundant pair removal when the run's endpoints stay connected without it
    - Length-preserving transform that moves one copy of the run and one
      horizontal edge into the neighbouring aisle
    - Elimination loop with a step trace and case labels
"""

from collections import Counter
from dataclasses import dataclass
from typing import List, Optional, Tuple

import networkx as nx

from errors import EliminationCapError, PreconditionError
from model import WarehouseGraph
import status
from tour import TourSubgraph, require_tour_subgraph, tour_length


STATES = ((0, 1), (0, 2), (1, 1), (1, 2), (2, 2))

CASE_REDUNDANT = '0.1'
CASE_NO_SINGLE_SPAN = '0.2'
CASE_BOTH_SIDES = '1'
CASE_DOUBLE_BELOW = '2'
CASE_NOT_CONNECTING = '3i'
CASE_TURNED_BACK = '3ii'
CASE_SHIFTED = '3iii'


@dataclass(frozen=True)
class DoubleRun:
    """
    Maximal vertical stretch of multiplicity 2

    Rows are cross-aisle indices, bottom_row < top_row; interior intersections
    carry no horizontal edge.
    """

    aisle: int
    bottom_row: int
    top_row: int
    bottom: int
    top: int
    length: int
    connecting: bool

    @property
    def span(self) -> int:
        return self.top_row - self.bottom_row


@dataclass(frozen=True)
class DoubleEdgeState:
    """
    Normalized state of a connecting run

    s_a, s_b count horizontal edges at the endpoints a and b on the examined
    side (left unless mirror_lr), capped at 2. swap_ab False means a is the
    top endpoint.
    """

    s_a: int
    s_b: int
    mirror_lr: bool = False
    swap_ab: bool = False

    @property
    def pair(self) -> Tuple[int, int]:
        return (self.s_a, self.s_b)

    def rows(self, run: DoubleRun) -> Tuple[int, int]:
        """Rows of (a, b)"""
        if self.swap_ab:
            return run.bottom_row, run.top_row
        return run.top_row, run.bottom_row

    def neighbour_aisle(self, run: DoubleRun) -> int:
        return run.aisle + 1 if self.mirror_lr else run.aisle - 1


@dataclass(frozen=True)
class EliminationStep:
    index: int
    case: str
    aisle: int
    bottom_row: int
    top_row: int
    mirrored: bool
    state: Optional[Tuple[int, int]]
    length_before: int
    length_after: int
    potential_before: Tuple[int, ...]
    potential_after: Tuple[int, ...]

    @property
    def potential_decreased(self) -> bool:
        return self.potential_after < self.potential_before


@dataclass(frozen=True)
class EliminationResult:
    tour: TourSubgraph
    steps: Tuple[EliminationStep, ...]
    cap: int
    initial_connecting: int


# ============================================================================
# HELPERS
# ============================================================================

def _horizontal(graph: WarehouseGraph, tour: TourSubgraph, aisle: int, row: int, side: str) -> int:
    gap = aisle - 1 if side == 'left' else aisle
    if not 1 <= gap < graph.aisles:
        return 0
    return tour[graph.horizontal_edge(gap, row)]


def _touches_horizontal(graph: WarehouseGraph, tour: TourSubgraph, aisle: int, row: int) -> bool:
    return _horizontal(graph, tour, aisle, row, 'left') + _horizontal(graph, tour, aisle, row, 'right') > 0


def _span_edges(graph: WarehouseGraph, aisle: int, bottom_row: int, top_row: int) -> List[int]:
    edges = []
    for block in range(bottom_row, top_row):
        edges.extend(graph.block_edges(aisle, block))
    return edges


def _span_vertices(graph: WarehouseGraph, aisle: int, bottom_row: int, top_row: int) -> List[int]:
    vertices = [graph.intersection(aisle, bottom_row)]
    for block in range(bottom_row, top_row):
        vertices.extend(graph.block_vertices(aisle, block)[1:])
    return vertices


def _is_doubled(graph: WarehouseGraph, tour: TourSubgraph, aisle: int, block: int) -> bool:
    return all(tour[edge_id] == 2 for edge_id in graph.block_edges(aisle, block))


# ============================================================================
# RUNS AND STATES
# ============================================================================

def find_double_runs(graph: WarehouseGraph, tour: TourSubgraph) -> List[DoubleRun]:
    """
    All maximal double runs, ordered by aisle then row

    Example:
        connecting = [run for run in find_double_runs(graph, tour) if run.connecting]
    """
    runs = []
    last_block = graph.cross_aisles - 1
    for aisle in range(1, graph.aisles + 1):
        block = 1
        while block <= last_block:
            if not _is_doubled(graph, tour, aisle, block):
                block += 1
                continue
            start = block
            while (block < last_block and _is_doubled(graph, tour, aisle, block + 1)
                   and not _touches_horizontal(graph, tour, aisle, block + 1)):
                block += 1
            bottom_row, top_row = start, block + 1
            runs.append(DoubleRun(
                aisle=aisle,
                bottom_row=bottom_row,
                top_row=top_row,
                bottom=graph.intersection(aisle, bottom_row),
                top=graph.intersection(aisle, top_row),
                length=sum(graph.instance.block_lengths[b - 1] for b in range(bottom_row, top_row)),
                connecting=(_touches_horizontal(graph, tour, aisle, bottom_row)
                            and _touches_horizontal(graph, tour, aisle, top_row)),
            ))
            block += 1
    return runs


def connecting_potential(runs: List[DoubleRun]) -> Tuple[int, ...]:
    """Aisle indices of the connecting runs, largest first"""
    return tuple(sorted((run.aisle for run in runs if run.connecting), reverse=True))


def classify_state(graph: WarehouseGraph, tour: TourSubgraph, run: DoubleRun) -> DoubleEdgeState:
    """
    Normalized state of a connecting run

    Orientations are tried in the order: as is; top and bottom swapped;
    mirrored; mirrored and swapped. The first whose pair lies in STATES wins.

    Raises:
        PreconditionError if the run is not connecting
    """
    if not run.connecting:
        raise PreconditionError(f"run in aisle {run.aisle} rows {run.bottom_row}-{run.top_row} is not connecting")
    for mirror in (False, True):
        side = 'right' if mirror else 'left'
        for swap in (False, True):
            candidate = DoubleEdgeState(0, 0, mirror, swap)
            a_row, b_row = candidate.rows(run)
            pair = (min(2, _horizontal(graph, tour, run.aisle, a_row, side)),
                    min(2, _horizontal(graph, tour, run.aisle, b_row, side)))
            if pair in STATES:
                return DoubleEdgeState(pair[0], pair[1], mirror, swap)
    raise PreconditionError(f"run in aisle {run.aisle} has no horizontal edge at an endpoint")


# ============================================================================
# REWRITES
# ============================================================================

def detect_redundant(graph: WarehouseGraph, tour: TourSubgraph, run: DoubleRun) -> bool:
    """True if the run's endpoints stay connected after deleting both copies of it"""
    removed = set(_span_edges(graph, run.aisle, run.bottom_row, run.top_row))
    remaining = nx.Graph()
    remaining.add_nodes_from(range(graph.num_vertices))
    for edge_id in tour.nonzero_edges():
        if edge_id not in removed:
            edge = graph.edges[edge_id]
            remaining.add_edge(edge.u, edge.v)
    return nx.has_path(remaining, run.top, run.bottom)


def remove_redundant_pair(graph: WarehouseGraph, tour: TourSubgraph, run: DoubleRun) -> TourSubgraph:
    """
    Delete both copies of a redundant run

    Item points and the depot inside the run stay visited: the run is cut at
    them and only the longest piece without one is deleted (the lowest on
    ties), which is the whole run when it holds none.

    Raises:
        PreconditionError if the run is not redundant
    """
    if not detect_redundant(graph, tour, run):
        raise PreconditionError(
            f"run in aisle {run.aisle} rows {run.bottom_row}-{run.top_row} is the only link between its endpoints")

    vertices = _span_vertices(graph, run.aisle, run.bottom_row, run.top_row)
    anchors = set(graph.item_vertex_ids) | {graph.depot}
    pieces: List[List[int]] = [[]]
    for lower, upper in zip(vertices, vertices[1:]):
        pieces[-1].append(graph.edge_between(lower, upper))
        if upper in anchors and upper != vertices[-1]:
            pieces.append([])

    longest = pieces[0]
    for piece in pieces[1:]:
        if sum(graph.edges[e].length for e in piece) > sum(graph.edges[e].length for e in longest):
            longest = piece
    return tour.with_changes({edge_id: -2 for edge_id in longest})


def apply_transform(graph: WarehouseGraph, tour: TourSubgraph, run: DoubleRun,
                    state: DoubleEdgeState) -> TourSubgraph:
    """
    Move one copy of a connecting run into the neighbouring aisle

    In the normalized orientation (neighbour aisle on the examined side):
    one copy of every run segment and one copy of the horizontal edge at b
    are removed; one copy of every neighbour segment between the same rows
    and one horizontal edge at a are added. The length is unchanged because
    every aisle has the same block lengths.

    Raises:
        PreconditionError if the run is not connecting, the state does not
        match the tour, or there is no horizontal edge at b
    """
    if not run.connecting:
        raise PreconditionError(f"run in aisle {run.aisle} rows {run.bottom_row}-{run.top_row} is not connecting")
    neighbour = state.neighbour_aisle(run)
    if not 1 <= neighbour <= graph.aisles:
        raise PreconditionError(f"orientation mismatch: aisle {neighbour} does not exist")
    side = 'right' if state.mirror_lr else 'left'
    a_row, b_row = state.rows(run)
    at_a = _horizontal(graph, tour, run.aisle, a_row, side)
    at_b = _horizontal(graph, tour, run.aisle, b_row, side)
    if (min(2, at_a), min(2, at_b)) != state.pair:
        raise PreconditionError(
            f"orientation mismatch: tour has ({at_a}, {at_b}) where the state says {state.pair}")
    if at_b < 1:
        raise PreconditionError("no horizontal edge at b to move")

    gap = min(run.aisle, neighbour)
    deltas: Counter = Counter()
    for edge_id in _span_edges(graph, run.aisle, run.bottom_row, run.top_row):
        deltas[edge_id] -= 1
    deltas[graph.horizontal_edge(gap, b_row)] -= 1
    for edge_id in _span_edges(graph, neighbour, run.bottom_row, run.top_row):
        deltas[edge_id] += 1
    deltas[graph.horizontal_edge(gap, a_row)] += 1
    return tour.with_changes(deltas)


def transform_case(graph: WarehouseGraph, before: TourSubgraph, after: TourSubgraph,
                   run: DoubleRun, state: DoubleEdgeState) -> str:
    """Case label of a transform step from the state and the neighbour span"""
    if state.pair in ((1, 1), (1, 2), (2, 2)):
        return CASE_BOTH_SIDES
    neighbour = state.neighbour_aisle(run)
    span = _span_edges(graph, neighbour, run.bottom_row, run.top_row)
    if any(before[edge_id] != 1 for edge_id in span):
        return CASE_NO_SINGLE_SPAN
    if state.pair == (0, 2):
        return CASE_DOUBLE_BELOW

    # (0, 1): locate the far end c of the new double in the neighbour aisle
    a_row, b_row = state.rows(run)
    b_is_bottom = b_row < a_row
    block = b_row if b_is_bottom else b_row - 1
    toward = 'left' if state.mirror_lr else 'right'
    away = 'right' if state.mirror_lr else 'left'
    for other in find_double_runs(graph, after):
        if other.aisle == neighbour and other.bottom_row <= block < other.top_row:
            c_row = other.bottom_row if b_is_bottom else other.top_row
            if _horizontal(graph, after, neighbour, c_row, toward):
                return CASE_TURNED_BACK
            if _horizontal(graph, after, neighbour, c_row, away):
                return CASE_SHIFTED
            return CASE_NOT_CONNECTING
    return CASE_NOT_CONNECTING


# ============================================================================
# ELIMINATION LOOP
# ============================================================================

class ConnectingDoubleEliminator:
    """
    Rewrites a tour subgraph until it has no connecting double run

    Strategy:
        1. Recompute the runs from scratch
        2. Take the connecting run in the largest aisle (lowest top row on ties)
        3. Remove it if redundant, otherwise transform it in its normalized
           orientation
        4. Re-validate and record the step

    Example:
        result = ConnectingDoubleEliminator(graph).run(tour)
        print(format_trace(result.steps))
    """

    def __init__(self, graph: WarehouseGraph, max_steps: Optional[int] = None):
        self.graph = graph
        self.max_steps = max_steps

    def iteration_cap(self, initial_connecting: int) -> int:
        if self.max_steps is not None:
            return self.max_steps
        blocks = self.graph.aisles * (self.graph.cross_aisles - 1)
        return self.graph.aisles * blocks * (1 + initial_connecting)

    def run(self, tour: TourSubgraph) -> EliminationResult:
        graph = self.graph
        require_tour_subgraph(graph, tour)
        runs = find_double_runs(graph, tour)
        initial = sum(1 for run in runs if run.connecting)
        cap = self.iteration_cap(initial)
        steps: List[EliminationStep] = []

        while True:
            connecting = [run for run in runs if run.connecting]
            if not connecting:
                break
            if len(steps) >= cap:
                status.error(f"connecting double elimination hit its cap of {cap} steps")
                raise EliminationCapError(
                    f"{len(connecting)} connecting runs left after {cap} steps", steps)

            run = min(connecting, key=lambda r: (-r.aisle, r.top_row))
            length_before = tour_length(graph, tour)
            potential_before = connecting_potential(runs)

            if detect_redundant(graph, tour, run):
                state = None
                rewritten = remove_redundant_pair(graph, tour, run)
                case = CASE_REDUNDANT
            else:
                state = classify_state(graph, tour, run)
                rewritten = apply_transform(graph, tour, run, state)
                case = transform_case(graph, tour, rewritten, run, state)

            require_tour_subgraph(graph, rewritten)
            runs = find_double_runs(graph, rewritten)
            step = EliminationStep(
                index=len(steps) + 1,
                case=case,
                aisle=run.aisle,
                bottom_row=run.bottom_row,
                top_row=run.top_row,
                mirrored=bool(state and state.mirror_lr),
                state=state.pair if state else None,
                length_before=length_before,
                length_after=tour_length(graph, rewritten),
                potential_before=potential_before,
                potential_after=connecting_potential(runs),
            )
            if not step.potential_decreased:
                status.warn(f"step {step.index} (case {case}, aisle {run.aisle}) did not lower "
                            f"the connecting-run potential {potential_before} -> {step.potential_after}")
            status.info(format_step(step))
            steps.append(step)
            tour = rewritten

        return EliminationResult(tour=tour, steps=tuple(steps), cap=cap, initial_connecting=initial)


def eliminate_connecting_doubles(graph: WarehouseGraph, tour: TourSubgraph,
                                 max_steps: Optional[int] = None) -> EliminationResult:
    """
    Tour of no greater length without connecting double runs

    Raises:
        InvalidTourError if the input is not a tour subgraph
        EliminationCapError if the loop does not finish within its cap
    """
    return ConnectingDoubleEliminator(graph, max_steps).run(tour)


def format_step(step: EliminationStep) -> str:
    line = (f"step {step.index} case {step.case} aisle {step.aisle} "
            f"rows {step.bottom_row}-{step.top_row} length {step.length_before} -> {step.length_after}")
    if step.mirrored:
        line += " mirrored"
    if not step.potential_decreased:
        line += " potential-not-decreased"
    return line


def format_trace(steps) -> str:
    """Line-oriented step log, one line per step"""
    return ''.join(format_step(step) + '\n' for step in steps)
