"""
Frontier Dynamic Program

Purpose:
    Exact minimum-length tour subgraph by a left-to-right sweep over aisles

Key Features:
    - Frontier states: multiplicity class per cross-aisle, non-crossing
      partition of the ports into components, closed flag
    - One vertical configuration per block and a right-frontier class vector
      per transition; parity forces ODD ports, EVEN ports branch on 0/2
    - Optional pruning of assignments containing a connecting double run
    - Deterministic tie-breaking on (length, config tuple, right frontier)
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Dict, Iterator, List, Optional, Tuple

from networkx.utils import UnionFind

from configs import VerticalConfig, enumerate_vertical_configs, subaisle_of, vertical_config_effect
from errors import CapacityError, PickRouteError, PreconditionError
from model import WarehouseInstance, active_aisle_range, build_graph
from settings import get_settings
import status
from tour import TourSubgraph, tour_length


ZERO, ODD, EVEN = 0, 1, 2


# ============================================================================
# FRONTIER STATES
# ============================================================================

@dataclass(frozen=True, order=True)
class FrontierState:
    """
    Summary of the swept part of a tour between two aisles

    h[r] is the class of the horizontal multiplicity crossing the frontier at
    row r (0-based cross-aisle index); partition groups the ports (rows with
    h[r] != ZERO) by connected component of the swept part.
    """

    h: Tuple[int, ...]
    partition: Tuple[Tuple[int, ...], ...] = ()
    closed: bool = False

    @classmethod
    def initial(cls, n: int) -> 'FrontierState':
        return cls((ZERO,) * n, (), False)

    @classmethod
    def accepting(cls, n: int) -> 'FrontierState':
        return cls((ZERO,) * n, (), True)

    @property
    def ports(self) -> Tuple[int, ...]:
        return tuple(row for row, cls_ in enumerate(self.h) if cls_ != ZERO)


@lru_cache(maxsize=None)
def is_non_crossing(partition: Tuple[Tuple[int, ...], ...]) -> bool:
    """No a < b < c < d with a, c in one block and b, d in another"""
    for idx, first in enumerate(partition):
        for second in partition[idx + 1:]:
            for a in first:
                for c in first:
                    if c <= a:
                        continue
                    inside = any(a < b < c for b in second)
                    outside = any(b < a or b > c for b in second)
                    if inside and outside:
                        return False
    return True


def _set_partitions(elements: Tuple[int, ...]) -> Iterator[List[List[int]]]:
    if not elements:
        yield []
        return
    head, rest = elements[0], elements[1:]
    for smaller in _set_partitions(rest):
        yield [[head]] + smaller
        for idx in range(len(smaller)):
            yield smaller[:idx] + [[head] + smaller[idx]] + smaller[idx + 1:]


def _canonical(blocks) -> Tuple[Tuple[int, ...], ...]:
    return tuple(sorted(tuple(sorted(block)) for block in blocks))


def enumerate_states(n: int) -> List[FrontierState]:
    """
    All frontier states for n cross-aisles, sorted

    A state is admissible when its partition is non-crossing, every block
    holds an even number of ODD ports, and a closed state has no ports.

    Example:
        >>> len(enumerate_states(2))
        7
    """
    if n < 2:
        raise PreconditionError(f"need at least 2 cross-aisles, got {n}")
    states = [FrontierState.accepting(n)]
    for h in product((ZERO, ODD, EVEN), repeat=n):
        ports = tuple(row for row, cls_ in enumerate(h) if cls_ != ZERO)
        for blocks in _set_partitions(ports):
            partition = _canonical(blocks)
            if not is_non_crossing(partition):
                continue
            if any(sum(1 for row in block if h[row] == ODD) % 2 for block in partition):
                continue
            states.append(FrontierState(tuple(h), partition, False))
    return sorted(states)


# ============================================================================
# RESULTS
# ============================================================================

@dataclass(frozen=True)
class DpOptions:
    prune_connecting: bool = False
    forbid_double_traversal: bool = False     # drop configuration V entirely
    max_cross_aisles: Optional[int] = None    # default from settings


@dataclass
class SolverStats:
    states_expanded: int = 0
    transitions_evaluated: int = 0
    aisles_swept: int = 0
    states_per_aisle: List[int] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            'states_expanded': self.states_expanded,
            'transitions_evaluated': self.transitions_evaluated,
            'aisles_swept': self.aisles_swept,
            'states_per_aisle': list(self.states_per_aisle),
        }


@dataclass(frozen=True)
class AislePlan:
    """Chosen configurations of one aisle and the right-frontier multiplicities"""
    aisle: int
    configs: Tuple[VerticalConfig, ...]
    right: Tuple[int, ...]


@dataclass(frozen=True)
class OptimalTour:
    length: int
    subgraph: TourSubgraph
    stats: SolverStats
    plan: Tuple[AislePlan, ...] = ()


# ============================================================================
# SWEEP
# ============================================================================

@dataclass(frozen=True)
class _Choice:
    configs: Tuple[VerticalConfig, ...]
    key: Tuple[int, ...]
    cost: int
    vertex_degree: Tuple[int, ...]        # vertical degree at each intersection
    connects: Tuple[bool, ...]            # per block
    doubled: Tuple[bool, ...]             # per block, configuration V


class FrontierSweep:
    """
    Dynamic program over frontier states, one aisle at a time

    Only aisles between the leftmost and rightmost aisle holding the depot or
    an item are swept; the others stay empty.

    Example:
        sweep = FrontierSweep(instance, DpOptions(prune_connecting=True))
        best = sweep.run()
        print(best.length, best.stats.transitions_evaluated)
    """

    def __init__(self, instance: WarehouseInstance, options: Optional[DpOptions] = None):
        self.instance = instance
        self.options = options or DpOptions()
        self.graph = build_graph(instance)
        self.n = instance.cross_aisles
        self.stats = SolverStats()
        self._class_cache: Dict[tuple, Tuple[Tuple[int, ...], ...]] = {}
        self._right_cache: Dict[tuple, List[Tuple[int, ...]]] = {}

        cap = self.options.max_cross_aisles or get_settings().max_cross_aisles
        if self.n > cap:
            raise CapacityError(f"{self.n} cross-aisles exceed the frontier solver cap of {cap}")

    def run(self) -> OptimalTour:
        if self.instance.num_items == 0:
            return OptimalTour(length=0, subgraph=TourSubgraph.empty(self.graph), stats=self.stats)

        lo, hi = active_aisle_range(self.instance)
        current: Dict[FrontierState, tuple] = {FrontierState.initial(self.n): (0,)}
        history = []

        for aisle in range(lo, hi + 1):
            self.stats.aisles_swept += 1
            self.stats.states_per_aisle.append(len(current))
            nxt, back = self._sweep_aisle(aisle, current, last=(aisle == hi))
            history.append((aisle, back))
            current = nxt

        accept = FrontierState.accepting(self.n)
        if accept not in current:
            raise PickRouteError("frontier sweep ended without a closed tour")

        plan = self._backtrack(history, accept)
        subgraph = self._materialise(plan)
        length = tour_length(self.graph, subgraph)
        if length != current[accept][0]:
            raise PickRouteError(f"reconstructed length {length} differs from table value {current[accept][0]}")

        status.info(f"frontier sweep: length {length}, {self.stats.states_expanded} states, "
                    f"{self.stats.transitions_evaluated} transitions"
                    f"{' (pruned)' if self.options.prune_connecting else ''}")
        return OptimalTour(length=length, subgraph=subgraph, stats=self.stats, plan=plan)

    # ------------------------------------------------------------------
    # per-aisle menu
    # ------------------------------------------------------------------

    def _block_options(self, aisle: int, block: int):
        """Cheapest configuration per block shape, ties to the lower tag"""
        best = {}
        for config, effect in enumerate_vertical_configs(subaisle_of(self.instance, aisle, block)):
            if config is VerticalConfig.V and self.options.forbid_double_traversal:
                continue
            shape = effect.shape
            if shape not in best or effect.length < best[shape][1].length:
                best[shape] = (config, effect)
        return sorted(best.values(), key=lambda pair: pair[0].order)

    def _aisle_choices(self, aisle: int) -> List[_Choice]:
        per_block = [self._block_options(aisle, block) for block in range(1, self.n)]
        grouped: Dict[tuple, _Choice] = {}
        for combo in product(*per_block):
            degree = [0] * self.n
            for block, (_, effect) in enumerate(combo):
                degree[block] += effect.bottom_degree
                degree[block + 1] += effect.top_degree
            choice = _Choice(
                configs=tuple(config for config, _ in combo),
                key=tuple(config.order for config, _ in combo),
                cost=sum(effect.length for _, effect in combo),
                vertex_degree=tuple(degree),
                connects=tuple(effect.connects_ends for _, effect in combo),
                doubled=tuple(config is VerticalConfig.V for config, _ in combo),
            )
            signature = (tuple((d % 2, d > 0) for d in degree), choice.connects, choice.doubled)
            kept = grouped.get(signature)
            if kept is None or (choice.cost, choice.key) < (kept.cost, kept.key):
                grouped[signature] = choice
        return sorted(grouped.values(), key=lambda choice: choice.key)

    # ------------------------------------------------------------------
    # transitions
    # ------------------------------------------------------------------

    def _right_options(self, parities: Tuple[int, ...], last: bool) -> List[Tuple[int, ...]]:
        key = (parities, last)
        if key not in self._right_cache:
            if last:
                options = [(ZERO,) * self.n] if not any(parities) else []
            else:
                options = list(product(*[(ODD,) if parity else (ZERO, EVEN) for parity in parities]))
            self._right_cache[key] = options
        return self._right_cache[key]

    def _base_classes(self, partition, active: Tuple[bool, ...], connects: Tuple[bool, ...]):
        """Components of the aisle's intersections after joining left components and vertical connections"""
        key = (partition, active, connects)
        cached = self._class_cache.get(key)
        if cached is not None:
            return cached

        components = UnionFind(range(self.n))
        for block in partition:
            components.union(*block)
        for block, joined in enumerate(connects):
            if joined:
                components.union(block, block + 1)

        groups: Dict[int, List[int]] = {}
        for row in range(self.n):
            if active[row]:
                groups.setdefault(components[row], []).append(row)
        classes = tuple(sorted(tuple(rows) for rows in groups.values()))
        self._class_cache[key] = classes
        return classes

    @staticmethod
    def _has_connecting_chain(doubled, left, right) -> bool:
        """True if a maximal chain of doubled blocks has horizontal edges at both ends"""
        touched = [l + r for l, r in zip(left, right)]
        block = 0
        while block < len(doubled):
            if not doubled[block]:
                block += 1
                continue
            start = block
            while block + 1 < len(doubled) and doubled[block + 1] and touched[block + 1] == 0:
                block += 1
            if touched[start] and touched[block + 1]:
                return True
            block += 1
        return False

    def _target_state(self, classes, base_degree, right, depot_seen: bool) -> Optional[FrontierState]:
        groups = list(classes) + [(row,) for row in range(self.n) if base_degree[row] == 0 and right[row]]
        blocks = []
        dropped = 0
        for group in groups:
            ports = tuple(row for row in group if right[row])
            if ports:
                blocks.append(ports)
            else:
                dropped += 1
        if dropped:
            # a finished component must be the whole tour
            if dropped > 1 or blocks or not depot_seen:
                return None
            return FrontierState.accepting(self.n)
        partition = tuple(sorted(blocks))
        if not is_non_crossing(partition):
            return None
        return FrontierState(tuple(right), partition, False)

    def _sweep_aisle(self, aisle: int, current: Dict[FrontierState, tuple], last: bool):
        choices = self._aisle_choices(aisle)
        depot = self.instance.depot
        depot_row = depot.cross_aisle - 1 if depot.aisle == aisle else None
        depot_seen = depot.aisle <= aisle
        width = self.instance.gap_widths[aisle - 1] if aisle < self.instance.aisles else 0
        prune = self.options.prune_connecting
        zeros = (ZERO,) * self.n

        best: Dict[FrontierState, tuple] = {}
        back: Dict[FrontierState, tuple] = {}

        def offer(target, cost, choice, right, source):
            rank = (cost, choice.key, right)
            if target not in best or rank < best[target]:
                best[target] = rank
                back[target] = (source, choice, right)

        for state in sorted(current):
            base_cost = current[state][0]
            self.stats.states_expanded += 1

            if state.closed:
                for choice in choices:
                    if any(choice.vertex_degree) or depot_row is not None:
                        continue
                    self.stats.transitions_evaluated += 1
                    offer(state, base_cost + choice.cost, choice, zeros, state)
                continue

            for choice in choices:
                base_degree = tuple(h + d for h, d in zip(state.h, choice.vertex_degree))
                options = self._right_options(tuple(d % 2 for d in base_degree), last)
                if not options:
                    continue
                classes = self._base_classes(state.partition, tuple(d > 0 for d in base_degree),
                                             choice.connects)
                for right in options:
                    if prune and self._has_connecting_chain(choice.doubled, state.h, right):
                        continue
                    self.stats.transitions_evaluated += 1
                    if depot_row is not None and base_degree[depot_row] + right[depot_row] == 0:
                        continue
                    target = self._target_state(classes, base_degree, right, depot_seen)
                    if target is None:
                        continue
                    offer(target, base_cost + choice.cost + sum(right) * width, choice, right, state)

        return best, back

    # ------------------------------------------------------------------
    # reconstruction
    # ------------------------------------------------------------------

    def _backtrack(self, history, final: FrontierState) -> Tuple[AislePlan, ...]:
        plan = []
        state = final
        for aisle, back in reversed(history):
            source, choice, right = back[state]
            plan.append(AislePlan(aisle=aisle, configs=choice.configs, right=tuple(right)))
            state = source
        return tuple(reversed(plan))

    def _materialise(self, plan: Tuple[AislePlan, ...]) -> TourSubgraph:
        mults: Dict[int, int] = {}
        for step in plan:
            for block, config in enumerate(step.configs, start=1):
                effect = vertical_config_effect(subaisle_of(self.instance, step.aisle, block), config)
                for edge_id, mult in zip(self.graph.block_edges(step.aisle, block), effect.multiplicities):
                    if mult:
                        mults[edge_id] = mult
            if step.aisle < self.instance.aisles:
                for row, mult in enumerate(step.right, start=1):
                    if mult:
                        mults[self.graph.horizontal_edge(step.aisle, row)] = mult
        return TourSubgraph.from_mapping(self.graph, mults)


def solve_dp(instance: WarehouseInstance, options: Optional[DpOptions] = None) -> OptimalTour:
    """
    Exact minimum tour subgraph

    Args:
        instance: Valid warehouse instance
        options: DpOptions (pruning of connecting double runs, no double
            traversals, cross-aisle cap override)

    Returns:
        OptimalTour with the subgraph (multiplicities in {0, 1, 2}), its
        length and sweep statistics; the empty tour when there are no items

    Raises:
        CapacityError when the instance has more cross-aisles than the cap
    """
    return FrontierSweep(instance, options).run()
