"""
Tour Subgraphs

Purpose:
    Represent a tour subgraph as an edge multiplicity function over G, decide
    whether it is a tour subgraph, measure it and turn it into a picking walk

Key Features:
    - Validator for the three tour-subgraph conditions (coverage, connectivity,
      even degrees) with a witness per failure
    - Deterministic Euler circuit (lowest-index neighbour first)
    - Tour document codec ({"edges": [{"from", "to", "mult"}]})
"""

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, StrictInt, ValidationError

from errors import InvalidTourError, PreconditionError, TourDocumentError
from model import WarehouseGraph


ITEMS_COVERED = 'items-covered'
CONNECTED = 'connected'
EVEN_DEGREE = 'even-degree'


@dataclass(frozen=True)
class TourSubgraph:
    """
    Multiset of edges of G, stored as one multiplicity per edge id

    Example:
        tour = TourSubgraph.from_mapping(graph, {graph.edge_between(0, 1): 2})
        tour_length(graph, tour)
    """

    multiplicities: Tuple[int, ...]

    def __post_init__(self):
        for edge_id, mult in enumerate(self.multiplicities):
            if mult < 0:
                raise PreconditionError(f"edge {edge_id} has negative multiplicity {mult}")

    @classmethod
    def empty(cls, graph: WarehouseGraph) -> 'TourSubgraph':
        return cls((0,) * graph.num_edges)

    @classmethod
    def from_mapping(cls, graph: WarehouseGraph, mults: Mapping[int, int]) -> 'TourSubgraph':
        """Build from {edge id: multiplicity}; absent edges get 0"""
        values = [0] * graph.num_edges
        for edge_id, mult in mults.items():
            if not 0 <= edge_id < graph.num_edges:
                raise PreconditionError(f"unknown edge id {edge_id}")
            values[edge_id] = mult
        return cls(tuple(values))

    def __len__(self) -> int:
        return len(self.multiplicities)

    def __getitem__(self, edge_id: int) -> int:
        return self.multiplicities[edge_id]

    def __add__(self, other: 'TourSubgraph') -> 'TourSubgraph':
        if len(self) != len(other):
            raise PreconditionError("tour subgraphs over different graphs cannot be added")
        return TourSubgraph(tuple(a + b for a, b in zip(self.multiplicities, other.multiplicities)))

    def with_changes(self, deltas: Mapping[int, int]) -> 'TourSubgraph':
        """Copy with the given per-edge multiplicity deltas applied"""
        values = list(self.multiplicities)
        for edge_id, delta in deltas.items():
            values[edge_id] += delta
            if values[edge_id] < 0:
                raise PreconditionError(f"edge {edge_id} would get negative multiplicity {values[edge_id]}")
        return TourSubgraph(tuple(values))

    def nonzero_edges(self) -> List[int]:
        return [edge_id for edge_id, mult in enumerate(self.multiplicities) if mult > 0]

    def is_empty(self) -> bool:
        return not any(self.multiplicities)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.multiplicities, dtype=np.int64)

    def degrees(self, graph: WarehouseGraph) -> np.ndarray:
        """Degree of every vertex (each copy of an edge counts once)"""
        _require_same_graph(graph, self)
        degree = np.zeros(graph.num_vertices, dtype=np.int64)
        mults = self.as_array()
        ends_u, ends_v = graph.endpoints
        np.add.at(degree, ends_u, mults)
        np.add.at(degree, ends_v, mults)
        return degree


def _require_same_graph(graph: WarehouseGraph, tour: TourSubgraph) -> None:
    if len(tour) != graph.num_edges:
        raise PreconditionError(
            f"tour has {len(tour)} multiplicities but the graph has {graph.num_edges} edges")


# ============================================================================
# VALIDATION
# ============================================================================

@dataclass(frozen=True)
class Failure:
    condition: str          # items-covered | connected | even-degree
    witness: int            # vertex id
    detail: str = ''


@dataclass(frozen=True)
class ValidityReport:
    failures: Tuple[Failure, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.failures

    def conditions(self) -> List[str]:
        return sorted({failure.condition for failure in self.failures})

    def describe(self, graph: Optional[WarehouseGraph] = None) -> List[str]:
        lines = []
        for failure in self.failures:
            name = graph.vertex_name(failure.witness) if graph is not None else str(failure.witness)
            suffix = f" ({failure.detail})" if failure.detail else ''
            lines.append(f"{failure.condition} at vertex {failure.witness} {name}{suffix}")
        return lines


def is_tour_subgraph(graph: WarehouseGraph, tour: TourSubgraph) -> ValidityReport:
    """
    Check the three tour-subgraph conditions

    1. every item vertex has nonzero degree, and so does the depot whenever
       there are items or the subgraph is nonempty
    2. the vertices of nonzero degree form one connected component
    3. every vertex has even degree

    Args:
        graph: Routing graph
        tour: Multiplicity function over graph's edges

    Returns:
        ValidityReport listing every violated condition with a witness vertex

    Example:
        report = is_tour_subgraph(graph, tour)
        if not report.valid:
            print(report.describe(graph))
    """
    degree = tour.degrees(graph)
    failures: List[Failure] = []

    for vertex_id in graph.item_vertex_ids:
        if degree[vertex_id] == 0:
            failures.append(Failure(ITEMS_COVERED, vertex_id, f"item {graph.vertex_name(vertex_id)} not visited"))
    needs_depot = graph.instance.num_items > 0 or not tour.is_empty()
    if needs_depot and degree[graph.depot] == 0:
        failures.append(Failure(ITEMS_COVERED, graph.depot, "depot not visited"))

    support = nx.Graph()
    support.add_nodes_from(int(v) for v in np.flatnonzero(degree))
    for edge_id in tour.nonzero_edges():
        edge = graph.edges[edge_id]
        support.add_edge(edge.u, edge.v)
    components = sorted((sorted(component) for component in nx.connected_components(support)),
                        key=lambda comp: (graph.depot not in comp, comp[0]))
    for component in components[1:]:
        failures.append(Failure(CONNECTED, component[0], f"component of {len(component)} vertices detached"))

    for vertex_id in np.flatnonzero(degree % 2):
        failures.append(Failure(EVEN_DEGREE, int(vertex_id), f"degree {int(degree[vertex_id])}"))

    return ValidityReport(tuple(failures))


def require_tour_subgraph(graph: WarehouseGraph, tour: TourSubgraph) -> ValidityReport:
    """is_tour_subgraph, raising InvalidTourError when the report has failures"""
    report = is_tour_subgraph(graph, tour)
    if not report.valid:
        raise InvalidTourError("not a tour subgraph: " + '; '.join(report.describe(graph)), report)
    return report


def tour_length(graph: WarehouseGraph, tour: TourSubgraph) -> int:
    """Sum of multiplicity x edge length"""
    _require_same_graph(graph, tour)
    return int(np.dot(tour.as_array(), graph.lengths))


# ============================================================================
# WALKS
# ============================================================================

@dataclass(frozen=True)
class Walk:
    """Closed walk from the depot; a single vertex for the empty tour"""

    vertices: Tuple[int, ...]
    length: int


def extract_walk(graph: WarehouseGraph, tour: TourSubgraph) -> Walk:
    """
    Euler circuit of a tour subgraph, starting and ending at the depot

    Hierholzer's algorithm; at every vertex the unused edge towards the
    lowest-index neighbour is taken first, so the walk is reproducible.

    Raises:
        InvalidTourError if the subgraph is not a tour subgraph
    """
    require_tour_subgraph(graph, tour)
    if tour.is_empty():
        return Walk(vertices=(graph.depot,), length=0)

    remaining = list(tour.multiplicities)
    adjacency: Dict[int, List[Tuple[int, int]]] = {}
    for edge_id in tour.nonzero_edges():
        edge = graph.edges[edge_id]
        adjacency.setdefault(edge.u, []).append((edge.v, edge_id))
        adjacency.setdefault(edge.v, []).append((edge.u, edge_id))
    for entries in adjacency.values():
        entries.sort()
    pointer = {vertex: 0 for vertex in adjacency}

    stack = [graph.depot]
    circuit: List[int] = []
    while stack:
        vertex = stack[-1]
        entries = adjacency[vertex]
        while pointer[vertex] < len(entries) and remaining[entries[pointer[vertex]][1]] == 0:
            pointer[vertex] += 1
        if pointer[vertex] == len(entries):
            circuit.append(stack.pop())
            continue
        neighbour, edge_id = entries[pointer[vertex]]
        remaining[edge_id] -= 1
        stack.append(neighbour)

    circuit.reverse()
    return Walk(vertices=tuple(circuit), length=tour_length(graph, tour))


def subgraph_from_walk(graph: WarehouseGraph, vertices: Sequence[int]) -> TourSubgraph:
    """Multiplicities counted from consecutive vertex pairs of a walk"""
    counts: Counter = Counter()
    for u, v in zip(vertices, vertices[1:]):
        edge_id = graph.edge_between(u, v)
        if edge_id is None:
            raise PreconditionError(f"vertices {u} and {v} are not adjacent")
        counts[edge_id] += 1
    return TourSubgraph.from_mapping(graph, counts)


# ============================================================================
# TOUR DOCUMENTS
# ============================================================================

class _TourEdgeEntry(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')

    source: StrictInt = Field(alias='from')
    target: StrictInt = Field(alias='to')
    mult: StrictInt = Field(ge=0)


class _TourDocument(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')

    edges: Tuple[_TourEdgeEntry, ...]


def tour_to_document(graph: WarehouseGraph, tour: TourSubgraph) -> dict:
    """Nonzero edges in edge-id order, each as {"from": u, "to": v, "mult": c} with u < v"""
    _require_same_graph(graph, tour)
    entries = []
    for edge_id in tour.nonzero_edges():
        edge = graph.edges[edge_id]
        entries.append({'from': edge.u, 'to': edge.v, 'mult': tour[edge_id]})
    return {'edges': entries}


def dump_tour(graph: WarehouseGraph, tour: TourSubgraph) -> str:
    return json.dumps(tour_to_document(graph, tour), indent=2) + '\n'


def parse_tour(graph: WarehouseGraph, text: str) -> TourSubgraph:
    """
    Parse a tour document against a graph

    Raises:
        TourDocumentError for malformed JSON, unknown vertex ids, non-adjacent
        pairs or an edge listed twice
    """
    try:
        document = _TourDocument.model_validate_json(text)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = '.'.join(str(part) for part in first.get('loc', ())) or 'document'
        raise TourDocumentError(f"{where}: {first.get('msg', 'invalid value')}") from None

    mults: Dict[int, int] = {}
    for idx, entry in enumerate(document.edges):
        for vertex_id in (entry.source, entry.target):
            if not 0 <= vertex_id < graph.num_vertices:
                raise TourDocumentError(f"edges[{idx}]: unknown vertex id {vertex_id}")
        edge_id = graph.edge_between(entry.source, entry.target)
        if edge_id is None:
            raise TourDocumentError(
                f"edges[{idx}]: vertices {entry.source} and {entry.target} are not adjacent")
        if edge_id in mults:
            raise TourDocumentError(f"edges[{idx}]: edge {entry.source}-{entry.target} listed twice")
        mults[edge_id] = entry.mult
    return TourSubgraph.from_mapping(graph, mults)


def load_tour(graph: WarehouseGraph, path) -> TourSubgraph:
    return parse_tour(graph, Path(path).read_text(encoding='utf-8'))
