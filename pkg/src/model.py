"""
Warehouse Model
Instances, the routing graph G, shortest-path distances, instance documents
and seeded random instances
"""

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, StrictInt, ValidationError, model_validator

from errors import InstanceError, PreconditionError


# ============================================================================
# INSTANCE TYPES
# ============================================================================

class DepotLocation(BaseModel):
    """Depot p0: an intersection (aisle i, cross-aisle j), both 1-based"""

    model_config = ConfigDict(frozen=True, extra='forbid')

    aisle: StrictInt
    cross_aisle: StrictInt


class ItemLocation(BaseModel):
    """
    A pick location strictly inside a subaisle

    block j is the subaisle between cross-aisles j and j+1; offset is the
    distance above cross-aisle j.
    """

    model_config = ConfigDict(frozen=True, extra='forbid')

    aisle: StrictInt
    block: StrictInt
    offset: StrictInt


class WarehouseInstance(BaseModel):
    """
    Rectangular parallel-aisle warehouse with a pick list

    Aisles are numbered 1..m left to right, cross-aisles 1..n bottom to top.
    Every subaisle of block j has length block_lengths[j-1] (the same in every
    aisle); gap_widths[i-1] is the horizontal distance between aisles i and i+1.

    Example:
        instance = parse_instance(Path('instances/two_items.json').read_text())
        graph = build_graph(instance)
    """

    model_config = ConfigDict(frozen=True, extra='forbid')

    aisles: StrictInt
    cross_aisles: StrictInt
    block_lengths: Tuple[StrictInt, ...]
    gap_widths: Tuple[StrictInt, ...]
    depot: DepotLocation
    items: Tuple[ItemLocation, ...] = ()

    @model_validator(mode='after')
    def _check_invariants(self):
        check_instance(self)
        return self

    @property
    def num_items(self) -> int:
        return len(self.items)


def check_instance(instance: WarehouseInstance) -> None:
    """
    Check every instance invariant

    Raises:
        InstanceError naming the offending field and the reason
    """
    m, n = instance.aisles, instance.cross_aisles
    if m < 1:
        raise InstanceError('aisles', f'must be >= 1, got {m}')
    if n < 2:
        raise InstanceError('cross_aisles', f'must be >= 2, got {n}')
    if len(instance.block_lengths) != n - 1:
        raise InstanceError(
            'block_lengths', f'expected {n - 1} entries for {n} cross-aisles, got {len(instance.block_lengths)}')
    if len(instance.gap_widths) != m - 1:
        raise InstanceError(
            'gap_widths', f'expected {m - 1} entries for {m} aisles, got {len(instance.gap_widths)}')
    for idx, length in enumerate(instance.block_lengths):
        if length <= 0:
            raise InstanceError(f'block_lengths[{idx}]', f'must be a positive integer, got {length}')
    for idx, width in enumerate(instance.gap_widths):
        if width <= 0:
            raise InstanceError(f'gap_widths[{idx}]', f'must be a positive integer, got {width}')

    depot = instance.depot
    if not 1 <= depot.aisle <= m:
        raise InstanceError('depot.aisle', f'must lie in [1, {m}], got {depot.aisle}')
    if not 1 <= depot.cross_aisle <= n:
        raise InstanceError('depot.cross_aisle', f'must lie in [1, {n}], got {depot.cross_aisle}')

    for idx, item in enumerate(instance.items):
        where = f'items[{idx}]'
        if not 1 <= item.aisle <= m:
            raise InstanceError(f'{where}.aisle', f'must lie in [1, {m}], got {item.aisle}')
        if not 1 <= item.block <= n - 1:
            raise InstanceError(f'{where}.block', f'must lie in [1, {n - 1}], got {item.block}')
        length = instance.block_lengths[item.block - 1]
        if item.offset <= 0 or item.offset >= length:
            raise InstanceError(
                f'{where}.offset',
                f'item on cross-aisle (offset {item.offset} outside the open interval (0, {length}))')


def build_instance(data: dict) -> WarehouseInstance:
    """
    Validate a decoded instance document

    Args:
        data: Mapping in the instance document layout

    Returns:
        WarehouseInstance with all invariants checked

    Raises:
        InstanceError for unknown keys, wrong types or invariant violations
    """
    if not isinstance(data, dict):
        raise InstanceError('document', 'top level must be a JSON object')
    try:
        return WarehouseInstance.model_validate(data)
    except ValidationError as exc:
        raise _instance_error_from(exc) from None


def _instance_error_from(exc: ValidationError) -> InstanceError:
    first = exc.errors()[0]
    original = (first.get('ctx') or {}).get('error')
    if isinstance(original, InstanceError):
        return original
    location = '.'.join(str(part) for part in first.get('loc', ())) or 'document'
    if first.get('type') == 'extra_forbidden':
        return InstanceError(location, 'unknown key')
    return InstanceError(location, first.get('msg', 'invalid value'))


def parse_instance(text: str) -> WarehouseInstance:
    """
    Parse an instance document (UTF-8 JSON)

    Args:
        text: Document text

    Returns:
        Validated WarehouseInstance (item order preserved for labelling)

    Example:
        >>> parse_instance('{"aisles": 1, "cross_aisles": 2, "block_lengths": [10], '
        ...                '"gap_widths": [], "depot": {"aisle": 1, "cross_aisle": 1}, "items": []}').num_items
        0
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError('document', f'malformed JSON ({exc.msg} at line {exc.lineno})') from None
    return build_instance(data)


def load_instance(path) -> WarehouseInstance:
    """Read and parse an instance document from disk"""
    return parse_instance(Path(path).read_text(encoding='utf-8'))


def instance_to_document(instance: WarehouseInstance) -> dict:
    """Instance as a document mapping with stable key order"""
    return {
        'aisles': instance.aisles,
        'cross_aisles': instance.cross_aisles,
        'block_lengths': list(instance.block_lengths),
        'gap_widths': list(instance.gap_widths),
        'depot': {'aisle': instance.depot.aisle, 'cross_aisle': instance.depot.cross_aisle},
        'items': [
            {'aisle': item.aisle, 'block': item.block, 'offset': item.offset}
            for item in instance.items
        ],
    }


def dump_instance(instance: WarehouseInstance) -> str:
    """Pretty-printed instance document (2-space indent, trailing newline)"""
    return json.dumps(instance_to_document(instance), indent=2) + '\n'


def instance_digest(instance: WarehouseInstance) -> str:
    """sha256 of the canonical instance document"""
    return hashlib.sha256(dump_instance(instance).encode('utf-8')).hexdigest()


def active_aisle_range(instance: WarehouseInstance) -> Tuple[int, int]:
    """
    Leftmost and rightmost aisle holding the depot or an item

    An optimal tour never uses edges outside this range: any excursion beyond
    it can be replaced by travel along the boundary aisle that is no longer
    and has the same degree parities and connectivity.
    """
    aisles = [instance.depot.aisle] + [item.aisle for item in instance.items]
    return min(aisles), max(aisles)


# ============================================================================
# ROUTING GRAPH
# ============================================================================

class Vertex(NamedTuple):
    id: int
    aisle: int
    kind: str                       # 'cross' (intersection) or 'item'
    cross_aisle: Optional[int]      # intersections only
    block: Optional[int]            # item points only
    offset: int                     # height above the block's lower cross-aisle (0 for intersections)
    height: int                     # height above cross-aisle 1
    labels: Tuple[int, ...]         # pick-list labels (1-based) at this point


class Edge(NamedTuple):
    id: int
    u: int                          # u < v
    v: int
    length: int
    kind: str                       # 'vertical' or 'horizontal'
    aisle: int                      # vertical: its aisle; horizontal: the left aisle (gap index)
    row: int                        # vertical: block index; horizontal: cross-aisle index


@dataclass(frozen=True, eq=False)
class WarehouseGraph:
    """
    Explicit graph G = (V u P, E) of a warehouse instance

    Vertices are numbered aisle-major, bottom to top: in each aisle the
    intersection of cross-aisle 1, the item points of block 1 by offset, the
    intersection of cross-aisle 2, and so on. Vertical edges follow in the same
    order, then horizontal edges gap by gap, bottom to top.

    Example:
        graph = build_graph(instance)
        bottom_left = graph.intersection(1, 1)
        segments = graph.block_edges(1, 1)
    """

    instance: WarehouseInstance
    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...]
    depot: int
    _intersections: Dict[Tuple[int, int], int] = field(repr=False)
    _item_vertices: Tuple[int, ...] = field(repr=False)
    _block_edges: Dict[Tuple[int, int], Tuple[int, ...]] = field(repr=False)
    _block_vertices: Dict[Tuple[int, int], Tuple[int, ...]] = field(repr=False)
    _horizontals: Dict[Tuple[int, int], int] = field(repr=False)
    _edge_lookup: Dict[Tuple[int, int], int] = field(repr=False)

    @property
    def aisles(self) -> int:
        return self.instance.aisles

    @property
    def cross_aisles(self) -> int:
        return self.instance.cross_aisles

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def lengths(self) -> np.ndarray:
        """Edge lengths indexed by edge id"""
        return np.array([edge.length for edge in self.edges], dtype=np.int64)

    @cached_property
    def endpoints(self) -> Tuple[np.ndarray, np.ndarray]:
        """Arrays of the lower and higher endpoint id of every edge"""
        ends_u = np.array([edge.u for edge in self.edges], dtype=np.int64)
        ends_v = np.array([edge.v for edge in self.edges], dtype=np.int64)
        return ends_u, ends_v

    @cached_property
    def nx_graph(self) -> nx.Graph:
        """networkx view with a 'length' attribute and the edge id on every edge"""
        g = nx.Graph()
        g.add_nodes_from(range(self.num_vertices))
        for edge in self.edges:
            g.add_edge(edge.u, edge.v, length=edge.length, id=edge.id)
        return g

    @cached_property
    def item_vertex_ids(self) -> Tuple[int, ...]:
        """Distinct item vertices in order of first appearance on the pick list"""
        return tuple(dict.fromkeys(self._item_vertices))

    def intersection(self, aisle: int, cross_aisle: int) -> int:
        return self._intersections[(aisle, cross_aisle)]

    def item_vertex(self, label: int) -> int:
        """Vertex of pick-list entry `label` (1-based)"""
        return self._item_vertices[label - 1]

    def block_edges(self, aisle: int, block: int) -> Tuple[int, ...]:
        """Edge ids of subaisle (aisle, block), bottom to top"""
        return self._block_edges[(aisle, block)]

    def block_vertices(self, aisle: int, block: int) -> Tuple[int, ...]:
        """Vertex ids of subaisle (aisle, block) including both intersections, bottom to top"""
        return self._block_vertices[(aisle, block)]

    def horizontal_edge(self, gap: int, cross_aisle: int) -> int:
        """Edge between v(gap, cross_aisle) and v(gap + 1, cross_aisle)"""
        return self._horizontals[(gap, cross_aisle)]

    def edge_between(self, u: int, v: int) -> Optional[int]:
        return self._edge_lookup.get((min(u, v), max(u, v)))

    def terminals(self) -> Tuple[int, ...]:
        """Depot followed by the distinct item vertices"""
        return (self.depot,) + tuple(v for v in self.item_vertex_ids if v != self.depot)

    def vertex_name(self, vertex_id: int) -> str:
        vertex = self.vertices[vertex_id]
        if vertex.kind == 'cross':
            return f"v({vertex.aisle},{vertex.cross_aisle})"
        return ','.join(f"p{label}" for label in vertex.labels)


def build_graph(instance: WarehouseInstance) -> WarehouseGraph:
    """
    Build the routing graph G of an instance

    Args:
        instance: Valid warehouse instance

    Returns:
        WarehouseGraph with mn intersections plus one vertex per distinct item
        position; items sharing a position collapse to one vertex carrying all
        their labels
    """
    m, n = instance.aisles, instance.cross_aisles
    heights = [0]
    for length in instance.block_lengths:
        heights.append(heights[-1] + length)

    labels_at: Dict[Tuple[int, int, int], List[int]] = {}
    for label, item in enumerate(instance.items, start=1):
        labels_at.setdefault((item.aisle, item.block, item.offset), []).append(label)

    vertices: List[Vertex] = []
    intersections: Dict[Tuple[int, int], int] = {}
    point_ids: Dict[Tuple[int, int, int], int] = {}
    block_vertices: Dict[Tuple[int, int], Tuple[int, ...]] = {}

    def add_vertex(**kwargs) -> int:
        vertex = Vertex(id=len(vertices), **kwargs)
        vertices.append(vertex)
        return vertex.id

    for i in range(1, m + 1):
        column = []
        for j in range(1, n + 1):
            cross_id = add_vertex(aisle=i, kind='cross', cross_aisle=j, block=None,
                                  offset=0, height=heights[j - 1], labels=())
            intersections[(i, j)] = cross_id
            if column:
                column.append(cross_id)
                block_vertices[(i, j - 1)] = tuple(column)
            if j == n:
                break
            column = [cross_id]
            offsets = sorted({o for (a, b, o) in labels_at if a == i and b == j})
            for offset in offsets:
                point_id = add_vertex(aisle=i, kind='item', cross_aisle=None, block=j,
                                      offset=offset, height=heights[j - 1] + offset,
                                      labels=tuple(labels_at[(i, j, offset)]))
                point_ids[(i, j, offset)] = point_id
                column.append(point_id)

    edges: List[Edge] = []
    edge_lookup: Dict[Tuple[int, int], int] = {}
    block_edges: Dict[Tuple[int, int], Tuple[int, ...]] = {}
    horizontals: Dict[Tuple[int, int], int] = {}

    def add_edge(u: int, v: int, length: int, kind: str, aisle: int, row: int) -> int:
        u, v = min(u, v), max(u, v)
        edge = Edge(id=len(edges), u=u, v=v, length=length, kind=kind, aisle=aisle, row=row)
        edges.append(edge)
        edge_lookup[(u, v)] = edge.id
        return edge.id

    for i in range(1, m + 1):
        for j in range(1, n):
            column = block_vertices[(i, j)]
            ids = []
            for lower, upper in zip(column, column[1:]):
                length = vertices[upper].height - vertices[lower].height
                ids.append(add_edge(lower, upper, length, 'vertical', i, j))
            block_edges[(i, j)] = tuple(ids)

    for i in range(1, m):
        for j in range(1, n + 1):
            horizontals[(i, j)] = add_edge(intersections[(i, j)], intersections[(i + 1, j)],
                                           instance.gap_widths[i - 1], 'horizontal', i, j)

    item_vertices = tuple(point_ids[(item.aisle, item.block, item.offset)] for item in instance.items)

    return WarehouseGraph(
        instance=instance,
        vertices=tuple(vertices),
        edges=tuple(edges),
        depot=intersections[(instance.depot.aisle, instance.depot.cross_aisle)],
        _intersections=intersections,
        _item_vertices=item_vertices,
        _block_edges=block_edges,
        _block_vertices=block_vertices,
        _horizontals=horizontals,
        _edge_lookup=edge_lookup,
    )


# ============================================================================
# SHORTEST PATHS
# ============================================================================

@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Exact shortest-path distances between terminals (row/column order = terminals)"""

    terminals: Tuple[int, ...]
    matrix: np.ndarray

    def index_of(self, vertex_id: int) -> int:
        return self.terminals.index(vertex_id)

    def distance(self, u: int, v: int) -> int:
        return int(self.matrix[self.index_of(u), self.index_of(v)])


def shortest_paths(graph: WarehouseGraph, terminals: Optional[Sequence[int]] = None) -> DistanceMatrix:
    """
    All-pairs shortest-path distances between terminals

    Args:
        graph: Routing graph
        terminals: Vertex ids (default: graph.terminals())

    Returns:
        Symmetric integer DistanceMatrix with zero diagonal

    Raises:
        PreconditionError if a terminal is not a vertex of the graph
    """
    terminals = tuple(graph.terminals() if terminals is None else terminals)
    for vertex_id in terminals:
        if not 0 <= vertex_id < graph.num_vertices:
            raise PreconditionError(f"unknown terminal vertex {vertex_id}")

    matrix = np.zeros((len(terminals), len(terminals)), dtype=np.int64)
    for row, source in enumerate(terminals):
        reach = nx.single_source_dijkstra_path_length(graph.nx_graph, source, weight='length')
        for col, target in enumerate(terminals):
            matrix[row, col] = reach[target]
    return DistanceMatrix(terminals=terminals, matrix=matrix)


def shortest_path(graph: WarehouseGraph, source: int, target: int) -> List[int]:
    """Vertex sequence of one shortest path from source to target"""
    return nx.dijkstra_path(graph.nx_graph, source, target, weight='length')


# ============================================================================
# RANDOM INSTANCES
# ============================================================================

class GeneratorParams(BaseModel):
    """Parameters of generate_instance; ranges are inclusive (lo, hi)"""

    model_config = ConfigDict(frozen=True, extra='forbid')

    aisles: int = Field(ge=1)
    cross_aisles: int = Field(ge=2)
    items: int = Field(ge=0)
    block_length_range: Tuple[int, int] = (1, 100)
    gap_width_range: Tuple[int, int] = (1, 100)

    @model_validator(mode='after')
    def _check_ranges(self):
        for name in ('block_length_range', 'gap_width_range'):
            lo, hi = getattr(self, name)
            if lo < 1 or lo > hi:
                raise ValueError(f'{name} must satisfy 1 <= lo <= hi, got ({lo}, {hi})')
        if self.items > 0 and self.block_length_range[1] < 2:
            raise ValueError('block length 1 admits no interior offset; '
                             'block_length_range must reach 2 when items > 0')
        return self


def generate_instance(params: Union[GeneratorParams, Mapping], seed: int) -> WarehouseInstance:
    """
    Seeded random instance

    Block lengths and gap widths are drawn uniformly from their ranges, the
    depot uniformly among the intersections, and each item uniformly among
    the subaisles long enough to hold one, at a uniform interior offset.

    Args:
        params: GeneratorParams (or a mapping of its fields)
        seed: RNG seed; equal seeds give identical instances

    Returns:
        Valid WarehouseInstance
    """
    if not isinstance(params, GeneratorParams):
        try:
            params = GeneratorParams.model_validate(params)
        except ValidationError as exc:
            first = exc.errors()[0]
            where = '.'.join(str(part) for part in first.get('loc', ())) or 'params'
            raise InstanceError(where, first.get('msg', 'invalid value')) from None

    rng = np.random.default_rng(seed)
    m, n = params.aisles, params.cross_aisles
    b_lo, b_hi = params.block_length_range
    g_lo, g_hi = params.gap_width_range

    block_lengths = [int(x) for x in rng.integers(b_lo, b_hi + 1, size=n - 1)]
    gap_widths = [int(x) for x in rng.integers(g_lo, g_hi + 1, size=m - 1)]
    if params.items > 0 and max(block_lengths) < 2:
        block_lengths[0] = int(rng.integers(max(2, b_lo), b_hi + 1))

    depot = {'aisle': int(rng.integers(1, m + 1)), 'cross_aisle': int(rng.integers(1, n + 1))}

    eligible = [(i, j) for i in range(1, m + 1) for j in range(1, n) if block_lengths[j - 1] >= 2]
    items = []
    for _ in range(params.items):
        aisle, block = eligible[int(rng.integers(len(eligible)))]
        offset = int(rng.integers(1, block_lengths[block - 1]))
        items.append({'aisle': aisle, 'block': block, 'offset': offset})

    return build_instance({
        'aisles': m,
        'cross_aisles': n,
        'block_lengths': block_lengths,
        'gap_widths': gap_widths,
        'depot': depot,
        'items': items,
    })
