"""
Tour Rendering
Static SVG of a warehouse and a tour subgraph, drawn to scale
"""

from pathlib import Path
from typing import Optional, Tuple

import svgwrite

from model import WarehouseGraph
from tour import TourSubgraph


def render_tour_svg(graph: WarehouseGraph, tour: Optional[TourSubgraph], svg_path,
                    size: int = 800, margin: int = 30) -> Path:
    """
    Write an SVG of the layout with the tour drawn over it

    Aisles and cross-aisles are grey lines, items dots, the depot a square.
    Every tour edge with nonzero multiplicity is one <g class="tour-edge">
    holding one stroke per copy, parallel copies offset side by side.

    Args:
        graph: Routing graph
        tour: Tour subgraph (None draws the layout only)
        svg_path: Output file
        size: Longest side of the drawing area in pixels
        margin: Border in pixels

    Returns:
        Path of the written file
    """
    instance = graph.instance
    width_units = sum(instance.gap_widths)
    height_units = sum(instance.block_lengths)
    scale = size / max(width_units, height_units, 1)

    x_of = {1: 0}
    for aisle in range(2, instance.aisles + 1):
        x_of[aisle] = x_of[aisle - 1] + instance.gap_widths[aisle - 2]

    def point(vertex_id: int) -> Tuple[float, float]:
        vertex = graph.vertices[vertex_id]
        return (margin + scale * x_of[vertex.aisle],
                margin + scale * (height_units - vertex.height))

    canvas = (2 * margin + scale * width_units, 2 * margin + scale * height_units)
    dwg = svgwrite.Drawing(str(svg_path), size=canvas, profile='full')
    dwg.add(dwg.rect(insert=(0, 0), size=canvas, fill='white'))

    layout = dwg.g(class_='layout', stroke='#bbbbbb', stroke_width=2)
    for aisle in range(1, instance.aisles + 1):
        layout.add(dwg.line(start=point(graph.intersection(aisle, 1)),
                            end=point(graph.intersection(aisle, instance.cross_aisles))))
    for row in range(1, instance.cross_aisles + 1):
        layout.add(dwg.line(start=point(graph.intersection(1, row)),
                            end=point(graph.intersection(instance.aisles, row))))
    dwg.add(layout)

    if tour is not None:
        spacing = 4
        for edge_id in tour.nonzero_edges():
            edge = graph.edges[edge_id]
            (x1, y1), (x2, y2) = point(edge.u), point(edge.v)
            # unit normal of the edge
            dx, dy = x2 - x1, y2 - y1
            norm = max((dx * dx + dy * dy) ** 0.5, 1e-9)
            nx_, ny_ = -dy / norm, dx / norm
            mult = tour[edge_id]
            group = dwg.g(class_='tour-edge', stroke='#c0392b', stroke_width=2)
            for copy in range(mult):
                shift = (copy - (mult - 1) / 2) * spacing
                group.add(dwg.line(start=(x1 + shift * nx_, y1 + shift * ny_),
                                   end=(x2 + shift * nx_, y2 + shift * ny_)))
            dwg.add(group)

    for vertex_id in graph.item_vertex_ids:
        dwg.add(dwg.circle(center=point(vertex_id), r=4, fill='#2c3e50', class_='item'))
    depot_x, depot_y = point(graph.depot)
    dwg.add(dwg.rect(insert=(depot_x - 6, depot_y - 6), size=(12, 12), fill='#27ae60', class_='depot'))

    dwg.save()
    return Path(svg_path)
