"""
pickroute - Exact order-picker routing for multi-block warehouses
Frontier DP solver, reference oracles, tour validation and connecting double elimination
"""

__version__ = "0.1.0"
