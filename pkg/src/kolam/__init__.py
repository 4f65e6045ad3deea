"""Pulli kolam synthesis, validation and rendering with data channels."""

from .grid import GridSpec, SymmetryGroup, make_grid, orbits
from .trace import GateConfig, LoopSet, loop_count, trace
from .search import SearchRequest, enumerate_single_loop, find_single_loop
from .validate import validate
from .specdsl import load_spec
from .mapping import DailyRecord, resolve
from .render import render_svg

__version__ = "0.1.0"

__all__ = [
    "GridSpec", "SymmetryGroup", "make_grid", "orbits",
    "GateConfig", "LoopSet", "loop_count", "trace",
    "SearchRequest", "enumerate_single_loop", "find_single_loop",
    "validate", "load_spec", "DailyRecord", "resolve", "render_svg",
]
