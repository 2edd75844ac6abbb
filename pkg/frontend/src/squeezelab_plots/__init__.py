"""Contour-plot renderer for Q-function grids exported by squeezelab.

Consumes only the exported file formats (CSV grids plus JSON metadata);
it has no dependency on the solver package itself.
"""

from .render import PanelSpec, SchemaError, load_panel, render_panels

__all__ = ["PanelSpec", "SchemaError", "load_panel", "render_panels"]
