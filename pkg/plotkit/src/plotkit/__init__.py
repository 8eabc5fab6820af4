"""Batch renderer for gibbslab experiment CSVs.

Consumes only the public CSV schema (`gibbslab-csv-1`); the experiment
suite runs without this package and this package runs without it.
"""

from .render import PlotSpec, RenderError, load_plot_spec, render

__version__ = "0.1.0"

__all__ = ["PlotSpec", "RenderError", "load_plot_spec", "render"]
