"""Figures with closed-form envelopes from trial-record CSVs."""

from .figures import KINDS, FigureData, PlotSpec, Series, figure_series, render
from .records import COLUMNS, Row, SchemaError, read_many, read_rows

__all__ = [
    "COLUMNS",
    "FigureData",
    "KINDS",
    "PlotSpec",
    "Row",
    "SchemaError",
    "Series",
    "figure_series",
    "read_many",
    "read_rows",
    "render",
]

__version__ = "0.1.0"
