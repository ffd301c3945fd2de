"""Figure rendering for spatial-consistency sweep CSV files."""

from .figures import FigureSpec, SchemaError, build_figure, load_records, render

__version__ = "0.1.0"
