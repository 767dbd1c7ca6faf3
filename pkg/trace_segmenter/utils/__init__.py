"""
Utility functions for the trace segmentation package.
"""

from .file_utils import load_csv, write_csv
from .result_document import build_result_document, read_result_document, write_result_document
from .security import FileValidationError, validate_file

# lxml is a compiled dependency; keep the rest importable without it
try:
    from .svg_plot import emit_plot, render_svg
    PLOT_AVAILABLE = True
except ImportError:
    emit_plot = None
    render_svg = None
    PLOT_AVAILABLE = False

__all__ = [
    'load_csv',
    'write_csv',
    'build_result_document',
    'read_result_document',
    'write_result_document',
    'FileValidationError',
    'validate_file',
]

if PLOT_AVAILABLE:
    __all__.extend(['emit_plot', 'render_svg'])
