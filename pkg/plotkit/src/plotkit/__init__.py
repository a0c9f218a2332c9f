"""plotkit: figure rendering for rotorweyl data files."""

__version__ = "0.1.0"

from .figures import (  # noqa: F401
    FigureRecipe,
    ZONE_COLORS,
    render_pcurves,
    render_phase_space,
    render_scaling,
    render_spectrum,
    save_figure,
    zone_color_table,
)
from .gridfile import GridFileError, read_grid  # noqa: F401
