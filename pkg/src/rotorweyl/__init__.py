"""rotorweyl: open kicked-rotator resonances, Husimi-Schur maps, fractal Weyl scaling."""

__version__ = "0.1.0"

from .rotor import (  # noqa: F401
    OpenMap,
    OpenMapSpec,
    build_floquet,
    build_open_map,
    kept_sites,
    open_map,
    opening_mask,
    site_positions,
)
from .spectra import (  # noqa: F401
    ORDER_FAST,
    ORDER_SLOW,
    ResonanceSet,
    SchurForm,
    SchurReorderError,
    count_in_band,
    eigenvalues,
    invariance_residual,
    modulus_to_rate,
    ordered_schur,
    subspace_basis,
    write_spectrum_csv,
)
from .husimi import (  # noqa: F401
    HusimiGrid,
    coherent_state,
    husimi_schur,
    husimi_states,
    support_cells,
)
from .classical import (  # noqa: F401
    EscapeZoneGrid,
    LyapunovResult,
    SurvivalCurve,
    escape_zones,
    fit_exponential_rate,
    fit_power_tail,
    jacobian,
    lyapunov,
    map_step,
    phase_portrait,
    sabine_dwell,
    survival,
)
from .weyl import (  # noqa: F401
    PCurve,
    ScalingFit,
    chaotic_exponent,
    p_curve,
    p_typ,
    scaling_fit,
    weyl_sweep,
)
