"""Near-field localisation ambiguity analysis for antenna arrays.

Build arrays, evaluate ambiguity functions, predict aliasing-free regions
and resolution cells from local-frequency extrema, and cross-check every
prediction against brute-force spatial spectra.
"""

from .ambiguity import PeakReport, ScalarFieldGrid, evaluate_af, measure_peak
from .analysis import (
    AliasingFreeRegion,
    BandwidthReport,
    CAEEntry,
    afr,
    bandwidth,
    check_addition,
    check_inclusion,
    check_removal,
    max_matched_frequency,
    ncz,
    resolution_region,
    safe_spacing,
)
from .errors import (
    BorderPeakError,
    DegenerateExpansionError,
    InvalidArgumentError,
    NfalError,
    ScenarioError,
    SingularityError,
    UnboundedRegionError,
    UnsupportedGeometryError,
)
from .field import (
    channel,
    k_g,
    k_g_arclength,
    k_g_polar,
    k_h,
    matched_product,
    phase_g,
    phase_h,
    phase_second_derivative,
)
from .geometry import (
    ArrayGeometry,
    Rect,
    Scene,
    build_circular,
    build_concentric,
    build_linear,
    build_rectangular,
    from_points,
    from_polar,
    to_polar,
)
from .loci import (
    ArcCurve,
    AsymptoteLine,
    ConicCoefficients,
    LociResult,
    SegmentCurve,
    asymptotes,
    exact_loci,
    ff_kg_approx,
    ff_kg_validity,
    ff_phi_circular,
    hyperbola_coefficients,
)
from .masks import RegionMask
from .spectrum import SpectrumEstimate, spectrum_g, spectrum_h, spectrum_polar

__version__ = "0.1.0"
