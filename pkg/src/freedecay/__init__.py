"""Long-time survival and nonescape probabilities of free one-dimensional wave packets."""

__version__ = "0.1.0"

from .packets import (  # noqa: E402
    FamilyPacket,
    GridPacket,
    Interval,
    Superposition,
    UnitSystem,
    detect_small_k_order,
    make_family_packet,
    make_superposition,
    sample_to_grid,
)
from .derivatives import DerivativeTable, derivative_table, m_bar, special_position  # noqa: E402
from .goperators import g_apply, g_inner_products, leading_g_field  # noqa: E402
from .propagator import EvolvedField, evolve, evolve_family, evolve_grid, required_grid  # noqa: E402
from .observables import ObservableSeries, nonescape, observable_series, survival  # noqa: E402
from .asymptotics import (  # noqa: E402
    AsymptoticProfile,
    asymptotic_profile,
    leading_field,
    leading_nonescape,
    leading_survival,
    series_field,
    series_survival,
)
from .analysis import ComparisonReport, FitResult, compare, fit_power_law  # noqa: E402
