"""Transfer-matrix (monodromy) scattering for one-dimensional layered stacks."""
from .exceptions import (
    CausalityWarning,
    ConfigError,
    FormViolationError,
    GeometryError,
    GridError,
    IllConditionedError,
    MonodromyError,
    NumericDomainError,
    PresetIntegrityError,
)
from .layers import (
    SPEED_OF_LIGHT,
    DeltaBarrier,
    Dielectric,
    DispersionModel,
    Gap,
    LayerStack,
    SquareBarrier,
    barrier_matrix,
    delta_matrix,
    dielectric_matrix,
    element_matrix,
    gap_matrix,
    kappa,
)
from .oracle import match_interfaces, single_barrier_closed_form
from .scattering import (
    ScatteringResult,
    amplitudes,
    assemble,
    black_box_phases,
    cayley_hamilton_power,
    iterated_power,
    phase_decomposition,
    scatter,
)
from .spectra import (
    Resonance,
    Spectrum,
    advance_speed,
    band_structure,
    default_grid,
    mode_spacing,
    monodromy_time,
    resonances,
    sweep,
    unwrap,
    wigner_time,
)
from .transfer import (
    MonodromyComponents,
    TransferMatrix,
    components,
    determinant,
    from_components,
    inverse,
    multiply,
    product,
    trace_half,
)

__version__ = "0.1.0"
