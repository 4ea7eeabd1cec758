"""Fluctuation-rectified DC Lorentz force density below a conductor surface.

The package computes the thermally averaged Lorentz force that builds up in
a thin sub-surface layer of a conductor, for Drude, plasma and
ideal-conductor material models, together with the closed-form
short-distance prefactor, the work-function and screening-charge estimates,
and the data behind the reference figures.
"""

from .medium import (
    HBAR,
    K_B,
    C_LIGHT,
    E_CHARGE,
    EPS_0,
    M_ELECTRON,
    MaterialModel,
    ReducedUnits,
    bose,
    coth_half,
    conductivity,
    conductivity_imaginary_axis,
    current_spectrum,
    permittivity,
)
from .optics import (
    LayerResponse,
    PoleError,
    SpectralPoint,
    angular_average_vector,
    diffusion_frequency,
    fresnel_inner,
    fresnel_sum,
    layer_response,
    normal_wavevectors,
    reflection_tensor_trace,
)
from .kernels import (
    CONDUCTIVITY_PARTS,
    ideal_kernel,
    quantum_kernel_imag,
    quantum_kernel_real,
    spectral_density,
    thermal_kernel,
    total_kernel,
)
from .quadrature import (
    IntegrationResult,
    QuadratureError,
    QuadratureSpec,
    integrate_adaptive,
    integrate_semi_infinite,
    omega_integral,
    q_integral,
)
from .specfun import digamma
from .force import (
    CrossingError,
    EstimateInputs,
    ForcePoint,
    ForceResult,
    SIAnchors,
    SurfaceCharge,
    WorkFunctionShift,
    crossing_depth,
    force_ideal,
    force_profile,
    force_quantum,
    force_quantum_real_axis,
    force_thermal,
    prefactor_c,
    prefactor_c_numeric,
    si_anchors,
    surface_charge,
    work_function_shift,
)

__version__ = "0.1.0"
