"""Tomographic reconstruction with shearlets evaluated on the pseudo-polar grid."""

from .fourier import chirp_z, chirp_z_direct, dft_unitary
from .frame import FrameParams, MaskSet, build_masks, check_partition
from .grid import GridIndex, Sector, density_weights, duplicate_pairs, grid_point
from .phantoms import PhantomSpec, make_phantom
from .ppfft import ppfft_adjoint, ppfft_direct_oracle, ppfft_forward, ppfft_inverse
from .radon import Linogram, NoiseSpec, add_noise, radon_forward, radon_inverse, radon_to_spectrum
from .reconstruction import ThresholdRule, estimate_sigma, reconstruct, threshold
from .shearlets import CoefficientSet, analyze, analyze_direct_oracle, synthesize

__all__ = [
    "chirp_z", "chirp_z_direct", "dft_unitary",
    "FrameParams", "MaskSet", "build_masks", "check_partition",
    "GridIndex", "Sector", "density_weights", "duplicate_pairs", "grid_point",
    "PhantomSpec", "make_phantom",
    "ppfft_adjoint", "ppfft_direct_oracle", "ppfft_forward", "ppfft_inverse",
    "Linogram", "NoiseSpec", "add_noise", "radon_forward", "radon_inverse", "radon_to_spectrum",
    "ThresholdRule", "estimate_sigma", "reconstruct", "threshold",
    "CoefficientSet", "analyze", "analyze_direct_oracle", "synthesize",
]
