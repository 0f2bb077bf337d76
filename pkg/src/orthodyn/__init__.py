"""Numerical laboratory for multiplicative-orthogonality statistics.

The package estimates uniformity seminorms and local Fourier uniformity of
bounded arithmetic sequences, locates atoms of their correlation spectra,
evaluates averaged block functionals over dynamical orbits, computes the
block-distribution transport distance, builds certified nested arc sets
under prime-power digit maps, and checks spectral identities of the
coordinate-adding torus automorphism.  Everything is reproducible: seeded
generators, exact mod-1 helpers, and a CLI that emits deterministic CSV.
"""

from .config import ConfigError, parse_sequence
from .dbar import (BlockDistribution, bernoulli_blocks, dbar_curve, dbar_k,
                   empirical_blocks)
from .fourier import f1, f1_log, window_sup
from .kronecker import ArcSet, TestFunction, build, enumerate_test_functions, \
    verify_star
from .momo import BlockStructure, adversarial_points, make_blocks, \
    momo_log_value, momo_value, wedge_momo
from .seminorms import u1_lambda_sq, u1_sq, u2_fourier_fourth, us_norm
from .sequences import (BoundedSequence, InsufficientDataError, liouville,
                        mix, mobius, phase_sequence, random_signs)
from .spectral import Atom, atom_mass, atom_scan, autocorr, wiener_sum
from .systems import (Character, ConstantObservable, ProductSystem, Rotation,
                      Shear, SkewShift, WedgeObservable, WedgePoint,
                      WedgeSystem, orbit_observable, parse_system)
from .universal import (CharacterTriple, UniversalState, a2_reduction_identity,
                        apply_A, apply_A_n, empirical_eta, point_mass_eta,
                        product_eta, spectral_wzors_check)

__version__ = "0.1.0"

__all__ = [
    "Atom", "ArcSet", "BlockDistribution", "BlockStructure",
    "BoundedSequence", "Character", "CharacterTriple", "ConfigError",
    "ConstantObservable", "InsufficientDataError", "ProductSystem",
    "Rotation", "Shear", "SkewShift", "TestFunction", "UniversalState",
    "WedgeObservable", "WedgePoint", "WedgeSystem", "a2_reduction_identity",
    "adversarial_points", "apply_A", "apply_A_n", "atom_mass", "atom_scan",
    "autocorr", "bernoulli_blocks", "build", "dbar_curve", "dbar_k",
    "empirical_blocks", "empirical_eta", "enumerate_test_functions", "f1",
    "f1_log", "liouville", "make_blocks", "mix", "mobius", "momo_log_value",
    "momo_value", "orbit_observable", "parse_sequence", "parse_system",
    "phase_sequence", "point_mass_eta", "product_eta", "random_signs",
    "spectral_wzors_check", "u1_lambda_sq", "u1_sq", "u2_fourier_fourth",
    "us_norm", "verify_star", "wedge_momo", "wiener_sum", "window_sup",
]
