"""Radiative heat transfer between anisotropic dipolar nanoparticles."""

from ._core import (
    BetaProfile,
    ChannelDecomposition,
    EmissionResult,
    Pair,
    PermittivityModel,
    QuadratureError,
    QuadratureSpec,
    Regime,
    Spheroid,
    SwitchQuality,
    TransferResult,
    c_light,
    channel_decomposition,
    depolarization_factors,
    electron_volt,
    emission,
    equal_volume_sphere,
    ev_to_rad_s,
    hbar,
    k_boltzmann,
    material,
    material_names,
    oracle_transfer,
    planck_difference,
    planck_occupation_weight,
    polarizability,
    rad_s_to_ev,
    resonance_frequencies,
    spheroid_from_volume,
    surface_area,
    switch_quality,
    thermal_wavelength,
    transfer_beta_profile,
    transfer_general,
    transfer_perpendicular,
    transfer_regime,
)

__version__ = "0.1.0"

__all__ = [
    "BetaProfile",
    "ChannelDecomposition",
    "EmissionResult",
    "Pair",
    "PermittivityModel",
    "QuadratureError",
    "QuadratureSpec",
    "Regime",
    "Spheroid",
    "SwitchQuality",
    "TransferResult",
    "c_light",
    "channel_decomposition",
    "depolarization_factors",
    "electron_volt",
    "emission",
    "equal_volume_sphere",
    "ev_to_rad_s",
    "hbar",
    "k_boltzmann",
    "material",
    "material_names",
    "oracle_transfer",
    "planck_difference",
    "planck_occupation_weight",
    "polarizability",
    "rad_s_to_ev",
    "resonance_frequencies",
    "spheroid_from_volume",
    "surface_area",
    "switch_quality",
    "thermal_wavelength",
    "transfer_beta_profile",
    "transfer_general",
    "transfer_perpendicular",
    "transfer_regime",
]
