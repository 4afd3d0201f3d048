"""Short-rate model catalogue: parameters, derived constants, SDE callbacks."""

from .catalog import (
    CI,
    CIR,
    CIR_VR,
    GBM,
    GCIR,
    MODEL_NAMES,
    ModelConstants,
    ModifiedCI,
    PricingQuery,
    ShortRateModel,
    derive_constants,
    drift_diffusion,
    gcir_time_change,
    make_model,
)

__all__ = [
    "CI",
    "CIR_VR",
    "GBM",
    "GCIR",
    "CIR",
    "ModifiedCI",
    "ShortRateModel",
    "ModelConstants",
    "PricingQuery",
    "MODEL_NAMES",
    "derive_constants",
    "drift_diffusion",
    "gcir_time_change",
    "make_model",
]
