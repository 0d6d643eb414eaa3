"""HEX statement derivation, variant-lineage closure, and supersession."""

from cfe_registry.exposure.types import DeploymentProfile, HexStatement, HexSubcomponent
from cfe_registry.exposure.rules import evaluate_exposure, hex_for_variants, supersede

__all__ = [
    "DeploymentProfile",
    "HexStatement",
    "HexSubcomponent",
    "evaluate_exposure",
    "hex_for_variants",
    "supersede",
]
