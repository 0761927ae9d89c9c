"""Free and twisted loop functors on the Burnside category of finite groups."""

from .bisets import (
    BisetError,
    ConcreteBiset,
    TransitiveBisetKey,
    VirtualBiset,
    canonical_key,
    compose,
    compose_oracle,
    decompose,
    induced_biset,
    realize,
    restriction_biset,
    tensor,
    transfer_biset,
)
from .groups import (
    CatalogError,
    FiniteGroup,
    GroupError,
    Homomorphism,
    Subgroup,
    all_subgroups,
    centralizer,
    direct_product,
    make_catalog_group,
    parse_element,
)
from .locality import abelian_p_groups, obstruction_witness, padic_power_analysis, twist_morphism_restricted
from .loops import ModulusError, TupleClassPredicate, loop_morphism, loop_object, twist_object
from .matrices import BisetMatrix, FormalUnion, augmentation_matrix
from .pi0 import pi0_map, pi0_transfer_oracle
from .tuples import classify_tuples, zeta_biset
from .twist import k_exponents, twist_morphism, untwist_morphism, wind_iso

__all__ = [
    "abelian_p_groups",
    "all_subgroups",
    "augmentation_matrix",
    "BisetError",
    "BisetMatrix",
    "canonical_key",
    "CatalogError",
    "centralizer",
    "classify_tuples",
    "compose",
    "compose_oracle",
    "ConcreteBiset",
    "decompose",
    "direct_product",
    "FiniteGroup",
    "FormalUnion",
    "GroupError",
    "Homomorphism",
    "induced_biset",
    "k_exponents",
    "loop_morphism",
    "loop_object",
    "make_catalog_group",
    "ModulusError",
    "obstruction_witness",
    "padic_power_analysis",
    "parse_element",
    "pi0_map",
    "pi0_transfer_oracle",
    "realize",
    "restriction_biset",
    "Subgroup",
    "tensor",
    "transfer_biset",
    "TransitiveBisetKey",
    "TupleClassPredicate",
    "twist_morphism",
    "twist_morphism_restricted",
    "twist_object",
    "untwist_morphism",
    "VirtualBiset",
    "wind_iso",
    "zeta_biset",
]
