"""Finite-model calculus of groupoid extensions and principal 2-group bundles.

Layers, bottom up: groups -> groupoids -> 2-groupoids and crossed modules
-> spans (generalized morphisms) -> extensions -> nerves and cohomology
-> cover cocycles, with JSON I/O and a CLI on top.  See README.md.
"""

from .errors import GerbekitError
from .fpmat import BACKEND as kernel_backend
from .groups import (
    FiniteGroup,
    GroupHom,
    RightAction,
    automorphism_group,
    center,
    cyclic_group,
    direct_product,
    inner_hom,
    make_group,
    quotient_group,
    symmetric_group,
)
from .groupoids import (
    FiniteGroupoid,
    GroupBundle,
    GroupoidMorphism,
    cech_groupoid,
    group_as_groupoid,
    groupoid_iso_search,
    is_morita_1,
    loops_crossed_module,
    pair_groupoid,
    pullback_groupoid,
    quotient_by_bundle,
    trivial_bundle,
    trivial_groupoid,
)
from .two_groupoids import (
    CrossedModuleGpd,
    TwoGroupoid,
    TwoMorphism,
    as_two_groupoid,
    aut_inner_two_group,
    cm_to_two_groupoid,
    is_morita_2,
    nat2_search,
    one_kernel_two_group,
    pullback_two_groupoid,
    two_groupoid_to_cm,
)
from .spans import (
    Span,
    compose_spans,
    identity_span,
    pullback_bundle,
    span_equivalent,
    whitney_sum,
)
from .extensions import (
    GExtension,
    bundle_to_extension,
    central_reduction,
    extension_class,
    extension_to_bundle,
    is_central,
    is_morita_ext,
    make_extension,
    roundtrip_check,
    trivial_extension,
)
from .nerve import DeltaSet, nerve
from .cohomology import (
    CohClass,
    canonical_class,
    characteristic_map,
    cochain_complex,
    cohomology,
    induced_map,
)
from .cocycles import (
    AbCocycle,
    Cover,
    NonAbCocycle,
    ab_cocycle_to_central_extension,
    cocycle_to_bundle,
    validate_ab,
    validate_nonab,
)

__version__ = "0.1.0"
