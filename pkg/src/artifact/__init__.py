"""Finite frames, localic relations on them, and their open cones."""
from ._kernels import active as active_backend
from ._kernels import available as available_backends
from ._kernels import use_backend
from .config import size_cap
from .conic import (
    ConicFrame,
    adjunction_laws,
    canonical_cones,
    cones_of,
    enumerate_conic_structures,
    enumerate_join_preserving,
    induce_relation,
    induce_relation_generic,
    is_conic_morphism,
    is_fixed_point,
    search_composition_conjecture,
    unit_inclusion,
    universality_check,
)
from .coproduct import coproduct, copair, injections, square
from .lattice_core import (
    FiniteFrame,
    FrameMap,
    MonotoneMap,
    PointPoset,
    boolean_frame,
    build_frame,
    chain_frame,
    frame_from_poset,
    truth_frame,
)
from .locale_maps import LocaleMap, check_open, image, make_locale_map, pullback
from .properties import EMOrder, em_isomorphism_suite, property_report
from .relations import (
    LocalicRelation,
    closed_relation,
    compose,
    diagonal,
    from_spatial,
    kernel_pair,
    open_relation,
    opposite,
    to_open_cone,
    top_relation,
)
from .sublocales import Nucleus, Sublocale, saturate, sublocale_eq, sublocale_leq
from .workspace import load_workspace, parse_workspace

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
