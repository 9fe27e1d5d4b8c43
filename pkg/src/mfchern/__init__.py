"""Exact symbolic matrix factorizations and their Chern characters over Q[x]."""

from .ring import (
    Monomial,
    ParseError,
    Poly,
    Rational,
    RingCtx,
    RingError,
    parse_poly,
    print_poly,
)
from .exterior import (
    Form,
    FormMatrix,
    exterior_derivative,
    fm_exterior_derivative,
    fm_mul,
    graded_trace,
    parse_form,
    print_form,
    wedge,
)
from .ideals import (
    GroebnerBasis,
    ModuleGB,
    buchberger,
    df_form,
    df_image_module_gb,
    form_normal_form,
    is_groebner,
    module_buchberger,
    module_normal_form,
    normal_form,
)
from .mf import (
    ChainComplex,
    ConeResult,
    Homotopy,
    MatFac,
    PolyMatrix,
    StrictMorphism,
    ValidationError,
    cone,
    contraction_of_identity_cone,
    direct_sum,
    embed,
    fold_complex,
    identity_morphism,
    is_homotopy,
    is_strict_morphism,
    mf_new,
    mf_unit,
    module_complex,
    shift,
    tensor,
    tensor_complexes,
    zero_morphism,
)
from .chern import (
    AtiyahClass,
    Connection,
    HomologyClass,
    InternalConsistencyError,
    KClass,
    RingMap,
    atiyah,
    atiyah_power,
    chern_character,
    classical_chern,
    cone_additivity_check,
    connection_default,
    functoriality_check,
    kclass,
    kclass_add,
    kclass_chern,
    kclass_neg,
    kclass_product,
    phi_strictness_check,
    phi_tilde_n,
    phi_tower_oracle,
    pushforward,
    random_connection,
    supertrace,
    tensor_multiplicativity_check,
)

__all__ = [n for n in dir() if not n.startswith("_")]
__version__ = "0.1.0"
