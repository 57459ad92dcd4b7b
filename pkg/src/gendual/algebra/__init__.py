from .catalog import (
    BOOLEAN_ALGEBRAS,
    CATALOG,
    COMMUTATIVE_RINGS,
    INITIAL_THEORY,
    MONOIDS,
    POINTED_SETS,
    dual_numbers,
    finite_set,
    integers_mod,
    polynomial_ring,
    two_element_boolean,
)
from .model import (
    FiniteAlgebra,
    Homomorphism,
    PartialAlgebra,
    brute_force_homs,
    check_axioms,
    enumerate_homs,
    eval_term,
    extend_to_hom,
    generated_closure,
    homs_fp_to_model,
    identity,
    is_homomorphism,
    search_homs,
)
from .realize import DEFAULT_BOUND, BoundExceeded, SiteObject, realize, validate_site_object
from .terms import App, Term, Var, numeral, parse_term
from .theory import (
    FPPresentation,
    TheoryMismatch,
    TheoryPresentation,
    coproduct_presentation,
    free_presentation,
    initial_presentation,
)
from .coproduct import (
    Coproduct,
    coproduct_from_presentation,
    generator_images,
    homs_model_to_model,
    universal_map,
)
from .window import TermWindow, term_window
