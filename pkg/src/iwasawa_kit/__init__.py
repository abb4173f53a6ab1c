"""iwasawa-kit: exact desk-scale computer algebra for equivariant
Stickelberger elements, finite-level Iwasawa algebras, Fitting ideals over
group rings, and bounded-complex invariants.

Everything is exact: rationals, cyclotomic integers over Q, and the rings
Z/p^N with explicit precision. The package verifies, at desk scale, the
classical identities and containments these objects satisfy (integrality
under admissibility, annihilation of class-module data, tower coherence,
twist congruences, and the Fitting-ideal lemma calculus).
"""

from .abelian import (
    AbelianFieldSpec,
    CharacterTable,
    CMStructure,
    DirichletCharacter,
    FiniteAbelianGroup,
    check_hyp,
    cm_data,
    conductor,
    dirichlet_character,
    galois_group,
    layer,
    ramified_primes,
    roots_of_unity_order,
)
from .complexes import (
    BoundedComplex,
    ChainMap,
    ComplexSES,
    EulerFittingInvariant,
    cone,
    euler_fitting_additivity_check,
    quasi_iso_check,
)
from .exact import (
    CyclotomicInt,
    PadicInt,
    Rational,
    bernoulli_number,
    bernoulli_polynomial,
    hurwitz_zeta_nonpos,
    padic_unit_inverse,
    teichmuller,
)
from .fitting import (
    AlgebraMorphism,
    FiniteCommAlgebra,
    FinPresModule,
    GroupAlgebra,
    IdealHandle,
    ModuleMap,
    base_change_fitting,
    dual_presentation,
    e1_sharp_check,
    four_term_check,
    minus_quotient,
    nilpotent_extension,
    pontryagin_dual,
    tower_fitting_check,
)
from .groupring import GroupRingElement
from .lvalues import (
    ClassModuleData,
    StickelbergerElement,
    annihilation_check,
    delta_t,
    dirichlet_l_nonpos,
    euler_enlarge,
    fitting_membership_check,
    partial_zeta_vector,
    theta,
    verify_integrality,
)
from .tower import (
    FiniteLevelAlgebra,
    TowerElement,
    aug_project,
    coherence_check,
    sharp,
    theta_tower,
    twist,
    twist_congruence_check,
)

__version__ = "0.1.0"
