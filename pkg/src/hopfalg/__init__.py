"""Exact convolution calculus and Birkhoff renormalization on graded
connected commutative Hopf algebras."""

from .algebra import Element, Generator, Monomial, TensorElement, pair
from .axioms import AxiomReport, verify_axioms
from .birkhoff import (
    BetaData,
    BirkhoffPair,
    beta_data,
    beta_functional,
    birkhoff_decompose,
    build_special_loop,
    dn_recursive,
    dn_simplex,
    residue,
    rg_limit_check,
    rota_baxter_T,
    scattering_check,
)
from .duals import (
    Character,
    ConvolutionProduct,
    InfinitesimalCharacter,
    TableFunctional,
    character_inverse,
    convolve,
    counit_functional,
    exp_star,
    lie_bracket,
    log_star,
    metric_distance,
    theta_star,
    y_star,
    y_star_inverse,
)
from .errors import (
    CutoffExceededError,
    DomainError,
    HopfError,
    RankMismatchError,
    RingMismatchError,
    SchemaError,
    SingularInputError,
    TruncationError,
    UnsupportedRingError,
    VerificationError,
)
from .hopf import HopfAlgebra, HopfSchema, ReducedTerm, TableSchema
from .instances import (
    RootedTree,
    admissible_cuts,
    enumerate_trees,
    ladder_schema,
    load_schema,
    parse_tree,
    rooted_tree_schema,
)
from .rings import QQ, LaurentRing, LaurentSeries, PolynomialRing, RationalField

__version__ = "0.1.0"
