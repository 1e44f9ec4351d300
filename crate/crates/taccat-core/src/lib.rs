//! Exact computer algebra for pairs of periodic totally acyclic complexes over
//! complete intersections `R = Q/(f_1..f_c)`: cohomology operators, support and
//! rank varieties, cone/tower functors, and a line-oriented session language.

pub mod error;
pub mod field;
pub mod poly;
pub mod parse;
pub mod linalg;
pub mod groebner;
pub mod rings;
pub mod complexes;
pub mod operators;
pub mod cones;
pub mod varieties;
pub mod corpus;
pub mod session;

pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};
pub use linalg::{KMat, QuotientSpace};
pub use poly::{Monomial, OrderKind, PolyRing, Polynomial, RingRc, TermOrder};
pub use groebner::{
    buchberger, divide_with_cofactors, express_in_list, ideal_equal, ideal_quotient,
    radical_membership, GbCache, GroebnerBasis,
};
pub use rings::{make_ci_ring, CiRing, CiRingRc, RMatrix, RingElement};
pub use complexes::{
    compose, contraction, find_homotopy, find_homotopy_bounded, hom_space,
    hom_space_with_multiple, mapping_cone, verify_homotopy, ChainMap, HomSolver, HomSpace,
    Homotopy, PeriodicComplex, TacReport,
};
pub use operators::{
    basis_change_operators, eisenbud_operators, single_operator, verify_operator_commutation,
    BasisChangeOutcome, CommutationReport, EisenbudOperators, SingleOperator,
};
pub use cones::{
    adjunction_dim_check, lifted_cone, s_functor, t_functor, AdjunctionReport, LiftedCone,
    TowerComplex,
};
pub use varieties::{
    annihilator, build_e, chi_ring, crosscheck_avrunin_scott, dade_test, describe_zero_set,
    finite_generation_report, rank_membership, rank_membership_with, support_variety,
    variety_calculus_suite,
    zero_set_contains, CalculusReport, CrosscheckReport, DadeReport, EDegree, FinGenReport,
    GradedHomModule, RankPoint, SupportVariety,
};
pub use corpus::{generate_corpus, generate_pairs, random_chain_map, squares_ring, CorpusItem};
pub use session::{
    build_objects, parse_session, print_session, run_session, Command, ComplexDecl, MapDecl,
    RunOptions, Session, SessionObjects,
};
