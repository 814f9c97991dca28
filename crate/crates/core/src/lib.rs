//! Exact-arithmetic decision engine for statistical morphisms on finite
//! statistical models.
//!
//! Everything is computed over arbitrary-precision rationals: conditional
//! and dual-conditional probabilities, sufficiency, completeness, three
//! independent routes to statistical equivalence, canonical topologies with
//! Kolmogorov quotients, and parametrisation analysis. Every verdict is
//! backed by a machine-checkable certificate: a witnessing reverse kernel
//! on pass, a counterexample (event, atom pair, or density) on fail. All
//! outputs are deterministic functions of the inputs.

pub mod error;
pub mod inference;
pub mod kernel;
pub mod linalg;
pub mod map;
pub mod measure;
pub mod model;
pub mod morphism;
pub mod param;
pub mod rational;
pub mod report;
pub mod simplex;
pub mod space;
pub mod topology;

pub use error::{Error, Result};
pub use inference::{check_equivalence, is_complete, is_sufficient, EquivalenceVerdict};
pub use kernel::{
    apply_kernel, bayes_identity_check, detailed_balance_check, dual_conditional, kernel_from_map,
    regular_conditional, ConditionalTable, MarkovKernel,
};
pub use map::{image_sigma, pushforward, MeasurableMap};
pub use measure::{
    conditional_expectation, is_absolutely_continuous, l1_distance, radon_nikodym, DensityVector,
    RationalMeasure,
};
pub use model::{l1_identity_partition, FamilyMember, FiniteModel, L1IdentityPartition};
pub use morphism::{
    classify_morphism, find_reverse_kernel, induce_morphism, induce_morphism_onto,
    morphism_kernel_at, MorphismClassification, ReverseKernelOutcome, StatisticalMorphism,
};
pub use param::{
    analyze_parametrisation, minimal_length, structural_equivalence, Category, ParamReport,
    Parametrisation,
};
pub use rational::{format_rational, parse_rational, Rational};
pub use report::{CertificatePayload, CheckReport, Verdict, Witness};
pub use space::{FiniteSpace, SigmaAlgebra};
pub use topology::{
    canonical_topology, coarsest_topology, estimand_pseudometric, evaluate_estimand,
    is_kolmogorov_equivalent, kolmogorov_quotient, Estimand, FiniteTopology, QuotientMap,
};
