//! Verdict reports with machine-checkable witnesses and certificates.
//!
//! Every failing check carries a minimal witness (first violation in
//! canonical atom order) so failures are reproducible byte-for-byte, and
//! every passing equivalence route carries the kernel that certifies it.

use crate::kernel::MarkovKernel;
use crate::rational::Rational;
use crate::simplex::InfeasibilityCertificate;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }

    pub fn from_bool(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// A counterexample locating the first violation of a check. Atom indices
/// refer to canonical atom order of the relevant σ-algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A (family member, x-atom, y-atom) triple violating an identity.
    MemberAtomPair {
        member: String,
        x_atom: usize,
        y_atom: usize,
    },
    /// A (x-atom, y-atom) pair violating an identity.
    AtomPair { x_atom: usize, y_atom: usize },
    /// A nonzero density annihilated by a conditional expectation.
    NullDensity { values: Vec<Rational> },
    /// Two family members with identical images but distinguishable sources;
    /// `atom` is a source atom separating them.
    MemberCollision {
        left: String,
        right: String,
        atom: usize,
    },
    /// A target family member whose class is not hit by any image.
    UnhitTarget { member: String },
    /// A distribution with no match in the opposite family.
    UnmatchedDistribution { name: String, in_target: bool },
    /// A family member whose round trip leaves its observational class.
    RoundTrip { member: String, forward: bool },
    /// No reverse kernel exists; the separating functional is attached as
    /// the report's certificate.
    InfeasibleTransport,
    /// Two parameter vectors assigned to the same observational class.
    ParameterCollision { left: usize, right: usize },
    /// Mismatched class counts (Set-structural failure).
    ClassCountMismatch { left: usize, right: usize },
    /// Kolmogorov-quotient topologies admit no open-set-preserving bijection.
    NoHomeomorphism {
        left_classes: usize,
        right_classes: usize,
    },
}

/// A certificate substantiating a pass verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificatePayload {
    ReverseKernel(MarkovKernel),
    Infeasibility(InfeasibilityCertificate),
    ClassBijection(Vec<(usize, usize)>),
}

/// Outcome of a single decision procedure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub verdict: Verdict,
    /// Label of the decision procedure that produced the verdict.
    pub route: String,
    /// Number of exact identities verified along the way.
    pub checked: usize,
    pub witness: Option<Witness>,
    pub certificate: Option<CertificatePayload>,
}

impl CheckReport {
    pub fn pass(route: &str, checked: usize) -> Self {
        Self {
            verdict: Verdict::Pass,
            route: route.into(),
            checked,
            witness: None,
            certificate: None,
        }
    }

    pub fn fail(route: &str, checked: usize, witness: Witness) -> Self {
        Self {
            verdict: Verdict::Fail,
            route: route.into(),
            checked,
            witness: Some(witness),
            certificate: None,
        }
    }

    pub fn with_certificate(mut self, certificate: CertificatePayload) -> Self {
        self.certificate = Some(certificate);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}
