//! Parametrisations of finite families over rational vector spaces:
//! identifiability, cardinality, length, the minimal-length result in the
//! Set category, and structural equivalence for Set and finite topologies.

use crate::error::{Error, Result};
use crate::linalg::affine_rank;
use crate::model::{l1_identity_partition, FiniteModel};
use crate::rational::{rat_int, Rational};
use crate::report::{CertificatePayload, CheckReport, Witness};
use crate::topology::{
    canonical_topology, is_kolmogorov_equivalent_with_bound, DEFAULT_SEARCH_BOUND,
};

/// Structural categories a model pair can be compared in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Set,
    FinTop,
}

/// A finite parameter space of distinct rational vectors together with an
/// assignment onto family members. Every observational class of the model
/// must be hit (the parametrisation diagram commutes onto the quotient).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parametrisation {
    vectors: Vec<Vec<Rational>>,
    assignment: Vec<usize>,
}

impl Parametrisation {
    pub fn new(
        vectors: Vec<Vec<Rational>>,
        assignment: Vec<usize>,
        model: &FiniteModel,
    ) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::InvariantViolation(
                "parameter space must be nonempty".into(),
            ));
        }
        let dim = vectors[0].len();
        if dim == 0 {
            return Err(Error::InvariantViolation(
                "parameter vectors must have dimension ≥ 1".into(),
            ));
        }
        if vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch(
                "parameter vectors of unequal dimension".into(),
            ));
        }
        for i in 0..vectors.len() {
            for j in (i + 1)..vectors.len() {
                if vectors[i] == vectors[j] {
                    return Err(Error::InvariantViolation(format!(
                        "parameter vectors {i} and {j} are equal rationals"
                    )));
                }
            }
        }
        if assignment.len() != vectors.len() {
            return Err(Error::DimensionMismatch(
                "assignment length differs from the parameter count".into(),
            ));
        }
        if let Some(&bad) = assignment.iter().find(|&&i| i >= model.len()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: model.len(),
            });
        }
        let partition = l1_identity_partition(model);
        let mut hit = vec![false; partition.class_count()];
        for &member in &assignment {
            hit[partition.class_of(member)] = true;
        }
        if let Some(class) = hit.iter().position(|&h| !h) {
            let rep = partition.classes()[class][0];
            return Err(Error::InvariantViolation(format!(
                "observational class of {:?} is not covered by any parameter",
                model.member(rep).name
            )));
        }
        Ok(Self {
            vectors,
            assignment,
        })
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn cardinality(&self) -> usize {
        self.vectors.len()
    }

    pub fn length(&self) -> usize {
        self.vectors[0].len()
    }
}

/// Identifiability analysis of a parametrisation against a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamReport {
    pub identifiable: bool,
    pub cardinality: usize,
    /// Ambient dimension of the parameter vectors.
    pub length: usize,
    /// Affine dimension actually spanned by the parameter set (informational).
    pub affine_rank: usize,
    /// Two parameter indices mapped to the same observational class.
    pub collision: Option<(usize, usize)>,
}

/// Identifiable iff distinct parameter vectors map to distinct
/// observational classes and every class is covered.
pub fn analyze_parametrisation(
    theta: &Parametrisation,
    model: &FiniteModel,
) -> Result<ParamReport> {
    if let Some(&bad) = theta.assignment.iter().find(|&&i| i >= model.len()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            len: model.len(),
        });
    }
    let partition = l1_identity_partition(model);
    let classes: Vec<usize> = theta
        .assignment
        .iter()
        .map(|&member| partition.class_of(member))
        .collect();
    let mut collision = None;
    'outer: for i in 0..classes.len() {
        for j in (i + 1)..classes.len() {
            if classes[i] == classes[j] {
                collision = Some((i, j));
                break 'outer;
            }
        }
    }
    let mut covered = vec![false; partition.class_count()];
    for &c in &classes {
        covered[c] = true;
    }
    let surjective = covered.iter().all(|&c| c);
    let identifiable = collision.is_none() && surjective;
    Ok(ParamReport {
        identifiable,
        cardinality: theta.cardinality(),
        length: theta.length(),
        affine_rank: affine_rank(&theta.vectors),
        collision,
    })
}

/// In the Set category a minimal parametrisation always has length 1: the
/// observational classes are indexed by the distinct rationals 0, 1, 2, ….
pub fn minimal_length(model: &FiniteModel, category: Category) -> Result<(usize, Parametrisation)> {
    if category != Category::Set {
        return Err(Error::UnsupportedCategory(format!("{category:?}")));
    }
    let partition = l1_identity_partition(model);
    let vectors: Vec<Vec<Rational>> = (0..partition.class_count())
        .map(|i| vec![rat_int(i as i64)])
        .collect();
    let assignment = partition.representatives();
    let theta = Parametrisation::new(vectors, assignment, model)?;
    Ok((1, theta))
}

/// Structural equivalence of two models in the chosen category. `Set`
/// compares observational class counts; `FinTop` compares canonical
/// topologies up to Kolmogorov equivalence.
pub fn structural_equivalence(
    a: &FiniteModel,
    b: &FiniteModel,
    category: Category,
) -> Result<CheckReport> {
    structural_equivalence_with_bound(a, b, category, DEFAULT_SEARCH_BOUND)
}

pub fn structural_equivalence_with_bound(
    a: &FiniteModel,
    b: &FiniteModel,
    category: Category,
    bound: usize,
) -> Result<CheckReport> {
    let classes_a = l1_identity_partition(a);
    let classes_b = l1_identity_partition(b);
    let checked = classes_a.class_count() + classes_b.class_count();
    match category {
        Category::Set => {
            if classes_a.class_count() == classes_b.class_count() {
                let bijection = classes_a
                    .representatives()
                    .into_iter()
                    .zip(classes_b.representatives())
                    .collect();
                Ok(CheckReport::pass("structural-set", checked)
                    .with_certificate(CertificatePayload::ClassBijection(bijection)))
            } else {
                Ok(CheckReport::fail(
                    "structural-set",
                    checked,
                    Witness::ClassCountMismatch {
                        left: classes_a.class_count(),
                        right: classes_b.class_count(),
                    },
                ))
            }
        }
        Category::FinTop => {
            let ta = canonical_topology(a)?;
            let tb = canonical_topology(b)?;
            match is_kolmogorov_equivalent_with_bound(&ta, &tb, bound)? {
                Some(perm) => {
                    let reps_a = classes_a.representatives();
                    let reps_b = classes_b.representatives();
                    let bijection = perm
                        .iter()
                        .enumerate()
                        .map(|(i, &j)| (reps_a[i], reps_b[j]))
                        .collect();
                    Ok(CheckReport::pass("structural-fintop", checked)
                        .with_certificate(CertificatePayload::ClassBijection(bijection)))
                }
                None => Ok(CheckReport::fail(
                    "structural-fintop",
                    checked,
                    Witness::NoHomeomorphism {
                        left_classes: classes_a.class_count(),
                        right_classes: classes_b.class_count(),
                    },
                )),
            }
        }
    }
}
