//! Finite statistical models: a sample space, a σ-algebra, an ordered family
//! of named probability distributions, and an optional dominating measure.

use crate::error::{Error, Result};
use crate::measure::{is_absolutely_continuous, RationalMeasure};
use crate::space::{FiniteSpace, SigmaAlgebra};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMember {
    pub name: String,
    pub measure: RationalMeasure,
}

/// A statistical model on a finite space. When no dominating measure is
/// supplied, the uniform mixture of the family is used; it dominates every
/// member by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteModel {
    space: FiniteSpace,
    sigma: SigmaAlgebra,
    family: Vec<FamilyMember>,
    dominating: Option<RationalMeasure>,
}

impl FiniteModel {
    pub fn new(
        sigma: SigmaAlgebra,
        family: Vec<FamilyMember>,
        dominating: Option<RationalMeasure>,
    ) -> Result<Self> {
        let space = sigma.space().clone();
        if family.is_empty() {
            return Err(Error::InvariantViolation(
                "model family must be nonempty".into(),
            ));
        }
        for member in &family {
            if member.measure.space() != &space {
                return Err(Error::SpaceMismatch(format!(
                    "family member {:?} lives on a different space",
                    member.name
                )));
            }
            if !member.measure.is_probability() {
                return Err(Error::InvariantViolation(format!(
                    "family member {:?} is not a probability measure (mass {})",
                    member.name,
                    crate::rational::format_rational(&member.measure.total())
                )));
            }
        }
        let mut names: Vec<&str> = family.iter().map(|m| m.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvariantViolation(
                "duplicate family member name".into(),
            ));
        }
        if let Some(dom) = &dominating {
            if dom.space() != &space {
                return Err(Error::SpaceMismatch(
                    "dominating measure on a different space".into(),
                ));
            }
            for member in &family {
                if !is_absolutely_continuous(&member.measure, dom, &sigma)? {
                    return Err(Error::InvariantViolation(format!(
                        "family member {:?} is not dominated by the dominating measure",
                        member.name
                    )));
                }
            }
        }
        Ok(Self {
            space,
            sigma,
            family,
            dominating,
        })
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn sigma(&self) -> &SigmaAlgebra {
        &self.sigma
    }

    pub fn family(&self) -> &[FamilyMember] {
        &self.family
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    pub fn member(&self, index: usize) -> &FamilyMember {
        &self.family[index]
    }

    pub fn member_by_name(&self, name: &str) -> Option<(usize, &FamilyMember)> {
        self.family.iter().enumerate().find(|(_, m)| m.name == name)
    }

    pub fn explicit_dominating(&self) -> Option<&RationalMeasure> {
        self.dominating.as_ref()
    }

    /// The dominating probability measure used by all checks: the explicit
    /// one normalized to total mass 1, or the uniform family mixture.
    pub fn effective_dominating(&self) -> RationalMeasure {
        match &self.dominating {
            Some(dom) => dom
                .normalized()
                .expect("dominating measure has positive mass"),
            None => {
                let members: Vec<&RationalMeasure> =
                    self.family.iter().map(|m| &m.measure).collect();
                RationalMeasure::mixture(&members).expect("family is nonempty")
            }
        }
    }

    /// The model restricted to the canonical representatives (lowest index)
    /// of its observational-identity classes.
    pub fn quotient(&self) -> FiniteModel {
        let partition = l1_identity_partition(self);
        let family = partition
            .classes()
            .iter()
            .map(|class| self.family[class[0]].clone())
            .collect();
        FiniteModel {
            space: self.space.clone(),
            sigma: self.sigma.clone(),
            family,
            dominating: self.dominating.clone(),
        }
    }
}

/// The partition of family indices by observational identity: two members
/// share a class iff they agree on every measurable event (equivalently, on
/// every σ-atom). Class representatives are the lowest indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct L1IdentityPartition {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl L1IdentityPartition {
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, member: usize) -> usize {
        self.class_of[member]
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn representatives(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }
}

pub fn l1_identity_partition(model: &FiniteModel) -> L1IdentityPartition {
    let n = model.len();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let mut assigned = false;
        for (c, class) in classes.iter_mut().enumerate() {
            let rep = class[0];
            if model.family[i]
                .measure
                .agrees_on(&model.sigma, &model.family[rep].measure)
            {
                class.push(i);
                class_of[i] = c;
                assigned = true;
                break;
            }
        }
        if !assigned {
            class_of[i] = classes.len();
            classes.push(vec![i]);
        }
    }
    L1IdentityPartition { classes, class_of }
}
