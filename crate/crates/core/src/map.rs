//! Measurable maps between finite measurable spaces, pushforward measures
//! and image σ-algebras.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::measure::RationalMeasure;
use crate::rational::Rational;
use crate::space::SigmaAlgebra;
use num::Zero;

/// A total point map that is measurable: the preimage of every codomain atom
/// is a union of domain atoms (equivalently, each domain atom lands inside a
/// single codomain atom). The induced atom-level map is precomputed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurableMap {
    domain: SigmaAlgebra,
    codomain: SigmaAlgebra,
    assignment: Vec<usize>,
    atom_map: Vec<usize>,
}

impl MeasurableMap {
    pub fn new(
        domain: SigmaAlgebra,
        codomain: SigmaAlgebra,
        assignment: Vec<usize>,
    ) -> Result<Self> {
        if assignment.len() != domain.space().len() {
            return Err(Error::DimensionMismatch(format!(
                "map assigns {} points but the domain has {}",
                assignment.len(),
                domain.space().len()
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&y| y >= codomain.space().len()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: codomain.space().len(),
            });
        }
        let mut atom_map = Vec::with_capacity(domain.atom_count());
        for block in domain.atoms() {
            let target = codomain.atom_of(assignment[block[0]]);
            if block
                .iter()
                .any(|&p| codomain.atom_of(assignment[p]) != target)
            {
                return Err(Error::NonMeasurableMap { atom_index: target });
            }
            atom_map.push(target);
        }
        Ok(Self {
            domain,
            codomain,
            assignment,
            atom_map,
        })
    }

    pub fn identity(sigma: SigmaAlgebra) -> Self {
        let assignment = (0..sigma.space().len()).collect();
        Self::new(sigma.clone(), sigma, assignment).expect("identity is measurable")
    }

    pub fn domain(&self) -> &SigmaAlgebra {
        &self.domain
    }

    pub fn codomain(&self) -> &SigmaAlgebra {
        &self.codomain
    }

    pub fn apply(&self, point: usize) -> usize {
        self.assignment[point]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// The codomain atom hit by a domain atom.
    pub fn atom_image(&self, atom: usize) -> usize {
        self.atom_map[atom]
    }

    pub fn compose(&self, then: &MeasurableMap) -> Result<MeasurableMap> {
        if then.domain != self.codomain {
            return Err(Error::SpaceMismatch(
                "composition endpoints do not match".into(),
            ));
        }
        let assignment = self
            .assignment
            .iter()
            .map(|&y| then.assignment[y])
            .collect();
        MeasurableMap::new(self.domain.clone(), then.codomain.clone(), assignment)
    }
}

/// The image measure: (T_*mu)(y) = Σ over the fiber of y of mu. Total mass
/// is preserved exactly.
pub fn pushforward(map: &MeasurableMap, mu: &RationalMeasure) -> Result<RationalMeasure> {
    if mu.space() != map.domain().space() {
        return Err(Error::SpaceMismatch(
            "measure not on the map's domain".into(),
        ));
    }
    let mut mass = vec![Rational::zero(); map.codomain().space().len()];
    for (x, m) in mu.masses().iter().enumerate() {
        mass[map.apply(x)] += m;
    }
    RationalMeasure::new(map.codomain().space().clone(), mass)
}

/// The σ-algebra on the codomain generated by the images T(A) of all
/// source-measurable events A. Since images of unions are unions of images,
/// the images of the source atoms generate the same σ-algebra; points are
/// grouped by their membership vector across those generators.
pub fn image_sigma(map: &MeasurableMap, source: &SigmaAlgebra) -> Result<SigmaAlgebra> {
    if source.space() != map.domain().space() {
        return Err(Error::SpaceMismatch(
            "source σ-algebra not on the map's domain".into(),
        ));
    }
    let n = map.codomain().space().len();
    let generators: Vec<Vec<bool>> = source
        .atoms()
        .iter()
        .map(|block| {
            let mut hit = vec![false; n];
            for &p in block {
                hit[map.apply(p)] = true;
            }
            hit
        })
        .collect();
    let mut classes: BTreeMap<Vec<bool>, Vec<usize>> = BTreeMap::new();
    for y in 0..n {
        let signature: Vec<bool> = generators.iter().map(|g| g[y]).collect();
        classes.entry(signature).or_default().push(y);
    }
    SigmaAlgebra::new(
        map.codomain().space().clone(),
        classes.into_values().collect(),
    )
}
