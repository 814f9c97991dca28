//! Seeded random generators shared by the integration test suites.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use statcat_core::measure::RationalMeasure;
use statcat_core::model::{FamilyMember, FiniteModel};
use statcat_core::rational::{rat, Rational};
use statcat_core::space::{FiniteSpace, SigmaAlgebra};
use statcat_core::topology::FiniteTopology;
use statcat_core::MeasurableMap;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn space(rng: &mut ChaCha8Rng, max_points: usize) -> FiniteSpace {
    let n = rng.random_range(1..=max_points);
    FiniteSpace::new((0..n).map(|i| format!("x{i}"))).unwrap()
}

pub fn partition(rng: &mut ChaCha8Rng, space: &FiniteSpace) -> SigmaAlgebra {
    let groups = rng.random_range(1..=space.len());
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); groups];
    for p in 0..space.len() {
        blocks[rng.random_range(0..groups)].push(p);
    }
    blocks.retain(|b| !b.is_empty());
    SigmaAlgebra::new(space.clone(), blocks).unwrap()
}

/// A random probability measure with small integer numerators.
pub fn probability(rng: &mut ChaCha8Rng, space: &FiniteSpace) -> RationalMeasure {
    loop {
        let weights: Vec<i64> = (0..space.len()).map(|_| rng.random_range(0..=9)).collect();
        let total: i64 = weights.iter().sum();
        if total == 0 {
            continue;
        }
        let mass: Vec<Rational> = weights.iter().map(|&w| rat(w, total)).collect();
        return RationalMeasure::probability(space.clone(), mass).unwrap();
    }
}

/// A random probability measure dominated by `mu` on the given σ-algebra.
pub fn dominated_probability(
    rng: &mut ChaCha8Rng,
    mu: &RationalMeasure,
    sigma: &SigmaAlgebra,
) -> RationalMeasure {
    loop {
        let weights: Vec<i64> = (0..mu.space().len())
            .map(|i| {
                let atom = sigma.atom_of(i);
                if mu.atom_mass(sigma, atom) == rat(0, 1) {
                    0
                } else {
                    rng.random_range(0..=9)
                }
            })
            .collect();
        let total: i64 = weights.iter().sum();
        if total == 0 {
            continue;
        }
        let mass: Vec<Rational> = weights.iter().map(|&w| rat(w, total)).collect();
        return RationalMeasure::probability(mu.space().clone(), mass).unwrap();
    }
}

/// A model with a power-set σ-algebra and no explicit dominating measure.
pub fn model(rng: &mut ChaCha8Rng, max_points: usize, max_members: usize) -> FiniteModel {
    let space = space(rng, max_points);
    let sigma = SigmaAlgebra::power_set(space.clone());
    let members = rng.random_range(1..=max_members);
    let family = (0..members)
        .map(|i| FamilyMember {
            name: format!("P{i}"),
            measure: probability(rng, &space),
        })
        .collect();
    FiniteModel::new(sigma, family, None).unwrap()
}

/// An arbitrary point map between power-set spaces (always measurable).
pub fn map_between(
    rng: &mut ChaCha8Rng,
    domain: &SigmaAlgebra,
    codomain: &SigmaAlgebra,
) -> MeasurableMap {
    let assignment = (0..domain.space().len())
        .map(|_| rng.random_range(0..codomain.space().len()))
        .collect();
    MeasurableMap::new(domain.clone(), codomain.clone(), assignment).unwrap()
}

pub fn topology(rng: &mut ChaCha8Rng, max_points: usize) -> FiniteTopology {
    let n = rng.random_range(1..=max_points);
    let sets = rng.random_range(0..=4);
    let subbase = (0..sets).map(|_| {
        (0..n)
            .filter(|_| rng.random_bool(0.5))
            .collect::<std::collections::BTreeSet<usize>>()
    });
    FiniteTopology::generate(n, subbase.collect::<Vec<_>>()).unwrap()
}

/// A model whose family is the point-level pushforward of another model.
pub fn pushforward_model(source: &FiniteModel, map: &MeasurableMap) -> FiniteModel {
    statcat_core::induce_morphism(source, map)
        .unwrap()
        .target()
        .clone()
}
