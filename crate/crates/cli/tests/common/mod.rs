//! Seeded random generators and fixture paths for the CLI test suites.

#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use statcat_core::measure::RationalMeasure;
use statcat_core::model::{FamilyMember, FiniteModel};
use statcat_core::rational::{rat, Rational};
use statcat_core::space::{FiniteSpace, SigmaAlgebra};
use statcat_core::MeasurableMap;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_statcat")
}

pub fn space(rng: &mut ChaCha8Rng, max_points: usize, prefix: &str) -> SigmaAlgebra {
    let n = rng.random_range(1..=max_points);
    SigmaAlgebra::power_set(FiniteSpace::new((0..n).map(|i| format!("{prefix}{i}"))).unwrap())
}

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

pub fn model(rng: &mut ChaCha8Rng, max_points: usize, max_members: usize) -> FiniteModel {
    let sigma = space(rng, max_points, "x");
    let members = rng.random_range(1..=max_members);
    let family = (0..members)
        .map(|i| FamilyMember {
            name: format!("P{i}"),
            measure: probability(rng, sigma.space()),
        })
        .collect();
    FiniteModel::new(sigma, family, None).unwrap()
}

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

/// An instance whose statistic is sufficient by construction: image-space
/// distributions spread over fibers by one shared within-fiber weight.
pub fn sufficient_instance(
    rng: &mut ChaCha8Rng,
    max_points: usize,
    max_members: usize,
) -> (FiniteModel, MeasurableMap) {
    let domain = space(rng, max_points, "x");
    let codomain = space(rng, max_points, "y");
    let map = map_between(rng, &domain, &codomain);
    let n = domain.space().len();
    let m = codomain.space().len();

    let mut weights: Vec<i64> = (0..n).map(|_| rng.random_range(0..=9)).collect();
    for y in 0..m {
        let fiber: Vec<usize> = (0..n).filter(|&x| map.apply(x) == y).collect();
        if !fiber.is_empty() && fiber.iter().all(|&x| weights[x] == 0) {
            weights[fiber[0]] = 1;
        }
    }
    let fiber_totals: Vec<i64> = (0..m)
        .map(|y| {
            (0..n)
                .filter(|&x| map.apply(x) == y)
                .map(|x| weights[x])
                .sum()
        })
        .collect();

    let members = rng.random_range(1..=max_members);
    let family = (0..members)
        .map(|i| {
            let image_points: Vec<usize> = (0..m).filter(|&y| fiber_totals[y] > 0).collect();
            let mut q = vec![0i64; m];
            let mut q_total = 0;
            for &y in &image_points {
                let w = rng.random_range(0..=9);
                q[y] = w;
                q_total += w;
            }
            if q_total == 0 {
                q[image_points[0]] = 1;
                q_total = 1;
            }
            let mass: Vec<Rational> = (0..n)
                .map(|x| {
                    let y = map.apply(x);
                    rat(q[y] * weights[x], q_total * fiber_totals[y].max(1))
                })
                .collect();
            FamilyMember {
                name: format!("P{i}"),
                measure: RationalMeasure::probability(domain.space().clone(), mass).unwrap(),
            }
        })
        .collect();
    (FiniteModel::new(domain, family, None).unwrap(), map)
}

pub fn pushforward_model(source: &FiniteModel, map: &MeasurableMap) -> FiniteModel {
    statcat_core::induce_morphism(source, map)
        .unwrap()
        .target()
        .clone()
}
