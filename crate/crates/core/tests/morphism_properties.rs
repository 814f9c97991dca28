//! Randomized invariants of induced morphisms and the inference checks.

mod common;

use rand::Rng;

use statcat_core::inference::is_complete;
use statcat_core::model::{FamilyMember, FiniteModel};
use statcat_core::space::{FiniteSpace, SigmaAlgebra};
use statcat_core::{induce_morphism, RationalMeasure};

#[test]
fn induced_morphisms_commute_with_their_kernel() {
    let mut rng = common::rng(601);
    for _ in 0..200 {
        let a = common::model(&mut rng, 6, 4);
        let m = rng.random_range(1..=6);
        let codomain =
            SigmaAlgebra::power_set(FiniteSpace::new((0..m).map(|i| format!("y{i}"))).unwrap());
        let map = common::map_between(&mut rng, a.sigma(), &codomain);
        let f = induce_morphism(&a, &map).unwrap();
        for i in 0..a.len() {
            let via_kernel = f.image_of(i).unwrap();
            let assigned = &f.target().member(f.assignment()[i]).measure;
            assert!(
                via_kernel.agrees_on(f.target().sigma(), assigned),
                "kernel application must land on the assigned member"
            );
        }
    }
}

#[test]
fn completeness_is_monotone_under_sigma_refinement() {
    let mut rng = common::rng(602);
    let mut coarse_passes = 0;
    for _ in 0..200 {
        let domain = SigmaAlgebra::power_set(common::space(&mut rng, 5));
        let codomain = SigmaAlgebra::power_set(
            FiniteSpace::new((0..rng.random_range(1..=5)).map(|i| format!("y{i}"))).unwrap(),
        );
        let map = common::map_between(&mut rng, &domain, &codomain);
        let target = {
            let family = vec![FamilyMember {
                name: "Q".into(),
                measure: common::probability(&mut rng, codomain.space()),
            }];
            FiniteModel::new(codomain.clone(), family, None).unwrap()
        };

        // a random coarse σ-algebra and a proper refinement of it
        let coarse = {
            let groups = rng.random_range(1..=domain.space().len());
            let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); groups];
            for p in 0..domain.space().len() {
                blocks[rng.random_range(0..groups)].push(p);
            }
            blocks.retain(|b| !b.is_empty());
            SigmaAlgebra::new(domain.space().clone(), blocks).unwrap()
        };
        let fine = {
            let mut blocks = Vec::new();
            for block in coarse.atoms() {
                if block.len() > 1 && rng.random_bool(0.7) {
                    let split = rng.random_range(1..block.len());
                    blocks.push(block[..split].to_vec());
                    blocks.push(block[split..].to_vec());
                } else {
                    blocks.push(block.clone());
                }
            }
            SigmaAlgebra::new(domain.space().clone(), blocks).unwrap()
        };

        let coarse_report = is_complete(&target, &map, &coarse).unwrap();
        let fine_report = is_complete(&target, &map, &fine).unwrap();
        if coarse_report.passed() {
            coarse_passes += 1;
            assert!(
                fine_report.passed(),
                "refining the source σ-algebra must never turn pass into fail"
            );
        }
    }
    assert!(
        coarse_passes > 10,
        "the generator must produce passing coarse instances"
    );
}

#[test]
fn quotient_models_keep_one_representative_per_class() {
    let mut rng = common::rng(603);
    for _ in 0..100 {
        let a = common::model(&mut rng, 5, 5);
        let q = a.quotient();
        let classes = statcat_core::l1_identity_partition(&a);
        assert_eq!(q.len(), classes.class_count());
        // representatives are pairwise distinguishable
        let q_classes = statcat_core::l1_identity_partition(&q);
        assert_eq!(q_classes.class_count(), q.len());
    }
}

#[test]
fn pushforward_models_are_dominated_by_the_image_mixture() {
    let mut rng = common::rng(604);
    for _ in 0..100 {
        let a = common::model(&mut rng, 5, 4);
        let m = rng.random_range(1..=5);
        let codomain =
            SigmaAlgebra::power_set(FiniteSpace::new((0..m).map(|i| format!("y{i}"))).unwrap());
        let map = common::map_between(&mut rng, a.sigma(), &codomain);
        let b = common::pushforward_model(&a, &map);
        let dom = b.effective_dominating();
        for member in b.family() {
            assert!(
                statcat_core::is_absolutely_continuous(&member.measure, &dom, b.sigma()).unwrap()
            );
        }
        assert_eq!(
            dom.total(),
            RationalMeasure::uniform(b.space().clone()).total()
        );
    }
}
