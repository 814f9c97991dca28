//! Statistical morphisms induced by measurable maps, their kernel/image
//! structure, mono/epi/iso classification, and the exact reverse-kernel
//! feasibility solve.
//!
//! Two isomorphism notions are reported side by side: the set-level one
//! (mono ∧ epi) and the operational two-sided-inverse one certified by a
//! reverse Markov kernel. They can disagree (the first-coordinate statistic
//! on the coin-pair model is mono and epi yet admits no reverse kernel);
//! everything downstream uses the reverse-kernel notion.

use num::Zero;

use crate::error::{Error, Result};
use crate::kernel::{apply_kernel, dual_conditional, kernel_from_map, MarkovKernel};
use crate::map::{pushforward, MeasurableMap};
use crate::measure::RationalMeasure;
use crate::model::{l1_identity_partition, FamilyMember, FiniteModel};
use crate::rational::Rational;
use crate::simplex::{
    solve_feasibility, verify_feasible, verify_infeasible, FeasibilityOutcome, FeasibilityProblem,
    InfeasibilityCertificate,
};
use crate::space::SigmaAlgebra;

/// A map on distribution families carrying its witnessing measurable map and
/// Markov kernel. `assignment[i]` is the target family index that member `i`
/// is sent to; the commuting-diagram invariant `apply_kernel(kernel, P_i) ≐
/// target[assignment[i]]` holds by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatisticalMorphism {
    source: FiniteModel,
    target: FiniteModel,
    map: MeasurableMap,
    kernel: MarkovKernel,
    assignment: Vec<usize>,
}

impl StatisticalMorphism {
    pub fn source(&self) -> &FiniteModel {
        &self.source
    }

    pub fn target(&self) -> &FiniteModel {
        &self.target
    }

    pub fn map(&self) -> &MeasurableMap {
        &self.map
    }

    pub fn kernel(&self) -> &MarkovKernel {
        &self.kernel
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// The image of a source member under the morphism, as a measure.
    pub fn image_of(&self, index: usize) -> Result<RationalMeasure> {
        if index >= self.source.len() {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.source.len(),
            });
        }
        apply_kernel(&self.kernel, &self.source.member(index).measure)
    }
}

fn check_map_fits(source: &FiniteModel, map: &MeasurableMap) -> Result<()> {
    if map.domain() != source.sigma() {
        return Err(Error::SpaceMismatch(
            "map domain does not match the source model".into(),
        ));
    }
    Ok(())
}

/// Induces the morphism of a measurable map with the freshly constructed
/// pushforward family as target. The target inherits the source member
/// names and is dominated by the pushforward of the source's dominating
/// measure.
pub fn induce_morphism(source: &FiniteModel, map: &MeasurableMap) -> Result<StatisticalMorphism> {
    check_map_fits(source, map)?;
    let family = source
        .family()
        .iter()
        .map(|m| {
            Ok(FamilyMember {
                name: m.name.clone(),
                measure: pushforward(map, &m.measure)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let dominating = pushforward(map, &source.effective_dominating())?;
    let target = FiniteModel::new(map.codomain().clone(), family, Some(dominating))?;
    let assignment = (0..source.len()).collect();
    Ok(StatisticalMorphism {
        source: source.clone(),
        target,
        map: map.clone(),
        kernel: kernel_from_map(map),
        assignment,
    })
}

/// Matches pushforward images against a user-supplied target family up to
/// observational identity (lowest matching index wins). `Err` names the
/// first image with no match.
pub fn match_family(
    images: &[RationalMeasure],
    target: &FiniteModel,
) -> std::result::Result<Vec<usize>, String> {
    let mut assignment = Vec::with_capacity(images.len());
    for (i, image) in images.iter().enumerate() {
        match target
            .family()
            .iter()
            .position(|m| image.agrees_on(target.sigma(), &m.measure))
        {
            Some(j) => assignment.push(j),
            None => return Err(format!("image of source member {i} has no target match")),
        }
    }
    Ok(assignment)
}

/// Induces the morphism of a map onto an existing target model; images are
/// matched against the target family up to observational identity.
pub fn induce_morphism_onto(
    source: &FiniteModel,
    map: &MeasurableMap,
    target: &FiniteModel,
) -> Result<StatisticalMorphism> {
    check_map_fits(source, map)?;
    if map.codomain() != target.sigma() {
        return Err(Error::SpaceMismatch(
            "map codomain does not match the target model".into(),
        ));
    }
    let images = source
        .family()
        .iter()
        .map(|m| pushforward(map, &m.measure))
        .collect::<Result<Vec<_>>>()?;
    let assignment = match_family(&images, target)
        .map_err(|msg| Error::InvariantViolation(format!("family mismatch: {msg}")))?;
    Ok(StatisticalMorphism {
        source: source.clone(),
        target: target.clone(),
        map: map.clone(),
        kernel: kernel_from_map(map),
        assignment,
    })
}

/// ker_Q(f): all source members whose image is observationally identical to
/// the indexed target member.
pub fn morphism_kernel_at(f: &StatisticalMorphism, q_index: usize) -> Result<Vec<usize>> {
    if q_index >= f.target.len() {
        return Err(Error::IndexOutOfRange {
            index: q_index,
            len: f.target.len(),
        });
    }
    let q = &f.target.member(q_index).measure;
    let mut members = Vec::new();
    for i in 0..f.source.len() {
        if f.image_of(i)?.agrees_on(f.target.sigma(), q) {
            members.push(i);
        }
    }
    Ok(members)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReverseKernelOutcome {
    Kernel(MarkovKernel),
    Infeasible(InfeasibilityCertificate),
}

/// True iff applying `kernel` to every image measure reproduces the paired
/// source measure exactly on every source atom.
pub fn transports(kernel: &MarkovKernel, pairs: &[(RationalMeasure, RationalMeasure)]) -> bool {
    pairs
        .iter()
        .all(|(source, image)| match apply_kernel(kernel, image) {
            Ok(back) => back.agrees_on(kernel.codomain(), source),
            Err(_) => false,
        })
}

fn reverse_feasibility_problem(
    source_sigma: &SigmaAlgebra,
    target_sigma: &SigmaAlgebra,
    pairs: &[(RationalMeasure, RationalMeasure)],
) -> FeasibilityProblem {
    let n = source_sigma.atom_count();
    let m = target_sigma.atom_count();
    let vars = m * n;
    let mut constraints = Vec::new();
    // row-stochasticity of every kernel row
    for y in 0..m {
        let mut row = vec![Rational::zero(); vars];
        for x in 0..n {
            row[y * n + x] = Rational::from_integer(1.into());
        }
        constraints.push((row, Rational::from_integer(1.into())));
    }
    // transport equalities: Σ_y image(y)·k[y][x] = source(x)
    for (source, image) in pairs {
        let image_atoms = image.atom_masses(target_sigma);
        let source_atoms = source.atom_masses(source_sigma);
        for x in 0..n {
            let mut row = vec![Rational::zero(); vars];
            for (y, mass) in image_atoms.iter().enumerate() {
                row[y * n + x] = mass.clone();
            }
            constraints.push((row, source_atoms[x].clone()));
        }
    }
    FeasibilityProblem::new(vars, constraints)
}

/// Searches for a row-stochastic kernel from the image space back to the
/// source space that reproduces every paired source measure exactly.
/// Returns a verified kernel or a verified infeasibility certificate; both
/// sides are re-checked by direct exact arithmetic after solving.
pub fn find_reverse_kernel(
    source_sigma: &SigmaAlgebra,
    target_sigma: &SigmaAlgebra,
    pairs: &[(RationalMeasure, RationalMeasure)],
) -> Result<ReverseKernelOutcome> {
    for (source, image) in pairs {
        if source.space() != source_sigma.space() || image.space() != target_sigma.space() {
            return Err(Error::DimensionMismatch(
                "reverse-kernel pair on unexpected spaces".into(),
            ));
        }
    }
    let problem = reverse_feasibility_problem(source_sigma, target_sigma, pairs);
    let n = source_sigma.atom_count();
    match solve_feasibility(&problem) {
        FeasibilityOutcome::Feasible(x) => {
            if !verify_feasible(&problem, &x) {
                return Err(Error::InvariantViolation(
                    "solver returned an unverified point".into(),
                ));
            }
            let rows = (0..target_sigma.atom_count())
                .map(|y| x[y * n..(y + 1) * n].to_vec())
                .collect();
            let kernel = MarkovKernel::new(target_sigma.clone(), source_sigma.clone(), rows)?;
            if !transports(&kernel, pairs) {
                return Err(Error::InvariantViolation(
                    "solved kernel fails the transport re-check".into(),
                ));
            }
            Ok(ReverseKernelOutcome::Kernel(kernel))
        }
        FeasibilityOutcome::Infeasible(cert) => {
            if !verify_infeasible(&problem, &cert) {
                return Err(Error::InvariantViolation(
                    "solver returned an unverified certificate".into(),
                ));
            }
            Ok(ReverseKernelOutcome::Infeasible(cert))
        }
    }
}

/// Rebuilds the feasibility problem a reverse-kernel certificate refers to,
/// so certificates can be re-validated independently of the solve.
pub fn reverse_kernel_problem(
    source_sigma: &SigmaAlgebra,
    target_sigma: &SigmaAlgebra,
    pairs: &[(RationalMeasure, RationalMeasure)],
) -> FeasibilityProblem {
    reverse_feasibility_problem(source_sigma, target_sigma, pairs)
}

/// Classification of a morphism at the level of observational-identity
/// classes, with witnesses attached on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismClassification {
    pub mono: bool,
    pub epi: bool,
    /// The set-level isomorphism notion: mono ∧ epi.
    pub iso_naive: bool,
    /// The operational notion: a reverse kernel exists and both round trips
    /// stay inside the correct observational classes.
    pub iso_reverse_kernel: bool,
    pub reverse_kernel: Option<MarkovKernel>,
    pub infeasibility: Option<InfeasibilityCertificate>,
    /// (source i, source j, separating source atom) with identical images.
    pub mono_witness: Option<(usize, usize, usize)>,
    /// Name of a target member whose class is hit by no image.
    pub epi_witness: Option<String>,
    /// (member name, forward?) for the first failing round trip.
    pub round_trip_witness: Option<(String, bool)>,
}

pub fn classify_morphism(f: &StatisticalMorphism) -> Result<MorphismClassification> {
    let source = &f.source;
    let target = &f.target;
    let images: Vec<RationalMeasure> = (0..source.len())
        .map(|i| f.image_of(i))
        .collect::<Result<Vec<_>>>()?;

    // mono: members with identical images must be observationally identical
    let mut mono_witness = None;
    'outer: for i in 0..source.len() {
        for j in (i + 1)..source.len() {
            if images[i].agrees_on(target.sigma(), &images[j]) {
                if let Some(atom) = source
                    .member(i)
                    .measure
                    .first_differing_atom(source.sigma(), &source.member(j).measure)
                {
                    mono_witness = Some((i, j, atom));
                    break 'outer;
                }
            }
        }
    }
    let mono = mono_witness.is_none();

    // epi: every target class is hit by some image
    let target_partition = l1_identity_partition(target);
    let mut epi_witness = None;
    for rep in target_partition.representatives() {
        let rep_measure = &target.member(rep).measure;
        if !images
            .iter()
            .any(|im| im.agrees_on(target.sigma(), rep_measure))
        {
            epi_witness = Some(target.member(rep).name.clone());
            break;
        }
    }
    let epi = epi_witness.is_none();

    // reverse kernel: candidate closed form first, exact solve otherwise
    let source_partition = l1_identity_partition(source);
    let pairs: Vec<(RationalMeasure, RationalMeasure)> = source_partition
        .representatives()
        .iter()
        .map(|&i| (source.member(i).measure.clone(), images[i].clone()))
        .collect();
    let candidate = dual_conditional(&f.kernel, &source.effective_dominating())?;
    let outcome = if transports(candidate.kernel(), &pairs) {
        ReverseKernelOutcome::Kernel(candidate.kernel().clone())
    } else {
        find_reverse_kernel(source.sigma(), target.sigma(), &pairs)?
    };

    let mut reverse_kernel = None;
    let mut infeasibility = None;
    let mut round_trip_witness = None;
    let mut iso_reverse_kernel = false;
    match outcome {
        ReverseKernelOutcome::Kernel(kernel) => {
            round_trip_witness = round_trip_failure(f, &kernel, &images)?;
            iso_reverse_kernel = round_trip_witness.is_none();
            reverse_kernel = Some(kernel);
        }
        ReverseKernelOutcome::Infeasible(cert) => {
            infeasibility = Some(cert);
        }
    }

    Ok(MorphismClassification {
        mono,
        epi,
        iso_naive: mono && epi,
        iso_reverse_kernel,
        reverse_kernel,
        infeasibility,
        mono_witness,
        epi_witness,
        round_trip_witness,
    })
}

/// Both round trips of Lemma-style two-sided inversion, re-checked exactly:
/// (i) pulling every image back lands in the member's source class, and
/// (ii) pushing every target member's pullback forward lands in its class.
fn round_trip_failure(
    f: &StatisticalMorphism,
    reverse: &MarkovKernel,
    images: &[RationalMeasure],
) -> Result<Option<(String, bool)>> {
    for (i, image) in images.iter().enumerate() {
        let back = apply_kernel(reverse, image)?;
        if !back.agrees_on(f.source.sigma(), &f.source.member(i).measure) {
            return Ok(Some((f.source.member(i).name.clone(), true)));
        }
    }
    for member in f.target.family() {
        let back = apply_kernel(reverse, &member.measure)?;
        let again = apply_kernel(&f.kernel, &back)?;
        if !again.agrees_on(f.target.sigma(), &member.measure) {
            return Ok(Some((member.name.clone(), false)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use crate::space::FiniteSpace;

    fn power(labels: &[&str]) -> SigmaAlgebra {
        SigmaAlgebra::power_set(FiniteSpace::new(labels.iter().copied()).unwrap())
    }

    fn coin_pair_model() -> FiniteModel {
        let sigma = power(&["00", "01", "10", "11"]);
        let family = [(1i64, 4i64), (1, 2), (3, 4)]
            .iter()
            .map(|&(n, d)| {
                let p = rat(n, d);
                let q = rat(d - n, d);
                FamilyMember {
                    name: format!("P_{n}/{d}"),
                    measure: RationalMeasure::probability(
                        sigma.space().clone(),
                        vec![&q * &q, &q * &p, &p * &q, &p * &p],
                    )
                    .unwrap(),
                }
            })
            .collect();
        FiniteModel::new(sigma, family, None).unwrap()
    }

    fn sum_map() -> MeasurableMap {
        MeasurableMap::new(
            power(&["00", "01", "10", "11"]),
            power(&["0", "1", "2"]),
            vec![0, 1, 1, 2],
        )
        .unwrap()
    }

    fn first_map() -> MeasurableMap {
        MeasurableMap::new(
            power(&["00", "01", "10", "11"]),
            power(&["0", "1"]),
            vec![0, 0, 1, 1],
        )
        .unwrap()
    }

    #[test]
    fn induced_sum_morphism_has_the_expected_target_family() {
        let f = induce_morphism(&coin_pair_model(), &sum_map()).unwrap();
        let masses: Vec<Vec<Rational>> = f
            .target()
            .family()
            .iter()
            .map(|m| m.measure.masses().to_vec())
            .collect();
        assert_eq!(
            masses,
            vec![
                vec![rat(9, 16), rat(6, 16), rat(1, 16)],
                vec![rat(1, 4), rat(1, 2), rat(1, 4)],
                vec![rat(1, 16), rat(6, 16), rat(9, 16)],
            ]
        );
    }

    #[test]
    fn identity_morphism_is_an_isomorphism_both_ways() {
        let model = coin_pair_model();
        let id = MeasurableMap::identity(model.sigma().clone());
        let f = induce_morphism(&model, &id).unwrap();
        let c = classify_morphism(&f).unwrap();
        assert!(c.mono && c.epi && c.iso_naive && c.iso_reverse_kernel);
        assert_eq!(
            c.reverse_kernel.unwrap(),
            MarkovKernel::identity(model.sigma().clone())
        );
    }

    #[test]
    fn constant_map_collapses_all_classes() {
        let model = coin_pair_model();
        let constant =
            MeasurableMap::new(model.sigma().clone(), power(&["z"]), vec![0, 0, 0, 0]).unwrap();
        let f = induce_morphism(&model, &constant).unwrap();
        assert_eq!(morphism_kernel_at(&f, 0).unwrap(), vec![0, 1, 2]);
        let c = classify_morphism(&f).unwrap();
        assert!(!c.mono);
        assert!(c.epi);
    }

    #[test]
    fn sum_morphism_reverse_kernel_is_the_fiber_uniform_dual() {
        let f = induce_morphism(&coin_pair_model(), &sum_map()).unwrap();
        let c = classify_morphism(&f).unwrap();
        assert!(c.mono && c.epi && c.iso_naive && c.iso_reverse_kernel);
        let expected = vec![
            vec![rat_int(1), rat_int(0), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat(1, 2), rat(1, 2), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(0), rat_int(1)],
        ];
        assert_eq!(c.reverse_kernel.unwrap().rows(), expected.as_slice());
    }

    #[test]
    fn first_coordinate_morphism_separates_the_two_iso_notions() {
        let f = induce_morphism(&coin_pair_model(), &first_map()).unwrap();
        let c = classify_morphism(&f).unwrap();
        assert!(
            c.mono,
            "three distinct Bernoulli images keep the family separated"
        );
        assert!(c.epi);
        assert!(c.iso_naive);
        assert!(
            !c.iso_reverse_kernel,
            "no stochastic matrix recovers a quadratic family from an affine image"
        );
        let cert = c.infeasibility.expect("infeasibility certificate");
        let model = coin_pair_model();
        let images: Vec<RationalMeasure> = (0..3).map(|i| f.image_of(i).unwrap()).collect();
        let pairs: Vec<_> = (0..3)
            .map(|i| (model.member(i).measure.clone(), images[i].clone()))
            .collect();
        let problem = reverse_kernel_problem(model.sigma(), f.target().sigma(), &pairs);
        assert!(verify_infeasible(&problem, &cert));
    }

    #[test]
    fn kernel_at_picks_the_matching_member() {
        let f = induce_morphism(&coin_pair_model(), &first_map()).unwrap();
        assert_eq!(morphism_kernel_at(&f, 0).unwrap(), vec![0]);
        let id = MeasurableMap::identity(coin_pair_model().sigma().clone());
        let g = induce_morphism(&coin_pair_model(), &id).unwrap();
        assert_eq!(morphism_kernel_at(&g, 2).unwrap(), vec![2]);
        assert_eq!(
            morphism_kernel_at(&g, 7),
            Err(Error::IndexOutOfRange { index: 7, len: 3 })
        );
    }

    #[test]
    fn find_reverse_kernel_on_identity_pairs_returns_identity() {
        let model = coin_pair_model();
        let pairs: Vec<_> = model
            .family()
            .iter()
            .map(|m| (m.measure.clone(), m.measure.clone()))
            .collect();
        match find_reverse_kernel(model.sigma(), model.sigma(), &pairs).unwrap() {
            ReverseKernelOutcome::Kernel(k) => {
                assert!(transports(&k, &pairs));
            }
            other => panic!("expected kernel, got {other:?}"),
        }
    }
}
