//! Sufficiency, completeness, and statistical equivalence decided by three
//! independent routes that are cross-checked against each other.
//!
//! * route `iso`: a reverse Markov kernel is solved for exactly and both
//!   round trips are re-verified;
//! * route `detailed-balance`: the identity is checked against the
//!   canonical backward candidate, the dual conditional of the dominating
//!   mixture (if any backward kernel satisfies balance, that one does);
//! * route `suff-complete`: sufficiency of the statistic on the class
//!   representatives plus completeness of the image σ-algebra.

use std::collections::BTreeSet;

use num::Zero;

use crate::error::{Error, Result};
use crate::kernel::{
    apply_kernel, detailed_balance_check, dual_conditional, kernel_from_map, regular_conditional,
    MarkovKernel,
};
use crate::linalg::null_space;
use crate::map::{image_sigma, pushforward, MeasurableMap};
use crate::measure::RationalMeasure;
use crate::model::{l1_identity_partition, FiniteModel};
use crate::morphism::{classify_morphism, induce_morphism_onto};
use crate::rational::Rational;
use crate::report::{CertificatePayload, CheckReport, Witness};
use crate::space::SigmaAlgebra;

/// Sufficiency of the statistic for the selected subfamily: every member's
/// dual conditional must agree with the dominating measure's dual on all
/// conditioning atoms where both are defined.
pub fn is_sufficient(
    model: &FiniteModel,
    map: &MeasurableMap,
    subfamily: &[usize],
) -> Result<CheckReport> {
    if map.domain() != model.sigma() {
        return Err(Error::SpaceMismatch(
            "map domain does not match the model".into(),
        ));
    }
    for &i in subfamily {
        if i >= model.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: model.len(),
            });
        }
    }
    let kernel = kernel_from_map(map);
    let mu = model.effective_dominating();
    let dual_mu = dual_conditional(&kernel, &mu)?;
    let x_atoms = map.domain().atom_count();
    let y_atoms = map.codomain().atom_count();
    let mut checked = 0;
    for &i in subfamily {
        let member = model.member(i);
        let dual_p = dual_conditional(&kernel, &member.measure)?;
        for y in 0..y_atoms {
            if !(dual_p.is_defined(y) && dual_mu.is_defined(y)) {
                continue;
            }
            for x in 0..x_atoms {
                checked += 1;
                if dual_p.probability(y, x) != dual_mu.probability(y, x) {
                    return Ok(CheckReport::fail(
                        "sufficiency",
                        checked,
                        Witness::MemberAtomPair {
                            member: member.name.clone(),
                            x_atom: x,
                            y_atom: y,
                        },
                    ));
                }
            }
        }
    }
    Ok(CheckReport::pass("sufficiency", checked))
}

/// Completeness of the statistic for the target model: the conditional
/// expectation onto the σ-algebra generated by the images of the
/// source-measurable events must annihilate no nonzero a.e. class. Decided
/// by an exact null-space computation; a null-space basis vector is the
/// density counterexample on failure.
pub fn is_complete(
    target: &FiniteModel,
    map: &MeasurableMap,
    source_sigma: &SigmaAlgebra,
) -> Result<CheckReport> {
    if map.codomain().space() != target.space() {
        return Err(Error::SpaceMismatch(
            "map codomain does not match the target model".into(),
        ));
    }
    let generated = image_sigma(map, source_sigma)?;
    let nu = target.effective_dominating();
    let positive_points: Vec<usize> = (0..target.space().len())
        .filter(|&p| !nu.mass_at(p).is_zero())
        .collect();
    let mut rows = Vec::new();
    for g in 0..generated.atom_count() {
        let block_mass = nu.atom_mass(&generated, g);
        if block_mass.is_zero() {
            continue;
        }
        let block: BTreeSet<usize> = generated.atom(g).iter().copied().collect();
        let row: Vec<Rational> = positive_points
            .iter()
            .map(|&p| {
                if block.contains(&p) {
                    nu.mass_at(p) / block_mass.clone()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        rows.push(row);
    }
    let checked = positive_points.len();
    let basis = null_space(&rows, positive_points.len());
    match basis.first() {
        None => Ok(CheckReport::pass("completeness", checked)),
        Some(vector) => {
            let mut values = vec![Rational::zero(); target.space().len()];
            for (&point, value) in positive_points.iter().zip(vector) {
                values[point] = value.clone();
            }
            Ok(CheckReport::fail(
                "completeness",
                checked,
                Witness::NullDensity { values },
            ))
        }
    }
}

/// The σ-algebra on the target space generated by the images of the
/// source-measurable events; exposed so callers can check the generator.
pub fn generated_image_sigma(map: &MeasurableMap, source: &SigmaAlgebra) -> Result<SigmaAlgebra> {
    image_sigma(map, source)
}

/// The joint outcome of the three equivalence routes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceVerdict {
    pub route_iso: CheckReport,
    pub route_detailed_balance: CheckReport,
    pub route_suff_complete: CheckReport,
    /// True iff the three verdicts are identical.
    pub agree: bool,
    pub forward_kernel: MarkovKernel,
    pub reverse_kernel: Option<MarkovKernel>,
}

impl EquivalenceVerdict {
    pub fn equivalent(&self) -> bool {
        self.route_iso.passed()
            && self.route_detailed_balance.passed()
            && self.route_suff_complete.passed()
    }

    fn compute_agree(&mut self) {
        let verdicts = [
            self.route_iso.verdict,
            self.route_detailed_balance.verdict,
            self.route_suff_complete.verdict,
        ];
        self.agree = verdicts.iter().all(|v| *v == verdicts[0]);
    }
}

/// Checks that the pushforward of the `a` family and the `b` family generate
/// the same observational classes. Returns the failing report when not.
fn precondition_report(
    a: &FiniteModel,
    b: &FiniteModel,
    map: &MeasurableMap,
) -> Result<std::result::Result<(), CheckReport>> {
    let images: Vec<RationalMeasure> = a
        .family()
        .iter()
        .map(|m| pushforward(map, &m.measure))
        .collect::<Result<Vec<_>>>()?;
    let mut checked = 0;
    for (i, image) in images.iter().enumerate() {
        checked += 1;
        if !b
            .family()
            .iter()
            .any(|m| image.agrees_on(b.sigma(), &m.measure))
        {
            return Ok(Err(CheckReport::fail(
                "precondition",
                checked,
                Witness::UnmatchedDistribution {
                    name: a.member(i).name.clone(),
                    in_target: false,
                },
            )));
        }
    }
    for rep in l1_identity_partition(b).representatives() {
        checked += 1;
        let rep_measure = &b.member(rep).measure;
        if !images
            .iter()
            .any(|image| image.agrees_on(b.sigma(), rep_measure))
        {
            return Ok(Err(CheckReport::fail(
                "precondition",
                checked,
                Witness::UnmatchedDistribution {
                    name: b.member(rep).name.clone(),
                    in_target: true,
                },
            )));
        }
    }
    Ok(Ok(()))
}

fn route_iso(aq: &FiniteModel, bq: &FiniteModel, map: &MeasurableMap) -> Result<CheckReport> {
    let f = induce_morphism_onto(aq, map, bq)?;
    let classification = classify_morphism(&f)?;
    if classification.iso_reverse_kernel {
        let kernel = classification
            .reverse_kernel
            .expect("iso verdict carries its kernel");
        Ok(CheckReport::pass("iso", aq.len() + bq.len())
            .with_certificate(CertificatePayload::ReverseKernel(kernel)))
    } else if let Some(cert) = classification.infeasibility {
        Ok(
            CheckReport::fail("iso", aq.len(), Witness::InfeasibleTransport)
                .with_certificate(CertificatePayload::Infeasibility(cert)),
        )
    } else {
        let (member, forward) = classification
            .round_trip_witness
            .expect("non-iso verdict carries a witness");
        Ok(CheckReport::fail(
            "iso",
            aq.len(),
            Witness::RoundTrip { member, forward },
        ))
    }
}

fn route_detailed_balance(aq: &FiniteModel, map: &MeasurableMap) -> Result<CheckReport> {
    let kernel = kernel_from_map(map);
    let mu = aq.effective_dominating();
    let forward = regular_conditional(&kernel, &mu)?;
    let backward = dual_conditional(&kernel, &mu)?;
    let family: Vec<(String, RationalMeasure)> = aq
        .family()
        .iter()
        .map(|m| (m.name.clone(), m.measure.clone()))
        .collect();
    let mut report = detailed_balance_check(&forward, &backward, &family)?;
    if report.passed() {
        report =
            report.with_certificate(CertificatePayload::ReverseKernel(backward.kernel().clone()));
    }
    Ok(report)
}

fn route_suff_complete(
    aq: &FiniteModel,
    bq: &FiniteModel,
    map: &MeasurableMap,
) -> Result<CheckReport> {
    let subfamily: Vec<usize> = (0..aq.len()).collect();
    let suff = is_sufficient(aq, map, &subfamily)?;
    let complete = is_complete(bq, map, aq.sigma())?;
    let checked = suff.checked + complete.checked;
    let mut report = if !suff.passed() {
        CheckReport::fail(
            "suff-complete",
            checked,
            suff.witness.expect("failing check has witness"),
        )
    } else if !complete.passed() {
        CheckReport::fail(
            "suff-complete",
            checked,
            complete.witness.expect("failing check has witness"),
        )
    } else {
        CheckReport::pass("suff-complete", checked)
    };
    if report.passed() {
        let kernel = kernel_from_map(map);
        let backward = dual_conditional(&kernel, &aq.effective_dominating())?;
        report =
            report.with_certificate(CertificatePayload::ReverseKernel(backward.kernel().clone()));
    }
    Ok(report)
}

/// Decides statistical equivalence of two models along a candidate
/// statistic by all three routes. The routes quantify over the models'
/// observational-class representatives; a family mismatch between the
/// pushforward of `a` and the family of `b` fails every route up front.
pub fn check_equivalence(
    a: &FiniteModel,
    b: &FiniteModel,
    map: &MeasurableMap,
) -> Result<EquivalenceVerdict> {
    check_equivalence_with(a, b, map, false)
}

/// As [`check_equivalence`]; with `parallel` the three routes run on
/// separate threads and join in fixed order, so the result is identical by
/// construction.
pub fn check_equivalence_with(
    a: &FiniteModel,
    b: &FiniteModel,
    map: &MeasurableMap,
    parallel: bool,
) -> Result<EquivalenceVerdict> {
    if map.domain() != a.sigma() {
        return Err(Error::SpaceMismatch(
            "map domain does not match model A".into(),
        ));
    }
    if map.codomain() != b.sigma() {
        return Err(Error::SpaceMismatch(
            "map codomain does not match model B".into(),
        ));
    }
    let forward_kernel = kernel_from_map(map);
    if let Err(failure) = precondition_report(a, b, map)? {
        let route = |name: &str| {
            let mut r = failure.clone();
            r.route = format!("{name} (precondition)");
            r
        };
        let mut verdict = EquivalenceVerdict {
            route_iso: route("iso"),
            route_detailed_balance: route("detailed-balance"),
            route_suff_complete: route("suff-complete"),
            agree: true,
            forward_kernel,
            reverse_kernel: None,
        };
        verdict.compute_agree();
        return Ok(verdict);
    }

    let aq = a.quotient();
    let bq = b.quotient();

    let (iso, balance, suff_complete) = if parallel {
        std::thread::scope(|scope| {
            let iso = scope.spawn(|| route_iso(&aq, &bq, map));
            let balance = scope.spawn(|| route_detailed_balance(&aq, map));
            let suff = scope.spawn(|| route_suff_complete(&aq, &bq, map));
            (
                iso.join().expect("route thread panicked"),
                balance.join().expect("route thread panicked"),
                suff.join().expect("route thread panicked"),
            )
        })
    } else {
        (
            route_iso(&aq, &bq, map),
            route_detailed_balance(&aq, map),
            route_suff_complete(&aq, &bq, map),
        )
    };
    let route_iso = iso?;
    let route_detailed_balance = balance?;
    let route_suff_complete = suff_complete?;

    let reverse_kernel = match &route_iso.certificate {
        Some(CertificatePayload::ReverseKernel(k)) => Some(k.clone()),
        _ => None,
    };
    let mut verdict = EquivalenceVerdict {
        route_iso,
        route_detailed_balance,
        route_suff_complete,
        agree: true,
        forward_kernel,
        reverse_kernel,
    };
    verdict.compute_agree();
    Ok(verdict)
}

/// Re-validates an equivalence certificate by direct exact arithmetic:
/// every image lands in a target class, every target class is hit, and both
/// round trips stay inside the correct classes.
pub fn verify_equivalence_certificate(
    a: &FiniteModel,
    b: &FiniteModel,
    forward: &MarkovKernel,
    reverse: &MarkovKernel,
) -> Result<bool> {
    if forward.domain() != a.sigma()
        || forward.codomain() != b.sigma()
        || reverse.domain() != b.sigma()
        || reverse.codomain() != a.sigma()
    {
        return Ok(false);
    }
    let mut images = Vec::with_capacity(a.len());
    for member in a.family() {
        let image = apply_kernel(forward, &member.measure)?;
        if !b
            .family()
            .iter()
            .any(|m| image.agrees_on(b.sigma(), &m.measure))
        {
            return Ok(false);
        }
        let back = apply_kernel(reverse, &image)?;
        if !back.agrees_on(a.sigma(), &member.measure) {
            return Ok(false);
        }
        images.push(image);
    }
    for member in b.family() {
        if !images
            .iter()
            .any(|image| image.agrees_on(b.sigma(), &member.measure))
        {
            return Ok(false);
        }
        let back = apply_kernel(reverse, &member.measure)?;
        let again = apply_kernel(forward, &back)?;
        if !again.agrees_on(b.sigma(), &member.measure) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of the exhaustive map search used to validate the existential
/// quantifier of the equivalence theorem on small spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub maps_searched: usize,
    pub any_pass: bool,
    /// Point assignment of the first passing map in lexicographic order.
    pub passing_assignment: Option<Vec<usize>>,
}

/// Exhaustively searches every measurable point map from `a`'s space to
/// `b`'s space and reports whether any yields a passing equivalence
/// verdict. Spaces larger than `max_points` are rejected.
pub fn equivalence_oracle(
    a: &FiniteModel,
    b: &FiniteModel,
    max_points: usize,
) -> Result<OracleReport> {
    let n = a.space().len();
    let m = b.space().len();
    if n > max_points || m > max_points {
        return Err(Error::SearchBoundExceeded {
            classes: n.max(m),
            bound: max_points,
        });
    }
    let mut assignment = vec![0usize; n];
    let mut maps_searched = 0;
    loop {
        if let Ok(map) =
            MeasurableMap::new(a.sigma().clone(), b.sigma().clone(), assignment.clone())
        {
            maps_searched += 1;
            let verdict = check_equivalence(a, b, &map)?;
            if verdict.equivalent() {
                return Ok(OracleReport {
                    maps_searched,
                    any_pass: true,
                    passing_assignment: Some(assignment),
                });
            }
        }
        // advance the odometer, rightmost digit first (lexicographic order)
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(OracleReport {
                    maps_searched,
                    any_pass: false,
                    passing_assignment: None,
                });
            }
            i -= 1;
            assignment[i] += 1;
            if assignment[i] < m {
                break;
            }
            assignment[i] = 0;
        }
    }
}
