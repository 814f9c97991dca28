//! Estimands, the coarsest topology they induce on a model family,
//! canonical topologies, Kolmogorov quotients and Kolmogorov equivalence.
//!
//! Topologies live on index sets (family indices or quotient-class indices)
//! and are stored as the full generated open-set family over a bitmask
//! ground of at most 64 elements, plenty for desk-scale model families.

use std::collections::{BTreeMap, BTreeSet};

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::measure::RationalMeasure;
use crate::model::FiniteModel;
use crate::rational::Rational;
use crate::space::SigmaAlgebra;

/// Default bound on the Kolmogorov-quotient class count for the
/// homeomorphism search; override per call or via the CLI environment.
pub const DEFAULT_SEARCH_BOUND: usize = 8;

/// A permutation-symmetric exact evaluation of a distribution against a
/// tuple of observed events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Estimand {
    /// ∏ᵢ P(Aᵢ) over a sample of length n.
    Likelihood { sample_length: usize },
    /// P(A₁) on a single event.
    EventProbability,
    /// Σ over points of weight·mass; the point-weight table is fixed.
    Moment { weights: Vec<Rational> },
}

impl Estimand {
    pub fn likelihood(sample_length: usize) -> Result<Self> {
        if sample_length == 0 {
            return Err(Error::InvariantViolation(
                "sample length must be at least 1".into(),
            ));
        }
        Ok(Estimand::Likelihood { sample_length })
    }

    pub fn sample_length(&self) -> usize {
        match self {
            Estimand::Likelihood { sample_length } => *sample_length,
            Estimand::EventProbability | Estimand::Moment { .. } => 1,
        }
    }
}

/// Evaluates the estimand exactly. Events must be measurable and as many as
/// the sample length; the likelihood is invariant under permuting them.
pub fn evaluate_estimand(
    estimand: &Estimand,
    p: &RationalMeasure,
    sigma: &SigmaAlgebra,
    events: &[BTreeSet<usize>],
) -> Result<Rational> {
    if sigma.space() != p.space() {
        return Err(Error::SpaceMismatch(
            "σ-algebra not on the measure's space".into(),
        ));
    }
    if events.len() != estimand.sample_length() {
        return Err(Error::DimensionMismatch(format!(
            "{} events supplied for sample length {}",
            events.len(),
            estimand.sample_length()
        )));
    }
    for event in events {
        if !sigma.is_event_measurable(event) {
            return Err(Error::NonMeasurableEvent);
        }
    }
    match estimand {
        Estimand::Likelihood { .. } => Ok(events
            .iter()
            .map(|event| p.event_mass(event.iter().copied()))
            .product()),
        Estimand::EventProbability => Ok(p.event_mass(events[0].iter().copied())),
        Estimand::Moment { weights } => {
            if weights.len() != p.space().len() {
                return Err(Error::DimensionMismatch(
                    "weight table size mismatch".into(),
                ));
            }
            Ok(weights.iter().zip(p.masses()).map(|(w, m)| w * m).sum())
        }
    }
}

fn tuple_values(
    estimand: &Estimand,
    atom_masses: &[Rational],
    moment_value: &Rational,
    tuple: &[usize],
) -> Rational {
    match estimand {
        Estimand::Likelihood { .. } | Estimand::EventProbability => {
            tuple.iter().map(|&a| atom_masses[a].clone()).product()
        }
        Estimand::Moment { .. } => moment_value.clone(),
    }
}

/// The pseudometric d(P,Q) = ‖ε_P − ε_Q‖₁ over the n-fold atom tuples,
/// weighted by the dominating measure's product masses. Entries are zero
/// exactly when the two members are indistinguishable by the estimand.
pub fn estimand_pseudometric(
    estimand: &Estimand,
    model: &FiniteModel,
) -> Result<Vec<Vec<Rational>>> {
    let sigma = model.sigma();
    let mu = model.effective_dominating();
    let mu_atoms = mu.atom_masses(sigma);
    let n = estimand.sample_length();
    let atom_count = sigma.atom_count();

    let member_atoms: Vec<Vec<Rational>> = model
        .family()
        .iter()
        .map(|m| m.measure.atom_masses(sigma))
        .collect();
    let moment_values: Vec<Rational> = match estimand {
        Estimand::Moment { weights } => {
            if weights.len() != model.space().len() {
                return Err(Error::DimensionMismatch(
                    "weight table size mismatch".into(),
                ));
            }
            model
                .family()
                .iter()
                .map(|m| {
                    weights
                        .iter()
                        .zip(m.measure.masses())
                        .map(|(w, v)| w * v)
                        .sum()
                })
                .collect()
        }
        _ => vec![Rational::zero(); model.len()],
    };

    let k = model.len();
    let mut matrix = vec![vec![Rational::zero(); k]; k];
    let mut tuple = vec![0usize; n];
    loop {
        let weight: Rational = tuple.iter().map(|&a| mu_atoms[a].clone()).product();
        if !weight.is_zero() {
            let values: Vec<Rational> = (0..k)
                .map(|i| tuple_values(estimand, &member_atoms[i], &moment_values[i], &tuple))
                .collect();
            for i in 0..k {
                for j in (i + 1)..k {
                    let delta = crate::rational::abs(&(values[i].clone() - &values[j])) * &weight;
                    matrix[i][j] += &delta;
                    matrix[j][i] += delta;
                }
            }
        }
        // advance the atom-tuple odometer
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(matrix);
            }
            tuple[pos] += 1;
            if tuple[pos] < atom_count {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
    }
}

/// An open-set family over an index set, closed under union and
/// intersection and containing the empty set and the ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTopology {
    ground: usize,
    opens: Vec<u64>,
}

impl FiniteTopology {
    fn full_mask(ground: usize) -> u64 {
        if ground == 64 {
            u64::MAX
        } else {
            (1u64 << ground) - 1
        }
    }

    fn check_ground(ground: usize) -> Result<()> {
        if ground == 0 {
            return Err(Error::InvariantViolation(
                "topology ground must be nonempty".into(),
            ));
        }
        if ground > 64 {
            return Err(Error::InvariantViolation(format!(
                "topology ground of {ground} elements exceeds the supported 64"
            )));
        }
        Ok(())
    }

    /// Generates the coarsest topology containing the given subbase sets.
    pub fn generate<I>(ground: usize, subbase: I) -> Result<Self>
    where
        I: IntoIterator<Item = BTreeSet<usize>>,
    {
        Self::check_ground(ground)?;
        let full = Self::full_mask(ground);
        let mut opens: BTreeSet<u64> = BTreeSet::from([0, full]);
        for set in subbase {
            let mut mask = 0u64;
            for &p in &set {
                if p >= ground {
                    return Err(Error::IndexOutOfRange {
                        index: p,
                        len: ground,
                    });
                }
                mask |= 1 << p;
            }
            opens.insert(mask);
        }
        loop {
            let snapshot: Vec<u64> = opens.iter().copied().collect();
            let before = opens.len();
            for (i, &x) in snapshot.iter().enumerate() {
                for &y in &snapshot[i + 1..] {
                    opens.insert(x | y);
                    opens.insert(x & y);
                }
            }
            if opens.len() == before {
                break;
            }
        }
        Ok(Self {
            ground,
            opens: opens.into_iter().collect(),
        })
    }

    /// Validates an explicitly given open-set family.
    pub fn from_opens<I>(ground: usize, opens: I) -> Result<Self>
    where
        I: IntoIterator<Item = BTreeSet<usize>>,
    {
        let built = Self::generate(ground, opens)?;
        Ok(built)
    }

    pub fn discrete(ground: usize) -> Result<Self> {
        Self::generate(ground, (0..ground).map(|i| BTreeSet::from([i])))
    }

    pub fn indiscrete(ground: usize) -> Result<Self> {
        Self::generate(ground, std::iter::empty())
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn open_count(&self) -> usize {
        self.opens.len()
    }

    pub(crate) fn open_masks(&self) -> &[u64] {
        &self.opens
    }

    pub fn opens(&self) -> Vec<BTreeSet<usize>> {
        self.opens
            .iter()
            .map(|&mask| (0..self.ground).filter(|&p| mask & (1 << p) != 0).collect())
            .collect()
    }

    pub fn is_open(&self, set: &BTreeSet<usize>) -> bool {
        let mut mask = 0u64;
        for &p in set {
            if p >= self.ground {
                return false;
            }
            mask |= 1 << p;
        }
        self.opens.binary_search(&mask).is_ok()
    }

    /// Points grouped by membership in every open (the topological
    /// indistinguishability partition), classes ordered by smallest member.
    pub fn indistinguishability_classes(&self) -> Vec<Vec<usize>> {
        let mut groups: BTreeMap<Vec<bool>, Vec<usize>> = BTreeMap::new();
        for p in 0..self.ground {
            let signature: Vec<bool> = self
                .opens
                .iter()
                .map(|&mask| mask & (1 << p) != 0)
                .collect();
            groups.entry(signature).or_default().push(p);
        }
        let mut classes: Vec<Vec<usize>> = groups.into_values().collect();
        classes.sort_by_key(|c| c[0]);
        classes
    }

    /// T0 iff every indistinguishability class is a single point.
    pub fn is_t0(&self) -> bool {
        self.indistinguishability_classes()
            .iter()
            .all(|c| c.len() == 1)
    }
}

/// Validates that a matrix is a pseudometric (symmetric, nonnegative, zero
/// diagonal, triangle inequality) and builds the coarsest topology whose
/// opens are generated by the balls {j : d(i,j) < r} over all centers i and
/// all realized thresholds r. Two indices are indistinguishable in the
/// result iff their distance is zero.
pub fn coarsest_topology(dist: &[Vec<Rational>]) -> Result<FiniteTopology> {
    let n = dist.len();
    if n == 0 {
        return Err(Error::MalformedMatrix("empty matrix".into()));
    }
    for (i, row) in dist.iter().enumerate() {
        if row.len() != n {
            return Err(Error::MalformedMatrix(format!(
                "row {i} has length {}",
                row.len()
            )));
        }
        if !row[i].is_zero() {
            return Err(Error::MalformedMatrix(format!("nonzero diagonal at {i}")));
        }
        for (j, value) in row.iter().enumerate() {
            if value.is_negative() {
                return Err(Error::MalformedMatrix(format!(
                    "negative entry at ({i},{j})"
                )));
            }
            if value != &dist[j][i] {
                return Err(Error::MalformedMatrix(format!("asymmetry at ({i},{j})")));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if dist[i][j] > dist[i][k].clone() + &dist[k][j] {
                    return Err(Error::MalformedMatrix(format!(
                        "triangle inequality fails at ({i},{j},{k})"
                    )));
                }
            }
        }
    }
    let thresholds: BTreeSet<Rational> = dist.iter().flatten().cloned().collect();
    let mut subbase = Vec::new();
    for i in 0..n {
        for r in &thresholds {
            let ball: BTreeSet<usize> = (0..n).filter(|&j| &dist[i][j] < r).collect();
            subbase.push(ball);
        }
    }
    FiniteTopology::generate(n, subbase)
}

/// The canonical topology of a model family: the coarsest topology making
/// the likelihood estimand continuous. Its indistinguishability partition
/// coincides exactly with the observational-identity partition.
pub fn canonical_topology(model: &FiniteModel) -> Result<FiniteTopology> {
    let estimand = Estimand::likelihood(1)?;
    let matrix = estimand_pseudometric(&estimand, model)?;
    coarsest_topology(&matrix)
}

/// A topology quotiented by topological indistinguishability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientMap {
    classes: Vec<Vec<usize>>,
    projection: Vec<usize>,
    quotient: FiniteTopology,
}

impl QuotientMap {
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    pub fn class_of(&self, point: usize) -> usize {
        self.projection[point]
    }

    pub fn quotient(&self) -> &FiniteTopology {
        &self.quotient
    }
}

/// The Kolmogorov quotient: classes are the indistinguishability partition,
/// quotient opens the images of opens. The result is always T0 and the
/// construction is idempotent.
pub fn kolmogorov_quotient(topology: &FiniteTopology) -> QuotientMap {
    let classes = topology.indistinguishability_classes();
    let mut projection = vec![0usize; topology.ground()];
    for (c, class) in classes.iter().enumerate() {
        for &p in class {
            projection[p] = c;
        }
    }
    let opens: BTreeSet<u64> = topology
        .open_masks()
        .iter()
        .map(|&mask| {
            let mut image = 0u64;
            for (p, &class) in projection.iter().enumerate() {
                if mask & (1 << p) != 0 {
                    image |= 1 << class;
                }
            }
            image
        })
        .collect();
    let quotient = FiniteTopology {
        ground: classes.len(),
        opens: opens.into_iter().collect(),
    };
    QuotientMap {
        classes,
        projection,
        quotient,
    }
}

/// Searches for a bijection between the Kolmogorov-quotient classes of two
/// topologies that maps opens onto opens. Open-set counts and open-size
/// multisets are compared first; the bijection search then runs in
/// lexicographic order, so the returned witness is canonical.
pub fn is_kolmogorov_equivalent(
    a: &FiniteTopology,
    b: &FiniteTopology,
) -> Result<Option<Vec<usize>>> {
    is_kolmogorov_equivalent_with_bound(a, b, DEFAULT_SEARCH_BOUND)
}

pub fn is_kolmogorov_equivalent_with_bound(
    a: &FiniteTopology,
    b: &FiniteTopology,
    bound: usize,
) -> Result<Option<Vec<usize>>> {
    let qa = kolmogorov_quotient(a);
    let qb = kolmogorov_quotient(b);
    let n = qa.quotient().ground();
    if n != qb.quotient().ground() {
        return Ok(None);
    }
    if n > bound {
        return Err(Error::SearchBoundExceeded { classes: n, bound });
    }
    if qa.quotient().open_count() != qb.quotient().open_count() {
        return Ok(None);
    }
    let size_multiset = |t: &FiniteTopology| {
        let mut sizes: Vec<u32> = t.open_masks().iter().map(|m| m.count_ones()).collect();
        sizes.sort_unstable();
        sizes
    };
    if size_multiset(qa.quotient()) != size_multiset(qb.quotient()) {
        return Ok(None);
    }
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    if search_bijection(qa.quotient(), qb.quotient(), &mut perm, &mut used) {
        Ok(Some(perm))
    } else {
        Ok(None)
    }
}

fn search_bijection(
    a: &FiniteTopology,
    b: &FiniteTopology,
    perm: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    let n = a.ground();
    if perm.len() == n {
        return a.open_masks().iter().all(|&mask| {
            let mut image = 0u64;
            for p in 0..n {
                if mask & (1 << p) != 0 {
                    image |= 1 << perm[p];
                }
            }
            b.open_masks().binary_search(&image).is_ok()
        });
    }
    for candidate in 0..n {
        if used[candidate] {
            continue;
        }
        perm.push(candidate);
        used[candidate] = true;
        if search_bijection(a, b, perm, used) {
            return true;
        }
        perm.pop();
        used[candidate] = false;
    }
    false
}
