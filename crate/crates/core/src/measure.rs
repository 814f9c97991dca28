//! Exact rational measures, densities, Radon–Nikodym quotients and
//! conditional expectation on finite spaces.
//!
//! "Almost everywhere" is implemented as "on all atoms with positive mass
//! under the stated reference measure"; density values on reference-null
//! points are canonicalized to 0 so equality checks are decidable.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{abs, Rational};
use crate::space::{FiniteSpace, SigmaAlgebra};

/// A nonnegative exact rational mass per point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMeasure {
    space: FiniteSpace,
    mass: Vec<Rational>,
    is_probability: bool,
}

impl RationalMeasure {
    pub fn new(space: FiniteSpace, mass: Vec<Rational>) -> Result<Self> {
        if mass.len() != space.len() {
            return Err(Error::DimensionMismatch(format!(
                "measure has {} masses for {} points",
                mass.len(),
                space.len()
            )));
        }
        if let Some(i) = mass.iter().position(|m| m.is_negative()) {
            return Err(Error::InvariantViolation(format!(
                "negative mass at point {:?}",
                space.label(i)
            )));
        }
        let total: Rational = mass.iter().cloned().sum();
        let is_probability = total == Rational::from_integer(1.into());
        Ok(Self {
            space,
            mass,
            is_probability,
        })
    }

    /// A measure whose masses must sum exactly to 1.
    pub fn probability(space: FiniteSpace, mass: Vec<Rational>) -> Result<Self> {
        let m = Self::new(space, mass)?;
        if !m.is_probability {
            return Err(Error::InvariantViolation(format!(
                "masses sum to {}, expected 1",
                crate::rational::format_rational(&m.total())
            )));
        }
        Ok(m)
    }

    pub fn dirac(space: FiniteSpace, point: usize) -> Result<Self> {
        if point >= space.len() {
            return Err(Error::IndexOutOfRange {
                index: point,
                len: space.len(),
            });
        }
        let mass = (0..space.len())
            .map(|i| {
                if i == point {
                    Rational::from_integer(1.into())
                } else {
                    Rational::zero()
                }
            })
            .collect();
        Self::new(space, mass)
    }

    pub fn uniform(space: FiniteSpace) -> Self {
        let n = space.len() as i64;
        let mass = vec![crate::rational::rat(1, n); space.len()];
        Self::new(space, mass).expect("uniform masses are valid")
    }

    /// The uniform mixture of the given measures (used as the default
    /// dominating measure of a family).
    pub fn mixture(measures: &[&RationalMeasure]) -> Result<Self> {
        let first = measures
            .first()
            .ok_or_else(|| Error::InvariantViolation("mixture of empty family".into()))?;
        let space = first.space.clone();
        let k = crate::rational::rat_int(measures.len() as i64);
        let mut mass = vec![Rational::zero(); space.len()];
        for m in measures {
            if m.space != space {
                return Err(Error::SpaceMismatch(
                    "mixture members on different spaces".into(),
                ));
            }
            for (acc, v) in mass.iter_mut().zip(&m.mass) {
                *acc += v;
            }
        }
        for v in mass.iter_mut() {
            *v /= k.clone();
        }
        Self::new(space, mass)
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn is_probability(&self) -> bool {
        self.is_probability
    }

    pub fn mass_at(&self, point: usize) -> &Rational {
        &self.mass[point]
    }

    pub fn masses(&self) -> &[Rational] {
        &self.mass
    }

    pub fn total(&self) -> Rational {
        self.mass.iter().cloned().sum()
    }

    pub fn event_mass<I: IntoIterator<Item = usize>>(&self, event: I) -> Rational {
        event.into_iter().map(|p| self.mass[p].clone()).sum()
    }

    pub fn atom_mass(&self, sigma: &SigmaAlgebra, atom: usize) -> Rational {
        self.event_mass(sigma.atom(atom).iter().copied())
    }

    /// Masses summed per atom, in canonical atom order.
    pub fn atom_masses(&self, sigma: &SigmaAlgebra) -> Vec<Rational> {
        (0..sigma.atom_count())
            .map(|a| self.atom_mass(sigma, a))
            .collect()
    }

    /// Rescales to total mass 1. Errors on the zero measure.
    pub fn normalized(&self) -> Result<Self> {
        let total = self.total();
        if total.is_zero() {
            return Err(Error::InvariantViolation(
                "cannot normalize the zero measure".into(),
            ));
        }
        let mass = self.mass.iter().map(|m| m / total.clone()).collect();
        Self::new(self.space.clone(), mass)
    }

    /// σ-algebra-relative equality: same mass on every atom.
    pub fn agrees_on(&self, sigma: &SigmaAlgebra, other: &RationalMeasure) -> bool {
        self.space == other.space
            && sigma.space() == &self.space
            && (0..sigma.atom_count())
                .all(|a| self.atom_mass(sigma, a) == other.atom_mass(sigma, a))
    }

    /// First atom on which the two measures differ, if any.
    pub fn first_differing_atom(
        &self,
        sigma: &SigmaAlgebra,
        other: &RationalMeasure,
    ) -> Option<usize> {
        (0..sigma.atom_count()).find(|&a| self.atom_mass(sigma, a) != other.atom_mass(sigma, a))
    }
}

/// A signed exact rational value per point together with its reference
/// measure; an element of L¹ of the reference. Values at reference-null
/// points are canonicalized to 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityVector {
    space: FiniteSpace,
    values: Vec<Rational>,
    reference: RationalMeasure,
}

impl DensityVector {
    pub fn new(
        space: FiniteSpace,
        values: Vec<Rational>,
        reference: RationalMeasure,
    ) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::DimensionMismatch(format!(
                "density has {} values for {} points",
                values.len(),
                space.len()
            )));
        }
        if reference.space() != &space {
            return Err(Error::SpaceMismatch(
                "density reference on a different space".into(),
            ));
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                if reference.mass_at(i).is_zero() {
                    Rational::zero()
                } else {
                    v
                }
            })
            .collect();
        Ok(Self {
            space,
            values,
            reference,
        })
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value_at(&self, point: usize) -> &Rational {
        &self.values[point]
    }

    pub fn reference(&self) -> &RationalMeasure {
        &self.reference
    }

    /// ∫_E d·dref over a point set.
    pub fn integral_over<I: IntoIterator<Item = usize>>(&self, event: I) -> Rational {
        event
            .into_iter()
            .map(|p| self.values[p].clone() * self.reference.mass_at(p))
            .sum()
    }
}

/// True iff every σ-atom that is `mu`-null is also `p`-null.
pub fn is_absolutely_continuous(
    p: &RationalMeasure,
    mu: &RationalMeasure,
    sigma: &SigmaAlgebra,
) -> Result<bool> {
    Ok(absolute_continuity_violation(p, mu, sigma)?.is_none())
}

/// The first witnessing atom where domination fails, if any.
pub fn absolute_continuity_violation(
    p: &RationalMeasure,
    mu: &RationalMeasure,
    sigma: &SigmaAlgebra,
) -> Result<Option<usize>> {
    if p.space() != mu.space() || sigma.space() != p.space() {
        return Err(Error::SpaceMismatch(
            "absolute continuity on mismatched spaces".into(),
        ));
    }
    Ok((0..sigma.atom_count())
        .find(|&a| mu.atom_mass(sigma, a).is_zero() && !p.atom_mass(sigma, a).is_zero()))
}

/// The Radon–Nikodym quotient dp/dmu as a σ-measurable density: constant
/// p(atom)/mu(atom) on mu-positive atoms, 0 on mu-null atoms. Integrating
/// the result against `mu` reproduces `p` on every measurable event.
pub fn radon_nikodym(
    p: &RationalMeasure,
    mu: &RationalMeasure,
    sigma: &SigmaAlgebra,
) -> Result<DensityVector> {
    if let Some(atom_index) = absolute_continuity_violation(p, mu, sigma)? {
        let atom = sigma
            .atom(atom_index)
            .iter()
            .map(|&i| p.space().label(i).to_string())
            .collect();
        return Err(Error::AbsoluteContinuityViolated { atom_index, atom });
    }
    let mut values = vec![Rational::zero(); p.space().len()];
    for a in 0..sigma.atom_count() {
        let mass_mu = mu.atom_mass(sigma, a);
        if mass_mu.is_zero() {
            continue;
        }
        let quotient = p.atom_mass(sigma, a) / mass_mu;
        for &point in sigma.atom(a) {
            values[point] = quotient.clone();
        }
    }
    DensityVector::new(p.space().clone(), values, mu.clone())
}

/// ‖f − g‖₁ against the shared reference measure.
pub fn l1_distance(f: &DensityVector, g: &DensityVector) -> Result<Rational> {
    if f.reference() != g.reference() {
        return Err(Error::ReferenceMismatch);
    }
    Ok(f.values()
        .iter()
        .zip(g.values())
        .zip(f.reference().masses())
        .map(|((a, b), w)| abs(&(a.clone() - b)) * w)
        .sum())
}

/// Conditional expectation of `rho` onto the sub-σ-algebra `sub`: the block
/// average against `nu` on every nu-positive atom of `sub`, 0 elsewhere.
pub fn conditional_expectation(
    rho: &DensityVector,
    sub: &SigmaAlgebra,
    nu: &RationalMeasure,
) -> Result<DensityVector> {
    if sub.space() != rho.space() {
        return Err(Error::NotACoarsening);
    }
    if rho.reference() != nu {
        return Err(Error::ReferenceMismatch);
    }
    let mut values = vec![Rational::zero(); rho.space().len()];
    for a in 0..sub.atom_count() {
        let block_mass = nu.atom_mass(sub, a);
        if block_mass.is_zero() {
            continue;
        }
        let average = rho.integral_over(sub.atom(a).iter().copied()) / block_mass;
        for &point in sub.atom(a) {
            values[point] = average.clone();
        }
    }
    DensityVector::new(rho.space().clone(), values, nu.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn space(labels: &[&str]) -> FiniteSpace {
        FiniteSpace::new(labels.iter().copied()).unwrap()
    }

    fn measure(labels: &[&str], masses: &[(i64, i64)]) -> RationalMeasure {
        let s = space(labels);
        RationalMeasure::new(s, masses.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
    }

    #[test]
    fn absolute_continuity_examples() {
        let s = space(&["a", "b"]);
        let sigma = SigmaAlgebra::power_set(s.clone());
        let uniform = RationalMeasure::uniform(s.clone());
        assert!(is_absolutely_continuous(&uniform, &uniform, &sigma).unwrap());

        let da = RationalMeasure::dirac(s.clone(), 0).unwrap();
        let db = RationalMeasure::dirac(s, 1).unwrap();
        assert!(!is_absolutely_continuous(&da, &db, &sigma).unwrap());
        assert_eq!(
            absolute_continuity_violation(&da, &db, &sigma).unwrap(),
            Some(0)
        );

        let p = measure(&["a", "b", "c"], &[(1, 2), (1, 2), (0, 1)]);
        let mu = measure(&["a", "b", "c"], &[(1, 3), (1, 3), (1, 3)]);
        let sigma3 = SigmaAlgebra::power_set(p.space().clone());
        assert!(is_absolutely_continuous(&p, &mu, &sigma3).unwrap());
    }

    #[test]
    fn radon_nikodym_examples() {
        let sigma = SigmaAlgebra::power_set(space(&["a", "b"]));
        let p = measure(&["a", "b"], &[(1, 2), (1, 2)]);
        let mu = measure(&["a", "b"], &[(1, 4), (3, 4)]);
        let d = radon_nikodym(&p, &mu, &sigma).unwrap();
        assert_eq!(d.values(), &[rat_int(2), rat(2, 3)]);
        // integrating the density against mu reproduces p on every atom
        for a in 0..sigma.atom_count() {
            assert_eq!(
                d.integral_over(sigma.atom(a).iter().copied()),
                p.atom_mass(&sigma, a)
            );
        }

        let identity = radon_nikodym(&mu, &mu, &sigma).unwrap();
        assert_eq!(identity.values(), &[rat_int(1), rat_int(1)]);

        let q = measure(&["a", "b"], &[(0, 1), (1, 1)]);
        let half = measure(&["a", "b"], &[(1, 2), (1, 2)]);
        let d = radon_nikodym(&q, &half, &sigma).unwrap();
        assert_eq!(d.values(), &[rat_int(0), rat_int(2)]);
    }

    #[test]
    fn radon_nikodym_reports_violating_atom() {
        let sigma = SigmaAlgebra::power_set(space(&["a", "b"]));
        let p = measure(&["a", "b"], &[(1, 1), (0, 1)]);
        let mu = measure(&["a", "b"], &[(0, 1), (1, 1)]);
        match radon_nikodym(&p, &mu, &sigma) {
            Err(Error::AbsoluteContinuityViolated { atom_index, atom }) => {
                assert_eq!(atom_index, 0);
                assert_eq!(atom, vec!["a".to_string()]);
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn l1_distance_examples() {
        let s = space(&["a", "b"]);
        let uniform = RationalMeasure::uniform(s.clone());
        let f =
            DensityVector::new(s.clone(), vec![rat_int(1), rat_int(0)], uniform.clone()).unwrap();
        let g =
            DensityVector::new(s.clone(), vec![rat_int(0), rat_int(1)], uniform.clone()).unwrap();
        assert_eq!(l1_distance(&f, &f).unwrap(), rat_int(0));
        assert_eq!(l1_distance(&f, &g).unwrap(), rat_int(1));
    }

    #[test]
    fn l1_distance_between_coin_pair_densities_is_one() {
        // densities of the coin-pair distributions for p=1/4 and p=3/4
        // against the uniform reference; the brute-force sum is 1
        let labels = ["00", "01", "10", "11"];
        let p14 = measure(&labels, &[(9, 16), (3, 16), (3, 16), (1, 16)]);
        let p34 = measure(&labels, &[(1, 16), (3, 16), (3, 16), (9, 16)]);
        let sigma = SigmaAlgebra::power_set(p14.space().clone());
        let uniform = RationalMeasure::uniform(p14.space().clone());
        let f = radon_nikodym(&p14, &uniform, &sigma).unwrap();
        let g = radon_nikodym(&p34, &uniform, &sigma).unwrap();
        assert_eq!(l1_distance(&f, &g).unwrap(), rat_int(1));
    }

    #[test]
    fn conditional_expectation_examples() {
        let s = space(&["a", "b"]);
        let nu = RationalMeasure::uniform(s.clone());
        let rho = DensityVector::new(s.clone(), vec![rat_int(1), rat_int(-1)], nu.clone()).unwrap();

        let fine = SigmaAlgebra::power_set(s.clone());
        assert_eq!(conditional_expectation(&rho, &fine, &nu).unwrap(), rho);

        let trivial = SigmaAlgebra::trivial(s);
        let e = conditional_expectation(&rho, &trivial, &nu).unwrap();
        assert_eq!(e.values(), &[rat_int(0), rat_int(0)]);

        let s3 = space(&["a", "b", "c"]);
        let nu3 = RationalMeasure::uniform(s3.clone());
        let rho3 = DensityVector::new(
            s3.clone(),
            vec![rat_int(1), rat_int(-1), rat_int(0)],
            nu3.clone(),
        )
        .unwrap();
        let sub = SigmaAlgebra::new(s3, vec![vec![0, 1], vec![2]]).unwrap();
        let e3 = conditional_expectation(&rho3, &sub, &nu3).unwrap();
        assert_eq!(e3.values(), &[rat_int(0), rat_int(0), rat_int(0)]);
    }

    #[test]
    fn error_paths_are_reported() {
        let s2 = space(&["a", "b"]);
        let s3 = space(&["x", "y", "z"]);
        let nu2 = RationalMeasure::uniform(s2.clone());
        let nu3 = RationalMeasure::uniform(s3.clone());
        let rho =
            DensityVector::new(s2.clone(), vec![rat_int(1), rat_int(0)], nu2.clone()).unwrap();

        // conditioning on a σ-algebra over a different space
        let wrong_sub = SigmaAlgebra::trivial(s3.clone());
        assert_eq!(
            conditional_expectation(&rho, &wrong_sub, &nu2),
            Err(Error::NotACoarsening)
        );

        // conditioning against a different reference measure
        let sub = SigmaAlgebra::trivial(s2.clone());
        let other_ref = RationalMeasure::dirac(s2.clone(), 0).unwrap();
        assert_eq!(
            conditional_expectation(&rho, &sub, &other_ref),
            Err(Error::ReferenceMismatch)
        );

        // distances need a shared reference
        let g = DensityVector::new(s2, vec![rat_int(0), rat_int(0)], other_ref).unwrap();
        assert_eq!(l1_distance(&rho, &g), Err(Error::ReferenceMismatch));

        // absolute continuity needs a shared space
        let sigma3 = SigmaAlgebra::power_set(s3);
        assert!(matches!(
            is_absolutely_continuous(&nu2, &nu3, &sigma3),
            Err(Error::SpaceMismatch(_))
        ));
    }

    #[test]
    fn density_canonicalizes_null_points() {
        let s = space(&["a", "b"]);
        let reference = RationalMeasure::dirac(s.clone(), 0).unwrap();
        let d = DensityVector::new(s, vec![rat_int(5), rat_int(7)], reference).unwrap();
        assert_eq!(d.values(), &[rat_int(5), rat_int(0)]);
    }
}
