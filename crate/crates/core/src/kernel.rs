//! Markov kernels (transition operators), regular and dual conditional
//! probabilities, the Bayes identity and the generalized detailed-balance
//! test.
//!
//! Kernels act at the level of σ-atoms: a row per domain atom, a rational
//! probability vector over codomain atoms. Conditional probabilities are
//! stored in measure form p(y|x) = τ(δₓ)({y}), which keeps every table
//! row-stochastic and makes the dual the ordinary discrete Bayes posterior.

use num::Zero;

use crate::error::{Error, Result};
use crate::map::MeasurableMap;
use crate::measure::RationalMeasure;
use crate::rational::{rat, Rational};
use crate::report::{CheckReport, Witness};
use crate::space::SigmaAlgebra;

/// A row-stochastic exact rational matrix between two measurable spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovKernel {
    domain: SigmaAlgebra,
    codomain: SigmaAlgebra,
    rows: Vec<Vec<Rational>>,
}

impl MarkovKernel {
    pub fn new(
        domain: SigmaAlgebra,
        codomain: SigmaAlgebra,
        rows: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        if rows.len() != domain.atom_count() {
            return Err(Error::DimensionMismatch(format!(
                "kernel has {} rows for {} domain atoms",
                rows.len(),
                domain.atom_count()
            )));
        }
        let one = Rational::from_integer(1.into());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != codomain.atom_count() {
                return Err(Error::DimensionMismatch(format!(
                    "kernel row {i} has {} entries for {} codomain atoms",
                    row.len(),
                    codomain.atom_count()
                )));
            }
            if row.iter().any(|v| v < &Rational::zero()) {
                return Err(Error::InvariantViolation(format!(
                    "negative entry in kernel row {i}"
                )));
            }
            if row.iter().cloned().sum::<Rational>() != one {
                return Err(Error::InvariantViolation(format!(
                    "kernel row {i} does not sum to 1"
                )));
            }
        }
        Ok(Self {
            domain,
            codomain,
            rows,
        })
    }

    pub fn identity(sigma: SigmaAlgebra) -> Self {
        let n = sigma.atom_count();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Rational::from_integer(1.into())
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(sigma.clone(), sigma, rows).expect("identity rows are stochastic")
    }

    pub fn domain(&self) -> &SigmaAlgebra {
        &self.domain
    }

    pub fn codomain(&self) -> &SigmaAlgebra {
        &self.codomain
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn row(&self, atom: usize) -> &[Rational] {
        &self.rows[atom]
    }

    pub fn entry(&self, domain_atom: usize, codomain_atom: usize) -> &Rational {
        &self.rows[domain_atom][codomain_atom]
    }

    /// Kernel composition: matrix product, again row-stochastic.
    pub fn compose(&self, then: &MarkovKernel) -> Result<MarkovKernel> {
        if then.domain != self.codomain {
            return Err(Error::SpaceMismatch(
                "kernel composition endpoints do not match".into(),
            ));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                (0..then.codomain.atom_count())
                    .map(|c| row.iter().zip(&then.rows).map(|(w, r)| w * &r[c]).sum())
                    .collect()
            })
            .collect();
        MarkovKernel::new(self.domain.clone(), then.codomain.clone(), rows)
    }
}

/// The deterministic kernel of a measurable map: the row of atom x is the
/// Dirac row at the atom containing T(x), so applying the kernel agrees
/// with the pushforward on every measurable event.
pub fn kernel_from_map(map: &MeasurableMap) -> MarkovKernel {
    let m = map.codomain().atom_count();
    let rows = (0..map.domain().atom_count())
        .map(|a| {
            let target = map.atom_image(a);
            (0..m)
                .map(|c| {
                    if c == target {
                        Rational::from_integer(1.into())
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    MarkovKernel::new(map.domain().clone(), map.codomain().clone(), rows)
        .expect("Dirac rows are stochastic")
}

/// Applies the kernel to a measure: ν(c) = Σ_a μ(a)·k(a,c) on codomain
/// atoms. The returned per-point measure spreads each atom's mass uniformly
/// over its points (the canonical a.e. representative); on power-set
/// codomains this is the exact point-level image.
pub fn apply_kernel(kernel: &MarkovKernel, mu: &RationalMeasure) -> Result<RationalMeasure> {
    if mu.space() != kernel.domain.space() {
        return Err(Error::SpaceMismatch(
            "measure not on the kernel's domain".into(),
        ));
    }
    let domain_masses = mu.atom_masses(&kernel.domain);
    let mut mass = vec![Rational::zero(); kernel.codomain.space().len()];
    for (c, block) in kernel.codomain.atoms().iter().enumerate() {
        let atom_mass: Rational = domain_masses
            .iter()
            .zip(&kernel.rows)
            .map(|(m, row)| m * &row[c])
            .sum();
        if atom_mass.is_zero() {
            continue;
        }
        let share = atom_mass / rat(block.len() as i64, 1);
        for &point in block {
            mass[point] = share.clone();
        }
    }
    RationalMeasure::new(kernel.codomain.space().clone(), mass)
}

/// A conditional probability table: a kernel whose rows are conditional
/// distributions, the conditioning reference measure, and a mask marking
/// the conditioning atoms where the conditional is determined (positive
/// reference mass). Undetermined rows hold the canonical uniform row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalTable {
    kernel: MarkovKernel,
    reference: RationalMeasure,
    defined: Vec<bool>,
}

impl ConditionalTable {
    pub fn kernel(&self) -> &MarkovKernel {
        &self.kernel
    }

    pub fn reference(&self) -> &RationalMeasure {
        &self.reference
    }

    pub fn is_defined(&self, conditioning_atom: usize) -> bool {
        self.defined[conditioning_atom]
    }

    pub fn defined(&self) -> &[bool] {
        &self.defined
    }

    /// p(target_atom | conditioning_atom).
    pub fn probability(&self, conditioning_atom: usize, target_atom: usize) -> &Rational {
        self.kernel.entry(conditioning_atom, target_atom)
    }
}

fn uniform_row(n: usize) -> Vec<Rational> {
    vec![rat(1, n as i64); n]
}

/// The regular conditional probability p(y|x) from the kernel's domain to
/// its codomain: the kernel rows themselves, defined on atoms of positive
/// `mu` mass and canonicalized to uniform elsewhere.
pub fn regular_conditional(
    kernel: &MarkovKernel,
    mu: &RationalMeasure,
) -> Result<ConditionalTable> {
    if mu.space() != kernel.domain.space() {
        return Err(Error::SpaceMismatch(
            "measure not on the kernel's domain".into(),
        ));
    }
    let masses = mu.atom_masses(&kernel.domain);
    let defined: Vec<bool> = masses.iter().map(|m| !m.is_zero()).collect();
    let n = kernel.codomain.atom_count();
    let rows = kernel
        .rows
        .iter()
        .zip(&defined)
        .map(|(row, &d)| if d { row.clone() } else { uniform_row(n) })
        .collect();
    let table = MarkovKernel::new(kernel.domain.clone(), kernel.codomain.clone(), rows)?;
    Ok(ConditionalTable {
        kernel: table,
        reference: mu.clone(),
        defined,
    })
}

/// The dual conditional probability p(x|y) = μ(x)·k(x,y)/ν(y) with
/// ν = τ(μ): a table from the kernel's codomain back to its domain, defined
/// on ν-positive atoms, uniform elsewhere. Every defined row sums to 1.
pub fn dual_conditional(kernel: &MarkovKernel, mu: &RationalMeasure) -> Result<ConditionalTable> {
    if mu.space() != kernel.domain.space() {
        return Err(Error::SpaceMismatch(
            "measure not on the kernel's domain".into(),
        ));
    }
    let mu_atoms = mu.atom_masses(&kernel.domain);
    let nu = apply_kernel(kernel, mu)?;
    let nu_atoms = nu.atom_masses(&kernel.codomain);
    let n = kernel.domain.atom_count();
    let mut rows = Vec::with_capacity(kernel.codomain.atom_count());
    let mut defined = Vec::with_capacity(kernel.codomain.atom_count());
    for (y, nu_mass) in nu_atoms.iter().enumerate() {
        if nu_mass.is_zero() {
            rows.push(uniform_row(n));
            defined.push(false);
        } else {
            rows.push(
                (0..n)
                    .map(|x| &mu_atoms[x] * kernel.entry(x, y) / nu_mass.clone())
                    .collect(),
            );
            defined.push(true);
        }
    }
    let table = MarkovKernel::new(kernel.codomain.clone(), kernel.domain.clone(), rows)?;
    Ok(ConditionalTable {
        kernel: table,
        reference: nu,
        defined,
    })
}

/// Verifies p(x|y)·ν(y) = μ(x)·p(y|x) exactly on all pairs with μ(x) > 0 and
/// ν(y) > 0. The identity is constructive, so this is a self-test; a failure
/// indicates an internal inconsistency.
pub fn bayes_identity_check(kernel: &MarkovKernel, mu: &RationalMeasure) -> Result<CheckReport> {
    let forward = regular_conditional(kernel, mu)?;
    let dual = dual_conditional(kernel, mu)?;
    let mu_atoms = mu.atom_masses(&kernel.domain);
    let nu_atoms = dual.reference.atom_masses(&kernel.codomain);
    let mut checked = 0;
    for (x, mu_mass) in mu_atoms.iter().enumerate() {
        if mu_mass.is_zero() {
            continue;
        }
        for (y, nu_mass) in nu_atoms.iter().enumerate() {
            if nu_mass.is_zero() {
                continue;
            }
            checked += 1;
            let lhs = dual.probability(y, x) * nu_mass;
            let rhs = mu_mass * forward.probability(x, y);
            if lhs != rhs {
                return Ok(CheckReport::fail(
                    "bayes-identity",
                    checked,
                    Witness::AtomPair {
                        x_atom: x,
                        y_atom: y,
                    },
                ));
            }
        }
    }
    Ok(CheckReport::pass("bayes-identity", checked))
}

/// The generalized detailed-balance test: passes iff for every family
/// member P (with image Q through the forward table) and every atom pair,
/// backward(x|y)·Q(y) = forward(y|x)·P(x) exactly. The first violating
/// (P, x, y) triple in canonical order is reported.
pub fn detailed_balance_check(
    forward: &ConditionalTable,
    backward: &ConditionalTable,
    family: &[(String, RationalMeasure)],
) -> Result<CheckReport> {
    let x_sigma = forward.kernel.domain();
    let y_sigma = forward.kernel.codomain();
    if backward.kernel.domain() != y_sigma || backward.kernel.codomain() != x_sigma {
        return Err(Error::DimensionMismatch(
            "backward table does not mirror the forward table".into(),
        ));
    }
    let mut checked = 0;
    for (name, p) in family {
        if p.space() != x_sigma.space() {
            return Err(Error::SpaceMismatch(format!(
                "family member {name:?} on the wrong space"
            )));
        }
        let p_atoms = p.atom_masses(x_sigma);
        let q = apply_kernel(&forward.kernel, p)?;
        let q_atoms = q.atom_masses(y_sigma);
        for x in 0..x_sigma.atom_count() {
            for y in 0..y_sigma.atom_count() {
                checked += 1;
                let lhs = backward.probability(y, x) * &q_atoms[y];
                let rhs = forward.probability(x, y) * &p_atoms[x];
                if lhs != rhs {
                    return Ok(CheckReport::fail(
                        "detailed-balance",
                        checked,
                        Witness::MemberAtomPair {
                            member: name.clone(),
                            x_atom: x,
                            y_atom: y,
                        },
                    ));
                }
            }
        }
    }
    Ok(CheckReport::pass("detailed-balance", checked))
}
