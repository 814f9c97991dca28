//! Exact rational linear feasibility via phase-1 simplex.
//!
//! Solves `A·x = b, x ≥ 0` over arbitrary-precision rationals and returns
//! either a feasible point or a Farkas certificate of infeasibility: a
//! multiplier vector λ with λᵀA ≤ 0 componentwise and λᵀb > 0. Bland's rule
//! (lowest eligible index for both entering and leaving variables) rules out
//! cycling and makes the terminal state, and hence the certificate, a
//! deterministic function of the input.

use num::{One, Signed, Zero};

use crate::rational::Rational;

/// `A·x = b` with `x ≥ 0`; one `(row, rhs)` pair per constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityProblem {
    pub num_vars: usize,
    pub constraints: Vec<(Vec<Rational>, Rational)>,
}

/// Farkas multipliers for the original constraint rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfeasibilityCertificate {
    pub multipliers: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeasibilityOutcome {
    Feasible(Vec<Rational>),
    Infeasible(InfeasibilityCertificate),
}

impl FeasibilityProblem {
    pub fn new(num_vars: usize, constraints: Vec<(Vec<Rational>, Rational)>) -> Self {
        debug_assert!(constraints.iter().all(|(row, _)| row.len() == num_vars));
        Self {
            num_vars,
            constraints,
        }
    }
}

/// Checks `A·x = b` and `x ≥ 0` by direct exact arithmetic.
pub fn verify_feasible(problem: &FeasibilityProblem, x: &[Rational]) -> bool {
    if x.len() != problem.num_vars || x.iter().any(|v| v.is_negative()) {
        return false;
    }
    problem.constraints.iter().all(|(row, rhs)| {
        let lhs: Rational = row.iter().zip(x).map(|(a, v)| a * v).sum();
        &lhs == rhs
    })
}

/// Checks `λᵀA ≤ 0` for every column and `λᵀb > 0` by direct arithmetic.
pub fn verify_infeasible(problem: &FeasibilityProblem, cert: &InfeasibilityCertificate) -> bool {
    let lambda = &cert.multipliers;
    if lambda.len() != problem.constraints.len() {
        return false;
    }
    for j in 0..problem.num_vars {
        let column: Rational = problem
            .constraints
            .iter()
            .zip(lambda)
            .map(|((row, _), l)| &row[j] * l)
            .sum();
        if column.is_positive() {
            return false;
        }
    }
    let rhs: Rational = problem
        .constraints
        .iter()
        .zip(lambda)
        .map(|((_, b), l)| b * l)
        .sum();
    rhs.is_positive()
}

/// Phase-1 simplex: minimizes the total artificial mass. Zero optimum yields
/// a feasible point; a positive optimum yields Farkas multipliers read off
/// the terminal reduced costs of the artificial columns.
pub fn solve_feasibility(problem: &FeasibilityProblem) -> FeasibilityOutcome {
    let m = problem.constraints.len();
    let n = problem.num_vars;
    if m == 0 {
        return FeasibilityOutcome::Feasible(vec![Rational::zero(); n]);
    }

    // Normalize rhs >= 0, remembering flipped rows.
    let mut flipped = vec![false; m];
    let mut tableau: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    for (i, (row, b)) in problem.constraints.iter().enumerate() {
        let mut r = row.clone();
        let mut b = b.clone();
        if b.is_negative() {
            flipped[i] = true;
            for v in r.iter_mut() {
                *v = -v.clone();
            }
            b = -b;
        }
        // append artificial identity column block
        r.extend((0..m).map(|k| {
            if k == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        }));
        tableau.push(r);
        rhs.push(b);
    }

    let total_cols = n + m;
    let mut basis: Vec<usize> = (n..total_cols).collect();

    // Reduced costs for minimizing the sum of artificials with the artificial
    // basis: original columns get minus their column sum, artificials zero.
    let mut reduced: Vec<Rational> = (0..total_cols)
        .map(|j| {
            if j < n {
                -tableau.iter().map(|row| row[j].clone()).sum::<Rational>()
            } else {
                Rational::zero()
            }
        })
        .collect();
    let mut objective: Rational = rhs.iter().cloned().sum();

    loop {
        // Bland: lowest-index column with negative reduced cost.
        let entering = match (0..total_cols).find(|&j| reduced[j].is_negative()) {
            Some(j) => j,
            None => break,
        };
        // Ratio test; ties resolved by lowest basic-variable index.
        let mut leaving: Option<(usize, Rational)> = None;
        for i in 0..m {
            if tableau[i][entering].is_positive() {
                let ratio = &rhs[i] / &tableau[i][entering];
                match &leaving {
                    Some((best, best_ratio)) => {
                        if ratio < *best_ratio || (ratio == *best_ratio && basis[i] < basis[*best])
                        {
                            leaving = Some((i, ratio));
                        }
                    }
                    None => leaving = Some((i, ratio)),
                }
            }
        }
        // Phase-1 objective is bounded below by zero, so a pivot row exists.
        let (pivot_row, _) = leaving.expect("phase-1 objective is bounded");

        let pivot = tableau[pivot_row][entering].clone();
        for v in tableau[pivot_row].iter_mut() {
            *v /= pivot.clone();
        }
        rhs[pivot_row] /= pivot.clone();
        for i in 0..m {
            if i == pivot_row || tableau[i][entering].is_zero() {
                continue;
            }
            let factor = tableau[i][entering].clone();
            for j in 0..total_cols {
                let delta = &tableau[pivot_row][j] * &factor;
                tableau[i][j] -= delta;
            }
            let delta = &rhs[pivot_row] * &factor;
            rhs[i] -= delta;
        }
        if !reduced[entering].is_zero() {
            let factor = reduced[entering].clone();
            for j in 0..total_cols {
                let delta = &tableau[pivot_row][j] * &factor;
                reduced[j] -= delta;
            }
            // entering variable takes the value rhs[pivot_row], changing the
            // objective by its reduced cost times that value
            let delta = &rhs[pivot_row] * &factor;
            objective += delta;
        }
        basis[pivot_row] = entering;
    }

    if objective.is_zero() {
        let mut x = vec![Rational::zero(); n];
        for (i, &var) in basis.iter().enumerate() {
            if var < n {
                x[var] = rhs[i].clone();
            }
        }
        debug_assert!(verify_feasible(problem, &x));
        FeasibilityOutcome::Feasible(x)
    } else {
        // Terminal simplex multipliers: y_i = cost(artificial_i) - reduced
        // cost of the artificial column = 1 - reduced[n + i]; un-flip rows.
        let multipliers = (0..m)
            .map(|i| {
                let y = Rational::one() - reduced[n + i].clone();
                if flipped[i] {
                    -y
                } else {
                    y
                }
            })
            .collect();
        let cert = InfeasibilityCertificate { multipliers };
        debug_assert!(verify_infeasible(problem, &cert));
        FeasibilityOutcome::Infeasible(cert)
    }
}
