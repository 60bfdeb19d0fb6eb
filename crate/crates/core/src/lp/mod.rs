//! Linear programs in equality-plus-bounds form and a reference solver.
//!
//! Every program is `opt c'x  s.t.  A x = b,  l <= x <= u` with `l >= 0`
//! (forced participation raises `l` above zero). The solver returns primal
//! values together with equality-row duals and bound duals, plus a strong
//! duality certificate. Free variables are expressed by callers as
//! differences of two nonnegative variables.

mod mps;
mod simplex;

pub mod build;

use crate::scalar::Scalar;

/// Optimization direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// A decision variable with box bounds.
#[derive(Clone, Debug)]
pub struct Variable<S> {
    pub name: String,
    /// Lower bound; zero unless a forced participation floor applies.
    pub lower: S,
    /// Upper bound; may be infinite.
    pub upper: S,
    pub objective: S,
}

/// An equality constraint row with a label carrying its identity.
#[derive(Clone, Debug)]
pub struct Constraint<S> {
    pub label: String,
    /// Sparse coefficients, sorted by variable index.
    pub coeffs: Vec<(usize, S)>,
    pub rhs: S,
}

/// Linear program in canonical equality-plus-bounds form.
#[derive(Clone, Debug)]
pub struct LinearProgram<S> {
    pub sense: Sense,
    pub variables: Vec<Variable<S>>,
    pub constraints: Vec<Constraint<S>>,
}

/// Solver outcome classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Primal/dual solution of a [`LinearProgram`].
#[derive(Clone, Debug)]
pub struct LpSolution<S> {
    pub status: LpStatus,
    pub objective: S,
    /// Primal value per variable.
    pub primal: Vec<S>,
    /// Equality duals, one per constraint row.
    pub row_duals: Vec<S>,
    /// Upper-bound duals, nonnegative.
    pub upper_duals: Vec<S>,
    /// Lower-bound duals, nonnegative.
    pub lower_duals: Vec<S>,
    /// |primal objective - dual objective| at the final basis.
    pub duality_gap: S,
    /// Largest complementary-slackness residual.
    pub cs_residual: S,
    /// Labels of rows that could not be satisfied (infeasible only).
    pub infeasible_rows: Vec<String>,
    /// Variables moving along the unbounded ray (unbounded only).
    pub unbounded_ray: Vec<String>,
    pub iterations: usize,
}

impl<S: Scalar> LpSolution<S> {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub fn dual_for(&self, lp: &LinearProgram<S>, label: &str) -> Option<S> {
        lp.constraints
            .iter()
            .position(|c| c.label == label)
            .map(|i| self.row_duals[i])
    }
}

/// Structural problems detected before solving.
#[derive(Debug, thiserror::Error)]
pub enum LpError {
    #[error("duplicate row label `{0}`")]
    DuplicateLabel(String),
    #[error("variable `{0}` appears in no row and has zero objective")]
    UnusedVariable(String),
    #[error("variable `{0}` has lower bound above upper bound")]
    BoundOrder(String),
}

impl<S: Scalar> LinearProgram<S> {
    pub fn new(sense: Sense) -> Self {
        Self {
            sense,
            variables: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn add_variable(
        &mut self,
        name: impl Into<String>,
        lower: S,
        upper: S,
        objective: S,
    ) -> usize {
        self.variables.push(Variable {
            name: name.into(),
            lower,
            upper,
            objective,
        });
        self.variables.len() - 1
    }

    pub fn add_constraint(&mut self, label: impl Into<String>, coeffs: Vec<(usize, S)>, rhs: S) {
        let mut coeffs = coeffs;
        coeffs.sort_by_key(|&(i, _)| i);
        self.constraints.push(Constraint {
            label: label.into(),
            coeffs,
            rhs,
        });
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Check structural invariants: unique labels, ordered bounds, no
    /// dangling variables.
    pub fn validate(&self) -> Result<(), LpError> {
        let mut labels = std::collections::BTreeSet::new();
        for c in &self.constraints {
            if !labels.insert(c.label.as_str()) {
                return Err(LpError::DuplicateLabel(c.label.clone()));
            }
        }
        for v in &self.variables {
            if v.lower > v.upper {
                return Err(LpError::BoundOrder(v.name.clone()));
            }
        }
        let mut used = vec![false; self.variables.len()];
        for c in &self.constraints {
            for &(i, _) in &c.coeffs {
                used[i] = true;
            }
        }
        for (i, v) in self.variables.iter().enumerate() {
            if !used[i] && v.objective == S::zero() {
                return Err(LpError::UnusedVariable(v.name.clone()));
            }
        }
        Ok(())
    }

    /// Solve with the reference bounded-variable simplex.
    ///
    /// Infeasible and unbounded programs are reported through
    /// [`LpSolution::status`], never as a panic. Inconsistent bounds
    /// (`lower > upper`) report as infeasible.
    pub fn solve(&self) -> LpSolution<S> {
        simplex::solve(self)
    }

    /// Fixed-layout MPS text for cross-checking with external solvers.
    pub fn to_mps(&self, name: &str) -> String {
        mps::to_mps(self, name)
    }
}

#[cfg(test)]
mod tests;
