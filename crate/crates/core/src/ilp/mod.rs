//! Integer linear programs over boxed integer variables, solved exactly by
//! LP-based branch-and-bound.
//!
//! The LP relaxations are handled by a dense bounded-variable dual simplex
//! ([`simplex`]). Every variable carries a finite integer box, so any basis
//! can be made dual feasible by placing nonbasic columns at the bound
//! matching the sign of their reduced cost; this lets every solve, cold or
//! warm, run the dual simplex alone.

mod branch;
mod simplex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

pub use branch::{solve_ilp, solve_ilp_with, IlpOptions, DEFAULT_NODE_BUDGET};
pub use simplex::solve_lp;

/// Primal feasibility tolerance for LP rows and bounds.
pub const FEAS_TOL: f64 = 1e-7;
/// An LP value within this distance of an integer counts as integral.
pub const INT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    /// Dense coefficient row, one entry per variable.
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum()
    }

    /// Exact check of the row at an integer point, in rational arithmetic
    /// over the binary values of the coefficients.
    pub fn is_satisfied_by(&self, x: &[i64]) -> bool {
        let mut lhs = BigRational::zero();
        for (a, &v) in self.coeffs.iter().zip(x) {
            if *a != 0.0 && v != 0 {
                lhs += exact(*a) * BigRational::from_integer(BigInt::from(v));
            }
        }
        let rhs = exact(self.rhs);
        match self.relation {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
        }
    }
}

fn exact(v: f64) -> BigRational {
    BigRational::from_float(v).expect("program coefficients are finite")
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegerLinearProgram {
    /// Minimization objective.
    pub objective: Vec<f64>,
    /// Inclusive integer box of each variable.
    pub bounds: Vec<(i64, i64)>,
    pub constraints: Vec<Constraint>,
    pub var_names: Vec<String>,
}

impl IntegerLinearProgram {
    pub fn new(
        objective: Vec<f64>,
        bounds: Vec<(i64, i64)>,
        constraints: Vec<Constraint>,
        var_names: Vec<String>,
    ) -> Result<Self> {
        let n = objective.len();
        if bounds.len() != n || var_names.len() != n {
            return Err(Error::InvalidProgram(format!(
                "{n} objective entries but {} bounds and {} names",
                bounds.len(),
                var_names.len()
            )));
        }
        if let Some((j, b)) = bounds.iter().enumerate().find(|(_, (lo, hi))| lo > hi) {
            return Err(Error::InvalidProgram(format!("variable {} has empty box {b:?}", var_names[j])));
        }
        if objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidProgram("objective has non-finite coefficients".into()));
        }
        for c in &constraints {
            if c.coeffs.len() != n {
                return Err(Error::InvalidProgram(format!(
                    "row {} has {} coefficients, expected {n}",
                    c.name,
                    c.coeffs.len()
                )));
            }
            if !c.rhs.is_finite() || c.coeffs.iter().any(|a| !a.is_finite()) {
                return Err(Error::InvalidProgram(format!("row {} has non-finite data", c.name)));
            }
        }
        Ok(Self { objective, bounds, constraints, var_names })
    }

    /// Program with anonymous variables `x0, x1, ...`.
    pub fn unnamed(objective: Vec<f64>, bounds: Vec<(i64, i64)>, constraints: Vec<Constraint>) -> Result<Self> {
        let names = (0..objective.len()).map(|j| format!("x{j}")).collect();
        Self::new(objective, bounds, constraints, names)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective_value(&self, x: &[i64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, &v)| c * v as f64).sum()
    }

    pub fn in_bounds(&self, x: &[i64]) -> bool {
        x.len() == self.num_vars() && self.bounds.iter().zip(x).all(|(&(lo, hi), &v)| lo <= v && v <= hi)
    }

    /// Exact feasibility of an integer point: boxes plus every row.
    pub fn is_feasible_exact(&self, x: &[i64]) -> bool {
        self.in_bounds(x) && self.constraints.iter().all(|c| c.is_satisfied_by(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IlpStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IlpSolution {
    pub status: IlpStatus,
    /// `+inf` when infeasible.
    pub objective: f64,
    /// Empty when infeasible.
    pub values: Vec<i64>,
    pub node_count: u64,
    /// Proven optimality gap; zero at `Optimal`.
    pub gap: f64,
}

impl IlpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == IlpStatus::Optimal
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_programs() {
        let row = |coeffs: Vec<f64>| Constraint { name: "r".into(), coeffs, relation: Relation::Le, rhs: 1.0 };
        assert!(IntegerLinearProgram::unnamed(vec![1.0], vec![(2, 1)], vec![]).is_err());
        assert!(IntegerLinearProgram::unnamed(vec![1.0], vec![(0, 1)], vec![row(vec![1.0, 2.0])]).is_err());
        assert!(IntegerLinearProgram::unnamed(vec![f64::NAN], vec![(0, 1)], vec![]).is_err());
        assert!(IntegerLinearProgram::unnamed(vec![1.0, 1.0], vec![(0, 1)], vec![]).is_err());
    }

    #[test]
    fn exact_row_check() {
        let c = Constraint { name: "r".into(), coeffs: vec![0.1, 0.2], relation: Relation::Le, rhs: 0.30000000000000004 };
        // 0.1 + 0.2 rounds to rhs in floating point but the exact binary
        // values of the coefficients sum to something slightly smaller
        assert!(c.is_satisfied_by(&[1, 1]));
        let eq = Constraint { name: "e".into(), coeffs: vec![0.25, 0.5], relation: Relation::Eq, rhs: 1.0 };
        assert!(eq.is_satisfied_by(&[2, 1]));
        assert!(!eq.is_satisfied_by(&[1, 1]));
        let ge = Constraint { name: "g".into(), coeffs: vec![0.25, -1.0], relation: Relation::Ge, rhs: -0.75 };
        assert!(ge.is_satisfied_by(&[1, 1]));
        assert!(!ge.is_satisfied_by(&[0, 1]));
    }
}
