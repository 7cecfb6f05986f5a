use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::norm;
use crate::lp::{Constraint, Relation};
use crate::poly::{PRepPolyhedron, VRepPolyhedron};

/// `{y ∈ R^dim : a_i·y ≥ b_i or a_i·y = b_i}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HRepPolyhedron {
    dim: usize,
    constraints: Vec<Constraint>,
}

impl HRepPolyhedron {
    /// Validates the rows and rewrites `≤` rows as `≥`.
    pub fn new(dim: usize, constraints: Vec<Constraint>) -> Result<Self> {
        let constraints = validate_rows(dim, constraints)?;
        Ok(Self { dim, constraints })
    }

    pub fn full(dim: usize) -> Self {
        Self {
            dim,
            constraints: Vec::new(),
        }
    }

    /// The canonical marker for the empty set: the single row `0 ≥ 1`.
    pub fn infeasible(dim: usize) -> Self {
        Self {
            dim,
            constraints: vec![Constraint::ge(vec![0.0; dim], 1.0)],
        }
    }

    /// True when some row has zero coefficients and an unsatisfiable right-hand side.
    pub fn is_infeasible_marker(&self) -> bool {
        self.constraints.iter().any(|c| {
            c.coeffs.iter().all(|a| *a == 0.0)
                && match c.rel {
                    Relation::Eq => c.rhs != 0.0,
                    _ => c.rhs > 0.0,
                }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn inequalities(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(|c| c.rel == Relation::Ge)
    }

    pub fn equalities(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(|c| c.rel == Relation::Eq)
    }

    /// Row-wise evaluation with a tolerance relative to the row norm and right-hand side.
    pub fn satisfies(&self, y: &[f64], tol: f64) -> bool {
        self.constraints.iter().all(|c| row_satisfied(c, y, tol))
    }

    pub fn to_prep(&self) -> PRepPolyhedron {
        PRepPolyhedron::from_rows(self.dim, 0, self.constraints.clone())
    }

    pub fn to_vrep(&self) -> VRepPolyhedron {
        crate::poly::convert::hrep_to_vrep(self)
    }
}

pub(crate) fn row_satisfied(c: &Constraint, y: &[f64], tol: f64) -> bool {
    let n = norm(&c.coeffs);
    if n == 0.0 {
        return match c.rel {
            Relation::Eq => c.rhs.abs() <= tol,
            Relation::Ge => c.rhs <= tol,
            Relation::Le => c.rhs >= -tol,
        };
    }
    let slack = tol * (1.0 + c.rhs.abs() / n);
    c.violation(y) / n <= slack
}

pub(crate) fn validate_rows(cols: usize, constraints: Vec<Constraint>) -> Result<Vec<Constraint>> {
    constraints
        .into_iter()
        .map(|c| {
            if c.coeffs.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: c.coeffs.len(),
                });
            }
            if c.coeffs.iter().any(|v| !v.is_finite()) || !c.rhs.is_finite() {
                return Err(Error::Representation("NaN or infinite entry".into()));
            }
            Ok(c.canonical())
        })
        .collect()
}
