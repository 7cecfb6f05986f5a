use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{feasible_point, solve, Constraint, LinearProgram, Relation, SolveOutcome};
use crate::poly::hrep::validate_rows;
use crate::poly::project::{project, Projection, ProjectionOptions};

/// `{y ∈ R^ambient : ∃w ∈ R^aux with rows(y, w) satisfied}`.
///
/// Columns are ordered ambient coordinates first, then auxiliary ones. With
/// `aux_dim == 0` this is an H-representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PRepPolyhedron {
    ambient_dim: usize,
    aux_dim: usize,
    constraints: Vec<Constraint>,
}

impl PRepPolyhedron {
    pub fn new(ambient_dim: usize, aux_dim: usize, constraints: Vec<Constraint>) -> Result<Self> {
        let constraints = validate_rows(ambient_dim + aux_dim, constraints)?;
        Ok(Self {
            ambient_dim,
            aux_dim,
            constraints,
        })
    }

    pub(crate) fn from_rows(ambient_dim: usize, aux_dim: usize, constraints: Vec<Constraint>) -> Self {
        debug_assert!(constraints.iter().all(|c| c.coeffs.len() == ambient_dim + aux_dim));
        Self {
            ambient_dim,
            aux_dim,
            constraints: constraints.into_iter().map(Constraint::canonical).collect(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::from_rows(ambient_dim, 0, Vec::new())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn aux_dim(&self) -> usize {
        self.aux_dim
    }

    pub fn num_cols(&self) -> usize {
        self.ambient_dim + self.aux_dim
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Some point of the set (ambient coordinates only).
    pub fn feasible_point(&self, tol: f64) -> Result<Option<Vec<f64>>> {
        Ok(match feasible_point(self.num_cols(), &self.constraints, tol)? {
            SolveOutcome::Optimal { point, .. } => Some(point[..self.ambient_dim].to_vec()),
            _ => None,
        })
    }

    pub fn is_empty(&self, tol: f64) -> Result<bool> {
        Ok(self.feasible_point(tol)?.is_none())
    }

    /// Membership of `y`, allowing every row an additive slack of `tol`
    /// (rows are scaled to unit max-coefficient first).
    pub fn contains(&self, y: &[f64], tol: f64) -> Result<bool> {
        self.check_ambient(y.len())?;
        let rows = self.fixed_rows(y, tol);
        if self.aux_dim == 0 {
            return Ok(rows.iter().all(|c| c.violation(&[]) <= 0.0));
        }
        Ok(!feasible_point(self.aux_dim, &rows, tol)?.is_infeasible())
    }

    /// Rows over the auxiliary variables after substituting `y`, relaxed by `slack`.
    fn fixed_rows(&self, y: &[f64], slack: f64) -> Vec<Constraint> {
        let mut rows = Vec::with_capacity(self.constraints.len());
        for c in &self.constraints {
            let scale = match c.scale() {
                s if s == 0.0 => 1.0,
                s => s,
            };
            let fixed: f64 = c.coeffs[..self.ambient_dim]
                .iter()
                .zip(y)
                .map(|(a, v)| a * v)
                .sum();
            let a: Vec<f64> = c.coeffs[self.ambient_dim..].iter().map(|v| v / scale).collect();
            let b = (c.rhs - fixed) / scale;
            match c.rel {
                Relation::Eq => {
                    rows.push(Constraint::ge(a.clone(), b - slack));
                    rows.push(Constraint::le(a, b + slack));
                }
                _ => rows.push(Constraint::ge(a, b - slack)),
            }
        }
        rows
    }

    /// `self ∩ other`; auxiliary blocks are concatenated, no solve is performed.
    pub fn intersect(&self, other: &PRepPolyhedron) -> Result<Self> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        let d = self.ambient_dim;
        let aux = self.aux_dim + other.aux_dim;
        let width = d + aux;
        let mut rows = Vec::with_capacity(self.constraints.len() + other.constraints.len());
        for c in &self.constraints {
            let mut a = vec![0.0; width];
            a[..d + self.aux_dim].copy_from_slice(&c.coeffs);
            rows.push(Constraint::new(a, c.rel, c.rhs));
        }
        for c in &other.constraints {
            let mut a = vec![0.0; width];
            a[..d].copy_from_slice(&c.coeffs[..d]);
            a[d + self.aux_dim..].copy_from_slice(&c.coeffs[d..]);
            rows.push(Constraint::new(a, c.rel, c.rhs));
        }
        Ok(Self::from_rows(d, aux, rows))
    }

    /// Substitutes constants for the given ambient coordinates; they disappear
    /// from the ambient space.
    pub fn fix_coordinates(&self, indices: &[usize], values: &[f64]) -> Result<Self> {
        if indices.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: indices.len(),
                found: values.len(),
            });
        }
        let mut fixed = vec![None; self.ambient_dim];
        for (&i, &v) in indices.iter().zip(values) {
            if i >= self.ambient_dim {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    dim: self.ambient_dim,
                });
            }
            if fixed[i].is_some() {
                return Err(Error::Representation(format!("coordinate {i} fixed twice")));
            }
            if !v.is_finite() {
                return Err(Error::Representation("non-finite coordinate value".into()));
            }
            fixed[i] = Some(v);
        }
        let keep: Vec<usize> = (0..self.num_cols())
            .filter(|&j| j >= self.ambient_dim || fixed[j].is_none())
            .collect();
        let rows = self
            .constraints
            .iter()
            .map(|c| {
                let shift: f64 = fixed
                    .iter()
                    .enumerate()
                    .filter_map(|(j, v)| v.map(|v| c.coeffs[j] * v))
                    .sum();
                Constraint::new(keep.iter().map(|&j| c.coeffs[j]).collect(), c.rel, c.rhs - shift)
            })
            .collect();
        Ok(Self::from_rows(
            self.ambient_dim - indices.len(),
            self.aux_dim,
            rows,
        ))
    }

    /// Projects away the given ambient coordinates by turning them into
    /// auxiliary variables (a purely syntactic operation).
    pub fn project_out(&self, indices: &[usize]) -> Result<Self> {
        let mut drop = vec![false; self.ambient_dim];
        for &i in indices {
            if i >= self.ambient_dim {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    dim: self.ambient_dim,
                });
            }
            drop[i] = true;
        }
        let order: Vec<usize> = (0..self.ambient_dim)
            .filter(|&j| !drop[j])
            .chain((0..self.ambient_dim).filter(|&j| drop[j]))
            .chain(self.ambient_dim..self.num_cols())
            .collect();
        let kept = self.ambient_dim - drop.iter().filter(|d| **d).count();
        let rows = self
            .constraints
            .iter()
            .map(|c| Constraint::new(order.iter().map(|&j| c.coeffs[j]).collect(), c.rel, c.rhs))
            .collect();
        Ok(Self::from_rows(kept, self.num_cols() - kept, rows))
    }

    /// Homogenized copy: right-hand sides set to zero. For a nonempty set this
    /// represents its recession cone.
    pub fn recession(&self) -> Self {
        Self::from_rows(
            self.ambient_dim,
            self.aux_dim,
            self.constraints
                .iter()
                .map(|c| Constraint::new(c.coeffs.clone(), c.rel, 0.0))
                .collect(),
        )
    }

    /// Recession cone together with a flag telling whether the set was
    /// nonempty; an empty input yields the zero cone.
    pub fn recession_checked(&self, tol: f64) -> Result<(Self, bool)> {
        if self.is_empty(tol)? {
            let d = self.ambient_dim;
            let rows = (0..d)
                .map(|i| {
                    let mut a = vec![0.0; d];
                    a[i] = 1.0;
                    Constraint::eq(a, 0.0)
                })
                .collect();
            return Ok((Self::from_rows(d, 0, rows), false));
        }
        Ok((self.recession(), true))
    }

    /// Places the rows into a wider column space. `ambient_cols[i]` is the
    /// target column of ambient coordinate `i` (or `None` together with a
    /// fixed value); auxiliary columns go to `aux_offset..`.
    pub(crate) fn embed_rows(
        &self,
        width: usize,
        ambient_cols: &[Option<usize>],
        fixed_values: &[f64],
        aux_offset: usize,
    ) -> Vec<Constraint> {
        self.constraints
            .iter()
            .map(|c| {
                let mut a = vec![0.0; width];
                let mut rhs = c.rhs;
                for (i, target) in ambient_cols.iter().enumerate() {
                    match target {
                        Some(j) => a[*j] += c.coeffs[i],
                        None => rhs -= c.coeffs[i] * fixed_values[i],
                    }
                }
                for k in 0..self.aux_dim {
                    a[aux_offset + k] = c.coeffs[self.ambient_dim + k];
                }
                Constraint::new(a, c.rel, rhs)
            })
            .collect()
    }

    /// L1-closest point of the set to `y`, with its distance; `None` when empty.
    pub fn nearest_l1(&self, y: &[f64], tol: f64) -> Result<Option<(Vec<f64>, f64)>> {
        self.check_ambient(y.len())?;
        let d = self.ambient_dim;
        let width = self.num_cols() + d;
        let mut rows: Vec<Constraint> = self
            .constraints
            .iter()
            .map(|c| {
                let mut a = c.coeffs.clone();
                a.resize(width, 0.0);
                Constraint::new(a, c.rel, c.rhs)
            })
            .collect();
        for (i, &yi) in y.iter().enumerate() {
            let t = self.num_cols() + i;
            let mut up = vec![0.0; width];
            up[t] = 1.0;
            up[i] = -1.0;
            rows.push(Constraint::ge(up, -yi));
            let mut down = vec![0.0; width];
            down[t] = 1.0;
            down[i] = 1.0;
            rows.push(Constraint::ge(down, yi));
        }
        let mut objective = vec![0.0; width];
        for v in objective.iter_mut().skip(self.num_cols()) {
            *v = 1.0;
        }
        match solve(&LinearProgram::minimize(objective, rows), tol)? {
            SolveOutcome::Optimal { point, value } => Ok(Some((point[..d].to_vec(), value))),
            SolveOutcome::Infeasible => Ok(None),
            SolveOutcome::Unbounded { .. } => Err(Error::Resource("L1 distance reported unbounded".into())),
        }
    }

    pub fn project(&self, options: &ProjectionOptions) -> Result<Projection> {
        project(self, options)
    }

    fn check_ambient(&self, len: usize) -> Result<()> {
        if len != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: len,
            });
        }
        Ok(())
    }
}
