//! Dense two-phase simplex over free variables.
//!
//! Every geometric predicate in the crate reduces to small linear programs of
//! the form `min c·x  s.t.  a_i·x ⊵ b_i` with unrestricted `x`. Free variables
//! are kept as single tableau columns: a nonbasic free column that should
//! decrease is negated in place, and basic free variables never leave the
//! basis. Equality rows are handled natively with artificials.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relation of a linear row `a·x ⊵ b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Ge => ">=",
            Relation::Le => "<=",
            Relation::Eq => "=",
        }
    }
}

/// A single linear row `coeffs·x rel rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub rel: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, rel: Relation, rhs: f64) -> Self {
        Self { coeffs, rel, rhs }
    }

    pub fn ge(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self::new(coeffs, Relation::Ge, rhs)
    }

    pub fn le(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self::new(coeffs, Relation::Le, rhs)
    }

    pub fn eq(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self::new(coeffs, Relation::Eq, rhs)
    }

    /// Rewrites `≤` rows as `≥` rows; `≥` and `=` are left untouched.
    pub fn canonical(self) -> Self {
        match self.rel {
            Relation::Le => Self {
                coeffs: self.coeffs.iter().map(|a| -a).collect(),
                rel: Relation::Ge,
                rhs: -self.rhs,
            },
            _ => self,
        }
    }

    pub fn lhs(&self, x: &[f64]) -> f64 {
        dot(&self.coeffs, x)
    }

    /// Amount by which `x` violates the row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = self.lhs(x);
        match self.rel {
            Relation::Ge => (self.rhs - lhs).max(0.0),
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }

    /// Largest absolute coefficient, used for scale-aware tolerances.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, a| m.max(a.abs()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub sense: Sense,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn minimize(objective: Vec<f64>, constraints: Vec<Constraint>) -> Self {
        Self {
            num_vars: objective.len(),
            objective,
            sense: Sense::Minimize,
            constraints,
        }
    }

    pub fn maximize(objective: Vec<f64>, constraints: Vec<Constraint>) -> Self {
        Self {
            num_vars: objective.len(),
            objective,
            sense: Sense::Maximize,
            constraints,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolveOutcome {
    Optimal { point: Vec<f64>, value: f64 },
    Infeasible,
    /// `ray` is a feasible direction along which the objective improves without bound.
    Unbounded { ray: Vec<f64> },
}

impl SolveOutcome {
    pub fn point(&self) -> Option<&[f64]> {
        match self {
            SolveOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, SolveOutcome::Infeasible)
    }
}

pub const DEFAULT_TOL: f64 = 1e-9;

const PIVOT_EPS: f64 = 1e-11;
const COST_EPS: f64 = 1e-10;
const DEGENERATE_STREAK: usize = 50;

pub fn solve(lp: &LinearProgram, tol: f64) -> Result<SolveOutcome> {
    if lp.objective.len() != lp.num_vars {
        return Err(Error::DimensionMismatch {
            expected: lp.num_vars,
            found: lp.objective.len(),
        });
    }
    let Some(mut simplex) = Simplex::new(lp.num_vars, &lp.constraints, tol)? else {
        return Ok(SolveOutcome::Infeasible);
    };
    match lp.sense {
        Sense::Minimize => simplex.minimize(&lp.objective),
        Sense::Maximize => {
            let neg: Vec<f64> = lp.objective.iter().map(|c| -c).collect();
            Ok(match simplex.minimize(&neg)? {
                SolveOutcome::Optimal { point, value } => SolveOutcome::Optimal {
                    point,
                    value: -value,
                },
                other => other,
            })
        }
    }
}

/// Phase-one solve: `Optimal` carries some feasible point with value 0.
pub fn feasible_point(num_vars: usize, constraints: &[Constraint], tol: f64) -> Result<SolveOutcome> {
    Ok(match Simplex::new(num_vars, constraints, tol)? {
        Some(simplex) => SolveOutcome::Optimal {
            point: simplex.current_point(),
            value: 0.0,
        },
        None => SolveOutcome::Infeasible,
    })
}

/// A primal feasible simplex tableau that can be re-optimized for several
/// objectives over the same constraint set, starting each time from the
/// previous basis.
#[derive(Clone, Debug)]
pub struct Simplex {
    num_vars: usize,
    rows: usize,
    cols: usize,
    /// Row-major `rows × cols` tableau.
    tab: Vec<f64>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    /// Column position in the basis, if basic.
    basic_row: Vec<Option<usize>>,
    /// Flip state of free columns: variable value = sign · column value.
    sign: Vec<f64>,
    allowed: Vec<bool>,
    cost: Vec<f64>,
    cost_rhs: f64,
    constraints: Vec<Constraint>,
    tol: f64,
}

impl Simplex {
    /// Runs phase one; `Ok(None)` means the constraint set is infeasible.
    pub fn new(num_vars: usize, constraints: &[Constraint], tol: f64) -> Result<Option<Self>> {
        let tol = if tol > 0.0 { tol } else { DEFAULT_TOL };
        let mut rows_in: Vec<(Vec<f64>, Relation, f64)> = Vec::with_capacity(constraints.len());
        for c in constraints {
            if c.coeffs.len() != num_vars {
                return Err(Error::DimensionMismatch {
                    expected: num_vars,
                    found: c.coeffs.len(),
                });
            }
            if c.coeffs.iter().any(|a| !a.is_finite()) || !c.rhs.is_finite() {
                return Err(Error::Representation("non-finite coefficient".into()));
            }
            let c = c.clone().canonical();
            let scale = c.scale();
            if scale == 0.0 {
                let violated = match c.rel {
                    Relation::Eq => c.rhs.abs() > tol,
                    _ => c.rhs > tol,
                };
                if violated {
                    return Ok(None);
                }
                continue;
            }
            let a: Vec<f64> = c.coeffs.iter().map(|v| v / scale).collect();
            rows_in.push((a, c.rel, c.rhs / scale));
        }

        let m = rows_in.len();
        let n_slack = rows_in.iter().filter(|r| r.1 == Relation::Ge).count();
        let n_art = rows_in
            .iter()
            .filter(|r| r.1 == Relation::Eq || r.2 > 0.0)
            .count();
        let cols = num_vars + n_slack + n_art;
        let mut tab = vec![0.0; m * cols];
        let mut rhs = vec![0.0; m];
        let mut basis = vec![0; m];
        let mut next_slack = num_vars;
        let mut next_art = num_vars + n_slack;
        for (i, (a, rel, b)) in rows_in.iter().enumerate() {
            let row = &mut tab[i * cols..(i + 1) * cols];
            match rel {
                Relation::Ge => {
                    let s = next_slack;
                    next_slack += 1;
                    if *b <= 0.0 {
                        for (j, v) in a.iter().enumerate() {
                            row[j] = -v;
                        }
                        row[s] = 1.0;
                        rhs[i] = -b;
                        basis[i] = s;
                    } else {
                        row[..num_vars].copy_from_slice(a);
                        row[s] = -1.0;
                        row[next_art] = 1.0;
                        rhs[i] = *b;
                        basis[i] = next_art;
                        next_art += 1;
                    }
                }
                _ => {
                    let flip = if *b < 0.0 { -1.0 } else { 1.0 };
                    for (j, v) in a.iter().enumerate() {
                        row[j] = flip * v;
                    }
                    row[next_art] = 1.0;
                    rhs[i] = flip * b;
                    basis[i] = next_art;
                    next_art += 1;
                }
            }
        }
        let mut basic_row = vec![None; cols];
        for (i, &j) in basis.iter().enumerate() {
            basic_row[j] = Some(i);
        }
        let bmax = rhs.iter().fold(0.0_f64, |m, v| m.max(v.abs()));

        let mut s = Simplex {
            num_vars,
            rows: m,
            cols,
            tab,
            rhs,
            basis,
            basic_row,
            sign: vec![1.0; num_vars],
            allowed: vec![true; cols],
            cost: vec![0.0; cols],
            cost_rhs: 0.0,
            constraints: constraints.iter().cloned().map(Constraint::canonical).collect(),
            tol,
        };

        if n_art > 0 {
            let art_start = num_vars + n_slack;
            let mut c = vec![0.0; cols];
            for v in c.iter_mut().skip(art_start) {
                *v = 1.0;
            }
            s.set_cost(&c);
            match s.run()? {
                Phase::Optimal => {}
                Phase::Unbounded(_) => {
                    return Err(Error::Resource("phase one reported unbounded".into()))
                }
            }
            let infeas = -s.cost_rhs;
            if infeas > tol * (1.0 + bmax) {
                return Ok(None);
            }
            s.drop_artificials(art_start);
        }
        Ok(Some(s))
    }

    fn set_cost(&mut self, c: &[f64]) {
        self.cost.copy_from_slice(c);
        self.cost_rhs = 0.0;
        for i in 0..self.rows {
            let cb = c[self.basis[i]];
            if cb != 0.0 {
                let row = &self.tab[i * self.cols..(i + 1) * self.cols];
                for (d, t) in self.cost.iter_mut().zip(row) {
                    *d -= cb * t;
                }
                self.cost_rhs -= cb * self.rhs[i];
            }
        }
        for i in 0..self.rows {
            self.cost[self.basis[i]] = 0.0;
        }
    }

    fn drop_artificials(&mut self, art_start: usize) {
        // pivot zero-level artificials out of the basis; rows where that is
        // impossible are linearly dependent and removed
        let mut i = 0;
        while i < self.rows {
            if self.basis[i] >= art_start {
                let row = &self.tab[i * self.cols..(i + 1) * self.cols];
                let mut best = None;
                let mut best_abs = 1e-9;
                for (j, v) in row.iter().enumerate().take(art_start) {
                    if self.basic_row[j].is_none() && v.abs() > best_abs {
                        best_abs = v.abs();
                        best = Some(j);
                    }
                }
                match best {
                    Some(j) => {
                        self.pivot(i, j);
                        self.rhs[i] = self.rhs[i].max(0.0);
                        i += 1;
                    }
                    None => {
                        self.basic_row[self.basis[i]] = None;
                        self.tab.drain(i * self.cols..(i + 1) * self.cols);
                        self.rhs.remove(i);
                        self.basis.remove(i);
                        self.rows -= 1;
                        for (r, &j) in self.basis.iter().enumerate().skip(i) {
                            self.basic_row[j] = Some(r);
                        }
                    }
                }
            } else {
                i += 1;
            }
        }
        // compact the tableau to the structural and slack columns
        let new_cols = art_start;
        let mut tab = Vec::with_capacity(self.rows * new_cols);
        for i in 0..self.rows {
            tab.extend_from_slice(&self.tab[i * self.cols..i * self.cols + new_cols]);
        }
        self.tab = tab;
        self.cols = new_cols;
        self.basic_row.truncate(new_cols);
        self.allowed.truncate(new_cols);
        self.cost = vec![0.0; new_cols];
        self.cost_rhs = 0.0;
    }

    fn is_free(&self, j: usize) -> bool {
        j < self.num_vars
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let cols = self.cols;
        let p = self.tab[r * cols + e];
        {
            let row = &mut self.tab[r * cols..(r + 1) * cols];
            for v in row.iter_mut() {
                *v /= p;
            }
            row[e] = 1.0;
        }
        self.rhs[r] /= p;
        let (before, rest) = self.tab.split_at_mut(r * cols);
        let (prow, after) = rest.split_at_mut(cols);
        let prhs = self.rhs[r];
        let eliminate = |row: &mut [f64], rhs: &mut f64| {
            let f = row[e];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(prow.iter()) {
                    *v -= f * pv;
                }
                row[e] = 0.0;
                *rhs -= f * prhs;
            }
        };
        for (i, row) in before.chunks_mut(cols).enumerate() {
            eliminate(row, &mut self.rhs[i]);
        }
        for (k, row) in after.chunks_mut(cols).enumerate() {
            eliminate(row, &mut self.rhs[r + 1 + k]);
        }
        let f = self.cost[e];
        if f != 0.0 {
            for (v, pv) in self.cost.iter_mut().zip(prow.iter()) {
                *v -= f * pv;
            }
            self.cost[e] = 0.0;
            self.cost_rhs -= f * prhs;
        }
        let old = self.basis[r];
        self.basic_row[old] = None;
        self.basis[r] = e;
        self.basic_row[e] = Some(r);
    }

    fn flip_column(&mut self, j: usize) {
        for i in 0..self.rows {
            self.tab[i * self.cols + j] = -self.tab[i * self.cols + j];
        }
        self.cost[j] = -self.cost[j];
        self.sign[j] = -self.sign[j];
    }

    fn choose_entering(&mut self, bland: bool) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut best_score = 0.0;
        for j in 0..self.cols {
            if !self.allowed[j] || self.basic_row[j].is_some() {
                continue;
            }
            let d = self.cost[j];
            let score = if self.is_free(j) { -d.abs() } else { d };
            if score < -COST_EPS {
                if bland {
                    best = Some(j);
                    break;
                }
                if score < best_score {
                    best_score = score;
                    best = Some(j);
                }
            }
        }
        if let Some(j) = best {
            if self.is_free(j) && self.cost[j] > 0.0 {
                self.flip_column(j);
            }
        }
        best
    }

    fn choose_leaving(&self, e: usize, bland: bool) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for i in 0..self.rows {
            if self.is_free(self.basis[i]) {
                continue;
            }
            let a = self.tab[i * self.cols + e];
            if a > PIVOT_EPS {
                let ratio = self.rhs[i].max(0.0) / a;
                let better = match best {
                    None => true,
                    Some(b) => {
                        let tie = (ratio - best_ratio).abs() <= 1e-12 * (1.0 + best_ratio.abs());
                        if tie {
                            if bland {
                                self.basis[i] < self.basis[b]
                            } else {
                                a > self.tab[b * self.cols + e]
                            }
                        } else {
                            ratio < best_ratio
                        }
                    }
                };
                if better {
                    best = Some(i);
                    best_ratio = ratio;
                }
            }
        }
        best
    }

    fn run(&mut self) -> Result<Phase> {
        let cap = 50 * (self.rows + self.cols) + 1000;
        let mut degenerate = 0usize;
        for _ in 0..cap {
            let bland = degenerate > DEGENERATE_STREAK;
            let Some(e) = self.choose_entering(bland) else {
                return Ok(Phase::Optimal);
            };
            let Some(r) = self.choose_leaving(e, bland) else {
                return Ok(Phase::Unbounded(e));
            };
            let step = self.rhs[r] / self.tab[r * self.cols + e];
            if step.abs() <= 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, e);
        }
        Err(Error::Resource(format!(
            "simplex exceeded {cap} pivots ({} rows, {} columns)",
            self.rows, self.cols
        )))
    }

    /// Current basic solution in the original variables.
    pub fn current_point(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.num_vars];
        for (i, &j) in self.basis.iter().enumerate() {
            if j < self.num_vars {
                x[j] = self.sign[j] * self.rhs[i];
            }
        }
        x
    }

    fn ray_from(&self, e: usize) -> Vec<f64> {
        let mut d = vec![0.0; self.num_vars];
        if e < self.num_vars {
            d[e] = self.sign[e];
        }
        for (i, &j) in self.basis.iter().enumerate() {
            if j < self.num_vars {
                d[j] = -self.sign[j] * self.tab[i * self.cols + e];
            }
        }
        d
    }

    /// Minimizes `objective` over the feasible set, continuing from the
    /// current basis.
    pub fn minimize(&mut self, objective: &[f64]) -> Result<SolveOutcome> {
        if objective.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: objective.len(),
            });
        }
        let mut c = vec![0.0; self.cols];
        for (j, v) in objective.iter().enumerate() {
            c[j] = v * self.sign[j];
        }
        self.set_cost(&c);
        match self.run()? {
            Phase::Optimal => {
                let point = self.current_point();
                self.verify(&point)?;
                let value = dot(objective, &point);
                Ok(SolveOutcome::Optimal { point, value })
            }
            Phase::Unbounded(e) => {
                let ray = self.ray_from(e);
                Ok(SolveOutcome::Unbounded { ray })
            }
        }
    }

    fn verify(&self, x: &[f64]) -> Result<()> {
        for c in &self.constraints {
            // rows with tiny coefficients (constants after substitution) are judged absolutely
            let scale = c.scale().max(1.0);
            let slack = 1e-6 * (1.0 + c.rhs.abs() / scale);
            if c.violation(x) / scale > slack.max(self.tol) {
                return Err(Error::Resource(format!(
                    "numerical breakdown: optimal point violates a row by {:.3e}",
                    c.violation(x)
                )));
            }
        }
        Ok(())
    }
}

enum Phase {
    Optimal,
    Unbounded(usize),
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn lower_bound_is_attained() {
        let lp = LinearProgram::minimize(vec![1.0], vec![Constraint::ge(vec![1.0], 3.0)]);
        match solve(&lp, DEFAULT_TOL).unwrap() {
            SolveOutcome::Optimal { point, value } => {
                assert_abs_diff_eq!(point[0], 3.0, epsilon = 1e-12);
                assert_abs_diff_eq!(value, 3.0, epsilon = 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let lp = LinearProgram::minimize(
            vec![0.0],
            vec![Constraint::ge(vec![1.0], 1.0), Constraint::le(vec![1.0], 0.0)],
        );
        assert_eq!(solve(&lp, DEFAULT_TOL).unwrap(), SolveOutcome::Infeasible);
    }

    #[test]
    fn unbounded_direction_is_reported() {
        let lp = LinearProgram::minimize(vec![-1.0], vec![Constraint::ge(vec![1.0], 0.0)]);
        match solve(&lp, DEFAULT_TOL).unwrap() {
            SolveOutcome::Unbounded { ray } => assert!(ray[0] > 0.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn feasible_point_lies_in_interval() {
        let cons = vec![Constraint::ge(vec![1.0], 0.0), Constraint::le(vec![1.0], 1.0)];
        let out = feasible_point(1, &cons, DEFAULT_TOL).unwrap();
        let x = out.point().unwrap()[0];
        assert!((-1e-12..=1.0 + 1e-12).contains(&x));
    }

    #[test]
    fn equality_rows_and_free_variables() {
        // min x + 2y  s.t. x + y = 4, x - y >= -2, y >= 0
        let lp = LinearProgram::minimize(
            vec![1.0, 2.0],
            vec![
                Constraint::eq(vec![1.0, 1.0], 4.0),
                Constraint::ge(vec![1.0, -1.0], -2.0),
                Constraint::ge(vec![0.0, 1.0], 0.0),
            ],
        );
        match solve(&lp, DEFAULT_TOL).unwrap() {
            SolveOutcome::Optimal { point, value } => {
                assert_abs_diff_eq!(point[0], 4.0, epsilon = 1e-9);
                assert_abs_diff_eq!(point[1], 0.0, epsilon = 1e-9);
                assert_abs_diff_eq!(value, 4.0, epsilon = 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_optimum_needs_column_flip() {
        // min x s.t. x >= -5 (x must become negative)
        let lp = LinearProgram::minimize(vec![1.0], vec![Constraint::ge(vec![1.0], -5.0)]);
        let out = solve(&lp, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(out.point().unwrap()[0], -5.0, epsilon = 1e-12);
    }

    #[test]
    fn maximize_flips_sign_of_value() {
        let lp = LinearProgram::maximize(
            vec![1.0, 1.0],
            vec![
                Constraint::le(vec![1.0, 2.0], 4.0),
                Constraint::le(vec![3.0, 1.0], 6.0),
                Constraint::ge(vec![1.0, 0.0], 0.0),
                Constraint::ge(vec![0.0, 1.0], 0.0),
            ],
        );
        match solve(&lp, DEFAULT_TOL).unwrap() {
            SolveOutcome::Optimal { value, .. } => assert_abs_diff_eq!(value, 2.8, epsilon = 1e-9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn redundant_equalities_are_tolerated() {
        let lp = LinearProgram::minimize(
            vec![1.0, 1.0],
            vec![
                Constraint::eq(vec![1.0, 1.0], 2.0),
                Constraint::eq(vec![2.0, 2.0], 4.0),
                Constraint::ge(vec![1.0, 0.0], 0.5),
                Constraint::ge(vec![0.0, 1.0], 0.5),
            ],
        );
        match solve(&lp, DEFAULT_TOL).unwrap() {
            SolveOutcome::Optimal { value, .. } => assert_abs_diff_eq!(value, 2.0, epsilon = 1e-9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let lp = LinearProgram::minimize(vec![1.0], vec![Constraint::ge(vec![1.0, 2.0], 0.0)]);
        assert!(matches!(solve(&lp, DEFAULT_TOL), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn warm_restart_over_several_objectives() {
        // unit square
        let cons = vec![
            Constraint::ge(vec![1.0, 0.0], 0.0),
            Constraint::le(vec![1.0, 0.0], 1.0),
            Constraint::ge(vec![0.0, 1.0], 0.0),
            Constraint::le(vec![0.0, 1.0], 1.0),
        ];
        let mut s = Simplex::new(2, &cons, DEFAULT_TOL).unwrap().unwrap();
        for (c, want) in [([1.0, 1.0], 0.0), ([-1.0, -1.0], -2.0), ([1.0, -1.0], -1.0)] {
            match s.minimize(&c).unwrap() {
                SolveOutcome::Optimal { value, .. } => assert_abs_diff_eq!(value, want, epsilon = 1e-9),
                other => panic!("{other:?}"),
            }
        }
    }
}
