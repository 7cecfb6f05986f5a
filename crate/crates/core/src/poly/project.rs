//! Turning a P-representation into H- and V-representations.
//!
//! Two independent routes are available: Fourier-Motzkin elimination of the
//! auxiliary variables (with LP-based redundancy removal after every step),
//! and an LP-driven inner approximation that grows `conv(points) + cone(rays)`
//! until every facet of the approximation is supported by the set.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{approx_eq_vec, normalized};
use crate::lp::{Constraint, Relation, Simplex, SolveOutcome, DEFAULT_TOL};
use crate::poly::convert::{hrep_to_vrep, vrep_to_hrep};
use crate::poly::{HRepPolyhedron, PRepPolyhedron, VRepPolyhedron, DEDUP_TOL};

/// Auxiliary dimension up to which `Auto` prefers Fourier-Motzkin.
pub const FM_AUX_LIMIT: usize = 8;
/// Ambient dimension up to which the LP hull route is available.
pub const LP_HULL_MAX_DIM: usize = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionStrategy {
    #[default]
    Auto,
    FourierMotzkin,
    LpHull,
}

impl FromStr for ProjectionStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(Self::Auto),
            "fm" | "fourier_motzkin" | "fourier-motzkin" => Ok(Self::FourierMotzkin),
            "lp_hull" | "lp-hull" | "lp" => Ok(Self::LpHull),
            other => Err(Error::Unsupported(format!("projection strategy '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionOptions {
    pub strategy: ProjectionStrategy,
    pub tol: f64,
    /// Row cap for intermediate Fourier-Motzkin systems.
    pub max_rows: usize,
    /// Round cap for the LP hull refinement.
    pub max_rounds: usize,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        Self {
            strategy: ProjectionStrategy::Auto,
            tol: DEFAULT_TOL,
            max_rows: 1000,
            max_rounds: 400,
        }
    }
}

impl ProjectionOptions {
    pub fn with_strategy(strategy: ProjectionStrategy) -> Self {
        Self {
            strategy,
            ..Self::default()
        }
    }
}

/// Both descriptions of the projected set; `hrep` is irredundant and `vrep`
/// lists lineality separately.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    pub hrep: HRepPolyhedron,
    pub vrep: VRepPolyhedron,
}

impl Projection {
    pub fn empty(dim: usize) -> Self {
        Self {
            hrep: HRepPolyhedron::infeasible(dim),
            vrep: VRepPolyhedron::empty(dim),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vrep.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vrep.dim
    }

    /// Canonical pair for an H-described set.
    pub fn from_hrep(h: &HRepPolyhedron) -> Self {
        let vrep = hrep_to_vrep(h);
        if vrep.is_empty() {
            return Self::empty(h.dim());
        }
        let hrep = vrep_to_hrep(&vrep);
        Self { hrep, vrep }
    }

    /// Canonical pair for a V-described set.
    pub fn from_vrep(v: &VRepPolyhedron) -> Self {
        if v.is_empty() {
            return Self::empty(v.dim);
        }
        Self::from_hrep(&vrep_to_hrep(v))
    }
}

pub fn project(p: &PRepPolyhedron, options: &ProjectionOptions) -> Result<Projection> {
    let d = p.ambient_dim();
    match options.strategy {
        ProjectionStrategy::FourierMotzkin => fourier_motzkin(p, options),
        ProjectionStrategy::LpHull => {
            if d > LP_HULL_MAX_DIM {
                return Err(Error::Unsupported(format!(
                    "lp_hull projection needs ambient dimension <= {LP_HULL_MAX_DIM}, got {d}"
                )));
            }
            lp_hull(p, options)
        }
        ProjectionStrategy::Auto => {
            if p.aux_dim() == 0 {
                fourier_motzkin(p, options)
            } else if p.aux_dim() <= FM_AUX_LIMIT || d > LP_HULL_MAX_DIM {
                match fourier_motzkin(p, options) {
                    Err(Error::Resource(_)) if d <= LP_HULL_MAX_DIM => lp_hull(p, options),
                    other => other,
                }
            } else {
                lp_hull(p, options)
            }
        }
    }
}

#[derive(Clone, Debug)]
struct Row {
    a: Vec<f64>,
    eq: bool,
    b: f64,
}

impl Row {
    /// Scales to unit max-coefficient; `Err(())` for an unsatisfiable constant row,
    /// `Ok(None)` for a trivially true one.
    fn normalize(mut self, tol: f64) -> std::result::Result<Option<Row>, ()> {
        let s = self.a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if s <= 1e-12 {
            let ok = if self.eq { self.b.abs() <= tol } else { self.b <= tol };
            return if ok { Ok(None) } else { Err(()) };
        }
        self.a.iter_mut().for_each(|v| *v /= s);
        self.b /= s;
        for v in self.a.iter_mut() {
            if v.abs() < 1e-13 {
                *v = 0.0;
            }
        }
        Ok(Some(self))
    }

    fn to_constraint(&self) -> Constraint {
        Constraint::new(
            self.a.clone(),
            if self.eq { Relation::Eq } else { Relation::Ge },
            self.b,
        )
    }
}

fn fourier_motzkin(p: &PRepPolyhedron, options: &ProjectionOptions) -> Result<Projection> {
    let d = p.ambient_dim();
    let tol = options.tol;
    let mut rows: Vec<Row> = Vec::new();
    for c in p.constraints() {
        let row = Row {
            a: c.coeffs.clone(),
            eq: c.rel == Relation::Eq,
            b: c.rhs,
        };
        match row.normalize(tol) {
            Ok(Some(r)) => rows.push(r),
            Ok(None) => {}
            Err(()) => return Ok(Projection::empty(d)),
        }
    }
    let mut cols = p.num_cols();

    while cols > d {
        // prefer substitution through an equality
        let mut pivot: Option<(usize, usize)> = None;
        let mut best = 1e-9;
        for (i, r) in rows.iter().enumerate().filter(|(_, r)| r.eq) {
            for j in d..cols {
                if r.a[j].abs() > best {
                    best = r.a[j].abs();
                    pivot = Some((i, j));
                }
            }
        }
        let j;
        if let Some((ei, ej)) = pivot {
            j = ej;
            let e = rows.remove(ei);
            for r in rows.iter_mut() {
                let f = r.a[j] / e.a[j];
                if f != 0.0 {
                    for (ra, ea) in r.a.iter_mut().zip(&e.a) {
                        *ra -= f * ea;
                    }
                    r.a[j] = 0.0;
                    r.b -= f * e.b;
                }
            }
        } else {
            j = (d..cols)
                .min_by_key(|&j| {
                    let pos = rows.iter().filter(|r| r.a[j] > 0.0).count();
                    let neg = rows.iter().filter(|r| r.a[j] < 0.0).count();
                    (pos * neg) as i64 - (pos + neg) as i64
                })
                .expect("at least one auxiliary column");
            let (pos, rest): (Vec<Row>, Vec<Row>) = rows.into_iter().partition(|r| r.a[j] > 0.0);
            let (neg, zero): (Vec<Row>, Vec<Row>) = rest.into_iter().partition(|r| r.a[j] < 0.0);
            let mut next = zero;
            for rp in &pos {
                for rn in &neg {
                    let (cp, cn) = (rp.a[j], -rn.a[j]);
                    let a: Vec<f64> = rp.a.iter().zip(&rn.a).map(|(x, y)| cn * x + cp * y).collect();
                    next.push(Row {
                        a,
                        eq: false,
                        b: cn * rp.b + cp * rn.b,
                    });
                }
            }
            rows = next;
        }
        for r in rows.iter_mut() {
            r.a.remove(j);
        }
        cols -= 1;

        let mut cleaned: Vec<Row> = Vec::with_capacity(rows.len());
        for r in rows {
            match r.normalize(tol) {
                Ok(Some(r)) => {
                    if let Some(o) = cleaned
                        .iter_mut()
                        .find(|o| o.eq == r.eq && approx_eq_vec(&o.a, &r.a, 1e-12))
                    {
                        if !r.eq {
                            o.b = o.b.max(r.b);
                        } else if (o.b - r.b).abs() > tol * (1.0 + o.b.abs()) {
                            return Ok(Projection::empty(d));
                        }
                    } else {
                        cleaned.push(r);
                    }
                }
                Ok(None) => {}
                Err(()) => return Ok(Projection::empty(d)),
            }
        }
        if cleaned.len() > options.max_rows {
            return Err(Error::Resource(format!(
                "Fourier-Motzkin system grew to {} rows (cap {})",
                cleaned.len(),
                options.max_rows
            )));
        }
        match remove_redundant(cleaned, cols, tol)? {
            Some(r) => rows = r,
            None => return Ok(Projection::empty(d)),
        }
    }

    let h = HRepPolyhedron::new(d, rows.iter().map(Row::to_constraint).collect())?;
    Ok(Projection::from_hrep(&h))
}

/// Drops inequalities implied by the remaining rows. `None` if the system is infeasible.
fn remove_redundant(mut rows: Vec<Row>, cols: usize, tol: f64) -> Result<Option<Vec<Row>>> {
    if rows.is_empty() {
        return Ok(Some(rows));
    }
    if cols == 0 {
        return Ok(Some(rows));
    }
    let mut i = 0;
    while i < rows.len() {
        if rows[i].eq {
            i += 1;
            continue;
        }
        let others: Vec<Constraint> = rows
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, r)| r.to_constraint())
            .collect();
        let Some(mut s) = Simplex::new(cols, &others, tol)? else {
            // the rest already is infeasible, hence so is the whole system
            return Ok(None);
        };
        let redundant = match s.minimize(&rows[i].a)? {
            SolveOutcome::Optimal { value, .. } => value >= rows[i].b - tol * (1.0 + rows[i].b.abs()),
            _ => false,
        };
        if redundant {
            rows.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(Some(rows))
}

fn lp_hull(p: &PRepPolyhedron, options: &ProjectionOptions) -> Result<Projection> {
    let d = p.ambient_dim();
    let nv = p.num_cols();
    let Some(mut simplex) = Simplex::new(nv, p.constraints(), options.tol)? else {
        return Ok(Projection::empty(d));
    };
    let accept = (options.tol * 10.0).max(1e-10);
    let mut points: Vec<Vec<f64>> = vec![simplex.current_point()[..d].to_vec()];
    let mut rays: Vec<Vec<f64>> = Vec::new();
    let mut confirmed: Vec<Constraint> = Vec::new();

    for _ in 0..options.max_rounds {
        let inner = VRepPolyhedron {
            dim: d,
            points: points.clone(),
            rays: rays.clone(),
            lines: Vec::new(),
        };
        let h = vrep_to_hrep(&inner);
        let mut grew = false;
        for c in h.constraints() {
            if confirmed.iter().any(|o| same_row(o, c)) {
                continue;
            }
            let mut directions = vec![(c.coeffs.clone(), c.rhs)];
            if c.rel == Relation::Eq {
                directions.push((c.coeffs.iter().map(|v| -v).collect(), -c.rhs));
            }
            let mut supported = true;
            for (dir, beta) in directions {
                let mut objective = dir.clone();
                objective.resize(nv, 0.0);
                match simplex.minimize(&objective)? {
                    SolveOutcome::Unbounded { ray } => {
                        supported = false;
                        if let Some(r) = normalized(&ray[..d], 1e-12) {
                            if !rays.iter().any(|q| approx_eq_vec(q, &r, 1e-10)) {
                                rays.push(r);
                                grew = true;
                            }
                        }
                    }
                    SolveOutcome::Optimal { point, value } => {
                        if value < beta - accept * (1.0 + beta.abs()) {
                            supported = false;
                            let y = point[..d].to_vec();
                            if !points.iter().any(|q| approx_eq_vec(q, &y, 1e-12)) {
                                points.push(y);
                                grew = true;
                            }
                        }
                    }
                    SolveOutcome::Infeasible => unreachable!("phase one succeeded"),
                }
            }
            if supported {
                confirmed.push(c.clone());
            }
        }
        if !grew {
            let vrep = hrep_to_vrep(&h);
            return Ok(if vrep.is_empty() {
                Projection::empty(d)
            } else {
                Projection { hrep: h, vrep }
            });
        }
        dedup_points(&mut points);
    }
    Err(Error::Resource(format!(
        "lp_hull did not stabilize within {} rounds",
        options.max_rounds
    )))
}

fn dedup_points(points: &mut Vec<Vec<f64>>) {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for p in points.drain(..) {
        if !out.iter().any(|q| approx_eq_vec(q, &p, DEDUP_TOL * 1e-3)) {
            out.push(p);
        }
    }
    *points = out;
}

fn same_row(a: &Constraint, b: &Constraint) -> bool {
    a.rel == b.rel
        && approx_eq_vec(&a.coeffs, &b.coeffs, 1e-9)
        && (a.rhs - b.rhs).abs() <= 1e-9 * (1.0 + a.rhs.abs())
}
