//! Set equality and containment between representations.

use crate::error::Result;
use crate::linalg::{dot, norm};
use crate::lp::Relation;
use crate::poly::project::{Projection, ProjectionOptions};
use crate::poly::{HRepPolyhedron, PRepPolyhedron, VRepPolyhedron};

/// `V ⊆ H`, decided generator-wise by evaluating every row.
pub fn vrep_within_hrep(v: &VRepPolyhedron, h: &HRepPolyhedron, tol: f64) -> bool {
    if v.is_empty() {
        return true;
    }
    if h.is_infeasible_marker() {
        return false;
    }
    v.points.iter().all(|p| h.satisfies(p, tol))
        && h.constraints().iter().all(|c| {
            let n = norm(&c.coeffs).max(1e-300);
            let dir_ok = |r: &Vec<f64>, both: bool| {
                let s = dot(&c.coeffs, r) / (n * norm(r).max(1e-300));
                if both || c.rel == Relation::Eq {
                    s.abs() <= tol
                } else {
                    s >= -tol
                }
            };
            v.rays.iter().all(|r| dir_ok(r, false)) && v.lines.iter().all(|l| dir_ok(l, true))
        })
}

/// `V ⊆ P` through one feasibility solve per generator.
pub fn vrep_within_prep(v: &VRepPolyhedron, p: &PRepPolyhedron, tol: f64) -> Result<bool> {
    if v.is_empty() {
        return Ok(true);
    }
    for q in &v.points {
        if !p.contains(q, tol)? {
            return Ok(false);
        }
    }
    let cone = p.recession();
    for r in &v.rays {
        if !cone.contains(r, tol)? {
            return Ok(false);
        }
    }
    for l in &v.lines {
        let neg: Vec<f64> = l.iter().map(|x| -x).collect();
        if !cone.contains(l, tol)? || !cone.contains(&neg, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Mutual inclusion of two projected sets.
pub fn projections_equal(a: &Projection, b: &Projection, tol: f64) -> bool {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => true,
        (false, false) => {
            vrep_within_hrep(&a.vrep, &b.hrep, tol) && vrep_within_hrep(&b.vrep, &a.hrep, tol)
        }
        _ => false,
    }
}

/// Whether two P-represented sets coincide (projects both first).
pub fn equal(p: &PRepPolyhedron, q: &PRepPolyhedron, tol: f64, options: &ProjectionOptions) -> Result<bool> {
    if p.ambient_dim() != q.ambient_dim() {
        return Ok(false);
    }
    let a = p.project(options)?;
    let b = q.project(options)?;
    Ok(projections_equal(&a, &b, tol))
}

/// Equality of a P-represented set with an already projected one, using
/// solves on the P side only.
pub fn equal_to_projection(p: &PRepPolyhedron, b: &Projection, tol: f64) -> Result<bool> {
    if b.is_empty() {
        return p.is_empty(tol.min(1e-9));
    }
    if p.is_empty(tol.min(1e-9))? {
        return Ok(false);
    }
    if !vrep_within_prep(&b.vrep, p, tol)? {
        return Ok(false);
    }
    let a = p.project(&ProjectionOptions::default())?;
    Ok(vrep_within_hrep(&a.vrep, &b.hrep, tol))
}
