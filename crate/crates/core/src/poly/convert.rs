//! H ⇄ V conversion through homogenization and double description.

use crate::linalg::{approx_eq_vec, dot, normalized, orthonormal_basis, reject};
use crate::lp::{Constraint, Relation};
use crate::poly::dd::cone_generators;
use crate::poly::{HRepPolyhedron, VRepPolyhedron, DEDUP_TOL};

const HOMOGENEOUS_EPS: f64 = 1e-10;
const TINY: f64 = 1e-11;

/// Irredundant inequality description of `conv(points) + cone(rays) + span(lines)`.
///
/// Works on the dual of the homogenized cone: its lineality gives the affine
/// hull equations, its extreme rays the facets.
pub fn vrep_to_hrep(v: &VRepPolyhedron) -> HRepPolyhedron {
    let d = v.dim;
    if v.is_empty() {
        return HRepPolyhedron::infeasible(d);
    }
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    for p in &v.points {
        let mut row = Vec::with_capacity(d + 1);
        row.push(1.0);
        row.extend_from_slice(p);
        ineqs.push(row);
    }
    for r in &v.rays {
        let mut row = vec![0.0];
        row.extend_from_slice(r);
        ineqs.push(row);
    }
    for l in &v.lines {
        let mut row = vec![0.0];
        row.extend_from_slice(l);
        eqs.push(row);
    }
    let dual = cone_generators(d + 1, &ineqs, &eqs);

    let mut rows: Vec<Constraint> = Vec::new();
    for g in &dual.lines {
        if let Some(c) = dual_row(g, Relation::Eq) {
            rows.push(c);
        }
    }
    let eq_basis = normal_basis(&dual.lines);
    for g in &dual.rays {
        if let Some(c) = dual_row(&reduce_normal(g, &eq_basis), Relation::Ge) {
            if !rows.iter().any(|o| o.rel == c.rel && same_row(o, &c)) {
                rows.push(c);
            }
        }
    }
    HRepPolyhedron::new(d, rows).expect("rows have the right width")
}

/// Dual lineality vectors made orthogonal in their normal part (index 1..).
fn normal_basis(lines: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for l in lines {
        let mut v = l.clone();
        for b in &basis {
            let f = dot(&v[1..], &b[1..]) / dot(&b[1..], &b[1..]);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= f * y);
        }
        if crate::linalg::norm(&v[1..]) > HOMOGENEOUS_EPS * crate::linalg::norm(&v).max(1.0) {
            basis.push(v);
        }
    }
    basis
}

/// Adds lineality to `g` so that its normal is orthogonal to the equations.
fn reduce_normal(g: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut v = g.to_vec();
    for b in basis {
        let f = dot(&v[1..], &b[1..]) / dot(&b[1..], &b[1..]);
        v.iter_mut().zip(b).for_each(|(x, y)| *x -= f * y);
    }
    v
}

fn dual_row(g: &[f64], rel: Relation) -> Option<Constraint> {
    let a = &g[1..];
    let n = crate::linalg::norm(a);
    if n <= HOMOGENEOUS_EPS * crate::linalg::norm(g).max(1.0) {
        return None;
    }
    Some(Constraint::new(
        flush_tiny(a.iter().map(|x| x / n).collect()),
        rel,
        -g[0] / n,
    ))
}

fn same_row(a: &Constraint, b: &Constraint) -> bool {
    approx_eq_vec(&a.coeffs, &b.coeffs, 1e-9) && (a.rhs - b.rhs).abs() <= 1e-9 * (1.0 + a.rhs.abs())
}

/// Vertices (of the pointed part), extreme rays and a lineality basis of an
/// H-described polyhedron. Points and rays are reduced modulo the lineality
/// space so the output is canonical.
pub fn hrep_to_vrep(h: &HRepPolyhedron) -> VRepPolyhedron {
    let d = h.dim();
    if h.is_infeasible_marker() {
        return VRepPolyhedron::empty(d);
    }
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    for c in h.constraints() {
        let mut row = Vec::with_capacity(d + 1);
        row.push(-c.rhs);
        row.extend_from_slice(&c.coeffs);
        match c.rel {
            Relation::Eq => eqs.push(row),
            Relation::Ge => ineqs.push(row),
            Relation::Le => ineqs.push(row.iter().map(|x| -x).collect()),
        }
    }
    let mut t_row = vec![0.0; d + 1];
    t_row[0] = 1.0;
    ineqs.push(t_row);
    let cone = cone_generators(d + 1, &ineqs, &eqs);

    let raw_lines: Vec<Vec<f64>> = cone.lines.iter().map(|l| l[1..].to_vec()).collect();
    let lines = orthonormal_basis(&raw_lines, 1e-9);

    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut rays: Vec<Vec<f64>> = Vec::new();
    for g in &cone.rays {
        let t = g[0];
        if t > HOMOGENEOUS_EPS {
            let p: Vec<f64> = g[1..].iter().map(|x| x / t).collect();
            let p = flush_tiny(reject(&p, &lines));
            if !points.iter().any(|q| approx_eq_vec(q, &p, DEDUP_TOL)) {
                points.push(p);
            }
        } else if let Some(r) = normalized(&flush_tiny(reject(&g[1..], &lines)), 1e-9) {
            if !rays.iter().any(|q| approx_eq_vec(q, &r, 1e-9)) {
                rays.push(r);
            }
        }
    }
    if points.is_empty() {
        return VRepPolyhedron::empty(d);
    }
    VRepPolyhedron {
        dim: d,
        points,
        rays,
        lines,
    }
}

/// Zeroes entries that are round-off relative to the vector's magnitude.
fn flush_tiny(mut v: Vec<f64>) -> Vec<f64> {
    let scale = crate::linalg::norm_inf(&v).max(1.0);
    for x in v.iter_mut() {
        if x.abs() <= TINY * scale {
            *x = 0.0;
        }
    }
    v
}
