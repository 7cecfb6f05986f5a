use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{approx_eq_vec, dot, norm, reject};
use crate::poly::project::Projection;

/// A minimal face `{point} + span(lineality)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceRep {
    pub point: Vec<f64>,
    pub lineality: Vec<Vec<f64>>,
}

impl FaceRep {
    /// Whether `y` lies on the face, i.e. `y - point ∈ span(lineality)` within `tol`
    /// (relative to the magnitude of the coordinates).
    pub fn meets(&self, y: &[f64], tol: f64) -> bool {
        let diff: Vec<f64> = y.iter().zip(&self.point).map(|(a, b)| a - b).collect();
        let residual = reject(&diff, &self.lineality);
        let scale = 1.0 + norm(y).max(norm(&self.point));
        norm(&residual) <= tol * scale
    }

    pub fn is_vertex(&self) -> bool {
        self.lineality.is_empty()
    }
}

/// Minimal faces of a nonempty polyhedron: its vertices when pointed,
/// otherwise one `{v} + L` per vertex of the quotient by the lineality space `L`
/// (representatives orthogonal to `L`).
pub fn minimal_faces(p: &Projection, tol: f64) -> Result<Vec<FaceRep>> {
    if p.is_empty() {
        return Err(Error::EmptyInput("minimal faces of an empty polyhedron".into()));
    }
    let lines = &p.vrep.lines;
    debug_assert!(lines
        .iter()
        .enumerate()
        .all(|(i, a)| lines[..i].iter().all(|b| dot(a, b).abs() < 1e-8)));
    let mut faces: Vec<FaceRep> = Vec::new();
    for v in &p.vrep.points {
        let point = reject(v, lines);
        if !faces.iter().any(|f| approx_eq_vec(&f.point, &point, tol)) {
            faces.push(FaceRep {
                point,
                lineality: lines.clone(),
            });
        }
    }
    Ok(faces)
}
